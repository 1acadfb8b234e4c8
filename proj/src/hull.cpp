#include <algorithm>
#include <cmath>
#include <limits>

#include "conelab/linalg.hpp"

namespace conelab {
namespace {

// Weights of the minimum-norm point of the affine hull of the active set.
Vector affine_min_norm(const Matrix& active) {
  const Eigen::Index s = active.cols();
  Matrix kkt = Matrix::Zero(s + 1, s + 1);
  kkt.topLeftCorner(s, s) = active.transpose() * active;
  kkt.block(0, s, s, 1).setOnes();
  kkt.block(s, 0, 1, s).setOnes();
  Vector rhs = Vector::Zero(s + 1);
  rhs(s) = 1.0;
  Vector sol = kkt.fullPivLu().solve(rhs);
  return sol.head(s);
}

}  // namespace

HullResult origin_in_hull(const std::vector<Vector>& points,
                          const HullOptions& options) {
  if (points.empty()) throw ArgumentError("origin_in_hull: empty point list");
  if (!(options.eps > 0)) throw ArgumentError("origin_in_hull: eps must be positive");
  const Eigen::Index dim = points.front().size();
  const Eigen::Index count = static_cast<Eigen::Index>(points.size());
  Matrix P(dim, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    if (points[i].size() != dim) {
      throw ArgumentError("origin_in_hull: points have different dimensions");
    }
    P.col(i) = points[i];
  }
  const double scale = P.colwise().squaredNorm().maxCoeff();
  if (!(scale > 0)) throw ArgumentError("origin_in_hull: all points are zero");

  constexpr double kWeightTol = 1e-14;
  constexpr double kGapTol = 1e-12;

  Eigen::Index start = 0;
  P.colwise().squaredNorm().minCoeff(&start);
  std::vector<Eigen::Index> active{start};
  Vector weights = Vector::Ones(1);
  Vector x = P.col(start);

  auto active_matrix = [&] {
    Matrix m(dim, static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) m.col(i) = P.col(active[i]);
    return m;
  };

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const double xx = x.squaredNorm();
    if (std::sqrt(xx) <= options.eps * 1e-3) break;
    Eigen::Index j = 0;
    const double best = (x.transpose() * P).minCoeff(&j);
    if (xx - best <= kGapTol * xx) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    if (static_cast<Eigen::Index>(active.size()) > dim) break;
    active.push_back(j);
    weights.conservativeResize(weights.size() + 1);
    weights(weights.size() - 1) = 0.0;

    for (int minor = 0; minor <= dim + 1; ++minor) {
      const Matrix S = active_matrix();
      const Vector mu = affine_min_norm(S);
      if ((mu.array() > kWeightTol).all()) {
        weights = mu;
        x = S * weights;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (mu(i) <= kWeightTol) {
          const double denom = weights(i) - mu(i);
          if (denom > 0) theta = std::min(theta, weights(i) / denom);
        }
      }
      weights = (1.0 - theta) * weights + theta * mu;
      std::vector<Eigen::Index> kept;
      std::vector<double> kept_w;
      for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (weights(i) > kWeightTol) {
          kept.push_back(active[i]);
          kept_w.push_back(weights(i));
        }
      }
      if (kept.empty()) {
        // Numerical collapse; restart from the best single point.
        kept.push_back(j);
        kept_w.push_back(1.0);
      }
      active = kept;
      weights = Eigen::Map<Vector>(kept_w.data(), static_cast<Eigen::Index>(kept_w.size()));
      weights /= weights.sum();
      x = active_matrix() * weights;
    }
  }

  HullResult result;
  const double xnorm = x.norm();
  if (xnorm <= options.eps) {
    result.inside = true;
    result.coefficients = Vector::Zero(count);
    for (std::size_t i = 0; i < active.size(); ++i) {
      result.coefficients(active[i]) = std::max(0.0, weights(i));
    }
    result.coefficients /= result.coefficients.sum();
    result.residual = (P * result.coefficients).norm();
  } else {
    result.inside = false;
    result.witness = x / x.squaredNorm();
    result.min_witness_value = (result.witness.transpose() * P).minCoeff();
  }
  if (!verify_hull_result(points, result, options)) {
    throw ConsistencyError("origin_in_hull: certificate failed self-check");
  }
  return result;
}

bool verify_hull_result(const std::vector<Vector>& points,
                        const HullResult& result, const HullOptions& options) {
  if (points.empty()) return false;
  if (result.inside) {
    if (result.coefficients.size() != static_cast<Eigen::Index>(points.size())) {
      return false;
    }
    if ((result.coefficients.array() < 0).any()) return false;
    if (std::abs(result.coefficients.sum() - 1.0) > 1e-9) return false;
    Vector sum = Vector::Zero(points.front().size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      sum += result.coefficients(static_cast<Eigen::Index>(i)) * points[i];
    }
    return sum.norm() <= options.eps;
  }
  if (result.witness.size() != points.front().size()) return false;
  for (const Vector& p : points) {
    if (!(result.witness.dot(p) >= options.margin)) return false;
  }
  return true;
}

}  // namespace conelab
