#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

#include "conelab/errors.hpp"

namespace conelab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Induced 1-norm (max column sum).
template <typename Derived>
typename Derived::Scalar norm1(const Eigen::MatrixBase<Derived>& X) {
  return X.cwiseAbs().colwise().sum().maxCoeff();
}

/// exp(X) by scaling and squaring around a truncated Taylor core.
///
/// X is scaled by 2^-s so that |X|_1 <= 1/2, the series is truncated at the
/// first order whose remainder bound drops below tol/8, and the result is
/// squared s times.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> mat_exp(
    const Eigen::MatrixBase<Derived>& X, typename Derived::Scalar tol = 1e-10) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (X.rows() != X.cols()) throw ArgumentError("mat_exp: matrix must be square");
  const Eigen::Index n = X.rows();
  const Scalar nrm = n == 0 ? Scalar(0) : norm1(X);
  if (!std::isfinite(static_cast<double>(nrm))) {
    throw ArgumentError("mat_exp: non-finite entries");
  }
  int squarings = 0;
  if (nrm > Scalar(0.5)) {
    squarings = static_cast<int>(std::ceil(std::log2(static_cast<double>(nrm) / 0.5)));
  }
  const Mat Y = X / std::ldexp(Scalar(1), squarings);

  // Remainder of the order-m series for |Y| <= 1/2 is below
  // 2 * (1/2)^(m+1) / (m+1)!.
  int order = 1;
  Scalar bound = Scalar(0.5);
  while (Scalar(2) * bound * Scalar(0.5) / Scalar(order + 1) > tol / Scalar(8) &&
         order < 30) {
    bound = bound * Scalar(0.5) / Scalar(order + 1);
    ++order;
  }

  Mat result = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int m = 1; m <= order; ++m) {
    term = (term * Y) / Scalar(m);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

/// Number of pivots with magnitude above eps * max(1, max|m_ij|) under
/// Gaussian elimination with partial (row) pivoting.
template <typename Derived>
int rank_tol(const Eigen::MatrixBase<Derived>& M, double eps) {
  using Scalar = typename Derived::Scalar;
  if (!(eps > 0)) throw ArgumentError("rank_tol: eps must be positive");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> W = M;
  const Eigen::Index rows = W.rows(), cols = W.cols();
  if (rows == 0 || cols == 0) return 0;
  const Scalar threshold =
      Scalar(eps) * std::max<Scalar>(Scalar(1), W.cwiseAbs().maxCoeff());
  int rank = 0;
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index pivot = rank;
    W.col(c).tail(rows - rank).cwiseAbs().maxCoeff(&pivot);
    pivot += rank;
    if (std::abs(W(pivot, c)) <= threshold) continue;
    W.row(pivot).swap(W.row(rank));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      const Scalar f = W(r, c) / W(rank, c);
      W.row(r).tail(cols - c) -= f * W.row(rank).tail(cols - c);
    }
    ++rank;
  }
  return rank;
}

/// Lie bracket XY - YX.
template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> bracket(
    const Eigen::MatrixBase<DA>& X, const Eigen::MatrixBase<DB>& Y) {
  if (X.rows() != X.cols() || Y.rows() != Y.cols() || X.rows() != Y.rows()) {
    throw ArgumentError("bracket: operands must be square of the same size");
  }
  return X * Y - Y * X;
}

/// Outcome of the origin-in-convex-hull test.
///
/// When `inside`, `coefficients` are convex weights (one per input point)
/// whose combination has norm at most the requested eps. Otherwise
/// `witness` is a functional with witness . w_i >= margin for every point.
struct HullResult {
  bool inside = false;
  Vector coefficients;
  Vector witness;
  double residual = 0.0;  ///< |sum c_i w_i| when inside
  double min_witness_value = 0.0;  ///< min_i witness . w_i when outside
};

struct HullOptions {
  double eps = 1e-7;
  double margin = 1e-9;
  int max_iterations = 100000;
};

/// Decides whether the origin lies in conv{points} (within `eps`) using
/// Wolfe's minimum-norm-point method. The returned certificate is checked
/// before returning; a certificate that fails its own check throws
/// ConsistencyError.
HullResult origin_in_hull(const std::vector<Vector>& points,
                          const HullOptions& options = {});

/// Re-checks a HullResult against the points it was computed from.
bool verify_hull_result(const std::vector<Vector>& points,
                        const HullResult& result, const HullOptions& options = {});

}  // namespace conelab
