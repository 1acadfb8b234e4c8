#include "conelab/larc.hpp"

#include <sstream>

namespace conelab {
namespace {

Matrix normalized(const Matrix& X) {
  const double n = X.norm();
  return n > 0 ? Matrix(X / n) : X;
}

/// [X, Y], or zero when its norm is at rounding level relative to the
/// operands.
Matrix bracket_or_zero(const Matrix& X, const Matrix& Y, double eps) {
  Matrix Z = bracket(X, Y);
  if (Z.norm() <= eps * X.norm() * Y.norm()) Z.setZero();
  return Z;
}

void check_pair(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw ArgumentError("larc: A and B must be square of the same size");
  }
  if (std::abs(A.trace()) > 1e-9 || std::abs(B.trace()) > 1e-9) {
    throw ArgumentError("larc: A and B must be traceless (elements of sl(d,R))");
  }
}

}  // namespace

bool linearly_independent(const std::vector<Matrix>& elements, double eps) {
  if (elements.empty()) return true;
  const Eigen::Index len = elements.front().size();
  Matrix rows(static_cast<Eigen::Index>(elements.size()), len);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const Matrix e = normalized(elements[i]);
    rows.row(static_cast<Eigen::Index>(i)) = e.reshaped().transpose();
  }
  return rank_tol(rows, eps) == static_cast<int>(elements.size());
}

Algorithm1Result larc_algorithm1_run(const Matrix& A, const Matrix& B, int dim_target,
                                     const Algorithm1Options& options) {
  check_pair(A, B);
  if (dim_target < 3) throw ArgumentError("larc: dim_target must be at least 3");

  Algorithm1Result result;
  result.basis.dim_target = dim_target;
  auto& C = result.basis.generators;
  C = {normalized(A), normalized(B), normalized(bracket_or_zero(A, B, options.eps))};
  ++result.steps;
  if (!linearly_independent(C, options.eps)) return result;

  // next_trial[k] is the 1-based index of the next element to bracket with
  // C_k when the search is (re)entered at level k.
  std::vector<int> next_trial(static_cast<std::size_t>(dim_target) + 2, 0);
  next_trial[3] = 2;

  while (static_cast<int>(C.size()) < dim_target) {
    const int k = static_cast<int>(C.size());
    int j = next_trial[k];
    Matrix candidate;
    bool found = false;
    for (; j >= 1; --j) {
      if (++result.steps > options.max_steps) {
        result.step_limit_hit = true;
        return result;
      }
      candidate = normalized(bracket_or_zero(C[j - 1], C[k - 1], options.eps));
      std::vector<Matrix> trial = C;
      trial.push_back(candidate);
      if (linearly_independent(trial, options.eps)) {
        found = true;
        break;
      }
    }
    if (!found) {
      if (k == 3) return result;
      C.pop_back();
      if (k - 1 == 3) return result;
      continue;
    }
    next_trial[k] = j - 1;
    C.push_back(candidate);
    next_trial[k + 1] = k;
  }
  result.full = true;
  return result;
}

bool larc_algorithm1(const Matrix& A, const Matrix& B, int dim_target) {
  return larc_algorithm1_run(A, B, dim_target).full;
}

bool larc_algorithm1_literal(const Matrix& A, const Matrix& B, int dim_target,
                             std::vector<std::string>* trace) {
  check_pair(A, B);
  auto log = [&](const std::string& line) {
    if (trace) trace->push_back(line);
  };
  std::vector<Matrix> C = {A, B, bracket_or_zero(A, B, kLarcEps)};
  if (!linearly_independent(C)) {
    log("initial set dependent: return false");
    return false;
  }
  int k = 3;
  while (k <= dim_target) {
    int j = k - 1;
    auto extended = [&](int jj) {
      std::vector<Matrix> trial = C;
      trial.push_back(bracket_or_zero(C[jj - 1], C[k - 1], kLarcEps));
      return trial;
    };
    while (!linearly_independent(extended(j)) && j > 3) --j;
    std::ostringstream os;
    os << "k=" << k << " j=" << j;
    if (j == 3) {
      C.erase(C.begin() + (k - 1));
      --k;
      os << ": removed C_" << k + 1;
    } else {
      C.push_back(bracket_or_zero(C[j - 1], C[k - 1], kLarcEps));
      ++k;
      os << ": appended [C_" << j << ",C_" << k - 1 << "]";
    }
    log(os.str());
    if (k == 3) {
      log("k fell back to 3: return false");
      return false;
    }
  }
  log("k exceeded dim: return true");
  return true;
}

int bracket_closure_dim(const Matrix& A, const Matrix& B, double eps) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw ArgumentError("bracket_closure_dim: A and B must be square of the same size");
  }
  std::vector<Matrix> basis;
  auto try_add = [&](const Matrix& X) {
    if (X.norm() == 0.0) return;
    std::vector<Matrix> trial = basis;
    trial.push_back(normalized(X));
    if (linearly_independent(trial, eps)) basis.push_back(trial.back());
  };
  try_add(A);
  try_add(B);
  // Every pair (i, j), j < i, is bracketed exactly once; new elements are
  // appended and visited later.
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) try_add(bracket_or_zero(basis[i], basis[j], eps));
  }
  return static_cast<int>(basis.size());
}

}  // namespace conelab
