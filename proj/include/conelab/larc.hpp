#pragma once

// Lie algebra rank condition for the pair (A, B).

#include <string>
#include <vector>

#include "conelab/linalg.hpp"

namespace conelab {

/// Linear-independence tolerance for vectorized matrices.
inline constexpr double kLarcEps = 1e-9;

/// The working set of bracket generators kept by Algorithm 1.
struct BracketBasis {
  std::vector<Matrix> generators;
  int dim_target = 0;
};

struct Algorithm1Result {
  bool full = false;  ///< dim_target independent elements were found
  BracketBasis basis;
  long steps = 0;     ///< independence tests performed
  bool step_limit_hit = false;
};

struct Algorithm1Options {
  double eps = kLarcEps;
  long max_steps = 200000;
};

/// True iff the vectorized matrices are linearly independent under
/// rank_tol(., eps).
bool linearly_independent(const std::vector<Matrix>& elements, double eps = kLarcEps);

/// Algorithm 1 with backtracking.
///
/// Starts from C = {A, B, [A, B]}. The newest element C_k is bracketed with
/// C_{k-1}, C_{k-2}, ..., C_1 in that order and the first bracket that keeps
/// C independent is appended. When no bracket of C_k works, C_k is removed
/// and the search resumes at C_{k-1} with its next trial element. Returns
/// false as soon as the search falls back to the initial triple.
Algorithm1Result larc_algorithm1_run(const Matrix& A, const Matrix& B, int dim_target,
                                     const Algorithm1Options& options = {});

/// Throws ArgumentError unless A and B are square, of equal size and
/// traceless within 1e-9.
bool larc_algorithm1(const Matrix& A, const Matrix& B, int dim_target);

/// The pseudocode transcribed without repair. The inner search
/// stops at j = 3 and "j = 3" is then read as failure, so any run that
/// reaches k = 4 returns false. Kept to document that behavior.
bool larc_algorithm1_literal(const Matrix& A, const Matrix& B, int dim_target,
                             std::vector<std::string>* trace = nullptr);

/// Dimension of the Lie algebra generated by A and B: the span of A, B is
/// closed under brackets until no new independent element appears.
int bracket_closure_dim(const Matrix& A, const Matrix& B, double eps = kLarcEps);

}  // namespace conelab
