#pragma once

// Invariant orthants of linear flows, in R^d and in the exterior powers.
//
// The closed orthant {sigma_i x_i >= 0} is invariant under e^{tX}, t >= 0,
// iff sigma_i sigma_j x_ij >= 0 for all i != j (cross-positivity). Orthants
// are identified modulo a global sign, so patterns start with +1.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "conelab/linalg.hpp"
#include "conelab/system.hpp"

namespace conelab {

inline constexpr double kOrthantTol = 1e-9;
inline constexpr int kMaxOrthantDimension = 70;
inline constexpr std::size_t kMaxOrthantPatterns = std::size_t{1} << 16;

struct SignPattern {
  std::vector<int> signs;

  /// Flips globally if needed so that signs[0] == +1; throws ArgumentError
  /// on entries other than +-1.
  static SignPattern normalized(std::vector<int> signs);
  static SignPattern all_plus(int n) { return SignPattern{std::vector<int>(n, 1)}; }

  int size() const { return static_cast<int>(signs.size()); }
  std::string to_string() const;
  bool operator==(const SignPattern&) const = default;
};

/// Lexicographic with + ordered before -.
bool pattern_less(const SignPattern& a, const SignPattern& b);

struct CrossCheck {
  bool ok = false;
  double slack = 0.0;  ///< min over i != j of sigma_i sigma_j x_ij
  int worst_i = -1;    ///< 1-based location of the minimum
  int worst_j = -1;
};

/// sigma_i sigma_j x_ij >= -tol for all i != j.
CrossCheck cross_positive(const Matrix& X, const SignPattern& sigma, double tol = kOrthantTol);

/// An odd cycle of sign constraints: along `cycle` every consecutive pair
/// (and the closing pair) has a forced product sigma_a sigma_b. The pair
/// (i, j) is forced to `direct_sign` by its own entry and to the opposite
/// sign by the rest of the cycle.
struct SignConflict {
  std::vector<int> cycle;  ///< 1-based
  int i = 0;
  int j = 0;
  int direct_sign = 0;
  int path_sign = 0;
  std::string to_string() const;
};

struct OrthantSearch {
  std::vector<SignPattern> patterns;  ///< sorted by pattern_less
  std::optional<SignConflict> conflict;
};

/// All orthants invariant under every matrix in `generators`, by sign
/// propagation over the graph of entries with |x_ij| > tol. Throws
/// CapacityError when more than `max_patterns` orthants qualify and
/// ArgumentError when the dimension exceeds kMaxOrthantDimension.
OrthantSearch find_invariant_orthants(const std::vector<Matrix>& generators,
                                      double tol = kOrthantTol,
                                      std::size_t max_patterns = kMaxOrthantPatterns);

std::vector<SignPattern> invariant_orthants(const Matrix& X, double tol = kOrthantTol);

struct OrthantCertificate {
  int k = 0;
  SignPattern pattern;
  double slack = 0.0;
  bool operator==(const OrthantCertificate&) const = default;
};

/// Matrices whose common cross-positivity certifies an invariant orthant of
/// the k-th exterior power, plus for unbounded controls the additive
/// compound of B whose off-diagonal part must vanish.
struct OrthantConstraints {
  std::vector<Matrix> generators;
  std::optional<Matrix> must_be_diagonal;
};

OrthantConstraints orthant_constraints(const SystemSpec& spec, int k);

/// Every orthant of the k-th exterior power that is invariant under the
/// whole system semigroup.
std::vector<OrthantCertificate> family_invariant_orthants(const SystemSpec& spec, int k,
                                                          double tol = kOrthantTol);

bool verify_orthant_certificate(const SystemSpec& spec, const OrthantCertificate& cert,
                                double tol = kOrthantTol);

}  // namespace conelab
