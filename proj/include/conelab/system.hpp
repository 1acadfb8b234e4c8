#pragma once

// The bilinear system x' = Ax + uBx and words in its semigroup.

#include <cstdint>
#include <variant>
#include <vector>

#include "conelab/linalg.hpp"

namespace conelab {

struct UnboundedControl {
  bool operator==(const UnboundedControl&) const = default;
};
struct ControlSet {
  std::vector<double> values;
  bool operator==(const ControlSet&) const = default;
};
struct ControlInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const ControlInterval&) const = default;
};

/// Admissible control values u.
using ControlModel = std::variant<UnboundedControl, ControlSet, ControlInterval>;

/// True when the admissible set equals its mirror image -U.
bool is_symmetric(const ControlModel& model);

struct SystemSpec {
  int d = 0;
  Matrix A;
  Matrix B;
  ControlModel u_model = UnboundedControl{};
  std::uint64_t rng_seed = 42;

  Matrix generator(double u) const { return A + u * B; }
};

bool operator==(const SystemSpec& a, const SystemSpec& b);

/// Throws ArgumentError unless d >= 2, A and B are d x d with finite
/// entries, traces vanish within 1e-9 and the control model is non-empty.
void validate(const SystemSpec& spec);

/// One constant-control arc e^{t (A + u B)}.
struct Letter {
  double t = 0.0;
  double u = 0.0;
  bool operator==(const Letter&) const = default;
};

/// Letters are applied first to last: the element is
/// e^{t_n X_n} ... e^{t_1 X_1}.
struct SemigroupWord {
  std::vector<Letter> letters;
  bool operator==(const SemigroupWord&) const = default;
};

/// The word consisting of the single letter (t = 0, u = 0).
SemigroupWord identity_word();

/// Throws ArgumentError if the word is empty or has a negative time.
void validate(const SemigroupWord& word);

/// The matrix of a word.
Matrix word_matrix(const SystemSpec& spec, const SemigroupWord& word);

/// Inverse semigroup: generated by e^{-t(A + uB)}. For a symmetric control
/// model that is the system (-A, B); otherwise (-A, -B) on the same set.
SystemSpec inverse_system(const SystemSpec& spec);

/// Counter-based generator: every (stream, substream) pair yields an
/// independent deterministic sequence, so sampling can be split across
/// workers without changing results.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0);
  std::uint64_t next();
  double uniform();  ///< [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double cauchy(double scale);
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

 private:
  std::uint64_t state_;
};

struct SamplingOptions {
  std::vector<double> u_grid{0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0, 10.0, -10.0};
  double heavy_tail_fraction = 0.2;
  double heavy_tail_scale = 2.0;
  /// Each letter's time is shortened so that |t (A + uB)|_1 stays below this.
  double max_letter_norm = 15.0;
};

double sample_control(const ControlModel& model, Rng& rng, const SamplingOptions& options);

struct SampledElement {
  Matrix g;
  SemigroupWord word;
};

/// Product of `word_len` arcs with t uniform on [0, t_max] and u from the
/// control model.
SampledElement sample_element(const SystemSpec& spec, int word_len, double t_max,
                              Rng& rng, const SamplingOptions& options = {});

}  // namespace conelab
