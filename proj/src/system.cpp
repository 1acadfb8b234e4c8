#include "conelab/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conelab {

bool is_symmetric(const ControlModel& model) {
  if (std::holds_alternative<UnboundedControl>(model)) return true;
  if (const auto* set = std::get_if<ControlSet>(&model)) {
    std::vector<double> a = set->values, b;
    for (double v : a) b.push_back(-v);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }
  const auto& iv = std::get<ControlInterval>(model);
  return iv.lo == -iv.hi;
}

bool operator==(const SystemSpec& a, const SystemSpec& b) {
  return a.d == b.d && a.A == b.A && a.B == b.B && a.u_model == b.u_model &&
         a.rng_seed == b.rng_seed;
}

void validate(const SystemSpec& spec) {
  if (spec.d < 2) throw ArgumentError("system: dimension d must be at least 2");
  auto check = [&](const Matrix& M, const char* name) {
    if (M.rows() != spec.d || M.cols() != spec.d) {
      throw ArgumentError(std::string("system: ") + name + " must be " +
                          std::to_string(spec.d) + "x" + std::to_string(spec.d));
    }
    if (!M.allFinite()) throw ArgumentError(std::string("system: ") + name + " has non-finite entries");
    if (std::abs(M.trace()) > 1e-9) {
      throw ArgumentError(std::string("system: ") + name + " must be traceless (trace = " +
                          std::to_string(M.trace()) + ")");
    }
  };
  check(spec.A, "A");
  check(spec.B, "B");
  if (const auto* set = std::get_if<ControlSet>(&spec.u_model)) {
    if (set->values.empty()) throw ArgumentError("system: control set is empty");
  }
  if (const auto* iv = std::get_if<ControlInterval>(&spec.u_model)) {
    if (!(iv->lo <= iv->hi)) throw ArgumentError("system: control interval has lo > hi");
  }
}

SemigroupWord identity_word() { return SemigroupWord{{Letter{0.0, 0.0}}}; }

void validate(const SemigroupWord& word) {
  if (word.letters.empty()) throw ArgumentError("word: empty");
  for (const Letter& l : word.letters) {
    if (!(l.t >= 0.0) || !std::isfinite(l.t) || !std::isfinite(l.u)) {
      throw ArgumentError("word: times must be finite and non-negative");
    }
  }
}

Matrix word_matrix(const SystemSpec& spec, const SemigroupWord& word) {
  validate(word);
  Matrix g = Matrix::Identity(spec.d, spec.d);
  for (const Letter& l : word.letters) g = mat_exp(Matrix(l.t * spec.generator(l.u))) * g;
  return g;
}

SystemSpec inverse_system(const SystemSpec& spec) {
  SystemSpec inv = spec;
  inv.A = -spec.A;
  if (!is_symmetric(spec.u_model)) inv.B = -spec.B;
  return inv;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  std::uint64_t x = seed;
  state_ = splitmix64(x);
  x ^= stream * 0xD1B54A32D192ED03ULL;
  state_ ^= splitmix64(x);
  x ^= substream * 0xABC98388FB8FAC03ULL;
  state_ ^= splitmix64(x);
}

std::uint64_t Rng::next() { return splitmix64(state_); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::cauchy(double scale) {
  return scale * std::tan(std::numbers::pi * (uniform() - 0.5));
}

double sample_control(const ControlModel& model, Rng& rng, const SamplingOptions& options) {
  if (const auto* set = std::get_if<ControlSet>(&model)) {
    return set->values[rng.index(set->values.size())];
  }
  if (const auto* iv = std::get_if<ControlInterval>(&model)) {
    // Endpoints carry the extreme dynamics; hit them a quarter of the time.
    const double r = rng.uniform();
    if (r < 0.125) return iv->lo;
    if (r < 0.25) return iv->hi;
    return rng.uniform(iv->lo, iv->hi);
  }
  if (rng.uniform() < options.heavy_tail_fraction) return rng.cauchy(options.heavy_tail_scale);
  return options.u_grid[rng.index(options.u_grid.size())];
}

SampledElement sample_element(const SystemSpec& spec, int word_len, double t_max, Rng& rng,
                              const SamplingOptions& options) {
  if (word_len < 1) throw ArgumentError("sample_element: word_len must be >= 1");
  if (!(t_max > 0)) throw ArgumentError("sample_element: t_max must be positive");
  SampledElement out;
  for (int i = 0; i < word_len; ++i) {
    double t = rng.uniform(0.0, t_max);
    const double u = sample_control(spec.u_model, rng, options);
    const double n = norm1(spec.generator(u));
    if (t * n > options.max_letter_norm) t = options.max_letter_norm / n;
    out.word.letters.push_back({t, u});
  }
  out.g = word_matrix(spec, out.word);
  return out;
}

}  // namespace conelab
