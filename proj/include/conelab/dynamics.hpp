#pragma once

// Monte-Carlo exploration of the system semigroup acting on the exterior
// powers. The closed convex cone generated by an orbit S.v is S-invariant,
// so a line inside it (two opposite orbit directions, or the origin in the
// convex hull of orbit directions) rules out a pointed invariant cone that
// contains v.

#include <numbers>
#include <optional>
#include <vector>

#include "conelab/exterior.hpp"
#include "conelab/linalg.hpp"
#include "conelab/system.hpp"

namespace conelab {

struct SearchBudget {
  int n_seeds = 8;
  int words_per_seed = 400;
  int max_word_len = 6;
  double t_max = 2.0;
  /// Every n-th sampled word is followed by a power of a fresh sampled h.
  int attractor_every = 10;
  int attractor_power = 8;
  /// Subspace iterations of a sampled word used to build attractor seeds.
  int attractor_iters = 200;
  /// Pure-A words always added to every cloud.
  std::vector<double> special_times{std::numbers::pi / 2, std::numbers::pi, 2 * std::numbers::pi};
  double antipodal_delta = 1e-6;
  HullOptions hull;
  SamplingOptions sampling;
  /// Worker cap; 0 reads CONELAB_THREADS, falling back to the hardware.
  int threads = 0;

  bool operator==(const SearchBudget& o) const;
};

int worker_count(const SearchBudget& budget);

/// Direction of g.v for the word's element g, renormalized after each
/// letter. Throws NumericalUnderflowError if an iterate collapses.
Vector apply_word(const SystemSpec& spec, int k, const SemigroupWord& word, const Vector& v);

/// Direction of plucker(g P) for the word's element g. The basis is pushed
/// through each letter in substeps of norm at most 4 and re-orthonormalized
/// with its orientation kept, which avoids the cancellation of forming
/// compound matrices of large elements. Above the middle degree the
/// complement is carried by g^{-T} instead. Throws DegenerateInputError if P
/// is not of full rank.
Vector word_direction(const SystemSpec& spec, const SemigroupWord& word, const Matrix& basis);

/// Normalized power iteration w <- C_k(h) w.
ExteriorVector<double> attractor_direction(const Matrix& h, int k, const ExteriorVector<double>& v0,
                                           int iters);

struct OrbitCloud {
  int k = 0;
  Matrix seed_basis;  ///< d x k; the seed is plucker(seed_basis)
  std::vector<Vector> directions;
  std::vector<SemigroupWord> provenance;
};

struct OrbitOptions {
  int n_samples = 400;
  int max_word_len = 6;
  double t_max = 2.0;
  int attractor_every = 10;
  int attractor_power = 8;
  std::vector<double> special_times;
  SamplingOptions sampling;
};

/// The seed direction itself, the special pure-A words, then `n_samples`
/// sampled words. Word w draws from Rng(spec.rng_seed, stream, w), so the
/// cloud depends only on the seed, the stream id and the options. Throws
/// DegenerateInputError if the seed basis is not of full rank.
OrbitCloud orbit_directions(const SystemSpec& spec, int k, const Matrix& seed_basis,
                            const OrbitOptions& options, std::uint64_t stream);

enum class CertificateMode { kLinePair, kHull };
enum class CertificateSystem { kDirect, kInverse };

/// Evidence that the cone generated by the orbit of a decomposable seed
/// contains a line. Everything is recomputable from the system alone.
struct NonPointedCertificate {
  int k = 0;  ///< degree at which the evidence lives
  CertificateSystem system = CertificateSystem::kDirect;
  CertificateMode mode = CertificateMode::kLinePair;
  Matrix seed_basis;
  // kLinePair: directions of word_a and word_b applied to the seed.
  SemigroupWord word_a;
  SemigroupWord word_b;
  double alignment = 0.0;
  // kHull: convex weights of orbit directions whose combination vanishes.
  std::vector<SemigroupWord> hull_words;
  std::vector<double> hull_coefficients;
  double residual = 0.0;

  bool operator==(const NonPointedCertificate&) const;
};

struct CertificateTolerances {
  double antipodal_delta = 1e-6;
  HullOptions hull;
};

/// Re-derives the certificate from `spec` (the original system; an
/// inverse-system certificate is checked against inverse_system(spec)).
bool verify_nonpointed_certificate(const SystemSpec& spec, const NonPointedCertificate& cert,
                                   const CertificateTolerances& tol = {});

struct PointednessResult {
  bool pointed = false;
  Vector witness;  ///< witness . p >= margin for every cloud direction
  std::optional<NonPointedCertificate> certificate;
};

/// Antipodal scan first, then the hull test.
PointednessResult pointedness(const OrbitCloud& cloud, double antipodal_delta,
                              const HullOptions& hull);

/// Only the antipodal scan; among pairs (i, j), i < j, with cosine <= -1 +
/// delta returns the one whose words are lexicographically smallest.
std::optional<NonPointedCertificate> find_line_pair(const OrbitCloud& cloud, double delta);

struct SearchOutcome {
  std::optional<NonPointedCertificate> certificate;
  int seeds_tried = 0;
  int directions_sampled = 0;
};

/// Seeds: the first standard basis wedges e_I, then attractor seeds
/// obtained by iterating sampled elements on e_I. A line-pair certificate
/// from any seed is preferred over a hull certificate; then the
/// lexicographically smallest provenance wins, and ties go to the lowest
/// seed index. No certificate means no evidence within the budget.
SearchOutcome nonpointedness_search(const SystemSpec& spec, int k, const SearchBudget& budget,
                                    CertificateSystem system = CertificateSystem::kDirect);

/// The d x k seed bases used by nonpointedness_search, in order.
std::vector<Matrix> search_seeds(const SystemSpec& spec, int k, const SearchBudget& budget);

struct ConeGenerators {
  std::vector<Vector> rays;  ///< unit, pairwise alignment < 1 - 1e-9
  bool whole_space = false;
};

/// Generators of the closed cone over a set of points. `whole_space` is set
/// when the cone is all of R^n, i.e. 0 is interior to the convex hull of the
/// normalized generators.
ConeGenerators cone_from_convex(const std::vector<Vector>& generators,
                                const HullOptions& hull = {});

}  // namespace conelab
