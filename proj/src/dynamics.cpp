#include "conelab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <tuple>

namespace conelab {

bool SearchBudget::operator==(const SearchBudget& o) const {
  return n_seeds == o.n_seeds && words_per_seed == o.words_per_seed &&
         max_word_len == o.max_word_len && t_max == o.t_max &&
         attractor_every == o.attractor_every && attractor_power == o.attractor_power &&
         attractor_iters == o.attractor_iters && special_times == o.special_times &&
         antipodal_delta == o.antipodal_delta && hull.eps == o.hull.eps &&
         hull.margin == o.hull.margin && sampling.u_grid == o.sampling.u_grid &&
         sampling.heavy_tail_fraction == o.sampling.heavy_tail_fraction &&
         sampling.heavy_tail_scale == o.sampling.heavy_tail_scale &&
         sampling.max_letter_norm == o.sampling.max_letter_norm;
}

int worker_count(const SearchBudget& budget) {
  if (budget.threads > 0) return budget.threads;
  if (const char* env = std::getenv("CONELAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr double kUnderflow = 1e-300;

Vector normalized_or_throw(Vector v, const char* where) {
  const double n = v.norm();
  if (!(n > kUnderflow) || !std::isfinite(n)) {
    throw NumericalUnderflowError(std::string(where) + ": iterate collapsed");
  }
  return v / n;
}

// Runs body(i) for i in [0, n) on up to `workers` threads. Results must be
// written to per-index slots so the outcome does not depend on scheduling.
template <typename Body>
void parallel_for(int n, int workers, Body&& body) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Matrix basis_of(const MultiIndex& I, int d) {
  Matrix P = Matrix::Zero(d, I.size());
  for (int c = 0; c < I.size(); ++c) P(I[c] - 1, c) = 1.0;
  return P;
}

SystemSpec system_for(const SystemSpec& spec, CertificateSystem system) {
  return system == CertificateSystem::kInverse ? inverse_system(spec) : spec;
}

}  // namespace

Vector apply_word(const SystemSpec& spec, int k, const SemigroupWord& word, const Vector& v) {
  validate(word);
  Vector w = normalized_or_throw(v, "apply_word");
  for (const Letter& l : word.letters) {
    if (l.t == 0.0) continue;
    const Matrix g = mat_exp(Matrix(l.t * spec.generator(l.u)));
    w = normalized_or_throw(compound_matrix(g, k).entries * w, "apply_word");
  }
  return w;
}

namespace {

/// Orthonormal basis of span(P) with the same orientation: P = QR, and the
/// wedge of P is det(R) times the wedge of Q.
Matrix orthonormal_same_wedge(const Matrix& P) {
  Eigen::HouseholderQR<Matrix> qr(P);
  Matrix Q = qr.householderQ() * Matrix::Identity(P.rows(), P.cols());
  if (qr.matrixQR().diagonal().head(P.cols()).prod() < 0) Q.col(0) = -Q.col(0);
  return Q;
}

}  // namespace

namespace {

/// Oriented orthonormal basis N of the orthogonal complement of span(P),
/// with det[P | N] > 0.
Matrix oriented_complement(const Matrix& P) {
  const Eigen::Index d = P.rows(), k = P.cols();
  Eigen::HouseholderQR<Matrix> qr(P);
  const Matrix full = qr.householderQ();
  Matrix N = full.rightCols(d - k);
  Matrix M(d, d);
  M << P, N;
  if (M.determinant() < 0) N.col(0) = -N.col(0);
  return N;
}

/// Coordinates of the k-vector dual to the (d-k)-vector with Plücker
/// coordinates `q`: entry I is sign(I, I^c) q_{I^c}.
Vector hodge_complement(const Vector& q, int d, int k) {
  const auto table = multi_index_table(d, k);
  const auto dual = multi_index_table(d, d - k);
  Vector out(table->size());
  for (int pos = 0; pos < table->size(); ++pos) {
    const MultiIndex& I = (*table)[pos];
    std::vector<int> rest;
    int inversions = 0;
    for (int i = 1; i <= d; ++i) {
      if (I.contains(i)) continue;
      rest.push_back(i);
      for (int j : I.entries())
        if (j > i) ++inversions;
    }
    const double sign = inversions % 2 ? -1.0 : 1.0;
    out(pos) = sign * q(dual->position(MultiIndex(rest, d)));
  }
  return out;
}


/// Oriented orthonormal basis P of the complement of span(N), with
/// det[P | N] > 0; inverts oriented_complement up to the choice of frame.
Matrix basis_from_complement(const Matrix& N) {
  const Eigen::Index d = N.rows(), k = d - N.cols();
  Eigen::HouseholderQR<Matrix> qr(N);
  const Matrix full = qr.householderQ();
  Matrix P = full.rightCols(k);
  Matrix M(d, d);
  M << P, N;
  if (M.determinant() < 0) P.col(0) = -P.col(0);
  return P;
}

/// One letter of a word as `count` equal substeps of norm <= kSubstepNorm, by g or,
/// for the complement frame, by g^{-T}. Small substeps keep each factor well
/// conditioned, so the decaying part of a frame is not lost to rounding in
/// the growing part.
constexpr double kSubstepNorm = 4.0;

struct Substep {
  Matrix factor;
  int count = 0;
};

std::vector<Substep> substeps(const SystemSpec& spec, const SemigroupWord& word, bool dual) {
  std::vector<Substep> out;
  for (const Letter& l : word.letters) {
    if (l.t == 0.0) continue;
    const Matrix X = l.t * spec.generator(l.u);
    const int count = std::max(1, static_cast<int>(std::ceil(norm1(X) / kSubstepNorm)));
    const Matrix Y = X / count;
    out.push_back({dual ? Matrix(mat_exp(Matrix(-Y.transpose()))) : Matrix(mat_exp(Y)), count});
  }
  return out;
}

/// Carries an orthonormal frame through the substeps, keeping orientation.
Matrix propagate_frame(const std::vector<Substep>& steps, Matrix P) {
  for (const Substep& s : steps) {
    for (int i = 0; i < s.count; ++i) {
      const Matrix image = s.factor * P;
      if (!image.allFinite()) throw NumericalUnderflowError("word_direction: non-finite iterate");
      P = orthonormal_same_wedge(image);
    }
  }
  return P;
}

}  // namespace

Vector word_direction(const SystemSpec& spec, const SemigroupWord& word, const Matrix& basis) {
  validate(word);
  const int d = spec.d;
  const int k = static_cast<int>(basis.cols());
  if (basis.rows() != d || k < 1 || k > d) {
    throw ArgumentError("word_direction: basis must be d x k");
  }
  if (rank_tol(basis, 1e-9) < k) {
    throw DegenerateInputError("word_direction: basis is rank-deficient");
  }
  // Above the middle degree the complement is propagated by g^{-T}; the
  // frame then has fewer columns and loses less to rounding.
  const bool dual = 2 * k > d && k < d;
  const Matrix P0 = dual ? oriented_complement(orthonormal_same_wedge(basis))
                         : orthonormal_same_wedge(basis);
  const Matrix P = propagate_frame(substeps(spec, word, dual), P0);
  const Vector coords = dual ? hodge_complement(plucker(P).coords, d, k) : plucker(P).coords;
  return normalized_or_throw(coords, "word_direction");
}

ExteriorVector<double> attractor_direction(const Matrix& h, int k, const ExteriorVector<double>& v0,
                                           int iters) {
  const Matrix C = compound_matrix(h, k).entries;
  if (v0.coords.size() != C.rows()) throw ArgumentError("attractor_direction: size mismatch");
  if (v0.coords.norm() == 0.0) throw ArgumentError("attractor_direction: zero start vector");
  Vector w = normalized_or_throw(v0.coords, "attractor_direction");
  for (int i = 0; i < iters; ++i) w = normalized_or_throw(C * w, "attractor_direction");
  return {multi_index_table(static_cast<int>(h.rows()), k), w};
}

OrbitCloud orbit_directions(const SystemSpec& spec, int k, const Matrix& seed_basis,
                            const OrbitOptions& options, std::uint64_t stream) {
  OrbitCloud cloud;
  cloud.k = k;
  cloud.seed_basis = seed_basis;
  if (seed_basis.cols() != k) throw ArgumentError("orbit_directions: seed basis must be d x k");

  auto record = [&](SemigroupWord word) {
    cloud.directions.push_back(word_direction(spec, word, seed_basis));
    cloud.provenance.push_back(std::move(word));
  };
  record(identity_word());
  for (double t : options.special_times) record(SemigroupWord{{Letter{t, 0.0}}});

  for (int w = 0; w < options.n_samples; ++w) {
    Rng rng(spec.rng_seed, stream, static_cast<std::uint64_t>(w));
    const int len = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(options.max_word_len)));
    SemigroupWord word = sample_element(spec, len, options.t_max, rng, options.sampling).word;
    if (options.attractor_every > 0 && w % options.attractor_every == options.attractor_every - 1) {
      const SemigroupWord h =
          sample_element(spec, options.max_word_len, options.t_max, rng, options.sampling).word;
      for (int p = 0; p < options.attractor_power; ++p) {
        word.letters.insert(word.letters.end(), h.letters.begin(), h.letters.end());
      }
    }
    record(std::move(word));
  }
  return cloud;
}

bool NonPointedCertificate::operator==(const NonPointedCertificate& o) const {
  return k == o.k && system == o.system && mode == o.mode && seed_basis == o.seed_basis &&
         word_a == o.word_a && word_b == o.word_b && alignment == o.alignment &&
         hull_words == o.hull_words && hull_coefficients == o.hull_coefficients &&
         residual == o.residual;
}

namespace {

bool word_less(const SemigroupWord& a, const SemigroupWord& b) {
  return std::lexicographical_compare(
      a.letters.begin(), a.letters.end(), b.letters.begin(), b.letters.end(),
      [](const Letter& x, const Letter& y) { return std::tie(x.t, x.u) < std::tie(y.t, y.u); });
}

/// Provenance order of a pair, as (smaller word, larger word).
bool pair_less(const SemigroupWord& a1, const SemigroupWord& b1, const SemigroupWord& a2,
               const SemigroupWord& b2) {
  const auto& lo1 = word_less(b1, a1) ? b1 : a1;
  const auto& hi1 = word_less(b1, a1) ? a1 : b1;
  const auto& lo2 = word_less(b2, a2) ? b2 : a2;
  const auto& hi2 = word_less(b2, a2) ? a2 : b2;
  if (word_less(lo1, lo2)) return true;
  if (word_less(lo2, lo1)) return false;
  return word_less(hi1, hi2);
}

bool certificate_less(const NonPointedCertificate& x, const NonPointedCertificate& y) {
  if (x.mode != y.mode) return x.mode == CertificateMode::kLinePair;
  if (x.mode == CertificateMode::kLinePair) return pair_less(x.word_a, x.word_b, y.word_a, y.word_b);
  return std::lexicographical_compare(x.hull_words.begin(), x.hull_words.end(),
                                      y.hull_words.begin(), y.hull_words.end(), word_less);
}

}  // namespace

std::optional<NonPointedCertificate> find_line_pair(const OrbitCloud& cloud, double delta) {
  const std::size_t n = cloud.directions.size();
  std::optional<NonPointedCertificate> best;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = cloud.directions[i].dot(cloud.directions[j]);
      if (c > -1.0 + delta) continue;
      if (best && !pair_less(cloud.provenance[i], cloud.provenance[j], best->word_a, best->word_b)) {
        continue;
      }
      NonPointedCertificate cert;
      cert.k = cloud.k;
      cert.mode = CertificateMode::kLinePair;
      cert.seed_basis = cloud.seed_basis;
      cert.word_a = cloud.provenance[i];
      cert.word_b = cloud.provenance[j];
      cert.alignment = c;
      best = std::move(cert);
    }
  }
  return best;
}

PointednessResult pointedness(const OrbitCloud& cloud, double antipodal_delta,
                              const HullOptions& hull) {
  if (cloud.directions.empty()) throw ArgumentError("pointedness: empty cloud");
  PointednessResult out;
  if (auto pair = find_line_pair(cloud, antipodal_delta)) {
    out.certificate = std::move(pair);
    return out;
  }
  const HullResult h = origin_in_hull(cloud.directions, hull);
  if (!h.inside) {
    out.pointed = true;
    out.witness = h.witness;
    return out;
  }
  NonPointedCertificate cert;
  cert.k = cloud.k;
  cert.mode = CertificateMode::kHull;
  cert.seed_basis = cloud.seed_basis;
  cert.residual = h.residual;
  for (Eigen::Index i = 0; i < h.coefficients.size(); ++i) {
    if (h.coefficients(i) > 0.0) {
      cert.hull_words.push_back(cloud.provenance[static_cast<std::size_t>(i)]);
      cert.hull_coefficients.push_back(h.coefficients(i));
    }
  }
  out.certificate = std::move(cert);
  return out;
}

bool verify_nonpointed_certificate(const SystemSpec& spec, const NonPointedCertificate& cert,
                                   const CertificateTolerances& tol) {
  try {
    const SystemSpec sys = system_for(spec, cert.system);
    if (cert.k < 1 || cert.k >= sys.d) return false;
    if (cert.seed_basis.rows() != sys.d || cert.seed_basis.cols() != cert.k) return false;
    if (cert.mode == CertificateMode::kLinePair) {
      const Vector a = word_direction(sys, cert.word_a, cert.seed_basis);
      const Vector b = word_direction(sys, cert.word_b, cert.seed_basis);
      return a.dot(b) <= -1.0 + tol.antipodal_delta;
    }
    if (cert.hull_words.empty() || cert.hull_words.size() != cert.hull_coefficients.size()) {
      return false;
    }
    std::vector<Vector> points;
    HullResult h;
    h.inside = true;
    h.coefficients.resize(static_cast<Eigen::Index>(cert.hull_words.size()));
    for (std::size_t i = 0; i < cert.hull_words.size(); ++i) {
      points.push_back(word_direction(sys, cert.hull_words[i], cert.seed_basis));
      h.coefficients(static_cast<Eigen::Index>(i)) = cert.hull_coefficients[i];
    }
    return verify_hull_result(points, h, tol.hull);
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<Matrix> search_seeds(const SystemSpec& spec, int k, const SearchBudget& budget) {
  const auto table = multi_index_table(spec.d, k);
  const int standard = std::max(1, std::min(table->size(), budget.n_seeds - 2));
  const int attractor = std::max(0, budget.n_seeds - standard);
  std::vector<Matrix> seeds;
  for (int s = 0; s < standard; ++s) seeds.push_back(basis_of((*table)[s], spec.d));
  for (int a = 0; a < attractor; ++a) {
    // Subspace iteration of a sampled word on a standard wedge, carried
    // letter by letter; the seed is a positive multiple of h^m e_I.
    Rng rng(spec.rng_seed, 0xA77AC70ULL + static_cast<std::uint64_t>(k),
            static_cast<std::uint64_t>(a));
    const SemigroupWord h =
        sample_element(spec, budget.max_word_len, budget.t_max, rng, budget.sampling).word;
    const bool dual = 2 * k > spec.d && k < spec.d;
    const Matrix P0 = basis_of((*table)[a % table->size()], spec.d);
    Matrix P = dual ? oriented_complement(P0) : P0;
    const std::vector<Substep> steps = substeps(spec, h, dual);
    for (int i = 0; i < budget.attractor_iters; ++i) P = propagate_frame(steps, P);
    if (dual) P = basis_from_complement(P);
    seeds.push_back(P);
  }
  return seeds;
}

SearchOutcome nonpointedness_search(const SystemSpec& spec, int k, const SearchBudget& budget,
                                    CertificateSystem system) {
  const SystemSpec sys = system_for(spec, system);
  const std::vector<Matrix> seeds = search_seeds(sys, k, budget);
  OrbitOptions opt;
  opt.n_samples = budget.words_per_seed;
  opt.max_word_len = budget.max_word_len;
  opt.t_max = budget.t_max;
  opt.attractor_every = budget.attractor_every;
  opt.attractor_power = budget.attractor_power;
  opt.special_times = budget.special_times;
  opt.sampling = budget.sampling;

  const int n = static_cast<int>(seeds.size());
  std::vector<std::optional<NonPointedCertificate>> line(n), hull(n);
  std::vector<int> sizes(n, 0);
  parallel_for(n, worker_count(budget), [&](int s) {
    const std::uint64_t stream = (static_cast<std::uint64_t>(k) << 32) |
                                 (system == CertificateSystem::kInverse ? 1ULL << 31 : 0ULL) |
                                 static_cast<std::uint64_t>(s);
    const OrbitCloud cloud = orbit_directions(sys, k, seeds[s], opt, stream);
    sizes[s] = static_cast<int>(cloud.directions.size());
    line[s] = find_line_pair(cloud, budget.antipodal_delta);
    if (!line[s]) {
      PointednessResult r = pointedness(cloud, budget.antipodal_delta, budget.hull);
      hull[s] = std::move(r.certificate);
    }
  });

  SearchOutcome out;
  out.seeds_tried = n;
  for (int s : sizes) out.directions_sampled += s;
  // Line pairs before hulls, then the smallest provenance, then the lowest seed.
  std::optional<NonPointedCertificate>* chosen = nullptr;
  for (auto* group : {&line, &hull}) {
    for (auto& c : *group) {
      if (c && (!chosen || certificate_less(*c, **chosen))) chosen = &c;
    }
  }
  if (chosen) {
    NonPointedCertificate& cert = **chosen;
    cert.system = system;
    if (!verify_nonpointed_certificate(spec, cert, {budget.antipodal_delta, budget.hull})) {
      throw ConsistencyError("nonpointedness_search: certificate failed re-verification");
    }
    out.certificate = cert;
  }
  return out;
}

ConeGenerators cone_from_convex(const std::vector<Vector>& generators, const HullOptions& hull) {
  if (generators.empty()) throw ArgumentError("cone_from_convex: no generators");
  ConeGenerators out;
  for (const Vector& g : generators) {
    const double n = g.norm();
    if (n == 0.0) continue;
    const Vector r = g / n;
    const bool dup = std::any_of(out.rays.begin(), out.rays.end(),
                                 [&](const Vector& q) { return q.dot(r) >= 1.0 - 1e-9; });
    if (!dup) out.rays.push_back(r);
  }
  if (out.rays.empty()) throw ArgumentError("cone_from_convex: all generators are zero");
  const Eigen::Index dim = out.rays.front().size();

  // Peel off the lineality space: generators carrying positive weight in a
  // vanishing convex combination span directions the cone contains in both
  // orientations. Repeat modulo what has been found.
  Matrix lineality(dim, 0);
  std::vector<Vector> remaining = out.rays;
  while (!remaining.empty()) {
    std::vector<Vector> projected;
    std::vector<Vector> kept;
    for (const Vector& r : remaining) {
      Vector q = r;
      if (lineality.cols() > 0) q -= lineality * (lineality.transpose() * r);
      if (q.norm() > 1e-9) {
        projected.push_back(q.normalized());
        kept.push_back(r);
      }
    }
    if (projected.empty()) break;
    const HullResult h = origin_in_hull(projected, hull);
    if (!h.inside) break;
    std::vector<Vector> next;
    Matrix grown = lineality;
    for (std::size_t i = 0; i < projected.size(); ++i) {
      if (h.coefficients(static_cast<Eigen::Index>(i)) > 0.0) {
        grown.conservativeResize(dim, grown.cols() + 1);
        grown.col(grown.cols() - 1) = projected[i];
      } else {
        next.push_back(kept[i]);
      }
    }
    const int rank = rank_tol(grown, 1e-9);
    Eigen::HouseholderQR<Matrix> qr(grown);
    lineality = qr.householderQ() * Matrix::Identity(dim, rank);
    remaining = std::move(next);
  }
  out.whole_space = lineality.cols() == dim;
  return out;
}

}  // namespace conelab
