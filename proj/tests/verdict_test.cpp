#include "conelab/verdict.hpp"

#include <gtest/gtest.h>

#include "conelab/report_io.hpp"
#include "oracles.hpp"

namespace conelab {
namespace {

SystemSpec Fixture(const std::string& name) {
  return load_system_file(std::string(CONELAB_DATA_DIR) + "/" + name).spec;
}

SystemSpec Metzler2() {
  SystemSpec s;
  s.d = 2;
  s.A = Matrix(2, 2);
  s.A << 0, 1, 1, 0;
  s.B = Matrix(2, 2);
  s.B << 1, 0, 0, -1;
  return s;
}

SearchBudget SmallBudget() {
  SearchBudget b;
  b.n_seeds = 4;
  b.words_per_seed = 100;
  return b;
}

/// Report invariants that must hold for any input.
void ExpectConsistent(const AnalysisReport& r) {
  bool any_certified = false, all_cleared = r.closure_dim == r.closure_target &&
                                            static_cast<int>(r.per_k.size()) == r.spec.d - 1;
  for (const KReport& k : r.per_k) {
    EXPECT_EQ(k.status == KStatus::kConeCertified, !k.orthant_certs.empty());
    EXPECT_EQ(k.status == KStatus::kNoConeEvidence,
              k.orthant_certs.empty() && (k.nonpointed_cert || k.dual_nonpointed_cert));
    EXPECT_FALSE(!k.orthant_certs.empty() && (k.nonpointed_cert || k.dual_nonpointed_cert));
    if (k.nonpointed_cert) EXPECT_TRUE(verify_nonpointed_certificate(r.spec, *k.nonpointed_cert));
    if (k.dual_nonpointed_cert) {
      EXPECT_EQ(k.dual_nonpointed_cert->system, CertificateSystem::kInverse);
      EXPECT_EQ(k.dual_nonpointed_cert->k, r.spec.d - k.k);
      EXPECT_TRUE(verify_nonpointed_certificate(r.spec, *k.dual_nonpointed_cert));
    }
    for (const auto& c : k.orthant_certs) EXPECT_TRUE(verify_orthant_certificate(r.spec, c));
    any_certified |= k.status == KStatus::kConeCertified;
    all_cleared &= k.status == KStatus::kNoConeEvidence;
  }
  EXPECT_EQ(r.verdict == Verdict::kNotControllable, any_certified);
  EXPECT_EQ(r.verdict == Verdict::kControllableEvidence, all_cleared);
}

TEST(AnalyzeKTest, Example1) {
  const SystemSpec s = Fixture("example1.json");
  const KReport k2 = analyze_k(s, 2);
  EXPECT_EQ(k2.status, KStatus::kConeCertified);
  ASSERT_FALSE(k2.orthant_certs.empty());
  EXPECT_EQ(k2.orthant_certs.front().pattern, SignPattern::all_plus(6));

  const KReport k3 = analyze_k(s, 3);
  EXPECT_EQ(k3.status, KStatus::kNoConeEvidence);
  ASSERT_TRUE(k3.dual_nonpointed_cert.has_value());
  EXPECT_EQ(k3.dual_nonpointed_cert->k, 1);
  EXPECT_EQ(k3.dual_nonpointed_cert->system, CertificateSystem::kInverse);
  EXPECT_TRUE(verify_nonpointed_certificate(s, *k3.dual_nonpointed_cert));

  EXPECT_THROW(analyze_k(s, 0), ArgumentError);
  EXPECT_THROW(analyze_k(s, 4), ArgumentError);
}

TEST(AnalyzeKTest, Example2LinePair) {
  const SystemSpec s = Fixture("example2.json");
  const KReport k2 = analyze_k(s, 2);
  EXPECT_EQ(k2.status, KStatus::kNoConeEvidence);
  ASSERT_TRUE(k2.nonpointed_cert.has_value());
  EXPECT_EQ(k2.nonpointed_cert->mode, CertificateMode::kLinePair);
  EXPECT_LE(k2.nonpointed_cert->alignment, -1 + 1e-6);
}

TEST(AnalyzeTest, Example1NotControllable) {
  AnalysisOptions o;
  o.audit_exclusion = true;
  const AnalysisReport r = analyze(Fixture("example1.json"), o);
  EXPECT_EQ(r.verdict, Verdict::kNotControllable);
  EXPECT_EQ(r.flag_type_estimate, std::set<int>{2});
  EXPECT_TRUE(r.flag_type_candidates.empty());
  EXPECT_EQ(r.closure_dim, 15);
  EXPECT_TRUE(r.algorithm1);
  EXPECT_FALSE(r.larc_disagreement);
  ExpectConsistent(r);
  EXPECT_EQ(verdict_line(r), "verdict: NOT CONTROLLABLE (certified); flag type estimate: {2}");
}

TEST(AnalyzeTest, Example2ControllableEvidence) {
  const AnalysisReport r = analyze(Fixture("example2.json"));
  EXPECT_EQ(r.verdict, Verdict::kControllableEvidence);
  ExpectConsistent(r);
  EXPECT_EQ(verdict_line(r), "verdict: CONTROLLABLE (evidence: non-pointed at k = 1,2,3)");
  EXPECT_NE(format_report(r).find("not a proof"), std::string::npos);
}

TEST(AnalyzeTest, PlanarMetzlerPair) {
  const SystemSpec s = Metzler2();
  const AnalysisReport r = analyze(s);
  EXPECT_EQ(r.closure_dim, 3);
  EXPECT_EQ(r.verdict, Verdict::kNotControllable);
  EXPECT_EQ(r.flag_type_estimate, std::set<int>{1});
  ASSERT_EQ(r.per_k.size(), 1u);
  EXPECT_EQ(r.per_k[0].orthant_certs.front().pattern, SignPattern::all_plus(2));
  // Independent check: the first quadrant is carried into itself.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0, 1), uu(-20, 20);
  for (int i = 0; i < 200; ++i) {
    const Vector v = Vector::Unit(2, i % 2) * 1.0 + Vector::Unit(2, 1 - i % 2) * (i % 3 ? unit(rng) : 0);
    for (double t : {0.1, 0.5, 1.0}) {
      const Vector w = oracle::sign_shifted_flow(s.generator(uu(rng)), {1, 1}, t, v);
      EXPECT_GE(w.minCoeff() / w.norm(), -1e-12);
    }
  }
  ExpectConsistent(r);
}

TEST(AnalyzeTest, NoInteriorMeansInconclusive) {
  SystemSpec s;
  s.d = 3;
  s.A = Vector::LinSpaced(3, -1, 1).asDiagonal();
  s.B = Matrix(Eigen::Vector3d(1, 1, -2).asDiagonal());
  const AnalysisReport r = analyze(s);
  EXPECT_EQ(r.closure_dim, 2);
  EXPECT_EQ(r.verdict, Verdict::kInconclusive);
  EXPECT_EQ(r.flag_type_candidates, (std::set<int>{1, 2}));
  for (const KReport& k : r.per_k) {
    EXPECT_EQ(k.status, KStatus::kInconclusive);
    EXPECT_FALSE(k.larc_interior);
    EXPECT_FALSE(k.reason.empty());
  }
  EXPECT_EQ(verdict_line(r), "verdict: INCONCLUSIVE; undecided degrees: {1,2}");
}

TEST(AnalyzeTest, InvalidSystems) {
  SystemSpec s = Metzler2();
  s.A(0, 0) = 1;
  EXPECT_THROW(analyze(s), ArgumentError);
  s = Metzler2();
  s.B(1, 1) = 0;
  EXPECT_THROW(analyze(s), ArgumentError);
  s = Metzler2();
  s.A(0, 1) = std::nan("");
  EXPECT_THROW(analyze(s), ArgumentError);
  AnalysisOptions o;
  o.only_k = {2};
  EXPECT_THROW(analyze(Metzler2(), o), ArgumentError);
}

TEST(AnalyzeTest, OnlySelectedDegrees) {
  AnalysisOptions o;
  o.only_k = {2};
  const AnalysisReport r = analyze(Fixture("example2.json"), o);
  ASSERT_EQ(r.per_k.size(), 1u);
  EXPECT_EQ(r.per_k[0].k, 2);
  EXPECT_EQ(r.verdict, Verdict::kInconclusive);
}

TEST(AnalyzeTest, DualityConsistency) {
  const SystemSpec s = Fixture("example1.json");
  ASSERT_EQ(analyze_k(s, 2).status, KStatus::kConeCertified);
  EXPECT_FALSE(nonpointedness_search(s, 2, {}, CertificateSystem::kInverse).certificate);
}

TEST(AnalyzeTest, MonotoneBudget) {
  SearchBudget big;
  big.n_seeds = 12;
  big.words_per_seed = 800;
  for (const char* name : {"example1.json", "example2.json"}) {
    const SystemSpec s = Fixture(name);
    AnalysisOptions small_opts, big_opts;
    small_opts.budget = SmallBudget();
    big_opts.budget = big;
    const AnalysisReport a = analyze(s, small_opts), b = analyze(s, big_opts);
    for (std::size_t i = 0; i < a.per_k.size(); ++i) {
      if (a.per_k[i].status == KStatus::kNoConeEvidence) {
        EXPECT_NE(b.per_k[i].status, KStatus::kConeCertified);
      }
      EXPECT_EQ(a.per_k[i].orthant_certs, b.per_k[i].orthant_certs);
    }
  }
}

TEST(AnalyzeTest, MutualExclusionOnRandomPairs) {
  std::mt19937_64 rng(42);
  AnalysisOptions o;
  o.budget = SmallBudget();
  o.audit_exclusion = true;
  int certified = 0;
  for (int trial = 0; trial < 12; ++trial) {
    SystemSpec s;
    s.d = 3;
    s.A = oracle::random_traceless(rng, 3);
    if (trial % 2 == 0) s.A = s.A.cwiseAbs();
    s.A.diagonal().array() -= s.A.trace() / 3;
    s.B = Matrix(oracle::random_traceless(rng, 3).diagonal().asDiagonal());
    s.B.diagonal().array() -= s.B.trace() / 3;
    s.rng_seed = static_cast<std::uint64_t>(trial);
    const AnalysisReport r = analyze(s, o);
    ExpectConsistent(r);
    certified += r.verdict == Verdict::kNotControllable;
  }
  EXPECT_GT(certified, 0);
}

TEST(AnalyzeTest, Deterministic) {
  AnalysisOptions o;
  o.budget = SmallBudget();
  const SystemSpec s = Fixture("example2.json");
  EXPECT_EQ(analyze(s, o), analyze(s, o));
}

}  // namespace
}  // namespace conelab
