#include "conelab/verdict.hpp"

#include <sstream>

#include "conelab/larc.hpp"

namespace conelab {

std::string to_string(KStatus s) {
  switch (s) {
    case KStatus::kConeCertified: return "ConeCertified";
    case KStatus::kNoConeEvidence: return "NoConeEvidence";
    case KStatus::kInconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kNotControllable: return "NotControllable";
    case Verdict::kControllableEvidence: return "ControllableEvidence";
    case Verdict::kInconclusive: return "Inconclusive";
  }
  return "?";
}

bool AnalysisReport::operator==(const AnalysisReport& o) const {
  return spec == o.spec && budget == o.budget && closure_dim == o.closure_dim &&
         closure_target == o.closure_target && algorithm1 == o.algorithm1 &&
         larc_disagreement == o.larc_disagreement && per_k == o.per_k &&
         flag_type_estimate == o.flag_type_estimate &&
         flag_type_candidates == o.flag_type_candidates && verdict == o.verdict;
}

namespace {

KReport analyze_k_with_interior(const SystemSpec& spec, int k, bool interior,
                                const AnalysisOptions& options) {
  KReport r;
  r.k = k;
  r.larc_interior = interior;
  if (!interior) {
    r.reason = "Lie algebra generated by A, B is not sl(d,R); cone criteria do not apply";
    return r;
  }
  try {
    r.orthant_certs = family_invariant_orthants(spec, k);
  } catch (const CapacityError& e) {
    r.reason = e.what();
    return r;
  }

  auto search = [&](int degree, CertificateSystem system) {
    SearchOutcome s = nonpointedness_search(spec, degree, options.budget, system);
    r.directions_sampled += s.directions_sampled;
    return s.certificate;
  };

  if (!r.orthant_certs.empty()) {
    r.status = KStatus::kConeCertified;
    if (options.audit_exclusion) {
      auto direct = search(k, CertificateSystem::kDirect);
      auto dual = search(spec.d - k, CertificateSystem::kInverse);
      if (direct || dual) {
        throw ConsistencyError("degree " + std::to_string(k) +
                               " has both an invariant orthant and a non-pointedness certificate");
      }
    }
    return r;
  }

  r.nonpointed_cert = search(k, CertificateSystem::kDirect);
  r.dual_nonpointed_cert = search(spec.d - k, CertificateSystem::kInverse);
  if (r.nonpointed_cert || r.dual_nonpointed_cert) {
    r.status = KStatus::kNoConeEvidence;
  } else {
    const SearchBudget& b = options.budget;
    r.reason = "no certificate within budget (" + std::to_string(b.n_seeds) + " seeds x " +
               std::to_string(b.words_per_seed) + " words, word length <= " +
               std::to_string(b.max_word_len) + ")";
  }
  return r;
}

}  // namespace

KReport analyze_k(const SystemSpec& spec, int k, const AnalysisOptions& options) {
  validate(spec);
  if (k < 1 || k > spec.d - 1) throw ArgumentError("analyze_k: k must be in 1..d-1");
  const bool interior = bracket_closure_dim(spec.A, spec.B) == spec.d * spec.d - 1;
  return analyze_k_with_interior(spec, k, interior, options);
}

AnalysisReport analyze(const SystemSpec& spec, const AnalysisOptions& options) {
  validate(spec);
  AnalysisReport report;
  report.spec = spec;
  report.budget = options.budget;
  report.closure_target = spec.d * spec.d - 1;
  report.closure_dim = bracket_closure_dim(spec.A, spec.B);
  report.algorithm1 = larc_algorithm1(spec.A, spec.B, report.closure_target);
  const bool interior = report.closure_dim == report.closure_target;
  report.larc_disagreement = report.algorithm1 != interior;

  std::vector<int> degrees = options.only_k;
  if (degrees.empty()) {
    for (int k = 1; k < spec.d; ++k) degrees.push_back(k);
  }
  for (int k : degrees) {
    if (k < 1 || k > spec.d - 1) throw ArgumentError("analyze: k must be in 1..d-1");
    report.per_k.push_back(analyze_k_with_interior(spec, k, interior, options));
  }

  bool all_cleared = interior && static_cast<int>(report.per_k.size()) == spec.d - 1;
  for (const KReport& r : report.per_k) {
    if (r.status == KStatus::kConeCertified) report.flag_type_estimate.insert(r.k);
    if (r.status == KStatus::kInconclusive) report.flag_type_candidates.insert(r.k);
    if (r.status != KStatus::kNoConeEvidence) all_cleared = false;
  }
  if (!report.flag_type_estimate.empty()) {
    report.verdict = Verdict::kNotControllable;
  } else if (all_cleared) {
    report.verdict = Verdict::kControllableEvidence;
  }
  return report;
}

namespace {

std::string join(const std::set<int>& s, const char* sep) {
  std::string out;
  for (int v : s) {
    if (!out.empty()) out += sep;
    out += std::to_string(v);
  }
  return out;
}

}  // namespace

std::string verdict_line(const AnalysisReport& report) {
  switch (report.verdict) {
    case Verdict::kNotControllable:
      return "verdict: NOT CONTROLLABLE (certified); flag type estimate: {" +
             join(report.flag_type_estimate, ",") + "}";
    case Verdict::kControllableEvidence: {
      std::set<int> ks;
      for (const KReport& r : report.per_k) ks.insert(r.k);
      return "verdict: CONTROLLABLE (evidence: non-pointed at k = " + join(ks, ",") + ")";
    }
    case Verdict::kInconclusive:
      return "verdict: INCONCLUSIVE; undecided degrees: {" +
             join(report.flag_type_candidates, ",") + "}";
  }
  return "verdict: ?";
}

std::string format_report(const AnalysisReport& report) {
  std::ostringstream os;
  os << "system: d = " << report.spec.d << ", seed = " << report.spec.rng_seed << "\n";
  os << "closure dim: " << report.closure_dim << "/" << report.closure_target
     << "; algorithm1: " << (report.algorithm1 ? "true" : "false");
  if (report.larc_disagreement) os << " (DISAGREES with closure dimension)";
  os << "\n";
  for (const KReport& r : report.per_k) {
    os << "k = " << r.k << ": " << to_string(r.status);
    if (!r.orthant_certs.empty()) {
      os << "; invariant orthants:";
      for (const auto& c : r.orthant_certs) os << ' ' << c.pattern.to_string() << " slack " << c.slack;
    }
    auto describe = [&](const NonPointedCertificate& c) {
      os << (c.mode == CertificateMode::kLinePair ? "line pair" : "hull") << " at degree " << c.k
         << (c.system == CertificateSystem::kInverse ? " of the inverse system" : "");
      if (c.mode == CertificateMode::kLinePair) {
        os << " (alignment " << c.alignment << ")";
      } else {
        os << " (" << c.hull_words.size() << " points, residual " << c.residual << ")";
      }
    };
    if (r.nonpointed_cert) {
      os << "; non-pointed: ";
      describe(*r.nonpointed_cert);
    }
    if (r.dual_nonpointed_cert) {
      os << "; dual non-pointed: ";
      describe(*r.dual_nonpointed_cert);
    }
    if (!r.reason.empty()) os << "; " << r.reason;
    os << "\n";
  }
  if (report.verdict == Verdict::kControllableEvidence) {
    os << "note: controllability is supported by sampled evidence (every degree has an orbit "
          "cone containing a line); it is not a proof\n";
  }
  os << verdict_line(report) << "\n";
  return os.str();
}

}  // namespace conelab
