#pragma once

// Combining per-degree evidence into a controllability verdict.
//
// The system is controllable iff no exterior power k = 1..d-1 carries a
// cone invariant under the system semigroup (given int S nonempty). An
// invariant orthant proves a cone exists at k. A line in the cone generated
// by an orbit proves no invariant cone contains that orbit; finding one at
// every k is evidence, not proof, of controllability.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conelab/dynamics.hpp"
#include "conelab/orthant.hpp"
#include "conelab/system.hpp"

namespace conelab {

enum class KStatus { kConeCertified, kNoConeEvidence, kInconclusive };
enum class Verdict { kNotControllable, kControllableEvidence, kInconclusive };

std::string to_string(KStatus s);
std::string to_string(Verdict v);

struct KReport {
  int k = 0;
  bool larc_interior = false;
  std::vector<OrthantCertificate> orthant_certs;
  std::optional<NonPointedCertificate> nonpointed_cert;
  /// Evidence at degree d-k for the inverse system.
  std::optional<NonPointedCertificate> dual_nonpointed_cert;
  KStatus status = KStatus::kInconclusive;
  std::string reason;  ///< set when Inconclusive
  int directions_sampled = 0;

  bool operator==(const KReport&) const = default;
};

struct AnalysisOptions {
  SearchBudget budget;
  /// Also run the line search when an orthant is found and fail with
  /// ConsistencyError if both succeed.
  bool audit_exclusion = false;
  /// Limit the analysis to these degrees (empty: all of 1..d-1).
  std::vector<int> only_k;
};

struct AnalysisReport {
  SystemSpec spec;
  SearchBudget budget;
  int closure_dim = 0;
  int closure_target = 0;
  bool algorithm1 = false;
  bool larc_disagreement = false;
  std::vector<KReport> per_k;
  std::set<int> flag_type_estimate;  ///< degrees with ConeCertified
  std::set<int> flag_type_candidates;  ///< degrees with Inconclusive
  Verdict verdict = Verdict::kInconclusive;

  bool operator==(const AnalysisReport&) const;
};

/// Orthant search, then the line search at k, then the line search at d-k
/// on the inverse system. Capacity errors make the status Inconclusive.
KReport analyze_k(const SystemSpec& spec, int k, const AnalysisOptions& options = {});

/// The semigroup of a bilinear system is path connected, which the cone
/// arguments assume; it is not checked. Throws ArgumentError for an invalid
/// system (e.g. non-traceless A or B).
AnalysisReport analyze(const SystemSpec& spec, const AnalysisOptions& options = {});

/// One line, e.g. "verdict: NOT CONTROLLABLE (certified); flag type
/// estimate: {2}".
std::string verdict_line(const AnalysisReport& report);

/// Multi-line human-readable report ending with verdict_line.
std::string format_report(const AnalysisReport& report);

}  // namespace conelab
