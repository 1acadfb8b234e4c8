#include "conelab/report_io.hpp"

#include <fstream>
#include <sstream>

#include "conelab/larc.hpp"

namespace conelab {

using nlohmann::json;

namespace {

const json& field(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object()) throw InputError(ctx + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(ctx + ": missing field '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& ctx) {
  if (!j.is_number()) throw InputError(ctx + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& ctx) {
  if (!j.is_number_integer()) throw InputError(ctx + ": expected an integer");
  return j.get<int>();
}

Matrix matrix_from(const json& j, Eigen::Index rows, Eigen::Index cols, const std::string& ctx) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw InputError(ctx + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rctx = ctx + " row " + std::to_string(r + 1);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError(rctx + ": expected " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      M(r, c) = number(row[static_cast<std::size_t>(c)],
                       rctx + " column " + std::to_string(c + 1));
    }
  }
  return M;
}

json matrix_to(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json control_to(const ControlModel& m) {
  if (std::holds_alternative<UnboundedControl>(m)) return {{"type", "unbounded"}};
  if (const auto* s = std::get_if<ControlSet>(&m)) return {{"type", "set"}, {"values", s->values}};
  const auto& iv = std::get<ControlInterval>(m);
  return {{"type", "interval"}, {"lo", iv.lo}, {"hi", iv.hi}};
}

ControlModel control_from(const json& j) {
  const std::string ctx = "u_model";
  const json& type = field(j, "type", ctx);
  if (!type.is_string()) throw InputError("u_model.type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "unbounded") return UnboundedControl{};
  if (t == "set") {
    const json& v = field(j, "values", ctx);
    if (!v.is_array() || v.empty()) throw InputError("u_model.values: expected a non-empty array");
    ControlSet s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      s.values.push_back(number(v[i], "u_model.values[" + std::to_string(i) + "]"));
    }
    return s;
  }
  if (t == "interval") {
    ControlInterval iv{number(field(j, "lo", ctx), "u_model.lo"),
                       number(field(j, "hi", ctx), "u_model.hi")};
    if (!(iv.lo <= iv.hi)) throw InputError("u_model: interval needs lo <= hi");
    return iv;
  }
  throw InputError("u_model.type: unknown value '" + t + "' (unbounded | set | interval)");
}

SystemSpec system_from(const json& j) {
  SystemSpec spec;
  spec.d = integer(field(j, "d", "system"), "d");
  if (spec.d < 2) throw InputError("d: must be at least 2");
  spec.A = matrix_from(field(j, "A", "system"), spec.d, spec.d, "A");
  spec.B = matrix_from(field(j, "B", "system"), spec.d, spec.d, "B");
  if (j.contains("u_model")) spec.u_model = control_from(j["u_model"]);
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw InputError("seed: expected a non-negative integer");
    }
    spec.rng_seed = s.get<std::uint64_t>();
  }
  for (const auto& [name, M] : {std::pair{"A", &spec.A}, std::pair{"B", &spec.B}}) {
    if (std::abs(M->trace()) > 1e-9) {
      std::ostringstream os;
      os << name << ": trace is " << M->trace() << ", must be 0 within 1e-9 (A, B in sl(d,R))";
      throw InputError(os.str());
    }
  }
  try {
    validate(spec);
  } catch (const ArgumentError& e) {
    throw InputError(e.what());
  }
  return spec;
}

json word_to(const SemigroupWord& w) {
  json out = json::array();
  for (const Letter& l : w.letters) out.push_back({l.t, l.u});
  return out;
}

SemigroupWord word_from(const json& j) {
  SemigroupWord w;
  if (!j.is_array()) throw InputError("word: expected an array of [t, u] pairs");
  for (const json& l : j) {
    if (!l.is_array() || l.size() != 2) throw InputError("word: expected [t, u] pairs");
    w.letters.push_back({number(l[0], "word.t"), number(l[1], "word.u")});
  }
  return w;
}

json cert_to(const NonPointedCertificate& c) {
  json j = {{"k", c.k},
            {"system", c.system == CertificateSystem::kInverse ? "inverse" : "direct"},
            {"mode", c.mode == CertificateMode::kLinePair ? "line-pair" : "hull"},
            {"seed_basis", matrix_to(c.seed_basis)}};
  if (c.mode == CertificateMode::kLinePair) {
    j["word_a"] = word_to(c.word_a);
    j["word_b"] = word_to(c.word_b);
    j["alignment"] = c.alignment;
  } else {
    json words = json::array();
    for (const auto& w : c.hull_words) words.push_back(word_to(w));
    j["hull_words"] = std::move(words);
    j["hull_coefficients"] = c.hull_coefficients;
    j["residual"] = c.residual;
  }
  return j;
}

NonPointedCertificate cert_from(const json& j, int d) {
  NonPointedCertificate c;
  c.k = integer(field(j, "k", "certificate"), "certificate.k");
  if (c.k < 1 || c.k >= d) throw InputError("certificate.k: out of range");
  c.system = field(j, "system", "certificate").get<std::string>() == "inverse"
                 ? CertificateSystem::kInverse
                 : CertificateSystem::kDirect;
  const std::string mode = field(j, "mode", "certificate").get<std::string>();
  c.seed_basis = matrix_from(field(j, "seed_basis", "certificate"), d, c.k, "certificate.seed_basis");
  if (mode == "line-pair") {
    c.mode = CertificateMode::kLinePair;
    c.word_a = word_from(field(j, "word_a", "certificate"));
    c.word_b = word_from(field(j, "word_b", "certificate"));
    c.alignment = number(field(j, "alignment", "certificate"), "certificate.alignment");
  } else if (mode == "hull") {
    c.mode = CertificateMode::kHull;
    for (const json& w : field(j, "hull_words", "certificate")) c.hull_words.push_back(word_from(w));
    c.hull_coefficients = field(j, "hull_coefficients", "certificate").get<std::vector<double>>();
    c.residual = number(field(j, "residual", "certificate"), "certificate.residual");
  } else {
    throw InputError("certificate.mode: unknown value '" + mode + "'");
  }
  return c;
}

KStatus status_from(const std::string& s) {
  if (s == "ConeCertified") return KStatus::kConeCertified;
  if (s == "NoConeEvidence") return KStatus::kNoConeEvidence;
  if (s == "Inconclusive") return KStatus::kInconclusive;
  throw InputError("status: unknown value '" + s + "'");
}

Verdict verdict_from(const std::string& s) {
  if (s == "NotControllable") return Verdict::kNotControllable;
  if (s == "ControllableEvidence") return Verdict::kControllableEvidence;
  if (s == "Inconclusive") return Verdict::kInconclusive;
  throw InputError("verdict: unknown value '" + s + "'");
}

}  // namespace

SystemFile parse_system_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  SystemFile out;
  out.spec = system_from(j);
  if (j.contains("budget")) out.budget = budget_from_json(j["budget"]);
  return out;
}

SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_system_file(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

json system_to_json(const SystemSpec& spec) {
  return {{"d", spec.d},
          {"A", matrix_to(spec.A)},
          {"B", matrix_to(spec.B)},
          {"u_model", control_to(spec.u_model)},
          {"seed", spec.rng_seed}};
}

json budget_to_json(const SearchBudget& b) {
  return {{"n_seeds", b.n_seeds},
          {"words_per_seed", b.words_per_seed},
          {"max_word_len", b.max_word_len},
          {"t_max", b.t_max},
          {"attractor_every", b.attractor_every},
          {"attractor_power", b.attractor_power},
          {"attractor_iters", b.attractor_iters},
          {"special_times", b.special_times},
          {"antipodal_delta", b.antipodal_delta},
          {"hull_eps", b.hull.eps},
          {"hull_margin", b.hull.margin},
          {"u_grid", b.sampling.u_grid},
          {"heavy_tail_fraction", b.sampling.heavy_tail_fraction},
          {"heavy_tail_scale", b.sampling.heavy_tail_scale},
          {"max_letter_norm", b.sampling.max_letter_norm}};
}

SearchBudget budget_from_json(const json& j, SearchBudget b) {
  if (!j.is_object()) throw InputError("budget: expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string ctx = "budget." + key;
    if (key == "n_seeds") b.n_seeds = integer(value, ctx);
    else if (key == "words_per_seed") b.words_per_seed = integer(value, ctx);
    else if (key == "max_word_len") b.max_word_len = integer(value, ctx);
    else if (key == "t_max") b.t_max = number(value, ctx);
    else if (key == "attractor_every") b.attractor_every = integer(value, ctx);
    else if (key == "attractor_power") b.attractor_power = integer(value, ctx);
    else if (key == "attractor_iters") b.attractor_iters = integer(value, ctx);
    else if (key == "special_times") b.special_times = value.get<std::vector<double>>();
    else if (key == "antipodal_delta") b.antipodal_delta = number(value, ctx);
    else if (key == "hull_eps") b.hull.eps = number(value, ctx);
    else if (key == "hull_margin") b.hull.margin = number(value, ctx);
    else if (key == "u_grid") b.sampling.u_grid = value.get<std::vector<double>>();
    else if (key == "heavy_tail_fraction") b.sampling.heavy_tail_fraction = number(value, ctx);
    else if (key == "heavy_tail_scale") b.sampling.heavy_tail_scale = number(value, ctx);
    else if (key == "max_letter_norm") b.sampling.max_letter_norm = number(value, ctx);
    else throw InputError(ctx + ": unknown budget field");
  }
  if (b.n_seeds < 1 || b.words_per_seed < 0 || b.max_word_len < 1 || !(b.t_max > 0) ||
      b.sampling.u_grid.empty()) {
    throw InputError("budget: values out of range");
  }
  return b;
}

json report_to_json(const AnalysisReport& r) {
  json per_k = json::array();
  for (const KReport& k : r.per_k) {
    json orthants = json::array();
    for (const auto& c : k.orthant_certs) {
      orthants.push_back({{"k", c.k}, {"pattern", c.pattern.signs}, {"slack", c.slack}});
    }
    per_k.push_back({{"k", k.k},
                     {"larc_interior", k.larc_interior},
                     {"status", to_string(k.status)},
                     {"reason", k.reason},
                     {"directions_sampled", k.directions_sampled},
                     {"orthant_certificates", std::move(orthants)},
                     {"nonpointed_certificate",
                      k.nonpointed_cert ? cert_to(*k.nonpointed_cert) : json(nullptr)},
                     {"dual_nonpointed_certificate",
                      k.dual_nonpointed_cert ? cert_to(*k.dual_nonpointed_cert) : json(nullptr)}});
  }
  return {{"system", system_to_json(r.spec)},
          {"budget", budget_to_json(r.budget)},
          {"closure_dim", r.closure_dim},
          {"closure_target", r.closure_target},
          {"algorithm1", r.algorithm1},
          {"larc_disagreement", r.larc_disagreement},
          {"per_k", std::move(per_k)},
          {"flag_type_estimate", r.flag_type_estimate},
          {"flag_type_candidates", r.flag_type_candidates},
          {"verdict", to_string(r.verdict)},
          {"verdict_line", verdict_line(r)}};
}

AnalysisReport report_from_json(const json& j) {
  AnalysisReport r;
  r.spec = system_from(field(j, "system", "report"));
  r.budget = budget_from_json(field(j, "budget", "report"));
  r.closure_dim = integer(field(j, "closure_dim", "report"), "closure_dim");
  r.closure_target = integer(field(j, "closure_target", "report"), "closure_target");
  r.algorithm1 = field(j, "algorithm1", "report").get<bool>();
  r.larc_disagreement = field(j, "larc_disagreement", "report").get<bool>();
  for (const json& kj : field(j, "per_k", "report")) {
    KReport k;
    k.k = integer(field(kj, "k", "per_k"), "per_k.k");
    k.larc_interior = field(kj, "larc_interior", "per_k").get<bool>();
    k.status = status_from(field(kj, "status", "per_k").get<std::string>());
    k.reason = field(kj, "reason", "per_k").get<std::string>();
    k.directions_sampled = integer(field(kj, "directions_sampled", "per_k"), "directions_sampled");
    for (const json& oc : field(kj, "orthant_certificates", "per_k")) {
      k.orthant_certs.push_back({integer(field(oc, "k", "orthant"), "orthant.k"),
                                 SignPattern{field(oc, "pattern", "orthant").get<std::vector<int>>()},
                                 number(field(oc, "slack", "orthant"), "orthant.slack")});
    }
    const json& np = field(kj, "nonpointed_certificate", "per_k");
    if (!np.is_null()) k.nonpointed_cert = cert_from(np, r.spec.d);
    const json& dual = field(kj, "dual_nonpointed_certificate", "per_k");
    if (!dual.is_null()) k.dual_nonpointed_cert = cert_from(dual, r.spec.d);
    r.per_k.push_back(std::move(k));
  }
  r.flag_type_estimate = field(j, "flag_type_estimate", "report").get<std::set<int>>();
  r.flag_type_candidates = field(j, "flag_type_candidates", "report").get<std::set<int>>();
  r.verdict = verdict_from(field(j, "verdict", "report").get<std::string>());
  return r;
}

json make_report_file(const AnalysisReport& report, const Timing* timing) {
  json j = {{"tool", "conelab"}, {"version", kToolVersion}, {"report", report_to_json(report)}};
  if (timing) {
    j["timing"] = {{"total_seconds", timing->total_seconds},
                   {"per_k_seconds", timing->per_k_seconds}};
  }
  return j;
}

std::vector<VerificationItem> verify_report_file(const json& file) {
  const AnalysisReport r = report_from_json(field(file, "report", "report file"));
  std::vector<VerificationItem> items;
  auto add = [&](std::string what, bool ok) { items.push_back({std::move(what), ok}); };

  const int closure = bracket_closure_dim(r.spec.A, r.spec.B);
  add("closure dimension " + std::to_string(r.closure_dim), closure == r.closure_dim);
  const bool interior = closure == r.spec.d * r.spec.d - 1;
  const CertificateTolerances tol{r.budget.antipodal_delta, r.budget.hull};

  std::set<int> certified, undecided;
  bool all_cleared = interior && static_cast<int>(r.per_k.size()) == r.spec.d - 1;
  for (const KReport& k : r.per_k) {
    const std::string at = "k=" + std::to_string(k.k) + ": ";
    for (const auto& c : k.orthant_certs) {
      add(at + "orthant " + c.pattern.to_string(), c.k == k.k && verify_orthant_certificate(r.spec, c));
    }
    if (k.nonpointed_cert) {
      add(at + "non-pointedness certificate",
          k.nonpointed_cert->k == k.k && k.nonpointed_cert->system == CertificateSystem::kDirect &&
              verify_nonpointed_certificate(r.spec, *k.nonpointed_cert, tol));
    }
    if (k.dual_nonpointed_cert) {
      add(at + "dual non-pointedness certificate",
          k.dual_nonpointed_cert->k == r.spec.d - k.k &&
              k.dual_nonpointed_cert->system == CertificateSystem::kInverse &&
              verify_nonpointed_certificate(r.spec, *k.dual_nonpointed_cert, tol));
    }
    const bool has_orthant = !k.orthant_certs.empty();
    const bool has_line = k.nonpointed_cert || k.dual_nonpointed_cert;
    add(at + "orthant and line evidence are exclusive", !(has_orthant && has_line));
    KStatus expected = KStatus::kInconclusive;
    if (has_orthant) expected = KStatus::kConeCertified;
    else if (has_line) expected = KStatus::kNoConeEvidence;
    add(at + "status " + to_string(k.status), k.status == expected);
    if (k.status == KStatus::kConeCertified) certified.insert(k.k);
    if (k.status == KStatus::kInconclusive) undecided.insert(k.k);
    if (k.status != KStatus::kNoConeEvidence) all_cleared = false;
  }
  Verdict expected = Verdict::kInconclusive;
  if (!certified.empty()) expected = Verdict::kNotControllable;
  else if (all_cleared) expected = Verdict::kControllableEvidence;
  add("verdict " + to_string(r.verdict), r.verdict == expected);
  add("flag type estimate", r.flag_type_estimate == certified && r.flag_type_candidates == undecided);
  return items;
}

}  // namespace conelab
