#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "conelab/exterior.hpp"
#include "conelab/larc.hpp"
#include "conelab/orthant.hpp"
#include "conelab/report_io.hpp"
#include "conelab/verdict.hpp"

namespace conelab {
namespace {

std::string defaults_footer() {
  const SearchBudget b;
  std::ostringstream os;
  os << "Defaults: seed 42; budget " << b.n_seeds << " seeds x " << b.words_per_seed
     << " words, word length <= " << b.max_word_len << ", t_max " << b.t_max
     << ", antipodal delta " << b.antipodal_delta << ", hull eps " << b.hull.eps
     << ", witness margin " << b.hull.margin << ", orthant tol " << kOrthantTol
     << ", independence eps " << kLarcEps
     << ".\nEnvironment: CONELAB_THREADS caps the number of worker threads.";
  return os.str();
}

void print_matrix(std::ostream& out, const Matrix& M, const TablePtr& table) {
  out << std::setprecision(10);
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    out << std::setw(12) << (*table)[static_cast<int>(r)].to_string();
    for (Eigen::Index c = 0; c < M.cols(); ++c) out << ' ' << std::setw(16) << M(r, c);
    out << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conelab: invariant cones and controllability of bilinear systems x' = Ax + uBx"};
  app.footer(defaults_footer());
  app.require_subcommand(1);

  std::string file;
  int k = 0;
  bool additive = false;
  std::string json_out;
  bool strict = false;
  bool no_timing = false;
  std::uint64_t seed = 0;

  auto* larc_cmd = app.add_subcommand("larc", "Algorithm 1 and the bracket closure dimension");
  larc_cmd->add_option("file", file, "system file (JSON)")->required();

  auto* compound_cmd = app.add_subcommand("compound", "print compound matrices of A and B");
  compound_cmd->add_option("file", file, "system file (JSON)")->required();
  compound_cmd->add_option("--k", k, "exterior degree")->required();
  compound_cmd->add_flag("--additive", additive, "additive instead of multiplicative compounds");

  auto* orthants_cmd = app.add_subcommand("orthants", "invariant orthant certificates at degree k");
  orthants_cmd->add_option("file", file, "system file (JSON)")->required();
  orthants_cmd->add_option("--k", k, "exterior degree")->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "full controllability analysis");
  analyze_cmd->add_option("file", file, "system file (JSON)")->required();
  analyze_cmd->add_option("--k", k, "analyze only this degree");
  analyze_cmd->add_option("--json", json_out, "write the report file here");
  analyze_cmd->add_flag("--strict", strict, "exit 1 when the verdict is inconclusive");
  analyze_cmd->add_flag("--no-timing", no_timing, "omit elapsed times from the report file");
  auto* seed_opt = analyze_cmd->add_option("--seed", seed, "override the file's RNG seed");

  auto* verify_cmd = app.add_subcommand("verify", "re-check every certificate in a report file");
  verify_cmd->add_option("report", file, "report file (JSON)")->required();

  std::vector<std::string> argv_tail(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (larc_cmd->parsed()) {
      const SystemFile sf = load_system_file(file);
      const int target = sf.spec.d * sf.spec.d - 1;
      const bool alg1 = larc_algorithm1(sf.spec.A, sf.spec.B, target);
      const int dim = bracket_closure_dim(sf.spec.A, sf.spec.B);
      out << "algorithm1: " << (alg1 ? "true" : "false") << "; closure dim: " << dim << "/"
          << target << "\n";
      if (alg1 != (dim == target)) out << "warning: algorithm1 disagrees with the closure dimension\n";
      return 0;
    }
    if (compound_cmd->parsed()) {
      const SystemFile sf = load_system_file(file);
      if (k < 1 || k > sf.spec.d) throw InputError("--k must be in 1..d");
      for (const auto& [name, M] : {std::pair{"A", &sf.spec.A}, std::pair{"B", &sf.spec.B}}) {
        const auto c = additive ? additive_compound(*M, k) : compound_matrix(*M, k);
        out << (additive ? "additive" : "multiplicative") << " compound of " << name << ", k = " << k
            << " (" << c.table->size() << "x" << c.table->size() << ")\n";
        print_matrix(out, c.entries, c.table);
      }
      return 0;
    }
    if (orthants_cmd->parsed()) {
      const SystemFile sf = load_system_file(file);
      if (k < 1 || k >= sf.spec.d) throw InputError("--k must be in 1..d-1");
      const auto certs = family_invariant_orthants(sf.spec, k);
      if (certs.empty()) {
        out << "k = " << k << ": no invariant orthant\n";
        const auto c = orthant_constraints(sf.spec, k);
        const auto search = find_invariant_orthants(c.generators);
        if (search.conflict) out << "  conflict: " << search.conflict->to_string() << "\n";
        if (c.must_be_diagonal && search.patterns.size() > 0) {
          out << "  off-diagonal entries of the B compound do not vanish (u unbounded)\n";
        }
      }
      for (const auto& c : certs) {
        out << "k = " << k << ": invariant orthant " << c.pattern.to_string() << " slack " << c.slack
            << "\n";
      }
      return 0;
    }
    if (analyze_cmd->parsed()) {
      SystemFile sf = load_system_file(file);
      if (*seed_opt) sf.spec.rng_seed = seed;
      AnalysisOptions options;
      options.budget = sf.budget;
      if (k != 0) options.only_k = {k};
      const auto t0 = std::chrono::steady_clock::now();
      const AnalysisReport report = analyze(sf.spec, options);
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out << format_report(report);
      if (!json_out.empty()) {
        Timing timing{elapsed, {}};
        const auto j = make_report_file(report, no_timing ? nullptr : &timing);
        std::ofstream f(json_out);
        if (!f) throw InputError("cannot write '" + json_out + "'");
        f << j.dump(2) << "\n";
      }
      if (strict && report.verdict == Verdict::kInconclusive) return 1;
      return 0;
    }
    if (verify_cmd->parsed()) {
      std::ifstream in(file);
      if (!in) throw InputError("cannot open '" + file + "'");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw InputError(file + ": malformed JSON: " + e.what());
      }
      const auto items = verify_report_file(j);
      bool all = true;
      for (const auto& item : items) {
        out << (item.ok ? "ok   " : "FAIL ") << item.what << "\n";
        all = all && item.ok;
      }
      out << (all ? "verified" : "verification FAILED") << "\n";
      return all ? 0 : 1;
    }
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return 1;
  } catch (const ArgumentError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace conelab
