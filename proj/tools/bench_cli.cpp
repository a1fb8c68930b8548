// omd_bench: builds a benchmark instance, runs the selected mirror-descent
// algorithms on it, verifies the theoretical bounds and emits a result
// table (markdown, CSV or JSON). Can also re-audit a stored trace file.
//
// Exit codes: 0 all runs completed and all bound checks passed;
//             1 a bound check or trace audit failed;
//             2 usage or parse error;
//             3 step budget exhausted (partial results were emitted).

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "omd/problem_gen.hpp"
#include "omd/serialize.hpp"
#include "omd/solver.hpp"

namespace {

struct BenchRow {
  std::string example;
  int algorithm = 0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  std::int64_t nonproductive = 0;
  double elapsed_seconds = 0.0;
  double delta = 0.0;
  double regret = 0.0;
  bool bounds_passed = false;
};

// One formatter for every output format, so the numeric fields agree
// byte-for-byte across md, csv and json.
std::string num(double v) { return nlohmann::json(v).dump(); }

std::string render_markdown(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "| example | algorithm | N | seed | eps | nonprod. | time | delta | "
         "regret | bounds |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const BenchRow& r : rows) {
    out << "| ex. " << r.example << ", N=" << r.n << " | " << r.algorithm
        << " | " << r.n << " | " << r.seed << " | " << num(r.eps) << " | "
        << r.nonproductive << " | " << num(r.elapsed_seconds) << " | "
        << num(r.delta) << " | " << num(r.regret) << " | "
        << (r.bounds_passed ? "pass" : "FAIL") << " |\n";
  }
  return out.str();
}

std::string render_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "example,algorithm,n,seed,eps,nonproductive,time_seconds,delta,"
         "regret,bounds_passed\n";
  for (const BenchRow& r : rows) {
    out << r.example << ',' << r.algorithm << ',' << r.n << ',' << r.seed
        << ',' << num(r.eps) << ',' << r.nonproductive << ','
        << num(r.elapsed_seconds) << ',' << num(r.delta) << ',' << num(r.regret)
        << ',' << (r.bounds_passed ? "true" : "false") << '\n';
  }
  return out.str();
}

// Wall-clock time is deliberately excluded from the JSON report so that
// identical flags and seed reproduce it byte-for-byte.
std::string render_json(const std::vector<BenchRow>& rows) {
  nlohmann::json jrows = nlohmann::json::array();
  for (const BenchRow& r : rows) {
    jrows.push_back({{"example", r.example},
                     {"algorithm", r.algorithm},
                     {"n", r.n},
                     {"seed", r.seed},
                     {"eps", r.eps},
                     {"nonproductive", r.nonproductive},
                     {"delta", r.delta},
                     {"regret", r.regret},
                     {"bounds_passed", r.bounds_passed}});
  }
  return nlohmann::json{{"rows", std::move(jrows)}}.dump(2) + "\n";
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
  out << text;
}

int run_verify(const std::string& path) {
  omd::TraceFile file = [] { return omd::TraceFile{omd::RunConfig{}, omd::ProxSetup::euclidean_ball(1), 0.0, {}, {}, {}}; }();
  try {
    file = omd::load_trace(path);
  } catch (const std::exception& e) {
    std::cerr << "verify: cannot parse '" << path << "': " << e.what() << "\n";
    return 2;
  }
  const std::vector<std::string> failures = omd::audit_trace(file);
  if (failures.empty()) {
    std::cout << "verify: " << path << ": all checks passed\n";
    return 0;
  }
  for (const std::string& f : failures)
    std::cout << "verify: " << path << ": FAILED: " << f << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Constrained online convex optimization by mirror descent: benchmark "
      "runner and trace auditor"};

  std::string example;
  std::int64_t n_override = 0;
  std::vector<int> algorithms{1, 2, 3};
  double eps_override = 0.0;
  std::uint64_t seed = 0;
  std::string format = "md";
  std::string out_path;
  std::string trace_out;
  bool trace_iterates = false;
  std::int64_t comparator_iters = 20000;
  std::uint64_t max_steps = 0;
  std::string verify_path;

  app.add_option("--example", example,
                 "instance family: 1 (normal), 2 (uniform), 3 (exponential), "
                 "4 (gumbel) or remark4 (the deterministic example)");
  app.add_option("--n", n_override, "number of productive steps N");
  app.add_option("--algorithms", algorithms,
                 "algorithms to run: 1 (non-adaptive), 2 (adaptive), "
                 "3 (adaptive, per-constraint)")
      ->delimiter(',');
  app.add_option("--eps", eps_override, "override the default accuracy eps");
  app.add_option("--seed", seed, "instance seed (always echoed in the output)");
  app.add_option("--format", format, "output format: md, csv or json")
      ->check(CLI::IsMember({"md", "csv", "json"}));
  app.add_option("--out", out_path, "write the table here instead of stdout");
  app.add_option("--trace-out", trace_out,
                 "dump the full run trace to this JSON file (suffixed "
                 ".algN.json when several algorithms run)");
  app.add_flag("--trace-iterates", trace_iterates,
               "include per-step iterates in trace dumps");
  app.add_option("--comparator-iters", comparator_iters,
                 "iterations for the offline comparator used by the regret "
                 "column");
  app.add_option("--max-steps", max_steps,
                 "cap on total solver steps (default: the worst-case bound)");
  app.add_option("--verify", verify_path,
                 "re-audit a stored trace file and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!verify_path.empty()) return run_verify(verify_path);

    if (example.empty()) {
      std::cerr << "usage error: --example is required (or use --verify)\n";
      return 2;
    }

    omd::GeneratorSpec spec;
    std::int64_t default_n = 0;
    if (example == "1") {
      spec.family = omd::Family::Normal;
      default_n = 3000;
    } else if (example == "2") {
      spec.family = omd::Family::Uniform;
      default_n = 6000;
    } else if (example == "3") {
      spec.family = omd::Family::Exponential;
      default_n = 7000;
    } else if (example == "4") {
      spec.family = omd::Family::Gumbel;
      default_n = 10000;
    } else if (example == "remark4") {
      spec.family = omd::Family::SqrtQuadraticTrio;
      default_n = 3;
    } else {
      std::cerr << "usage error: unknown example '" << example << "'\n";
      return 2;
    }
    spec.seed = seed;
    spec.n_objectives = n_override > 0 ? n_override : default_n;

    for (int a : algorithms) {
      if (a < 1 || a > 3) {
        std::cerr << "usage error: unknown algorithm '" << a << "'\n";
        return 2;
      }
    }
    // Rows are emitted in algorithm order regardless of flag order.
    std::sort(algorithms.begin(), algorithms.end());
    algorithms.erase(std::unique(algorithms.begin(), algorithms.end()),
                     algorithms.end());

    const omd::ProblemInstance instance = omd::generate(spec);
    omd::RunConfig base = omd::default_run_params(spec);
    if (eps_override > 0.0) base.eps = eps_override;
    base.max_total_steps = max_steps;

    std::optional<double> comparator_value;
    auto comparator = [&]() -> double {
      if (!comparator_value)
        comparator_value =
            omd::offline_comparator(instance, comparator_iters).value;
      return *comparator_value;
    };

    std::vector<BenchRow> rows;
    bool all_bounds_passed = true;
    bool budget_exhausted = false;

    for (int a : algorithms) {
      omd::RunConfig config = base;
      config.algorithm = a == 1   ? omd::Algorithm::NonAdaptive
                         : a == 2 ? omd::Algorithm::Adaptive
                                  : omd::Algorithm::AdaptiveMulti;
      BenchRow row;
      row.example = example;
      row.algorithm = a;
      row.n = config.n_productive;
      row.seed = seed;
      row.eps = config.eps;

      try {
        const omd::RunReport report = omd::run(instance, config);
        const double regret_value =
            omd::regret(report, instance, comparator());
        const omd::BoundCheckResult bounds = omd::check_bounds(
            report, config, instance.lipschitz, instance.setup.theta0(),
            regret_value);

        row.nonproductive = report.n_nonproductive;
        row.elapsed_seconds = report.elapsed_seconds;
        row.delta = report.delta;
        row.regret = regret_value;
        row.bounds_passed = bounds.all_passed();
        all_bounds_passed = all_bounds_passed && row.bounds_passed;

        if (!trace_out.empty()) {
          std::string path = trace_out;
          if (algorithms.size() > 1)
            path += ".alg" + std::to_string(a) + ".json";
          omd::TraceFile file{config, instance.setup, instance.lipschitz,
                              report, regret_value, comparator()};
          omd::save_trace(file, path, trace_iterates);
        }
      } catch (const omd::BudgetExhausted& e) {
        std::cerr << "algorithm " << a << ": " << e.what() << " ("
                  << e.partial().n_productive << " productive, "
                  << e.partial().n_nonproductive << " non-productive)\n";
        row.nonproductive = e.partial().n_nonproductive;
        row.elapsed_seconds = e.partial().elapsed_seconds;
        row.delta = std::numeric_limits<double>::quiet_NaN();
        row.regret = std::numeric_limits<double>::quiet_NaN();
        row.bounds_passed = false;
        budget_exhausted = true;
      }
      rows.push_back(std::move(row));
    }

    const std::string text = format == "md"    ? render_markdown(rows)
                             : format == "csv" ? render_csv(rows)
                                               : render_json(rows);
    write_output(text, out_path);

    if (budget_exhausted) return 3;
    return all_bounds_passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
