// Command-line front end. Exit codes: 0 ok, 1 other failure, 2 usage or
// validation, 3 infeasible, 4 search budget exhausted.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "pcc/bench.hpp"
#include "pcc/error.hpp"
#include "pcc/evaluation.hpp"
#include "pcc/exact.hpp"
#include "pcc/heuristics.hpp"
#include "pcc/io.hpp"
#include "pcc/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitBudget = 4;

int report_error(std::string_view kind, const std::string& message, int code) {
  std::cerr << pcc::Json{{"error", std::string(kind)}, {"message", message}}.dump() << "\n";
  return code;
}

int exit_code_for(pcc::ErrorKind kind) {
  switch (kind) {
    case pcc::ErrorKind::kUsage:
    case pcc::ErrorKind::kParse:
    case pcc::ErrorKind::kInstanceInvalid:
    case pcc::ErrorKind::kInvalidParams:
    case pcc::ErrorKind::kIndex:
    case pcc::ErrorKind::kEvaluation:
    case pcc::ErrorKind::kSize:
    case pcc::ErrorKind::kGeneration:
      return kExitUsage;
    default:
      return kExitOther;
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    pcc::write_text_file(path, text);
  }
}

// "field=value" or "field=lo:hi" overrides on top of a params file.
pcc::ScenarioParams load_params(const std::string& file, const std::vector<std::string>& overrides) {
  pcc::ScenarioParams params;
  if (!file.empty()) {
    pcc::Json json;
    try {
      json = pcc::Json::parse(pcc::read_text_file(file));
    } catch (const pcc::Json::parse_error& e) {
      throw pcc::Error(pcc::ErrorKind::kParse, file + ": " + e.what());
    }
    params = pcc::params_from_json(json, params);
  }
  pcc::Json patch = pcc::Json::object();
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw pcc::Error(pcc::ErrorKind::kUsage, "--set expects field=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    const auto colon = value.find(':');
    try {
      if (colon == std::string::npos) {
        patch[key] = pcc::Json::parse(value);
      } else {
        patch[key] = {pcc::Json::parse(value.substr(0, colon)), pcc::Json::parse(value.substr(colon + 1))};
      }
    } catch (const pcc::Json::parse_error&) {
      throw pcc::Error(pcc::ErrorKind::kInvalidParams, key + ": not a number");
    }
  }
  return pcc::params_from_json(patch, params);
}

pcc::ProblemInstance load_valid_instance(const std::string& path) {
  auto instance = pcc::load_instance(path);
  const auto violations = pcc::validate_instance(instance);
  if (!violations.empty()) {
    std::string message;
    for (const auto& v : violations) {
      if (!message.empty()) message += "; ";
      message += std::string(pcc::to_string(v.code)) + ": " + v.detail;
    }
    throw pcc::Error(pcc::ErrorKind::kInstanceInvalid, message);
  }
  return instance;
}

pcc::Json unplaced_to_json(const pcc::ProblemInstance& instance,
                           const std::vector<pcc::UnplacedFunction>& unplaced) {
  pcc::Json out = pcc::Json::array();
  for (const auto& u : unplaced) {
    out.push_back({{"request", instance.requests[u.request].id},
                   {"position", u.position + 1},
                   {"nf", instance.catalog[u.nf].name}});
  }
  return out;
}

struct SolveOptions {
  std::string instance;
  std::string algo;
  std::string out;
  std::uint64_t max_nodes = pcc::SearchBudget{}.max_nodes_expanded;
  std::int64_t time_limit_ms = pcc::SearchBudget{}.wall_time.count();
  double penalty = -1;
  std::string spba_origin = "nearest-head";
};

int run_solve(const SolveOptions& opt) {
  const auto instance = load_valid_instance(opt.instance);
  const auto paths = pcc::shortest_paths(instance.network, instance.relevant_nodes());
  pcc::HeuristicOptions heuristic;
  if (opt.penalty >= 0) heuristic.penalty_per_position = opt.penalty;
  heuristic.spba_origin =
      opt.spba_origin == "gateway" ? pcc::SpbaOrigin::kGateway : pcc::SpbaOrigin::kNearestHead;

  pcc::Json out{{"algorithm", opt.algo}};
  int code = kExitOk;
  pcc::CostReport cost;
  pcc::Placement placement;
  const auto algorithm = pcc::parse_algorithm(opt.algo);
  if (algorithm == pcc::Algorithm::kExact) {
    const auto result = pcc::solve_exact(
        instance, paths, {opt.max_nodes, std::chrono::milliseconds(opt.time_limit_ms)});
    out["status"] = std::string(pcc::to_string(result.status));
    out["nodes_expanded"] = result.nodes_expanded;
    placement = result.placement;
    cost = result.cost;
    if (result.status == pcc::ProofStatus::kInfeasible) code = kExitInfeasible;
    if (result.status == pcc::ProofStatus::kBudgetExceeded) code = kExitBudget;
  } else {
    pcc::HeuristicResult result;
    if (algorithm == pcc::Algorithm::kPpcc) result = pcc::ppcc(instance, paths, heuristic);
    if (algorithm == pcc::Algorithm::kSpba) result = pcc::spba(instance, paths, heuristic);
    if (algorithm == pcc::Algorithm::kAgw) result = pcc::agw(instance, paths);
    placement = result.placement;
    cost = result.cost;
    out["unplaced"] = unplaced_to_json(instance, result.unplaced);
  }
  out["placement"] = pcc::placement_to_json(instance, placement);
  out["cost"] = pcc::cost_report_to_json(cost);
  if (!opt.out.empty()) pcc::write_text_file(opt.out, out.dump(2) + "\n");
  if (code == kExitInfeasible) {
    return report_error("Infeasible", "no placement satisfies the constraints", code);
  }
  std::cout << pcc::format_double(cost.total) << "\n";
  if (code == kExitBudget) {
    return report_error("BudgetExceeded", "search budget exhausted before proving optimality", code);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Placement of network-function chains with mobility-aware caching"};
  app.require_subcommand(1);

  std::string params_file;
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
  std::string out;

  auto* generate = app.add_subcommand("generate", "Generate a random instance");
  generate->add_option("--params", params_file, "Scenario params JSON");
  generate->add_option("--set", overrides, "Override one param: field=value or field=lo:hi");
  generate->add_option("--seed", seed, "64-bit seed");
  generate->add_option("--out", out, "Instance file (stdout when omitted)");

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "Place one instance");
  solve->add_option("--instance", solve_opt.instance)->required();
  solve->add_option("--algo", solve_opt.algo)->required();
  solve->add_option("--out", solve_opt.out, "Result JSON");
  solve->add_option("--max-nodes", solve_opt.max_nodes, "Exact search node budget");
  solve->add_option("--time-limit-ms", solve_opt.time_limit_ms, "Exact search wall-clock budget");
  solve->add_option("--penalty", solve_opt.penalty, "Cost per unplaced chain position");
  solve->add_option("--spba-origin", solve_opt.spba_origin)
      ->check(CLI::IsMember({"nearest-head", "gateway"}));

  std::string sweep_text;
  std::size_t trials = 100;
  std::string out_dir;
  unsigned jobs = 1;
  std::string algos = "ppcc,spba,agw";
  bool timing = false;
  std::string bench_origin = "nearest-head";
  auto* bench = app.add_subcommand("bench", "Monte-Carlo sweep");
  bench->add_option("--sweep", sweep_text, "axis=lo:step:hi or axis=v1,v2,...")->required();
  bench->add_option("--trials", trials);
  bench->add_option("--out", out_dir, "Output directory")->required();
  bench->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  bench->add_option("--params", params_file);
  bench->add_option("--set", overrides);
  bench->add_option("--seed", seed);
  bench->add_option("--algos", algos, "Comma-separated subset of exact,ppcc,spba,agw");
  bench->add_flag("--timing", timing, "Fill the runtime column (output is then run-dependent)");
  bench->add_option("--spba-origin", bench_origin)->check(CLI::IsMember({"nearest-head", "gateway"}));

  std::string instance_file;
  auto* export_lp = app.add_subcommand("export-lp", "Write the 0-1 program in LP format");
  export_lp->add_option("--instance", instance_file)->required();
  export_lp->add_option("--out", out, "LP file (stdout when omitted)");

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("--instance", instance_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", e.what(), kExitUsage);
  }

  try {
    if (generate->parsed()) {
      const auto params = load_params(params_file, overrides);
      write_output(out, pcc::serialize_instance(pcc::generate_instance(params, seed)));
      return kExitOk;
    }
    if (solve->parsed()) return run_solve(solve_opt);
    if (bench->parsed()) {
      pcc::BenchConfig config;
      config.sweep = pcc::parse_sweep(sweep_text);
      config.base_params = load_params(params_file, overrides);
      config.trials = trials;
      config.jobs = jobs;
      config.base_seed = seed;
      config.record_runtime = timing;
      config.heuristic.spba_origin =
          bench_origin == "gateway" ? pcc::SpbaOrigin::kGateway : pcc::SpbaOrigin::kNearestHead;
      config.algorithms.clear();
      std::string_view rest = algos;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        config.algorithms.push_back(pcc::parse_algorithm(rest.substr(0, comma)));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
      const auto table = pcc::run_sweep(config);
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      pcc::emit_results(table, pcc::OutputFormat::kCsv, (dir / "results.csv").string());
      pcc::emit_results(table, pcc::OutputFormat::kJson, (dir / "results.json").string());
      pcc::emit_results(table, pcc::OutputFormat::kPlot, (dir / "plot.csv").string());
      std::cout << pcc::results_to_csv(table);
      return kExitOk;
    }
    if (export_lp->parsed()) {
      const auto instance = load_valid_instance(instance_file);
      const auto paths = pcc::shortest_paths(instance.network, instance.relevant_nodes());
      write_output(out, pcc::export_lp(instance, paths));
      return kExitOk;
    }
    if (validate->parsed()) {
      const auto instance = pcc::load_instance(instance_file);
      const auto violations = pcc::validate_instance(instance);
      pcc::Json list = pcc::Json::array();
      for (const auto& v : violations) {
        list.push_back({{"code", std::string(pcc::to_string(v.code))}, {"detail", v.detail}});
      }
      std::cout << pcc::Json{{"valid", violations.empty()}, {"violations", list}}.dump() << "\n";
      return violations.empty() ? kExitOk : kExitUsage;
    }
  } catch (const pcc::Error& e) {
    return report_error(pcc::to_string(e.kind()), e.what(), exit_code_for(e.kind()));
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error("IoError", e.what(), kExitOther);
  } catch (const std::exception& e) {
    return report_error("Error", e.what(), kExitOther);
  }
  return kExitUsage;
}
