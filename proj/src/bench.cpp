#include "pcc/bench.hpp"

#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "pcc/error.hpp"
#include "pcc/rng.hpp"

namespace pcc {

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kUsage, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    parts.push_back(text.substr(start, at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

// Drops the representation noise of lo + i * step.
double tidy(double v) { return std::round(v * 1e12) / 1e12; }

struct Stats {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double standard_error() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string optional_number(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

AlgorithmOutcome run_algorithm(Algorithm algorithm, const ProblemInstance& inst, const PathTable& paths,
                               const BenchConfig& config) {
  AlgorithmOutcome out;
  const auto start = std::chrono::steady_clock::now();
  switch (algorithm) {
    case Algorithm::kExact: {
      if (!fits_desk_scale(inst)) {
        throw Error(ErrorKind::kUsage, "exact requested on an instance beyond desk scale");
      }
      const auto result = solve_exact(inst, paths, config.exact_budget);
      out.ok = result.status == ProofStatus::kOptimal;
      out.cost = result.cost;
      break;
    }
    case Algorithm::kPpcc:
    case Algorithm::kSpba: {
      const auto result = algorithm == Algorithm::kPpcc ? ppcc(inst, paths, config.heuristic)
                                                        : spba(inst, paths, config.heuristic);
      out.ok = result.unplaced.empty();
      out.unplaced = result.unplaced.size();
      out.cost = result.cost;
      break;
    }
    case Algorithm::kAgw:
      out.ok = true;
      out.cost = agw(inst, paths).cost;
      break;
  }
  out.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNumCandidates: return "num_candidates";
    case SweepAxis::kBatchSize: return "batch_size";
    case SweepAxis::kStayProbability: return "stay_probability";
  }
  return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "num_candidates" || name == "K") return SweepAxis::kNumCandidates;
  if (name == "batch_size" || name == "R") return SweepAxis::kBatchSize;
  if (name == "stay_probability" || name == "rho_o") return SweepAxis::kStayProbability;
  throw Error(ErrorKind::kUsage, "unknown sweep axis '" + std::string(name) + "'");
}

SweepSpec parse_sweep(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorKind::kUsage, "sweep must look like axis=lo:step:hi or axis=v1,v2");
  }
  SweepSpec spec;
  spec.axis = parse_axis(text.substr(0, eq));
  const std::string_view body = text.substr(eq + 1);
  if (body.find(':') != std::string_view::npos) {
    const auto parts = split(body, ':');
    if (parts.size() != 3) throw Error(ErrorKind::kUsage, "range sweep needs lo:step:hi");
    const double lo = parse_number(parts[0]);
    const double step = parse_number(parts[1]);
    const double hi = parse_number(parts[2]);
    if (!(step > 0) || hi < lo) throw Error(ErrorKind::kUsage, "range sweep needs step > 0 and lo <= hi");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 100000) throw Error(ErrorKind::kUsage, "range sweep has too many values");
    for (std::size_t i = 0; i < count; ++i) spec.values.push_back(tidy(lo + static_cast<double>(i) * step));
  } else {
    for (auto part : split(body, ',')) spec.values.push_back(parse_number(part));
  }
  if (spec.values.empty()) throw Error(ErrorKind::kUsage, "sweep has no values");
  return spec;
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kExact: return "exact";
    case Algorithm::kPpcc: return "ppcc";
    case Algorithm::kSpba: return "spba";
    case Algorithm::kAgw: return "agw";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kExact, Algorithm::kPpcc, Algorithm::kSpba, Algorithm::kAgw}) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorKind::kUsage, "unknown algorithm '" + std::string(name) + "'");
}

std::uint64_t trial_seed(std::uint64_t base_seed, double axis_value, std::size_t trial) {
  return hash_combine(hash_combine(base_seed, std::bit_cast<std::uint64_t>(axis_value)), trial);
}

ScenarioParams apply_axis(ScenarioParams base, SweepAxis axis, double value) {
  auto as_int = [&](const char* name) {
    if (value != std::floor(value) || value < 1 || value > 1e6) {
      throw Error(ErrorKind::kUsage, std::string(name) + " sweep values must be positive integers");
    }
    return static_cast<int>(value);
  };
  switch (axis) {
    case SweepAxis::kNumCandidates: {
      const int k = as_int("num_candidates");
      base.num_candidates = {k, k};
      break;
    }
    case SweepAxis::kBatchSize: {
      const int r = as_int("batch_size");
      base.batch_size = {r, r};
      break;
    }
    case SweepAxis::kStayProbability:
      base.stay_probability = {value, value};
      break;
  }
  return base;
}

ResultTable run_sweep(const BenchConfig& config) {
  if (config.trials < 1) throw Error(ErrorKind::kUsage, "trials must be at least 1");
  if (config.algorithms.empty()) throw Error(ErrorKind::kUsage, "no algorithms selected");
  if (config.sweep.values.empty()) throw Error(ErrorKind::kUsage, "sweep has no values");

  std::vector<ScenarioParams> params;
  for (double v : config.sweep.values) {
    params.push_back(apply_axis(config.base_params, config.sweep.axis, v));
    validate_params(params.back());
  }

  ResultTable table;
  table.axis = config.sweep.axis;
  const std::size_t total = config.sweep.values.size() * config.trials;
  table.trials.resize(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      const std::size_t vi = t / config.trials;
      TrialRecord& rec = table.trials[t];
      rec.axis_value = config.sweep.values[vi];
      rec.trial = t % config.trials;
      rec.seed = trial_seed(config.base_seed, rec.axis_value, rec.trial);
      try {
        const auto inst = generate_instance(params[vi], rec.seed);
        const auto paths = shortest_paths(inst.network, inst.relevant_nodes());
        for (Algorithm a : config.algorithms) rec.outcomes.push_back(run_algorithm(a, inst, paths, config));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  unsigned jobs = config.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.jobs;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  auto index_of = [&](Algorithm a) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
      if (config.algorithms[i] == a) return i;
    }
    return std::nullopt;
  };
  const auto spba_index = index_of(Algorithm::kSpba);
  const auto agw_index = index_of(Algorithm::kAgw);

  for (std::size_t vi = 0; vi < config.sweep.values.size(); ++vi) {
    for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
      ResultRow row;
      row.value = config.sweep.values[vi];
      row.algorithm = config.algorithms[ai];
      Stats cost, placement, head, chain, tail, penalty, runtime, vs_spba, vs_agw;
      for (std::size_t t = 0; t < config.trials; ++t) {
        const TrialRecord& rec = table.trials[vi * config.trials + t];
        const AlgorithmOutcome& o = rec.outcomes[ai];
        runtime.add(o.runtime_ms);
        if (!o.ok) {
          ++row.infeasible_count;
          continue;
        }
        cost.add(o.cost.total);
        placement.add(o.cost.placement_term);
        head.add(o.cost.head_hop_term);
        chain.add(o.cost.chain_hop_term);
        tail.add(o.cost.tail_hop_term);
        penalty.add(o.cost.penalty_term);
        auto paired = [&](const std::optional<std::size_t>& other, Stats& into) {
          if (!other || !rec.outcomes[*other].ok) return;
          const double base = rec.outcomes[*other].cost.total;
          if (base > 0) into.add(gain(o.cost.total, base));
        };
        paired(spba_index, vs_spba);
        paired(agw_index, vs_agw);
      }
      row.samples = cost.n;
      row.mean_cost = cost.mean();
      row.stderr_cost = cost.standard_error();
      row.mean_terms = {placement.mean(), head.mean(), chain.mean(), tail.mean(), penalty.mean(), cost.mean()};
      if (vs_spba.n) {
        row.mean_gain_vs_spba = vs_spba.mean();
        row.stderr_gain_vs_spba = vs_spba.standard_error();
      }
      if (vs_agw.n) {
        row.mean_gain_vs_agw = vs_agw.mean();
        row.stderr_gain_vs_agw = vs_agw.standard_error();
      }
      if (config.record_runtime) row.mean_runtime_ms = runtime.mean();
      table.rows.push_back(row);
    }
  }
  return table;
}

std::string results_to_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "axis,value,algorithm,mean_cost,stderr_cost,mean_gain_vs_spba,mean_gain_vs_agw,"
         "infeasible_count,mean_runtime_ms\r\n";
  const std::string axis = csv_field(std::string(to_string(table.axis)));
  for (const auto& row : table.rows) {
    out << axis << ',' << format_double(row.value) << ',' << csv_field(std::string(to_string(row.algorithm)))
        << ',' << format_double(row.mean_cost) << ',' << format_double(row.stderr_cost) << ','
        << optional_number(row.mean_gain_vs_spba) << ',' << optional_number(row.mean_gain_vs_agw) << ','
        << row.infeasible_count << ',' << optional_number(row.mean_runtime_ms) << "\r\n";
  }
  return out.str();
}

Json results_to_json(const ResultTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    rows.push_back({
        {"value", row.value},
        {"algorithm", std::string(to_string(row.algorithm))},
        {"samples", row.samples},
        {"mean_cost", row.mean_cost},
        {"stderr_cost", row.stderr_cost},
        {"mean_terms", cost_report_to_json(row.mean_terms)},
        {"mean_gain_vs_spba", optional_json(row.mean_gain_vs_spba)},
        {"stderr_gain_vs_spba", optional_json(row.stderr_gain_vs_spba)},
        {"mean_gain_vs_agw", optional_json(row.mean_gain_vs_agw)},
        {"stderr_gain_vs_agw", optional_json(row.stderr_gain_vs_agw)},
        {"infeasible_count", row.infeasible_count},
        {"mean_runtime_ms", optional_json(row.mean_runtime_ms)},
    });
  }
  return {{"axis", std::string(to_string(table.axis))}, {"rows", std::move(rows)}};
}

std::string results_to_plot_data(const ResultTable& table) {
  std::ostringstream out;
  out << "algorithm,x,mean,stderr\n";
  for (const auto& row : table.rows) {
    out << to_string(row.algorithm) << ',' << format_double(row.value) << ','
        << format_double(row.mean_cost) << ',' << format_double(row.stderr_cost) << '\n';
  }
  return out.str();
}

void emit_results(const ResultTable& table, OutputFormat format, const std::string& path) {
  if (table.rows.empty()) throw Error(ErrorKind::kEmptyTable, "result table has no rows");
  switch (format) {
    case OutputFormat::kCsv: write_text_file(path, results_to_csv(table)); break;
    case OutputFormat::kJson: write_text_file(path, results_to_json(table).dump(2) + "\n"); break;
    case OutputFormat::kPlot: write_text_file(path, results_to_plot_data(table)); break;
  }
}

}  // namespace pcc
