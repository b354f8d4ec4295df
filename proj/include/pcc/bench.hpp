#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcc/evaluation.hpp"
#include "pcc/exact.hpp"
#include "pcc/heuristics.hpp"
#include "pcc/io.hpp"
#include "pcc/scenario.hpp"

namespace pcc {

enum class SweepAxis { kNumCandidates, kBatchSize, kStayProbability };

std::string_view to_string(SweepAxis axis);
// Accepts the canonical names plus rho_o, K and R.
SweepAxis parse_axis(std::string_view name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kStayProbability;
  std::vector<double> values;
};

// "axis=lo:step:hi" or "axis=v1,v2,...". Throws kUsage.
SweepSpec parse_sweep(std::string_view text);

enum class Algorithm { kExact, kPpcc, kSpba, kAgw };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);  // throws kUsage

struct BenchConfig {
  SweepSpec sweep;
  ScenarioParams base_params;
  std::size_t trials = 100;
  std::vector<Algorithm> algorithms{Algorithm::kPpcc, Algorithm::kSpba, Algorithm::kAgw};
  std::uint64_t base_seed = 1;
  unsigned jobs = 1;  // 0 = hardware concurrency
  bool record_runtime = false;
  SearchBudget exact_budget;
  HeuristicOptions heuristic;
};

// Seed of one trial; independent of the other axis values.
std::uint64_t trial_seed(std::uint64_t base_seed, double axis_value, std::size_t trial);

// base with the axis pinned to value.
ScenarioParams apply_axis(ScenarioParams base, SweepAxis axis, double value);

struct AlgorithmOutcome {
  // False when the run did not produce a complete feasible solution: exact
  // without a proven optimum, or a heuristic that left functions unplaced.
  bool ok = false;
  CostReport cost;
  std::size_t unplaced = 0;
  double runtime_ms = 0.0;
};

struct TrialRecord {
  double axis_value = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<AlgorithmOutcome> outcomes;  // parallel to BenchConfig::algorithms
};

struct ResultRow {
  double value = 0.0;
  Algorithm algorithm = Algorithm::kPpcc;
  std::size_t samples = 0;  // trials included in the means
  double mean_cost = 0.0;
  double stderr_cost = 0.0;
  CostReport mean_terms;
  std::optional<double> mean_gain_vs_spba;
  std::optional<double> stderr_gain_vs_spba;
  std::optional<double> mean_gain_vs_agw;
  std::optional<double> stderr_gain_vs_agw;
  std::size_t infeasible_count = 0;
  std::optional<double> mean_runtime_ms;
};

struct ResultTable {
  SweepAxis axis = SweepAxis::kStayProbability;
  std::vector<ResultRow> rows;  // axis values in sweep order, then algorithms
  std::vector<TrialRecord> trials;
};

// Trials run on config.jobs threads; the table is identical for every job
// count. Non-desk-scale instances with exact requested throw kUsage.
ResultTable run_sweep(const BenchConfig& config);

enum class OutputFormat { kCsv, kJson, kPlot };

std::string results_to_csv(const ResultTable& table);
Json results_to_json(const ResultTable& table);
// One "algorithm,x,mean,stderr" line per row.
std::string results_to_plot_data(const ResultTable& table);

// Throws kEmptyTable for a table without rows, kIo when the file cannot be written.
void emit_results(const ResultTable& table, OutputFormat format, const std::string& path);

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace pcc
