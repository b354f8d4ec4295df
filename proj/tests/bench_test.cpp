#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pcc/bench.hpp"
#include "pcc/error.hpp"

namespace pcc {
namespace {

BenchConfig small_config() {
  BenchConfig config;
  config.sweep = parse_sweep("rho_o=0,1");
  config.base_params.num_candidates = {20, 20};
  config.base_params.batch_size = {30, 30};
  config.trials = 6;
  return config;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    EXPECT_FALSE(line.empty());
    EXPECT_EQ(line.back(), '\r');
    line.pop_back();
    std::vector<std::string> cells;
    std::istringstream cells_in(line);
    for (std::string cell; std::getline(cells_in, cell, ',');) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

TEST(ParseSweepTest, RangeAndList) {
  const auto range = parse_sweep("rho_o=0:0.1:1");
  EXPECT_EQ(range.axis, SweepAxis::kStayProbability);
  ASSERT_EQ(range.values.size(), 11u);
  EXPECT_EQ(range.values[3], 0.3);
  EXPECT_EQ(range.values.back(), 1.0);

  const auto list = parse_sweep("R=50,100,150,200");
  EXPECT_EQ(list.axis, SweepAxis::kBatchSize);
  EXPECT_EQ(list.values, (std::vector<double>{50, 100, 150, 200}));

  for (const char* bad : {"rho_o", "speed=1,2", "K=", "rho_o=1:0:2", "rho_o=a,b"}) {
    try {
      parse_sweep(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kUsage) << bad;
    }
  }
}

TEST(ParseAlgorithmTest, NamesRoundTrip) {
  for (auto a : {Algorithm::kExact, Algorithm::kPpcc, Algorithm::kSpba, Algorithm::kAgw}) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  }
  EXPECT_THROW(parse_algorithm("greedy"), Error);
}

TEST(TrialSeedTest, DependsOnValueAndTrial) {
  EXPECT_EQ(trial_seed(1, 0.5, 3), trial_seed(1, 0.5, 3));
  EXPECT_NE(trial_seed(1, 0.5, 3), trial_seed(1, 0.5, 4));
  EXPECT_NE(trial_seed(1, 0.5, 3), trial_seed(1, 0.25, 3));
  EXPECT_NE(trial_seed(1, 0.5, 3), trial_seed(2, 0.5, 3));
}

TEST(ApplyAxisTest, PinsTheField) {
  const auto p = apply_axis(ScenarioParams{}, SweepAxis::kNumCandidates, 30);
  EXPECT_EQ(p.num_candidates.lo, 30);
  EXPECT_EQ(p.num_candidates.hi, 30);
  EXPECT_EQ(apply_axis(ScenarioParams{}, SweepAxis::kStayProbability, 0.25).stay_probability.hi, 0.25);
}

TEST(RunSweepTest, RowsCoverEveryValueAndAlgorithm) {
  const auto table = run_sweep(small_config());
  ASSERT_EQ(table.rows.size(), 6u);
  EXPECT_EQ(table.rows[0].value, 0);
  EXPECT_EQ(table.rows[0].algorithm, Algorithm::kPpcc);
  EXPECT_EQ(table.rows[5].value, 1);
  EXPECT_EQ(table.rows[5].algorithm, Algorithm::kAgw);
  for (const auto& row : table.rows) {
    EXPECT_EQ(row.samples + row.infeasible_count, 6u);
    EXPECT_TRUE(row.mean_gain_vs_spba.has_value());
    EXPECT_FALSE(row.mean_runtime_ms.has_value());
  }
  EXPECT_EQ(table.rows[1].mean_gain_vs_spba, 0.0);  // spba against itself
  EXPECT_EQ(table.trials.size(), 12u);
}

TEST(RunSweepTest, OutputIndependentOfJobCount) {
  auto config = small_config();
  config.jobs = 1;
  const auto one = run_sweep(config);
  config.jobs = 3;
  const auto three = run_sweep(config);
  EXPECT_EQ(results_to_csv(one), results_to_csv(three));
  EXPECT_EQ(results_to_json(one).dump(), results_to_json(three).dump());
  EXPECT_EQ(results_to_plot_data(one), results_to_plot_data(three));
}

TEST(RunSweepTest, ExactOnLargeInstancesIsRefused) {
  auto config = small_config();
  config.algorithms = {Algorithm::kExact};
  try {
    run_sweep(config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUsage);
  }
}

TEST(RunSweepTest, RuntimeColumnOnRequest) {
  auto config = small_config();
  config.trials = 2;
  config.record_runtime = true;
  for (const auto& row : run_sweep(config).rows) {
    ASSERT_TRUE(row.mean_runtime_ms.has_value());
    EXPECT_GE(*row.mean_runtime_ms, 0);
  }
}

TEST(ResultsCsvTest, ParsesBackToTheTable) {
  const auto table = run_sweep(small_config());
  const auto rows = parse_csv(results_to_csv(table));
  ASSERT_EQ(rows.size(), table.rows.size() + 1);
  EXPECT_EQ(rows[0].size(), 9u);
  EXPECT_EQ(rows[0][0], "axis");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& cells = rows[i + 1];
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_EQ(cells[2], to_string(table.rows[i].algorithm));
    EXPECT_EQ(std::stod(cells[3]), table.rows[i].mean_cost);
    EXPECT_EQ(cells[8], "");
  }
}

TEST(ResultsCsvTest, EmptyTableIsRefused) {
  try {
    emit_results(ResultTable{}, OutputFormat::kCsv, "unused.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyTable);
  }
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(format_double(6), "6");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace pcc
