#include <gtest/gtest.h>

#include <cmath>

#include "pcc/error.hpp"
#include "pcc/evaluation.hpp"
#include "pcc/exact.hpp"
#include "pcc/heuristics.hpp"
#include "support/oracles.hpp"

namespace pcc {
namespace {

PathTable paths_for(const ProblemInstance& inst) {
  return shortest_paths(inst.network, inst.relevant_nodes());
}

// Single-function placement of request 0 at `node` for every evaluation destination.
Placement single_at(const ProblemInstance& inst, NodeIndex node) {
  Placement p;
  p.hosts.insert({0, inst.requests[0].chain[0], node});
  for (NodeIndex s : inst.requests[0].heads) {
    for (const auto& d : evaluation_destinations(inst)) {
      p.visits.insert({0, inst.requests[0].chain[0], node, s, d.node});
    }
  }
  return p;
}

TEST(EvaluateCostTest, TinyOneAtEitherCandidate) {
  const auto inst = testing::tiny1();
  const auto paths = paths_for(inst);
  const auto at_b = evaluate_cost(inst, single_at(inst, 1), paths);
  EXPECT_EQ(at_b.total, 6);
  EXPECT_EQ(at_b.head_hop_term, 1);
  EXPECT_EQ(at_b.tail_hop_term, 5);
  EXPECT_EQ(at_b.chain_hop_term, 0);
  EXPECT_EQ(evaluate_cost(inst, single_at(inst, 2), paths).total, 6);
  EXPECT_EQ(evaluate_cost(inst, single_at(inst, 0), paths).total, 6);
}

TEST(EvaluateCostTest, SingleFunctionIsHeadHopPlusTailHop) {
  const auto inst = testing::tiny1_extended();
  const auto paths = paths_for(inst);
  for (NodeIndex k : inst.hosting_nodes()) {
    const auto report = evaluate_cost(inst, single_at(inst, k), paths);
    EXPECT_DOUBLE_EQ(report.total, paths.cost(0, k) + paths.cost(k, 3)) << "node " << k;
  }
}

TEST(EvaluateCostTest, HostAtHeadAndDestinationCostsNothing) {
  auto inst = testing::tiny1();
  inst.mobility = {{{3, 0.0}}, 1.0};
  const auto paths = paths_for(inst);
  EXPECT_EQ(evaluate_cost(inst, single_at(inst, 0), paths).total, 0);
}

TEST(EvaluateCostTest, LinearInTheStayProbability) {
  auto inst = testing::tiny1_extended();
  const auto paths = paths_for(inst);
  auto cost_at = [&](double rho) {
    inst.mobility = {{{3, 1.0 - rho}}, rho};
    Placement p = single_at(inst, 4);
    return evaluate_cost(inst, p, paths).total;
  };
  const double a = cost_at(0.25), b = cost_at(0.5), c = cost_at(0.75);
  EXPECT_NEAR(b, 0.5 * (a + c), 1e-12);
  // Stay means the flow returns to a: P(a,e) + P(e,a) = 12; moving costs P(a,e) + P(e,d) = 6 + 10.
  EXPECT_NEAR(b, 0.5 * 12 + 0.5 * 16, 1e-12);
}

TEST(EvaluateCostTest, MatchesTheTermByTermOracle) {
  for (const auto& inst : testing::tiny_corpus(40, 100, 200000)) {
    const auto paths = paths_for(inst);
    const auto exact = solve_exact(inst, paths);
    if (exact.status == ProofStatus::kOptimal) {
      EXPECT_NEAR(evaluate_cost(inst, exact.placement, paths).total,
                  testing::oracle_cost(inst, exact.placement), 1e-9);
    }
    const auto greedy = ppcc(inst, paths);
    if (greedy.unplaced.empty()) {
      EXPECT_NEAR(greedy.cost.total, testing::oracle_cost(inst, greedy.placement), 1e-9);
    }
  }
}

TEST(EvaluateCostTest, IndexOutsideTheInstanceThrows) {
  const auto inst = testing::tiny1();
  const auto paths = paths_for(inst);
  Placement p = single_at(inst, 1);
  p.visits.insert({0, 0, 9, 0, 3});
  try {
    evaluate_cost(inst, p, paths);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEvaluation);
  }
}

TEST(PenaltyTest, DefaultIsTwiceTheLongestPath) {
  const auto inst = testing::tiny1();
  const auto paths = paths_for(inst);
  EXPECT_EQ(default_unplaced_penalty(paths), 12);
  CostReport r;
  r.total = 6;
  const auto penalized = add_unplaced_penalty(r, 2, 12);
  EXPECT_EQ(penalized.penalty_term, 24);
  EXPECT_EQ(penalized.total, 30);
}

TEST(GainTest, RelativeSaving) {
  EXPECT_NEAR(gain(90, 100), 0.10, 1e-12);
  EXPECT_EQ(gain(100, 100), 0);
  EXPECT_NEAR(gain(74, 100), 0.26, 1e-12);
  try {
    gain(1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUndefinedGain);
  }
  EXPECT_THROW(gain(1, -2), Error);
}

TEST(CheckConstraintsTest, FeasiblePlacementHasNoViolations) {
  const auto inst = testing::tiny1();
  const auto paths = paths_for(inst);
  EXPECT_TRUE(check_constraints(inst, single_at(inst, 1), paths).feasible());
}

TEST(CheckConstraintsTest, NodeMemoryExceeded) {
  auto inst = testing::tiny1();
  inst.node_resources[1] = make_resources(5, 4);
  const auto paths = paths_for(inst);
  const auto report = check_constraints(inst, single_at(inst, 1), paths);
  EXPECT_EQ(report.families(), std::set<ConstraintFamily>{ConstraintFamily::k5a});
  EXPECT_EQ(report.violations[0].index, (std::vector<std::size_t>{1, 0}));
}

TEST(CheckConstraintsTest, VisitWithoutHost) {
  const auto inst = testing::tiny1();
  const auto paths = paths_for(inst);
  Placement p = single_at(inst, 1);
  p.hosts.clear();
  EXPECT_EQ(check_constraints(inst, p, paths).families(),
            std::set<ConstraintFamily>{ConstraintFamily::k5f});
}

TEST(CheckConstraintsTest, MissingVisitBreaksExactlyOne) {
  const auto inst = testing::tiny1();
  const auto paths = paths_for(inst);
  Placement p = single_at(inst, 1);
  p.visits.clear();
  EXPECT_TRUE(check_constraints(inst, p, paths).families().count(ConstraintFamily::k5e));
}

TEST(CheckConstraintsTest, ExactOptimaAreFeasibleUnderTheOracle) {
  for (const auto& inst : testing::tiny_corpus(40, 300, 200000, true)) {
    const auto paths = paths_for(inst);
    const auto exact = solve_exact(inst, paths);
    if (exact.status != ProofStatus::kOptimal) continue;
    EXPECT_TRUE(check_constraints(inst, exact.placement, paths).feasible());
    EXPECT_TRUE(testing::oracle_violated_families(inst, exact.placement).empty());
    const auto hopped = testing::with_hops(inst, exact.placement);
    EXPECT_TRUE(check_constraints(inst, hopped, paths).feasible());
  }
}

TEST(RouteCapacityTest, OverloadedLinkIsReported) {
  const auto inst = testing::tiny1();
  const std::vector<Route> routes{{0, {0, 1, 2}, 60}, {0, {1, 2, 3}, 50}};
  const auto report = check_route_capacity(inst.network, routes);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].family, ConstraintFamily::kLinkCapacity);
  EXPECT_EQ(report.violations[0].index, (std::vector<std::size_t>{1}));
  EXPECT_NEAR(report.violations[0].slack, -10, 1e-12);
}

}  // namespace
}  // namespace pcc
