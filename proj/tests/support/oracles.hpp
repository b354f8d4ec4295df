#pragma once

// Test-only reference implementations. Everything here is computed from the
// raw instance data without calling into the library's path, evaluation,
// constraint or search code.

#include <cstdint>
#include <filesystem>
#include <set>
#include <vector>

#include "pcc/evaluation.hpp"
#include "pcc/graph.hpp"
#include "pcc/model.hpp"

namespace pcc::testing {

std::filesystem::path data_path(const std::string& name);

// Path a-b-c-d with link costs 1, 2, 3; candidates b and c; one request with
// chain [f1] from head a; the user moves to d with certainty.
ProblemInstance tiny1();
// tiny1 plus node e hanging off b at cost 5, candidates b and e.
ProblemInstance tiny1_extended();

struct OraclePath {
  double cost = 0.0;
  std::vector<NodeIndex> nodes;
};

// Enumerates every simple path: least cost, then lexicographically smallest.
OraclePath oracle_shortest_path(const EdgeNetwork& network, NodeIndex from, NodeIndex to);
// Minimum link capacity along oracle_shortest_path; node throughput when from == to.
double oracle_bottleneck(const EdgeNetwork& network, NodeIndex from, NodeIndex to);

// Hosting domain as documented: candidates in order, then the gateway.
std::vector<NodeIndex> oracle_domain(const ProblemInstance& instance);

// (node, weight) pairs of D + {o} with positive weight, merged per node.
std::vector<std::pair<NodeIndex, double>> oracle_destinations(const ProblemInstance& instance);

struct BruteForceResult {
  bool feasible = false;
  double total = 0.0;
  std::uint64_t enumerated = 0;
};

// Number of complete assignments brute_force_optimum would enumerate,
// saturating at UINT64_MAX.
std::uint64_t brute_force_size(const ProblemInstance& instance);

// Every assignment of a hosting node to each (request, head, destination,
// position); x is the union of the used hosts; per node-pair budgets.
BruteForceResult brute_force_optimum(const ProblemInstance& instance);

// Objective of a placement, summed term by term.
double oracle_cost(const ProblemInstance& instance, const Placement& placement);

// Families of the linear program's inequalities the placement breaks.
std::set<ConstraintFamily> oracle_violated_families(const ProblemInstance& instance,
                                                    const Placement& placement);

// Adds z for every pair of visits at consecutive chain positions.
Placement with_hops(const ProblemInstance& instance, Placement placement);

// Seeded tiny instance: K <= 5, R <= 2, L <= 2, |S_r| <= 2, |D + {o}| <= 2,
// probabilities on a 1/16 grid and quarter-Mbps rates so every sum is exact.
// Node memory is scarce; links keep the default capacity unless tight_links.
ProblemInstance tiny_instance(std::uint64_t seed, bool tight_links = false);

// First `count` tiny instances (seeds base, base+1, ...) whose brute-force
// enumeration stays within max_assignments.
std::vector<ProblemInstance> tiny_corpus(std::size_t count, std::uint64_t base_seed,
                                         std::uint64_t max_assignments, bool tight_links = false);

}  // namespace pcc::testing
