#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "pcc/graph.hpp"
#include "pcc/io.hpp"
#include "pcc/model.hpp"

namespace pcc {

// Itemized objective. total equals placement + head + chain + tail + penalty up
// to rounding; the penalty is nonzero only for heuristic runs that left
// functions unplaced.
struct CostReport {
  double placement_term = 0.0;
  double head_hop_term = 0.0;
  double chain_hop_term = 0.0;
  double tail_hop_term = 0.0;
  double penalty_term = 0.0;
  double total = 0.0;
};

// Literal objective over the extended destination set D + {o}. Chain hops are
// the products of visits at consecutive positions of the same (request, head,
// destination). Throws kEvaluation for indices outside the instance.
CostReport evaluate_cost(const ProblemInstance& instance, const Placement& placement,
                         const PathTable& paths);

// Adds a per-position penalty for every unplaced function.
CostReport add_unplaced_penalty(CostReport report, std::size_t unplaced_count,
                                double penalty_per_position);

// Default penalty per unplaced position: twice the longest relevant path.
double default_unplaced_penalty(const PathTable& paths);

enum class ConstraintFamily {
  k5a,  // node resources
  k5b,  // head -> first function pair capacity
  k5c,  // function -> function pair capacity
  k5d,  // last function -> destination pair capacity
  k5e,  // exactly one visit per (request, head, destination, position)
  k5f,  // visit requires host
  k5g,  // z <= y_first
  k5h,  // z <= y_second
  k5i,  // z >= y_first + y_second - 1
  kLinkCapacity,
};

std::string_view to_string(ConstraintFamily family);

// Index tuples per family:
//   5a: (node, dimension 0 = memory / 1 = cpu)
//   5b: (head, node)   5c: (node_k, node_m)   5d: (node, destination)
//   5e: (request, head, destination, position)
//   5f: (request, nf, node, head, destination)
//   5g/5h/5i: (request, nf_i, nf_j, node_k, node_m, head, destination)
//   link: (link id)
struct ConstraintViolation {
  ConstraintFamily family;
  std::vector<std::size_t> index;
  double slack = 0.0;
};

struct ViolationReport {
  std::vector<ConstraintViolation> violations;

  bool feasible() const { return violations.empty(); }
  std::set<ConstraintFamily> families() const;
};

// Checks each family independently with per node-pair capacity budgets, the
// pair bottleneck standing in for Lambda. 5g-5i apply only when the placement
// carries explicit hops; 5i is checked for consecutive chain positions.
ViolationReport check_constraints(const ProblemInstance& instance,
                                  const Placement& placement, const PathTable& paths);

// A walk a heuristic committed flow to, used for per-link bookkeeping.
struct Route {
  std::size_t request = 0;
  std::vector<NodeIndex> walk;
  double rate_mbps = 0.0;
};

// Per-link semantics: charges every route traversal to the physical links and
// reports links whose load exceeds capacity.
ViolationReport check_route_capacity(const EdgeNetwork& network,
                                     std::span<const Route> routes);

// Relative saving of a over b: (b - a) / b. Throws kUndefinedGain if b <= 0.
double gain(double cost_a, double cost_b);

// Throws kEvaluation if any placement index falls outside the instance.
void check_placement_indices(const ProblemInstance& instance, const Placement& placement);

Json cost_report_to_json(const CostReport& report);
Json violation_report_to_json(const ProblemInstance& instance, const ViolationReport& report);

}  // namespace pcc
