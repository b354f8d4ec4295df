#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcc/evaluation.hpp"
#include "pcc/graph.hpp"
#include "pcc/model.hpp"

namespace pcc {

// The exact search space: one decision per (request, head, destination,
// chain position) choosing a hosting node. Decisions are ordered by request,
// head, destination, then position; the domain is instance.hosting_nodes().
class VisitPlanSpace {
 public:
  struct Decision {
    std::size_t request;
    NodeIndex head;
    NodeIndex destination;
    std::size_t position;  // zero-based
  };

  VisitPlanSpace(const ProblemInstance& instance, const PathTable& paths);

  const std::vector<Decision>& decisions() const { return decisions_; }
  const std::vector<NodeIndex>& domain() const { return domain_; }
  std::size_t size() const { return decisions_.size(); }

  // Admissible bound for the completions of a partial assignment: cost of
  // the hosts already implied plus, per (request, head, destination), the
  // cheapest capacity-free route through the unassigned positions. Exact
  // when every decision is assigned.
  double lower_bound(std::span<const std::size_t> choices) const;

  // Whether the assigned prefix already breaks a capacity (5a-5d).
  bool violates_capacity(std::span<const std::size_t> choices) const;

  // Full assignment to a placement (x is the union of the visited hosts).
  Placement to_placement(std::span<const std::size_t> choices) const;

 private:
  struct Group {
    std::size_t first_decision;
    std::size_t length;
    NodeIndex head;
    NodeIndex destination;
    double weight;
  };

  const ProblemInstance& instance_;
  const PathTable& paths_;
  std::vector<Decision> decisions_;
  std::vector<NodeIndex> domain_;
  std::vector<Group> groups_;
  Eigen::MatrixXd domain_cost_;  // P between domain nodes
};

struct SearchBudget {
  std::uint64_t max_nodes_expanded = 10'000'000;
  std::chrono::milliseconds wall_time{60'000};
};

enum class ProofStatus { kOptimal, kBudgetExceeded, kInfeasible };

std::string_view to_string(ProofStatus status);

struct ExactResult {
  Placement placement;
  CostReport cost;
  ProofStatus status = ProofStatus::kInfeasible;
  std::uint64_t nodes_expanded = 0;
};

// Best-first branch and bound over VisitPlanSpace. Deterministic: equal
// bounds prefer deeper nodes, then the lexicographically smallest choices.
// On budget exhaustion the incumbent (possibly empty) is returned.
ExactResult solve_exact(const ProblemInstance& instance, const PathTable& paths,
                        const SearchBudget& budget = {});

// Size limits the exact solver is meant for.
bool fits_desk_scale(const ProblemInstance& instance);

// Linearized 0-1 program in LP file format. Variables use zero-based indices:
//   x_<r>_<i>_<k>, y_<r>_<i>_<k>_<s>_<d>, z_<r>_<i>_<j>_<k>_<m>_<s>_<d>
// with r the batch position, i/j catalog indices and k/m/s/d node indices.
// Throws kSize above one million variables.
std::string export_lp(const ProblemInstance& instance, const PathTable& paths);

inline constexpr std::size_t kMaxLpVariables = 1'000'000;

}  // namespace pcc
