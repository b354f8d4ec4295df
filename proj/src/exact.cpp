#include "pcc/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "pcc/error.hpp"

namespace pcc {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kCapacityTolerance = 1e-9;

// Bounds within this margin of the incumbent cannot improve it.
double prune_margin(double incumbent) {
  return 1e-9 * std::max(1.0, std::abs(incumbent));
}

}  // namespace

std::string_view to_string(ProofStatus status) {
  switch (status) {
    case ProofStatus::kOptimal: return "optimal";
    case ProofStatus::kBudgetExceeded: return "budget_exceeded";
    case ProofStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

VisitPlanSpace::VisitPlanSpace(const ProblemInstance& instance, const PathTable& paths)
    : instance_(instance), paths_(paths), domain_(instance.hosting_nodes()) {
  const auto destinations = evaluation_destinations(instance);
  for (std::size_t r = 0; r < instance.requests.size(); ++r) {
    const auto& request = instance.requests[r];
    for (std::size_t h = 0; h < request.heads.size(); ++h) {
      for (const auto& d : destinations) {
        groups_.push_back({decisions_.size(), request.length(), request.heads[h], d.node,
                           request.head_weight(h) * d.weight});
        for (std::size_t l = 0; l < request.length(); ++l) {
          decisions_.push_back({r, request.heads[h], d.node, l});
        }
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(domain_.size());
  domain_cost_.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) domain_cost_(a, b) = paths.cost(domain_[a], domain_[b]);
  }
}

double VisitPlanSpace::lower_bound(std::span<const std::size_t> choices) const {
  const std::size_t assigned = choices.size();
  std::vector<HostIndex> hosts;
  for (std::size_t v = 0; v < assigned; ++v) {
    const auto& dec = decisions_[v];
    hosts.push_back({dec.request, instance_.requests[dec.request].chain[dec.position],
                     domain_[choices[v]]});
  }
  std::sort(hosts.begin(), hosts.end());
  hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
  double bound = 0.0;
  for (const auto& h : hosts) bound += instance_.placement_cost_of(h.nf, h.node);

  const std::size_t n = domain_.size();
  std::vector<double> reach(n), next(n);
  for (const auto& g : groups_) {
    auto fixed = [&](std::size_t l) -> std::ptrdiff_t {
      const std::size_t v = g.first_decision + l;
      return v < assigned ? static_cast<std::ptrdiff_t>(choices[v]) : -1;
    };
    for (std::size_t k = 0; k < n; ++k) {
      const std::ptrdiff_t f = fixed(0);
      reach[k] = (f < 0 || f == static_cast<std::ptrdiff_t>(k))
                     ? g.weight * paths_.cost(g.head, domain_[k])
                     : kInfinity;
    }
    for (std::size_t l = 1; l < g.length; ++l) {
      const std::ptrdiff_t f = fixed(l);
      for (std::size_t m = 0; m < n; ++m) {
        next[m] = kInfinity;
        if (f >= 0 && f != static_cast<std::ptrdiff_t>(m)) continue;
        for (std::size_t k = 0; k < n; ++k) {
          next[m] = std::min(next[m], reach[k] + g.weight * domain_cost_(k, m));
        }
      }
      std::swap(reach, next);
    }
    double best = kInfinity;
    for (std::size_t k = 0; k < n; ++k) {
      best = std::min(best, reach[k] + g.weight * paths_.cost(domain_[k], g.destination));
    }
    bound += best;
  }
  return bound;
}

bool VisitPlanSpace::violates_capacity(std::span<const std::size_t> choices) const {
  std::map<NodeIndex, Resources> usage;
  std::vector<HostIndex> hosts;
  using PairLoad = std::map<std::pair<NodeIndex, NodeIndex>, double>;
  PairLoad head_load, chain_load, tail_load;
  for (std::size_t v = 0; v < choices.size(); ++v) {
    const auto& dec = decisions_[v];
    const auto& request = instance_.requests[dec.request];
    const NodeIndex k = domain_[choices[v]];
    hosts.push_back({dec.request, request.chain[dec.position], k});
    if (dec.position == 0) head_load[{dec.head, k}] += request.flow_rate_mbps;
    if (dec.position > 0) {
      chain_load[{domain_[choices[v - 1]], k}] += request.flow_rate_mbps;
    }
    if (dec.position + 1 == request.length()) {
      tail_load[{k, dec.destination}] += request.flow_rate_mbps;
    }
  }
  std::sort(hosts.begin(), hosts.end());
  hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
  for (const auto& h : hosts) {
    auto [it, inserted] = usage.try_emplace(h.node, Resources::Zero());
    it->second += instance_.catalog[h.nf].demand;
  }
  for (const auto& [k, used] : usage) {
    if (k < instance_.node_resources.size() && instance_.node_resources[k] &&
        (used > *instance_.node_resources[k] + kCapacityTolerance).any()) {
      return true;
    }
  }
  for (const PairLoad* loads : {&head_load, &chain_load, &tail_load}) {
    for (const auto& [pair, load] : *loads) {
      if (load > paths_.bottleneck(pair.first, pair.second) + kCapacityTolerance) return true;
    }
  }
  return false;
}

Placement VisitPlanSpace::to_placement(std::span<const std::size_t> choices) const {
  if (choices.size() != decisions_.size()) {
    throw Error(ErrorKind::kIndex, "assignment does not cover every decision");
  }
  Placement placement;
  for (std::size_t v = 0; v < choices.size(); ++v) {
    const auto& dec = decisions_[v];
    const NfIndex nf = instance_.requests[dec.request].chain[dec.position];
    const NodeIndex k = domain_.at(choices[v]);
    placement.hosts.insert({dec.request, nf, k});
    placement.visits.insert({dec.request, nf, k, dec.head, dec.destination});
  }
  return placement;
}

namespace {

struct SearchNode {
  double bound;
  std::vector<std::size_t> choices;
};

// Pops the smallest bound first; among equal bounds the deepest node, then the
// lexicographically smallest assignment.
struct LaterFirst {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.choices.size() != b.choices.size()) return a.choices.size() < b.choices.size();
    return a.choices > b.choices;
  }
};

class Search {
 public:
  Search(const ProblemInstance& instance, const PathTable& paths, const SearchBudget& budget)
      : instance_(instance),
        paths_(paths),
        space_(instance, paths),
        budget_(budget),
        deadline_(std::chrono::steady_clock::now() + budget.wall_time) {}

  ExactResult run() {
    ExactResult result;
    bool exhausted = dive() && best_first();
    result.nodes_expanded = expanded_;
    if (!incumbent_choices_.empty() || (space_.size() == 0 && incumbent_ < kInfinity)) {
      result.placement = space_.to_placement(incumbent_choices_);
      result.cost = evaluate_cost(instance_, result.placement, paths_);
    }
    if (!exhausted) {
      result.status = ProofStatus::kBudgetExceeded;
    } else {
      result.status = incumbent_ < kInfinity ? ProofStatus::kOptimal : ProofStatus::kInfeasible;
    }
    return result;
  }

 private:
  bool out_of_budget() {
    if (expanded_ >= budget_.max_nodes_expanded) return true;
    return (expanded_ & 0x3ff) == 0 && std::chrono::steady_clock::now() > deadline_;
  }

  void offer_leaf(const std::vector<std::size_t>& choices) {
    const double cost =
        evaluate_cost(instance_, space_.to_placement(choices), paths_).total;
    if (cost < incumbent_ ||
        (cost == incumbent_ && choices < incumbent_choices_)) {
      incumbent_ = cost;
      incumbent_choices_ = choices;
    }
  }

  // Greedy descent along the cheapest feasible child to seed an incumbent.
  bool dive() {
    std::vector<std::size_t> choices;
    if (space_.size() == 0) {
      incumbent_ = evaluate_cost(instance_, Placement{}, paths_).total;
      return true;
    }
    while (choices.size() < space_.size()) {
      if (out_of_budget()) return false;
      ++expanded_;
      double best = kInfinity;
      std::size_t best_choice = 0;
      bool any = false;
      for (std::size_t c = 0; c < space_.domain().size(); ++c) {
        choices.push_back(c);
        if (!space_.violates_capacity(choices)) {
          const double bound = space_.lower_bound(choices);
          if (!any || bound < best) {
            best = bound;
            best_choice = c;
            any = true;
          }
        }
        choices.pop_back();
      }
      if (!any) return true;
      choices.push_back(best_choice);
    }
    offer_leaf(choices);
    return true;
  }

  bool best_first() {
    if (space_.size() == 0) return true;
    std::priority_queue<SearchNode, std::vector<SearchNode>, LaterFirst> frontier;
    frontier.push({space_.lower_bound({}), {}});
    while (!frontier.empty()) {
      if (frontier.top().bound >= incumbent_ - prune_margin(incumbent_)) return true;
      if (out_of_budget()) return false;
      SearchNode node = frontier.top();
      frontier.pop();
      ++expanded_;
      const bool leaves = node.choices.size() + 1 == space_.size();
      for (std::size_t c = 0; c < space_.domain().size(); ++c) {
        std::vector<std::size_t> child = node.choices;
        child.push_back(c);
        if (space_.violates_capacity(child)) continue;
        if (leaves) {
          offer_leaf(child);
          continue;
        }
        const double bound = space_.lower_bound(child);
        if (bound >= incumbent_ - prune_margin(incumbent_)) continue;
        frontier.push({bound, std::move(child)});
      }
    }
    return true;
  }

  const ProblemInstance& instance_;
  const PathTable& paths_;
  VisitPlanSpace space_;
  SearchBudget budget_;
  std::chrono::steady_clock::time_point deadline_;
  std::uint64_t expanded_ = 0;
  double incumbent_ = kInfinity;
  std::vector<std::size_t> incumbent_choices_;
};

}  // namespace

ExactResult solve_exact(const ProblemInstance& instance, const PathTable& paths,
                        const SearchBudget& budget) {
  return Search(instance, paths, budget).run();
}

bool fits_desk_scale(const ProblemInstance& instance) {
  if (instance.network.candidates().size() > 6 || instance.requests.size() > 3) return false;
  if (evaluation_destinations(instance).size() > 2) return false;
  return std::all_of(instance.requests.begin(), instance.requests.end(),
                     [](const ServiceRequest& r) { return r.length() <= 3 && r.heads.size() <= 2; });
}

}  // namespace pcc
