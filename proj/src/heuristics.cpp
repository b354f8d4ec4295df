#include "pcc/heuristics.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>

namespace pcc {

namespace {

constexpr double kRateTolerance = 1e-9;

NodeIndex closest_head(const ServiceRequest& request, NodeIndex target, const PathTable& paths) {
  NodeIndex best = request.heads.front();
  for (NodeIndex s : request.heads) {
    const double c = paths.cost(s, target);
    const double b = paths.cost(best, target);
    if (c < b || (c == b && s < best)) best = s;
  }
  return best;
}

// Candidates on the origin->target shortest path by distance from origin,
// then every other candidate the same way.
std::vector<NodeIndex> candidate_order(const ProblemInstance& inst, const PathTable& paths,
                                       NodeIndex origin, NodeIndex target) {
  const auto& net = inst.network;
  auto by_distance = [&](NodeIndex a, NodeIndex b) {
    const double ca = paths.cost(origin, a);
    const double cb = paths.cost(origin, b);
    return ca != cb ? ca < cb : a < b;
  };
  std::vector<NodeIndex> on_path;
  for (NodeIndex n : paths.path(origin, target)) {
    if (net.is_candidate(n)) on_path.push_back(n);
  }
  std::stable_sort(on_path.begin(), on_path.end(), [&](NodeIndex a, NodeIndex b) {
    return paths.cost(origin, a) < paths.cost(origin, b);
  });
  std::vector<NodeIndex> rest;
  for (NodeIndex k : net.candidates()) {
    if (std::find(on_path.begin(), on_path.end(), k) == on_path.end()) rest.push_back(k);
  }
  std::sort(rest.begin(), rest.end(), by_distance);
  on_path.insert(on_path.end(), rest.begin(), rest.end());
  return on_path;
}

void append_hop(std::vector<NodeIndex>& walk, const std::vector<NodeIndex>& hop) {
  walk.insert(walk.end(), hop.begin() + 1, hop.end());
}

using PairLoads = std::map<std::pair<NodeIndex, NodeIndex>, double>;

// Pair budgets of the replicated visit plan (every head, every destination),
// kept per family: head -> first, function -> function, last -> destination.
class PairBudgets {
 public:
  explicit PairBudgets(const PathTable& paths) : paths_(paths) {}

  bool fits(int family, NodeIndex a, NodeIndex b, double amount) const {
    const auto key = std::make_pair(a, b);
    double load = amount;
    if (auto it = committed_[family].find(key); it != committed_[family].end()) load += it->second;
    if (auto it = pending_[family].find(key); it != pending_[family].end()) load += it->second;
    return load <= paths_.bottleneck(a, b) + kRateTolerance;
  }
  void charge(int family, NodeIndex a, NodeIndex b, double amount) { pending_[family][{a, b}] += amount; }
  void commit() {
    for (int f = 0; f < 3; ++f) {
      for (const auto& [key, load] : pending_[f]) committed_[f][key] += load;
      pending_[f].clear();
    }
  }
  void rollback() {
    for (auto& p : pending_) p.clear();
  }

 private:
  const PathTable& paths_;
  std::array<PairLoads, 3> committed_;
  std::array<PairLoads, 3> pending_;
};

constexpr int kHeadPairs = 0;
constexpr int kChainPairs = 1;
constexpr int kTailPairs = 2;

HeuristicResult greedy(const ProblemInstance& inst, const PathTable& paths,
                       const HeuristicOptions& options, NodeIndex target,
                       const std::function<NodeIndex(const ServiceRequest&)>& origin_of) {
  const auto& net = inst.network;
  const auto destinations = evaluation_destinations(inst);
  const auto plans_per_head = static_cast<double>(destinations.size());
  ResidualState residual(net, inst.node_resources);
  PairBudgets budgets(paths);
  HeuristicResult result;

  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto& req = inst.requests[r];
    const NodeIndex origin = origin_of(req);
    const double rate = req.flow_rate_mbps;
    const auto heads = static_cast<double>(req.heads.size());

    // First function: every head sends to k once per destination.
    auto head_pairs_fit = [&](NodeIndex k) {
      return std::all_of(req.heads.begin(), req.heads.end(), [&](NodeIndex s) {
        return budgets.fits(kHeadPairs, s, k, rate * plans_per_head);
      });
    };

    ResidualState work = residual;
    std::vector<NodeIndex> walk{origin};
    std::vector<NodeIndex> hosted_at;
    NodeIndex m = origin;
    for (NodeIndex k : candidate_order(inst, paths, origin, target)) {
      while (hosted_at.size() < req.length()) {
        const Resources& demand = inst.catalog[req.chain[hosted_at.size()]].demand;
        if (!work.fits(k, demand)) break;
        const auto& hop = paths.path(m, k);
        if (path_bottleneck(net, hop, work) + kRateTolerance < rate) break;
        if (hosted_at.empty() ? !head_pairs_fit(k)
                              : !budgets.fits(kChainPairs, m, k, rate * heads * plans_per_head)) {
          break;
        }
        work.reserve(k, demand);
        work = consume_flow(std::move(work), net, hop, rate);
        if (hosted_at.empty()) {
          for (NodeIndex s : req.heads) budgets.charge(kHeadPairs, s, k, rate * plans_per_head);
        } else {
          budgets.charge(kChainPairs, m, k, rate * heads * plans_per_head);
        }
        append_hop(walk, hop);
        hosted_at.push_back(k);
        m = k;
      }
      if (hosted_at.size() == req.length()) break;
    }

    if (hosted_at.size() == req.length()) {
      const auto& tail = paths.path(m, target);
      const bool tail_fits =
          path_bottleneck(net, tail, work) + kRateTolerance >= rate &&
          std::all_of(destinations.begin(), destinations.end(), [&](const WeightedDestination& d) {
            return budgets.fits(kTailPairs, m, d.node, rate * heads);
          });
      if (!tail_fits) {
        hosted_at.clear();  // served chain but no room to deliver: drop it all
      } else {
        work = consume_flow(std::move(work), net, tail, rate);
        for (const auto& d : destinations) budgets.charge(kTailPairs, m, d.node, rate * heads);
        append_hop(walk, tail);
      }
    }

    if (hosted_at.empty()) {
      budgets.rollback();
    } else {
      residual = std::move(work);
      budgets.commit();
      for (std::size_t l = 0; l < hosted_at.size(); ++l) {
        const NfIndex nf = req.chain[l];
        result.placement.hosts.insert({r, nf, hosted_at[l]});
        for (NodeIndex s : req.heads) {
          for (const auto& d : destinations) {
            result.placement.visits.insert({r, nf, hosted_at[l], s, d.node});
          }
        }
      }
      result.routes.push_back({r, std::move(walk), rate});
    }
    for (std::size_t l = hosted_at.size(); l < req.length(); ++l) {
      result.unplaced.push_back({r, l, req.chain[l]});
    }
  }

  result.cost = evaluate_cost(inst, result.placement, paths);
  if (!result.unplaced.empty()) {
    const double penalty = options.penalty_per_position.value_or(default_unplaced_penalty(paths));
    result.cost = add_unplaced_penalty(result.cost, result.unplaced.size(), penalty);
  }
  return result;
}

}  // namespace

NodeIndex most_likely_destination(const ProblemInstance& inst) {
  const auto destinations = evaluation_destinations(inst);
  if (destinations.empty()) return inst.network.attachment();
  // evaluation_destinations is sorted by node, so a strict comparison keeps
  // the smallest node among equal probabilities.
  const auto best = std::max_element(
      destinations.begin(), destinations.end(),
      [](const WeightedDestination& a, const WeightedDestination& b) { return a.weight < b.weight; });
  return best->node;
}

HeuristicResult ppcc(const ProblemInstance& inst, const PathTable& paths,
                     const HeuristicOptions& options) {
  const NodeIndex target = most_likely_destination(inst);
  return greedy(inst, paths, options, target, [&](const ServiceRequest& req) {
    return closest_head(req, target, paths);
  });
}

HeuristicResult spba(const ProblemInstance& inst, const PathTable& paths,
                     const HeuristicOptions& options) {
  const NodeIndex target = inst.network.attachment();
  if (options.spba_origin == SpbaOrigin::kGateway) {
    const NodeIndex g = inst.network.gateway();
    return greedy(inst, paths, options, target, [g](const ServiceRequest&) { return g; });
  }
  return greedy(inst, paths, options, target, [&](const ServiceRequest& req) {
    return closest_head(req, target, paths);
  });
}

HeuristicResult agw(const ProblemInstance& inst, const PathTable& paths) {
  const NodeIndex g = inst.network.gateway();
  const auto destinations = evaluation_destinations(inst);
  HeuristicResult result;
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto& req = inst.requests[r];
    for (NfIndex nf : req.chain) {
      result.placement.hosts.insert({r, nf, g});
      for (NodeIndex s : req.heads) {
        for (const auto& d : destinations) result.placement.visits.insert({r, nf, g, s, d.node});
      }
    }
  }
  result.cost = evaluate_cost(inst, result.placement, paths);
  return result;
}

}  // namespace pcc
