#include "pcc/evaluation.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

#include "pcc/error.hpp"

namespace pcc {

namespace {

constexpr double kSlackTolerance = 1e-9;

using GroupKey = std::tuple<std::size_t, NodeIndex, NodeIndex>;  // (r, s, d)
// Nodes visited at each chain position of one (request, head, destination).
using VisitGroups = std::map<GroupKey, std::vector<std::vector<NodeIndex>>>;

VisitGroups group_visits(const ProblemInstance& inst, const Placement& placement) {
  VisitGroups groups;
  for (const auto& v : placement.visits) {
    const auto& r = inst.requests[v.request];
    auto& by_position = groups[{v.request, v.head, v.destination}];
    by_position.resize(r.length());
    by_position[*r.position_of(v.nf)].push_back(v.node);
  }
  return groups;
}

std::size_t head_position(const ServiceRequest& r, NodeIndex head) {
  return static_cast<std::size_t>(std::find(r.heads.begin(), r.heads.end(), head) -
                                  r.heads.begin());
}

}  // namespace

std::string_view to_string(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::k5a: return "5a";
    case ConstraintFamily::k5b: return "5b";
    case ConstraintFamily::k5c: return "5c";
    case ConstraintFamily::k5d: return "5d";
    case ConstraintFamily::k5e: return "5e";
    case ConstraintFamily::k5f: return "5f";
    case ConstraintFamily::k5g: return "5g";
    case ConstraintFamily::k5h: return "5h";
    case ConstraintFamily::k5i: return "5i";
    case ConstraintFamily::kLinkCapacity: return "link";
  }
  return "unknown";
}

std::set<ConstraintFamily> ViolationReport::families() const {
  std::set<ConstraintFamily> out;
  for (const auto& v : violations) out.insert(v.family);
  return out;
}

void check_placement_indices(const ProblemInstance& inst, const Placement& placement) {
  const auto hosting = inst.hosting_nodes();
  const auto destinations = evaluation_destinations(inst);
  auto bad = [](const std::string& what) {
    throw Error(ErrorKind::kEvaluation, "placement references " + what);
  };
  auto check_rnk = [&](std::size_t r, NfIndex nf, NodeIndex k) {
    if (r >= inst.requests.size()) bad("unknown request " + std::to_string(r));
    if (nf >= inst.catalog.size() || !inst.requests[r].position_of(nf)) {
      bad("function " + std::to_string(nf) + " outside the chain of request " +
          inst.requests[r].id);
    }
    if (std::find(hosting.begin(), hosting.end(), k) == hosting.end()) {
      bad("non-hosting node " + std::to_string(k));
    }
  };
  auto check_sd = [&](std::size_t r, NodeIndex s, NodeIndex d) {
    const auto& heads = inst.requests[r].heads;
    if (std::find(heads.begin(), heads.end(), s) == heads.end()) {
      bad("node " + std::to_string(s) + " that is not a head of " + inst.requests[r].id);
    }
    if (std::none_of(destinations.begin(), destinations.end(),
                     [d](const WeightedDestination& w) { return w.node == d; })) {
      bad("node " + std::to_string(d) + " that is not an evaluation destination");
    }
  };
  for (const auto& h : placement.hosts) check_rnk(h.request, h.nf, h.node);
  for (const auto& v : placement.visits) {
    check_rnk(v.request, v.nf, v.node);
    check_sd(v.request, v.head, v.destination);
  }
  if (placement.hops) {
    for (const auto& z : *placement.hops) {
      check_rnk(z.request, z.from_nf, z.from_node);
      check_rnk(z.request, z.to_nf, z.to_node);
      check_sd(z.request, z.head, z.destination);
    }
  }
}

CostReport evaluate_cost(const ProblemInstance& inst, const Placement& placement,
                         const PathTable& paths) {
  check_placement_indices(inst, placement);

  // Hop costs are summed per destination first and weighted once, so two
  // placements whose per-destination route costs coincide produce the same
  // floating-point total regardless of how the hops split.
  struct Sums {
    double head = 0.0;
    double chain = 0.0;
    double tail = 0.0;
  };
  std::map<NodeIndex, Sums> by_destination;
  for (const auto& [key, positions] : group_visits(inst, placement)) {
    const auto& [r_index, s, d] = key;
    const auto& r = inst.requests[r_index];
    const double head_weight = r.head_weight(head_position(r, s));
    Sums& sums = by_destination[d];
    for (NodeIndex k : positions.front()) sums.head += head_weight * paths.cost(s, k);
    for (std::size_t l = 0; l + 1 < positions.size(); ++l) {
      for (NodeIndex k : positions[l]) {
        for (NodeIndex m : positions[l + 1]) sums.chain += head_weight * paths.cost(k, m);
      }
    }
    for (NodeIndex k : positions.back()) sums.tail += head_weight * paths.cost(k, d);
  }

  CostReport report;
  for (const auto& h : placement.hosts) {
    report.placement_term += inst.placement_cost_of(h.nf, h.node);
  }
  double routing = 0.0;
  for (const auto& d : evaluation_destinations(inst)) {
    auto it = by_destination.find(d.node);
    if (it == by_destination.end()) continue;
    const Sums& sums = it->second;
    report.head_hop_term += d.weight * sums.head;
    report.chain_hop_term += d.weight * sums.chain;
    report.tail_hop_term += d.weight * sums.tail;
    routing += d.weight * (sums.head + sums.chain + sums.tail);
  }
  report.total = report.placement_term + routing;
  return report;
}

CostReport add_unplaced_penalty(CostReport report, std::size_t unplaced_count,
                                double penalty_per_position) {
  report.total -= report.penalty_term;
  report.penalty_term = static_cast<double>(unplaced_count) * penalty_per_position;
  report.total += report.penalty_term;
  return report;
}

double default_unplaced_penalty(const PathTable& paths) { return 2.0 * paths.max_cost(); }

ViolationReport check_constraints(const ProblemInstance& inst, const Placement& placement,
                                  const PathTable& paths) {
  check_placement_indices(inst, placement);
  ViolationReport report;
  auto add = [&](ConstraintFamily f, std::vector<std::size_t> index, double slack) {
    report.violations.push_back({f, std::move(index), slack});
  };

  // 5a
  std::map<NodeIndex, Resources> usage;
  for (const auto& h : placement.hosts) {
    auto [it, inserted] = usage.try_emplace(h.node, Resources::Zero());
    it->second += inst.catalog[h.nf].demand;
  }
  for (const auto& [k, used] : usage) {
    if (k >= inst.node_resources.size() || !inst.node_resources[k]) continue;
    const Resources slack = *inst.node_resources[k] - used;
    for (Eigen::Index dim = 0; dim < 2; ++dim) {
      if (slack(dim) < -kSlackTolerance) {
        add(ConstraintFamily::k5a, {k, static_cast<std::size_t>(dim)}, slack(dim));
      }
    }
  }

  // 5b-5d
  using PairLoad = std::map<std::pair<NodeIndex, NodeIndex>, double>;
  PairLoad head_load, chain_load, tail_load;
  const VisitGroups groups = group_visits(inst, placement);
  for (const auto& [key, positions] : groups) {
    const auto& [r_index, s, d] = key;
    const double rate = inst.requests[r_index].flow_rate_mbps;
    for (NodeIndex k : positions.front()) head_load[{s, k}] += rate;
    for (std::size_t l = 0; l + 1 < positions.size(); ++l) {
      for (NodeIndex k : positions[l]) {
        for (NodeIndex m : positions[l + 1]) chain_load[{k, m}] += rate;
      }
    }
    for (NodeIndex k : positions.back()) tail_load[{k, d}] += rate;
  }
  auto check_pairs = [&](const PairLoad& loads, ConstraintFamily family) {
    for (const auto& [pair, load] : loads) {
      const double budget = paths.bottleneck(pair.first, pair.second);
      if (load > budget + kSlackTolerance) add(family, {pair.first, pair.second}, budget - load);
    }
  };
  check_pairs(head_load, ConstraintFamily::k5b);
  check_pairs(chain_load, ConstraintFamily::k5c);
  check_pairs(tail_load, ConstraintFamily::k5d);

  // 5e
  const auto destinations = evaluation_destinations(inst);
  for (std::size_t r_index = 0; r_index < inst.requests.size(); ++r_index) {
    const auto& r = inst.requests[r_index];
    for (NodeIndex s : r.heads) {
      for (const auto& d : destinations) {
        auto it = groups.find({r_index, s, d.node});
        for (std::size_t l = 0; l < r.length(); ++l) {
          const std::size_t count = it == groups.end() ? 0 : it->second[l].size();
          if (count != 1) {
            add(ConstraintFamily::k5e, {r_index, s, d.node, l},
                -std::abs(static_cast<double>(count) - 1.0));
          }
        }
      }
    }
  }

  // 5f
  for (const auto& v : placement.visits) {
    if (!placement.hosts.contains({v.request, v.nf, v.node})) {
      add(ConstraintFamily::k5f, {v.request, v.nf, v.node, v.head, v.destination}, -1.0);
    }
  }

  // 5g-5i
  if (placement.hops) {
    const auto& hops = *placement.hops;
    for (const auto& z : hops) {
      std::vector<std::size_t> index{z.request, z.from_nf, z.to_nf, z.from_node,
                                     z.to_node, z.head,    z.destination};
      if (!placement.visits.contains({z.request, z.from_nf, z.from_node, z.head, z.destination})) {
        add(ConstraintFamily::k5g, index, -1.0);
      }
      if (!placement.visits.contains({z.request, z.to_nf, z.to_node, z.head, z.destination})) {
        add(ConstraintFamily::k5h, index, -1.0);
      }
    }
    for (const auto& [key, positions] : groups) {
      const auto& [r_index, s, d] = key;
      const auto& chain = inst.requests[r_index].chain;
      for (std::size_t l = 0; l + 1 < positions.size(); ++l) {
        for (NodeIndex k : positions[l]) {
          for (NodeIndex m : positions[l + 1]) {
            HopIndex z{r_index, chain[l], chain[l + 1], k, m, s, d};
            if (!hops.contains(z)) {
              add(ConstraintFamily::k5i, {r_index, chain[l], chain[l + 1], k, m, s, d}, -1.0);
            }
          }
        }
      }
    }
  }
  return report;
}

ViolationReport check_route_capacity(const EdgeNetwork& network,
                                     std::span<const Route> routes) {
  ResidualState initial(network);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(initial.links().size());
  for (const auto& route : routes) {
    if (route.walk.empty()) throw Error(ErrorKind::kInvalidPath, "empty route");
    for (std::size_t h = 0; h + 1 < route.walk.size(); ++h) {
      if (route.walk[h] == route.walk[h + 1]) continue;
      auto id = network.link_between(route.walk[h], route.walk[h + 1]);
      if (!id) throw Error(ErrorKind::kInvalidPath, "route uses a missing link");
      load(static_cast<Eigen::Index>(*id)) += route.rate_mbps;
    }
  }
  ViolationReport report;
  const Eigen::VectorXd slack = initial.links() - load;
  for (Eigen::Index id = 0; id < slack.size(); ++id) {
    if (slack(id) < -kSlackTolerance) {
      report.violations.push_back(
          {ConstraintFamily::kLinkCapacity, {static_cast<std::size_t>(id)}, slack(id)});
    }
  }
  return report;
}

double gain(double cost_a, double cost_b) {
  if (!(cost_b > 0.0)) {
    throw Error(ErrorKind::kUndefinedGain, "gain is undefined for a non-positive baseline cost");
  }
  return (cost_b - cost_a) / cost_b;
}

Json cost_report_to_json(const CostReport& report) {
  Json j = Json::object();
  j["placement_term"] = report.placement_term;
  j["head_hop_term"] = report.head_hop_term;
  j["chain_hop_term"] = report.chain_hop_term;
  j["tail_hop_term"] = report.tail_hop_term;
  j["penalty_term"] = report.penalty_term;
  j["total"] = report.total;
  return j;
}

Json violation_report_to_json(const ProblemInstance& inst, const ViolationReport& report) {
  auto node = [&](std::size_t k) { return Json(inst.network.name(k)); };
  auto nf = [&](std::size_t i) { return Json(inst.catalog.at(i).name); };
  auto req = [&](std::size_t r) { return Json(inst.requests.at(r).id); };
  Json out = Json::array();
  for (const auto& v : report.violations) {
    const auto& ix = v.index;
    Json index = Json::array();
    switch (v.family) {
      case ConstraintFamily::k5a:
        index = {node(ix[0]), ix[1] == 0 ? "memory_mb" : "cpu_cores"};
        break;
      case ConstraintFamily::k5b:
      case ConstraintFamily::k5c:
      case ConstraintFamily::k5d:
        index = {node(ix[0]), node(ix[1])};
        break;
      case ConstraintFamily::k5e:
        index = {req(ix[0]), node(ix[1]), node(ix[2]), ix[3] + 1};
        break;
      case ConstraintFamily::k5f:
        index = {req(ix[0]), nf(ix[1]), node(ix[2]), node(ix[3]), node(ix[4])};
        break;
      case ConstraintFamily::k5g:
      case ConstraintFamily::k5h:
      case ConstraintFamily::k5i:
        index = {req(ix[0]), nf(ix[1]), nf(ix[2]), node(ix[3]),
                 node(ix[4]), node(ix[5]), node(ix[6])};
        break;
      case ConstraintFamily::kLinkCapacity: {
        const auto& link = inst.network.links().at(ix[0]);
        index = {node(link.u), node(link.v)};
        break;
      }
    }
    Json item = Json::object();
    item["constraint"] = std::string(to_string(v.family));
    item["index"] = std::move(index);
    item["slack"] = v.slack;
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace pcc
