#include "pcc/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "pcc/error.hpp"

namespace pcc {

namespace {

constexpr double kMassTolerance = 1e-9;

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInstanceInvalid: return "InstanceInvalid";
    case ErrorKind::kInvalidPath: return "InvalidPath";
    case ErrorKind::kCapacityExceeded: return "CapacityExceeded";
    case ErrorKind::kIndex: return "IndexError";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kEvaluation: return "EvaluationError";
    case ErrorKind::kSize: return "SizeError";
    case ErrorKind::kGeneration: return "GenerationError";
    case ErrorKind::kUndefinedGain: return "UndefinedGain";
    case ErrorKind::kEmptyTable: return "EmptyTable";
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kUsage: return "UsageError";
    case ErrorKind::kInvalidParams: return "InvalidParams";
  }
  return "Unknown";
}

double ServiceRequest::head_weight(std::size_t head_position) const {
  if (head_weights.empty()) return 1.0;
  return head_weights.at(head_position);
}

std::optional<std::size_t> ServiceRequest::position_of(NfIndex nf) const {
  auto it = std::find(chain.begin(), chain.end(), nf);
  if (it == chain.end()) return std::nullopt;
  return static_cast<std::size_t>(it - chain.begin());
}

double ProblemInstance::placement_cost_of(NfIndex nf, NodeIndex node) const {
  if (nf >= static_cast<std::size_t>(placement_cost.rows()) ||
      node >= static_cast<std::size_t>(placement_cost.cols())) {
    return 0.0;
  }
  return placement_cost(static_cast<Eigen::Index>(nf),
                        static_cast<Eigen::Index>(node));
}

std::optional<NfIndex> ProblemInstance::find_nf(std::string_view name) const {
  for (NfIndex i = 0; i < catalog.size(); ++i) {
    if (catalog[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<NodeIndex> ProblemInstance::hosting_nodes() const {
  std::vector<NodeIndex> nodes = network.candidates();
  if (!network.is_candidate(network.gateway())) nodes.push_back(network.gateway());
  return nodes;
}

std::vector<NodeIndex> ProblemInstance::relevant_nodes() const {
  std::set<NodeIndex> nodes;
  for (NodeIndex k : hosting_nodes()) nodes.insert(k);
  nodes.insert(network.gateway());
  nodes.insert(network.attachment());
  for (const auto& d : mobility.destinations) nodes.insert(d.node);
  for (const auto& r : requests) nodes.insert(r.heads.begin(), r.heads.end());
  return {nodes.begin(), nodes.end()};
}

bool ProblemInstance::operator==(const ProblemInstance& other) const {
  if (!(network == other.network && catalog == other.catalog &&
        requests == other.requests && mobility == other.mobility)) {
    return false;
  }
  if (node_resources.size() != other.node_resources.size()) return false;
  for (std::size_t k = 0; k < node_resources.size(); ++k) {
    const auto& a = node_resources[k];
    const auto& b = other.node_resources[k];
    if (a.has_value() != b.has_value()) return false;
    if (a && !(*a == *b).all()) return false;
  }
  for (NfIndex i = 0; i < catalog.size(); ++i) {
    for (NodeIndex k = 0; k < network.num_nodes(); ++k) {
      if (placement_cost_of(i, k) != other.placement_cost_of(i, k)) return false;
    }
  }
  return true;
}

int v_entry(const ServiceRequest& request, NfIndex nf, std::size_t l) {
  if (l < 1 || l > request.chain.size()) {
    throw Error(ErrorKind::kIndex, "chain position " + std::to_string(l) +
                                       " outside [1, " +
                                       std::to_string(request.chain.size()) + "]");
  }
  return request.chain[l - 1] == nf ? 1 : 0;
}

std::vector<WeightedDestination> evaluation_destinations(
    const ProblemInstance& instance) {
  std::map<NodeIndex, double> weights;
  for (const auto& d : instance.mobility.destinations) weights[d.node] += d.probability;
  weights[instance.network.attachment()] += instance.mobility.stay_probability;
  std::vector<WeightedDestination> out;
  for (const auto& [node, weight] : weights) {
    if (weight > 0.0) out.push_back({node, weight});
  }
  return out;
}

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kEmptyNetwork: return "EmptyNetwork";
    case ViolationCode::kDuplicateNode: return "DuplicateNode";
    case ViolationCode::kUnknownLinkEndpoint: return "UnknownLinkEndpoint";
    case ViolationCode::kSelfLoop: return "SelfLoop";
    case ViolationCode::kDuplicateLink: return "DuplicateLink";
    case ViolationCode::kNonPositiveLinkCost: return "NonPositiveLinkCost";
    case ViolationCode::kNonPositiveLinkCapacity: return "NonPositiveLinkCapacity";
    case ViolationCode::kNonPositiveThroughput: return "NonPositiveThroughput";
    case ViolationCode::kDisconnected: return "Disconnected";
    case ViolationCode::kUnknownCandidate: return "UnknownCandidate";
    case ViolationCode::kDuplicateCandidate: return "DuplicateCandidate";
    case ViolationCode::kUnknownGateway: return "UnknownGateway";
    case ViolationCode::kUnknownAttachment: return "UnknownAttachment";
    case ViolationCode::kEmptyCatalog: return "EmptyCatalog";
    case ViolationCode::kDuplicateNF: return "DuplicateNF";
    case ViolationCode::kNonPositiveDemand: return "NonPositiveDemand";
    case ViolationCode::kMissingNodeResources: return "MissingNodeResources";
    case ViolationCode::kUnexpectedNodeResources: return "UnexpectedNodeResources";
    case ViolationCode::kNonPositiveNodeResources: return "NonPositiveNodeResources";
    case ViolationCode::kEmptyBatch: return "EmptyBatch";
    case ViolationCode::kDuplicateRequestId: return "DuplicateRequestId";
    case ViolationCode::kEmptyChain: return "EmptyChain";
    case ViolationCode::kChainTooLong: return "ChainTooLong";
    case ViolationCode::kUnknownNF: return "UnknownNF";
    case ViolationCode::kRepeatedNF: return "RepeatedNF";
    case ViolationCode::kNonPositiveFlowRate: return "NonPositiveFlowRate";
    case ViolationCode::kEmptyHeads: return "EmptyHeads";
    case ViolationCode::kUnknownHead: return "UnknownHead";
    case ViolationCode::kDuplicateHead: return "DuplicateHead";
    case ViolationCode::kHeadWeightMismatch: return "HeadWeightMismatch";
    case ViolationCode::kNegativeHeadWeight: return "NegativeHeadWeight";
    case ViolationCode::kPlacementCostShape: return "PlacementCostShape";
    case ViolationCode::kNegativePlacementCost: return "NegativePlacementCost";
    case ViolationCode::kInvalidProbability: return "InvalidProbability";
    case ViolationCode::kUnknownDestination: return "UnknownDestination";
    case ViolationCode::kDuplicateDestination: return "DuplicateDestination";
    case ViolationCode::kEmptyDestinations: return "EmptyDestinations";
    case ViolationCode::kMobilityMassExceeded: return "MobilityMassExceeded";
    case ViolationCode::kMobilityMassDeficit: return "MobilityMassDeficit";
  }
  return "Unknown";
}

namespace {

class ViolationSink {
 public:
  void add(ViolationCode code, std::string detail) {
    out_.push_back({code, std::move(detail)});
  }
  std::vector<InstanceViolation> take() { return std::move(out_); }

 private:
  std::vector<InstanceViolation> out_;
};

void validate_network(const EdgeNetwork& net, ViolationSink& sink) {
  const std::size_t n = net.num_nodes();
  if (n == 0) {
    sink.add(ViolationCode::kEmptyNetwork, "network has no nodes");
    return;
  }
  std::set<std::string> names;
  for (const auto& name : net.names()) {
    if (!names.insert(name).second) sink.add(ViolationCode::kDuplicateNode, name);
  }
  std::set<std::pair<NodeIndex, NodeIndex>> seen;
  for (std::size_t id = 0; id < net.links().size(); ++id) {
    const Link& link = net.links()[id];
    const std::string where = "link " + std::to_string(id);
    if (link.u >= n || link.v >= n) {
      sink.add(ViolationCode::kUnknownLinkEndpoint, where);
      continue;
    }
    if (link.u == link.v) sink.add(ViolationCode::kSelfLoop, where);
    if (!seen.insert(std::minmax(link.u, link.v)).second) {
      sink.add(ViolationCode::kDuplicateLink, where);
    }
    if (!(link.cost > 0.0) || !std::isfinite(link.cost)) {
      sink.add(ViolationCode::kNonPositiveLinkCost, where);
    }
    if (!(link.capacity_mbps > 0.0)) {
      sink.add(ViolationCode::kNonPositiveLinkCapacity, where);
    }
  }
  for (NodeIndex k = 0; k < n; ++k) {
    if (!(net.node_throughput(k) > 0.0)) {
      sink.add(ViolationCode::kNonPositiveThroughput, net.name(k));
    }
  }
  if (!net.is_connected()) sink.add(ViolationCode::kDisconnected, "graph is disconnected");
  std::set<NodeIndex> candidates;
  for (NodeIndex k : net.candidates()) {
    if (k >= n) {
      sink.add(ViolationCode::kUnknownCandidate, std::to_string(k));
    } else if (!candidates.insert(k).second) {
      sink.add(ViolationCode::kDuplicateCandidate, net.name(k));
    }
  }
  if (net.gateway() >= n) sink.add(ViolationCode::kUnknownGateway, "gateway");
  if (net.attachment() >= n) sink.add(ViolationCode::kUnknownAttachment, "attachment");
}

void validate_resources(const ProblemInstance& inst, ViolationSink& sink) {
  const auto& net = inst.network;
  if (inst.catalog.empty()) sink.add(ViolationCode::kEmptyCatalog, "catalog is empty");
  std::set<std::string> names;
  for (const auto& nf : inst.catalog) {
    if (!names.insert(nf.name).second) sink.add(ViolationCode::kDuplicateNF, nf.name);
    if (!(nf.demand > 0.0).all()) sink.add(ViolationCode::kNonPositiveDemand, nf.name);
  }
  for (NodeIndex k = 0; k < std::max(net.num_nodes(), inst.node_resources.size()); ++k) {
    const bool has = k < inst.node_resources.size() && inst.node_resources[k];
    const std::string where = k < net.num_nodes() ? net.name(k) : std::to_string(k);
    if (net.is_candidate(k) && !has) {
      sink.add(ViolationCode::kMissingNodeResources, where);
    } else if (!net.is_candidate(k) && has) {
      sink.add(ViolationCode::kUnexpectedNodeResources, where);
    } else if (has && !(*inst.node_resources[k] > 0.0).all()) {
      sink.add(ViolationCode::kNonPositiveNodeResources, where);
    }
  }
  const auto& c = inst.placement_cost;
  if (c.size() != 0) {
    if (static_cast<std::size_t>(c.rows()) != inst.catalog.size() ||
        static_cast<std::size_t>(c.cols()) != net.num_nodes()) {
      sink.add(ViolationCode::kPlacementCostShape, "placement cost matrix shape");
    } else if ((c.array() < 0.0).any() || !c.allFinite()) {
      sink.add(ViolationCode::kNegativePlacementCost, "placement cost");
    }
  }
}

void validate_requests(const ProblemInstance& inst, ViolationSink& sink) {
  const std::size_t n = inst.network.num_nodes();
  if (inst.requests.empty()) sink.add(ViolationCode::kEmptyBatch, "batch is empty");
  std::set<std::string> ids;
  for (const auto& r : inst.requests) {
    if (!ids.insert(r.id).second) sink.add(ViolationCode::kDuplicateRequestId, r.id);
    if (r.chain.empty()) sink.add(ViolationCode::kEmptyChain, r.id);
    // Functions are distinct within a chain, so the catalog bounds L.
    if (r.chain.size() > inst.catalog.size()) sink.add(ViolationCode::kChainTooLong, r.id);
    std::set<NfIndex> used;
    for (NfIndex nf : r.chain) {
      if (nf >= inst.catalog.size()) {
        sink.add(ViolationCode::kUnknownNF, r.id);
      } else if (!used.insert(nf).second) {
        sink.add(ViolationCode::kRepeatedNF, r.id);
      }
    }
    if (!(r.flow_rate_mbps > 0.0) || !std::isfinite(r.flow_rate_mbps)) {
      sink.add(ViolationCode::kNonPositiveFlowRate, r.id);
    }
    if (r.heads.empty()) sink.add(ViolationCode::kEmptyHeads, r.id);
    std::set<NodeIndex> heads;
    for (NodeIndex s : r.heads) {
      if (s >= n) {
        sink.add(ViolationCode::kUnknownHead, r.id);
      } else if (!heads.insert(s).second) {
        sink.add(ViolationCode::kDuplicateHead, r.id);
      }
    }
    if (!r.head_weights.empty()) {
      if (r.head_weights.size() != r.heads.size()) {
        sink.add(ViolationCode::kHeadWeightMismatch, r.id);
      }
      for (double w : r.head_weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
          sink.add(ViolationCode::kNegativeHeadWeight, r.id);
        }
      }
    }
  }
}

void validate_mobility(const ProblemInstance& inst, ViolationSink& sink) {
  const auto& m = inst.mobility;
  auto valid_probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!valid_probability(m.stay_probability)) {
    sink.add(ViolationCode::kInvalidProbability, "stay_probability");
  }
  double mass = m.stay_probability;
  std::set<NodeIndex> seen;
  for (const auto& d : m.destinations) {
    if (d.node >= inst.network.num_nodes()) {
      sink.add(ViolationCode::kUnknownDestination, std::to_string(d.node));
    } else if (!seen.insert(d.node).second) {
      sink.add(ViolationCode::kDuplicateDestination, inst.network.name(d.node));
    }
    if (!valid_probability(d.probability)) {
      sink.add(ViolationCode::kInvalidProbability, "destination probability");
    }
    mass += d.probability;
  }
  if (m.destinations.empty() && m.stay_probability != 1.0) {
    sink.add(ViolationCode::kEmptyDestinations, "no destinations while stay_probability < 1");
  }
  if (mass > 1.0 + kMassTolerance) {
    sink.add(ViolationCode::kMobilityMassExceeded, "total mass " + std::to_string(mass));
  } else if (mass < 1.0 - kMassTolerance) {
    sink.add(ViolationCode::kMobilityMassDeficit, "total mass " + std::to_string(mass));
  }
}

}  // namespace

std::vector<InstanceViolation> validate_instance(const ProblemInstance& instance) {
  ViolationSink sink;
  validate_network(instance.network, sink);
  validate_resources(instance, sink);
  validate_requests(instance, sink);
  validate_mobility(instance, sink);
  return sink.take();
}

}  // namespace pcc
