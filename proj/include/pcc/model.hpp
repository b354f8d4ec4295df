#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pcc/graph.hpp"

namespace pcc {

using NfIndex = std::size_t;

struct NetworkFunction {
  std::string name;
  Resources demand = Resources::Zero();

  bool operator==(const NetworkFunction& other) const {
    return name == other.name && (demand == other.demand).all();
  }
};

using NfCatalog = std::vector<NetworkFunction>;

// One service chain. The cache at the head is not part of `chain`; it is
// realized by whichever node of `heads` the flow starts from.
struct ServiceRequest {
  std::string id;
  std::vector<NfIndex> chain;
  double flow_rate_mbps = 0.0;
  std::vector<NodeIndex> heads;
  // Optional per-head objective weights; empty means every head weighs 1.
  std::vector<double> head_weights;

  std::size_t length() const { return chain.size(); }
  double head_weight(std::size_t head_position) const;
  // Zero-based chain position of nf, if the chain contains it.
  std::optional<std::size_t> position_of(NfIndex nf) const;

  bool operator==(const ServiceRequest&) const = default;
};

struct Destination {
  NodeIndex node = 0;
  double probability = 0.0;

  bool operator==(const Destination&) const = default;
};

struct MobilityProfile {
  std::vector<Destination> destinations;
  double stay_probability = 1.0;

  bool operator==(const MobilityProfile&) const = default;
};

struct ProblemInstance {
  EdgeNetwork network;
  NfCatalog catalog;
  // U_k indexed by node; set exactly for the candidates.
  std::vector<std::optional<Resources>> node_resources;
  std::vector<ServiceRequest> requests;
  // C_i^k, rows are functions and columns nodes. Empty means all zero.
  Eigen::MatrixXd placement_cost;
  MobilityProfile mobility;

  double placement_cost_of(NfIndex nf, NodeIndex node) const;
  std::optional<NfIndex> find_nf(std::string_view name) const;

  // Nodes allowed to host functions: the candidates in listed order, then the
  // gateway if it is not already a candidate.
  std::vector<NodeIndex> hosting_nodes() const;
  // Every node any algorithm routes from or to.
  std::vector<NodeIndex> relevant_nodes() const;

  bool operator==(const ProblemInstance& other) const;
};

// V_ril: 1 iff the function at one-based position l of the chain is nf.
// Throws kIndex when l is outside [1, L].
int v_entry(const ServiceRequest& request, NfIndex nf, std::size_t l);

struct WeightedDestination {
  NodeIndex node = 0;
  double weight = 0.0;
};

// Destinations the objective is evaluated over: D plus the attachment node
// weighted by the stay probability. Entries are merged per node, zero weights
// dropped, and the result is ordered by node id.
std::vector<WeightedDestination> evaluation_destinations(
    const ProblemInstance& instance);

enum class ViolationCode {
  kEmptyNetwork,
  kDuplicateNode,
  kUnknownLinkEndpoint,
  kSelfLoop,
  kDuplicateLink,
  kNonPositiveLinkCost,
  kNonPositiveLinkCapacity,
  kNonPositiveThroughput,
  kDisconnected,
  kUnknownCandidate,
  kDuplicateCandidate,
  kUnknownGateway,
  kUnknownAttachment,
  kEmptyCatalog,
  kDuplicateNF,
  kNonPositiveDemand,
  kMissingNodeResources,
  kUnexpectedNodeResources,
  kNonPositiveNodeResources,
  kEmptyBatch,
  kDuplicateRequestId,
  kEmptyChain,
  kChainTooLong,
  kUnknownNF,
  kRepeatedNF,
  kNonPositiveFlowRate,
  kEmptyHeads,
  kUnknownHead,
  kDuplicateHead,
  kHeadWeightMismatch,
  kNegativeHeadWeight,
  kPlacementCostShape,
  kNegativePlacementCost,
  kInvalidProbability,
  kUnknownDestination,
  kDuplicateDestination,
  kEmptyDestinations,
  kMobilityMassExceeded,
  kMobilityMassDeficit,
};

std::string_view to_string(ViolationCode code);

struct InstanceViolation {
  ViolationCode code;
  std::string detail;
};

// Checks every instance invariant; an empty result means valid.
std::vector<InstanceViolation> validate_instance(const ProblemInstance& instance);

// Placement indices. Requests are positions in the batch, nodes and
// functions are indices into the network and catalog.
struct HostIndex {
  std::size_t request = 0;
  NfIndex nf = 0;
  NodeIndex node = 0;

  auto operator<=>(const HostIndex&) const = default;
};

struct VisitIndex {
  std::size_t request = 0;
  NfIndex nf = 0;
  NodeIndex node = 0;
  NodeIndex head = 0;
  NodeIndex destination = 0;

  auto operator<=>(const VisitIndex&) const = default;
};

struct HopIndex {
  std::size_t request = 0;
  NfIndex from_nf = 0;
  NfIndex to_nf = 0;
  NodeIndex from_node = 0;
  NodeIndex to_node = 0;
  NodeIndex head = 0;
  NodeIndex destination = 0;

  auto operator<=>(const HopIndex&) const = default;
};

// Sparse 0/1 decision variables: x (hosts) and y (visits). z is implied by y;
// `hops` is only set when a placement file carried explicit z values.
struct Placement {
  std::set<HostIndex> hosts;
  std::set<VisitIndex> visits;
  std::optional<std::set<HopIndex>> hops;

  bool operator==(const Placement&) const = default;
};

// A function of a request the heuristics could not host.
struct UnplacedFunction {
  std::size_t request = 0;
  std::size_t position = 0;  // zero-based
  NfIndex nf = 0;

  bool operator==(const UnplacedFunction&) const = default;
};

}  // namespace pcc
