#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace pcc {

using NodeIndex = std::size_t;

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Physical resources of a hosting node or the demand of one network function:
// (memory in MByte, fractional CPU cores).
using Resources = Eigen::Array2d;

inline Resources make_resources(double memory_mb, double cpu_cores) {
  return Resources(memory_mb, cpu_cores);
}

struct Link {
  NodeIndex u = 0;
  NodeIndex v = 0;
  double cost = 0.0;
  double capacity_mbps = 0.0;

  bool operator==(const Link&) const = default;
};

// Undirected weighted graph with a candidate hosting set, a gateway and the
// user's current attachment node. Node ids are positions in the name list;
// that order is the tie-breaking order used everywhere else.
class EdgeNetwork {
 public:
  struct Neighbor {
    NodeIndex node;
    std::size_t link;
  };

  EdgeNetwork() = default;
  EdgeNetwork(std::vector<std::string> node_names, std::vector<Link> links,
              std::vector<NodeIndex> candidates, NodeIndex gateway,
              NodeIndex attachment);

  std::size_t num_nodes() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(NodeIndex node) const { return names_.at(node); }
  std::optional<NodeIndex> find(std::string_view name) const;

  const std::vector<Link>& links() const { return links_; }
  const std::vector<NodeIndex>& candidates() const { return candidates_; }
  bool is_candidate(NodeIndex node) const;
  NodeIndex gateway() const { return gateway_; }
  NodeIndex attachment() const { return attachment_; }

  // Link id joining a and b, if any.
  std::optional<std::size_t> link_between(NodeIndex a, NodeIndex b) const;
  std::span<const Neighbor> neighbors(NodeIndex node) const;

  // Flow a node can forward between two functions it hosts (Lambda_kk).
  double node_throughput(NodeIndex node) const;
  void set_node_throughput(NodeIndex node, double mbps);
  const std::vector<double>& node_throughputs() const { return throughput_; }

  bool is_connected() const;

  bool operator==(const EdgeNetwork& other) const;

 private:
  static std::uint64_t pair_key(NodeIndex a, NodeIndex b);

  std::vector<std::string> names_;
  std::vector<Link> links_;
  std::vector<NodeIndex> candidates_;
  NodeIndex gateway_ = 0;
  NodeIndex attachment_ = 0;
  std::vector<double> throughput_;
  std::vector<char> candidate_mask_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<std::uint64_t, std::size_t> link_index_;
};

// Shortest routes between every ordered pair of a relevant node subset.
// Costs are symmetric, the diagonal is zero, and equal-cost ties resolve to
// the lexicographically smallest node sequence.
class PathTable {
 public:
  PathTable() = default;

  bool contains(NodeIndex node) const;
  const std::vector<NodeIndex>& relevant() const { return relevant_; }

  double cost(NodeIndex a, NodeIndex b) const;
  double bottleneck(NodeIndex a, NodeIndex b) const;
  const std::vector<NodeIndex>& path(NodeIndex a, NodeIndex b) const;

  // Largest finite pair cost in the table.
  double max_cost() const;

 private:
  friend PathTable shortest_paths(const EdgeNetwork& network,
                                  std::span<const NodeIndex> relevant);

  std::size_t slot(NodeIndex node) const;

  std::vector<NodeIndex> relevant_;
  std::vector<std::ptrdiff_t> slot_;
  Eigen::MatrixXd cost_;
  Eigen::MatrixXd bottleneck_;
  std::vector<std::vector<NodeIndex>> paths_;
};

// All-pairs shortest paths among `relevant`, run over the whole graph.
// Throws kInstanceInvalid for a disconnected graph and kIndex for an unknown
// relevant node.
PathTable shortest_paths(const EdgeNetwork& network,
                         std::span<const NodeIndex> relevant);

// Mutable capacity bookkeeping: remaining link capacity, node throughput and
// node resources. One owner per run.
class ResidualState {
 public:
  ResidualState() = default;
  // Non-candidate nodes get unbounded resources.
  ResidualState(const EdgeNetwork& network,
                const std::vector<std::optional<Resources>>& node_resources);
  explicit ResidualState(const EdgeNetwork& network);

  double link(std::size_t link_id) const { return links_(link_id); }
  double initial_link(std::size_t link_id) const {
    return initial_links_(link_id);
  }
  const Eigen::VectorXd& links() const { return links_; }
  void set_link(std::size_t link_id, double remaining);

  double throughput(NodeIndex node) const { return throughput_(node); }
  void set_throughput(NodeIndex node, double remaining);

  Resources resources(NodeIndex node) const { return nodes_.col(node); }
  bool fits(NodeIndex node, const Resources& demand) const;
  // Throws kCapacityExceeded if the demand does not fit.
  void reserve(NodeIndex node, const Resources& demand);

  bool operator==(const ResidualState& other) const;

 private:
  Eigen::VectorXd links_;
  Eigen::VectorXd initial_links_;
  Eigen::VectorXd throughput_;
  Eigen::VectorXd initial_throughput_;
  Eigen::Array2Xd nodes_;
};

// Minimum remaining capacity over the links of a walk; a single-node walk
// reports the node's remaining throughput (unbounded by default).
double path_bottleneck(const EdgeNetwork& network,
                       std::span<const NodeIndex> path,
                       const ResidualState& residual);

// Charges `rate` to every link traversal of the walk. Throws
// kCapacityExceeded without modifying anything when a link cannot carry the
// accumulated charge, kInvalidPath for a non-adjacent step.
ResidualState consume_flow(ResidualState residual, const EdgeNetwork& network,
                           std::span<const NodeIndex> path, double rate);

// Inverse of consume_flow; never raises a residual above its initial value.
ResidualState restore_flow(ResidualState residual, const EdgeNetwork& network,
                           std::span<const NodeIndex> path, double rate);

}  // namespace pcc
