#include "pcc/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <utility>

#include "pcc/error.hpp"

namespace pcc {

namespace {

// Absorbs rounding drift from repeated subtraction of rates.
constexpr double kCapacityTolerance = 1e-9;

}  // namespace

EdgeNetwork::EdgeNetwork(std::vector<std::string> node_names,
                         std::vector<Link> links,
                         std::vector<NodeIndex> candidates, NodeIndex gateway,
                         NodeIndex attachment)
    : names_(std::move(node_names)),
      links_(std::move(links)),
      candidates_(std::move(candidates)),
      gateway_(gateway),
      attachment_(attachment),
      throughput_(names_.size(), kUnbounded),
      candidate_mask_(names_.size(), 0),
      adjacency_(names_.size()) {
  for (NodeIndex k : candidates_) {
    if (k < names_.size()) candidate_mask_[k] = 1;
  }
  // Out-of-range endpoints, self loops and duplicates are left for
  // validate_instance to report; they never enter the adjacency.
  for (std::size_t id = 0; id < links_.size(); ++id) {
    const Link& link = links_[id];
    if (link.u >= names_.size() || link.v >= names_.size() || link.u == link.v)
      continue;
    if (link_index_.contains(pair_key(link.u, link.v))) continue;
    link_index_.emplace(pair_key(link.u, link.v), id);
    adjacency_[link.u].push_back({link.v, id});
    adjacency_[link.v].push_back({link.u, id});
  }
  for (auto& row : adjacency_) {
    std::sort(row.begin(), row.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
}

std::uint64_t EdgeNetwork::pair_key(NodeIndex a, NodeIndex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

std::optional<NodeIndex> EdgeNetwork::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<NodeIndex>(it - names_.begin());
}

bool EdgeNetwork::is_candidate(NodeIndex node) const {
  return node < candidate_mask_.size() && candidate_mask_[node] != 0;
}

std::optional<std::size_t> EdgeNetwork::link_between(NodeIndex a,
                                                     NodeIndex b) const {
  auto it = link_index_.find(pair_key(a, b));
  if (it == link_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const EdgeNetwork::Neighbor> EdgeNetwork::neighbors(
    NodeIndex node) const {
  return adjacency_.at(node);
}

double EdgeNetwork::node_throughput(NodeIndex node) const {
  return throughput_.at(node);
}

void EdgeNetwork::set_node_throughput(NodeIndex node, double mbps) {
  throughput_.at(node) = mbps;
}

bool EdgeNetwork::is_connected() const {
  if (names_.empty()) return true;
  std::vector<char> seen(names_.size(), 0);
  std::vector<NodeIndex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeIndex node = stack.back();
    stack.pop_back();
    for (const Neighbor& n : adjacency_[node]) {
      if (!seen[n.node]) {
        seen[n.node] = 1;
        ++reached;
        stack.push_back(n.node);
      }
    }
  }
  return reached == names_.size();
}

bool EdgeNetwork::operator==(const EdgeNetwork& other) const {
  return names_ == other.names_ && links_ == other.links_ &&
         candidates_ == other.candidates_ && gateway_ == other.gateway_ &&
         attachment_ == other.attachment_ && throughput_ == other.throughput_;
}

// ---------------------------------------------------------------------------
// PathTable

std::size_t PathTable::slot(NodeIndex node) const {
  if (node >= slot_.size() || slot_[node] < 0) {
    throw Error(ErrorKind::kIndex,
                "node " + std::to_string(node) + " is not in the path table");
  }
  return static_cast<std::size_t>(slot_[node]);
}

bool PathTable::contains(NodeIndex node) const {
  return node < slot_.size() && slot_[node] >= 0;
}

double PathTable::cost(NodeIndex a, NodeIndex b) const {
  return cost_(slot(a), slot(b));
}

double PathTable::bottleneck(NodeIndex a, NodeIndex b) const {
  return bottleneck_(slot(a), slot(b));
}

const std::vector<NodeIndex>& PathTable::path(NodeIndex a, NodeIndex b) const {
  return paths_[slot(a) * relevant_.size() + slot(b)];
}

double PathTable::max_cost() const {
  return cost_.size() == 0 ? 0.0 : cost_.maxCoeff();
}

namespace {

struct SourceTree {
  std::vector<double> distance;
  std::vector<std::vector<NodeIndex>> route;
};

// Dijkstra keeping, for every node, the lexicographically smallest route among
// those of minimal cost. Every predecessor on a minimal route is strictly
// closer (positive costs), so routes are final when their node is popped.
SourceTree dijkstra(const EdgeNetwork& network, NodeIndex source) {
  const std::size_t n = network.num_nodes();
  SourceTree tree{std::vector<double>(n, kUnbounded),
                  std::vector<std::vector<NodeIndex>>(n)};
  std::vector<char> done(n, 0);
  using Entry = std::pair<double, NodeIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  tree.distance[source] = 0.0;
  tree.route[source] = {source};
  frontier.emplace(0.0, source);
  while (!frontier.empty()) {
    auto [dist, node] = frontier.top();
    frontier.pop();
    if (done[node]) continue;
    done[node] = 1;
    for (const auto& nb : network.neighbors(node)) {
      if (done[nb.node]) continue;
      const double candidate = dist + network.links()[nb.link].cost;
      const double current = tree.distance[nb.node];
      if (candidate > current) continue;
      std::vector<NodeIndex> route = tree.route[node];
      route.push_back(nb.node);
      if (candidate < current || route < tree.route[nb.node]) {
        tree.distance[nb.node] = candidate;
        tree.route[nb.node] = std::move(route);
        frontier.emplace(candidate, nb.node);
      }
    }
  }
  return tree;
}

}  // namespace

PathTable shortest_paths(const EdgeNetwork& network,
                         std::span<const NodeIndex> relevant) {
  if (!network.is_connected()) {
    throw Error(ErrorKind::kInstanceInvalid, "network graph is disconnected");
  }
  PathTable table;
  table.relevant_.assign(relevant.begin(), relevant.end());
  std::sort(table.relevant_.begin(), table.relevant_.end());
  table.relevant_.erase(
      std::unique(table.relevant_.begin(), table.relevant_.end()),
      table.relevant_.end());
  table.slot_.assign(network.num_nodes(), -1);
  for (std::size_t i = 0; i < table.relevant_.size(); ++i) {
    NodeIndex node = table.relevant_[i];
    if (node >= network.num_nodes()) {
      throw Error(ErrorKind::kIndex,
                  "relevant node " + std::to_string(node) + " not in network");
    }
    table.slot_[node] = static_cast<std::ptrdiff_t>(i);
  }

  const std::size_t m = table.relevant_.size();
  table.cost_.resize(m, m);
  table.bottleneck_.resize(m, m);
  table.paths_.resize(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    const NodeIndex source = table.relevant_[i];
    SourceTree tree = dijkstra(network, source);
    for (std::size_t j = 0; j < m; ++j) {
      const NodeIndex target = table.relevant_[j];
      auto& route = tree.route[target];
      double bottleneck = network.node_throughput(source);
      if (route.size() > 1) {
        bottleneck = kUnbounded;
        for (std::size_t h = 0; h + 1 < route.size(); ++h) {
          std::size_t id = *network.link_between(route[h], route[h + 1]);
          bottleneck = std::min(bottleneck, network.links()[id].capacity_mbps);
        }
      }
      table.cost_(i, j) = tree.distance[target];
      table.bottleneck_(i, j) = bottleneck;
      table.paths_[i * m + j] = std::move(route);
    }
  }
  // Both directions are minimal; pin them to one value so that P_ab == P_ba
  // holds bit-for-bit even with non-integral link costs.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) table.cost_(j, i) = table.cost_(i, j);
  }
  return table;
}

// ---------------------------------------------------------------------------
// ResidualState

ResidualState::ResidualState(const EdgeNetwork& network)
    : ResidualState(network, std::vector<std::optional<Resources>>{}) {}

ResidualState::ResidualState(
    const EdgeNetwork& network,
    const std::vector<std::optional<Resources>>& node_resources) {
  const auto& links = network.links();
  links_.resize(static_cast<Eigen::Index>(links.size()));
  for (std::size_t id = 0; id < links.size(); ++id) {
    links_(static_cast<Eigen::Index>(id)) = links[id].capacity_mbps;
  }
  initial_links_ = links_;
  throughput_ = Eigen::Map<const Eigen::VectorXd>(
      network.node_throughputs().data(),
      static_cast<Eigen::Index>(network.num_nodes()));
  initial_throughput_ = throughput_;
  nodes_.setConstant(2, static_cast<Eigen::Index>(network.num_nodes()),
                     kUnbounded);
  for (std::size_t k = 0; k < node_resources.size() && k < network.num_nodes();
       ++k) {
    if (node_resources[k]) nodes_.col(static_cast<Eigen::Index>(k)) = *node_resources[k];
  }
}

void ResidualState::set_link(std::size_t link_id, double remaining) {
  links_(link_id) = std::clamp(remaining, 0.0, initial_links_(link_id));
}

void ResidualState::set_throughput(NodeIndex node, double remaining) {
  throughput_(node) = std::clamp(remaining, 0.0, initial_throughput_(node));
}

bool ResidualState::fits(NodeIndex node, const Resources& demand) const {
  return (demand <= nodes_.col(node) + kCapacityTolerance).all();
}

void ResidualState::reserve(NodeIndex node, const Resources& demand) {
  if (!fits(node, demand)) {
    throw Error(ErrorKind::kCapacityExceeded,
                "node " + std::to_string(node) + " lacks resources");
  }
  nodes_.col(node) = (nodes_.col(node) - demand).max(0.0);
}

bool ResidualState::operator==(const ResidualState& other) const {
  return links_ == other.links_ && throughput_ == other.throughput_ &&
         (nodes_ == other.nodes_).all();
}

// ---------------------------------------------------------------------------
// Path capacity

namespace {

std::map<std::size_t, std::size_t> traversals(const EdgeNetwork& network,
                                              std::span<const NodeIndex> path) {
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t h = 0; h + 1 < path.size(); ++h) {
    auto id = network.link_between(path[h], path[h + 1]);
    if (!id) {
      throw Error(ErrorKind::kInvalidPath,
                  "no link between " + std::to_string(path[h]) + " and " +
                      std::to_string(path[h + 1]));
    }
    ++counts[*id];
  }
  return counts;
}

void require_nonempty(std::span<const NodeIndex> path) {
  if (path.empty()) throw Error(ErrorKind::kInvalidPath, "empty path");
}

}  // namespace

double path_bottleneck(const EdgeNetwork& network,
                       std::span<const NodeIndex> path,
                       const ResidualState& residual) {
  require_nonempty(path);
  if (path.size() == 1) return residual.throughput(path.front());
  double bottleneck = kUnbounded;
  for (const auto& [id, count] : traversals(network, path)) {
    bottleneck = std::min(bottleneck, residual.link(id));
  }
  return bottleneck;
}

ResidualState consume_flow(ResidualState residual, const EdgeNetwork& network,
                           std::span<const NodeIndex> path, double rate) {
  require_nonempty(path);
  if (path.size() == 1) {
    const NodeIndex node = path.front();
    if (rate > residual.throughput(node) + kCapacityTolerance) {
      throw Error(ErrorKind::kCapacityExceeded,
                  "node " + std::to_string(node) + " throughput exceeded");
    }
    residual.set_throughput(node, residual.throughput(node) - rate);
    return residual;
  }
  const auto counts = traversals(network, path);
  for (const auto& [id, count] : counts) {
    if (rate * static_cast<double>(count) >
        residual.link(id) + kCapacityTolerance) {
      throw Error(ErrorKind::kCapacityExceeded,
                  "link " + std::to_string(id) + " capacity exceeded");
    }
  }
  for (const auto& [id, count] : counts) {
    residual.set_link(id, residual.link(id) - rate * static_cast<double>(count));
  }
  return residual;
}

ResidualState restore_flow(ResidualState residual, const EdgeNetwork& network,
                           std::span<const NodeIndex> path, double rate) {
  require_nonempty(path);
  if (path.size() == 1) {
    residual.set_throughput(path.front(), residual.throughput(path.front()) + rate);
    return residual;
  }
  for (const auto& [id, count] : traversals(network, path)) {
    residual.set_link(id, residual.link(id) + rate * static_cast<double>(count));
  }
  return residual;
}

}  // namespace pcc
