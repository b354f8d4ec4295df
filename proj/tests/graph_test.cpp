#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "pcc/error.hpp"
#include "pcc/graph.hpp"
#include "pcc/rng.hpp"
#include "support/oracles.hpp"

namespace pcc {
namespace {

EdgeNetwork triangle() {
  // a-b 1, b-c 1, a-c 5
  return EdgeNetwork({"a", "b", "c"}, {{0, 1, 1, 10}, {1, 2, 1, 4}, {0, 2, 5, 100}}, {1, 2}, 0, 2);
}

std::vector<NodeIndex> all_nodes(const EdgeNetwork& net) {
  std::vector<NodeIndex> nodes(net.num_nodes());
  std::iota(nodes.begin(), nodes.end(), 0);
  return nodes;
}

// Connected random graph with small integer costs, so equal-cost ties occur.
EdgeNetwork random_network(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Link> links;
  for (NodeIndex v = 1; v < n; ++v) {
    links.push_back({static_cast<NodeIndex>(rng.uniform_int(0, static_cast<std::int64_t>(v) - 1)), v,
                     static_cast<double>(rng.uniform_int(1, 3)), static_cast<double>(rng.uniform_int(1, 20))});
  }
  for (int extra = 0; extra < 4; ++extra) {
    const auto a = static_cast<NodeIndex>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    const auto b = static_cast<NodeIndex>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    const bool parallel = std::any_of(links.begin(), links.end(), [&](const Link& l) {
      return (l.u == a && l.v == b) || (l.u == b && l.v == a);
    });
    if (a == b || parallel) continue;
    links.push_back({a, b, static_cast<double>(rng.uniform_int(1, 3)), static_cast<double>(rng.uniform_int(1, 20))});
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
  return EdgeNetwork(names, links, {1}, 0, 1);
}

TEST(ShortestPathsTest, TriangleTakesTheTwoHopRoute) {
  const auto net = triangle();
  const auto nodes = all_nodes(net);
  const auto paths = shortest_paths(net, nodes);
  EXPECT_EQ(paths.cost(0, 2), 2);
  EXPECT_EQ(paths.path(0, 2), (std::vector<NodeIndex>{0, 1, 2}));
  EXPECT_EQ(paths.bottleneck(0, 2), 4);
  EXPECT_EQ(paths.cost(1, 1), 0);
  EXPECT_EQ(paths.path(1, 1), (std::vector<NodeIndex>{1}));
}

TEST(ShortestPathsTest, MatchesSimplePathEnumeration) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto net = random_network(seed, 3 + seed % 6);
    const auto nodes = all_nodes(net);
    const auto paths = shortest_paths(net, nodes);
    for (NodeIndex a : nodes) {
      for (NodeIndex b : nodes) {
        const auto oracle = testing::oracle_shortest_path(net, a, b);
        ASSERT_EQ(paths.cost(a, b), oracle.cost) << "seed " << seed;
        ASSERT_EQ(paths.path(a, b), oracle.nodes) << "seed " << seed;
        ASSERT_EQ(paths.bottleneck(a, b), testing::oracle_bottleneck(net, a, b)) << "seed " << seed;
        ASSERT_EQ(paths.cost(a, b), paths.cost(b, a));
      }
    }
  }
}

TEST(ShortestPathsTest, DisconnectedGraphIsRejected) {
  const EdgeNetwork net({"a", "b", "c"}, {{0, 1, 1, 1}}, {1}, 0, 1);
  const auto nodes = all_nodes(net);
  try {
    shortest_paths(net, nodes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInstanceInvalid);
  }
}

TEST(ShortestPathsTest, UnknownNodeLookupThrows) {
  const auto net = triangle();
  const std::vector<NodeIndex> some{0, 1};
  const auto paths = shortest_paths(net, some);
  EXPECT_THROW(paths.cost(0, 2), Error);
}

TEST(ResidualStateTest, ConsumeThenRestoreIsIdentity) {
  const auto net = triangle();
  const ResidualState initial(net);
  const std::vector<NodeIndex> walk{0, 1, 2, 1};
  const auto used = consume_flow(initial, net, walk, 2.0);
  EXPECT_EQ(used.link(0), 8);
  EXPECT_EQ(used.link(1), 0);  // traversed twice
  EXPECT_EQ(restore_flow(used, net, walk, 2.0), initial);
}

TEST(ResidualStateTest, OverdrawIsRefusedWithoutSideEffects) {
  const auto net = triangle();
  const ResidualState initial(net);
  const std::vector<NodeIndex> walk{0, 1, 2};
  try {
    consume_flow(initial, net, walk, 5.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapacityExceeded);
  }
  const std::vector<NodeIndex> broken{0, 3};
  EXPECT_THROW(consume_flow(initial, net, broken, 1.0), Error);
}

TEST(ResidualStateTest, BottleneckOfWalks) {
  const auto net = triangle();
  ResidualState residual(net);
  const std::vector<NodeIndex> two_hop{0, 1, 2};
  EXPECT_EQ(path_bottleneck(net, two_hop, residual), 4);
  const std::vector<NodeIndex> single{1};
  EXPECT_EQ(path_bottleneck(net, single, residual), kUnbounded);
  EXPECT_THROW(path_bottleneck(net, std::vector<NodeIndex>{}, residual), Error);
}

TEST(ResidualStateTest, NodeResourcesReserve) {
  const auto net = triangle();
  std::vector<std::optional<Resources>> res{std::nullopt, make_resources(100, 1), std::nullopt};
  ResidualState residual(net, res);
  EXPECT_TRUE(residual.fits(1, make_resources(100, 1)));
  residual.reserve(1, make_resources(60, 0.5));
  EXPECT_FALSE(residual.fits(1, make_resources(60, 0.1)));
  EXPECT_THROW(residual.reserve(1, make_resources(60, 0.1)), Error);
  EXPECT_TRUE(residual.fits(0, make_resources(1e9, 1e9)));
}

}  // namespace
}  // namespace pcc
