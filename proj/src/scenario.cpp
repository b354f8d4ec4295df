#include "pcc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pcc/error.hpp"
#include "pcc/rng.hpp"

namespace pcc {

namespace {

// Calls f(name, field) for every range field, in declaration order.
template <typename Params, typename F>
void for_each_range(Params& p, F&& f) {
  f("num_candidates", p.num_candidates);
  f("degree", p.degree);
  f("num_heads_per_request", p.num_heads_per_request);
  f("num_destinations", p.num_destinations);
  f("batch_size", p.batch_size);
  f("catalog_size", p.catalog_size);
  f("chain_length", p.chain_length);
  f("link_cost", p.link_cost);
  f("placement_cost", p.placement_cost);
  f("node_memory_gb", p.node_memory_gb);
  f("node_cpu", p.node_cpu);
  f("nf_memory_mb", p.nf_memory_mb);
  f("nf_cpu", p.nf_cpu);
  f("flow_rate_mbps", p.flow_rate_mbps);
  f("link_capacity_mbps", p.link_capacity_mbps);
  f("stay_probability", p.stay_probability);
}

[[noreturn]] void bad_field(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::kInvalidParams, field + ": " + message);
}

template <typename T>
T read_number(const Json& value, const std::string& field) {
  if (!value.is_number()) bad_field(field, "expected a number or [lo, hi]");
  if constexpr (std::is_integral_v<T>) {
    const double d = value.get<double>();
    if (d != std::floor(d) || std::abs(d) > 1e9) bad_field(field, "expected an integer");
    return static_cast<T>(d);
  } else {
    return value.get<T>();
  }
}

template <typename T>
Range<T> read_range(const Json& value, const std::string& field) {
  if (value.is_array()) {
    if (value.size() != 2) bad_field(field, "expected [lo, hi]");
    return {read_number<T>(value[0], field), read_number<T>(value[1], field)};
  }
  const T v = read_number<T>(value, field);
  return {v, v};
}

template <typename T>
Json range_to_json(const Range<T>& r) {
  if (r.fixed()) return r.lo;
  return Json::array({r.lo, r.hi});
}

double draw(Rng& rng, const Range<double>& r) { return rng.uniform_real(r.lo, r.hi); }

// Integral bounds give integral values.
double draw_cost(Rng& rng, const Range<double>& r) {
  if (r.lo == std::floor(r.lo) && r.hi == std::floor(r.hi)) {
    return static_cast<double>(rng.uniform_int(static_cast<std::int64_t>(r.lo),
                                               static_cast<std::int64_t>(r.hi)));
  }
  return draw(rng, r);
}

int draw(Rng& rng, const Range<int>& r, int cap) {
  return static_cast<int>(rng.uniform_int(std::min(r.lo, cap), std::min(r.hi, cap)));
}

}  // namespace

void validate_params(const ScenarioParams& p) {
  for_each_range(p, [](const std::string& name, const auto& r) {
    if (!std::isfinite(static_cast<double>(r.lo)) || !std::isfinite(static_cast<double>(r.hi))) {
      bad_field(name, "bounds must be finite");
    }
    if (r.lo > r.hi) bad_field(name, "lower bound exceeds upper bound");
  });
  auto at_least = [](const std::string& name, double lo, double min, bool strict) {
    if (strict ? !(lo > min) : !(lo >= min)) {
      bad_field(name, std::string("must be ") + (strict ? "> " : ">= ") + std::to_string(min));
    }
  };
  at_least("num_candidates", p.num_candidates.lo, 1, false);
  at_least("degree", p.degree.lo, 1, false);
  at_least("num_heads_per_request", p.num_heads_per_request.lo, 1, false);
  at_least("num_destinations", p.num_destinations.lo, 1, false);
  at_least("batch_size", p.batch_size.lo, 1, false);
  at_least("catalog_size", p.catalog_size.lo, 1, false);
  at_least("chain_length", p.chain_length.lo, 1, false);
  if (p.chain_length.hi > p.catalog_size.lo) {
    bad_field("chain_length", "upper bound exceeds the smallest catalog size");
  }
  at_least("link_cost", p.link_cost.lo, 0, true);
  at_least("placement_cost", p.placement_cost.lo, 0, false);
  at_least("node_memory_gb", p.node_memory_gb.lo, 0, true);
  at_least("node_cpu", p.node_cpu.lo, 0, true);
  at_least("nf_memory_mb", p.nf_memory_mb.lo, 0, true);
  at_least("nf_cpu", p.nf_cpu.lo, 0, true);
  at_least("flow_rate_mbps", p.flow_rate_mbps.lo, 0, true);
  at_least("link_capacity_mbps", p.link_capacity_mbps.lo, 0, true);
  at_least("stay_probability", p.stay_probability.lo, 0, false);
  if (p.stay_probability.hi > 1) bad_field("stay_probability", "must be <= 1");
  if (!(p.transit_fraction >= 0 && p.transit_fraction <= 1)) {
    bad_field("transit_fraction", "must lie in [0, 1]");
  }
}

ScenarioParams params_from_json(const Json& json, ScenarioParams base) {
  if (!json.is_object()) throw Error(ErrorKind::kInvalidParams, "params: expected an object");
  std::set<std::string> known{"transit_fraction"};
  for_each_range(base, [&](const std::string& name, auto& r) {
    known.insert(name);
    if (json.contains(name)) r = read_range<decltype(r.lo)>(json.at(name), name);
  });
  if (json.contains("transit_fraction")) {
    base.transit_fraction = read_number<double>(json.at("transit_fraction"), "transit_fraction");
  }
  for (const auto& [key, value] : json.items()) {
    if (!known.count(key)) bad_field(key, "unknown field");
  }
  validate_params(base);
  return base;
}

Json params_to_json(const ScenarioParams& params) {
  Json out = Json::object();
  for_each_range(params, [&](const std::string& name, const auto& r) { out[name] = range_to_json(r); });
  out["transit_fraction"] = params.transit_fraction;
  return out;
}

ProblemInstance generate_instance(const ScenarioParams& params, std::uint64_t seed) {
  validate_params(params);

  Rng sizes = Rng::stream(seed, "sizes");
  const int num_candidates = draw(sizes, params.num_candidates, params.num_candidates.hi);
  const int batch = draw(sizes, params.batch_size, params.batch_size.hi);
  const int catalog_size = draw(sizes, params.catalog_size, params.catalog_size.hi);

  const auto k_count = static_cast<std::size_t>(num_candidates);
  const std::size_t transit = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(params.transit_fraction * num_candidates)));
  const std::size_t n = transit + k_count;
  const auto cap = static_cast<std::size_t>(params.degree.hi);
  if (static_cast<std::size_t>(params.degree.lo) > n - 1) {
    throw Error(ErrorKind::kGeneration, "degree lower bound " + std::to_string(params.degree.lo) +
                                            " exceeds the " + std::to_string(n - 1) +
                                            " possible neighbors");
  }

  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  std::vector<NodeIndex> candidates(k_count);
  std::iota(candidates.begin(), candidates.end(), transit);

  // Random spanning tree with bounded degree, then extra edges until every
  // candidate reaches its target degree.
  Rng topo = Rng::stream(seed, "topology");
  std::vector<NodeIndex> all(n);
  std::iota(all.begin(), all.end(), 0);
  const auto order = topo.sample(all, n);
  std::vector<std::size_t> degree(n, 0);
  std::set<std::pair<NodeIndex, NodeIndex>> edges;
  std::vector<std::pair<NodeIndex, NodeIndex>> edge_list;
  auto connect = [&](NodeIndex a, NodeIndex b) {
    edges.insert({std::min(a, b), std::max(a, b)});
    edge_list.emplace_back(std::min(a, b), std::max(a, b));
    ++degree[a];
    ++degree[b];
  };
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<NodeIndex> open;
    for (std::size_t j = 0; j < i; ++j) {
      if (degree[order[j]] < cap) open.push_back(order[j]);
    }
    if (open.empty()) throw Error(ErrorKind::kGeneration, "degree cap too small to connect the graph");
    connect(order[i], open[static_cast<std::size_t>(topo.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1))]);
  }
  std::vector<std::size_t> target(n, 0);
  for (NodeIndex k : candidates) {
    target[k] = std::min<std::size_t>(static_cast<std::size_t>(draw(topo, params.degree, params.degree.hi)), n - 1);
  }
  for (NodeIndex k : candidates) {
    while (degree[k] < target[k]) {
      std::vector<NodeIndex> open;
      for (NodeIndex p = 0; p < n; ++p) {
        if (p != k && degree[p] < cap && !edges.count({std::min(p, k), std::max(p, k)})) open.push_back(p);
      }
      if (open.empty()) {
        // The drawn target is a goal; only the lower bound is a hard requirement.
        if (degree[k] >= static_cast<std::size_t>(params.degree.lo)) break;
        throw Error(ErrorKind::kGeneration,
                    "candidate " + names[k] + " cannot reach degree " + std::to_string(params.degree.lo));
      }
      connect(k, open[static_cast<std::size_t>(topo.uniform_int(0, static_cast<std::int64_t>(open.size()) - 1))]);
    }
  }

  Rng link_costs = Rng::stream(seed, "link_cost");
  Rng link_caps = Rng::stream(seed, "link_capacity");
  std::vector<Link> links;
  for (const auto& [u, v] : edge_list) {
    links.push_back({u, v, draw_cost(link_costs, params.link_cost), draw(link_caps, params.link_capacity_mbps)});
  }

  Rng attach = Rng::stream(seed, "attachment");
  const auto attachment = static_cast<NodeIndex>(attach.uniform_int(1, static_cast<std::int64_t>(n) - 1));

  ProblemInstance inst;
  inst.network = EdgeNetwork(names, std::move(links), candidates, 0, attachment);

  Rng catalog = Rng::stream(seed, "catalog");
  for (int i = 0; i < catalog_size; ++i) {
    const double mem = draw(catalog, params.nf_memory_mb);
    const double cpu = draw(catalog, params.nf_cpu);
    inst.catalog.push_back({"f" + std::to_string(i), make_resources(mem, cpu)});
  }

  Rng resources = Rng::stream(seed, "resources");
  inst.node_resources.assign(n, std::nullopt);
  for (NodeIndex k : candidates) {
    const double mem_gb = draw(resources, params.node_memory_gb);
    const double cpu = draw(resources, params.node_cpu);
    inst.node_resources[k] = make_resources(mem_gb * 1024.0, cpu);
  }

  if (params.placement_cost.hi > 0) {
    Rng placement = Rng::stream(seed, "placement_cost");
    inst.placement_cost = Eigen::MatrixXd::Zero(catalog_size, static_cast<Eigen::Index>(n));
    for (NodeIndex k : inst.hosting_nodes()) {
      for (int i = 0; i < catalog_size; ++i) {
        inst.placement_cost(i, static_cast<Eigen::Index>(k)) = draw_cost(placement, params.placement_cost);
      }
    }
  }

  Rng stay = Rng::stream(seed, "stay_probability");
  const double rho_o = draw(stay, params.stay_probability);

  Rng dests = Rng::stream(seed, "destinations");
  std::vector<NodeIndex> pool;
  for (NodeIndex v = 1; v < n; ++v) {
    if (v != attachment) pool.push_back(v);
  }
  const int dest_count = draw(dests, params.num_destinations, static_cast<int>(pool.size()));
  auto chosen = dests.sample(pool, static_cast<std::size_t>(dest_count));
  std::sort(chosen.begin(), chosen.end());

  Rng masses = Rng::stream(seed, "probabilities");
  std::vector<double> mass;
  for (std::size_t i = 0; i < chosen.size(); ++i) mass.push_back(masses.positive_unit());
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  inst.mobility.stay_probability = rho_o;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    inst.mobility.destinations.push_back({chosen[i], total > 0 ? (1.0 - rho_o) * mass[i] / total : 0.0});
  }

  Rng requests = Rng::stream(seed, "requests");
  std::vector<NfIndex> nf_pool(static_cast<std::size_t>(catalog_size));
  std::iota(nf_pool.begin(), nf_pool.end(), 0);
  for (int r = 0; r < batch; ++r) {
    ServiceRequest req;
    req.id = "r" + std::to_string(r);
    const int length = draw(requests, params.chain_length, catalog_size);
    req.chain = requests.sample(nf_pool, static_cast<std::size_t>(length));
    const int heads = draw(requests, params.num_heads_per_request, num_candidates);
    req.heads = requests.sample(candidates, static_cast<std::size_t>(heads));
    std::sort(req.heads.begin(), req.heads.end());
    req.flow_rate_mbps = draw(requests, params.flow_rate_mbps);
    inst.requests.push_back(std::move(req));
  }
  return inst;
}

}  // namespace pcc
