#include "pcc/io.hpp"

#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <unordered_map>

#include "pcc/error.hpp"

namespace pcc {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::kParse, path + ": " + what);
}

std::string child(const std::string& path, std::string_view key) {
  return path + "." + std::string(key);
}

std::string child(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

const Json& expect_object(const Json& j, const std::string& path,
                          std::initializer_list<std::string_view> required,
                          std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto key : required) {
    if (!j.contains(key)) fail(child(path, key), "missing required key");
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto key : required) known = known || item.key() == key;
    for (auto key : optional) known = known || item.key() == key;
    if (!known) fail(child(path, item.key()), "unknown key");
  }
  return j;
}

const Json& expect_map(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

const Json& expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

class Names {
 public:
  explicit Names(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) index_.emplace(names[i], i);
  }
  std::size_t resolve(const std::string& name, const std::string& path,
                      std::string_view what) const {
    auto it = index_.find(name);
    if (it == index_.end()) fail(path, "unknown " + std::string(what) + " '" + name + "'");
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

Json resources_to_json(const Resources& r) {
  Json j = Json::object();
  j["memory_mb"] = r(0);
  j["cpu_cores"] = r(1);
  return j;
}

Resources resources_from_json(const Json& j, const std::string& path) {
  expect_object(j, path, {"memory_mb", "cpu_cores"});
  return make_resources(number(j["memory_mb"], child(path, "memory_mb")),
                        number(j["cpu_cores"], child(path, "cpu_cores")));
}

std::vector<std::string> catalog_names(const ProblemInstance& inst) {
  std::vector<std::string> names;
  for (const auto& nf : inst.catalog) names.push_back(nf.name);
  return names;
}

std::vector<std::string> request_ids(const ProblemInstance& inst) {
  std::vector<std::string> ids;
  for (const auto& r : inst.requests) ids.push_back(r.id);
  return ids;
}

}  // namespace

Json instance_to_json(const ProblemInstance& inst) {
  const auto& net = inst.network;
  auto node = [&](NodeIndex k) { return net.name(k); };

  Json network = Json::object();
  network["nodes"] = net.names();
  Json links = Json::array();
  for (const auto& link : net.links()) {
    Json l = Json::object();
    l["u"] = node(link.u);
    l["v"] = node(link.v);
    l["cost"] = link.cost;
    l["capacity_mbps"] = link.capacity_mbps;
    links.push_back(std::move(l));
  }
  network["links"] = std::move(links);
  Json candidates = Json::array();
  for (NodeIndex k : net.candidates()) candidates.push_back(node(k));
  network["candidates"] = std::move(candidates);
  network["gateway"] = node(net.gateway());
  network["attachment"] = node(net.attachment());
  Json throughput = Json::object();
  for (NodeIndex k = 0; k < net.num_nodes(); ++k) {
    if (std::isfinite(net.node_throughput(k))) throughput[node(k)] = net.node_throughput(k);
  }
  if (!throughput.empty()) network["node_throughput_mbps"] = std::move(throughput);

  Json catalog = Json::object();
  for (const auto& nf : inst.catalog) catalog[nf.name] = resources_to_json(nf.demand);

  Json resources = Json::object();
  for (NodeIndex k = 0; k < inst.node_resources.size(); ++k) {
    if (inst.node_resources[k]) resources[node(k)] = resources_to_json(*inst.node_resources[k]);
  }

  Json requests = Json::array();
  for (const auto& r : inst.requests) {
    Json j = Json::object();
    j["id"] = r.id;
    Json chain = Json::array();
    for (NfIndex nf : r.chain) chain.push_back(inst.catalog[nf].name);
    j["chain"] = std::move(chain);
    j["flow_rate_mbps"] = r.flow_rate_mbps;
    Json heads = Json::array();
    for (NodeIndex s : r.heads) heads.push_back(node(s));
    j["heads"] = std::move(heads);
    if (!r.head_weights.empty()) j["head_weights"] = r.head_weights;
    requests.push_back(std::move(j));
  }

  Json placement_cost = Json::object();
  for (NfIndex i = 0; i < inst.catalog.size(); ++i) {
    Json row = Json::object();
    for (NodeIndex k = 0; k < net.num_nodes(); ++k) {
      const double c = inst.placement_cost_of(i, k);
      if (c != 0.0) row[node(k)] = c;
    }
    if (!row.empty()) placement_cost[inst.catalog[i].name] = std::move(row);
  }

  Json destinations = Json::object();
  for (const auto& d : inst.mobility.destinations) destinations[node(d.node)] = d.probability;
  Json mobility = Json::object();
  mobility["destinations"] = std::move(destinations);
  mobility["stay_probability"] = inst.mobility.stay_probability;

  Json out = Json::object();
  out["network"] = std::move(network);
  out["catalog"] = std::move(catalog);
  out["node_resources"] = std::move(resources);
  out["requests"] = std::move(requests);
  out["placement_cost"] = std::move(placement_cost);
  out["mobility"] = std::move(mobility);
  return out;
}

ProblemInstance instance_from_json(const Json& json) {
  const std::string root = "$";
  expect_object(json, root,
                {"network", "catalog", "node_resources", "requests", "placement_cost",
                 "mobility"});

  // network
  const std::string np = child(root, "network");
  const Json& nj = expect_object(json["network"], np,
                                 {"nodes", "links", "candidates", "gateway", "attachment"},
                                 {"node_throughput_mbps"});
  std::vector<std::string> names;
  {
    const std::string p = child(np, "nodes");
    const Json& arr = expect_array(nj["nodes"], p);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      names.push_back(text(arr[i], child(p, i)));
      if (!seen.insert(names.back()).second) fail(child(p, i), "duplicate node id");
    }
  }
  const Names nodes(names);
  std::vector<Link> links;
  {
    const std::string p = child(np, "links");
    const Json& arr = expect_array(nj["links"], p);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string lp = child(p, i);
      const Json& lj = expect_object(arr[i], lp, {"u", "v", "cost", "capacity_mbps"});
      Link link;
      link.u = nodes.resolve(text(lj["u"], child(lp, "u")), child(lp, "u"), "node");
      link.v = nodes.resolve(text(lj["v"], child(lp, "v")), child(lp, "v"), "node");
      link.cost = number(lj["cost"], child(lp, "cost"));
      link.capacity_mbps = number(lj["capacity_mbps"], child(lp, "capacity_mbps"));
      links.push_back(link);
    }
  }
  std::vector<NodeIndex> candidates;
  {
    const std::string p = child(np, "candidates");
    const Json& arr = expect_array(nj["candidates"], p);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      candidates.push_back(nodes.resolve(text(arr[i], child(p, i)), child(p, i), "node"));
    }
  }
  const NodeIndex gateway = nodes.resolve(text(nj["gateway"], child(np, "gateway")),
                                          child(np, "gateway"), "node");
  const NodeIndex attachment = nodes.resolve(
      text(nj["attachment"], child(np, "attachment")), child(np, "attachment"), "node");

  ProblemInstance inst;
  inst.network = EdgeNetwork(names, std::move(links), std::move(candidates), gateway,
                             attachment);
  if (nj.contains("node_throughput_mbps")) {
    const std::string p = child(np, "node_throughput_mbps");
    for (const auto& item : expect_map(nj["node_throughput_mbps"], p).items()) {
      const std::string ip = child(p, item.key());
      inst.network.set_node_throughput(nodes.resolve(item.key(), ip, "node"),
                                       number(item.value(), ip));
    }
  }

  // catalog
  {
    const std::string p = child(root, "catalog");
    for (const auto& item : expect_map(json["catalog"], p).items()) {
      const std::string ip = child(p, item.key());
      inst.catalog.push_back({item.key(), resources_from_json(item.value(), ip)});
    }
  }
  const Names functions(catalog_names(inst));

  // node_resources
  inst.node_resources.assign(names.size(), std::nullopt);
  {
    const std::string p = child(root, "node_resources");
    for (const auto& item : expect_map(json["node_resources"], p).items()) {
      const std::string ip = child(p, item.key());
      inst.node_resources[nodes.resolve(item.key(), ip, "node")] =
          resources_from_json(item.value(), ip);
    }
  }

  // requests
  {
    const std::string p = child(root, "requests");
    const Json& arr = expect_array(json["requests"], p);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string rp = child(p, i);
      const Json& rj = expect_object(arr[i], rp, {"id", "chain", "flow_rate_mbps", "heads"},
                                     {"head_weights"});
      ServiceRequest r;
      r.id = text(rj["id"], child(rp, "id"));
      const std::string cp = child(rp, "chain");
      const Json& chain = expect_array(rj["chain"], cp);
      for (std::size_t l = 0; l < chain.size(); ++l) {
        r.chain.push_back(functions.resolve(text(chain[l], child(cp, l)), child(cp, l), "NF"));
      }
      r.flow_rate_mbps = number(rj["flow_rate_mbps"], child(rp, "flow_rate_mbps"));
      const std::string hp = child(rp, "heads");
      const Json& heads = expect_array(rj["heads"], hp);
      for (std::size_t h = 0; h < heads.size(); ++h) {
        r.heads.push_back(nodes.resolve(text(heads[h], child(hp, h)), child(hp, h), "node"));
      }
      if (rj.contains("head_weights")) {
        const std::string wp = child(rp, "head_weights");
        const Json& weights = expect_array(rj["head_weights"], wp);
        for (std::size_t h = 0; h < weights.size(); ++h) {
          r.head_weights.push_back(number(weights[h], child(wp, h)));
        }
      }
      inst.requests.push_back(std::move(r));
    }
  }

  // placement_cost
  {
    const std::string p = child(root, "placement_cost");
    const Json& cj = expect_map(json["placement_cost"], p);
    if (!cj.empty()) {
      inst.placement_cost = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(inst.catalog.size()),
                                                  static_cast<Eigen::Index>(names.size()));
      for (const auto& row : cj.items()) {
        const std::string rp = child(p, row.key());
        const NfIndex i = functions.resolve(row.key(), rp, "NF");
        for (const auto& cell : expect_map(row.value(), rp).items()) {
          const std::string ip = child(rp, cell.key());
          inst.placement_cost(static_cast<Eigen::Index>(i),
                              static_cast<Eigen::Index>(nodes.resolve(cell.key(), ip, "node"))) =
              number(cell.value(), ip);
        }
      }
    }
  }

  // mobility
  {
    const std::string p = child(root, "mobility");
    const Json& mj = expect_object(json["mobility"], p, {"destinations", "stay_probability"});
    const std::string dp = child(p, "destinations");
    for (const auto& item : expect_map(mj["destinations"], dp).items()) {
      const std::string ip = child(dp, item.key());
      inst.mobility.destinations.push_back(
          {nodes.resolve(item.key(), ip, "node"), number(item.value(), ip)});
    }
    inst.mobility.stay_probability =
        number(mj["stay_probability"], child(p, "stay_probability"));
  }
  return inst;
}

std::string serialize_instance(const ProblemInstance& instance) {
  return instance_to_json(instance).dump(2) + "\n";
}

ProblemInstance deserialize_instance(std::string_view text) {
  Json json;
  try {
    json = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("$", std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(json);
}

Json placement_to_json(const ProblemInstance& inst, const Placement& placement) {
  auto node = [&](NodeIndex k) { return inst.network.name(k); };
  auto nf = [&](NfIndex i) { return inst.catalog.at(i).name; };
  auto req = [&](std::size_t r) { return inst.requests.at(r).id; };
  Json x = Json::array();
  for (const auto& h : placement.hosts) x.push_back({req(h.request), nf(h.nf), node(h.node)});
  Json y = Json::array();
  for (const auto& v : placement.visits) {
    y.push_back({req(v.request), nf(v.nf), node(v.node), node(v.head), node(v.destination)});
  }
  Json out = Json::object();
  out["x"] = std::move(x);
  out["y"] = std::move(y);
  if (placement.hops) {
    Json z = Json::array();
    for (const auto& h : *placement.hops) {
      z.push_back({req(h.request), nf(h.from_nf), nf(h.to_nf), node(h.from_node),
                   node(h.to_node), node(h.head), node(h.destination)});
    }
    out["z"] = std::move(z);
  }
  return out;
}

Placement placement_from_json(const ProblemInstance& inst, const Json& json) {
  const std::string root = "$";
  expect_object(json, root, {"x", "y"}, {"z"});
  const Names nodes(inst.network.names());
  const Names functions(catalog_names(inst));
  const Names requests(request_ids(inst));

  auto tuple = [&](const Json& j, const std::string& path, std::size_t arity) -> const Json& {
    if (!j.is_array() || j.size() != arity) {
      fail(path, "expected an array of " + std::to_string(arity) + " ids");
    }
    return j;
  };
  auto field = [&](const Json& t, const std::string& path, std::size_t i) {
    return text(t[i], child(path, i));
  };

  Placement placement;
  const Json& x = expect_array(json["x"], child(root, "x"));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::string p = child(child(root, "x"), i);
    const Json& t = tuple(x[i], p, 3);
    placement.hosts.insert({requests.resolve(field(t, p, 0), child(p, 0), "request"),
                            functions.resolve(field(t, p, 1), child(p, 1), "NF"),
                            nodes.resolve(field(t, p, 2), child(p, 2), "node")});
  }
  const Json& y = expect_array(json["y"], child(root, "y"));
  for (std::size_t i = 0; i < y.size(); ++i) {
    const std::string p = child(child(root, "y"), i);
    const Json& t = tuple(y[i], p, 5);
    placement.visits.insert({requests.resolve(field(t, p, 0), child(p, 0), "request"),
                             functions.resolve(field(t, p, 1), child(p, 1), "NF"),
                             nodes.resolve(field(t, p, 2), child(p, 2), "node"),
                             nodes.resolve(field(t, p, 3), child(p, 3), "node"),
                             nodes.resolve(field(t, p, 4), child(p, 4), "node")});
  }
  if (json.contains("z")) {
    placement.hops.emplace();
    const Json& z = expect_array(json["z"], child(root, "z"));
    for (std::size_t i = 0; i < z.size(); ++i) {
      const std::string p = child(child(root, "z"), i);
      const Json& t = tuple(z[i], p, 7);
      placement.hops->insert({requests.resolve(field(t, p, 0), child(p, 0), "request"),
                              functions.resolve(field(t, p, 1), child(p, 1), "NF"),
                              functions.resolve(field(t, p, 2), child(p, 2), "NF"),
                              nodes.resolve(field(t, p, 3), child(p, 3), "node"),
                              nodes.resolve(field(t, p, 4), child(p, 4), "node"),
                              nodes.resolve(field(t, p, 5), child(p, 5), "node"),
                              nodes.resolve(field(t, p, 6), child(p, 6), "node")});
    }
  }
  return placement;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  return deserialize_instance(read_text_file(path));
}

void save_instance(const std::filesystem::path& path, const ProblemInstance& instance) {
  write_text_file(path, serialize_instance(instance));
}

}  // namespace pcc
