#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "pcc/error.hpp"
#include "pcc/exact.hpp"

namespace pcc {

namespace {

std::string format_number(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string join(char tag, std::initializer_list<std::size_t> indices) {
  std::string out(1, tag);
  for (std::size_t i : indices) {
    out += '_';
    out += std::to_string(i);
  }
  return out;
}

// Linear expression that keeps first-occurrence order and merges repeats.
class Expression {
 public:
  void add(const std::string& var, double coefficient) {
    if (coefficient == 0.0) return;
    auto [it, inserted] = position_.try_emplace(var, terms_.size());
    if (inserted) {
      terms_.emplace_back(var, coefficient);
    } else {
      terms_[it->second].second += coefficient;
    }
  }
  bool empty() const { return terms_.empty(); }

  void write(std::ostream& out) const {
    std::size_t on_line = 0;
    for (const auto& [var, c] : terms_) {
      if (c == 0.0) continue;
      if (on_line == 8) {
        out << "\n   ";
        on_line = 0;
      }
      out << (c < 0 ? " - " : " + ") << format_number(std::abs(c)) << ' ' << var;
      ++on_line;
    }
  }

 private:
  std::vector<std::pair<std::string, double>> terms_;
  std::unordered_map<std::string, std::size_t> position_;
};

}  // namespace

std::string export_lp(const ProblemInstance& inst, const PathTable& paths) {
  const auto hosting = inst.hosting_nodes();
  const auto destinations = evaluation_destinations(inst);

  std::size_t variable_count = 0;
  for (const auto& r : inst.requests) {
    const std::size_t plans = r.heads.size() * destinations.size();
    variable_count += r.length() * hosting.size() * (1 + plans);
    if (r.length() > 1) variable_count += (r.length() - 1) * hosting.size() * hosting.size() * plans;
  }
  if (variable_count > kMaxLpVariables) {
    throw Error(ErrorKind::kSize, "LP export would need " + std::to_string(variable_count) +
                                      " variables (limit " + std::to_string(kMaxLpVariables) + ")");
  }

  auto x = [](std::size_t r, NfIndex i, NodeIndex k) { return join('x', {r, i, k}); };
  auto y = [](std::size_t r, NfIndex i, NodeIndex k, NodeIndex s, NodeIndex d) {
    return join('y', {r, i, k, s, d});
  };
  auto z = [](std::size_t r, NfIndex i, NfIndex j, NodeIndex k, NodeIndex m, NodeIndex s,
              NodeIndex d) { return join('z', {r, i, j, k, m, s, d}); };

  std::vector<std::string> binaries;
  Expression objective;
  std::ostringstream rows;
  auto row = [&](const std::string& name, const Expression& e, const char* sense, double rhs) {
    rows << ' ' << name << ':';
    e.write(rows);
    rows << ' ' << sense << ' ' << format_number(rhs) << '\n';
  };

  // Variables and the placement group of the objective.
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto& req = inst.requests[r];
    for (NfIndex i : req.chain) {
      for (NodeIndex k : hosting) {
        binaries.push_back(x(r, i, k));
        objective.add(x(r, i, k), inst.placement_cost_of(i, k));
      }
    }
  }
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto& req = inst.requests[r];
    for (std::size_t h = 0; h < req.heads.size(); ++h) {
      for (const auto& d : destinations) {
        for (NfIndex i : req.chain) {
          for (NodeIndex k : hosting) binaries.push_back(y(r, i, k, req.heads[h], d.node));
        }
      }
    }
  }
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto& req = inst.requests[r];
    for (NodeIndex s : req.heads) {
      for (const auto& d : destinations) {
        for (std::size_t l = 0; l + 1 < req.length(); ++l) {
          for (NodeIndex k : hosting) {
            for (NodeIndex m : hosting) {
              binaries.push_back(z(r, req.chain[l], req.chain[l + 1], k, m, s, d.node));
            }
          }
        }
      }
    }
  }

  // Routing groups: head, chain, tail.
  for (int group = 0; group < 3; ++group) {
    for (std::size_t r = 0; r < inst.requests.size(); ++r) {
      const auto& req = inst.requests[r];
      for (std::size_t h = 0; h < req.heads.size(); ++h) {
        const NodeIndex s = req.heads[h];
        for (const auto& d : destinations) {
          const double weight = req.head_weight(h) * d.weight;
          if (group == 0) {
            for (NodeIndex k : hosting) {
              objective.add(y(r, req.chain.front(), k, s, d.node), weight * paths.cost(s, k));
            }
          } else if (group == 1) {
            for (std::size_t l = 0; l + 1 < req.length(); ++l) {
              for (NodeIndex k : hosting) {
                for (NodeIndex m : hosting) {
                  objective.add(z(r, req.chain[l], req.chain[l + 1], k, m, s, d.node),
                                weight * paths.cost(k, m));
                }
              }
            }
          } else {
            for (NodeIndex k : hosting) {
              objective.add(y(r, req.chain.back(), k, s, d.node), weight * paths.cost(k, d.node));
            }
          }
        }
      }
    }
  }

  // 5a
  for (NodeIndex k : hosting) {
    if (k >= inst.node_resources.size() || !inst.node_resources[k]) continue;
    for (int dim = 0; dim < 2; ++dim) {
      Expression e;
      for (std::size_t r = 0; r < inst.requests.size(); ++r) {
        for (NfIndex i : inst.requests[r].chain) e.add(x(r, i, k), inst.catalog[i].demand(dim));
      }
      if (!e.empty()) {
        row("c5a_" + std::to_string(k) + (dim == 0 ? "_mem" : "_cpu"), e, "<=",
            (*inst.node_resources[k])(dim));
      }
    }
  }

  // 5b-5d, one row per node pair with a finite budget.
  auto finite = [&](NodeIndex a, NodeIndex b) { return std::isfinite(paths.bottleneck(a, b)); };
  std::vector<NodeIndex> heads;
  for (const auto& req : inst.requests) heads.insert(heads.end(), req.heads.begin(), req.heads.end());
  std::sort(heads.begin(), heads.end());
  heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
  for (NodeIndex s : heads) {
    for (NodeIndex k : hosting) {
      if (!finite(s, k)) continue;
      Expression e;
      for (std::size_t r = 0; r < inst.requests.size(); ++r) {
        const auto& req = inst.requests[r];
        if (std::find(req.heads.begin(), req.heads.end(), s) == req.heads.end()) continue;
        for (const auto& d : destinations) e.add(y(r, req.chain.front(), k, s, d.node), req.flow_rate_mbps);
      }
      if (!e.empty()) row("c5b_" + std::to_string(s) + "_" + std::to_string(k), e, "<=", paths.bottleneck(s, k));
    }
  }
  for (NodeIndex k : hosting) {
    for (NodeIndex m : hosting) {
      if (!finite(k, m)) continue;
      Expression e;
      for (std::size_t r = 0; r < inst.requests.size(); ++r) {
        const auto& req = inst.requests[r];
        for (NodeIndex s : req.heads) {
          for (const auto& d : destinations) {
            for (std::size_t l = 0; l + 1 < req.length(); ++l) {
              e.add(z(r, req.chain[l], req.chain[l + 1], k, m, s, d.node), req.flow_rate_mbps);
            }
          }
        }
      }
      if (!e.empty()) row("c5c_" + std::to_string(k) + "_" + std::to_string(m), e, "<=", paths.bottleneck(k, m));
    }
  }
  for (NodeIndex k : hosting) {
    for (const auto& d : destinations) {
      if (!finite(k, d.node)) continue;
      Expression e;
      for (std::size_t r = 0; r < inst.requests.size(); ++r) {
        const auto& req = inst.requests[r];
        for (NodeIndex s : req.heads) e.add(y(r, req.chain.back(), k, s, d.node), req.flow_rate_mbps);
      }
      if (!e.empty()) {
        row("c5d_" + std::to_string(k) + "_" + std::to_string(d.node), e, "<=",
            paths.bottleneck(k, d.node));
      }
    }
  }

  // 5e-5i
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto& req = inst.requests[r];
    for (NodeIndex s : req.heads) {
      for (const auto& d : destinations) {
        for (std::size_t l = 0; l < req.length(); ++l) {
          Expression e;
          for (NodeIndex k : hosting) e.add(y(r, req.chain[l], k, s, d.node), 1.0);
          row("c5e_" + std::to_string(r) + "_" + std::to_string(s) + "_" + std::to_string(d.node) +
                  "_" + std::to_string(l + 1),
              e, "=", 1.0);
        }
      }
    }
  }
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto& req = inst.requests[r];
    for (NodeIndex s : req.heads) {
      for (const auto& d : destinations) {
        for (NfIndex i : req.chain) {
          for (NodeIndex k : hosting) {
            Expression e;
            e.add(y(r, i, k, s, d.node), 1.0);
            e.add(x(r, i, k), -1.0);
            row("c5f" + y(r, i, k, s, d.node).substr(1), e, "<=", 0.0);
          }
        }
      }
    }
  }
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto& req = inst.requests[r];
    for (NodeIndex s : req.heads) {
      for (const auto& d : destinations) {
        for (std::size_t l = 0; l + 1 < req.length(); ++l) {
          const NfIndex i = req.chain[l];
          const NfIndex j = req.chain[l + 1];
          for (NodeIndex k : hosting) {
            for (NodeIndex m : hosting) {
              const std::string zv = z(r, i, j, k, m, s, d.node);
              const std::string suffix = zv.substr(1);
              Expression g, hh, ii;
              g.add(zv, 1.0);
              g.add(y(r, i, k, s, d.node), -1.0);
              row("c5g" + suffix, g, "<=", 0.0);
              hh.add(zv, 1.0);
              hh.add(y(r, j, m, s, d.node), -1.0);
              row("c5h" + suffix, hh, "<=", 0.0);
              ii.add(zv, 1.0);
              ii.add(y(r, i, k, s, d.node), -1.0);
              ii.add(y(r, j, m, s, d.node), -1.0);
              row("c5i" + suffix, ii, ">=", -1.0);
            }
          }
        }
      }
    }
  }

  std::ostringstream out;
  out << "Minimize\n obj:";
  objective.write(out);
  out << "\nSubject To\n" << rows.str() << "Binaries\n";
  for (const auto& var : binaries) out << ' ' << var << '\n';
  out << "End\n";
  return out.str();
}

}  // namespace pcc
