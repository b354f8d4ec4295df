#pragma once

#include <cstdint>
#include <string>

#include "pcc/io.hpp"
#include "pcc/model.hpp"

namespace pcc {

// Closed interval a field is drawn from; lo == hi fixes the value.
template <typename T>
struct Range {
  T lo{};
  T hi{};

  bool fixed() const { return lo == hi; }
  bool operator==(const Range&) const = default;
};

// Generator knobs. Every field is drawn once per instance (counts) or once per
// element (sizes, rates, costs). Memory is given in GByte for nodes and MByte
// for functions; instances store MByte throughout.
struct ScenarioParams {
  Range<int> num_candidates{20, 50};
  Range<int> degree{2, 5};
  Range<int> num_heads_per_request{1, 5};
  Range<int> num_destinations{1, 5};
  Range<int> batch_size{50, 200};
  Range<int> catalog_size{10, 10};
  Range<int> chain_length{3, 5};
  Range<double> link_cost{1, 100};  // integral bounds give integral costs
  Range<double> placement_cost{0, 0};
  Range<double> node_memory_gb{8, 16};
  Range<double> node_cpu{32, 32};
  Range<double> nf_memory_mb{10, 50};
  Range<double> nf_cpu{0.125, 0.25};
  Range<double> flow_rate_mbps{0.064, 10};
  Range<double> link_capacity_mbps{2000, 2000};
  Range<double> stay_probability{0, 1};
  // Transit (non-candidate) nodes as a share of the candidates, at least one.
  double transit_fraction = 0.1;

  bool operator==(const ScenarioParams&) const = default;
};

// Throws kInvalidParams naming the offending field.
void validate_params(const ScenarioParams& params);

// Missing keys keep their defaults; a field is a number or [lo, hi].
ScenarioParams params_from_json(const Json& json, ScenarioParams base = {});
Json params_to_json(const ScenarioParams& params);

// Deterministic in (params, seed). Node 0 is the gateway; nodes below the
// transit count are transit nodes, the rest are candidates. Throws
// kGeneration when the degree targets cannot be met.
ProblemInstance generate_instance(const ScenarioParams& params, std::uint64_t seed);

}  // namespace pcc
