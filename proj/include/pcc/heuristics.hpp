#pragma once

#include <optional>
#include <vector>

#include "pcc/evaluation.hpp"
#include "pcc/graph.hpp"
#include "pcc/model.hpp"

namespace pcc {

// Where SPBA anchors its shortest path toward the attachment node o.
enum class SpbaOrigin {
  kNearestHead,  // the request head closest to o (default)
  kGateway,      // the gateway g
};

struct HeuristicOptions {
  // Cost charged per unplaced chain position; default_unplaced_penalty when unset.
  std::optional<double> penalty_per_position;
  SpbaOrigin spba_origin = SpbaOrigin::kNearestHead;
};

struct HeuristicResult {
  Placement placement;
  CostReport cost;
  std::vector<UnplacedFunction> unplaced;
  // One walk per served request, the links its flow was charged to.
  std::vector<Route> routes;
};

// Greedy placement toward the most likely destination d*. Per request: start
// at the head closest to d*, walk the candidates on the s*->d* shortest path,
// and host chain functions in order wherever node resources and the residual
// path from the previous function fit. Remaining candidates, sorted by
// distance from s*, get one more pass. A request whose chain cannot be
// completed keeps its hosted prefix; a completed chain whose last hop to d*
// does not fit is dropped entirely.
HeuristicResult ppcc(const ProblemInstance& instance, const PathTable& paths,
                     const HeuristicOptions& options = {});

// Same mechanics aimed at o and blind to the mobility profile during
// placement. The cost is still evaluated under the true profile.
HeuristicResult spba(const ProblemInstance& instance, const PathTable& paths,
                     const HeuristicOptions& options = {});

// Everything at the gateway, which has unlimited capacity. Never unplaced.
HeuristicResult agw(const ProblemInstance& instance, const PathTable& paths);

// argmax of the stay/move probabilities over D + {o}, smallest node on ties.
NodeIndex most_likely_destination(const ProblemInstance& instance);

}  // namespace pcc
