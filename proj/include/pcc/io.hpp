#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pcc/model.hpp"

namespace pcc {

using Json = nlohmann::ordered_json;

// Canonical instance JSON. Keys come out in a fixed order, keyed maps follow
// node/catalog order, and zero placement costs are omitted, so
// serialize(deserialize(text)) is the canonical form of text. Parsing rejects
// unknown keys and unresolvable names with a kParse error naming the JSON path.
Json instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const Json& json);
std::string serialize_instance(const ProblemInstance& instance);
ProblemInstance deserialize_instance(std::string_view text);

// Sparse placement JSON: {"x": [[request, nf, node], ...],
// "y": [[request, nf, node, head, destination], ...]} and, when present,
// "z": [[request, nf_i, nf_j, node_k, node_m, head, destination], ...].
Json placement_to_json(const ProblemInstance& instance, const Placement& placement);
Placement placement_from_json(const ProblemInstance& instance, const Json& json);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

ProblemInstance load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const ProblemInstance& instance);

}  // namespace pcc
