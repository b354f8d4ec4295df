#include <gtest/gtest.h>

#include <algorithm>

#include "pcc/error.hpp"
#include "pcc/io.hpp"
#include "pcc/model.hpp"
#include "pcc/scenario.hpp"
#include "support/oracles.hpp"

namespace pcc {
namespace {

bool has_code(const std::vector<InstanceViolation>& violations, ViolationCode code) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const InstanceViolation& v) { return v.code == code; });
}

TEST(VEntryTest, MarksTheFunctionAtEachPosition) {
  ServiceRequest r;
  r.chain = {3, 1};
  EXPECT_EQ(v_entry(r, 3, 1), 1);
  EXPECT_EQ(v_entry(r, 3, 2), 0);
  EXPECT_EQ(v_entry(r, 1, 2), 1);
  for (std::size_t l = 1; l <= 2; ++l) {
    int column = 0;
    for (NfIndex i = 0; i < 5; ++i) column += v_entry(r, i, l);
    EXPECT_EQ(column, 1);
  }
  try {
    v_entry(r, 3, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIndex);
  }
  EXPECT_THROW(v_entry(r, 3, 3), Error);
}

TEST(ValidateInstanceTest, GeneratedInstanceIsValid) {
  const auto inst = generate_instance(ScenarioParams{}, 7);
  const auto violations = validate_instance(inst);
  EXPECT_TRUE(violations.empty()) << to_string(violations.front().code);
}

TEST(ValidateInstanceTest, ExcessMobilityMass) {
  auto inst = testing::tiny1();
  inst.mobility.destinations[0].probability = 1.2;
  EXPECT_TRUE(has_code(validate_instance(inst), ViolationCode::kMobilityMassExceeded));
  inst.mobility.destinations[0].probability = 0.5;
  EXPECT_TRUE(has_code(validate_instance(inst), ViolationCode::kMobilityMassDeficit));
}

TEST(ValidateInstanceTest, UnknownFunction) {
  auto inst = testing::tiny1();
  inst.requests[0].chain = {4};
  EXPECT_TRUE(has_code(validate_instance(inst), ViolationCode::kUnknownNF));
}

TEST(ValidateInstanceTest, NodeResourcesOnlyOnCandidates) {
  auto inst = testing::tiny1();
  inst.node_resources[3] = make_resources(10, 1);
  EXPECT_TRUE(has_code(validate_instance(inst), ViolationCode::kUnexpectedNodeResources));
  inst = testing::tiny1();
  inst.node_resources[1].reset();
  EXPECT_TRUE(has_code(validate_instance(inst), ViolationCode::kMissingNodeResources));
}

TEST(ValidateInstanceTest, RepeatedFunctionAndDuplicateHead) {
  auto inst = testing::tiny1();
  inst.requests[0].chain = {0, 0};
  inst.requests[0].heads = {0, 0};
  const auto violations = validate_instance(inst);
  EXPECT_TRUE(has_code(violations, ViolationCode::kRepeatedNF));
  EXPECT_TRUE(has_code(violations, ViolationCode::kDuplicateHead));
}

TEST(EvaluationDestinationsTest, MergesStayWeightIntoTheAttachmentNode) {
  auto inst = testing::tiny1();
  inst.mobility = {{{3, 0.25}, {0, 0.25}}, 0.5};
  const auto dests = evaluation_destinations(inst);
  ASSERT_EQ(dests.size(), 2u);
  EXPECT_EQ(dests[0].node, 0u);
  EXPECT_DOUBLE_EQ(dests[0].weight, 0.75);
  EXPECT_EQ(dests[1].node, 3u);
  EXPECT_DOUBLE_EQ(dests[1].weight, 0.25);

  const auto oracle = testing::oracle_destinations(inst);
  ASSERT_EQ(oracle.size(), dests.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    EXPECT_EQ(oracle[i].first, dests[i].node);
    EXPECT_DOUBLE_EQ(oracle[i].second, dests[i].weight);
  }
}

TEST(EvaluationDestinationsTest, ZeroWeightsAreDropped) {
  const auto dests = evaluation_destinations(testing::tiny1());
  ASSERT_EQ(dests.size(), 1u);
  EXPECT_EQ(dests[0].node, 3u);
}

TEST(HostingNodesTest, CandidatesThenGateway) {
  const auto inst = testing::tiny1();
  EXPECT_EQ(inst.hosting_nodes(), (std::vector<NodeIndex>{1, 2, 0}));
  EXPECT_EQ(inst.hosting_nodes(), testing::oracle_domain(inst));
}

TEST(SerializationTest, RoundTripOfAGeneratedInstance) {
  ScenarioParams params;
  params.num_candidates = {20, 20};
  params.placement_cost = {0, 5};
  const auto inst = generate_instance(params, 11);
  const auto text = serialize_instance(inst);
  const auto back = deserialize_instance(text);
  EXPECT_EQ(back, inst);
  EXPECT_EQ(serialize_instance(back), text);
}

TEST(SerializationTest, MissingSectionNamesThePath) {
  auto json = instance_to_json(testing::tiny1());
  json.erase("mobility");
  try {
    instance_from_json(json);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("$.mobility"), std::string::npos) << e.what();
  }
}

TEST(SerializationTest, UnknownNamesAreRejected) {
  auto json = instance_to_json(testing::tiny1());
  json["requests"][0]["chain"][0] = "f9";
  EXPECT_THROW(instance_from_json(json), Error);
  json = instance_to_json(testing::tiny1());
  json["surplus"] = 1;
  EXPECT_THROW(instance_from_json(json), Error);
  EXPECT_THROW(deserialize_instance("{\"network\": "), Error);
}

TEST(SerializationTest, FixtureFileMatchesTheBuiltInstance) {
  EXPECT_EQ(load_instance(testing::data_path("tiny1.json")), testing::tiny1());
}

TEST(SerializationTest, PlacementRoundTrip) {
  const auto inst = testing::tiny1();
  Placement p;
  p.hosts = {{0, 0, 1}};
  p.visits = {{0, 0, 1, 0, 3}};
  EXPECT_EQ(placement_from_json(inst, placement_to_json(inst, p)), p);
}

}  // namespace
}  // namespace pcc
