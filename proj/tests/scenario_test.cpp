#include <gtest/gtest.h>

#include <string>

#include "pcc/error.hpp"
#include "pcc/io.hpp"
#include "pcc/scenario.hpp"

namespace pcc {
namespace {

TEST(GenerateInstanceTest, DegreesStayInRangeAndTheGraphIsConnected) {
  const ScenarioParams params;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = generate_instance(params, seed);
    ASSERT_TRUE(inst.network.is_connected()) << "seed " << seed;
    for (NodeIndex k : inst.network.candidates()) {
      const auto degree = inst.network.neighbors(k).size();
      EXPECT_GE(degree, 2u) << "seed " << seed;
      EXPECT_LE(degree, 5u) << "seed " << seed;
    }
    const auto k = inst.network.candidates().size();
    EXPECT_GE(k, 20u);
    EXPECT_LE(k, 50u);
  }
}

TEST(GenerateInstanceTest, MobilityMassIsOne) {
  const ScenarioParams params;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = generate_instance(params, seed);
    double mass = inst.mobility.stay_probability;
    for (const auto& d : inst.mobility.destinations) {
      mass += d.probability;
      EXPECT_NE(d.node, inst.network.attachment());
      EXPECT_NE(d.node, inst.network.gateway());
    }
    EXPECT_NEAR(mass, 1.0, 1e-9);
  }
}

TEST(GenerateInstanceTest, InstancesAreValid) {
  ScenarioParams params;
  params.placement_cost = {0, 10};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto violations = validate_instance(generate_instance(params, seed));
    EXPECT_TRUE(violations.empty()) << "seed " << seed << ": " << to_string(violations.front().code);
  }
}

TEST(GenerateInstanceTest, SameSeedSameInstance) {
  const ScenarioParams params;
  EXPECT_EQ(serialize_instance(generate_instance(params, 42)),
            serialize_instance(generate_instance(params, 42)));
  EXPECT_NE(serialize_instance(generate_instance(params, 42)),
            serialize_instance(generate_instance(params, 43)));
}

TEST(GenerateInstanceTest, CertainStayLeavesNoMovingMass) {
  ScenarioParams params;
  params.stay_probability = {1, 1};
  const auto inst = generate_instance(params, 5);
  EXPECT_EQ(inst.mobility.stay_probability, 1);
  for (const auto& d : inst.mobility.destinations) EXPECT_EQ(d.probability, 0);
}

TEST(GenerateInstanceTest, FixedSizesAreHonored) {
  ScenarioParams params;
  params.num_candidates = {20, 20};
  params.batch_size = {200, 200};
  params.chain_length = {5, 5};
  const auto inst = generate_instance(params, 8);
  EXPECT_EQ(inst.network.candidates().size(), 20u);
  EXPECT_EQ(inst.requests.size(), 200u);
  for (const auto& r : inst.requests) EXPECT_EQ(r.length(), 5u);
}

TEST(GenerateInstanceTest, ImpossibleDegreeIsAGenerationError) {
  ScenarioParams params;
  params.num_candidates = {2, 2};
  params.degree = {4, 5};
  try {
    generate_instance(params, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeneration);
  }
}

TEST(ParamsTest, BadFieldIsNamed) {
  const auto expect_field = [](const Json& json, const std::string& field) {
    try {
      params_from_json(json);
      FAIL() << json.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidParams);
      EXPECT_EQ(std::string(e.what()).rfind(field + ":", 0), 0u) << e.what();
    }
  };
  expect_field(Json{{"stay_probability", 1.5}}, "stay_probability");
  expect_field(Json{{"num_candidates", Json::array({30, 20})}}, "num_candidates");
  expect_field(Json{{"link_cost", 0}}, "link_cost");
  expect_field(Json{{"batch_size", 2.5}}, "batch_size");
  expect_field(Json{{"colour", 1}}, "colour");
}

TEST(ParamsTest, JsonRoundTrip) {
  ScenarioParams params;
  params.num_candidates = {20, 20};
  params.stay_probability = {0.25, 0.75};
  const auto back = params_from_json(params_to_json(params));
  EXPECT_EQ(params_to_json(back), params_to_json(params));
  EXPECT_EQ(back.num_candidates.lo, 20);
  EXPECT_EQ(back.stay_probability.hi, 0.75);
}

}  // namespace
}  // namespace pcc
