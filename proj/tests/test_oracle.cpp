#include <gtest/gtest.h>

#include "test_support.hpp"
#include "ucap/ep_analysis.hpp"
#include "ucap/oracle.hpp"
#include "ucap/simulate.hpp"

using namespace ucap;
using ucap::testing::four_device_fleet;
using ucap::testing::four_device_reference;

TEST(MaxFlow, SmallNetwork) {
  // Two devices, two intervals; the links, not the ends, bind.
  FlowInstance f;
  f.device_energy_kwh = {5, 5};
  f.interval_energy_kwh = {4, 6};
  f.link_kwh = {{1, 1}, {3, 3}};
  EXPECT_NEAR(max_flow(f), 7, 1e-12);  // device 1 limited by its links
  f.link_kwh = {{4, 0}, {0, 6}};
  EXPECT_NEAR(max_flow(f), 9, 1e-12);
}

TEST(MaxFlow, EmptyInstance) {
  EXPECT_EQ(max_flow(FlowInstance{}), 0.0);
}

TEST(FlowInstance, FourDeviceCapacities) {
  const auto fleet = four_device_fleet();
  const auto f = build_flow_instance(fleet, initial_state(fleet), four_device_reference());
  EXPECT_EQ(f.device_energy_kwh, (std::vector<double>{8, 12, 6, 7}));
  EXPECT_EQ(f.interval_energy_kwh, (std::vector<double>{4, 18, 12, 1}));
  EXPECT_EQ(f.link_kwh[3], (std::vector<double>{7, 7, 7, 7}));
}

TEST(MinEnsOracle, Examples) {
  const auto fleet = four_device_fleet();
  EXPECT_NEAR(min_ens_oracle(fleet, initial_state(fleet), four_device_reference()), 5, 1e-9);
  EXPECT_NEAR(min_ens_oracle(fleet, initial_state(fleet), StepSignal({0, 1}, {2})), 0, 1e-12);
  EXPECT_NEAR(min_ens_oracle(Fleet{}, FleetState{}, StepSignal({0, 2}, {3})), 6, 1e-12);
  // Surplus steps do not count as requests.
  EXPECT_NEAR(min_ens_oracle(fleet, initial_state(fleet), StepSignal({0, 1, 2}, {-5, 2})), 0, 1e-12);
}

TEST(MinEnsOracle, LowerBoundsEveryPolicy) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto inst = random_instance(seed);
    const double oracle = min_ens_oracle(inst.fleet, inst.state, inst.reference);
    const double gap = max_energy_gap(ep_transform(inst.reference), capacity_curve(inst.fleet, inst.state));
    EXPECT_NEAR(oracle, gap, 1e-6) << "seed " << seed;
    for (auto policy : {Policy::Optimal, Policy::LowestPowerFirst, Policy::ProportionOfPower,
                        Policy::ProportionalDischarge, Policy::PeakShaving}) {
      const double ens = ens_of_run(run_dispatch(inst.fleet, inst.state, inst.reference, policy));
      EXPECT_LE(oracle, ens + 1e-6) << "seed " << seed << " " << to_string(policy);
      if (policy == Policy::Optimal) {
        EXPECT_NEAR(oracle, ens, 1e-6) << "seed " << seed;
      }
    }
  }
}

TEST(RandomInstance, RespectsBoundsAndSeeds) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = random_instance(seed);
    EXPECT_GE(inst.fleet.size(), 1u);
    EXPECT_LE(inst.fleet.size(), 4u);
    EXPECT_GE(inst.reference.size(), 1u);
    EXPECT_LE(inst.reference.size(), 6u);
    EXPECT_TRUE(validate_fleet(inst.fleet).empty());
    const auto again = random_instance(seed);
    EXPECT_EQ(again.reference.values(), inst.reference.values());
    EXPECT_EQ(again.state, inst.state);
  }
}

TEST(VerifyAgreement, AllPass) {
  const auto report = verify_agreement(1, 200);
  EXPECT_EQ(report.instances, 200u);
  EXPECT_EQ(report.passed, 200u);
  EXPECT_EQ(report.failed, 0u);
  EXPECT_TRUE(report.failures.empty());
}
