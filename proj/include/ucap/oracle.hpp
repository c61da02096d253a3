#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ucap/fleet.hpp"
#include "ucap/signals.hpp"

namespace ucap {

// Bipartite transportation network: source → device (stored energy),
// device → interval (p̄_i·Δt_k), interval → sink (requested energy).
struct FlowInstance {
  std::vector<double> device_energy_kwh;
  std::vector<double> interval_energy_kwh;
  std::vector<std::vector<double>> link_kwh;  // [device][interval]
};

FlowInstance build_flow_instance(const Fleet& fleet, const FleetState& state, const StepSignal& reference);

// Maximum deliverable energy through the network.
double max_flow(const FlowInstance& instance);

// Minimum achievable energy-not-served for a discharge-only reference
// (negative steps are ignored).
double min_ens_oracle(const Fleet& fleet, const FleetState& state, const StepSignal& reference);

struct RandomInstance {
  Fleet fleet;
  FleetState state;
  StepSignal reference;
};

// Integer ratings: 1–4 devices, 1–6 one-hour-or-longer steps.
RandomInstance random_instance(std::uint64_t seed, std::size_t max_devices = 4, std::size_t max_steps = 6);

struct VerifyReport {
  std::size_t instances = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::vector<std::string> failures;
};

// Three-way agreement (optimal dispatch ENS, max-flow oracle, max energy
// gap) on `count` seeded random instances, within `tolerance`.
VerifyReport verify_agreement(std::uint64_t seed, std::size_t count, double tolerance = 1e-6);

}  // namespace ucap
