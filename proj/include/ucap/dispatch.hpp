#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ucap/fleet.hpp"
#include "ucap/signals.hpp"

namespace ucap {

struct DispatchResult {
  std::vector<double> u_kw;      // signed per-device power
  double served_kw = 0.0;        // Σ max{u_i, 0}
  std::optional<double> z_hat_h; // threshold, for the threshold-based policies
};

enum class Policy { Optimal, LowestPowerFirst, ProportionOfPower, ProportionalDischarge, PeakShaving };

// Accepts `optimal | lpf | pop | pd | peak_shaving`; throws UnknownPolicy.
Policy parse_policy(std::string_view name);
std::string_view to_string(Policy policy);

// How a negative request is compared against the stored-energy increment
// while charging. `StoredSide` compares Σ p̄Δx with −P^r·Δt directly;
// `GridSide` makes the grid draw (stored increment / η) match −P^r.
enum class ChargeAccounting { StoredSide, GridSide };

std::optional<ChargeAccounting> parse_charge_accounting(std::string_view name);

// Interval-limited maximum discharge, p̄_i·min{x_i/Δt, 1}.
std::vector<double> interval_caps(const Fleet& fleet, const FleetState& state, double dt_h);

// Smallest threshold ẑ ≥ 0 such that discharging every device down to
// max{x_i − Δt, ẑ} delivers no more than P^r·Δt. Infeasible or exactly
// binding requests return the smallest candidate (full-output dispatch).
double z_hat_discharge(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h);

// Constant input over one interval that reproduces the ENS-optimal final state.
DispatchResult optimal_step(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h);

// Instantaneous feedback law: devices grouped by equal time-to-go, groups
// filled in descending order, depleted groups held at zero.
std::vector<double> explicit_fractions(const FleetState& state, const Fleet& fleet, double request_kw);

// Charging counterpart of optimal_step: fills devices from the smallest
// time-to-go upward. `request_kw` must be ≤ 0.
DispatchResult recharge_step(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h,
                             ChargeAccounting accounting = ChargeAccounting::StoredSide);

// Comparison heuristics. Each caps device i at its interval-limited maximum.
DispatchResult lowest_power_first_step(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h);
DispatchResult proportion_of_power_step(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h);
DispatchResult proportional_discharge_step(const FleetState& state, const Fleet& fleet, double request_kw,
                                           double dt_h);

// Causal discharge policies only; PeakShaving throws StreamingNonCausal.
DispatchResult discharge_step(Policy policy, const FleetState& state, const Fleet& fleet, double request_kw,
                              double dt_h);

struct PeakShavingPlan {
  StepSignal capped;
  double level_kw = 0.0;
  double expected_ens_kwh = 0.0;
};

// Non-causal: needs the whole reference. Caps it at the level where its E-p
// curve equals the max energy gap.
PeakShavingPlan peak_shaving_schedule(const Fleet& fleet, const FleetState& state, const StepSignal& reference);

}  // namespace ucap
