#include "ucap/dispatch.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "ucap/csv.hpp"
#include "ucap/ep_analysis.hpp"
#include "ucap/error.hpp"
#include "ucap/tolerance.hpp"

namespace ucap {

Policy parse_policy(std::string_view name) {
  if (name == "optimal") return Policy::Optimal;
  if (name == "lpf") return Policy::LowestPowerFirst;
  if (name == "pop") return Policy::ProportionOfPower;
  if (name == "pd") return Policy::ProportionalDischarge;
  if (name == "peak_shaving") return Policy::PeakShaving;
  throw Error(ErrorCode::UnknownPolicy, "unknown policy '" + std::string(name) +
                                            "' (expected optimal, lpf, pop, pd or peak_shaving)");
}

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::Optimal: return "optimal";
    case Policy::LowestPowerFirst: return "lpf";
    case Policy::ProportionOfPower: return "pop";
    case Policy::ProportionalDischarge: return "pd";
    case Policy::PeakShaving: return "peak_shaving";
  }
  return "unknown";
}

std::optional<ChargeAccounting> parse_charge_accounting(std::string_view name) {
  if (name == "stored") return ChargeAccounting::StoredSide;
  if (name == "grid") return ChargeAccounting::GridSide;
  return std::nullopt;
}

namespace {

void check_dims(const FleetState& state, const Fleet& fleet, double dt_h) {
  if (state.size() != fleet.size()) throw Error(ErrorCode::PreconditionViolation, "state size does not match fleet");
  if (!(dt_h > 0.0)) throw Error(ErrorCode::PreconditionViolation, "dt must be > 0");
}

void check_discharge_request(double request_kw) {
  if (!(request_kw >= 0.0))
    throw Error(ErrorCode::NegativeRequest, "discharge request " + csv::format_double(request_kw) + " kW < 0");
}

double positive_sum(const std::vector<double>& u) {
  double s = 0.0;
  for (double v : u) s += std::max(v, 0.0);
  return s;
}

// Energy the fleet would deliver within Δt when every device is drawn down
// to the threshold `level` (but by at most Δt of full-power time).
double energy_above(const FleetState& state, const Fleet& fleet, double level, double dt_h) {
  double e = 0.0;
  for (std::size_t i = 0; i < fleet.size(); ++i)
    e += fleet.devices[i].max_discharge_kw * std::max(std::min(state.x[i] - level, dt_h), 0.0);
  return e;
}

// Energy absorbed when every device is filled up to `level`, each capped at
// its reachable state z̄_i. `weight` converts time-to-go into energy.
double energy_below(const FleetState& state, const std::vector<double>& weight, const std::vector<double>& reachable,
                    double level) {
  double e = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i)
    e += weight[i] * std::max(std::min(level, reachable[i]) - state.x[i], 0.0);
  return e;
}

}  // namespace

std::vector<double> interval_caps(const Fleet& fleet, const FleetState& state, double dt_h) {
  std::vector<double> caps(fleet.size());
  for (std::size_t i = 0; i < fleet.size(); ++i)
    caps[i] = fleet.devices[i].max_discharge_kw * std::clamp(state.x[i] / dt_h, 0.0, 1.0);
  return caps;
}

double z_hat_discharge(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h) {
  check_discharge_request(request_kw);
  check_dims(state, fleet, dt_h);
  if (fleet.empty()) return 0.0;

  // Candidate breakpoints of the delivered-energy function, descending.
  std::vector<double> ys;
  ys.reserve(2 * fleet.size());
  for (double x : state.x) {
    ys.push_back(x);
    ys.push_back(std::max(x - dt_h, 0.0));
  }
  std::sort(ys.begin(), ys.end(), std::greater<>());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  const double target = request_kw * dt_h;
  double upper = 0.0;
  double lower = 0.0;
  std::size_t i = 0;
  do {
    lower = upper;
    upper = energy_above(state, fleet, ys[i], dt_h);
    ++i;
  } while (!(upper >= target) && i < ys.size());

  if (upper <= target) return ys[i - 1];
  return ys[i - 2] + (target - lower) / (upper - lower) * (ys[i - 1] - ys[i - 2]);
}

DispatchResult optimal_step(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h) {
  const double z_hat = z_hat_discharge(state, fleet, request_kw, dt_h);
  DispatchResult r;
  r.u_kw.resize(fleet.size());
  for (std::size_t i = 0; i < fleet.size(); ++i)
    r.u_kw[i] = fleet.devices[i].max_discharge_kw * std::max(std::min((state.x[i] - z_hat) / dt_h, 1.0), 0.0);
  r.served_kw = positive_sum(r.u_kw);
  r.z_hat_h = z_hat;
  return r;
}

std::vector<double> explicit_fractions(const FleetState& state, const Fleet& fleet, double request_kw) {
  check_discharge_request(request_kw);
  if (state.size() != fleet.size()) throw Error(ErrorCode::PreconditionViolation, "state size does not match fleet");

  std::vector<std::size_t> order(fleet.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return state.x[a] > state.x[b]; });

  std::vector<double> u(fleet.size(), 0.0);
  double committed = 0.0;  // Σ full power of the groups before the current one
  std::size_t g = 0;
  while (g < order.size()) {
    const double lead = state.x[order[g]];
    std::size_t end = g;
    double group_power = 0.0;
    double group_min = lead;
    while (end < order.size() && std::abs(state.x[order[end]] - lead) <= tolerance_for(lead)) {
      group_power += fleet.devices[order[end]].max_discharge_kw;
      group_min = std::min(group_min, state.x[order[end]]);
      ++end;
    }
    double r = 0.0;
    if (committed + group_power <= request_kw) {
      r = 1.0;
    } else if (committed < request_kw) {
      r = (request_kw - committed) / group_power;
    }
    if (!(group_min > 0.0)) r = 0.0;
    for (std::size_t j = g; j < end; ++j) u[order[j]] = r * fleet.devices[order[j]].max_discharge_kw;
    committed += group_power;
    g = end;
  }
  return u;
}

DispatchResult recharge_step(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h,
                             ChargeAccounting accounting) {
  if (request_kw > 0.0)
    throw Error(ErrorCode::PositiveRequest, "charge request " + csv::format_double(request_kw) + " kW > 0");
  check_dims(state, fleet, dt_h);
  DispatchResult r;
  r.u_kw.assign(fleet.size(), 0.0);
  if (fleet.empty()) return r;

  std::vector<double> reachable(fleet.size());
  std::vector<double> weight(fleet.size());
  std::vector<double> ys;
  ys.reserve(2 * fleet.size());
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    const Device& d = fleet.devices[i];
    reachable[i] = std::max(
        std::min(state.x[i] - d.efficiency * d.max_charge_kw * dt_h / d.max_discharge_kw, d.max_time_to_go()),
        state.x[i]);
    // Stored-side compares p̄Δx with the request; grid-side compares the draw p̄Δx/η.
    weight[i] = accounting == ChargeAccounting::GridSide ? d.max_discharge_kw / d.efficiency : d.max_discharge_kw;
    ys.push_back(state.x[i]);
    ys.push_back(reachable[i]);
  }
  bool saturated = true;
  for (std::size_t k = 0; k < fleet.size(); ++k) saturated = saturated && reachable[k] == state.x[k];
  if (saturated) return r;

  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  const double target = -request_kw * dt_h;

  double upper = 0.0;
  double lower = 0.0;
  std::size_t i = 0;
  do {
    lower = upper;
    upper = energy_below(state, weight, reachable, ys[i]);
    ++i;
  } while (!(upper >= target) && i < ys.size());

  double z_hat = 0.0;
  if (upper <= target) {
    z_hat = ys[i - 1];
  } else {
    z_hat = ys[i - 2] + (target - lower) / (upper - lower) * (ys[i - 1] - ys[i - 2]);
  }

  for (std::size_t k = 0; k < fleet.size(); ++k) {
    const Device& d = fleet.devices[k];
    const double dx = std::max(std::min(z_hat, reachable[k]) - state.x[k], 0.0);
    r.u_kw[k] = dx == 0.0 ? 0.0 : -d.max_discharge_kw / (d.efficiency * dt_h) * dx;
  }
  r.served_kw = 0.0;
  r.z_hat_h = z_hat;
  return r;
}

DispatchResult discharge_step(Policy policy, const FleetState& state, const Fleet& fleet, double request_kw,
                              double dt_h) {
  switch (policy) {
    case Policy::Optimal: return optimal_step(state, fleet, request_kw, dt_h);
    case Policy::LowestPowerFirst: return lowest_power_first_step(state, fleet, request_kw, dt_h);
    case Policy::ProportionOfPower: return proportion_of_power_step(state, fleet, request_kw, dt_h);
    case Policy::ProportionalDischarge: return proportional_discharge_step(state, fleet, request_kw, dt_h);
    case Policy::PeakShaving:
      throw Error(ErrorCode::StreamingNonCausal, "peak_shaving needs the full reference in advance");
  }
  throw Error(ErrorCode::UnknownPolicy, "unhandled policy");
}

PeakShavingPlan peak_shaving_schedule(const Fleet& fleet, const FleetState& state, const StepSignal& reference) {
  const EpCurve request = ep_transform(reference);
  const EpCurve capacity = capacity_curve(fleet, state);
  PeakShavingPlan plan;
  plan.expected_ens_kwh = max_energy_gap(request, capacity);
  plan.level_kw = shave_level(request, plan.expected_ens_kwh);
  plan.capped = cap_signal(reference, plan.level_kw);
  return plan;
}

}  // namespace ucap
