// Comparison dispatch rules. Each device is bounded by its interval-limited
// maximum p̄_i·min{x_i/Δt, 1} and a constant input is held over the step.

#include <algorithm>
#include <numeric>

#include "ucap/csv.hpp"
#include "ucap/dispatch.hpp"
#include "ucap/error.hpp"

namespace ucap {

namespace {

void check_inputs(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h) {
  if (!(request_kw >= 0.0))
    throw Error(ErrorCode::NegativeRequest, "discharge request " + csv::format_double(request_kw) + " kW < 0");
  if (state.size() != fleet.size()) throw Error(ErrorCode::PreconditionViolation, "state size does not match fleet");
  if (!(dt_h > 0.0)) throw Error(ErrorCode::PreconditionViolation, "dt must be > 0");
}

DispatchResult finish(std::vector<double> u) {
  DispatchResult r;
  r.served_kw = std::accumulate(u.begin(), u.end(), 0.0);
  r.u_kw = std::move(u);
  return r;
}

// Shares the request in proportion to `weight` among devices below their cap,
// pinning devices whose share would exceed the cap and redistributing the
// remainder until no share overflows.
std::vector<double> proportional_fill(const std::vector<double>& caps, const std::vector<double>& weight,
                                      double request_kw) {
  const double total_cap = std::accumulate(caps.begin(), caps.end(), 0.0);
  if (request_kw >= total_cap) return caps;

  std::vector<double> u(caps.size(), 0.0);
  std::vector<bool> active(caps.size());
  for (std::size_t i = 0; i < caps.size(); ++i) active[i] = caps[i] > 0.0 && weight[i] > 0.0;

  double remaining = request_kw;
  while (remaining > 0.0) {
    double active_weight = 0.0;
    for (std::size_t i = 0; i < caps.size(); ++i)
      if (active[i]) active_weight += weight[i];
    if (active_weight <= 0.0) break;

    bool pinned = false;
    for (std::size_t i = 0; i < caps.size(); ++i) {
      if (active[i] && remaining * weight[i] / active_weight >= caps[i]) {
        u[i] = caps[i];
        active[i] = false;
        pinned = true;
      }
    }
    if (pinned) {
      remaining = request_kw;
      for (std::size_t i = 0; i < caps.size(); ++i)
        if (!active[i]) remaining -= u[i];
      continue;
    }
    for (std::size_t i = 0; i < caps.size(); ++i)
      if (active[i]) u[i] = remaining * weight[i] / active_weight;
    break;
  }
  return u;
}

}  // namespace

DispatchResult lowest_power_first_step(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h) {
  check_inputs(state, fleet, request_kw, dt_h);
  const auto caps = interval_caps(fleet, state, dt_h);
  std::vector<std::size_t> order(fleet.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fleet.devices[a].max_discharge_kw < fleet.devices[b].max_discharge_kw;
  });
  std::vector<double> u(fleet.size(), 0.0);
  double remaining = request_kw;
  for (std::size_t i : order) {
    if (remaining <= 0.0) break;
    u[i] = std::min(caps[i], remaining);
    remaining -= u[i];
  }
  return finish(std::move(u));
}

DispatchResult proportion_of_power_step(const FleetState& state, const Fleet& fleet, double request_kw, double dt_h) {
  check_inputs(state, fleet, request_kw, dt_h);
  std::vector<double> weight(fleet.size());
  for (std::size_t i = 0; i < fleet.size(); ++i) weight[i] = fleet.devices[i].max_discharge_kw;
  return finish(proportional_fill(interval_caps(fleet, state, dt_h), weight, request_kw));
}

DispatchResult proportional_discharge_step(const FleetState& state, const Fleet& fleet, double request_kw,
                                           double dt_h) {
  check_inputs(state, fleet, request_kw, dt_h);
  return finish(proportional_fill(interval_caps(fleet, state, dt_h), stored_energy(fleet, state), request_kw));
}

}  // namespace ucap
