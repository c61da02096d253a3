#pragma once

// Shared fixtures and independent reference computations for the tests.
// Nothing here calls into the dispatch or E-p code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ucap/fleet.hpp"
#include "ucap/signals.hpp"

namespace ucap::testing {

// Four-device example: (energy, power) = (8,2), (12,4), (6,3), (7,7).
inline Fleet four_device_fleet() {
  Fleet fleet;
  const double power[] = {2, 4, 3, 7};
  const double energy[] = {8, 12, 6, 7};
  for (int i = 0; i < 4; ++i)
    fleet.devices.push_back({"d" + std::to_string(i + 1), power[i], energy[i], energy[i], -power[i], 1.0});
  return fleet;
}

inline StepSignal four_device_reference() {
  const double samples[] = {4, 18, 12, 1};
  return step_signal_from_samples(samples, 1.0);
}

inline Fleet make_fleet(const std::vector<double>& power, const std::vector<double>& x) {
  Fleet fleet;
  for (std::size_t i = 0; i < power.size(); ++i)
    fleet.devices.push_back({"d" + std::to_string(i + 1), power[i], power[i] * x[i], power[i] * x[i], -power[i], 1.0});
  return fleet;
}

// ∫ max{s(t) − p, 0} dt evaluated step by step.
inline double brute_ep(const StepSignal& s, double p) {
  double e = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) e += std::max(s.value(k) - p, 0.0) * s.step_length(k);
  return e;
}

// Capacity Ω(p) integrated directly from R(t) = Σ p̄_i·1[t < x_i], device by
// device: device i contributes wherever the stack height above p is positive.
inline double brute_capacity(const std::vector<double>& power, const std::vector<double>& x, double p) {
  std::vector<double> times{0.0};
  for (double xi : x)
    if (xi > 0) times.push_back(xi);
  std::sort(times.begin(), times.end());
  double e = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double mid = 0.5 * (times[k] + times[k + 1]);
    double level = 0.0;
    for (std::size_t i = 0; i < power.size(); ++i)
      if (x[i] > mid) level += power[i];
    e += std::max(level - p, 0.0) * (times[k + 1] - times[k]);
  }
  return e;
}

// ẑ by bisection on inf{x̂ ≥ 0 : Σ p̄_i max{min{x_i − x̂, Δt}, 0} ≤ P·Δt}.
// Only meaningful when the request is strictly below the accessible energy.
inline double delivered_above(const std::vector<double>& power, const std::vector<double>& x, double level,
                              double dt) {
  double e = 0.0;
  for (std::size_t i = 0; i < power.size(); ++i) e += power[i] * std::max(std::min(x[i] - level, dt), 0.0);
  return e;
}

inline double bisect_z_hat(const std::vector<double>& power, const std::vector<double>& x, double request, double dt) {
  double lo = 0.0;
  double hi = *std::max_element(x.begin(), x.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (delivered_above(power, x, mid, dt) <= request * dt) hi = mid; else lo = mid;
  }
  return hi;
}

struct RandomCase {
  Fleet fleet;
  FleetState state;
};

// Real-valued ratings and partial states of charge.
inline RandomCase random_case(std::mt19937_64& rng, std::size_t max_devices = 6) {
  std::uniform_int_distribution<std::size_t> count(1, max_devices);
  std::uniform_real_distribution<double> power(0.5, 10.0);
  std::uniform_real_distribution<double> hours(0.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomCase c;
  const auto n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    Device d;
    d.id = "r" + std::to_string(i);
    d.max_discharge_kw = power(rng);
    d.capacity_kwh = d.max_discharge_kw * hours(rng);
    // Some devices empty, some full, most in between.
    const double u = unit(rng);
    const double fill = u < 0.1 ? 0.0 : (u > 0.9 ? 1.0 : unit(rng));
    d.energy_kwh = d.capacity_kwh * fill;
    d.max_charge_kw = -power(rng);
    d.efficiency = 1.0;
    c.fleet.devices.push_back(d);
  }
  // Occasionally duplicate a state to exercise ties.
  c.state = initial_state(c.fleet);
  if (n > 1 && unit(rng) < 0.3) {
    c.state.x[1] = std::min(c.state.x[0], c.fleet.devices[1].max_time_to_go());
  }
  return c;
}

inline StepSignal random_reference(std::mt19937_64& rng, std::size_t max_steps, double max_kw) {
  std::uniform_int_distribution<std::size_t> count(1, max_steps);
  std::uniform_real_distribution<double> value(0.0, max_kw);
  std::uniform_real_distribution<double> length(0.25, 2.0);
  const auto m = count(rng);
  std::vector<double> breaks{0.0};
  std::vector<double> values;
  for (std::size_t k = 0; k < m; ++k) {
    breaks.push_back(breaks.back() + length(rng));
    values.push_back(value(rng));
  }
  return StepSignal(std::move(breaks), std::move(values));
}

}  // namespace ucap::testing
