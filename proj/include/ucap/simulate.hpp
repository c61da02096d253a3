#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "ucap/dispatch.hpp"
#include "ucap/fleet.hpp"
#include "ucap/signals.hpp"

namespace ucap {

struct StepRecord {
  double t_h = 0.0;
  double dt_h = 0.0;
  double request_kw = 0.0;  // > 0 shortfall, < 0 surplus, 0 idle
  double served_kw = 0.0;
  double ens_kwh = 0.0;
  std::optional<double> z_hat_h;
  std::vector<double> u_kw;
  FleetState state_after;
};

struct RunTrace {
  FleetState initial;
  std::vector<StepRecord> steps;
  double ens_kwh = 0.0;
  double energy_served_kwh = 0.0;

  const FleetState& state_before(std::size_t k) const { return k == 0 ? initial : steps[k - 1].state_after; }
  const FleetState& final_state() const { return steps.empty() ? initial : steps.back().state_after; }
};

struct RunOptions {
  bool recharge = false;
  ChargeAccounting accounting = ChargeAccounting::StoredSide;
};

// Steps a fleet through a signed request stream one interval at a time.
// Only causal policies are accepted.
class StreamingDispatcher {
 public:
  StreamingDispatcher(const Fleet& fleet, FleetState initial, Policy policy, RunOptions options = {});

  StepRecord step(double t_h, double request_kw, double dt_h);

  const FleetState& state() const { return state_; }

 private:
  Fleet fleet_;
  FleetState state_;
  Policy policy_;
  RunOptions options_;
};

RunTrace run_dispatch(const Fleet& fleet, const FleetState& initial, const StepSignal& reference, Policy policy,
                      RunOptions options = {});

double ens_of_run(const RunTrace& trace);

struct ShortfallEvent {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  double ens_kwh = 0.0;
  bool fully_charged_at_start = false;
};

std::vector<ShortfallEvent> segment_events(const RunTrace& trace, const Fleet& fleet);

// `t,request_kw,served_kw,ens_kwh,u_<id>...,x_<id>...`
void write_run_csv(std::ostream& out, const RunTrace& trace, const Fleet& fleet);

}  // namespace ucap
