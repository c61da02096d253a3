#include "ucap/simulate.hpp"

#include <algorithm>
#include <ostream>

#include "ucap/csv.hpp"
#include "ucap/error.hpp"

namespace ucap {

StreamingDispatcher::StreamingDispatcher(const Fleet& fleet, FleetState initial, Policy policy, RunOptions options)
    : fleet_(fleet), state_(std::move(initial)), policy_(policy), options_(options) {
  if (policy == Policy::PeakShaving)
    throw Error(ErrorCode::StreamingNonCausal, "peak_shaving needs the full reference and cannot run step by step");
  if (state_.size() != fleet_.size())
    throw Error(ErrorCode::PreconditionViolation, "initial state size does not match fleet");
}

StepRecord StreamingDispatcher::step(double t_h, double request_kw, double dt_h) {
  StepRecord rec;
  rec.t_h = t_h;
  rec.dt_h = dt_h;
  rec.request_kw = request_kw;
  if (request_kw > 0.0) {
    auto r = discharge_step(policy_, state_, fleet_, request_kw, dt_h);
    rec.u_kw = std::move(r.u_kw);
    rec.z_hat_h = r.z_hat_h;
  } else if (request_kw < 0.0 && options_.recharge) {
    auto r = recharge_step(state_, fleet_, request_kw, dt_h, options_.accounting);
    rec.u_kw = std::move(r.u_kw);
    rec.z_hat_h = r.z_hat_h;
  } else {
    rec.u_kw.assign(fleet_.size(), 0.0);
  }
  for (double u : rec.u_kw) rec.served_kw += std::max(u, 0.0);
  rec.ens_kwh = std::max(request_kw - rec.served_kw, 0.0) * dt_h;
  state_ = apply_input(state_, fleet_, rec.u_kw, dt_h);
  rec.state_after = state_;
  return rec;
}

namespace {

void accumulate_totals(RunTrace& trace) {
  trace.ens_kwh = 0.0;
  trace.energy_served_kwh = 0.0;
  for (const auto& s : trace.steps) {
    trace.ens_kwh += s.ens_kwh;
    trace.energy_served_kwh += s.served_kw * s.dt_h;
  }
}

RunTrace run_peak_shaving(const Fleet& fleet, const FleetState& initial, const StepSignal& reference) {
  if (reference.minimum() < 0.0)
    throw Error(ErrorCode::PreconditionViolation, "peak_shaving runs on discharge-only (non-negative) references");
  const auto plan = peak_shaving_schedule(fleet, initial, reference);
  RunTrace trace;
  trace.initial = initial;
  FleetState state = initial;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    const double dt = reference.step_length(k);
    StepRecord rec;
    rec.t_h = reference.step_start(k);
    rec.dt_h = dt;
    rec.request_kw = reference.value(k);
    auto r = optimal_step(state, fleet, plan.capped.value(k), dt);
    rec.u_kw = std::move(r.u_kw);
    rec.z_hat_h = r.z_hat_h;
    rec.served_kw = r.served_kw;
    rec.ens_kwh = std::max(rec.request_kw - rec.served_kw, 0.0) * dt;
    state = apply_input(state, fleet, rec.u_kw, dt);
    rec.state_after = state;
    trace.steps.push_back(std::move(rec));
  }
  accumulate_totals(trace);
  return trace;
}

}  // namespace

RunTrace run_dispatch(const Fleet& fleet, const FleetState& initial, const StepSignal& reference, Policy policy,
                      RunOptions options) {
  if (policy == Policy::PeakShaving) return run_peak_shaving(fleet, initial, reference);
  StreamingDispatcher dispatcher(fleet, initial, policy, options);
  RunTrace trace;
  trace.initial = initial;
  trace.steps.reserve(reference.size());
  for (std::size_t k = 0; k < reference.size(); ++k)
    trace.steps.push_back(dispatcher.step(reference.step_start(k), reference.value(k), reference.step_length(k)));
  accumulate_totals(trace);
  return trace;
}

double ens_of_run(const RunTrace& trace) {
  double total = 0.0;
  for (const auto& s : trace.steps) total += s.ens_kwh;
  return total;
}

std::vector<ShortfallEvent> segment_events(const RunTrace& trace, const Fleet& fleet) {
  std::vector<ShortfallEvent> events;
  std::size_t k = 0;
  while (k < trace.steps.size()) {
    if (!(trace.steps[k].request_kw > 0.0)) {
      ++k;
      continue;
    }
    ShortfallEvent ev;
    ev.start = k;
    ev.fully_charged_at_start = is_full(fleet, trace.state_before(k));
    while (k < trace.steps.size() && trace.steps[k].request_kw > 0.0) ev.ens_kwh += trace.steps[k++].ens_kwh;
    ev.end = k;
    events.push_back(ev);
  }
  return events;
}

void write_run_csv(std::ostream& out, const RunTrace& trace, const Fleet& fleet) {
  out << "t,request_kw,served_kw,ens_kwh";
  for (const auto& d : fleet.devices) out << ",u_" << d.id;
  for (const auto& d : fleet.devices) out << ",x_" << d.id;
  out << '\n';
  for (const auto& s : trace.steps) {
    out << csv::format_double(s.t_h) << ',' << csv::format_double(s.request_kw) << ','
        << csv::format_double(s.served_kw) << ',' << csv::format_double(s.ens_kwh);
    for (double u : s.u_kw) out << ',' << csv::format_double(u);
    for (double x : s.state_after.x) out << ',' << csv::format_double(x);
    out << '\n';
  }
}

}  // namespace ucap
