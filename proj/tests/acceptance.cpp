// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ucap/adequacy.hpp"
#include "ucap/dispatch.hpp"
#include "ucap/ep_analysis.hpp"
#include "ucap/oracle.hpp"
#include "ucap/simulate.hpp"
#include "ucap/study_config.hpp"
#include "ucap/tolerance.hpp"

using namespace ucap;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kInstances = 500;
constexpr std::uint64_t kFirstSeed = 1;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<double> prefix_ens(const RunTrace& t) {
  std::vector<double> out{0.0};
  for (const auto& s : t.steps) out.push_back(out.back() + s.ens_kwh);
  return out;
}

Fleet four_device_fleet() {
  Fleet fleet;
  const double power[] = {2, 4, 3, 7};
  const double energy[] = {8, 12, 6, 7};
  for (int i = 0; i < 4; ++i)
    fleet.devices.push_back({"d" + std::to_string(i + 1), power[i], energy[i], energy[i], -power[i], 1.0});
  return fleet;
}

StepSignal four_device_reference() {
  const double samples[] = {4, 18, 12, 1};
  return step_signal_from_samples(samples, 1.0);
}

Outcome four_device_golden() {
  const auto t0 = Clock::now();
  const auto fleet = four_device_fleet();
  const auto trace = run_dispatch(fleet, initial_state(fleet), four_device_reference(), Policy::Optimal);
  const double elapsed = seconds_since(t0);

  const double z[] = {2.5, 0, 0, 0.5};
  const double ens[] = {0, 2, 3, 0};
  const double u[4][4] = {{2, 2, 0, 0}, {2, 4, 3, 7}, {2, 4, 3, 0}, {1, 0, 0, 0}};
  const double x[5][4] = {{4, 3, 2, 1}, {3, 2.5, 2, 1}, {2, 1.5, 1, 0}, {1, 0.5, 0, 0}, {0.5, 0.5, 0, 0}};
  int mismatches = 0;
  if (trace.steps.size() != 4) return {false, "expected 4 steps"};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& s = trace.steps[k];
    mismatches += !(s.z_hat_h && near(*s.z_hat_h, z[k], 1e-9));
    mismatches += !near(s.ens_kwh, ens[k], 1e-9);
    for (std::size_t i = 0; i < 4; ++i) {
      mismatches += !near(s.u_kw[i], u[k][i], 1e-9);
      mismatches += !near(trace.state_before(k).x[i], x[k][i], 1e-9);
      mismatches += !near(s.state_after.x[i], x[k + 1][i], 1e-9);
    }
  }
  return {mismatches == 0 && elapsed < 1.0,
          fmt("z_hat, u, x and ENS rows: %d mismatches; total ENS %g kWh; %.4f s", mismatches, ens_of_run(trace), elapsed)};
}

Outcome four_device_three_way() {
  const auto fleet = four_device_fleet();
  const auto ref = four_device_reference();
  const double gap = max_energy_gap(ep_transform(ref), capacity_curve(fleet, initial_state(fleet)));
  const double sim = ens_of_run(run_dispatch(fleet, initial_state(fleet), ref, Policy::Optimal));
  const double flow = min_ens_oracle(fleet, initial_state(fleet), ref);
  const bool ok = near(gap, 5, 1e-6) && near(sim, 5, 1e-6) && near(flow, 5, 1e-6);
  return {ok, fmt("gap %.12g, simulated ENS %.12g, max-flow %.12g kWh", gap, sim, flow)};
}

struct InstanceResults {
  std::size_t count = 0;
  std::size_t infeasible = 0;
  std::size_t agreement_failures = 0;
  double max_agreement_error = 0.0;
  double seconds = 0.0;
  std::size_t prefix_violations = 0;
  std::size_t shaving_total_failures = 0;
  std::size_t shaving_prefix_violations = 0;
  std::size_t lemma_failures = 0;
  double max_lemma_error = 0.0;
};

InstanceResults run_instance_set() {
  InstanceResults r;
  const auto t0 = Clock::now();
  for (std::size_t n = 0; n < kInstances; ++n) {
    const auto inst = random_instance(kFirstSeed + n);
    const auto opt = run_dispatch(inst.fleet, inst.state, inst.reference, Policy::Optimal);
    const double sim = ens_of_run(opt);
    const double flow = min_ens_oracle(inst.fleet, inst.state, inst.reference);
    const auto e = ep_transform(inst.reference);
    const auto omega = capacity_curve(inst.fleet, inst.state);
    const double gap = max_energy_gap(e, omega);
    const double err = std::max({std::abs(sim - flow), std::abs(flow - gap), std::abs(sim - gap)});
    r.max_agreement_error = std::max(r.max_agreement_error, err);
    r.agreement_failures += err > 1e-6;
    ++r.count;
  }
  r.seconds = seconds_since(t0);

  for (std::size_t n = 0; n < kInstances; ++n) {
    const auto inst = random_instance(kFirstSeed + n);
    const auto best = prefix_ens(run_dispatch(inst.fleet, inst.state, inst.reference, Policy::Optimal));
    for (auto p : {Policy::LowestPowerFirst, Policy::ProportionOfPower, Policy::ProportionalDischarge}) {
      const auto other = prefix_ens(run_dispatch(inst.fleet, inst.state, inst.reference, p));
      for (std::size_t k = 0; k < best.size(); ++k) r.prefix_violations += !approx_le(best[k], other[k]);
    }

    const auto shaved = prefix_ens(run_dispatch(inst.fleet, inst.state, inst.reference, Policy::PeakShaving));
    r.shaving_total_failures += !near(shaved.back(), best.back(), 1e-6);
    for (std::size_t k = 0; k < best.size(); ++k) r.shaving_prefix_violations += !approx_le(best[k], shaved[k]);

    const auto e = ep_transform(inst.reference);
    const double phi = max_energy_gap(e, capacity_curve(inst.fleet, inst.state));
    if (phi > 0.0) {
      ++r.infeasible;
      const auto capped = ep_transform(cap_signal(inst.reference, shave_level(e, phi)));
      bool ok = true;
      for (double p : merged_breakpoints(e, capped)) {
        const double want = std::max(e(p) - phi, 0.0);
        const double diff = std::abs(capped(p) - want);
        r.max_lemma_error = std::max(r.max_lemma_error, diff);
        ok = ok && diff <= tolerance_for(want);
      }
      r.lemma_failures += !ok;
    }
  }
  return r;
}

Outcome availability_process() {
  // 10 units × 100 000 h = 10^6 unit-hours.
  const GeneratorClass g{"unit", 1.0, 1, 0.9, 2000.0};
  constexpr std::size_t kUnits = 10;
  constexpr std::size_t kHours = 100000;
  std::size_t up_hours = 0;
  double gap_sum = 0.0;
  std::size_t gaps = 0;
  for (std::size_t unit = 0; unit < kUnits; ++unit) {
    auto rng = year_rng(kFirstSeed, static_cast<int>(unit), 2);
    const auto s = simulate_unit_availability(g, kHours, rng);
    std::optional<std::size_t> last_failure;
    for (std::size_t h = 0; h < s.size(); ++h) {
      up_hours += s[h];
      if (h > 0 && s[h - 1] && !s[h]) {
        if (last_failure) {
          gap_sum += static_cast<double>(h - *last_failure);
          ++gaps;
        }
        last_failure = h;
      }
    }
  }
  const double up = static_cast<double>(up_hours) / static_cast<double>(kUnits * kHours);
  const double cycle = gaps ? gap_sum / static_cast<double>(gaps) : 0.0;
  const bool ok = std::abs(up - 0.9) <= 0.01 && std::abs(cycle - 2000.0) <= 0.05 * 2000.0;
  return {ok, fmt("up-fraction %.4f (0.9 ± 0.01), mean failure-to-failure %.1f h over %zu cycles (2000 ± 5%%)", up,
                  cycle, gaps)};
}

Outcome adequacy_study() {
  StudyConfig config = load_study_config(UCAP_DATA_DIR "/synthetic_study/study.json");
  config.years = 1000;

  config.workers = 1;
  const auto t0 = Clock::now();
  const auto serial = run_adequacy_study(config);
  const double elapsed = seconds_since(t0);

  config.workers = 4;
  const auto parallel = run_adequacy_study(config);
  bool identical = study_result_json(serial) == study_result_json(parallel) &&
                   serial.baseline.annual_ens_mwh == parallel.baseline.annual_ens_mwh;
  for (std::size_t p = 0; p < serial.policies.size(); ++p)
    identical = identical && serial.policies[p].annual_ens_mwh == parallel.policies[p].annual_ens_mwh &&
                serial.policies[p].annual_lol_hours == parallel.policies[p].annual_lol_hours;

  const PolicyResult* optimal = nullptr;
  for (const auto& p : serial.policies)
    if (p.name == "optimal") optimal = &p;
  if (!optimal) return {false, "optimal policy missing from the study"};

  std::size_t violations = 0;
  std::size_t worst_year = 0;
  double worst = 0.0;
  for (std::size_t y = 0; y < serial.baseline.annual_ens_mwh.size(); ++y) {
    for (const auto& p : serial.policies) {
      const double excess = optimal->annual_ens_mwh[y] - p.annual_ens_mwh[y];
      if (excess > 1e-6) {
        ++violations;
        if (excess > worst) {
          worst = excess;
          worst_year = y;
        }
      }
      violations += p.annual_ens_mwh[y] > serial.baseline.annual_ens_mwh[y] + 1e-6;
    }
  }

  bool cis = serial.baseline.eens_mwh.halfwidth && serial.baseline.lole_h.halfwidth;
  for (const auto& p : serial.policies) cis = cis && p.eens_mwh.halfwidth && p.lole_h.halfwidth;

  std::ostringstream table;
  write_study_table(table, serial);
  std::printf("%s", table.str().c_str());

  std::string detail = fmt("%d years in %.1f s; %zu paired-dominance violations", serial.years, elapsed, violations);
  if (violations) detail += fmt(" (largest %.6g MWh in year %zu)", worst, worst_year);
  detail += fmt("; EENS optimal %.1f ± %.1f MWh/y vs no storage %.1f ± %.1f; charged at event start %.4f; "
                "1 vs 4 workers %s",
                optimal->eens_mwh.mean, optimal->eens_mwh.halfwidth.value_or(0.0), serial.baseline.eens_mwh.mean,
                serial.baseline.eens_mwh.halfwidth.value_or(0.0), optimal->charged_start_fraction(),
                identical ? "bit-identical" : "DIFFER");
  return {elapsed < 300.0 && violations == 0 && cis && identical, detail};
}

Outcome recharge_policy() {
  std::mt19937_64 rng(kFirstSeed);
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> power(0.5, 10.0);
  std::uniform_real_distribution<double> hours(0.25, 6.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> eta(0.6, 1.0);

  std::size_t refill_failures = 0;
  std::size_t merit_violations = 0;
  std::size_t merit_checks = 0;
  constexpr int kTrials = 2000;
  for (int trial = 0; trial < kTrials; ++trial) {
    Fleet fleet;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      Device d;
      d.id = "b" + std::to_string(i);
      d.max_discharge_kw = power(rng);
      d.capacity_kwh = d.max_discharge_kw * hours(rng);
      d.energy_kwh = d.capacity_kwh * (unit(rng) < 0.2 ? 0.0 : unit(rng));
      d.max_charge_kw = -power(rng);
      d.efficiency = unit(rng) < 0.5 ? 1.0 : eta(rng);
      fleet.devices.push_back(d);
    }
    const auto start = initial_state(fleet);

    // Refill: a short shortfall, then enough surplus at the full charge rating.
    double refill_hours = 0.0;
    for (const auto& d : fleet.devices)
      refill_hours = std::max(refill_hours, d.capacity_kwh / (d.efficiency * -d.max_charge_kw));
    const double surplus = fleet.total_charge_kw() * (1.0 + unit(rng));
    const auto steps = static_cast<std::size_t>(std::ceil(refill_hours)) + 1;
    std::vector<double> breaks{0.0, 1.0};
    std::vector<double> values{power(rng) * n};
    for (std::size_t k = 0; k < steps; ++k) {
      breaks.push_back(breaks.back() + 1.0);
      values.push_back(surplus);
    }
    const auto trace = run_dispatch(fleet, start, StepSignal(breaks, values), Policy::Optimal, RunOptions{.recharge = true});
    refill_failures += !(trace.final_state() == full_state(fleet));

    // Merit order on one randomized charge step.
    const double dt = hours(rng) / 4.0;
    const double request = fleet.total_charge_kw() * unit(rng);
    const auto r = recharge_step(start, fleet, request, dt);
    const auto next = apply_input(start, fleet, r.u_kw, dt);
    std::vector<double> zbar(fleet.size());
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      const auto& d = fleet.devices[i];
      zbar[i] = std::min(start.x[i] - d.efficiency * d.max_charge_kw * dt / d.max_discharge_kw, d.max_time_to_go());
      merit_violations += next.x[i] < start.x[i] || next.x[i] > d.max_time_to_go();
    }
    const double z = r.z_hat_h.value_or(0.0);
    if (z < *std::max_element(zbar.begin(), zbar.end()) - 1e-9) {
      ++merit_checks;
      for (std::size_t i = 0; i < fleet.size(); ++i) merit_violations += next.x[i] < std::min(z, zbar[i]) - 1e-9;
    }
  }
  return {refill_failures == 0 && merit_violations == 0,
          fmt("%d refill runs not exactly full: %zu; merit-order/monotonicity violations %zu over %zu interior steps",
              kTrials, refill_failures, merit_violations, merit_checks)};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&failed](int id, const char* name, const Outcome& o) {
    std::printf("%s  %d. %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  auto guarded = [](const std::function<Outcome()>& fn) -> Outcome {
    try {
      return fn();
    } catch (const std::exception& e) {
      return {false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "Four-device golden run", guarded(four_device_golden));
  report(2, "Max energy gap = simulated ENS = max-flow (four-device example)", guarded(four_device_three_way));

  InstanceResults set;
  const auto instances = guarded([&] {
    set = run_instance_set();
    return Outcome{};
  });
  if (!instances.pass) {
    for (int id = 3; id <= 6; ++id) report(id, "random instance set", instances);
  } else {
    report(3, "Oracle equivalence on random instances",
           {set.agreement_failures == 0 && set.seconds < 30.0,
            fmt("%zu instances, %zu disagreements, max |difference| %.3g kWh, %.3f s", set.count,
                set.agreement_failures, set.max_agreement_error, set.seconds)});
    report(4, "Prefix dominance of the optimal policy",
           {set.prefix_violations == 0, fmt("%zu violations against lpf/pop/pd over %zu instances",
                                            set.prefix_violations, set.count)});
    report(5, "Peak-shaving equivalence",
           {set.shaving_total_failures == 0 && set.shaving_prefix_violations == 0,
            fmt("%zu total mismatches, %zu prefix boundaries below optimal", set.shaving_total_failures,
                set.shaving_prefix_violations)});
    report(6, "Capped transform equals shifted curve",
           {set.lemma_failures == 0 && set.infeasible > 0,
            fmt("%zu infeasible instances, %zu failures, max error %.3g kWh", set.infeasible, set.lemma_failures,
                set.max_lemma_error)});
  }
  report(7, "Availability process", guarded(availability_process));
  report(8, "Adequacy study properties", guarded(adequacy_study));
  report(9, "Recharge policy", guarded(recharge_policy));

  std::printf("%s: %d of 9 criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
