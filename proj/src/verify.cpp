#include <cmath>
#include <random>
#include <sstream>

#include "ucap/ep_analysis.hpp"
#include "ucap/oracle.hpp"
#include "ucap/simulate.hpp"

namespace ucap {

RandomInstance random_instance(std::uint64_t seed, std::size_t max_devices, std::size_t max_steps) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  RandomInstance inst;
  const int n = uniform(1, static_cast<int>(max_devices));
  for (int i = 0; i < n; ++i) {
    Device d;
    d.id = "d" + std::to_string(i + 1);
    d.max_discharge_kw = uniform(1, 8);
    d.energy_kwh = uniform(0, 16);
    d.capacity_kwh = d.energy_kwh + uniform(0, 4);
    d.max_charge_kw = -uniform(0, 8);
    d.efficiency = 1.0;
    inst.fleet.devices.push_back(d);
  }
  inst.state = initial_state(inst.fleet);

  const int m = uniform(1, static_cast<int>(max_steps));
  std::vector<double> breaks{0.0};
  std::vector<double> values;
  for (int k = 0; k < m; ++k) {
    breaks.push_back(breaks.back() + uniform(1, 2));
    values.push_back(uniform(0, 20));
  }
  inst.reference = StepSignal(std::move(breaks), std::move(values));
  return inst;
}

VerifyReport verify_agreement(std::uint64_t seed, std::size_t count, double tolerance) {
  VerifyReport report;
  for (std::size_t n = 0; n < count; ++n) {
    const std::uint64_t instance_seed = seed + n;
    const auto inst = random_instance(instance_seed);
    const double dispatched = ens_of_run(run_dispatch(inst.fleet, inst.state, inst.reference, Policy::Optimal));
    const double oracle = min_ens_oracle(inst.fleet, inst.state, inst.reference);
    const double gap = max_energy_gap(ep_transform(inst.reference), capacity_curve(inst.fleet, inst.state));
    ++report.instances;
    if (std::abs(dispatched - oracle) <= tolerance && std::abs(oracle - gap) <= tolerance &&
        std::abs(dispatched - gap) <= tolerance) {
      ++report.passed;
    } else {
      ++report.failed;
      std::ostringstream msg;
      msg << "seed " << instance_seed << ": dispatch " << dispatched << ", oracle " << oracle << ", gap " << gap;
      report.failures.push_back(msg.str());
    }
  }
  return report;
}

}  // namespace ucap
