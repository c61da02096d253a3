#include "ucap/adequacy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include <spdlog/spdlog.h>

#include "ucap/error.hpp"
#include "ucap/simulate.hpp"
#include "ucap/tolerance.hpp"

namespace ucap {

namespace {

constexpr double kLossOfLoadThresholdMwh = 1e-6;

enum Stream : std::uint64_t { kDemandStream = 0, kWindStream = 1, kConventionalStream = 2 };

std::size_t steps_per_hour(double dt_h) { return static_cast<std::size_t>(std::llround(1.0 / dt_h)); }

std::vector<double> synthetic_demand(const SyntheticDemand& p, std::size_t hours, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> out(hours);
  for (std::size_t h = 0; h < hours; ++h) {
    const double t = static_cast<double>(h);
    double v = p.mean_mw + p.daily_amplitude_mw * std::sin(2.0 * std::numbers::pi * t / 24.0) +
               p.seasonal_amplitude_mw * std::cos(2.0 * std::numbers::pi * t / 8760.0);
    if (p.noise_sd_mw > 0.0) v += p.noise_sd_mw * noise(rng);
    out[h] = std::max(v, 0.0);
  }
  return out;
}

std::vector<double> synthetic_capacity_factor(const SyntheticWind& p, std::size_t hours, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  const double innovation = p.sd * std::sqrt(std::max(1.0 - p.persistence * p.persistence, 0.0));
  std::vector<double> out(hours);
  double deviation = p.sd * noise(rng);
  for (std::size_t h = 0; h < hours; ++h) {
    out[h] = std::clamp(p.mean_capacity_factor + deviation, 0.0, 1.0);
    deviation = p.persistence * deviation + innovation * noise(rng);
  }
  return out;
}

std::vector<double> pick_from_pool(const std::vector<StepSignal>& pool, std::size_t hours, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const StepSignal& trace = pool[pick(rng)];
  return average_over_windows(trace, trace.start(), 1.0, hours);
}

struct PolicyYear {
  double ens_mwh = 0.0;
  double lol_hours = 0.0;
  std::size_t events = 0;
  std::size_t events_full = 0;
};

struct YearOutcome {
  PolicyYear baseline;
  std::vector<PolicyYear> policies;
};

PolicyYear run_policy_year(const StudyConfig& config, const std::vector<double>& requests, Policy policy) {
  PolicyYear out;
  const std::size_t substeps = steps_per_hour(config.dt_h);
  StreamingDispatcher dispatcher(config.storage, full_state(config.storage), policy,
                                 RunOptions{.recharge = true, .accounting = config.accounting});
  bool in_event = false;
  for (std::size_t h = 0; h < requests.size(); ++h) {
    const double request = requests[h];
    if (request > 0.0 && !in_event) {
      ++out.events;
      if (is_full(config.storage, dispatcher.state())) ++out.events_full;
    }
    in_event = request > 0.0;
    double hour_ens = 0.0;
    for (std::size_t s = 0; s < substeps; ++s) {
      const double t = static_cast<double>(h) + static_cast<double>(s) * config.dt_h;
      hour_ens += dispatcher.step(t, request, config.dt_h).ens_kwh;
    }
    out.ens_mwh += hour_ens;
    if (hour_ens > kLossOfLoadThresholdMwh) out.lol_hours += 1.0;
  }
  return out;
}

YearOutcome run_year(const StudyConfig& config, int year) {
  const auto margin = sample_margin_year(config, year);
  YearOutcome out;
  for (double m : margin) {
    if (m < 0.0) {
      out.baseline.ens_mwh += -m;
      if (-m > kLossOfLoadThresholdMwh) out.baseline.lol_hours += 1.0;
    }
  }
  const auto requests = storage_requests(margin, config.storage);
  for (Policy p : config.policies) out.policies.push_back(run_policy_year(config, requests, p));
  return out;
}

Estimate estimate(const std::vector<double>& samples) {
  if (samples.size() >= 2) return confidence_interval(samples);
  return {samples.empty() ? 0.0 : samples.front(), std::nullopt};
}

PolicyResult summarise(std::string name, const std::vector<YearOutcome>& years, std::optional<std::size_t> index) {
  PolicyResult r;
  r.name = std::move(name);
  for (const auto& y : years) {
    const PolicyYear& py = index ? y.policies[*index] : y.baseline;
    r.annual_ens_mwh.push_back(py.ens_mwh);
    r.annual_lol_hours.push_back(py.lol_hours);
    r.events += py.events;
    r.events_fully_charged += py.events_full;
  }
  r.lole_h = estimate(r.annual_lol_hours);
  r.eens_mwh = estimate(r.annual_ens_mwh);
  return r;
}

}  // namespace

std::mt19937_64 year_rng(std::uint64_t seed, int year, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(year), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

void validate_study_config(const StudyConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); };
  if (c.years < 1) fail("years must be >= 1");
  if (c.hours_per_year < 1) fail("hours_per_year must be >= 1");
  if (c.workers < 1) fail("workers must be >= 1");
  if (!(c.dt_h > 0.0) || c.dt_h > 1.0 || !approx_eq(static_cast<double>(steps_per_hour(c.dt_h)) * c.dt_h, 1.0))
    fail("dt_h must divide the 1 h margin resolution");
  for (const auto& g : c.generators) validate_generator_class(g);
  if (!c.demand_pool.empty() && c.synthetic_demand) fail("demand: give either traces or synthetic parameters");
  if (c.demand_pool.empty() && !c.synthetic_demand) fail("demand: traces or synthetic parameters required");
  const auto hours = static_cast<double>(c.hours_per_year);
  for (const auto& t : c.demand_pool)
    if (t.end() - t.start() < hours - kTolerance) fail("demand trace shorter than hours_per_year");
  if (!(c.wind_installed_mw >= 0.0)) fail("wind installed_mw must be >= 0");
  if (!c.wind_cf_pool.empty() && c.synthetic_wind) fail("wind: give either traces or synthetic parameters");
  if (c.wind_installed_mw > 0.0 && c.wind_cf_pool.empty() && !c.synthetic_wind)
    fail("wind: traces or synthetic parameters required when installed_mw > 0");
  for (const auto& t : c.wind_cf_pool)
    if (t.end() - t.start() < hours - kTolerance) fail("wind trace shorter than hours_per_year");
  if (c.synthetic_wind && !(std::abs(c.synthetic_wind->persistence) < 1.0 || c.synthetic_wind->sd == 0.0))
    fail("wind persistence must lie in (-1, 1)");
  const auto violations = validate_fleet(c.storage);
  if (!violations.empty())
    fail("storage device '" + violations.front().device_id + "' " + violations.front().field + ": " +
         violations.front().message);
  for (Policy p : c.policies)
    if (p == Policy::PeakShaving)
      throw Error(ErrorCode::StreamingNonCausal, "peak_shaving needs perfect foresight and cannot run in a study");
}

std::vector<double> sample_margin_year(const StudyConfig& config, int year) {
  const auto hours = static_cast<std::size_t>(config.hours_per_year);

  auto demand_rng = year_rng(config.seed, year, kDemandStream);
  const auto demand = config.demand_pool.empty() ? synthetic_demand(*config.synthetic_demand, hours, demand_rng)
                                                 : pick_from_pool(config.demand_pool, hours, demand_rng);

  std::vector<double> wind(hours, 0.0);
  if (config.wind_installed_mw > 0.0) {
    auto wind_rng = year_rng(config.seed, year, kWindStream);
    const auto cf = config.wind_cf_pool.empty() ? synthetic_capacity_factor(*config.synthetic_wind, hours, wind_rng)
                                                : pick_from_pool(config.wind_cf_pool, hours, wind_rng);
    for (std::size_t h = 0; h < hours; ++h) wind[h] = config.wind_installed_mw * cf[h];
  }

  auto conv_rng = year_rng(config.seed, year, kConventionalStream);
  const auto conventional = simulate_conventional_availability(config.generators, hours, conv_rng);
  return build_margin_trace(conventional, wind, demand);
}

std::vector<double> storage_requests(const std::vector<double>& margin_mw, const Fleet& fleet) {
  const double charge_limit = fleet.total_charge_kw();  // ≤ 0
  std::vector<double> req(margin_mw.size(), 0.0);
  for (std::size_t h = 0; h < margin_mw.size(); ++h) {
    const double m = margin_mw[h];
    if (m < 0.0) {
      req[h] = -m;
    } else if (m > 0.0 && charge_limit < 0.0) {
      req[h] = -std::min(m, -charge_limit);
    }
  }
  return req;
}

StudyResult run_adequacy_study(const StudyConfig& config) {
  validate_study_config(config);
  const auto years = static_cast<std::size_t>(config.years);
  std::vector<YearOutcome> outcomes(years);

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    try {
      for (std::size_t y = next++; y < years; y = next++) outcomes[y] = run_year(config, static_cast<int>(y));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = years;
    }
  };
  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(config.workers), years);
  spdlog::debug("adequacy study: {} years, {} policies, {} worker(s)", years, config.policies.size(), n_workers);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  StudyResult result;
  result.years = config.years;
  result.seed = config.seed;
  result.baseline = summarise("no_storage", outcomes, std::nullopt);
  for (std::size_t p = 0; p < config.policies.size(); ++p)
    result.policies.push_back(summarise(std::string(to_string(config.policies[p])), outcomes, p));
  return result;
}

}  // namespace ucap
