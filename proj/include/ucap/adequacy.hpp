#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ucap/dispatch.hpp"
#include "ucap/fleet.hpp"
#include "ucap/signals.hpp"

namespace ucap {

// A class of identical conventional units with a two-state failure/repair
// process. mtbf is the mean time between successive failure events, so
// MTTF = availability·mtbf and MTTR = (1 − availability)·mtbf.
struct GeneratorClass {
  std::string name;
  double unit_capacity_mw = 0.0;
  int unit_count = 0;
  double availability = 0.9;
  double mtbf_h = 2000.0;

  double mttf_h() const { return availability * mtbf_h; }
  double mttr_h() const { return (1.0 - availability) * mtbf_h; }
};

// Throws DegenerateRates (MTTF or MTTR below one hour) or ConfigInvalid.
void validate_generator_class(const GeneratorClass& cls);

// Up/down history of one unit over `hours`, one flag per hour. The initial
// state is drawn from the stationary distribution.
std::vector<bool> simulate_unit_availability(const GeneratorClass& cls, std::size_t hours, std::mt19937_64& rng);

// Hourly available conventional capacity, MW.
std::vector<double> simulate_conventional_availability(const std::vector<GeneratorClass>& classes,
                                                        std::size_t hours, std::mt19937_64& rng);

// Pointwise conventional + wind − demand. Positive is surplus, negative is
// shortfall. Throws LengthMismatch.
std::vector<double> build_margin_trace(const std::vector<double>& conventional_mw, const std::vector<double>& wind_mw,
                                       const std::vector<double>& demand_mw);

struct Estimate {
  double mean = 0.0;
  std::optional<double> halfwidth;  // 95% normal-approximation half-width
};

// mean ± 1.96·s/√N with the N−1 sample deviation. Throws TooFewSamples below 2.
Estimate confidence_interval(const std::vector<double>& samples);

struct SyntheticDemand {
  double mean_mw = 0.0;
  double daily_amplitude_mw = 0.0;
  double seasonal_amplitude_mw = 0.0;
  double noise_sd_mw = 0.0;
};

struct SyntheticWind {
  double mean_capacity_factor = 0.3;
  double persistence = 0.95;  // AR(1) coefficient on the hourly deviation
  double sd = 0.1;            // stationary standard deviation of the capacity factor
};

struct StudyConfig {
  int years = 1;
  int hours_per_year = 8760;
  std::uint64_t seed = 0;
  double dt_h = 1.0;
  int workers = 1;
  std::vector<GeneratorClass> generators;

  // Demand: a pool of annual traces (MW) or synthetic parameters.
  std::vector<StepSignal> demand_pool;
  std::optional<SyntheticDemand> synthetic_demand;

  // Wind: installed MW times capacity-factor traces or a synthetic process.
  double wind_installed_mw = 0.0;
  std::vector<StepSignal> wind_cf_pool;
  std::optional<SyntheticWind> synthetic_wind;

  // Storage ratings in MW / MWh. Every year starts fully charged.
  Fleet storage;
  std::vector<Policy> policies{Policy::Optimal, Policy::LowestPowerFirst, Policy::ProportionOfPower,
                               Policy::ProportionalDischarge};
  ChargeAccounting accounting = ChargeAccounting::StoredSide;
};

// Throws ConfigInvalid.
void validate_study_config(const StudyConfig& config);

struct PolicyResult {
  std::string name;
  Estimate lole_h;
  Estimate eens_mwh;
  std::size_t events = 0;
  std::size_t events_fully_charged = 0;
  std::vector<double> annual_ens_mwh;
  std::vector<double> annual_lol_hours;

  double charged_start_fraction() const {
    return events == 0 ? 1.0 : static_cast<double>(events_fully_charged) / static_cast<double>(events);
  }
};

struct StudyResult {
  int years = 0;
  std::uint64_t seed = 0;
  PolicyResult baseline;  // no storage
  std::vector<PolicyResult> policies;
};

// Samples one year of hourly margin (MW) for `year` using its own substream.
std::vector<double> sample_margin_year(const StudyConfig& config, int year);

// Storage request for a margin trace: shortfalls become discharge requests,
// surpluses become charge requests limited by the fleet charge rating.
std::vector<double> storage_requests(const std::vector<double>& margin_mw, const Fleet& fleet);

StudyResult run_adequacy_study(const StudyConfig& config);

std::mt19937_64 year_rng(std::uint64_t seed, int year, std::uint64_t stream);

}  // namespace ucap
