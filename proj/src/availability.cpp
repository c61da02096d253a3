#include <cmath>

#include "ucap/adequacy.hpp"
#include "ucap/csv.hpp"
#include "ucap/error.hpp"

namespace ucap {

void validate_generator_class(const GeneratorClass& cls) {
  const std::string label = "generator class '" + cls.name + "'";
  if (!(cls.availability > 0.0 && cls.availability < 1.0))
    throw Error(ErrorCode::ConfigInvalid, label + ": availability must lie in (0, 1)");
  if (!(cls.mtbf_h > 0.0) || !std::isfinite(cls.mtbf_h))
    throw Error(ErrorCode::ConfigInvalid, label + ": mtbf_h must be > 0");
  if (cls.unit_count < 0) throw Error(ErrorCode::ConfigInvalid, label + ": unit_count must be >= 0");
  if (!(cls.unit_capacity_mw >= 0.0)) throw Error(ErrorCode::ConfigInvalid, label + ": unit_capacity_mw must be >= 0");
  // Hourly chain: transition probabilities 1/MTTF and 1/MTTR must not exceed 1.
  if (cls.mttf_h() < 1.0 || cls.mttr_h() < 1.0)
    throw Error(ErrorCode::DegenerateRates, label + ": MTTF " + csv::format_double(cls.mttf_h()) + " h and MTTR " +
                                                csv::format_double(cls.mttr_h()) + " h must both be >= 1 h");
}

namespace {

// Calls `on_up(begin, end)` for every maximal run of up hours. Sojourn times
// of the hourly two-state chain are 1 + Geometric(p) hours, which is
// equivalent to drawing a Bernoulli transition every hour.
template <typename OnUp>
void walk_unit(const GeneratorClass& cls, std::size_t hours, std::mt19937_64& rng, OnUp&& on_up) {
  std::bernoulli_distribution initially_up(cls.availability);
  std::geometric_distribution<long long> up_extra(1.0 / cls.mttf_h());
  std::geometric_distribution<long long> down_extra(1.0 / cls.mttr_h());
  bool up = initially_up(rng);
  std::size_t h = 0;
  while (h < hours) {
    const auto extra = static_cast<std::size_t>(up ? up_extra(rng) : down_extra(rng));
    const std::size_t end = (extra >= hours - h) ? hours : h + 1 + extra;
    if (up) on_up(h, end);
    h = end;
    up = !up;
  }
}

}  // namespace

std::vector<bool> simulate_unit_availability(const GeneratorClass& cls, std::size_t hours, std::mt19937_64& rng) {
  validate_generator_class(cls);
  std::vector<bool> state(hours, false);
  walk_unit(cls, hours, rng, [&](std::size_t begin, std::size_t end) {
    for (std::size_t h = begin; h < end; ++h) state[h] = true;
  });
  return state;
}

std::vector<double> simulate_conventional_availability(const std::vector<GeneratorClass>& classes,
                                                        std::size_t hours, std::mt19937_64& rng) {
  std::vector<double> capacity(hours, 0.0);
  for (const auto& cls : classes) {
    validate_generator_class(cls);
    for (int unit = 0; unit < cls.unit_count; ++unit) {
      walk_unit(cls, hours, rng, [&](std::size_t begin, std::size_t end) {
        for (std::size_t h = begin; h < end; ++h) capacity[h] += cls.unit_capacity_mw;
      });
    }
  }
  return capacity;
}

std::vector<double> build_margin_trace(const std::vector<double>& conventional_mw, const std::vector<double>& wind_mw,
                                       const std::vector<double>& demand_mw) {
  if (conventional_mw.size() != demand_mw.size() || wind_mw.size() != demand_mw.size())
    throw Error(ErrorCode::LengthMismatch, "conventional, wind and demand traces must have equal length (" +
                                               std::to_string(conventional_mw.size()) + ", " +
                                               std::to_string(wind_mw.size()) + ", " +
                                               std::to_string(demand_mw.size()) + ")");
  std::vector<double> margin(demand_mw.size());
  for (std::size_t h = 0; h < margin.size(); ++h) margin[h] = conventional_mw[h] + wind_mw[h] - demand_mw[h];
  return margin;
}

Estimate confidence_interval(const std::vector<double>& samples) {
  if (samples.size() < 2) throw Error(ErrorCode::TooFewSamples, "a confidence interval needs at least 2 samples");
  // Kahan-compensated mean, then the two-pass sample variance.
  double sum = 0.0;
  double carry = 0.0;
  for (double v : samples) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n)};
}

}  // namespace ucap
