#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ucap {

// Right-open piecewise-constant power trace: values_[k] holds on
// [breakpoints_[k], breakpoints_[k+1]), zero outside the support.
class StepSignal {
 public:
  StepSignal() = default;

  // Throws PreconditionViolation unless breakpoints are strictly increasing,
  // there is exactly one more breakpoint than values (or none at all), and
  // every value is finite.
  StepSignal(std::vector<double> breakpoints_h, std::vector<double> values_kw);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

  double start() const { return breakpoints_.empty() ? 0.0 : breakpoints_.front(); }
  double end() const { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }
  double step_start(std::size_t k) const { return breakpoints_[k]; }
  double step_length(std::size_t k) const { return breakpoints_[k + 1] - breakpoints_[k]; }
  double value(std::size_t k) const { return values_[k]; }

  double at(double t_h) const;
  double peak() const;    // max(0, max value)
  double minimum() const; // min(0, min value)

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

StepSignal step_signal_from_samples(std::span<const double> samples_kw, double dt_h, double t0_h = 0.0);

// Joins adjacent steps carrying the same value.
StepSignal merge_equal_steps(const StepSignal& s);

// Splits every step into pieces of length `dt_h`. Each step length must be an
// integer multiple of `dt_h` (to 1e-9); otherwise PreconditionViolation.
StepSignal subdivide(const StepSignal& s, double dt_h);

// Pointwise min{s(t), level}.
StepSignal cap_signal(const StepSignal& s, double level_kw);

double signal_energy(const StepSignal& s);

// Mean power over each of `count` windows of width `dt_h` starting at `t0_h`;
// time outside the support counts as zero.
std::vector<double> average_over_windows(const StepSignal& s, double t0_h, double dt_h, std::size_t count);

// Reads the `t_start_h,power_kw` schema. The final interval is closed either
// by a terminal row whose power field is empty or by `last_step_h`.
StepSignal read_trace_csv(std::istream& in, std::optional<double> last_step_h = std::nullopt);
StepSignal load_trace_csv(const std::filesystem::path& path, std::optional<double> last_step_h = std::nullopt);
void write_trace_csv(std::ostream& out, const StepSignal& s);

}  // namespace ucap
