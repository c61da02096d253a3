#include "ucap/signals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "ucap/csv.hpp"
#include "ucap/error.hpp"
#include "ucap/tolerance.hpp"

namespace ucap {

StepSignal::StepSignal(std::vector<double> breakpoints_h, std::vector<double> values_kw)
    : breakpoints_(std::move(breakpoints_h)), values_(std::move(values_kw)) {
  if (values_.empty() && breakpoints_.size() <= 1) {
    breakpoints_.clear();
    return;
  }
  if (breakpoints_.size() != values_.size() + 1)
    throw Error(ErrorCode::PreconditionViolation, "a step signal needs one more breakpoint than values");
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] < breakpoints_[k + 1]) || !std::isfinite(breakpoints_[k + 1]) ||
        !std::isfinite(breakpoints_[k]))
      throw Error(ErrorCode::PreconditionViolation, "breakpoints must be finite and strictly increasing");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::PreconditionViolation, "signal values must be finite");
  }
}

double StepSignal::at(double t_h) const {
  if (empty() || t_h < start() || t_h >= end()) return 0.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t_h);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepSignal::peak() const {
  double p = 0.0;
  for (double v : values_) p = std::max(p, v);
  return p;
}

double StepSignal::minimum() const {
  double m = 0.0;
  for (double v : values_) m = std::min(m, v);
  return m;
}

StepSignal step_signal_from_samples(std::span<const double> samples_kw, double dt_h, double t0_h) {
  if (!(dt_h > 0.0)) throw Error(ErrorCode::PreconditionViolation, "dt must be > 0");
  if (samples_kw.empty()) return {};
  std::vector<double> breaks(samples_kw.size() + 1);
  for (std::size_t k = 0; k < breaks.size(); ++k) breaks[k] = t0_h + static_cast<double>(k) * dt_h;
  return StepSignal(std::move(breaks), std::vector<double>(samples_kw.begin(), samples_kw.end()));
}

StepSignal merge_equal_steps(const StepSignal& s) {
  if (s.empty()) return s;
  std::vector<double> breaks{s.start()};
  std::vector<double> values;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!values.empty() && values.back() == s.value(k)) {
      breaks.back() = s.breakpoints()[k + 1];
    } else {
      values.push_back(s.value(k));
      breaks.push_back(s.breakpoints()[k + 1]);
    }
  }
  return StepSignal(std::move(breaks), std::move(values));
}

StepSignal subdivide(const StepSignal& s, double dt_h) {
  if (!(dt_h > 0.0)) throw Error(ErrorCode::PreconditionViolation, "dt must be > 0");
  if (s.empty()) return s;
  std::vector<double> breaks{s.start()};
  std::vector<double> values;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double len = s.step_length(k);
    const double pieces = std::round(len / dt_h);
    if (pieces < 1.0 || !approx_eq(pieces * dt_h, len))
      throw Error(ErrorCode::PreconditionViolation, "step length " + csv::format_double(len) +
                                                        " h is not a multiple of dt " + csv::format_double(dt_h));
    const auto n = static_cast<std::size_t>(pieces);
    for (std::size_t j = 1; j <= n; ++j) {
      breaks.push_back(j == n ? s.breakpoints()[k + 1] : s.step_start(k) + static_cast<double>(j) * dt_h);
      values.push_back(s.value(k));
    }
  }
  return StepSignal(std::move(breaks), std::move(values));
}

StepSignal cap_signal(const StepSignal& s, double level_kw) {
  if (!(level_kw >= 0.0)) throw Error(ErrorCode::PreconditionViolation, "cap level must be >= 0");
  std::vector<double> values = s.values();
  for (double& v : values) v = std::min(v, level_kw);
  return StepSignal(s.breakpoints(), std::move(values));
}

double signal_energy(const StepSignal& s) {
  double e = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) e += s.value(k) * s.step_length(k);
  return e;
}

std::vector<double> average_over_windows(const StepSignal& s, double t0_h, double dt_h, std::size_t count) {
  if (!(dt_h > 0.0)) throw Error(ErrorCode::PreconditionViolation, "dt must be > 0");
  std::vector<double> out(count, 0.0);
  std::size_t k = 0;
  for (std::size_t w = 0; w < count; ++w) {
    const double lo = t0_h + static_cast<double>(w) * dt_h;
    const double hi = lo + dt_h;
    while (k < s.size() && s.breakpoints()[k + 1] <= lo) ++k;
    double energy = 0.0;
    for (std::size_t j = k; j < s.size() && s.step_start(j) < hi; ++j) {
      const double overlap = std::min(hi, s.breakpoints()[j + 1]) - std::max(lo, s.step_start(j));
      if (overlap > 0.0) energy += overlap * s.value(j);
    }
    out[w] = energy / dt_h;
  }
  return out;
}

StepSignal read_trace_csv(std::istream& in, std::optional<double> last_step_h) {
  const auto table = csv::read(in);
  if (table.header != std::vector<std::string>{"t_start_h", "power_kw"})
    throw Error(ErrorCode::TraceFormat, "expected header t_start_h,power_kw");
  std::vector<double> breaks;
  std::vector<double> values;
  bool terminated = false;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = std::to_string(table.line_numbers[r]);
    if (terminated) throw Error(ErrorCode::TraceFormat, "line " + line + ": data after terminal row");
    if (row.size() != 2) throw Error(ErrorCode::TraceFormat, "line " + line + ": expected 2 columns");
    double t = 0.0;
    if (!csv::parse_double(row[0], t)) throw Error(ErrorCode::TraceFormat, "line " + line + ": bad time");
    if (!breaks.empty() && !(t > breaks.back()))
      throw Error(ErrorCode::TraceFormat, "line " + line + ": times must be strictly increasing");
    breaks.push_back(t);
    if (row[1].empty()) {
      terminated = true;
      continue;
    }
    double v = 0.0;
    if (!csv::parse_double(row[1], v)) throw Error(ErrorCode::TraceFormat, "line " + line + ": bad power");
    values.push_back(v);
  }
  if (values.empty()) return {};
  if (!terminated) {
    if (!last_step_h || !(*last_step_h > 0.0))
      throw Error(ErrorCode::TraceFormat, "final interval is open: add a terminal row with empty power_kw or "
                                          "give the step length");
    breaks.push_back(breaks.back() + *last_step_h);
  }
  return StepSignal(std::move(breaks), std::move(values));
}

StepSignal load_trace_csv(const std::filesystem::path& path, std::optional<double> last_step_h) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::TraceFormat, "cannot open trace file " + path.string());
  try {
    return read_trace_csv(in, last_step_h);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void write_trace_csv(std::ostream& out, const StepSignal& s) {
  out << "t_start_h,power_kw\n";
  for (std::size_t k = 0; k < s.size(); ++k)
    out << csv::format_double(s.step_start(k)) << ',' << csv::format_double(s.value(k)) << '\n';
  if (!s.empty()) out << csv::format_double(s.end()) << ",\n";
}

}  // namespace ucap
