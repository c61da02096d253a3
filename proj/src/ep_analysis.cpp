#include "ucap/ep_analysis.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "ucap/csv.hpp"
#include "ucap/error.hpp"
#include "ucap/tolerance.hpp"

namespace ucap {

EpCurve::EpCurve(std::vector<EpPoint> points) : points_(std::move(points)) {
  if (points_.empty() || points_.front().p_kw != 0.0)
    throw Error(ErrorCode::PreconditionViolation, "E-p curve must start at p = 0");
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    if (!(points_[k].p_kw < points_[k + 1].p_kw))
      throw Error(ErrorCode::PreconditionViolation, "E-p breakpoints must be strictly increasing in p");
  }
  if (points_.back().energy_kwh != 0.0)
    throw Error(ErrorCode::PreconditionViolation, "E-p curve must end at zero energy");
}

double EpCurve::operator()(double p_kw) const {
  if (p_kw <= 0.0) return points_.front().energy_kwh;
  if (p_kw >= points_.back().p_kw) return 0.0;
  const auto it = std::upper_bound(points_.begin(), points_.end(), p_kw,
                                   [](double p, const EpPoint& pt) { return p < pt.p_kw; });
  const EpPoint& hi = *it;
  const EpPoint& lo = *(it - 1);
  const double w = (p_kw - lo.p_kw) / (hi.p_kw - lo.p_kw);
  return lo.energy_kwh + w * (hi.energy_kwh - lo.energy_kwh);
}

bool EpCurve::is_valid() const {
  if (points_.empty() || points_.front().p_kw != 0.0 || points_.back().energy_kwh != 0.0) return false;
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    const auto& a = points_[k];
    const auto& b = points_[k + 1];
    if (a.energy_kwh < 0.0 || !(a.p_kw < b.p_kw)) return false;
    if (!approx_le(b.energy_kwh, a.energy_kwh)) return false;
    const double slope = (b.energy_kwh - a.energy_kwh) / (b.p_kw - a.p_kw);
    if (!approx_le(prev_slope, slope)) return false;
    prev_slope = slope;
  }
  return true;
}

EpCurve ep_transform(const StepSignal& s) {
  struct Piece {
    double value;
    double length;
  };
  std::vector<Piece> pieces;
  pieces.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.value(k) < 0.0) throw Error(ErrorCode::NegativeSignal, "E-p transform needs a non-negative signal");
    if (s.value(k) > 0.0) pieces.push_back({s.value(k), s.step_length(k)});
  }
  if (pieces.empty()) return {};
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.value > b.value; });

  // Walk levels from the peak downward: between consecutive levels the curve
  // rises with slope equal to the time spent above the upper level.
  std::vector<EpPoint> descending{{pieces.front().value, 0.0}};
  double duration_above = 0.0;
  double energy = 0.0;
  std::size_t k = 0;
  while (true) {
    const double level = descending.back().p_kw;
    while (k < pieces.size() && pieces[k].value >= level) duration_above += pieces[k++].length;
    const double next_level = k < pieces.size() ? pieces[k].value : 0.0;
    energy += duration_above * (level - next_level);
    descending.push_back({next_level, energy});
    if (next_level == 0.0) break;
  }
  std::reverse(descending.begin(), descending.end());
  return EpCurve(std::move(descending));
}

StepSignal capacity_staircase(const Fleet& fleet, const FleetState& state) {
  if (state.size() != fleet.size()) throw Error(ErrorCode::PreconditionViolation, "state size does not match fleet");
  std::vector<double> times;
  for (double x : state.x)
    if (x > 0.0) times.push_back(x);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.empty()) return {};

  std::vector<double> breaks{0.0};
  std::vector<double> values;
  for (double t : times) {
    double level = 0.0;
    for (std::size_t i = 0; i < fleet.size(); ++i)
      if (state.x[i] >= t) level += fleet.devices[i].max_discharge_kw;
    breaks.push_back(t);
    values.push_back(level);
  }
  return StepSignal(std::move(breaks), std::move(values));
}

EpCurve capacity_curve(const Fleet& fleet, const FleetState& state) {
  return ep_transform(capacity_staircase(fleet, state));
}

std::vector<double> merged_breakpoints(const EpCurve& a, const EpCurve& b) {
  std::vector<double> ps;
  ps.reserve(a.points().size() + b.points().size());
  for (const auto& pt : a.points()) ps.push_back(pt.p_kw);
  for (const auto& pt : b.points()) ps.push_back(pt.p_kw);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

double max_energy_gap(const EpCurve& reference, const EpCurve& capacity) {
  double gap = 0.0;
  for (double p : merged_breakpoints(reference, capacity)) gap = std::max(gap, reference(p) - capacity(p));
  return gap;
}

double shave_level(const EpCurve& reference, double gap_kwh) {
  if (!(gap_kwh >= 0.0)) throw Error(ErrorCode::PreconditionViolation, "gap must be >= 0");
  if (gap_kwh == 0.0) return reference.support_end();
  const double total = reference.energy_at_zero();
  if (gap_kwh > total + tolerance_for(total))
    throw Error(ErrorCode::GapExceedsEnergy,
                "gap " + csv::format_double(gap_kwh) + " kWh exceeds request energy " + csv::format_double(total));
  if (gap_kwh >= total) return 0.0;

  const auto& pts = reference.points();
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const auto& lo = pts[k];
    const auto& hi = pts[k + 1];
    if (hi.energy_kwh < gap_kwh) {
      return lo.p_kw + (lo.energy_kwh - gap_kwh) / (lo.energy_kwh - hi.energy_kwh) * (hi.p_kw - lo.p_kw);
    }
  }
  return reference.support_end();
}

bool check_feasibility(const EpCurve& reference, const EpCurve& capacity) {
  for (double p : merged_breakpoints(reference, capacity)) {
    const double e = reference(p);
    if (e > capacity(p) + tolerance_for(e)) return false;
  }
  return true;
}

std::string_view to_string(Infeasibility kind) {
  switch (kind) {
    case Infeasibility::Feasible: return "feasible";
    case Infeasibility::Power: return "power";
    case Infeasibility::Energy: return "energy";
    case Infeasibility::PowerAndEnergy: return "power_and_energy";
    case Infeasibility::Heterogeneity: return "heterogeneity";
  }
  return "unknown";
}

Infeasibility classify_infeasibility(const EpCurve& reference, double peak_kw, const EpCurve& capacity,
                                     double total_power_kw) {
  if (check_feasibility(reference, capacity)) return Infeasibility::Feasible;
  const bool power = peak_kw > total_power_kw + tolerance_for(total_power_kw);
  const double e0 = reference.energy_at_zero();
  const bool energy = e0 > capacity.energy_at_zero() + tolerance_for(e0);
  if (power && energy) return Infeasibility::PowerAndEnergy;
  if (power) return Infeasibility::Power;
  if (energy) return Infeasibility::Energy;
  return Infeasibility::Heterogeneity;
}

Infeasibility classify_infeasibility(const StepSignal& reference, const Fleet& fleet, const FleetState& state) {
  return classify_infeasibility(ep_transform(reference), reference.peak(), capacity_curve(fleet, state),
                                fleet.total_discharge_kw());
}

void write_ep_csv(std::ostream& out, const EpCurve& curve) {
  out << "p_kw,energy_kwh\n";
  for (const auto& pt : curve.points())
    out << csv::format_double(pt.p_kw) << ',' << csv::format_double(pt.energy_kwh) << '\n';
}

}  // namespace ucap
