#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "ucap/fleet.hpp"
#include "ucap/signals.hpp"

namespace ucap {

struct EpPoint {
  double p_kw;
  double energy_kwh;
};

// Convex, non-increasing piecewise-linear energy-vs-power curve. The first
// breakpoint sits at p = 0, the last carries E = 0, and E = 0 beyond it.
class EpCurve {
 public:
  EpCurve() : points_{{0.0, 0.0}} {}
  explicit EpCurve(std::vector<EpPoint> points);

  const std::vector<EpPoint>& points() const { return points_; }
  double operator()(double p_kw) const;

  double energy_at_zero() const { return points_.front().energy_kwh; }
  // Smallest p with E(p) = 0.
  double support_end() const { return points_.back().p_kw; }

  // Checks the curve shape on breakpoints (monotone, convex, ends at zero).
  bool is_valid() const;

 private:
  std::vector<EpPoint> points_;
};

// E(p) = ∫ max{s(t) − p, 0} dt, exact. Throws NegativeSignal for negative values.
EpCurve ep_transform(const StepSignal& s);

// Staircase of the fleet's worst-case feasible request, devices stacked by
// descending time-to-go.
StepSignal capacity_staircase(const Fleet& fleet, const FleetState& state);
EpCurve capacity_curve(const Fleet& fleet, const FleetState& state);

// Sorted union of both curves' breakpoint powers.
std::vector<double> merged_breakpoints(const EpCurve& a, const EpCurve& b);

double max_energy_gap(const EpCurve& reference, const EpCurve& capacity);

// Power level p̃ at which the reference curve equals `gap_kwh`; the peak
// (support end) when the gap is zero.
double shave_level(const EpCurve& reference, double gap_kwh);

bool check_feasibility(const EpCurve& reference, const EpCurve& capacity);

enum class Infeasibility { Feasible, Power, Energy, PowerAndEnergy, Heterogeneity };

std::string_view to_string(Infeasibility kind);

Infeasibility classify_infeasibility(const EpCurve& reference, double peak_kw, const EpCurve& capacity,
                                     double total_power_kw);
Infeasibility classify_infeasibility(const StepSignal& reference, const Fleet& fleet, const FleetState& state);

void write_ep_csv(std::ostream& out, const EpCurve& curve);

}  // namespace ucap
