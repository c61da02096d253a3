#include "ucap/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>

#include "ucap/csv.hpp"
#include "ucap/error.hpp"
#include "ucap/tolerance.hpp"

namespace ucap {

double Fleet::total_discharge_kw() const {
  return std::accumulate(devices.begin(), devices.end(), 0.0,
                         [](double acc, const Device& d) { return acc + d.max_discharge_kw; });
}

double Fleet::total_charge_kw() const {
  return std::accumulate(devices.begin(), devices.end(), 0.0,
                         [](double acc, const Device& d) { return acc + d.max_charge_kw; });
}

std::vector<Violation> validate_fleet(const Fleet& fleet) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const auto& d : fleet.devices) {
    auto fail = [&](std::string field, std::string message) {
      out.push_back({d.id, std::move(field), std::move(message)});
    };
    if (d.id.empty()) fail("id", "empty device id");
    if (!seen.insert(d.id).second) fail("id", "duplicate device id");
    if (!(std::isfinite(d.max_discharge_kw) && d.max_discharge_kw > 0.0))
      fail("max_discharge_kw", "must be finite and > 0");
    if (!(std::isfinite(d.energy_kwh) && d.energy_kwh >= 0.0)) fail("energy_kwh", "must be finite and >= 0");
    if (!(std::isfinite(d.capacity_kwh) && d.capacity_kwh >= d.energy_kwh))
      fail("capacity_kwh", "must be finite and >= energy_kwh");
    if (!(std::isfinite(d.max_charge_kw) && d.max_charge_kw <= 0.0))
      fail("max_charge_kw", "must be finite and <= 0 (charging is negative)");
    if (!(d.efficiency > 0.0 && d.efficiency <= 1.0)) fail("efficiency", "must lie in (0, 1]");
  }
  return out;
}

FleetState initial_state(const Fleet& fleet) {
  FleetState s;
  s.x.reserve(fleet.size());
  for (const auto& d : fleet.devices) s.x.push_back(d.time_to_go());
  return s;
}

FleetState full_state(const Fleet& fleet) {
  FleetState s;
  s.x.reserve(fleet.size());
  for (const auto& d : fleet.devices) s.x.push_back(d.max_time_to_go());
  return s;
}

std::vector<double> stored_energy(const Fleet& fleet, const FleetState& state) {
  std::vector<double> e(fleet.size());
  for (std::size_t i = 0; i < fleet.size(); ++i) e[i] = fleet.devices[i].max_discharge_kw * state.x[i];
  return e;
}

double total_stored_energy(const Fleet& fleet, const FleetState& state) {
  const auto e = stored_energy(fleet, state);
  return std::accumulate(e.begin(), e.end(), 0.0);
}

bool is_full(const Fleet& fleet, const FleetState& state) {
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    if (!approx_eq(state.x[i], fleet.devices[i].max_time_to_go())) return false;
  }
  return true;
}

FleetState apply_input(const FleetState& state, const Fleet& fleet, std::span<const double> u_kw, double dt_h) {
  if (!(dt_h > 0.0)) throw Error(ErrorCode::PreconditionViolation, "dt must be > 0");
  if (state.size() != fleet.size() || u_kw.size() != fleet.size())
    throw Error(ErrorCode::PreconditionViolation, "state/input length does not match fleet size");

  FleetState next = state;
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    const Device& d = fleet.devices[i];
    const double x = state.x[i];
    const double u = u_kw[i];
    const double x_max = d.max_time_to_go();
    double dx = 0.0;
    if (u >= 0.0) {
      const double cap = d.max_discharge_kw * std::min(x / dt_h, 1.0);
      if (!approx_le(u, cap))
        throw Error(ErrorCode::PreconditionViolation,
                    "device " + d.id + ": discharge " + csv::format_double(u) + " kW exceeds limit " +
                        csv::format_double(cap) + " kW");
      dx = -u * dt_h / d.max_discharge_kw;
    } else {
      if (!approx_le(d.max_charge_kw, u))
        throw Error(ErrorCode::PreconditionViolation,
                    "device " + d.id + ": charge " + csv::format_double(u) + " kW beyond rating " +
                        csv::format_double(d.max_charge_kw) + " kW");
      dx = -d.efficiency * u * dt_h / d.max_discharge_kw;
    }
    double nx = x + dx;
    if (!approx_le(0.0, nx) || (u < 0.0 && !approx_le(nx, x_max)))
      throw Error(ErrorCode::PreconditionViolation,
                  "device " + d.id + ": state " + csv::format_double(nx) + " h leaves [0, " +
                      csv::format_double(x_max) + "]");
    nx = std::max(nx, 0.0);
    // Charging that lands within tolerance of the top is treated as full.
    if (u < 0.0 && approx_le(x_max, nx)) nx = x_max;
    next.x[i] = nx;
  }
  return next;
}

namespace {

const std::vector<std::string> kFleetHeader{"id",           "max_discharge_kw", "energy_kwh",
                                            "capacity_kwh", "max_charge_kw",    "efficiency"};

}  // namespace

Fleet read_fleet_csv(std::istream& in) {
  const auto table = csv::read(in);
  if (table.header != kFleetHeader)
    throw Error(ErrorCode::FleetFormat,
                "expected header id,max_discharge_kw,energy_kwh,capacity_kwh,max_charge_kw,efficiency");
  Fleet fleet;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = std::to_string(table.line_numbers[r]);
    if (row.size() != kFleetHeader.size())
      throw Error(ErrorCode::FleetFormat, "line " + line + ": expected 6 columns, got " + std::to_string(row.size()));
    Device d;
    d.id = row[0];
    double* targets[] = {&d.max_discharge_kw, &d.energy_kwh, &d.capacity_kwh, &d.max_charge_kw, &d.efficiency};
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (!csv::parse_double(row[c], *targets[c - 1]))
        throw Error(ErrorCode::FleetFormat, "line " + line + ": bad value '" + row[c] + "' for " + kFleetHeader[c]);
    }
    fleet.devices.push_back(std::move(d));
  }
  const auto violations = validate_fleet(fleet);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorCode::FleetFormat, "device '" + v.device_id + "' field " + v.field + ": " + v.message);
  }
  return fleet;
}

Fleet load_fleet_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FleetFormat, "cannot open fleet file " + path.string());
  return read_fleet_csv(in);
}

void write_fleet_csv(std::ostream& out, const Fleet& fleet) {
  out << "id,max_discharge_kw,energy_kwh,capacity_kwh,max_charge_kw,efficiency\n";
  for (const auto& d : fleet.devices) {
    out << d.id << ',' << csv::format_double(d.max_discharge_kw) << ',' << csv::format_double(d.energy_kwh) << ','
        << csv::format_double(d.capacity_kwh) << ',' << csv::format_double(d.max_charge_kw) << ','
        << csv::format_double(d.efficiency) << '\n';
  }
}

}  // namespace ucap
