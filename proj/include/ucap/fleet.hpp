#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ucap {

// A single energy-constrained storage unit. Discharge power is positive,
// charge power negative.
struct Device {
  std::string id;
  double max_discharge_kw = 0.0;  // p̄ > 0
  double energy_kwh = 0.0;        // extractable energy at t = 0
  double capacity_kwh = 0.0;      // ≥ energy_kwh
  double max_charge_kw = 0.0;     // ≤ 0
  double efficiency = 1.0;        // combined round-trip efficiency in (0, 1]

  // Hours of full-power discharge left at the initial energy.
  double time_to_go() const { return energy_kwh / max_discharge_kw; }
  double max_time_to_go() const { return capacity_kwh / max_discharge_kw; }
};

// Device order is the canonical index order used by every state vector.
struct Fleet {
  std::vector<Device> devices;

  std::size_t size() const { return devices.size(); }
  bool empty() const { return devices.empty(); }
  double total_discharge_kw() const;
  double total_charge_kw() const;  // ≤ 0
};

// Per-device time-to-go in hours.
struct FleetState {
  std::vector<double> x;

  std::size_t size() const { return x.size(); }
  bool operator==(const FleetState&) const = default;
};

struct Violation {
  std::string device_id;
  std::string field;
  std::string message;
};

std::vector<Violation> validate_fleet(const Fleet& fleet);

FleetState initial_state(const Fleet& fleet);
FleetState full_state(const Fleet& fleet);

// Stored energy per device, p̄_i·x_i.
std::vector<double> stored_energy(const Fleet& fleet, const FleetState& state);
double total_stored_energy(const Fleet& fleet, const FleetState& state);

bool is_full(const Fleet& fleet, const FleetState& state);

// Advances the state under a constant per-device input held for `dt_h`.
// Discharging components move x by −u·dt/p̄; charging components by −η·u·dt/p̄.
// Throws PreconditionViolation when a power or energy bound is exceeded.
FleetState apply_input(const FleetState& state, const Fleet& fleet, std::span<const double> u_kw,
                       double dt_h);

// Strict CSV reader for the
// `id,max_discharge_kw,energy_kwh,capacity_kwh,max_charge_kw,efficiency` schema.
Fleet read_fleet_csv(std::istream& in);
Fleet load_fleet_csv(const std::filesystem::path& path);
void write_fleet_csv(std::ostream& out, const Fleet& fleet);

}  // namespace ucap
