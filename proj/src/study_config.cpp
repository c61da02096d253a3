#include "ucap/study_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ucap/csv.hpp"
#include "ucap/error.hpp"

namespace ucap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); }

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) invalid(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) invalid(where + ": unknown key '" + key + "'");
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(where + ": bad value for '" + key + "'");
  }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) invalid(where + ": missing '" + key + "'");
  return get_or<T>(obj, key, T{}, where);
}

std::vector<StepSignal> load_pool(const fs::path& dir) {
  if (!fs::is_directory(dir)) invalid("trace directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) invalid("no .csv traces in " + dir.string());
  std::vector<StepSignal> pool;
  for (const auto& f : files) pool.push_back(load_trace_csv(f, 1.0));
  return pool;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

StudyConfig parse_study_config(const std::string& json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(doc,
                      {"years", "hours_per_year", "seed", "dt_h", "workers", "generators", "demand", "wind", "storage",
                       "policies", "charge_accounting"},
                      "config");
  StudyConfig c;
  c.years = get_or<int>(doc, "years", c.years, "config");
  c.hours_per_year = get_or<int>(doc, "hours_per_year", c.hours_per_year, "config");
  c.seed = get_or<std::uint64_t>(doc, "seed", c.seed, "config");
  c.dt_h = get_or<double>(doc, "dt_h", c.dt_h, "config");
  c.workers = get_or<int>(doc, "workers", c.workers, "config");

  if (doc.contains("generators")) {
    if (!doc["generators"].is_array()) invalid("generators must be an array");
    for (const auto& g : doc["generators"]) {
      reject_unknown_keys(g, {"name", "unit_capacity_mw", "unit_count", "availability", "mtbf_h"}, "generator");
      GeneratorClass cls;
      cls.name = get_or<std::string>(g, "name", "", "generator");
      cls.unit_capacity_mw = require<double>(g, "unit_capacity_mw", "generator");
      cls.unit_count = require<int>(g, "unit_count", "generator");
      cls.availability = get_or<double>(g, "availability", cls.availability, "generator");
      cls.mtbf_h = get_or<double>(g, "mtbf_h", cls.mtbf_h, "generator");
      c.generators.push_back(cls);
    }
  }

  if (!doc.contains("demand")) invalid("config: missing 'demand'");
  const auto& demand = doc["demand"];
  reject_unknown_keys(demand, {"traces_dir", "synthetic"}, "demand");
  if (demand.contains("traces_dir"))
    c.demand_pool = load_pool(resolve(base_dir, require<std::string>(demand, "traces_dir", "demand")));
  if (demand.contains("synthetic")) {
    const auto& s = demand["synthetic"];
    reject_unknown_keys(s, {"mean_mw", "daily_amplitude_mw", "seasonal_amplitude_mw", "noise_sd_mw"},
                        "demand.synthetic");
    SyntheticDemand p;
    p.mean_mw = require<double>(s, "mean_mw", "demand.synthetic");
    p.daily_amplitude_mw = get_or<double>(s, "daily_amplitude_mw", 0.0, "demand.synthetic");
    p.seasonal_amplitude_mw = get_or<double>(s, "seasonal_amplitude_mw", 0.0, "demand.synthetic");
    p.noise_sd_mw = get_or<double>(s, "noise_sd_mw", 0.0, "demand.synthetic");
    c.synthetic_demand = p;
  }

  if (doc.contains("wind")) {
    const auto& wind = doc["wind"];
    reject_unknown_keys(wind, {"installed_mw", "traces_dir", "synthetic"}, "wind");
    c.wind_installed_mw = require<double>(wind, "installed_mw", "wind");
    if (wind.contains("traces_dir"))
      c.wind_cf_pool = load_pool(resolve(base_dir, require<std::string>(wind, "traces_dir", "wind")));
    if (wind.contains("synthetic")) {
      const auto& s = wind["synthetic"];
      reject_unknown_keys(s, {"mean_capacity_factor", "persistence", "sd"}, "wind.synthetic");
      SyntheticWind p;
      p.mean_capacity_factor = get_or<double>(s, "mean_capacity_factor", p.mean_capacity_factor, "wind.synthetic");
      p.persistence = get_or<double>(s, "persistence", p.persistence, "wind.synthetic");
      p.sd = get_or<double>(s, "sd", p.sd, "wind.synthetic");
      c.synthetic_wind = p;
    }
  }

  if (doc.contains("storage")) {
    const auto& storage = doc["storage"];
    reject_unknown_keys(storage, {"fleet_csv"}, "storage");
    c.storage = load_fleet_csv(resolve(base_dir, require<std::string>(storage, "fleet_csv", "storage")));
  }

  if (doc.contains("policies")) {
    c.policies.clear();
    for (const auto& name : get_or<std::vector<std::string>>(doc, "policies", {}, "config"))
      c.policies.push_back(parse_policy(name));
  }
  if (doc.contains("charge_accounting")) {
    const auto name = get_or<std::string>(doc, "charge_accounting", "", "config");
    const auto mode = parse_charge_accounting(name);
    if (!mode) invalid("charge_accounting must be 'stored' or 'grid'");
    c.accounting = *mode;
  }
  return c;
}

StudyConfig load_study_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_study_config(buffer.str(), path.parent_path());
}

namespace {

json estimate_json(const Estimate& e) {
  json j;
  j["mean"] = e.mean;
  j["ci95"] = e.halfwidth ? json(*e.halfwidth) : json(nullptr);
  return j;
}

json policy_json(const PolicyResult& r, bool with_events) {
  json j;
  j["policy"] = r.name;
  j["lole_h_per_y"] = estimate_json(r.lole_h);
  j["eens_mwh_per_y"] = estimate_json(r.eens_mwh);
  if (with_events) {
    j["events"] = r.events;
    j["events_fully_charged"] = r.events_fully_charged;
    j["charged_start_fraction"] = r.charged_start_fraction();
  }
  return j;
}

std::string display_name(const std::string& policy) {
  if (policy == "optimal") return "Optimal Policy";
  if (policy == "lpf") return "Lowest Power First";
  if (policy == "pop") return "Proportion of Power";
  if (policy == "pd") return "Proportional Discharge";
  if (policy == "no_storage") return "No Storage";
  return policy;
}

std::string format_estimate(const Estimate& e, int precision) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << e.mean << " ± ";
  if (e.halfwidth)
    s << *e.halfwidth;
  else
    s << "n/a";
  return s.str();
}

// Pads to a display width; "±" is two bytes but one column.
std::string pad(const std::string& s, std::size_t width) {
  const auto columns = static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char ch) { return (static_cast<unsigned char>(ch) & 0xC0) != 0x80; }));
  return columns >= width ? s : s + std::string(width - columns, ' ');
}

}  // namespace

std::string study_result_json(const StudyResult& result) {
  json j;
  j["years"] = result.years;
  j["seed"] = result.seed;
  j["baseline"] = policy_json(result.baseline, false);
  j["policies"] = json::array();
  for (const auto& p : result.policies) j["policies"].push_back(policy_json(p, true));
  return j.dump(2) + "\n";
}

void write_study_table(std::ostream& out, const StudyResult& result) {
  auto row = [&out](const std::string& a, const std::string& b, const std::string& c) {
    out << pad(a, 24) << "| " << pad(b, 18) << "| " << c << '\n';
  };
  row("Policy", "LOLE (h/y)", "EENS (MWh/y)");
  out << std::string(24, '-') << '+' << std::string(19, '-') << '+' << std::string(16, '-') << '\n';
  for (const auto& p : result.policies)
    row(display_name(p.name), format_estimate(p.lole_h, 2), format_estimate(p.eens_mwh, 1));
  row(display_name(result.baseline.name), format_estimate(result.baseline.lole_h, 2),
      format_estimate(result.baseline.eens_mwh, 1));
  out << '\n' << "Sampled years: " << result.years << ", seed " << result.seed << '\n';
  for (const auto& p : result.policies) {
    out << display_name(p.name) << ": " << p.events << " shortfall events, " << std::fixed << std::setprecision(1)
        << 100.0 * p.charged_start_fraction() << "% started fully charged\n";
  }
}

void write_annual_csv(std::ostream& out, const StudyResult& result) {
  out << "year,no_storage_ens_mwh,no_storage_lol_h";
  for (const auto& p : result.policies) out << ',' << p.name << "_ens_mwh," << p.name << "_lol_h";
  out << '\n';
  for (std::size_t y = 0; y < result.baseline.annual_ens_mwh.size(); ++y) {
    out << y << ',' << csv::format_double(result.baseline.annual_ens_mwh[y]) << ','
        << csv::format_double(result.baseline.annual_lol_hours[y]);
    for (const auto& p : result.policies)
      out << ',' << csv::format_double(p.annual_ens_mwh[y]) << ',' << csv::format_double(p.annual_lol_hours[y]);
    out << '\n';
  }
}

}  // namespace ucap
