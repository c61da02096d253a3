#include "ucap/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ucap/csv.hpp"
#include "ucap/ep_analysis.hpp"
#include "ucap/error.hpp"
#include "ucap/oracle.hpp"
#include "ucap/simulate.hpp"
#include "ucap/study_config.hpp"

namespace ucap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void configure_logging() {
  auto logger = spdlog::get("ucap");
  if (!logger) logger = spdlog::stderr_color_mt("ucap");
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("UCAP_LOG")) level = spdlog::level::from_str(env);
  spdlog::set_level(level);
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

// `duration_h` closes an open final row at t_start + duration; otherwise
// the dispatch step length does.
StepSignal load_reference(const std::string& path, std::optional<double> dt_h, std::optional<double> duration_h) {
  StepSignal reference;
  if (duration_h) {
    reference = load_trace_csv(path, 1.0);
    std::ifstream probe(path);
    try {
      read_trace_csv(probe);
    } catch (const Error&) {
      // open final row: move its end to the requested horizon
      auto breaks = reference.breakpoints();
      if (!breaks.empty()) breaks.back() = breaks.front() + *duration_h;
      if (breaks.size() < 2 || !(breaks.back() > breaks[breaks.size() - 2]))
        throw Error(ErrorCode::TraceFormat, path + ": --duration must end after the last row starts");
      reference = StepSignal(std::move(breaks), reference.values());
    }
  } else {
    reference = load_trace_csv(path, dt_h);
  }
  if (dt_h) {
    try {
      reference = subdivide(reference, *dt_h);
    } catch (const Error& e) {
      throw Error(ErrorCode::TraceFormat, path + ": " + e.detail());
    }
  }
  return reference;
}

Fleet load_demo_fleet() {
  Fleet fleet;
  const double power[] = {2, 4, 3, 7};
  const double energy[] = {8, 12, 6, 7};
  for (int i = 0; i < 4; ++i)
    fleet.devices.push_back({"d" + std::to_string(i + 1), power[i], energy[i], energy[i], -power[i], 1.0});
  return fleet;
}

StepSignal demo_reference() {
  const double samples[] = {4, 18, 12, 1};
  return step_signal_from_samples(samples, 1.0);
}

struct DispatchArgs {
  std::string fleet;
  std::string reference;
  std::string policy = "optimal";
  std::optional<double> dt;
  std::optional<double> duration;
  bool recharge = false;
  std::string out_dir;
};

int cmd_dispatch(const DispatchArgs& a, std::ostream& out, std::ostream& err) {
  const Fleet fleet = load_fleet_csv(a.fleet);
  const Policy policy = parse_policy(a.policy);
  const StepSignal reference = load_reference(a.reference, a.dt, a.duration);
  const FleetState initial = initial_state(fleet);
  const RunTrace trace = run_dispatch(fleet, initial, reference, policy, RunOptions{.recharge = a.recharge});

  json summary;
  summary["policy"] = to_string(policy);
  summary["steps"] = trace.steps.size();
  summary["requested_energy_kwh"] = signal_energy(reference);
  summary["energy_served_kwh"] = trace.energy_served_kwh;
  summary["ens_kwh"] = ens_of_run(trace);
  summary["events"] = json::array();
  for (const auto& ev : segment_events(trace, fleet)) {
    summary["events"].push_back({{"start", ev.start},
                                 {"end", ev.end},
                                 {"ens_kwh", ev.ens_kwh},
                                 {"fully_charged_at_start", ev.fully_charged_at_start}});
  }
  json final_state = json::object();
  for (std::size_t i = 0; i < fleet.size(); ++i) final_state[fleet.devices[i].id] = trace.final_state().x[i];
  summary["final_time_to_go_h"] = final_state;

  if (!a.out_dir.empty()) {
    auto csv_out = open_output(a.out_dir, "trace.csv");
    write_run_csv(csv_out, trace, fleet);
    open_output(a.out_dir, "summary.json") << summary.dump(2) << '\n';
    out << summary.dump(2) << '\n';
  } else {
    write_run_csv(out, trace, fleet);
    err << summary.dump() << '\n';
  }
  return 0;
}

struct EpArgs {
  std::string fleet;
  std::string reference;
  std::optional<double> dt;
  std::optional<double> duration;
  std::string out_dir;
};

int cmd_ep(const EpArgs& a, std::ostream& out) {
  const Fleet fleet = load_fleet_csv(a.fleet);
  const StepSignal reference = load_reference(a.reference, a.dt, a.duration);
  const FleetState state = initial_state(fleet);
  const EpCurve request = ep_transform(reference);
  const EpCurve capacity = capacity_curve(fleet, state);
  const double gap = max_energy_gap(request, capacity);

  json report;
  report["gap_kwh"] = gap;
  report["shave_level_kw"] = shave_level(request, gap);
  report["classification"] =
      to_string(classify_infeasibility(request, reference.peak(), capacity, fleet.total_discharge_kw()));
  report["feasible"] = check_feasibility(request, capacity);
  report["request_energy_kwh"] = request.energy_at_zero();
  report["request_peak_kw"] = reference.peak();
  report["fleet_energy_kwh"] = capacity.energy_at_zero();
  report["fleet_power_kw"] = fleet.total_discharge_kw();

  if (!a.out_dir.empty()) {
    auto r = open_output(a.out_dir, "reference_ep.csv");
    write_ep_csv(r, request);
    auto c = open_output(a.out_dir, "capacity_ep.csv");
    write_ep_csv(c, capacity);
    open_output(a.out_dir, "report.json") << report.dump(2) << '\n';
  }
  out << report.dump(2) << '\n';
  return 0;
}

struct AdequacyArgs {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> years;
  std::optional<int> workers;
};

int cmd_adequacy(const AdequacyArgs& a, std::ostream& out) {
  StudyConfig config = load_study_config(a.config);
  if (a.seed) config.seed = *a.seed;
  if (a.years) config.years = *a.years;
  if (a.workers) config.workers = *a.workers;
  const StudyResult result = run_adequacy_study(config);
  write_study_table(out, result);
  if (!a.out_dir.empty()) {
    open_output(a.out_dir, "results.json") << study_result_json(result);
    auto table = open_output(a.out_dir, "table.txt");
    write_study_table(table, result);
    auto annual = open_output(a.out_dir, "annual.csv");
    write_annual_csv(annual, result);
  }
  return 0;
}

int cmd_demo(const std::string& out_dir, std::ostream& out) {
  const Fleet fleet = load_demo_fleet();
  const StepSignal reference = demo_reference();
  const FleetState initial = initial_state(fleet);
  const RunTrace trace = run_dispatch(fleet, initial, reference, Policy::Optimal);

  auto row = [&](const std::string& name, const std::string& unit, const std::string& limit, auto&& cell) {
    out << std::left << std::setw(9) << name << std::setw(7) << unit << std::right << std::setw(5) << limit << " |";
    for (std::size_t k = 0; k < trace.steps.size(); ++k) out << std::setw(6) << csv::format_double(cell(k));
    out << '\n';
  };
  out << std::left << std::setw(9) << "variable" << std::setw(7) << "unit" << std::right << std::setw(5) << "limit"
      << " |";
  for (std::size_t k = 0; k < trace.steps.size(); ++k) out << std::setw(6) << k + 1;
  out << '\n' << std::string(22 + 6 * trace.steps.size(), '-') << '\n';
  row("P^r", "[kW]", "", [&](std::size_t k) { return trace.steps[k].request_kw; });
  for (std::size_t i = 0; i < fleet.size(); ++i)
    row("x_" + std::to_string(i + 1), "[h]", "", [&](std::size_t k) { return trace.state_before(k).x[i]; });
  row("z_hat", "[h]", "", [&](std::size_t k) { return trace.steps[k].z_hat_h.value_or(0.0); });
  for (std::size_t i = 0; i < fleet.size(); ++i)
    row("u_" + std::to_string(i + 1), "[kW]", csv::format_double(fleet.devices[i].max_discharge_kw),
        [&](std::size_t k) { return trace.steps[k].u_kw[i]; });
  row("ENS", "[kWh]", "", [&](std::size_t k) { return trace.steps[k].ens_kwh; });

  const double gap = max_energy_gap(ep_transform(reference), capacity_curve(fleet, initial));
  out << "\nTotal ENS " << csv::format_double(ens_of_run(trace)) << " kWh, max energy gap "
      << csv::format_double(gap) << " kWh, max-flow minimum " << csv::format_double(min_ens_oracle(fleet, initial, reference))
      << " kWh\n";

  if (!out_dir.empty()) {
    auto f = open_output(out_dir, "fleet.csv");
    write_fleet_csv(f, fleet);
    auto r = open_output(out_dir, "reference.csv");
    write_trace_csv(r, reference);
  }
  return 0;
}

int cmd_verify(std::uint64_t seed, std::size_t instances, std::ostream& out) {
  const auto report = verify_agreement(seed, instances);
  for (const auto& f : report.failures) out << "FAIL " << f << '\n';
  out << "verify: " << report.instances << " instances, " << report.passed << " passed, " << report.failed
      << " failed\n";
  return report.failed == 0 ? 0 : 1;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"Energy-constrained storage dispatch and adequacy toolkit", "ucap"};
  app.require_subcommand(1);

  DispatchArgs dispatch;
  auto* dispatch_cmd = app.add_subcommand("dispatch", "Dispatch a fleet against a reference trace");
  dispatch_cmd->add_option("--fleet", dispatch.fleet, "Fleet CSV")->required();
  dispatch_cmd->add_option("--reference", dispatch.reference, "Reference trace CSV")->required();
  dispatch_cmd->add_option("--policy", dispatch.policy, "optimal | lpf | pop | pd | peak_shaving");
  dispatch_cmd->add_option("--dt", dispatch.dt, "Dispatch step (h); also closes an open final trace row");
  dispatch_cmd->add_option("--duration", dispatch.duration, "Trace length (h); closes an open final row");
  dispatch_cmd->add_flag("--recharge", dispatch.recharge, "Recharge on negative requests");
  dispatch_cmd->add_option("--out-dir", dispatch.out_dir, "Write trace.csv and summary.json here");

  EpArgs ep;
  auto* ep_cmd = app.add_subcommand("ep", "E-p analysis of a reference against a fleet");
  ep_cmd->add_option("--fleet", ep.fleet, "Fleet CSV")->required();
  ep_cmd->add_option("--reference", ep.reference, "Reference trace CSV")->required();
  ep_cmd->add_option("--dt", ep.dt, "Closes an open final trace row (h)");
  ep_cmd->add_option("--duration", ep.duration, "Trace length (h); closes an open final row");
  ep_cmd->add_option("--out-dir", ep.out_dir, "Write curve CSVs and report.json here");

  AdequacyArgs adequacy;
  auto* adequacy_cmd = app.add_subcommand("adequacy", "Run a Monte Carlo adequacy study");
  adequacy_cmd->add_option("--config", adequacy.config, "Study config JSON")->required();
  adequacy_cmd->add_option("--out-dir", adequacy.out_dir, "Write results.json, table.txt and annual.csv here");
  adequacy_cmd->add_option("--seed", adequacy.seed, "Override the config seed");
  adequacy_cmd->add_option("--years", adequacy.years, "Override the number of sampled years");
  adequacy_cmd->add_option("--workers", adequacy.workers, "Worker threads");

  std::string demo_out;
  auto* demo_cmd = app.add_subcommand("demo", "Step through the four-device example");
  demo_cmd->add_option("--out-dir", demo_out, "Also write the example fleet.csv and reference.csv here");

  std::uint64_t verify_seed = 1;
  std::size_t verify_instances = 200;
  auto* verify_cmd = app.add_subcommand("verify", "Check dispatch, max-flow and E-p agreement on random instances");
  verify_cmd->add_option("--seed", verify_seed, "First instance seed");
  verify_cmd->add_option("--instances", verify_instances, "Number of random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*dispatch_cmd) return cmd_dispatch(dispatch, out, err);
    if (*ep_cmd) return cmd_ep(ep, out);
    if (*adequacy_cmd) return cmd_adequacy(adequacy, out);
    if (*demo_cmd) return cmd_demo(demo_out, out);
    if (*verify_cmd) return cmd_verify(verify_seed, verify_instances, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_validation() ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace ucap
