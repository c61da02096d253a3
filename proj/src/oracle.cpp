// Minimum-ENS oracle via max-flow on the transportation network. Shares no
// code with the dispatch policies or the E-p analysis.

#include "ucap/oracle.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "ucap/error.hpp"

namespace ucap {

FlowInstance build_flow_instance(const Fleet& fleet, const FleetState& state, const StepSignal& reference) {
  if (state.size() != fleet.size()) throw Error(ErrorCode::PreconditionViolation, "state size does not match fleet");
  FlowInstance inst;
  for (std::size_t i = 0; i < fleet.size(); ++i)
    inst.device_energy_kwh.push_back(fleet.devices[i].max_discharge_kw * std::max(state.x[i], 0.0));
  for (std::size_t k = 0; k < reference.size(); ++k)
    inst.interval_energy_kwh.push_back(std::max(reference.value(k), 0.0) * reference.step_length(k));
  inst.link_kwh.assign(fleet.size(), std::vector<double>(reference.size()));
  for (std::size_t i = 0; i < fleet.size(); ++i)
    for (std::size_t k = 0; k < reference.size(); ++k)
      inst.link_kwh[i][k] = fleet.devices[i].max_discharge_kw * reference.step_length(k);
  return inst;
}

namespace {

// Dinic's algorithm on a dense residual graph. Residuals below `eps` are
// treated as saturated so floating round-off cannot spawn endless paths.
class Dinic {
 public:
  explicit Dinic(std::size_t n) : adj_(n), level_(n), next_(n) {}

  void add_edge(std::size_t from, std::size_t to, double cap) {
    adj_[from].push_back({to, adj_[to].size(), cap});
    adj_[to].push_back({from, adj_[from].size() - 1, 0.0});
  }

  double run(std::size_t s, std::size_t t, double eps) {
    eps_ = eps;
    double flow = 0.0;
    while (bfs(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (true) {
        const double pushed = dfs(s, t, std::numeric_limits<double>::infinity());
        if (pushed <= eps_) break;
        flow += pushed;
      }
    }
    return flow;
  }

 private:
  struct Edge {
    std::size_t to;
    std::size_t rev;
    double cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (const auto& e : adj_[v]) {
        if (e.cap > eps_ && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(std::size_t v, std::size_t t, double limit) {
    if (v == t) return limit;
    for (auto& i = next_[v]; i < adj_[v].size(); ++i) {
      Edge& e = adj_[v][i];
      if (e.cap <= eps_ || level_[e.to] != level_[v] + 1) continue;
      const double pushed = dfs(e.to, t, std::min(limit, e.cap));
      if (pushed > eps_) {
        e.cap -= pushed;
        adj_[e.to][e.rev].cap += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  double eps_ = 0.0;
};

}  // namespace

double max_flow(const FlowInstance& inst) {
  const std::size_t n_dev = inst.device_energy_kwh.size();
  const std::size_t n_int = inst.interval_energy_kwh.size();
  const std::size_t source = 0;
  const std::size_t sink = 1 + n_dev + n_int;
  Dinic graph(sink + 1);
  double scale = 0.0;
  for (std::size_t i = 0; i < n_dev; ++i) {
    graph.add_edge(source, 1 + i, inst.device_energy_kwh[i]);
    scale = std::max(scale, inst.device_energy_kwh[i]);
  }
  for (std::size_t k = 0; k < n_int; ++k) {
    graph.add_edge(1 + n_dev + k, sink, inst.interval_energy_kwh[k]);
    scale = std::max(scale, inst.interval_energy_kwh[k]);
  }
  for (std::size_t i = 0; i < n_dev; ++i)
    for (std::size_t k = 0; k < n_int; ++k) graph.add_edge(1 + i, 1 + n_dev + k, inst.link_kwh[i][k]);
  return graph.run(source, sink, 1e-13 * std::max(scale, 1.0));
}

double min_ens_oracle(const Fleet& fleet, const FleetState& state, const StepSignal& reference) {
  const auto inst = build_flow_instance(fleet, state, reference);
  double requested = 0.0;
  for (double e : inst.interval_energy_kwh) requested += e;
  return std::max(requested - max_flow(inst), 0.0);
}

}  // namespace ucap
