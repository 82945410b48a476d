#include "devac/solver.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace devac {

int Strategy::length() const {
  int len = 0;
  for (const auto& t : tracks) len = std::max(len, t.evacuation_step());
  return len;
}

std::string Strategy::serialize(const Graph& g) const {
  std::ostringstream out;
  for (const auto& t : tracks) {
    out << t.agent;
    for (VertexId v : t.locs) out << " " << g.label(v);
    out << "\n";
  }
  return out.str();
}

bool feasible(const Instance& inst) {
  std::vector<uint8_t> ex = inst.exit_mask();
  std::vector<int> dist = exit_avoiding_distances_multi(inst.g, ex, inst.exits);
  for (VertexId h : inst.homebases) {
    if (dist[h] < 0) return false;
  }
  return true;
}

namespace {

Strategy strategy_from_paths(const std::vector<std::vector<VertexId>>& paths,
                             const std::vector<std::pair<AgentId, VertexId>>& agents) {
  // Paths are matched to agents by their start vertex; starts are distinct
  // by construction so the matching is a bijection.
  std::map<VertexId, AgentId> by_start;
  for (const auto& [a, v] : agents) by_start[v] = a;
  Strategy s;
  for (const auto& p : paths) {
    auto it = by_start.find(p.front());
    if (it == by_start.end()) throw std::logic_error("flow path with unknown start");
    AgentTrack t;
    t.agent = it->second;
    t.locs = p;
    s.tracks.push_back(std::move(t));
  }
  std::sort(s.tracks.begin(), s.tracks.end(),
            [](const AgentTrack& a, const AgentTrack& b) { return a.agent < b.agent; });
  return s;
}

int flow_value_at(const Graph& g, const std::vector<uint8_t>& ex,
                  const std::vector<VertexId>& starts, int horizon) {
  TimeExpandedNetwork net(g, ex, starts, horizon);
  return net.max_flow();
}

}  // namespace

std::optional<Strategy> exclusive_strategy(
    const Graph& g, const std::vector<uint8_t>& exit_mask,
    const std::vector<std::pair<AgentId, VertexId>>& agents, int horizon) {
  if (agents.empty()) return Strategy{};
  int k = static_cast<int>(agents.size());
  std::vector<VertexId> starts;
  starts.reserve(agents.size());
  for (const auto& [a, v] : agents) starts.push_back(v);

  if (horizon < 1 || flow_value_at(g, exit_mask, starts, horizon) < k) {
    return std::nullopt;
  }
  // Binary search the smallest feasible horizon in [1, horizon].
  int lo = 1, hi = horizon;
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (flow_value_at(g, exit_mask, starts, mid) == k) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  TimeExpandedNetwork net(g, exit_mask, starts, lo);
  if (net.max_flow() != k) throw std::logic_error("flow lost agents at optimum");
  return strategy_from_paths(net.decompose_paths(), agents);
}

OptResult compute_opt(const Instance& inst) {
  std::string err = inst.check();
  if (!err.empty()) throw std::invalid_argument(err);
  if (inst.homebases.empty()) return OptResult{0, Strategy{}};
  if (!feasible(inst)) {
    throw InfeasibleError("some agent cannot reach any exit");
  }
  std::vector<uint8_t> ex = inst.exit_mask();
  int k = inst.agent_count();
  // One agent per |V| steps always suffices, so OPT <= k * |V|.
  long long cap = static_cast<long long>(k) * inst.g.vertex_count() + 1;
  int horizon = 1;
  while (flow_value_at(inst.g, ex, inst.homebases, horizon) < k) {
    if (horizon > cap) {
      throw std::logic_error("horizon exceeded the k*|V| feasibility bound");
    }
    horizon *= 2;
  }
  std::vector<std::pair<AgentId, VertexId>> agents;
  for (AgentId a = 0; a < k; ++a) agents.emplace_back(a, inst.homebases[a]);
  auto s = exclusive_strategy(inst.g, ex, agents, horizon);
  if (!s) throw std::logic_error("feasible horizon lost on refinement");
  OptResult r;
  r.opt = s->length();
  r.witness = std::move(*s);
  return r;
}

namespace {

// Joint configurations are occupied vertex sets (agents interchangeable).
using Config = uint16_t;

void enumerate_moves(const Graph& g, const std::vector<VertexId>& occupied,
                     size_t idx, std::vector<VertexId>& ends,
                     std::vector<Config>& out,
                     const std::vector<uint8_t>& exit_mask) {
  if (idx == occupied.size()) {
    Config mask = 0;
    for (VertexId v : ends) {
      if (!exit_mask[v]) mask |= static_cast<Config>(1u << v);
    }
    out.push_back(mask);
    return;
  }
  VertexId v = occupied[idx];
  auto try_end = [&](VertexId e) {
    for (size_t i = 0; i < idx; ++i) {
      if (ends[i] == e) return;  // end-of-step injectivity
    }
    ends.push_back(e);
    enumerate_moves(g, occupied, idx + 1, ends, out, exit_mask);
    ends.pop_back();
  };
  try_end(v);
  for (VertexId w : g.neighbors(v)) try_end(w);
}

}  // namespace

int brute_force_opt(const Instance& inst, bool relax_guard) {
  int nv = inst.g.vertex_count();
  int k = inst.agent_count();
  if (!relax_guard && (nv > 10 || k > 3)) {
    throw TooLargeError("brute force guarded to |V| <= 10 and k <= 3");
  }
  if (nv > 16) throw TooLargeError("brute force supports at most 16 vertices");
  if (k == 0) return 0;
  std::vector<uint8_t> ex = inst.exit_mask();

  Config start = 0;
  for (VertexId h : inst.homebases) start |= static_cast<Config>(1u << h);
  std::vector<int> dist(1u << nv, -1);
  dist[start] = 0;
  std::vector<Config> queue{start};
  for (size_t head = 0; head < queue.size(); ++head) {
    Config cur = queue[head];
    if (cur == 0) return dist[cur];
    std::vector<VertexId> occupied;
    for (VertexId v = 0; v < nv; ++v) {
      if (cur & (1u << v)) occupied.push_back(v);
    }
    std::vector<Config> nexts;
    std::vector<VertexId> ends;
    enumerate_moves(inst.g, occupied, 0, ends, nexts, ex);
    for (Config nxt : nexts) {
      if (dist[nxt] < 0) {
        dist[nxt] = dist[cur] + 1;
        queue.push_back(nxt);
      }
    }
  }
  throw InfeasibleError("brute force found no evacuation");
}

Trace strategy_to_trace(const Strategy& s, const std::string& instance_name,
                        int agent_count) {
  Trace t;
  t.instance_name = instance_name;
  t.agent_count = agent_count;
  t.ensure_step(s.length());
  for (const auto& track : s.tracks) {
    for (int step = 1; step < static_cast<int>(track.locs.size()); ++step) {
      if (track.locs[step] != track.locs[step - 1]) {
        t.steps[step - 1].moves.emplace_back(track.agent, track.locs[step]);
      }
    }
    t.evacs[track.evacuation_step() - 1].push_back(track.agent);
  }
  for (auto& step : t.steps) {
    std::sort(step.moves.begin(), step.moves.end());
  }
  for (auto& e : t.evacs) std::sort(e.begin(), e.end());
  return t;
}

}  // namespace devac
