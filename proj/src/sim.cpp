#include "devac/sim.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace devac {

WorldState::WorldState(const Graph& g, const std::vector<VertexId>& exits,
                       const std::vector<VertexId>& homebases)
    : g_(&g),
      exit_mask_(make_mask(g, exits)),
      pos_(homebases),
      evac_step_(homebases.size(), -1),
      at_(g.vertex_count(), -1),
      live_count_(static_cast<int>(homebases.size())) {
  for (AgentId a = 0; a < static_cast<AgentId>(pos_.size()); ++a) {
    if (exit_mask_[pos_[a]]) {
      throw std::invalid_argument("agent starts on an exit");
    }
    if (at_[pos_[a]] != -1) {
      throw std::invalid_argument("two agents share a homebase");
    }
    at_[pos_[a]] = a;
  }
}

std::optional<StepError> WorldState::apply_step(
    const StepMoves& m, std::vector<AgentId>* evacuated_out) {
  int s = step_ + 1;
  // Validate movers and compute end positions.
  for (const auto& [a, target] : m.moves) {
    if (a < 0 || a >= agent_count() || evacuated(a)) {
      return StepError{StepErrorKind::kUnknownAgent, s, a, target,
                       "move listed for unknown or evacuated agent"};
    }
    if (target < 0 || target >= g_->vertex_count() ||
        !g_->has_edge(pos_[a], target)) {
      return StepError{StepErrorKind::kIllegalMove, s, a, target,
                       "target not adjacent to current vertex"};
    }
  }
  // End-of-step injectivity: every live agent's end vertex is claimed once.
  std::vector<VertexId> end_pos = pos_;
  for (const auto& [a, target] : m.moves) end_pos[a] = target;
  std::vector<AgentId> claim(g_->vertex_count(), -1);
  for (AgentId a = 0; a < agent_count(); ++a) {
    if (evacuated(a)) continue;
    VertexId v = end_pos[a];
    if (claim[v] != -1) {
      return StepError{StepErrorKind::kCollision, s, a, v,
                       "agents " + std::to_string(claim[v]) + " and " +
                           std::to_string(a) + " end step on one vertex"};
    }
    claim[v] = a;
  }
  // Commit.
  step_ = s;
  for (AgentId a = 0; a < agent_count(); ++a) {
    if (evacuated(a)) continue;
    if (at_[pos_[a]] == a) at_[pos_[a]] = -1;
  }
  for (AgentId a = 0; a < agent_count(); ++a) {
    if (evacuated(a)) continue;
    pos_[a] = end_pos[a];
    if (exit_mask_[pos_[a]]) {
      evac_step_[a] = s;
      last_evac_step_ = s;
      pos_[a] = kNoVertex;
      --live_count_;
      if (evacuated_out) evacuated_out->push_back(a);
    } else {
      at_[pos_[a]] = a;
    }
  }
  return std::nullopt;
}

std::vector<std::vector<AgentId>> communication_groups(
    const Graph& g, const std::vector<std::pair<AgentId, VertexId>>& positions) {
  int k = static_cast<int>(positions.size());
  std::vector<int> comp(k);
  for (int i = 0; i < k; ++i) comp[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  // Agents chain when within plain hop distance 2 (adjacent or sharing a
  // neighbor); exits do not block messages.
  std::vector<int> owner(g.vertex_count(), -1);
  for (int i = 0; i < k; ++i) owner[positions[i].second] = i;
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) comp[std::max(a, b)] = std::min(a, b);
  };
  for (int i = 0; i < k; ++i) {
    VertexId v = positions[i].second;
    for (VertexId w : g.neighbors(v)) {
      if (owner[w] >= 0) unite(i, owner[w]);
      for (VertexId w2 : g.neighbors(w)) {
        if (owner[w2] >= 0) unite(i, owner[w2]);
      }
    }
  }
  std::vector<std::vector<AgentId>> groups;
  std::vector<int> index(k, -1);
  for (int i = 0; i < k; ++i) {
    int r = find(i);
    if (index[r] < 0) {
      index[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[index[r]].push_back(positions[i].first);
  }
  return groups;
}

int Trace::length() const {
  for (int s = static_cast<int>(steps.size()); s >= 1; --s) {
    if (!evacs[s - 1].empty()) return s;
  }
  return 0;
}

void Trace::ensure_step(int s) {
  while (static_cast<int>(steps.size()) < s) {
    steps.emplace_back();
    evacs.emplace_back();
  }
}

std::string serialize_trace(const Trace& t, const Graph& g) {
  std::ostringstream out;
  out << "devac-trace 1\n";
  out << "instance " << (t.instance_name.empty() ? "-" : t.instance_name) << "\n";
  out << "agents " << t.agent_count << "\n";
  int len = t.length();
  for (int s = 1; s <= len; ++s) {
    out << s;
    for (const auto& [a, v] : t.steps[s - 1].moves) {
      out << " " << a << ":" << g.label(v);
    }
    for (AgentId a : t.evacs[s - 1]) out << " !" << a;
    out << "\n";
  }
  return out.str();
}

Trace parse_trace(const std::string& text, const Graph& g) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "devac-trace 1") {
    throw std::runtime_error("not a devac trace file (missing header)");
  }
  Trace t;
  if (!std::getline(in, line) || line.rfind("instance ", 0) != 0) {
    throw std::runtime_error("trace missing instance line");
  }
  t.instance_name = line.substr(9);
  if (t.instance_name == "-") t.instance_name.clear();
  if (!std::getline(in, line) || line.rfind("agents ", 0) != 0) {
    throw std::runtime_error("trace missing agents line");
  }
  t.agent_count = std::stoi(line.substr(7));
  int expected = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int s;
    if (!(ls >> s) || s != expected) {
      throw std::runtime_error("trace step indices must be 1,2,...: " + line);
    }
    ++expected;
    t.ensure_step(s);
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '!') {
        t.evacs[s - 1].push_back(std::stoi(tok.substr(1)));
      } else {
        auto colon = tok.find(':');
        if (colon == std::string::npos) {
          throw std::runtime_error("bad trace token: " + tok);
        }
        AgentId a = std::stoi(tok.substr(0, colon));
        std::string label = tok.substr(colon + 1);
        auto v = g.find_label(label);
        if (!v) throw std::runtime_error("unknown vertex label in trace: " + label);
        t.steps[s - 1].moves.emplace_back(a, *v);
      }
    }
  }
  return t;
}

Trace load_trace(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str(), g);
}

void save_trace(const Trace& t, const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << serialize_trace(t, g);
}

ValidationReport validate_trace(const Instance& inst, const Trace& t) {
  ValidationReport rep;
  if (t.agent_count != inst.agent_count()) {
    rep.violation = "trace agent count " + std::to_string(t.agent_count) +
                    " != instance k " + std::to_string(inst.agent_count());
    return rep;
  }
  WorldState world(inst.g, inst.exits, inst.homebases);
  for (int s = 1; s <= static_cast<int>(t.steps.size()); ++s) {
    std::vector<AgentId> evacuated;
    auto err = world.apply_step(t.steps[s - 1], &evacuated);
    if (err) {
      rep.violation = "step " + std::to_string(s) + ": " + err->message;
      return rep;
    }
    if (evacuated != t.evacs[s - 1]) {
      rep.violation = "step " + std::to_string(s) +
                      ": recorded evacuations disagree with replay";
      return rep;
    }
  }
  if (world.live_count() > 0) {
    for (AgentId a = 0; a < world.agent_count(); ++a) {
      if (!world.evacuated(a)) rep.live_agents.push_back(a);
    }
    rep.violation = "incomplete: " + std::to_string(world.live_count()) +
                    " agents still in the graph";
    return rep;
  }
  rep.valid = true;
  rep.length = world.last_evacuation_step();
  return rep;
}

double competitive_ratio(int length, int opt) {
  if (opt <= 0) throw std::invalid_argument("competitive ratio needs opt >= 1");
  return static_cast<double>(length) / static_cast<double>(opt);
}

}  // namespace devac
