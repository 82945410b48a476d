#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "devac/instance.hpp"

namespace devac {

using AgentId = int32_t;

/// One synchronous round: agents not listed stay still.
struct StepMoves {
  std::vector<std::pair<AgentId, VertexId>> moves;  // sorted by agent id
  bool empty() const { return moves.empty(); }
};

enum class StepErrorKind {
  kUnknownAgent,
  kIllegalMove,   // target not adjacent to the agent's vertex
  kCollision,     // two agents on one end vertex, or mover onto a stayer
};

struct StepError {
  StepErrorKind kind;
  int step = 0;
  AgentId agent = -1;
  VertexId vertex = kNoVertex;
  std::string message;
};

/// Live agent positions plus evacuation bookkeeping. Mutated only through
/// apply_step so the §-model rules hold at every step boundary.
class WorldState {
 public:
  WorldState(const Graph& g, const std::vector<VertexId>& exits,
             const std::vector<VertexId>& homebases);

  int step() const { return step_; }
  int live_count() const { return live_count_; }
  int agent_count() const { return static_cast<int>(pos_.size()); }
  bool evacuated(AgentId a) const { return evac_step_[a] >= 0; }
  int evacuation_step(AgentId a) const { return evac_step_[a]; }
  VertexId position(AgentId a) const { return pos_[a]; }
  AgentId occupant(VertexId v) const { return at_[v]; }
  const Graph& graph() const { return *g_; }
  const std::vector<uint8_t>& exit_mask() const { return exit_mask_; }

  /// Applies one synchronous step. On error the world is unchanged.
  /// Evacuations this step are appended to *evacuated_out when given.
  std::optional<StepError> apply_step(const StepMoves& m,
                                      std::vector<AgentId>* evacuated_out = nullptr);

  /// Last step in which an evacuation happened (0 when none yet).
  int last_evacuation_step() const { return last_evac_step_; }

 private:
  const Graph* g_;
  std::vector<uint8_t> exit_mask_;
  std::vector<VertexId> pos_;       // kNoVertex once evacuated
  std::vector<int> evac_step_;      // -1 while live
  std::vector<AgentId> at_;         // vertex -> live agent or -1
  int step_ = 0;
  int live_count_ = 0;
  int last_evac_step_ = 0;
};

/// Maximal sets of agents whose closed neighborhoods chain together
/// (members pairwise linked through distance <= 2 hops).
std::vector<std::vector<AgentId>> communication_groups(
    const Graph& g, const std::vector<std::pair<AgentId, VertexId>>& positions);

/// Recorded run: per-step movers and evacuations, 1-based step indices.
struct Trace {
  std::string instance_name;
  int agent_count = 0;
  std::vector<StepMoves> steps;                 // steps[s-1] = step s
  std::vector<std::vector<AgentId>> evacs;      // evacuations at step s

  int length() const;  // last step with an evacuation (= max s_i when valid)
  void ensure_step(int s);
};

std::string serialize_trace(const Trace& t, const Graph& g);
Trace parse_trace(const std::string& text, const Graph& g);
Trace load_trace(const std::string& path, const Graph& g);
void save_trace(const Trace& t, const Graph& g, const std::string& path);

struct ValidationReport {
  bool valid = false;
  int length = 0;
  std::string violation;  // empty when valid
  std::vector<AgentId> live_agents;  // nonempty when trace is incomplete
};

/// Replays the trace through apply_step from the instance homebases and
/// checks move legality, per-step injectivity, recorded evacuations, and
/// completeness.
ValidationReport validate_trace(const Instance& inst, const Trace& t);

/// length / opt; opt must be >= 1.
double competitive_ratio(int length, int opt);

}  // namespace devac
