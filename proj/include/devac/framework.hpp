#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "devac/sim.hpp"
#include "devac/solver.hpp"
#include "devac/zoning.hpp"

namespace devac {

using PartitionProvider = std::function<BPartition(
    const Graph&, const std::vector<VertexId>&, int B)>;

/// Everything a zone's agents may read when planning a phase: the shared
/// input (G, X, B), their own zone, and the positions of their own group.
/// Planning functions accept only this struct, which is what keeps per-zone
/// plans independent of agents elsewhere.
struct AgentKnowledge {
  const Graph* g = nullptr;
  const std::vector<uint8_t>* exit_mask = nullptr;
  int B = 0;
  const Zone* zone = nullptr;
  std::vector<std::pair<AgentId, VertexId>> group_positions;  // sorted by agent
};

/// Tree-climb toward the zone center: move when the parent slot frees up,
/// ties on a shared parent go to the smaller current vertex id.
struct GroupingPlan {
  std::vector<StepMoves> steps;  // at most B entries; trailing steps empty
  std::vector<std::pair<AgentId, VertexId>> final_positions;
};

GroupingPlan plan_grouping(const AgentKnowledge& k);

/// A zone's complete decision for one phase, computed from AgentKnowledge
/// alone. Self-sufficient zones carry internal tracks; others carry the
/// grouping schedule plus the exclusive strategy from the grouped positions
/// (horizon 2B), or nullopt when none exists within the horizon.
struct ZonePhasePlan {
  bool self_sufficient = false;
  Strategy internal;             // bound to agent ids, starts at homebases
  GroupingPlan grouping;
  std::optional<Strategy> exclusive;  // locs[0] = post-grouping position
  std::string serialize(const Graph& g) const;
};

ZonePhasePlan plan_zone_phase(const AgentKnowledge& k);

struct ZonePhaseOutcome {
  int zone_id = -1;
  int agents = 0;
  int evacuated = 0;
  bool exclusive_missing = false;  // no strategy within the 2B horizon
  bool aborted = false;            // lost the landing arbitration
  bool completed = false;
};

struct PhaseOutcome {
  int color = 0;
  long long forward_start = 0;  // first global step index of the phase
  long long forward_end = 0;    // last forward step (= start + 3B - 1)
  long long backtrack_end = 0;  // last backtrack step (= start + 6B - 1)
  std::vector<ZonePhaseOutcome> zones;
};

struct EpochRecord {
  int epoch_index = 0;  // 1-based execution order
  int B = 0;
  int d = 0;            // colors used for the zone graph
  long long steps_consumed = 0;  // exactly 6 * d * B
  int evacuated = 0;
  std::vector<PhaseOutcome> phases;
};

struct EvacuationOptions {
  int start_B = 2;
  long long max_total_steps = 1ll << 40;  // guards a broken provider
  bool parallel_zone_graph = true;
};

struct RunResult {
  Trace trace;
  std::vector<EpochRecord> epochs;
  long long total_steps = 0;  // sum of 6 d_j B_j over executed epochs
};

/// One full attempt at the given B: zone graph, coloring, one phase per
/// color (3B forward + 3B backtrack each). Consumes exactly 6 d B steps of
/// the clock; afterwards every live agent is back at its attempt-start
/// position.
EpochRecord run_one_attempt(WorldState& world, Trace& trace,
                            const BPartition& partition, const Graph& g,
                            const std::vector<uint8_t>& exit_mask,
                            bool parallel_zone_graph = true);

/// The full distributed strategy: B = start_B, then double per epoch until
/// everyone is out. Throws InfeasibleError when some agent cannot reach an
/// exit at all.
RunResult evacuate(const Instance& inst, const PartitionProvider& provider,
                   const EvacuationOptions& opts = {});

}  // namespace devac
