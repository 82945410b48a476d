#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "devac/flow.hpp"
#include "devac/instance.hpp"
#include "devac/sim.hpp"

namespace devac {

/// Per-agent location sequence loc_0..loc_{s_i}; the last location is an
/// exit and no earlier one is.
struct AgentTrack {
  AgentId agent = -1;
  std::vector<VertexId> locs;
  int evacuation_step() const { return static_cast<int>(locs.size()) - 1; }
};

struct Strategy {
  std::vector<AgentTrack> tracks;  // sorted by agent id
  int length() const;
  std::string serialize(const Graph& g) const;
};

struct OptResult {
  int opt = 0;
  Strategy witness;
};

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

class TooLargeError : public std::runtime_error {
 public:
  explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};

/// Smallest horizon whose time-expanded max flow routes every agent,
/// found by doubling then binary search; witness comes from the flow
/// path decomposition at that horizon. Throws InfeasibleError when some
/// agent cannot reach any exit.
OptResult compute_opt(const Instance& inst);

/// Shortest strategy evacuating exactly the given agents (all exits
/// available), of length <= horizon, or nullopt when none exists within it.
/// `agents` pairs (agent id, current vertex); positions must be pairwise
/// distinct and off the exits.
std::optional<Strategy> exclusive_strategy(
    const Graph& g, const std::vector<uint8_t>& exit_mask,
    const std::vector<std::pair<AgentId, VertexId>>& agents, int horizon);

/// Independent oracle: breadth-first search over joint occupancy sets with
/// all legal simultaneous move combinations. Guarded to |V| <= 10, k <= 3
/// unless relax_guard (tests use slightly larger states).
int brute_force_opt(const Instance& inst, bool relax_guard = false);

/// Renders a strategy as a step-per-line trace (movers + evacuations).
Trace strategy_to_trace(const Strategy& s, const std::string& instance_name,
                        int agent_count);

/// True when every homebase can reach some exit with exit-avoiding interior.
bool feasible(const Instance& inst);

}  // namespace devac
