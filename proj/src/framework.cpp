#include "devac/framework.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace devac {

GroupingPlan plan_grouping(const AgentKnowledge& k) {
  const Zone& zone = *k.zone;
  GroupingPlan plan;
  std::map<VertexId, AgentId> at;
  for (const auto& [a, v] : k.group_positions) {
    if (zone.tree.index_of(v) < 0) {
      throw std::invalid_argument("grouping agent outside the zone tree");
    }
    at[v] = a;
  }
  for (int step = 0; step < k.B; ++step) {
    // Decide in (depth, vertex id) order so a parent's decision precedes its
    // children and contested parents go to the smaller current vertex id.
    std::vector<std::pair<int, VertexId>> occ;
    occ.reserve(at.size());
    for (const auto& [v, a] : at) occ.emplace_back(zone.tree.depth(v), v);
    std::sort(occ.begin(), occ.end());
    std::set<VertexId> claimed;
    std::set<AgentId> moving;
    std::vector<std::pair<AgentId, VertexId>> stepmoves;
    for (const auto& [d, v] : occ) {
      if (d == 0) continue;  // the center occupant stays
      VertexId p = zone.tree.parent(v);
      auto it = at.find(p);
      bool frees = it == at.end() || moving.count(it->second) > 0;
      if (frees && !claimed.count(p)) {
        claimed.insert(p);
        moving.insert(at[v]);
        stepmoves.emplace_back(at[v], p);
      }
    }
    if (stepmoves.empty()) break;  // fixpoint: the rule is position-driven
    for (const auto& [a, p] : stepmoves) {
      for (auto it = at.begin(); it != at.end(); ++it) {
        if (it->second == a) {
          at.erase(it);
          break;
        }
      }
    }
    for (const auto& [a, p] : stepmoves) at[p] = a;
    std::sort(stepmoves.begin(), stepmoves.end());
    StepMoves m;
    m.moves = std::move(stepmoves);
    plan.steps.push_back(std::move(m));
  }
  for (const auto& [v, a] : at) plan.final_positions.emplace_back(a, v);
  std::sort(plan.final_positions.begin(), plan.final_positions.end());
  return plan;
}

ZonePhasePlan plan_zone_phase(const AgentKnowledge& k) {
  ZonePhasePlan zp;
  const Zone& zone = *k.zone;
  if (zone.self_sufficient) {
    zp.self_sufficient = true;
    std::vector<VertexId> occupied;
    std::map<VertexId, AgentId> who;
    for (const auto& [a, v] : k.group_positions) {
      occupied.push_back(v);
      who[v] = a;
    }
    std::sort(occupied.begin(), occupied.end());
    for (const auto& t : zone.plan->schedules(occupied)) {
      AgentTrack at;
      at.agent = who.at(t.start);
      at.locs = t.locs;
      zp.internal.tracks.push_back(std::move(at));
    }
    std::sort(zp.internal.tracks.begin(), zp.internal.tracks.end(),
              [](const AgentTrack& x, const AgentTrack& y) {
                return x.agent < y.agent;
              });
  } else {
    zp.grouping = plan_grouping(k);
    zp.exclusive = exclusive_strategy(*k.g, *k.exit_mask,
                                      zp.grouping.final_positions, 2 * k.B);
  }
  return zp;
}

std::string ZonePhasePlan::serialize(const Graph& g) const {
  std::ostringstream out;
  if (self_sufficient) {
    out << "internal\n" << internal.serialize(g);
    return out.str();
  }
  out << "grouping\n";
  for (size_t s = 0; s < grouping.steps.size(); ++s) {
    out << s + 1;
    for (const auto& [a, v] : grouping.steps[s].moves) {
      out << " " << a << ":" << g.label(v);
    }
    out << "\n";
  }
  out << "positions";
  for (const auto& [a, v] : grouping.final_positions) {
    out << " " << a << ":" << g.label(v);
  }
  out << "\n";
  if (exclusive) {
    out << "exclusive\n" << exclusive->serialize(g);
  } else {
    out << "exclusive none\n";
  }
  return out.str();
}

namespace {

struct MoveRec {
  AgentId body;
  VertexId from;
  VertexId to;
};

/// Applies one step, records it in the trace and the phase move log.
std::vector<AgentId> apply_recorded(WorldState& world, Trace& trace,
                                    StepMoves moves,
                                    std::vector<std::vector<MoveRec>>* phase_log) {
  std::sort(moves.moves.begin(), moves.moves.end());
  std::vector<MoveRec> recs;
  recs.reserve(moves.moves.size());
  for (const auto& [a, v] : moves.moves) {
    recs.push_back(MoveRec{a, world.position(a), v});
  }
  std::vector<AgentId> evacuated;
  auto err = world.apply_step(moves, &evacuated);
  if (err) {
    throw std::logic_error("internal engine violation at step " +
                           std::to_string(err->step) + ": " + err->message);
  }
  trace.ensure_step(world.step());
  trace.steps[world.step() - 1] = std::move(moves);
  trace.evacs[world.step() - 1] = evacuated;
  if (phase_log) phase_log->push_back(std::move(recs));
  return evacuated;
}

/// Execution state of one planned agent during the exclusive window.
/// sigma[0] is the body's vertex; sigma.back() is the plan's current
/// virtual position. Size one means the body is on schedule.
struct LivePlan {
  int zone_list_idx = -1;  // index into the phase's active zone array
  int zone_id = -1;
  AgentId planned_agent = -1;
  const std::vector<VertexId>* locs = nullptr;
  int virt = 0;
  AgentId body = -1;
  std::vector<VertexId> sigma;
  bool done = false;
};

struct ActiveZone {
  int zone_index = -1;  // into partition.zones
  ZonePhasePlan plan;
  ZonePhaseOutcome* outcome = nullptr;
  bool aborted = false;
};

void update_sigma(LivePlan& p, VertexId target) {
  auto it = std::find(p.sigma.begin(), p.sigma.end(), target);
  if (it != p.sigma.end()) {
    p.sigma.erase(it + 1, p.sigma.end());
  } else {
    p.sigma.push_back(target);
  }
}

}  // namespace

EpochRecord run_one_attempt(WorldState& world, Trace& trace,
                            const BPartition& partition, const Graph& g,
                            const std::vector<uint8_t>& exit_mask,
                            bool parallel_zone_graph) {
  const int B = partition.B;
  ZoneGraph zg = build_zone_graph(partition, g, exit_mask, parallel_zone_graph);
  Coloring coloring = greedy_coloring(zg);

  EpochRecord rec;
  rec.B = B;
  rec.d = coloring.d;
  long long attempt_start = world.step();

  for (int color = 1; color <= coloring.d; ++color) {
    PhaseOutcome ph;
    ph.color = color;
    ph.forward_start = world.step() + 1;

    // Collect live agents per active zone; at a phase start every live
    // agent stands at its homebase, so its zone is the homebase's zone.
    std::map<int, std::vector<std::pair<AgentId, VertexId>>> members;
    for (AgentId a = 0; a < world.agent_count(); ++a) {
      if (world.evacuated(a)) continue;
      int zi = partition.zone_of[world.position(a)];
      if (coloring.color[zi] == color) members[zi].emplace_back(a, world.position(a));
    }
    std::vector<ActiveZone> active;
    for (auto& [zi, agents] : members) {
      std::sort(agents.begin(), agents.end());
      AgentKnowledge k;
      k.g = &g;
      k.exit_mask = &exit_mask;
      k.B = B;
      k.zone = &partition.zones[zi];
      k.group_positions = agents;
      ActiveZone az;
      az.zone_index = zi;
      az.plan = plan_zone_phase(k);
      active.push_back(std::move(az));
      ZonePhaseOutcome zo;
      zo.zone_id = partition.zones[zi].id;
      zo.agents = static_cast<int>(agents.size());
      zo.exclusive_missing = !active.back().plan.self_sufficient &&
                             !active.back().plan.exclusive.has_value();
      ph.zones.push_back(zo);
    }

    std::vector<std::vector<MoveRec>> phase_log;

    // --- window 1: internal strategies and grouping, B steps ---
    for (int q = 1; q <= B; ++q) {
      StepMoves moves;
      for (const ActiveZone& az : active) {
        if (az.plan.self_sufficient) {
          for (const auto& t : az.plan.internal.tracks) {
            if (q < static_cast<int>(t.locs.size()) && t.locs[q] != t.locs[q - 1]) {
              moves.moves.emplace_back(t.agent, t.locs[q]);
            }
          }
        } else if (q <= static_cast<int>(az.plan.grouping.steps.size())) {
          for (const auto& mv : az.plan.grouping.steps[q - 1].moves) {
            moves.moves.push_back(mv);
          }
        }
      }
      auto evacuated = apply_recorded(world, trace, std::move(moves), &phase_log);
      for (size_t i = 0; i < active.size(); ++i) {
        if (!active[i].plan.self_sufficient) continue;
        for (AgentId a : evacuated) {
          for (const auto& t : active[i].plan.internal.tracks) {
            if (t.agent == a) ++ph.zones[i].evacuated;
          }
        }
      }
    }
    // Self-sufficient zones must be empty now; their certificates bound the
    // plans to B steps.
    for (size_t i = 0; i < active.size(); ++i) {
      if (!active[i].plan.self_sufficient) continue;
      for (const auto& t : active[i].plan.internal.tracks) {
        if (!world.evacuated(t.agent)) {
          throw std::logic_error("self-sufficient zone failed to drain in B steps");
        }
      }
      ph.zones[i].completed = true;
    }

    // --- window 2: exclusive strategies, 2B steps ---
    std::vector<LivePlan> plans;
    std::vector<int> owner_of_body(world.agent_count(), -1);
    for (size_t i = 0; i < active.size(); ++i) {
      ActiveZone& az = active[i];
      if (az.plan.self_sufficient || !az.plan.exclusive) continue;
      for (const auto& t : az.plan.exclusive->tracks) {
        LivePlan lp;
        lp.zone_list_idx = static_cast<int>(i);
        lp.zone_id = partition.zones[az.zone_index].id;
        lp.planned_agent = t.agent;
        lp.locs = &t.locs;
        lp.body = t.agent;
        lp.sigma = {t.locs[0]};
        if (world.position(t.agent) != t.locs[0]) {
          throw std::logic_error("exclusive plan start disagrees with world");
        }
        owner_of_body[t.agent] = static_cast<int>(plans.size());
        plans.push_back(std::move(lp));
      }
    }
    std::sort(plans.begin(), plans.end(), [](const LivePlan& a, const LivePlan& b) {
      return std::tie(a.zone_id, a.planned_agent) < std::tie(b.zone_id, b.planned_agent);
    });
    for (int i = 0; i < static_cast<int>(plans.size()); ++i) {
      owner_of_body[plans[i].body] = i;
    }

    for (int r = 1; r <= 2 * B; ++r) {
      // Virtual positions advance along the plan; landing conflicts between
      // zones are arbitrated by zone id, the loser aborting its phase.
      bool changed = true;
      while (changed) {
        changed = false;
        std::map<VertexId, std::vector<int>> intents;
        for (int pi = 0; pi < static_cast<int>(plans.size()); ++pi) {
          LivePlan& p = plans[pi];
          if (p.done || active[p.zone_list_idx].aborted) continue;
          int idx = std::min<int>(r, static_cast<int>(p.locs->size()) - 1);
          intents[(*p.locs)[idx]].push_back(pi);
        }
        for (auto& [v, list] : intents) {
          if (list.size() < 2) continue;
          int win = list[0];
          for (int pi : list) {
            if (plans[pi].zone_id < plans[win].zone_id) win = pi;
          }
          for (int pi : list) {
            if (plans[pi].zone_id == plans[win].zone_id && pi != win) {
              throw std::logic_error("one zone planned two agents on a vertex");
            }
            if (pi != win) {
              int zi = plans[pi].zone_list_idx;
              active[zi].aborted = true;
              ph.zones[zi].aborted = true;
              // The losing zone's agents idle until backtrack; their bodies
              // are plain obstacles from here on, skippable like idle ones.
              for (LivePlan& q : plans) {
                if (q.zone_list_idx == zi && !q.done) owner_of_body[q.body] = -1;
              }
              changed = true;
            }
          }
        }
      }
      for (LivePlan& p : plans) {
        if (p.done || active[p.zone_list_idx].aborted) continue;
        p.virt = std::min<int>(r, static_cast<int>(p.locs->size()) - 1);
        update_sigma(p, (*p.locs)[p.virt]);
      }

      // Physical realization: chains through idle runs first, then
      // follow-moves behind other live bodies resolved as a fixpoint.
      StepMoves moves;
      std::set<AgentId> locked;
      std::set<VertexId> claimed;
      std::vector<int> follow;  // plan indices waiting on a live body
      for (int pi = 0; pi < static_cast<int>(plans.size()); ++pi) {
        LivePlan& p = plans[pi];
        if (p.done || active[p.zone_list_idx].aborted || p.sigma.size() < 2) continue;
        if (locked.count(p.body)) continue;
        int limit = -1;
        bool blocked = false;
        for (int idx = 1; idx < static_cast<int>(p.sigma.size()); ++idx) {
          VertexId v = p.sigma[idx];
          AgentId occ = world.occupant(v);
          if (occ < 0) {
            if (claimed.count(v)) blocked = true;
            else limit = idx;
            break;
          }
          if (owner_of_body[occ] >= 0 || locked.count(occ)) {
            // A live or already-moving body ahead: wait, or queue behind it
            // when it is the immediate neighbor (it may vacate this step).
            if (idx == 1) follow.push_back(pi);
            blocked = true;
            break;
          }
        }
        if (blocked || limit < 0) continue;
        // Chain shift: bodies at sigma[0..limit-1] each advance one edge;
        // the plan rides to sigma[limit] with the landing body.
        AgentId landing_body = p.body;
        for (int idx = 0; idx < limit; ++idx) {
          AgentId b = idx == 0 ? p.body : world.occupant(p.sigma[idx]);
          moves.moves.emplace_back(b, p.sigma[idx + 1]);
          locked.insert(b);
          claimed.insert(p.sigma[idx + 1]);
          landing_body = b;
        }
        owner_of_body[p.body] = -1;
        p.body = landing_body;
        owner_of_body[landing_body] = pi;
        p.sigma.erase(p.sigma.begin(), p.sigma.begin() + limit);
      }
      // Fixpoint for moves onto vertices other live bodies are leaving.
      std::set<int> pending(follow.begin(), follow.end());
      bool stable = false;
      std::map<VertexId, int> follow_claim;
      while (!stable) {
        stable = true;
        follow_claim.clear();
        for (int pi : pending) {
          VertexId tgt = plans[pi].sigma[1];
          if (!follow_claim.count(tgt)) follow_claim[tgt] = pi;
        }
        std::vector<int> drop;
        for (int pi : pending) {
          VertexId tgt = plans[pi].sigma[1];
          AgentId occ = world.occupant(tgt);
          bool occ_moves = locked.count(occ) > 0;
          if (!occ_moves && occ >= 0 && owner_of_body[occ] >= 0) {
            int qi = owner_of_body[occ];
            occ_moves = pending.count(qi) > 0;
          }
          if (!occ_moves || claimed.count(tgt) || follow_claim[tgt] != pi) {
            drop.push_back(pi);
          }
        }
        for (int pi : drop) {
          pending.erase(pi);
          stable = false;
        }
      }
      for (int pi : pending) {
        LivePlan& p = plans[pi];
        moves.moves.emplace_back(p.body, p.sigma[1]);
        p.sigma.erase(p.sigma.begin());
      }

      auto evacuated = apply_recorded(world, trace, std::move(moves), &phase_log);
      for (AgentId a : evacuated) {
        int pi = owner_of_body[a];
        if (pi < 0) {
          throw std::logic_error("a body without a plan entered an exit");
        }
        plans[pi].done = true;
        owner_of_body[a] = -1;
        ++ph.zones[plans[pi].zone_list_idx].evacuated;
      }
    }
    for (size_t i = 0; i < active.size(); ++i) {
      if (active[i].plan.self_sufficient) continue;
      bool all_out = true;
      for (const auto& [a, v] : active[i].plan.grouping.final_positions) {
        if (!world.evacuated(a)) all_out = false;
      }
      ph.zones[i].completed = all_out;
    }
    ph.forward_end = world.step();

    // --- backtrack window: the forward prefix replayed in reverse ---
    int forward_len = static_cast<int>(phase_log.size());
    for (int q = 1; q <= 3 * B; ++q) {
      StepMoves moves;
      int f = forward_len - q;
      if (f >= 0) {
        for (const MoveRec& mv : phase_log[f]) {
          if (!world.evacuated(mv.body)) {
            moves.moves.emplace_back(mv.body, mv.from);
          }
        }
      }
      auto evacuated = apply_recorded(world, trace, std::move(moves), nullptr);
      if (!evacuated.empty()) {
        throw std::logic_error("backtracking stepped onto an exit");
      }
    }
    ph.backtrack_end = world.step();
    for (const auto& zo : ph.zones) rec.evacuated += zo.evacuated;
    rec.phases.push_back(std::move(ph));
  }

  rec.steps_consumed = 6ll * coloring.d * B;
  if (world.step() - attempt_start != rec.steps_consumed) {
    throw std::logic_error("attempt step accounting is off");
  }
  return rec;
}

RunResult evacuate(const Instance& inst, const PartitionProvider& provider,
                   const EvacuationOptions& opts) {
  std::string err = inst.check();
  if (!err.empty()) throw std::invalid_argument(err);
  RunResult result;
  result.trace.agent_count = inst.agent_count();
  if (inst.homebases.empty()) return result;
  if (!feasible(inst)) {
    throw InfeasibleError("some agent cannot reach any exit");
  }
  std::vector<uint8_t> exit_mask = inst.exit_mask();
  WorldState world(inst.g, inst.exits, inst.homebases);
  int B = std::max(2, opts.start_B);
  int epoch = 1;
  while (world.live_count() > 0) {
    BPartition partition = provider(inst.g, inst.exits, B);
    if (partition.B != B) throw std::logic_error("provider ignored B");
    EpochRecord rec = run_one_attempt(world, result.trace, partition, inst.g,
                                      exit_mask, opts.parallel_zone_graph);
    rec.epoch_index = epoch++;
    result.total_steps += rec.steps_consumed;
    result.epochs.push_back(std::move(rec));
    if (result.total_steps > opts.max_total_steps) {
      throw std::logic_error("evacuation exceeded the step cap; partition "
                             "provider is likely broken");
    }
    if (B > (1 << 29)) {
      throw std::logic_error("B grew past 2^29 without terminating");
    }
    B *= 2;
  }
  return result;
}

}  // namespace devac
