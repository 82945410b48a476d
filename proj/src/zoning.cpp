#include "devac/zoning.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace devac {

int ZoneTree::max_depth() const {
  int m = 0;
  for (int d : depths) m = std::max(m, d);
  return m;
}

void ZoneTree::build_lookup() const {
  if (lookup_.size() == order.size()) return;
  lookup_.clear();
  lookup_.reserve(order.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    lookup_.emplace_back(order[i], i);
  }
  std::sort(lookup_.begin(), lookup_.end());
}

int ZoneTree::index_of(VertexId v) const {
  build_lookup();
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                             std::make_pair(v, -1));
  if (it == lookup_.end() || it->first != v) return -1;
  return it->second;
}

VertexId ZoneTree::parent(VertexId v) const {
  int i = index_of(v);
  return i < 0 ? kNoVertex : parents[i];
}

int ZoneTree::depth(VertexId v) const {
  int i = index_of(v);
  return i < 0 ? -1 : depths[i];
}

ZoneTree build_zone_tree(const Graph& g, const std::vector<uint8_t>& allowed,
                         VertexId root) {
  if (!allowed[root]) throw std::invalid_argument("zone tree root not allowed");
  ZoneTree t;
  t.root = root;
  std::vector<int> depth(g.vertex_count(), -1);
  depth[root] = 0;
  t.order.push_back(root);
  t.parents.push_back(kNoVertex);
  t.depths.push_back(0);
  for (size_t head = 0; head < t.order.size(); ++head) {
    VertexId u = t.order[head];
    for (VertexId w : g.neighbors(u)) {
      if (!allowed[w] || depth[w] >= 0) continue;
      depth[w] = depth[u] + 1;
      t.order.push_back(w);
      t.parents.push_back(u);
      t.depths.push_back(depth[w]);
    }
  }
  return t;
}

FunnelPlan::FunnelPlan(std::vector<VertexId> path, std::vector<uint8_t> exit_at)
    : path_(std::move(path)), exit_at_(std::move(exit_at)) {
  int m = static_cast<int>(path_.size());
  if (static_cast<int>(exit_at_.size()) != m) {
    throw std::invalid_argument("funnel plan mask size mismatch");
  }
  std::vector<int> exits;
  for (int i = 0; i < m; ++i)
    if (exit_at_[i]) exits.push_back(i);
  if (exits.empty()) throw std::invalid_argument("funnel plan needs an exit");
  assigned_.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    if (exit_at_[i]) continue;
    // Nearest exit along the path; ties go to the smaller-coordinate side.
    int best = exits[0];
    for (int e : exits) {
      int de = std::abs(e - i), db = std::abs(best - i);
      if (de < db || (de == db && e < best)) best = e;
    }
    assigned_[i] = best;
  }
}

int FunnelPlan::length_bound() const {
  // Each exit serves at most its two feeding runs; entries are at least one
  // per step once started, so the run lengths bound the duration.
  return static_cast<int>(path_.size());
}

std::vector<PlanTrack> FunnelPlan::schedules(
    const std::vector<VertexId>& occupied) const {
  int m = static_cast<int>(path_.size());
  std::vector<int> pos_of(m, 0);  // occupancy by path index
  std::vector<int> agent_at(m, -1);
  std::vector<PlanTrack> tracks;
  for (VertexId v : occupied) {
    auto it = std::find(path_.begin(), path_.end(), v);
    if (it == path_.end() || exit_at_[it - path_.begin()]) {
      throw std::invalid_argument("occupied vertex outside funnel zone");
    }
    int idx = static_cast<int>(it - path_.begin());
    agent_at[idx] = static_cast<int>(tracks.size());
    tracks.push_back(PlanTrack{v, {v}});
  }
  // lodge per-exit alternation state: 0 = next contested entry goes to the
  // smaller-index side.
  std::vector<int> last_side(m, -1);  // -1 none, 0 left, 1 right
  int live = static_cast<int>(tracks.size());
  int guard = 2 * m + 4;
  while (live > 0 && guard-- > 0) {
    std::vector<int> next_agent_at(agent_at);
    // Resolve per destination exit; left side = smaller path index.
    std::vector<int> moved(tracks.size(), 0);
    for (int e = 0; e < m; ++e) {
      if (!exit_at_[e]) continue;
      int left = e - 1 >= 0 && agent_at[e - 1] >= 0 && assigned_[e - 1] == e
                     ? agent_at[e - 1]
                     : -1;
      int right = e + 1 < m && agent_at[e + 1] >= 0 && assigned_[e + 1] == e
                      ? agent_at[e + 1]
                      : -1;
      int enter = -1, side = -1;
      if (left >= 0 && right >= 0) {
        side = last_side[e] == 0 ? 1 : 0;
        enter = side == 0 ? left : right;
      } else if (left >= 0) {
        enter = left;
        side = 0;
      } else if (right >= 0) {
        enter = right;
        side = 1;
      }
      if (enter >= 0) {
        last_side[e] = side;
        moved[enter] = 1;
        int from = side == 0 ? e - 1 : e + 1;
        next_agent_at[from] = -1;
        tracks[enter].locs.push_back(path_[e]);
        --live;
      }
    }
    // March the rest toward their exits when the next slot frees up;
    // process each side of each exit from the front outward.
    for (int e = 0; e < m; ++e) {
      if (!exit_at_[e]) continue;
      for (int dir : {-1, +1}) {
        for (int idx = e + dir; idx >= 0 && idx < m; idx += dir) {
          if (exit_at_[idx] || assigned_[idx] != e) break;
          int a = agent_at[idx];
          if (a < 0 || moved[a]) continue;
          int ahead = idx - dir;  // one step toward e
          bool ahead_free =
              ahead == e ? false
                         : (agent_at[ahead] < 0 || (agent_at[ahead] >= 0 &&
                                                    moved[agent_at[ahead]]));
          if (ahead != e && ahead_free && next_agent_at[ahead] < 0) {
            moved[a] = 1;
            next_agent_at[idx] = -1;
            next_agent_at[ahead] = a;
            tracks[a].locs.push_back(path_[ahead]);
          }
        }
      }
    }
    // Agents that stayed put keep their position in the schedule.
    std::vector<uint8_t> live_agent(tracks.size(), 0);
    for (int idx = 0; idx < m; ++idx) {
      if (next_agent_at[idx] >= 0) live_agent[next_agent_at[idx]] = 1;
    }
    for (size_t a = 0; a < tracks.size(); ++a) {
      if (!moved[a] && live_agent[a]) tracks[a].locs.push_back(tracks[a].locs.back());
    }
    agent_at = next_agent_at;
  }
  if (live > 0) throw std::logic_error("funnel plan failed to drain the zone");
  return tracks;
}

std::string FunnelPlan::describe(const Graph& g) const {
  std::ostringstream out;
  out << "funnel";
  for (int i = 0; i < static_cast<int>(path_.size()); ++i) {
    out << " " << g.label(path_[i]) << (exit_at_[i] ? "*" : "");
  }
  out << "\n";
  return out.str();
}

std::vector<PlanTrack> PrivateExitPlan::schedules(
    const std::vector<VertexId>& occupied) const {
  std::vector<PlanTrack> tracks;
  for (VertexId v : occupied) {
    if (v != vertex_) throw std::invalid_argument("unexpected occupant");
    tracks.push_back(PlanTrack{v, {v, exit_}});
  }
  return tracks;
}

bool Zone::contains(VertexId v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

int ZoneGraph::max_degree() const {
  size_t m = 0;
  for (const auto& a : adj) m = std::max(m, a.size());
  return static_cast<int>(m);
}

int ZoneGraph::edge_count() const {
  size_t total = 0;
  for (const auto& a : adj) total += a.size();
  return static_cast<int>(total / 2);
}

bool zones_close(const Zone& z1, const Zone& z2, int B, const Graph& g,
                 const std::vector<uint8_t>& exit_mask) {
  std::vector<int> dist =
      exit_avoiding_distances_multi(g, exit_mask, z1.vertices, 2 * B);
  for (VertexId v : z2.vertices) {
    if (dist[v] >= 0 && dist[v] <= 2 * B) return true;
  }
  return false;
}

namespace {

std::vector<int> close_zones_from(const BPartition& p, int zi, const Graph& g,
                                  const std::vector<uint8_t>& exit_mask) {
  std::vector<int> dist = exit_avoiding_distances_multi(
      g, exit_mask, p.zones[zi].vertices, 2 * p.B);
  std::vector<uint8_t> hit(p.zones.size(), 0);
  for (VertexId v = 0; v < static_cast<VertexId>(dist.size()); ++v) {
    if (dist[v] >= 0 && dist[v] <= 2 * p.B) hit[p.zone_of[v]] = 1;
  }
  std::vector<int> out;
  for (int zj = 0; zj < static_cast<int>(p.zones.size()); ++zj) {
    if (zj != zi && hit[zj]) out.push_back(zj);
  }
  return out;
}

std::vector<std::vector<int>> symmetrize(std::vector<std::vector<int>> adj) {
  // Exit-avoiding distance is symmetric, but keep the output canonical and
  // robust by uniting both directions.
  int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      out[i].push_back(j);
      out[j].push_back(i);
    }
  }
  for (auto& a : out) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> closeness_adjacency_serial(
    const BPartition& p, const Graph& g, const std::vector<uint8_t>& exit_mask) {
  std::vector<std::vector<int>> adj(p.zones.size());
  for (int zi = 0; zi < static_cast<int>(p.zones.size()); ++zi) {
    adj[zi] = close_zones_from(p, zi, g, exit_mask);
  }
  return symmetrize(std::move(adj));
}

std::vector<std::vector<int>> closeness_adjacency_parallel(
    const BPartition& p, const Graph& g, const std::vector<uint8_t>& exit_mask) {
  std::vector<std::vector<int>> adj(p.zones.size());
  int zn = static_cast<int>(p.zones.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (int zi = 0; zi < zn; ++zi) {
    adj[zi] = close_zones_from(p, zi, g, exit_mask);
  }
  return symmetrize(std::move(adj));
}

ZoneGraph build_zone_graph(const BPartition& p, const Graph& g,
                           const std::vector<uint8_t>& exit_mask, bool parallel) {
  std::vector<std::vector<int>> close =
      parallel ? closeness_adjacency_parallel(p, g, exit_mask)
               : closeness_adjacency_serial(p, g, exit_mask);
  ZoneGraph zg;
  zg.adj.assign(p.zones.size(), {});
  for (int zi = 0; zi < static_cast<int>(p.zones.size()); ++zi) {
    if (p.zones[zi].self_sufficient) continue;
    for (int zj : close[zi]) {
      if (!p.zones[zj].self_sufficient) zg.adj[zi].push_back(zj);
    }
  }
  return zg;
}

Coloring greedy_coloring(const ZoneGraph& zg) {
  Coloring c;
  int n = static_cast<int>(zg.adj.size());
  c.color.assign(n, 0);
  for (int z = 0; z < n; ++z) {
    std::vector<uint8_t> used(n + 2, 0);
    for (int w : zg.adj[z]) {
      if (w < z && c.color[w] > 0) used[c.color[w]] = 1;
    }
    int col = 1;
    while (used[col]) ++col;
    c.color[z] = col;
    c.d = std::max(c.d, col);
  }
  if (n == 0) c.d = 1;
  return c;
}

namespace {

std::string check_internal_plan(const Zone& z, const Graph& g,
                                const std::vector<uint8_t>& exit_mask, int B);

}  // namespace

PartitionReport validate_partition(const BPartition& p, const Graph& g,
                                   const std::vector<uint8_t>& exit_mask) {
  PartitionReport rep;
  // Condition (i): disjoint cover of V.
  std::vector<int> owner(g.vertex_count(), -1);
  for (int zi = 0; zi < static_cast<int>(p.zones.size()); ++zi) {
    for (VertexId v : p.zones[zi].vertices) {
      if (v < 0 || v >= g.vertex_count()) {
        rep.violation = "zone vertex out of range";
        return rep;
      }
      if (owner[v] != -1) {
        rep.violation = "Condition (i): vertex " + g.label(v) +
                        " in zones " + std::to_string(owner[v]) + " and " +
                        std::to_string(zi);
        return rep;
      }
      owner[v] = zi;
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (owner[v] == -1) {
      rep.violation = "Condition (i): vertex " + g.label(v) + " uncovered";
      return rep;
    }
    if (p.zone_of.size() == static_cast<size_t>(g.vertex_count()) &&
        p.zone_of[v] != owner[v]) {
      rep.violation = "zone_of index disagrees with zone vertex sets";
      return rep;
    }
  }
  for (int zi = 0; zi < static_cast<int>(p.zones.size()); ++zi) {
    const Zone& z = p.zones[zi];
    int non_exit = 0;
    for (VertexId v : z.vertices)
      if (!exit_mask[v]) ++non_exit;
    if (!z.tree.empty()) {
      // Condition (ii): tree covers the non-exit part with depth <= B.
      if (z.tree.size() != non_exit) {
        rep.violation = "Condition (ii): zone " + std::to_string(zi) +
                        " tree does not cover V_i minus X";
        return rep;
      }
      for (int i = 0; i < z.tree.size(); ++i) {
        VertexId v = z.tree.order[i];
        if (!z.contains(v) || exit_mask[v]) {
          rep.violation = "Condition (ii): tree vertex outside zone";
          return rep;
        }
        if (z.tree.depths[i] > p.B) {
          rep.violation = "Condition (ii): zone " + std::to_string(zi) +
                          " tree depth " + std::to_string(z.tree.depths[i]) +
                          " > B=" + std::to_string(p.B);
          return rep;
        }
        VertexId par = z.tree.parents[i];
        if (par != kNoVertex && !g.has_edge(v, par)) {
          rep.violation = "Condition (ii): tree parent not a graph edge";
          return rep;
        }
      }
    } else if (!z.self_sufficient && non_exit > 0) {
      rep.violation = "zone " + std::to_string(zi) +
                      " is not self-sufficient and has no spanning tree";
      return rep;
    }
    if (z.self_sufficient) {
      if (!z.plan) {
        rep.violation = "self-sufficient zone " + std::to_string(zi) +
                        " lacks an internal plan";
        return rep;
      }
      std::string err = check_internal_plan(z, g, exit_mask, p.B);
      if (!err.empty()) {
        rep.violation = "zone " + std::to_string(zi) + ": " + err;
        return rep;
      }
    }
  }
  rep.ok = true;
  return rep;
}

namespace {

std::string simulate_plan_subset(const Zone& z, const Graph& g,
                                 const std::vector<uint8_t>& exit_mask, int B,
                                 const std::vector<VertexId>& occupied) {
  std::vector<PlanTrack> tracks = z.plan->schedules(occupied);
  if (tracks.size() != occupied.size()) return "plan dropped an occupant";
  int makespan = 0;
  for (const auto& t : tracks) {
    if (t.locs.empty() || t.locs.front() != t.start) return "track start mismatch";
    if (!z.contains(t.start)) return "track starts outside zone";
    for (size_t i = 0; i < t.locs.size(); ++i) {
      VertexId v = t.locs[i];
      if (!z.contains(v)) return "track leaves the zone";
      bool last = i + 1 == t.locs.size();
      if (exit_mask[v] != (last ? 1 : 0)) {
        return last ? "track does not end at an exit" : "track crosses an exit";
      }
      if (i > 0 && t.locs[i] != t.locs[i - 1] &&
          !g.has_edge(t.locs[i - 1], t.locs[i])) {
        return "track uses a non-edge";
      }
    }
    makespan = std::max(makespan, static_cast<int>(t.locs.size()) - 1);
  }
  if (makespan > B) {
    return "plan length " + std::to_string(makespan) + " > B=" + std::to_string(B);
  }
  // Joint collision freedom: distinct end-of-step positions, with agents on
  // exits removed at the step they arrive.
  for (int s = 0; s <= makespan; ++s) {
    std::vector<VertexId> ends;
    for (const auto& t : tracks) {
      if (s < static_cast<int>(t.locs.size())) {
        ends.push_back(t.locs[s]);
      }
    }
    std::sort(ends.begin(), ends.end());
    if (std::adjacent_find(ends.begin(), ends.end()) != ends.end()) {
      return "two tracks share a vertex at step " + std::to_string(s);
    }
  }
  return "";
}

std::string check_internal_plan(const Zone& z, const Graph& g,
                                const std::vector<uint8_t>& exit_mask, int B) {
  std::vector<VertexId> non_exit;
  for (VertexId v : z.vertices)
    if (!exit_mask[v]) non_exit.push_back(v);
  std::string err = simulate_plan_subset(z, g, exit_mask, B, non_exit);
  if (!err.empty()) return "all-occupied certificate: " + err;
  Rng rng(0x5eedULL * (z.id + 1));
  for (int trial = 0; trial < 32; ++trial) {
    std::vector<VertexId> subset;
    for (VertexId v : non_exit) {
      if (rng.below(2)) subset.push_back(v);
    }
    err = simulate_plan_subset(z, g, exit_mask, B, subset);
    if (!err.empty()) {
      return "random-subset certificate: " + err;
    }
  }
  return "";
}

}  // namespace

BPartition generic_partition_provider(const Graph& g,
                                      const std::vector<VertexId>& exits,
                                      int B) {
  std::vector<uint8_t> exit_mask = make_mask(g, exits);
  BPartition p;
  p.B = B;
  p.zone_of.assign(g.vertex_count(), -1);
  // Claim pass: each non-exit vertex, in ascending id order, takes its
  // smallest unclaimed adjacent exit. A claimed exit joins the claimer's
  // zone so the one-move plan is internal.
  std::vector<VertexId> claimed_by(g.vertex_count(), kNoVertex);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (exit_mask[v]) continue;
    for (VertexId w : g.neighbors(v)) {
      if (exit_mask[w] && claimed_by[w] == kNoVertex) {
        claimed_by[w] = v;
        break;
      }
    }
  }
  std::vector<VertexId> claim_of(g.vertex_count(), kNoVertex);
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    if (claimed_by[x] != kNoVertex) claim_of[claimed_by[x]] = x;
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (exit_mask[v] && claimed_by[v] != kNoVertex) continue;  // in claimer's zone
    Zone z;
    z.id = static_cast<int>(p.zones.size());
    z.vertices = {v};
    z.center = v;
    if (exit_mask[v]) {
      z.self_sufficient = true;
      z.plan = std::make_shared<EmptyPlan>();
    } else {
      std::vector<uint8_t> allowed(g.vertex_count(), 0);
      allowed[v] = 1;
      z.tree = build_zone_tree(g, allowed, v);
      if (claim_of[v] != kNoVertex) {
        z.vertices.push_back(claim_of[v]);
        std::sort(z.vertices.begin(), z.vertices.end());
        z.self_sufficient = true;
        z.plan = std::make_shared<PrivateExitPlan>(v, claim_of[v]);
      }
    }
    for (VertexId zv : z.vertices) p.zone_of[zv] = z.id;
    p.zones.push_back(std::move(z));
  }
  return p;
}

}  // namespace devac
