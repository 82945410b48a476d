#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "devac/graph.hpp"
#include "devac/instance.hpp"

namespace devac {

/// Compact rooted spanning tree of a zone's non-exit part.
struct ZoneTree {
  VertexId root = kNoVertex;
  std::vector<VertexId> order;     // BFS order, root first
  std::vector<VertexId> parents;   // aligned with order (kNoVertex at root)
  std::vector<int> depths;         // aligned with order

  bool empty() const { return order.empty(); }
  int size() const { return static_cast<int>(order.size()); }
  int max_depth() const;
  int index_of(VertexId v) const;  // -1 when absent
  VertexId parent(VertexId v) const;
  int depth(VertexId v) const;

 private:
  mutable std::vector<std::pair<VertexId, int>> lookup_;  // sorted cache
  void build_lookup() const;
};

/// BFS tree over `allowed` vertices using graph adjacency restricted to
/// `allowed`, neighbors in ascending id order.
ZoneTree build_zone_tree(const Graph& g, const std::vector<uint8_t>& allowed,
                         VertexId root);

/// One agent's scripted route inside a zone: locs[0] is the start vertex,
/// the last loc is the evacuation exit.
struct PlanTrack {
  VertexId start = kNoVertex;
  std::vector<VertexId> locs;
};

/// Internal evacuation plan of a self-sufficient zone. schedules() yields a
/// jointly collision-free route set for any occupied subset of the zone's
/// non-exit vertices; routes never leave the zone and finish within the
/// length bound.
class InternalPlan {
 public:
  virtual ~InternalPlan() = default;
  virtual std::vector<PlanTrack> schedules(
      const std::vector<VertexId>& occupied) const = 0;
  virtual int length_bound() const = 0;
  virtual std::string describe(const Graph& g) const = 0;
};

/// Funnel plan for a path-shaped zone (a grid row or a column segment).
/// Every exit-free run feeds its statically assigned exit; opposite sides of
/// an exit alternate entries, smaller-coordinate side first.
class FunnelPlan : public InternalPlan {
 public:
  /// `path` lists the zone's vertices in path order; `exit_at[i]` marks
  /// path[i] as an exit. Every exit-free run must have an adjacent exit.
  FunnelPlan(std::vector<VertexId> path, std::vector<uint8_t> exit_at);

  std::vector<PlanTrack> schedules(
      const std::vector<VertexId>& occupied) const override;
  int length_bound() const override;
  std::string describe(const Graph& g) const override;

  /// Exit fed by the position `idx`; -1 for exit positions themselves.
  int assigned_exit_index(int idx) const { return assigned_[idx]; }

 private:
  std::vector<VertexId> path_;
  std::vector<uint8_t> exit_at_;
  std::vector<int> assigned_;  // position -> index of its exit in path_
};

/// Plan of a zone with no non-exit vertices; vacuously valid.
class EmptyPlan : public InternalPlan {
 public:
  std::vector<PlanTrack> schedules(const std::vector<VertexId>&) const override {
    return {};
  }
  int length_bound() const override { return 0; }
  std::string describe(const Graph&) const override { return "empty\n"; }
};

/// Single vertex with a privately claimed adjacent exit: one move.
class PrivateExitPlan : public InternalPlan {
 public:
  PrivateExitPlan(VertexId vertex, VertexId exit) : vertex_(vertex), exit_(exit) {}
  std::vector<PlanTrack> schedules(
      const std::vector<VertexId>& occupied) const override;
  int length_bound() const override { return 1; }
  std::string describe(const Graph& g) const override {
    return "private-exit " + g.label(vertex_) + "->" + g.label(exit_) + "\n";
  }

 private:
  VertexId vertex_;
  VertexId exit_;
};

struct Zone {
  int id = -1;
  std::vector<VertexId> vertices;  // sorted ascending
  VertexId center = kNoVertex;
  ZoneTree tree;                   // over vertices minus exits; may be empty
  bool self_sufficient = false;
  std::shared_ptr<const InternalPlan> plan;  // set when self_sufficient

  bool contains(VertexId v) const;
};

struct BPartition {
  int B = 0;
  std::vector<Zone> zones;
  std::vector<int> zone_of;  // vertex -> zone index
};

struct ZoneGraph {
  std::vector<std::vector<int>> adj;  // sorted neighbor lists
  int max_degree() const;
  int edge_count() const;
};

struct Coloring {
  std::vector<int> color;  // zone -> color in 1..d
  int d = 0;
};

/// Eq-style closeness: some z in Z and z' in Z' with exit-avoiding distance
/// <= 2B (inclusive).
bool zones_close(const Zone& z1, const Zone& z2, int B, const Graph& g,
                 const std::vector<uint8_t>& exit_mask);

/// Adjacency of the closeness relation over all zones (before the
/// self-sufficiency filter). Serial reference implementation.
std::vector<std::vector<int>> closeness_adjacency_serial(
    const BPartition& p, const Graph& g, const std::vector<uint8_t>& exit_mask);

/// OpenMP variant of the same kernel; output is identical to the serial
/// reference (per-zone searches are independent).
std::vector<std::vector<int>> closeness_adjacency_parallel(
    const BPartition& p, const Graph& g, const std::vector<uint8_t>& exit_mask);

/// Zone graph: edges between close pairs where neither is self-sufficient.
ZoneGraph build_zone_graph(const BPartition& p, const Graph& g,
                           const std::vector<uint8_t>& exit_mask,
                           bool parallel = true);

/// First-fit over zones in ascending id order; colors 1..d.
Coloring greedy_coloring(const ZoneGraph& zg);

struct PartitionReport {
  bool ok = false;
  std::string violation;  // first violation when !ok
};

/// Checks disjoint cover, tree shape and depth <= B, and self-sufficiency
/// certificates (all-occupied plus 32 seeded random occupancy subsets).
PartitionReport validate_partition(const BPartition& p, const Graph& g,
                                   const std::vector<uint8_t>& exit_mask);

/// Fallback provider for arbitrary graphs: singleton zones; a vertex is
/// self-sufficient when it claims a private adjacent exit (ascending id
/// claim order); exits are self-sufficient singletons.
BPartition generic_partition_provider(const Graph& g,
                                      const std::vector<VertexId>& exits,
                                      int B);

}  // namespace devac
