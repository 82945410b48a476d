#pragma once

#include <cstdint>
#include <vector>

#include "devac/graph.hpp"

namespace devac {

/// Unit-capacity flow network with Dinic's algorithm. Arc order is fixed by
/// insertion, and augmentation follows shortest augmenting paths, so results
/// are deterministic.
class FlowNetwork {
 public:
  struct Arc {
    int to;
    int rev;      // index of the reverse arc in arcs_[to]
    int cap;      // residual capacity
    int init;     // initial capacity; 0 marks a reverse arc
  };

  explicit FlowNetwork(int node_count)
      : arcs_(node_count), level_(node_count), iter_(node_count) {}

  int node_count() const { return static_cast<int>(arcs_.size()); }

  /// Returns the index of the forward arc within arcs()[from].
  int add_arc(int from, int to, int cap);

  int max_flow(int source, int sink);

  const std::vector<Arc>& arcs(int node) const { return arcs_[node]; }

  /// Flow pushed through an arc; never positive for reverse arcs.
  int arc_flow(int from, int arc_index) const {
    const Arc& a = arcs_[from][arc_index];
    return a.init - a.cap;
  }

 private:
  bool bfs_levels(int source, int sink);
  int dfs_augment(int v, int sink, int limit);

  std::vector<std::vector<Arc>> arcs_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

/// Time-expanded evacuation network. Layer nodes (v, t) for t = 0..T are
/// split in/out with a unit arc, so at most one agent occupies a vertex at
/// any step end. Exit-layer nodes route only to the sink (t >= 1), which
/// also caps evacuations per exit per step at one.
class TimeExpandedNetwork {
 public:
  TimeExpandedNetwork(const Graph& g, const std::vector<uint8_t>& exit_mask,
                      const std::vector<VertexId>& starts, int horizon);

  int max_flow();

  /// Decomposes an integral max flow into vertex-time-disjoint paths,
  /// ordered by source arc insertion (= ascending start vertex order).
  /// Each path is the location sequence loc_0..loc_s with loc_s an exit.
  std::vector<std::vector<VertexId>> decompose_paths() const;

  int horizon() const { return horizon_; }

 private:
  int node_in(VertexId v, int t) const { return 2 * (t * nv_ + v) + 0; }
  int node_out(VertexId v, int t) const { return 2 * (t * nv_ + v) + 1; }

  const Graph* g_;
  std::vector<uint8_t> exit_mask_;
  std::vector<VertexId> starts_;
  int horizon_;
  int nv_;
  int source_;
  int sink_;
  FlowNetwork net_;
};

}  // namespace devac
