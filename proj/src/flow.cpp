#include "devac/flow.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace devac {

int FlowNetwork::add_arc(int from, int to, int cap) {
  int fwd = static_cast<int>(arcs_[from].size());
  int bwd = static_cast<int>(arcs_[to].size());
  arcs_[from].push_back(Arc{to, bwd, cap, cap});
  arcs_[to].push_back(Arc{from, fwd, 0, 0});
  return fwd;
}

bool FlowNetwork::bfs_levels(int source, int sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::deque<int> queue;
  level_[source] = 0;
  queue.push_back(source);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const Arc& a : arcs_[v]) {
      if (a.cap > 0 && level_[a.to] < 0) {
        level_[a.to] = level_[v] + 1;
        queue.push_back(a.to);
      }
    }
  }
  return level_[sink] >= 0;
}

int FlowNetwork::dfs_augment(int v, int sink, int limit) {
  if (v == sink) return limit;
  for (int& i = iter_[v]; i < static_cast<int>(arcs_[v].size()); ++i) {
    Arc& a = arcs_[v][i];
    if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
    int pushed = dfs_augment(a.to, sink, std::min(limit, a.cap));
    if (pushed > 0) {
      a.cap -= pushed;
      arcs_[a.to][a.rev].cap += pushed;
      return pushed;
    }
  }
  return 0;
}

int FlowNetwork::max_flow(int source, int sink) {
  int total = 0;
  while (bfs_levels(source, sink)) {
    std::fill(iter_.begin(), iter_.end(), 0);
    while (int pushed = dfs_augment(source, sink, 1 << 30)) total += pushed;
  }
  return total;
}

TimeExpandedNetwork::TimeExpandedNetwork(const Graph& g,
                                         const std::vector<uint8_t>& exit_mask,
                                         const std::vector<VertexId>& starts,
                                         int horizon)
    : g_(&g),
      exit_mask_(exit_mask),
      starts_(starts),
      horizon_(horizon),
      nv_(g.vertex_count()),
      source_(2 * (horizon + 1) * g.vertex_count()),
      sink_(2 * (horizon + 1) * g.vertex_count() + 1),
      net_(2 * (horizon + 1) * g.vertex_count() + 2) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  for (VertexId h : starts_) {
    if (exit_mask_[h]) throw std::invalid_argument("start on an exit");
    net_.add_arc(source_, node_in(h, 0), 1);
  }
  // Node splits and transition arcs, ordered by (t, v) then stay < moves.
  for (int t = 0; t <= horizon; ++t) {
    for (VertexId v = 0; v < nv_; ++v) {
      net_.add_arc(node_in(v, t), node_out(v, t), 1);
      if (exit_mask_[v]) {
        if (t >= 1) net_.add_arc(node_out(v, t), sink_, 1);
        continue;  // agents never move on from an exit
      }
      if (t < horizon) {
        net_.add_arc(node_out(v, t), node_in(v, t + 1), 1);
        for (VertexId w : g.neighbors(v)) {
          net_.add_arc(node_out(v, t), node_in(w, t + 1), 1);
        }
      }
    }
  }
}

int TimeExpandedNetwork::max_flow() { return net_.max_flow(source_, sink_); }

std::vector<std::vector<VertexId>> TimeExpandedNetwork::decompose_paths() const {
  std::vector<std::vector<VertexId>> paths;
  // Every layer node carries at most one flow unit, so following saturated
  // forward arcs from each used source arc yields a unique decomposition.
  for (int i = 0; i < static_cast<int>(net_.arcs(source_).size()); ++i) {
    if (net_.arc_flow(source_, i) <= 0) continue;
    std::vector<VertexId> locs;
    int node = net_.arcs(source_)[i].to;  // node_in(h, 0)
    while (node != sink_) {
      int packed = node / 2;
      VertexId v = static_cast<VertexId>(packed % nv_);
      bool is_in = (node % 2) == 0;
      if (is_in) locs.push_back(v);
      int next = -1;
      for (int j = 0; j < static_cast<int>(net_.arcs(node).size()); ++j) {
        if (net_.arc_flow(node, j) > 0) {
          next = net_.arcs(node)[j].to;
          break;
        }
      }
      if (next < 0) throw std::logic_error("flow decomposition lost a unit");
      node = next;
    }
    paths.push_back(std::move(locs));
  }
  return paths;
}

}  // namespace devac
