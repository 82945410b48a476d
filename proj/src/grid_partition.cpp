#include "devac/grid_partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace devac {

std::vector<BArea> b_areas(int n, int B) {
  if (B < 2 || B % 2 != 0) {
    throw std::invalid_argument("B-areas need an even B >= 2");
  }
  int s = B / 2;
  int tiles = (n + s - 1) / s;
  std::vector<BArea> areas;
  for (int b = 0; b < tiles; ++b) {
    for (int a = 0; a < tiles; ++a) {
      BArea ar;
      ar.a = a;
      ar.b = b;
      ar.i_lo = a * s + 1;
      ar.i_hi = std::min((a + 1) * s, n);
      ar.j_lo = b * s + 1;
      ar.j_hi = std::min((b + 1) * s, n);
      areas.push_back(ar);
    }
  }
  return areas;
}

std::optional<std::vector<VertexId>> find_monotone_path(
    int n, const BArea& area, const std::vector<uint8_t>& exit_mask) {
  int w = area.width(), h = area.height();
  auto vid = [&](int li, int lj) {
    return grid_vertex(n, area.i_lo + li - 1, area.j_lo + lj - 1);
  };
  // reach[li][lj]: a monotone exit-free suffix to column w exists from here.
  std::vector<std::vector<uint8_t>> reach(w + 2, std::vector<uint8_t>(h + 2, 0));
  for (int li = w; li >= 1; --li) {
    for (int lj = h; lj >= 1; --lj) {
      if (exit_mask[vid(li, lj)]) continue;
      if (li == w) {
        reach[li][lj] = 1;
      } else {
        reach[li][lj] = reach[li + 1][lj] | (lj < h ? reach[li][lj + 1] : 0);
      }
    }
  }
  int start = -1;
  for (int lj = 1; lj <= h; ++lj) {
    if (reach[1][lj]) {
      start = lj;
      break;
    }
  }
  if (start < 0) return std::nullopt;
  std::vector<VertexId> path;
  int li = 1, lj = start;
  path.push_back(vid(li, lj));
  while (li < w) {
    if (reach[li + 1][lj]) {
      ++li;
    } else {
      ++lj;
    }
    path.push_back(vid(li, lj));
  }
  return path;
}

std::shared_ptr<const InternalPlan> row_internal_plan(
    const std::vector<VertexId>& path_order, const std::vector<uint8_t>& exit_at) {
  bool any_non_exit = false;
  for (uint8_t e : exit_at)
    if (!e) any_non_exit = true;
  if (!any_non_exit) return std::make_shared<EmptyPlan>();
  return std::make_shared<FunnelPlan>(path_order, exit_at);
}

namespace {

/// Path zone tree rooted along an explicit adjacency (runs + path edges).
ZoneTree tree_from_edges(const std::vector<VertexId>& vertices,
                         const std::vector<std::pair<VertexId, VertexId>>& edges,
                         VertexId root) {
  std::map<VertexId, std::vector<VertexId>> adj;
  for (VertexId v : vertices) adj[v];
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());
  ZoneTree t;
  t.root = root;
  std::map<VertexId, int> depth;
  depth[root] = 0;
  t.order.push_back(root);
  t.parents.push_back(kNoVertex);
  t.depths.push_back(0);
  for (size_t head = 0; head < t.order.size(); ++head) {
    VertexId u = t.order[head];
    for (VertexId wv : adj[u]) {
      if (depth.count(wv)) continue;
      depth[wv] = depth[u] + 1;
      t.order.push_back(wv);
      t.parents.push_back(u);
      t.depths.push_back(depth[wv]);
    }
  }
  if (t.order.size() != vertices.size()) {
    throw std::logic_error("path zone tree does not span the zone");
  }
  return t;
}

/// Rooted path tree for a path-shaped non-exit run.
ZoneTree path_tree(const std::vector<VertexId>& run_in_order, VertexId root) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (size_t i = 1; i < run_in_order.size(); ++i) {
    edges.emplace_back(run_in_order[i - 1], run_in_order[i]);
  }
  return tree_from_edges(run_in_order, edges, root);
}

}  // namespace

std::vector<Zone> partition_area_rows(int n, const BArea& area, const Graph&,
                                      const std::vector<uint8_t>& exit_mask,
                                      int /*B*/, int next_id) {
  std::vector<Zone> zones;
  for (int j = area.j_lo; j <= area.j_hi; ++j) {
    std::vector<VertexId> row;
    std::vector<uint8_t> exit_at;
    bool has_exit = false;
    for (int i = area.i_lo; i <= area.i_hi; ++i) {
      VertexId v = grid_vertex(n, i, j);
      row.push_back(v);
      exit_at.push_back(exit_mask[v]);
      has_exit = has_exit || exit_mask[v];
    }
    if (!has_exit) {
      throw std::logic_error(
          "row partition invariant violated: exit-free row despite no "
          "monotone path");
    }
    Zone z;
    z.id = next_id++;
    z.vertices = row;
    std::sort(z.vertices.begin(), z.vertices.end());
    z.self_sufficient = true;
    z.plan = row_internal_plan(row, exit_at);
    // Condition (ii) tree exists when the non-exit part is one run.
    std::vector<std::vector<VertexId>> runs;
    for (size_t idx = 0; idx < row.size(); ++idx) {
      if (exit_at[idx]) continue;
      if (idx == 0 || exit_at[idx - 1]) runs.emplace_back();
      runs.back().push_back(row[idx]);
    }
    if (runs.size() == 1) {
      const auto& run = runs[0];
      // Root at the claimed exit's neighbor, smaller-coordinate side first.
      bool exit_left = run.front() != row.front();
      VertexId root = exit_left ? run.front() : run.back();
      z.tree = path_tree(run, root);
      z.center = root;
    } else {
      z.center = z.vertices.front();
    }
    zones.push_back(std::move(z));
  }
  return zones;
}

std::vector<Zone> partition_area_with_path(
    int n, const BArea& area, const std::vector<VertexId>& path, const Graph&,
    const std::vector<uint8_t>& exit_mask, int B, int next_id) {
  int w = area.width(), h = area.height();
  auto vid = [&](int li, int lj) {
    return grid_vertex(n, area.i_lo + li - 1, area.j_lo + lj - 1);
  };
  // Path rows per local column.
  std::vector<int> pj_lo(w + 1, h + 1), pj_hi(w + 1, 0);
  for (VertexId v : path) {
    GridCoord c = grid_coord(n, v);
    int li = c.i - area.i_lo + 1, lj = c.j - area.j_lo + 1;
    pj_lo[li] = std::min(pj_lo[li], lj);
    pj_hi[li] = std::max(pj_hi[li], lj);
  }

  Zone big;
  big.id = next_id;
  std::vector<std::pair<VertexId, VertexId>> big_edges;
  std::vector<Zone> segments;
  std::vector<uint8_t> claimed(exit_mask.size(), 0);

  for (int li = 1; li <= w; ++li) {
    // Maximal exit-free runs of this area column.
    std::vector<std::pair<int, int>> runs;  // local j ranges, inclusive
    for (int lj = 1; lj <= h; ++lj) {
      if (exit_mask[vid(li, lj)]) continue;
      if (lj == 1 || exit_mask[vid(li, lj - 1)]) runs.emplace_back(lj, lj);
      runs.back().second = lj;
    }
    for (auto [r_lo, r_hi] : runs) {
      std::vector<VertexId> run;
      for (int lj = r_lo; lj <= r_hi; ++lj) run.push_back(vid(li, lj));
      bool holds_path = r_lo <= pj_lo[li] && pj_hi[li] <= r_hi;
      if (holds_path) {
        for (VertexId v : run) big.vertices.push_back(v);
        for (size_t t = 1; t < run.size(); ++t) {
          big_edges.emplace_back(run[t - 1], run[t]);
        }
        continue;
      }
      // Self-sufficient column segment claiming the exit on its path side.
      bool above = r_hi < pj_lo[li];
      VertexId exit_v = above ? vid(li, r_hi + 1) : vid(li, r_lo - 1);
      if (!exit_mask[exit_v]) {
        throw std::logic_error("column segment boundary toward the path is "
                               "not an exit");
      }
      if (claimed[exit_v]) {
        throw std::logic_error("two column segments claimed one exit");
      }
      claimed[exit_v] = 1;
      Zone seg;
      seg.vertices = run;
      std::vector<VertexId> order;  // path order with the exit at its end
      std::vector<uint8_t> seg_exit;
      if (above) {
        order = run;
        order.push_back(exit_v);
        seg_exit.assign(order.size(), 0);
        seg_exit.back() = 1;
      } else {
        order.push_back(exit_v);
        for (VertexId v : run) order.push_back(v);
        seg_exit.assign(order.size(), 0);
        seg_exit.front() = 1;
      }
      seg.vertices.push_back(exit_v);
      std::sort(seg.vertices.begin(), seg.vertices.end());
      seg.self_sufficient = true;
      seg.plan = row_internal_plan(order, seg_exit);
      VertexId root = above ? run.back() : run.front();
      seg.tree = path_tree(run, root);
      seg.center = root;
      segments.push_back(std::move(seg));
    }
  }
  // Path edges knit the column runs together.
  for (size_t t = 1; t < path.size(); ++t) {
    big_edges.emplace_back(path[t - 1], path[t]);
  }
  std::sort(big.vertices.begin(), big.vertices.end());
  big.vertices.erase(std::unique(big.vertices.begin(), big.vertices.end()),
                     big.vertices.end());
  VertexId median = path[(path.size() - 1) / 2];
  big.tree = tree_from_edges(big.vertices, big_edges, median);
  big.center = median;
  big.self_sufficient = false;
  if (big.tree.max_depth() > B) {
    throw std::logic_error("path zone violates the Condition (ii) depth bound");
  }

  std::vector<Zone> zones;
  zones.push_back(std::move(big));
  for (auto& seg : segments) zones.push_back(std::move(seg));
  // Unclaimed exits become singleton self-sufficient zones.
  for (int lj = 1; lj <= h; ++lj) {
    for (int li = 1; li <= w; ++li) {
      VertexId v = vid(li, lj);
      if (exit_mask[v] && !claimed[v]) {
        Zone z;
        z.vertices = {v};
        z.center = v;
        z.self_sufficient = true;
        z.plan = std::make_shared<EmptyPlan>();
        zones.push_back(std::move(z));
      }
    }
  }
  for (size_t i = 0; i < zones.size(); ++i) {
    zones[i].id = next_id + static_cast<int>(i);
  }
  return zones;
}

BPartition grid_partition_provider(const Graph& g,
                                   const std::vector<VertexId>& exits, int B) {
  auto n_opt = grid_side(g);
  if (!n_opt) {
    throw std::invalid_argument("grid provider requires an n x n grid graph");
  }
  int n = *n_opt;
  std::vector<uint8_t> exit_mask = make_mask(g, exits);
  BPartition p;
  p.B = B;
  for (const BArea& area : b_areas(n, B)) {
    int base = static_cast<int>(p.zones.size());
    auto path = find_monotone_path(n, area, exit_mask);
    std::vector<Zone> zones =
        path ? partition_area_with_path(n, area, *path, g, exit_mask, B, base)
             : partition_area_rows(n, area, g, exit_mask, B, base);
    for (auto& z : zones) p.zones.push_back(std::move(z));
  }
  p.zone_of.assign(g.vertex_count(), -1);
  for (int zi = 0; zi < static_cast<int>(p.zones.size()); ++zi) {
    for (VertexId v : p.zones[zi].vertices) p.zone_of[v] = zi;
  }
  PartitionReport rep = validate_partition(p, g, exit_mask);
  if (!rep.ok) {
    throw std::logic_error("grid partition failed validation: " + rep.violation);
  }
  return p;
}

}  // namespace devac
