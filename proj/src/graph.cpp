#include "devac/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace devac {

VertexId Graph::add_vertex(std::string label) {
  if (by_label_.count(label)) {
    throw std::invalid_argument("duplicate vertex label: " + label);
  }
  VertexId id = static_cast<VertexId>(labels_.size());
  by_label_.emplace(label, id);
  labels_.push_back(std::move(label));
  adj_.emplace_back();
  return id;
}

void Graph::add_edge(VertexId u, VertexId v) {
  if (u == v) throw std::invalid_argument("self-loop rejected");
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count()) {
    throw std::out_of_range("edge endpoint out of range");
  }
  if (has_edge(u, v)) throw std::invalid_argument("parallel edge rejected");
  adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
  adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
  ++edge_count_;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::optional<VertexId> Graph::find_label(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

int RootedTree::max_depth() const {
  int m = 0;
  for (int d : depth)
    if (d > m) m = d;
  return m;
}

std::string grid_label(int i, int j) {
  return std::to_string(i) + "," + std::to_string(j);
}

Graph build_grid(int n) {
  if (n < 1) throw std::invalid_argument("grid side must be >= 1");
  Graph g;
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i) g.add_vertex(grid_label(i, j));
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      VertexId v = grid_vertex(n, i, j);
      if (i < n) g.add_edge(v, grid_vertex(n, i + 1, j));
      if (j < n) g.add_edge(v, grid_vertex(n, i, j + 1));
    }
  }
  return g;
}

bool is_grid_label(const Graph& g, VertexId v, GridCoord* out) {
  const std::string& s = g.label(v);
  auto comma = s.find(',');
  if (comma == std::string::npos) return false;
  try {
    size_t used = 0;
    int i = std::stoi(s.substr(0, comma), &used);
    if (used != comma) return false;
    int j = std::stoi(s.substr(comma + 1), &used);
    if (used != s.size() - comma - 1) return false;
    if (out) *out = GridCoord{i, j};
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

std::optional<int> grid_side(const Graph& g) {
  int nv = g.vertex_count();
  int n = 0;
  while (n * n < nv) ++n;
  if (n * n != nv || n == 0) return std::nullopt;
  if (g.edge_count() != 2 * n * (n - 1)) return std::nullopt;
  for (VertexId v = 0; v < nv; ++v) {
    GridCoord c;
    if (!is_grid_label(g, v, &c)) return std::nullopt;
    if (grid_vertex(n, c.i, c.j) != v) return std::nullopt;
    if (c.i < n && !g.has_edge(v, grid_vertex(n, c.i + 1, c.j))) return std::nullopt;
    if (c.j < n && !g.has_edge(v, grid_vertex(n, c.i, c.j + 1))) return std::nullopt;
  }
  return n;
}

StarChain build_star_chain(int k, int n, int s) {
  if (k < 0 || n < 1 || s < 2) {
    throw std::invalid_argument("star chain requires k >= 0, n >= 1, s >= 2");
  }
  StarChain sc;
  std::vector<VertexId> centers(k + 1);
  std::vector<std::vector<VertexId>> leaves(k + 1, std::vector<VertexId>(n + 1));
  for (int j = 0; j <= k; ++j) {
    centers[j] = sc.g.add_vertex("c" + std::to_string(j));
    for (int i = 1; i <= n; ++i) {
      leaves[j][i] =
          sc.g.add_vertex("l" + std::to_string(j) + "." + std::to_string(i));
      sc.g.add_edge(centers[j], leaves[j][i]);
    }
  }
  for (int j = 1; j <= k; ++j) {
    for (int i = 1; i <= n; ++i) {
      VertexId prev = leaves[j - 1][i];
      for (int t = 1; t <= s - 2; ++t) {
        VertexId mid = sc.g.add_vertex("m" + std::to_string(j) + "." +
                                       std::to_string(i) + "." + std::to_string(t));
        sc.g.add_edge(prev, mid);
        prev = mid;
      }
      sc.g.add_edge(prev, leaves[j][i]);
    }
  }
  sc.exits = centers;
  return sc;
}

std::vector<int> exit_avoiding_distances_multi(
    const Graph& g, const std::vector<uint8_t>& exit_mask,
    const std::vector<VertexId>& sources, int max_depth) {
  std::vector<int> dist(g.vertex_count(), -1);
  std::deque<VertexId> queue;
  for (VertexId s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    // Expansion passes through non-exit vertices only; sources are path
    // endpoints and may be exits.
    if (dist[u] > 0 && exit_mask[u]) continue;
    if (max_depth >= 0 && dist[u] >= max_depth) continue;
    for (VertexId w : g.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<int> exit_avoiding_distances(const Graph& g,
                                         const std::vector<uint8_t>& exit_mask,
                                         VertexId source, int max_depth) {
  return exit_avoiding_distances_multi(g, exit_mask, {source}, max_depth);
}

std::optional<int> exit_avoiding_distance(const Graph& g,
                                          const std::vector<uint8_t>& exit_mask,
                                          VertexId u, VertexId v) {
  if (u == v) return 0;
  std::vector<int> dist = exit_avoiding_distances(g, exit_mask, u);
  if (dist[v] < 0) return std::nullopt;
  return dist[v];
}

RootedTree bfs_tree(const Graph& g, VertexId root,
                    const std::vector<uint8_t>& forbidden) {
  if (root < 0 || root >= g.vertex_count()) {
    throw std::out_of_range("bfs_tree root out of range");
  }
  if (forbidden[root]) {
    throw std::invalid_argument("bfs_tree root is forbidden");
  }
  RootedTree t;
  t.root = root;
  t.parent.assign(g.vertex_count(), kNoVertex);
  t.depth.assign(g.vertex_count(), -1);
  t.depth[root] = 0;
  t.order.push_back(root);
  for (size_t head = 0; head < t.order.size(); ++head) {
    VertexId u = t.order[head];
    for (VertexId w : g.neighbors(u)) {
      if (forbidden[w] || t.depth[w] >= 0) continue;
      t.depth[w] = t.depth[u] + 1;
      t.parent[w] = u;
      t.order.push_back(w);
    }
  }
  return t;
}

std::vector<uint8_t> make_mask(const Graph& g,
                               const std::vector<VertexId>& vertices) {
  std::vector<uint8_t> mask(g.vertex_count(), 0);
  for (VertexId v : vertices) mask[v] = 1;
  return mask;
}

}  // namespace devac
