#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace devac {

using VertexId = int32_t;
inline constexpr VertexId kNoVertex = -1;

/// 1-based grid coordinates; i is the column index, j the row index.
struct GridCoord {
  int i = 0;
  int j = 0;
  bool operator==(const GridCoord&) const = default;
};

/// Finite simple undirected graph with dense vertex ids 0..n-1 and unique
/// string labels. Adjacency lists are kept sorted ascending; every
/// neighborhood iteration in the project relies on that order for
/// deterministic tie-breaking.
class Graph {
 public:
  VertexId add_vertex(std::string label);
  void add_edge(VertexId u, VertexId v);

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return edge_count_; }

  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }
  bool has_edge(VertexId u, VertexId v) const;

  const std::string& label(VertexId v) const { return labels_[v]; }
  std::optional<VertexId> find_label(const std::string& label) const;

  bool operator==(const Graph& other) const {
    return labels_ == other.labels_ && adj_ == other.adj_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<VertexId>> adj_;
  std::unordered_map<std::string, VertexId> by_label_;
  int edge_count_ = 0;
};

/// Rooted spanning tree of a vertex subset; parent/depth are kNoVertex/-1
/// for vertices outside the tree.
struct RootedTree {
  VertexId root = kNoVertex;
  std::vector<VertexId> parent;  // indexed by vertex id
  std::vector<int> depth;        // -1 when not in the tree
  std::vector<VertexId> order;   // BFS discovery order, starts with root

  bool contains(VertexId v) const {
    return v >= 0 && v < static_cast<int>(depth.size()) && depth[v] >= 0;
  }
  int max_depth() const;
};

std::string grid_label(int i, int j);

/// n x n grid; vertex (i,j) labeled "i,j", ids row-major: id = (j-1)*n + (i-1).
Graph build_grid(int n);

bool is_grid_label(const Graph& g, VertexId v, GridCoord* out);

/// Detects whether g is exactly an n x n grid with canonical ids; returns n.
std::optional<int> grid_side(const Graph& g);

inline VertexId grid_vertex(int n, int i, int j) {
  return static_cast<VertexId>((j - 1) * n + (i - 1));
}
inline GridCoord grid_coord(int n, VertexId v) {
  return GridCoord{static_cast<int>(v % n) + 1, static_cast<int>(v / n) + 1};
}

/// k+1 stars with n leaves each; corresponding leaves of consecutive stars
/// joined by paths with s-2 internal vertices. Exits are the star centers.
struct StarChain {
  Graph g;
  std::vector<VertexId> exits;
};
StarChain build_star_chain(int k, int n, int s);

/// Length of a shortest u-v path whose internal vertices avoid exits;
/// endpoints may be exits. nullopt when no such path exists.
std::optional<int> exit_avoiding_distance(const Graph& g,
                                          const std::vector<uint8_t>& exit_mask,
                                          VertexId u, VertexId v);

/// Single-source exit-avoiding distances, truncated at max_depth when >= 0.
/// Unreached vertices get -1.
std::vector<int> exit_avoiding_distances(const Graph& g,
                                         const std::vector<uint8_t>& exit_mask,
                                         VertexId source, int max_depth = -1);

/// Multi-source variant; all sources start at distance 0.
std::vector<int> exit_avoiding_distances_multi(
    const Graph& g, const std::vector<uint8_t>& exit_mask,
    const std::vector<VertexId>& sources, int max_depth = -1);

/// BFS spanning tree of the component of g - forbidden containing root;
/// neighbors explored in ascending id order. Throws if root is forbidden.
RootedTree bfs_tree(const Graph& g, VertexId root,
                    const std::vector<uint8_t>& forbidden);

std::vector<uint8_t> make_mask(const Graph& g,
                               const std::vector<VertexId>& vertices);

}  // namespace devac
