#pragma once

#include <optional>
#include <vector>

#include "devac/zoning.hpp"

namespace devac {

/// B/2 x B/2 tile of the grid (truncated at the boundary), corner (a, b):
/// a*B/2 < i <= (a+1)*B/2 and likewise for j.
struct BArea {
  int a = 0, b = 0;
  int i_lo = 0, i_hi = 0;  // global 1-based column range, inclusive
  int j_lo = 0, j_hi = 0;  // global 1-based row range, inclusive
  int width() const { return i_hi - i_lo + 1; }
  int height() const { return j_hi - j_lo + 1; }
};

/// Row-major tiling of the n x n grid; B must be even and >= 2.
std::vector<BArea> b_areas(int n, int B);

/// Exit-free path from the area's first column to its last, each step
/// incrementing i or j. Deterministic: minimal start row, then prefer
/// advancing i over j. Vertices are global grid ids.
std::optional<std::vector<VertexId>> find_monotone_path(
    int n, const BArea& area, const std::vector<uint8_t>& exit_mask);

/// One self-sufficient zone per row of the area (every row holds an exit
/// when no monotone path exists). `next_id` numbers the zones.
std::vector<Zone> partition_area_rows(int n, const BArea& area,
                                      const Graph& g,
                                      const std::vector<uint8_t>& exit_mask,
                                      int B, int next_id);

/// Lemma-style split around a monotone path: one non-self-sufficient zone
/// holding every column's path-run, self-sufficient column segments with
/// uniquely claimed exits, and singleton zones for leftover exits.
std::vector<Zone> partition_area_with_path(int n, const BArea& area,
                                           const std::vector<VertexId>& path,
                                           const Graph& g,
                                           const std::vector<uint8_t>& exit_mask,
                                           int B, int next_id);

/// Funnel plan for a path-shaped zone given in path order.
std::shared_ptr<const InternalPlan> row_internal_plan(
    const std::vector<VertexId>& path_order,
    const std::vector<uint8_t>& exit_at);

/// Full grid provider; validates the partition before returning.
BPartition grid_partition_provider(const Graph& g,
                                   const std::vector<VertexId>& exits, int B);

}  // namespace devac
