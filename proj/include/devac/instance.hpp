#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "devac/graph.hpp"

namespace devac {

/// An evacuation instance: graph, exits X, homebases H. Agents are numbered
/// 0..k-1 in homebase listing order.
struct Instance {
  Graph g;
  std::vector<VertexId> exits;
  std::vector<VertexId> homebases;
  std::string generator;  // metadata
  uint64_t seed = 0;      // metadata
  bool grid = false;      // edges implied from grid_n when set
  int grid_n = 0;

  int agent_count() const { return static_cast<int>(homebases.size()); }
  std::vector<uint8_t> exit_mask() const { return make_mask(g, exits); }

  /// Checks H and X disjoint, nonempty X, labels resolvable, etc.
  /// Returns an error message or empty string when valid.
  std::string check() const;

  bool operator==(const Instance& other) const {
    return g == other.g && exits == other.exits &&
           homebases == other.homebases && generator == other.generator &&
           seed == other.seed && grid == other.grid && grid_n == other.grid_n;
  }
};

std::string serialize_instance(const Instance& inst);
Instance parse_instance(const std::string& text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

/// xorshift-based deterministic generator; avoids implementation-defined
/// std distributions so outputs are stable across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  uint64_t next() {
    uint64_t x = state_;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    state_ = x;
    return x;
  }

  /// Uniform in [0, n).
  uint64_t below(uint64_t n) {
    uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace devac
