// Benchmark for the zone-closeness kernel: serial reference vs the OpenMP
// parallel variant, verifying identical output.

#include <chrono>
#include <iostream>

#include "devac/grid_partition.hpp"
#include "devac/instance.hpp"
#include "devac/zoning.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace devac;

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 64;
  int B = argc > 2 ? std::atoi(argv[2]) : 4;
  int reps = argc > 3 ? std::atoi(argv[3]) : 3;

  Graph g = build_grid(n);
  Rng rng(7);
  std::vector<VertexId> exits;
  for (int i = 0; i < n; ++i) {
    exits.push_back(static_cast<VertexId>(rng.below(g.vertex_count())));
  }
  std::sort(exits.begin(), exits.end());
  exits.erase(std::unique(exits.begin(), exits.end()), exits.end());
  std::vector<uint8_t> exit_mask = make_mask(g, exits);

  BPartition p = grid_partition_provider(g, exits, B);
  std::cout << "n=" << n << " B=" << B << " zones=" << p.zones.size();
#ifdef _OPENMP
  std::cout << " threads=" << omp_get_max_threads();
#endif
  std::cout << "\n";

  std::vector<std::vector<int>> serial, parallel;
  double t_serial = time_ms(
      [&] { serial = closeness_adjacency_serial(p, g, exit_mask); }, reps);
  double t_parallel = time_ms(
      [&] { parallel = closeness_adjacency_parallel(p, g, exit_mask); }, reps);

  if (serial != parallel) {
    std::cerr << "MISMATCH: parallel kernel disagrees with the serial "
                 "reference\n";
    return 1;
  }
  size_t edges = 0;
  for (const auto& a : serial) edges += a.size();
  std::cout << "closeness edges " << edges / 2 << "\n";
  std::cout << "serial   " << t_serial << " ms\n";
  std::cout << "parallel " << t_parallel << " ms (speedup "
            << t_serial / t_parallel << "x)\n";
  return 0;
}
