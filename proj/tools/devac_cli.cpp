// Command-line driver: instance generation, offline optimum, framework runs,
// trace validation, and the benchmark table.
//
// Exit codes: 0 ok, 1 validation failure, 2 input error, 3 infeasible.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "devac/framework.hpp"
#include "devac/grid_partition.hpp"
#include "devac/instance.hpp"
#include "devac/sim.hpp"
#include "devac/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace devac;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;

std::vector<VertexId> pick_distinct(Rng& rng, std::vector<VertexId> pool,
                                    size_t count, const char* what) {
  if (pool.size() < count) {
    throw std::runtime_error(std::string("not enough candidate vertices for ") +
                             what);
  }
  rng.shuffle(pool);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

Instance gen_grid_instance(int n, int exits, const std::string& exit_mode,
                           int exit_B, int agents, uint64_t seed) {
  Instance inst;
  inst.g = build_grid(n);
  inst.grid = true;
  inst.grid_n = n;
  inst.generator = "grid";
  inst.seed = seed;
  Rng rng(seed);

  if (exit_mode == "rows") {
    // One exit per row of every B-area, forcing the row-partition branch.
    for (const BArea& area : b_areas(n, exit_B)) {
      for (int j = area.j_lo; j <= area.j_hi; ++j) {
        int i = area.i_lo + static_cast<int>(rng.below(area.width()));
        inst.exits.push_back(grid_vertex(n, i, j));
      }
    }
    std::sort(inst.exits.begin(), inst.exits.end());
    inst.exits.erase(std::unique(inst.exits.begin(), inst.exits.end()),
                     inst.exits.end());
  } else {
    std::vector<VertexId> pool;
    for (VertexId v = 0; v < inst.g.vertex_count(); ++v) {
      if (exit_mode == "border") {
        GridCoord c = grid_coord(n, v);
        if (c.i != 1 && c.i != n && c.j != 1 && c.j != n) continue;
      }
      pool.push_back(v);
    }
    inst.exits = pick_distinct(rng, std::move(pool), exits, "exits");
  }

  std::vector<uint8_t> ex = make_mask(inst.g, inst.exits);
  std::vector<VertexId> pool;
  for (VertexId v = 0; v < inst.g.vertex_count(); ++v) {
    if (!ex[v]) pool.push_back(v);
  }
  inst.homebases = pick_distinct(rng, std::move(pool), agents, "homebases");
  return inst;
}

Instance gen_star_instance(int k, int n, int s, int agents, bool star0,
                           uint64_t seed) {
  StarChain sc = build_star_chain(k, n, s);
  Instance inst;
  inst.g = std::move(sc.g);
  inst.exits = std::move(sc.exits);
  inst.generator = "star-chain";
  inst.seed = seed;
  Rng rng(seed);
  if (star0) {
    // The worst-case homebases: all leaves of the first star.
    for (int i = 1; i <= n; ++i) {
      inst.homebases.push_back(*inst.g.find_label("l0." + std::to_string(i)));
    }
  } else {
    std::vector<uint8_t> ex = make_mask(inst.g, inst.exits);
    std::vector<VertexId> pool;
    for (VertexId v = 0; v < inst.g.vertex_count(); ++v) {
      if (!ex[v]) pool.push_back(v);
    }
    inst.homebases = pick_distinct(rng, std::move(pool), agents, "homebases");
  }
  return inst;
}

PartitionProvider make_provider(const std::string& name, const Instance& inst) {
  if (name == "grid") {
    if (!grid_side(inst.g)) {
      throw std::runtime_error("the grid provider needs a grid instance");
    }
    return [](const Graph& g, const std::vector<VertexId>& exits, int B) {
      return grid_partition_provider(g, exits, B);
    };
  }
  if (name == "generic") {
    return [](const Graph& g, const std::vector<VertexId>& exits, int B) {
      return generic_partition_provider(g, exits, B);
    };
  }
  throw std::runtime_error("unknown provider: " + name);
}

long long theorem_budget(const std::vector<EpochRecord>& epochs) {
  long long total = 0;
  for (const auto& e : epochs) total += 6ll * e.d * e.B;
  return total;
}

void print_epoch_table(const std::vector<EpochRecord>& epochs) {
  std::cout << "epoch  B      d   steps   evacuated\n";
  for (const auto& e : epochs) {
    std::cout << e.epoch_index << "      " << e.B << "      " << e.d << "   "
              << e.steps_consumed << "   " << e.evacuated << "\n";
  }
}

struct BenchRow {
  std::string id;
  int n = 0, k = 0, exits = 0;
  uint64_t seed = 0;
  int opt = 0, length = 0;
  double ratio = 0.0;
  int epochs = 0;
  std::string d_list;
  bool budget_ok = false;
  long long wall_ms = 0;
  std::string error;
};

int run_bench(const std::vector<int>& sizes, const std::vector<uint64_t>& seeds,
              const std::string& csv_path) {
  std::vector<BenchRow> rows(sizes.size() * seeds.size());
  int cells = static_cast<int>(rows.size());
#pragma omp parallel for schedule(dynamic)
  for (int cell = 0; cell < cells; ++cell) {
    int n = sizes[cell / seeds.size()];
    uint64_t seed = seeds[cell % seeds.size()];
    BenchRow& row = rows[cell];
    row.n = n;
    row.seed = seed;
    row.id = "grid" + std::to_string(n) + "-s" + std::to_string(seed);
    auto t0 = std::chrono::steady_clock::now();
    try {
      int exits = std::max(1, n / 2);
      int agents = std::max(1, n * n / 16);
      Instance inst = gen_grid_instance(n, exits, "random", 4, agents, seed);
      row.k = inst.agent_count();
      row.exits = static_cast<int>(inst.exits.size());
      OptResult opt = compute_opt(inst);
      RunResult run = evacuate(inst, make_provider("grid", inst), {});
      ValidationReport rep = validate_trace(inst, run.trace);
      if (!rep.valid) throw std::runtime_error("trace invalid: " + rep.violation);
      row.opt = opt.opt;
      row.length = rep.length;
      row.ratio = competitive_ratio(row.length, row.opt);
      row.epochs = static_cast<int>(run.epochs.size());
      std::ostringstream ds;
      for (size_t i = 0; i < run.epochs.size(); ++i) {
        ds << (i ? ";" : "") << run.epochs[i].d;
      }
      row.d_list = ds.str();
      int p_bound = 1;  // ceil(log2 OPT) + 1 with the B=2 start slack
      while ((1 << p_bound) < opt.opt) ++p_bound;
      if (opt.opt == 1) p_bound = 0;
      row.budget_ok = row.length <= theorem_budget(run.epochs) &&
                      row.epochs <= p_bound + 1;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    row.wall_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  }

  std::ostringstream csv;
  csv << "instance,n,k,exits,seed,opt,length,ratio,epochs,d_list,budget_ok,"
         "wall_ms,error\n";
  bool all_ok = true;
  for (const auto& row : rows) {
    csv << row.id << "," << row.n << "," << row.k << "," << row.exits << ","
        << row.seed << "," << row.opt << "," << row.length << "," << row.ratio
        << "," << row.epochs << "," << row.d_list << ","
        << (row.budget_ok ? 1 : 0) << "," << row.wall_ms << "," << row.error
        << "\n";
    if (!row.error.empty() || !row.budget_ok) all_ok = false;
  }
  std::cout << csv.str();
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    out << csv.str();
  }
  // Per-size ratio summary.
  for (int n : sizes) {
    std::vector<double> ratios;
    for (const auto& row : rows) {
      if (row.n == n && row.error.empty()) ratios.push_back(row.ratio);
    }
    if (ratios.empty()) continue;
    std::sort(ratios.begin(), ratios.end());
    std::cout << "n=" << n << " max_ratio=" << ratios.back()
              << " median_ratio=" << ratios[ratios.size() / 2] << "\n";
  }
  return all_ok ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed discrete evacuation toolkit"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  std::string kind = "grid", exit_mode = "random", out_path = "instance.devac";
  int n = 8, exits = 2, agents = 4, exit_B = 4, star_k = 1, star_s = 2;
  bool star0 = false;
  uint64_t seed = 1;
  gen->add_option("--kind", kind)->check(CLI::IsMember({"grid", "star-chain"}));
  gen->add_option("--n", n, "grid side, or leaves per star");
  gen->add_option("--exits", exits, "exit count (grid)");
  gen->add_option("--exit-mode", exit_mode)
      ->check(CLI::IsMember({"random", "border", "rows"}));
  gen->add_option("--exit-B", exit_B, "B used by --exit-mode rows");
  gen->add_option("--agents", agents);
  gen->add_option("--k", star_k, "number of star links (star-chain)");
  gen->add_option("--s", star_s, "connecting path length (star-chain)");
  gen->add_flag("--star0", star0, "homebases = all leaves of star 0");
  gen->add_option("--seed", seed);
  gen->add_option("-o,--out", out_path);

  // --- opt ---
  auto* opt_cmd = app.add_subcommand("opt", "offline optimum via network flow");
  std::string opt_instance, opt_trace;
  opt_cmd->add_option("instance", opt_instance)->required();
  opt_cmd->add_option("--trace", opt_trace, "write the witness trace here");

  // --- run ---
  auto* run_cmd = app.add_subcommand("run", "run the distributed framework");
  std::string run_instance, run_trace, provider_name = "grid";
  int start_B = 2;
  run_cmd->add_option("instance", run_instance)->required();
  run_cmd->add_option("--provider", provider_name)
      ->check(CLI::IsMember({"grid", "generic"}));
  run_cmd->add_option("--start-B", start_B, "initial B (tests force >= OPT)");
  run_cmd->add_option("--trace", run_trace);

  // --- validate ---
  auto* val_cmd = app.add_subcommand("validate", "replay a trace against an instance");
  std::string val_instance, val_trace;
  val_cmd->add_option("instance", val_instance)->required();
  val_cmd->add_option("trace", val_trace)->required();

  // --- bench ---
  auto* bench_cmd = app.add_subcommand("bench", "gen -> opt -> run sweeps");
  std::vector<int> sizes{8, 16, 32};
  std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
  std::string csv_path;
  bench_cmd->add_option("--sizes", sizes)->delimiter(',');
  bench_cmd->add_option("--seeds", seeds)->delimiter(',');
  bench_cmd->add_option("--csv", csv_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      Instance inst;
      if (kind == "grid") {
        inst = gen_grid_instance(n, exits, exit_mode, exit_B, agents, seed);
      } else {
        inst = gen_star_instance(star_k, n, star_s, agents, star0, seed);
      }
      save_instance(inst, out_path);
      std::cout << "wrote " << out_path << " (|V|=" << inst.g.vertex_count()
                << " |X|=" << inst.exits.size() << " k=" << inst.agent_count()
                << ")\n";
      return kExitOk;
    }
    if (*opt_cmd) {
      Instance inst = load_instance(opt_instance);
      OptResult result = compute_opt(inst);
      Trace witness =
          strategy_to_trace(result.witness, opt_instance, inst.agent_count());
      ValidationReport rep = validate_trace(inst, witness);
      if (!rep.valid || rep.length != result.opt) {
        std::cerr << "internal error: witness failed validation: "
                  << rep.violation << "\n";
        return kExitInvalid;
      }
      std::cout << "OPT " << result.opt << "\nwitness valid\n";
      if (!opt_trace.empty()) save_trace(witness, inst.g, opt_trace);
      return kExitOk;
    }
    if (*run_cmd) {
      Instance inst = load_instance(run_instance);
      EvacuationOptions opts;
      opts.start_B = start_B;
      RunResult run = evacuate(inst, make_provider(provider_name, inst), opts);
      run.trace.instance_name = run_instance;
      ValidationReport rep = validate_trace(inst, run.trace);
      if (!rep.valid) {
        std::cerr << "internal error: emitted trace invalid: " << rep.violation
                  << "\n";
        return kExitInvalid;
      }
      long long budget = theorem_budget(run.epochs);
      if (rep.length > budget) {
        std::cerr << "internal error: length " << rep.length
                  << " exceeds the 6*sum(d_j 2^j) budget " << budget << "\n";
        return kExitInvalid;
      }
      OptResult opt = compute_opt(inst);
      std::cout << "length " << rep.length << "\nOPT " << opt.opt << "\nratio "
                << competitive_ratio(rep.length, opt.opt) << "\nbudget "
                << budget << "\n";
      print_epoch_table(run.epochs);
      if (!run_trace.empty()) save_trace(run.trace, inst.g, run_trace);
      return kExitOk;
    }
    if (*val_cmd) {
      Instance inst = load_instance(val_instance);
      Trace t;
      try {
        t = load_trace(val_trace, inst.g);
      } catch (const std::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInput;
      }
      ValidationReport rep = validate_trace(inst, t);
      if (rep.valid) {
        std::cout << "valid length " << rep.length << "\n";
        return kExitOk;
      }
      std::cout << "invalid: " << rep.violation << "\n";
      return kExitInvalid;
    }
    if (*bench_cmd) {
      return run_bench(sizes, seeds, csv_path);
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
