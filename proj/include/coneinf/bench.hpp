#pragma once

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coneinf/generate.hpp"
#include "coneinf/oracle.hpp"
#include "coneinf/solver.hpp"

namespace coneinf {

struct BenchRow {
  int n = 0;
  int m = 0;
  int datasets = 0;
  double mean_iters = 0.0;
  double mean_updates = 0.0;
  double mean_time_s = 0.0;
  int failures = 0;  // solves excluded (solver error or failed certificate)
};

/// Seed for dataset k of cell (n, m): splitmix64 mixing, so cells and
/// datasets are independent but fully reproducible.
inline std::uint64_t dataset_seed(std::uint64_t base, int n, int m, int k) {
  std::uint64_t s = detail::splitmix64(base ^ (0x6A09E667F3BCC909ull * n));
  s = detail::splitmix64(s ^ (0xBB67AE8584CAA73Bull * m));
  return detail::splitmix64(s ^ (0x3C6EF372FE94F82Bull * k));
}

/// Solves `datasets` standard-normal instances per (n, m) cell and reports
/// mean major iterations, S-pair updates and wall time; every solve is
/// certified with the KKT checker and excluded (counted) on failure.
inline std::vector<BenchRow> run_bench(
    const std::vector<std::pair<int, int>>& grid, int datasets,
    std::uint64_t seed, const SolverConfig& cfg = {}) {
  std::vector<BenchRow> rows;
  rows.reserve(grid.size());
  for (const auto& [n, m] : grid) {
    BenchRow row;
    row.n = n;
    row.m = m;
    row.datasets = datasets;
    double iters = 0.0, updates = 0.0, time_s = 0.0;
    int ok = 0;
    for (int k = 0; k < datasets; ++k) {
      const Instance inst = generate_normal(n, m, dataset_seed(seed, n, m, k));
      try {
        const SolveResult res = solve(inst, cfg);
        if (!kkt_check(inst, res.x_star, res.dual, 1e-7).pass) {
          ++row.failures;
          continue;
        }
        iters += res.stats.major_iterations;
        updates += res.stats.spair_updates;
        time_s += res.stats.wall_time;
        ++ok;
      } catch (const SolverError&) {
        ++row.failures;
      }
    }
    if (ok > 0) {
      row.mean_iters = iters / ok;
      row.mean_updates = updates / ok;
      row.mean_time_s = time_s / ok;
    }
    rows.push_back(row);
  }
  return rows;
}

/// Plain-text table, one row per (n, m) cell.
inline std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << std::setw(8) << "n" << std::setw(10) << "m" << std::setw(12)
      << "iters" << std::setw(16) << "spair updates" << std::setw(14)
      << "time (s)" << std::setw(10) << "failed" << "\n";
  for (const BenchRow& r : rows) {
    out << std::setw(8) << r.n << std::setw(10) << r.m << std::setw(12)
        << std::fixed << std::setprecision(2) << r.mean_iters << std::setw(16)
        << r.mean_updates << std::setw(14) << std::setprecision(4)
        << r.mean_time_s << std::setw(10) << r.failures << "\n";
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

}  // namespace coneinf
