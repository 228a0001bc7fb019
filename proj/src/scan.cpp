#include "gengeom/sugra.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace gengeom {

namespace {

std::vector<ScanRow> grid_rows(const ScanGrid& grid) {
  std::vector<ScanRow> rows;
  std::size_t total = grid.empty() ? 0 : 1;
  for (const auto& axis : grid) total *= axis.second.size();
  rows.reserve(total);
  for (std::size_t r = 0; r < total; ++r) {
    ScanRow row;
    std::size_t rest = r;
    for (std::size_t a = grid.size(); a-- > 0;) {
      const auto& values = grid[a].second;
      row.params[grid[a].first] = values[rest % values.size()];
      rest /= values.size();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<ScanRow> scan(const SugraTemplate& t, const ScanGrid& grid, int threads) {
  for (const auto& axis : grid)
    if (!t.params.count(axis.first)) throw Error(ErrorKind::config, "grid parameter '" + axis.first + "' is not declared");
  std::vector<ScanRow> rows = grid_rows(grid);
  if (rows.empty()) return rows;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        SugraContext ctx = assemble(instantiate(t, rows[i].params));
        rows[i].report = check_equations(ctx, flux_spinor(ctx));
      } catch (const Error& e) {
        rows[i].error = e.what();
      }
    }
  };
  int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nt = std::min(nt, static_cast<int>(rows.size()));
  std::vector<std::thread> pool;
  for (int k = 1; k < nt; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace gengeom
