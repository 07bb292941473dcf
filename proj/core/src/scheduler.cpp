#include "c2c/scheduler.hpp"

#include <algorithm>
#include <map>

#include "c2c/error.hpp"

namespace c2c {

AllocationMode parse_allocation_mode(const std::string& text) {
  if (text == "fractional") return AllocationMode::fractional;
  if (text == "integer") return AllocationMode::integer;
  throw Error(ErrorKind::config, "unknown scheduler mode '" + text + "'");
}

const char* to_string(AllocationMode mode) noexcept {
  return mode == AllocationMode::fractional ? "fractional" : "integer";
}

std::vector<CellTickState> build_cells(Tick t, std::span<const VehiclePosition> positions,
                                       std::span<const BaseStation> stations,
                                       const LinkBudgetConfig& cfg) {
  std::map<std::string, CellTickState> cells;
  for (const auto& p : positions) {
    const std::string& station = associate(p.x, p.y, stations, cfg);
    auto& cell = cells[station];
    cell.station_id = station;
    cell.t = t;
    cell.attached.push_back(p.vehicle_id);
  }
  std::vector<CellTickState> out;
  out.reserve(cells.size());
  for (auto& [id, cell] : cells) {
    std::sort(cell.attached.begin(), cell.attached.end());
    out.push_back(std::move(cell));
  }
  return out;
}

RbAllocation rr_allocate(const CellTickState& cell, std::size_t n_rb, AllocationMode mode,
                         std::uint64_t rotation_offset) {
  RbAllocation out{cell.station_id, cell.t, mode, {}};
  const std::size_t n = cell.attached.size();
  if (n == 0) return out;
  out.shares.reserve(n);

  if (mode == AllocationMode::fractional) {
    const double share = static_cast<double>(n_rb) / static_cast<double>(n);
    for (const auto& id : cell.attached) out.shares.push_back({id, share});
    return out;
  }

  const std::size_t base = n_rb / n;
  const std::size_t remainder = n_rb % n;
  const std::size_t start = static_cast<std::size_t>(rotation_offset % n);
  for (std::size_t i = 0; i < n; ++i) {
    // Position of vehicle i in the rotated order starting at `start`.
    const std::size_t rank = (i + n - start) % n;
    const std::size_t rb = base + (rank < remainder ? 1 : 0);
    out.shares.push_back({cell.attached[i], static_cast<double>(rb)});
  }
  return out;
}

double vehicle_rate(double share, double snr_db, double speed, const RateModel& model) {
  return share * model.rb_rate(snr_db, speed);
}

double vehicle_rate(double share, double snr_db, double speed, const RbRateParams& params) {
  return share * rb_rate(snr_db, speed, params);
}

}  // namespace c2c
