#pragma once

// Per-tick cell membership and Round-Robin resource-block allocation.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "c2c/linkrate.hpp"
#include "c2c/mobility.hpp"
#include "c2c/radio.hpp"

namespace c2c {

inline constexpr std::size_t kDefaultRbPerCell = 100;

enum class AllocationMode { fractional, integer };

AllocationMode parse_allocation_mode(const std::string& text);
const char* to_string(AllocationMode mode) noexcept;

struct CellTickState {
  std::string station_id;
  Tick t = 0;
  std::vector<std::string> attached;  // ascending vehicle_id
};

struct RbShare {
  std::string vehicle_id;
  double share = 0.0;  // resource blocks; whole numbers in integer mode
};

struct RbAllocation {
  std::string station_id;
  Tick t = 0;
  AllocationMode mode = AllocationMode::fractional;
  std::vector<RbShare> shares;  // canonical (ascending vehicle_id) order
};

struct VehiclePosition {
  std::string vehicle_id;
  double x = 0.0;
  double y = 0.0;
};

// Partition of the vehicles present at tick t by best-SNR station. Cells are
// ordered by station_id; empty cells are omitted.
std::vector<CellTickState> build_cells(Tick t, std::span<const VehiclePosition> positions,
                                       std::span<const BaseStation> stations,
                                       const LinkBudgetConfig& cfg);

// Equal-share RR. Fractional: n_rb / |attached| each. Integer: the floor for
// everyone plus one extra RB for the `remainder` vehicles starting at index
// rotation_offset mod |attached| (wrapping) in canonical order.
RbAllocation rr_allocate(const CellTickState& cell, std::size_t n_rb, AllocationMode mode,
                         std::uint64_t rotation_offset);

double vehicle_rate(double share, double snr_db, double speed, const RateModel& model);
double vehicle_rate(double share, double snr_db, double speed, const RbRateParams& params);

}  // namespace c2c
