#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "c2c/error.hpp"
#include "c2c/scheduler.hpp"

using c2c::AllocationMode;
using c2c::CellTickState;

namespace {

CellTickState cell_of(std::size_t n) {
  CellTickState c{"bs", 0, {}};
  for (std::size_t i = 0; i < n; ++i) {
    c.attached.push_back("v" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  }
  return c;
}

// Brute force: deal whole RBs one at a time, cycling through the vehicles in
// canonical order starting at rotation_offset mod n.
std::vector<double> dealt(std::size_t n, std::size_t n_rb, std::uint64_t offset) {
  std::vector<double> out(n, 0.0);
  std::size_t i = static_cast<std::size_t>(offset % n);
  for (std::size_t rb = 0; rb < n_rb; ++rb) {
    out[i] += 1.0;
    i = (i + 1) % n;
  }
  return out;
}

std::vector<double> shares_of(const c2c::RbAllocation& a) {
  std::vector<double> s;
  for (const auto& x : a.shares) s.push_back(x.share);
  return s;
}

TEST(RrAllocate, IntegerModeMatchesBruteForce) {
  for (std::size_t n = 1; n <= 20; ++n) {
    const auto cell = cell_of(n);
    for (std::size_t n_rb : {1u, 6u, 10u, 25u, 50u, 100u}) {
      for (std::uint64_t off = 0; off < 2 * n + 3; ++off) {
        const auto a = c2c::rr_allocate(cell, n_rb, AllocationMode::integer, off);
        ASSERT_EQ(shares_of(a), dealt(n, n_rb, off)) << n << " " << n_rb << " " << off;
      }
    }
  }
}

TEST(RrAllocate, ConservationAndFairness) {
  for (std::size_t n = 1; n <= 20; ++n) {
    const auto cell = cell_of(n);
    for (std::size_t n_rb : {1u, 7u, 10u, 100u}) {
      const auto frac = shares_of(c2c::rr_allocate(cell, n_rb, AllocationMode::fractional, 3));
      EXPECT_NEAR(std::accumulate(frac.begin(), frac.end(), 0.0), static_cast<double>(n_rb), 1e-9);
      EXPECT_EQ(*std::min_element(frac.begin(), frac.end()),
                *std::max_element(frac.begin(), frac.end()));
      const auto ints = shares_of(c2c::rr_allocate(cell, n_rb, AllocationMode::integer, 3));
      EXPECT_EQ(std::accumulate(ints.begin(), ints.end(), 0.0), static_cast<double>(n_rb));
      EXPECT_LE(*std::max_element(ints.begin(), ints.end()) -
                    *std::min_element(ints.begin(), ints.end()),
                1.0);
    }
  }
}

TEST(RrAllocate, RotationEvensOutOverCellSizeTicks) {
  for (std::size_t n = 1; n <= 20; ++n) {
    const auto cell = cell_of(n);
    for (std::size_t n_rb : {1u, 3u, 10u, 100u}) {
      for (std::uint64_t start : {0u, 5u, 17u}) {
        std::vector<double> total(n, 0.0);
        for (std::uint64_t t = start; t < start + n; ++t) {
          const auto s = shares_of(c2c::rr_allocate(cell, n_rb, AllocationMode::integer, t));
          for (std::size_t i = 0; i < n; ++i) total[i] += s[i];
        }
        for (double v : total) ASSERT_EQ(v, static_cast<double>(n_rb)) << n << " " << n_rb;
      }
    }
  }
}

TEST(RrAllocate, SingleUserGetsEverything) {
  const auto a = c2c::rr_allocate(cell_of(1), 100, AllocationMode::fractional, 0);
  ASSERT_EQ(a.shares.size(), 1u);
  EXPECT_EQ(a.shares[0].share, 100.0);
  EXPECT_EQ(a.station_id, "bs");
}

TEST(RrAllocate, EmptyCellHasNoShares) {
  EXPECT_TRUE(c2c::rr_allocate(cell_of(0), 100, AllocationMode::integer, 0).shares.empty());
}

TEST(BuildCells, PartitionsByBestStationInCanonicalOrder) {
  const std::vector<c2c::BaseStation> bs{{"s2", 1000.0, 0.0}, {"s1", 0.0, 0.0}};
  const std::vector<c2c::VehiclePosition> pos{
      {"c", 990.0, 0.0}, {"a", 10.0, 0.0}, {"b", 1010.0, 0.0}, {"d", 20.0, 0.0}};
  const auto cells = c2c::build_cells(4, pos, bs, c2c::LinkBudgetConfig{});
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].station_id, "s1");
  EXPECT_EQ(cells[0].attached, (std::vector<std::string>{"a", "d"}));
  EXPECT_EQ(cells[1].station_id, "s2");
  EXPECT_EQ(cells[1].attached, (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(cells[1].t, 4);
}

TEST(AllocationMode, ParseAndPrint) {
  EXPECT_EQ(c2c::parse_allocation_mode("integer"), AllocationMode::integer);
  EXPECT_STREQ(c2c::to_string(AllocationMode::fractional), "fractional");
  EXPECT_THROW(c2c::parse_allocation_mode("pf"), c2c::Error);
}

}  // namespace
