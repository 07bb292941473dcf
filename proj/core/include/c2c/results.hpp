#pragma once

// Per-vehicle, per-tick simulation output and its CSV form.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "c2c/mobility.hpp"

namespace c2c {

struct TickResult {
  Tick t = 0;
  std::string vehicle_id;
  std::string serving_station;
  double snr_db = 0.0;
  double rb_share = 0.0;
  double rate_bps = 0.0;
  std::uint32_t packages_generated = 0;
  std::uint64_t bits_sent = 0;
  std::uint64_t queue_bytes = 0;  // after this tick's transmission

  // Not part of results.csv; filled by the engine for accounting checks.
  std::uint32_t packages_sent = 0;
  std::uint64_t bytes_generated = 0;
  std::size_t queue_packages = 0;
  double speed = 0.0;
};

using ResultTable = std::vector<TickResult>;

inline constexpr const char* kResultsHeader =
    "t,vehicle_id,serving_station,snr_db,rb_share,rate_bps,packages_generated,bits_sent,queue_bytes";

void write_results_csv(std::ostream& out, std::span<const TickResult> results);

// Reads the CSV columns back; the accounting-only fields stay zero.
// Throws ErrorKind::parse with the line number on malformed rows.
ResultTable read_results_csv(std::istream& in);

}  // namespace c2c
