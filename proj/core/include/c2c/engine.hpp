#pragma once

// Per-second simulation loop: traces and stations in, one TickResult per
// (tick, present vehicle) out.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "c2c/config.hpp"
#include "c2c/linkrate.hpp"
#include "c2c/mobility.hpp"
#include "c2c/radio.hpp"
#include "c2c/results.hpp"

namespace c2c {

struct RunSummary {
  std::string scenario_label;
  Tick first_tick = 0;
  Tick last_tick = -1;
  std::size_t vehicles = 0;
  std::size_t rows = 0;
  std::uint64_t packages_generated = 0;
  std::uint64_t packages_sent = 0;
  std::uint64_t bytes_generated = 0;
  std::uint64_t bytes_sent = 0;
  // Still queued when their vehicle left the trace.
  std::uint64_t undelivered_packages = 0;
  std::uint64_t undelivered_bytes = 0;
  double mean_rate_bps = 0.0;
};

struct RunOutput {
  ResultTable results;  // ordered by (t, vehicle_id)
  RunSummary summary;
};

// Throws ErrorKind::config for an empty station set or invalid config,
// ErrorKind::validation for traces that are not 1 Hz or repeat a vehicle.
// Module errors raised inside the loop carry tick and vehicle context.
RunOutput run(const SimConfig& config, std::span<const VehicleTrace> traces,
              std::span<const BaseStation> stations);
RunOutput run(const SimConfig& config, std::span<const VehicleTrace> traces,
              std::span<const BaseStation> stations, const RateModel& model);

struct TimeseriesPoint {
  Tick t = 0;
  double snr_db = 0.0;
  double rate_bps = 0.0;
};

// Throws ErrorKind::lookup for a vehicle absent from the results.
std::vector<TimeseriesPoint> vehicle_timeseries(std::span<const TickResult> results,
                                                const std::string& vehicle_id);

// Run metadata, the full config echo and the summary counters.
void write_summary_json(std::ostream& out, const SimConfig& config, const RunSummary& summary);

}  // namespace c2c
