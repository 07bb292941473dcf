#pragma once

// Simulation configuration and its flat `section.key = value` text form.
//
//   # comment
//   road.inflow = 4000
//   scheduler.mode = integer
//
// Unknown keys and malformed values raise ErrorKind::config naming the key.

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "c2c/cvim.hpp"
#include "c2c/linkrate.hpp"
#include "c2c/mobility.hpp"
#include "c2c/radio.hpp"
#include "c2c/scheduler.hpp"

namespace c2c {

struct CellConfig {
  std::size_t n_rb = kDefaultRbPerCell;
  std::size_t rb_limit = 0;  // 0: no limit; otherwise overrides n_rb
  AllocationMode mode = AllocationMode::fractional;

  std::size_t effective_rb() const { return rb_limit > 0 ? rb_limit : n_rb; }
};

struct CvimConfig {
  PackageSizing sizing;
  std::size_t n_extra = 0;
  std::uint32_t aggregate_ticks = 1;
  std::set<std::uint16_t> priority_channels;  // empty: pure FIFO
  std::string pseudonym_key = "c2c-default-key";
  std::string owner = "vehicle-owner";
  PrivacyLevel privacy = PrivacyLevel::restricted;
};

enum class Pooling { tick, vehicle };

struct SimConfig {
  std::string scenario_label = "free_flow";
  std::uint64_t seed = 1;
  RoadSpec road;
  KraussParams krauss;
  LinkBudgetConfig radio;
  double bs_gain = 15.0;     // default for station files without the column
  double bs_height = 10.0;
  RbRateParams linkrate;
  CellConfig cell;
  CvimConfig cvim;
  Pooling pooling = Pooling::tick;

  // Throws ErrorKind::config.
  void validate() const;

  // RoadSpec with the run seed applied.
  RoadSpec road_spec() const;
};

// Defaults for the two traffic states (only label and inflow differ).
SimConfig free_flow_config();
SimConfig traffic_jam_config();

// Applies every `key = value` line of the stream on top of `config`.
void load_config(std::istream& in, SimConfig& config);
void load_config_file(const std::string& path, SimConfig& config);

// One `section.key=value` assignment (CLI --set).
void apply_override(std::string_view assignment, SimConfig& config);
void set_config_value(const std::string& key, std::string_view value, SimConfig& config);

// Every key with its current value, in a stable order.
std::vector<std::pair<std::string, std::string>> config_entries(const SimConfig& config);

void write_config(std::ostream& out, const SimConfig& config);

}  // namespace c2c
