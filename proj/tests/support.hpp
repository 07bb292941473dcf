#pragma once

// Helpers shared by the unit, CLI and acceptance tests.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "c2c/mobility.hpp"
#include "c2c/radio.hpp"

namespace c2c::fixtures {

// Five stations every 2 km along a 10 km strip, 20 m off the road axis.
inline std::vector<BaseStation> strip_stations() {
  std::vector<BaseStation> out;
  for (int i = 0; i < 5; ++i) {
    out.push_back({"bs" + std::to_string(i + 1), 1000.0 + 2000.0 * i, 20.0});
  }
  return out;
}

struct GapReport {
  double min_gap = INFINITY;  // smallest net gap seen, m
  std::size_t pairs = 0;
};

// Net gaps (rear of leader - front of follower - min_gap) between
// neighbours at every tick. Strips order by x; rings by arc length.
inline GapReport scan_gaps(const TraceSet& traces, const KraussParams& p, Topology topo,
                           double length) {
  std::map<Tick, std::vector<double>> by_tick;
  for (const auto& tr : traces) {
    for (const auto& s : tr.samples) {
      double pos = s.x;
      if (topo == Topology::ring) {
        double a = std::atan2(s.y, s.x);
        if (a < 0) a += 2 * std::numbers::pi;
        pos = a * length / (2 * std::numbers::pi);
      }
      by_tick[s.t].push_back(pos);
    }
  }
  GapReport rep;
  for (auto& [t, pos] : by_tick) {
    std::sort(pos.begin(), pos.end());
    for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
      rep.min_gap = std::min(rep.min_gap, pos[i + 1] - pos[i] - p.veh_length - p.min_gap);
      ++rep.pairs;
    }
    if (topo == Topology::ring && pos.size() > 1) {
      rep.min_gap =
          std::min(rep.min_gap, pos.front() + length - pos.back() - p.veh_length - p.min_gap);
      ++rep.pairs;
    }
  }
  return rep;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("c2c_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace c2c::fixtures
