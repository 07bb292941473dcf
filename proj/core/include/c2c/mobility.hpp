#pragma once

// Vehicle mobility: 1 Hz trajectories from a single-lane Krauss car follower.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace c2c {

using Tick = std::int64_t;

struct TraceSample {
  Tick t = 0;
  double x = 0.0;      // m
  double y = 0.0;      // m
  double speed = 0.0;  // m/s

  bool operator==(const TraceSample&) const = default;
};

// Samples of one vehicle, strictly increasing in t with step 1.
struct VehicleTrace {
  std::string vehicle_id;
  std::vector<TraceSample> samples;

  bool operator==(const VehicleTrace&) const = default;
};

using TraceSet = std::vector<VehicleTrace>;

struct KraussParams {
  double a_max = 1.5;          // m/s^2
  double b_max = 4.5;          // m/s^2
  double v_max = 130.0 / 3.6;  // m/s
  double sigma = 0.5;          // driver imperfection
  double tau = 1.0;            // s
  double min_gap = 2.5;        // m
  double veh_length = 5.0;     // m
  double speed_dev = 0.1;

  // Throws ErrorKind::config on out-of-range values.
  void validate() const;
};

enum class Topology { strip, ring };

Topology parse_topology(const std::string& text);
const char* to_string(Topology topology) noexcept;

inline constexpr double kFreeFlowInflow = 1000.0;  // veh/h
inline constexpr double kTrafficJamInflow = 4000.0;

struct RoadSpec {
  Topology topology = Topology::strip;
  double length = 10000.0;  // m
  // Strip: arrivals per hour at the origin. Ring: number of vehicles.
  double inflow = kFreeFlowInflow;
  Tick duration = 600;  // s
  std::uint64_t seed = 1;
  // Strip only: start with the road already populated at the inflow's
  // headway instead of empty.
  bool prefill = true;
  // Strip only: low-speed section [zone_start, zone_end) with limit
  // zone_speed (m/s), acting as the downstream bottleneck that lets demand
  // above capacity back up into a jam. zone_speed <= 0 disables it.
  double zone_start = 9000.0;
  double zone_end = 9100.0;
  double zone_speed = 15.0 / 3.6;

  bool has_zone() const {
    return topology == Topology::strip && zone_speed > 0.0 && zone_end > zone_start;
  }

  void validate() const;
};

struct VehicleKinematicState {
  std::string vehicle_id;
  double position = 0.0;  // m along the road axis
  double speed = 0.0;     // m/s
  double desired_speed_factor = 1.0;
};

// Krauss safe-speed update over one step of `dt` seconds.
//
//   g      = leader.position - position - veh_length - min_gap
//   v_safe = v_l + (g - v_l*tau) / ((v_l + v) / (2*b_max) + tau)
//   v_des  = min(v_max*factor, v + a_max*dt, v_safe)
//   v'     = max(0, v_des - sigma*a_max*dt*rng_draw)
//
// `leader` may be null (free road). For rings the caller passes the leader
// with its position unwrapped so that it lies ahead of the follower.
// Throws ErrorKind::integrity when the gap is negative.
VehicleKinematicState krauss_step(const VehicleKinematicState& follower,
                                  const VehicleKinematicState* leader,
                                  const KraussParams& params, double dt,
                                  double rng_draw);

// Same update with an external speed cap (road limit) applied before the
// desired-speed factor: v_des <= min(v_max, speed_limit) * factor.
VehicleKinematicState krauss_step(const VehicleKinematicState& follower,
                                  const VehicleKinematicState* leader,
                                  const KraussParams& params, double dt,
                                  double rng_draw, double speed_limit);

// Net gap between follower front and leader rear minus min_gap.
double net_gap(const VehicleKinematicState& follower,
               const VehicleKinematicState& leader, const KraussParams& params);

// Synthetic trajectories. Strips run along the x axis (y = 0) with vehicles
// injected at x = 0; rings are laid on a circle of the given circumference
// centred at the origin. Output is sorted by vehicle_id and deterministic in
// (road, params).
TraceSet generate_traces(const RoadSpec& road, const KraussParams& params);

// Bin lower edge -> probability, pooled over all samples.
std::map<double, double> speed_distribution(std::span<const VehicleTrace> traces,
                                            double bin_width);

double mean_speed(std::span<const VehicleTrace> traces);

}  // namespace c2c
