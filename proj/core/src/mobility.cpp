#include "c2c/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>

#include "c2c/error.hpp"
#include "c2c/rng.hpp"

namespace c2c {

namespace {

// Rounding slack for the overlap check; exact-zero gaps are legal.
constexpr double kGapTolerance = 1e-9;

constexpr double kFactorMin = 0.7;
constexpr double kFactorMax = 1.3;

std::string vehicle_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%06zu", index);
  return buf;
}

struct Driver {
  VehicleKinematicState state;
  Rng rng;
  std::vector<TraceSample> samples;
};

Driver make_driver(std::size_t index, const RoadSpec& road,
                   const KraussParams& params) {
  Driver d{VehicleKinematicState{vehicle_name(index), 0.0, 0.0, 1.0},
           Rng::stream(road.seed, vehicle_name(index)), {}};
  const double draw = 1.0 + params.speed_dev * d.rng.normal();
  d.state.desired_speed_factor = std::clamp(draw, kFactorMin, kFactorMax);
  return d;
}

double safe_speed(double gap, double v_leader, double v_follower,
                  const KraussParams& p) {
  return v_leader + (gap - v_leader * p.tau) /
                        ((v_leader + v_follower) / (2.0 * p.b_max) + p.tau);
}

// Road limit (before the driver's speed factor) seen by a vehicle at
// `position`: the zone limit inside the zone; ahead of it, the highest limit
// from which b_max still brings the driver to the zone speed at its start.
double road_limit(const RoadSpec& road, double position, double factor,
                  const KraussParams& p) {
  if (!road.has_zone() || position >= road.zone_end) {
    return std::numeric_limits<double>::infinity();
  }
  if (position >= road.zone_start) return road.zone_speed;
  const double distance = road.zone_start - position;
  return std::sqrt(road.zone_speed * road.zone_speed +
                   2.0 * p.b_max * distance / (factor * factor));
}

TraceSet collect(std::vector<Driver>& finished) {
  TraceSet out;
  out.reserve(finished.size());
  for (auto& d : finished) {
    if (!d.samples.empty()) {
      out.push_back({d.state.vehicle_id, std::move(d.samples)});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.vehicle_id < b.vehicle_id;
  });
  return out;
}

TraceSet generate_strip(const RoadSpec& road, const KraussParams& params) {
  const double arrival_rate = road.inflow / 3600.0;  // veh/s
  Rng arrivals = Rng::stream(road.seed, "arrivals");
  double next_arrival = arrivals.exponential(arrival_rate);
  std::size_t pending = 0;
  std::size_t created = 0;

  std::deque<Driver> on_road;  // front() is the most downstream vehicle
  std::vector<Driver> finished;

  if (road.prefill) {
    // Start from the demand-matched state: exponential time headways at the
    // inflow rate, converted to space headways at the nominal free speed and
    // laid out from the downstream end towards the origin.
    Rng layout = Rng::stream(road.seed, "prefill");
    const double min_spacing = params.veh_length + params.min_gap;
    double position = road.length - layout.uniform() * params.v_max / arrival_rate;
    while (position >= 0.0) {
      Driver d = make_driver(created++, road, params);
      d.state.position = position;
      const double wish = std::min(params.v_max, road_limit(road, position, d.state.desired_speed_factor, params)) *
                          d.state.desired_speed_factor;
      d.state.speed = wish;
      if (!on_road.empty()) {
        const auto& lead = on_road.back().state;
        const double gap = net_gap(d.state, lead, params);
        d.state.speed = std::max(0.0, std::min(wish, safe_speed(gap, lead.speed, wish, params)));
      }
      on_road.push_back(std::move(d));
      const double headway = layout.exponential(arrival_rate) * params.v_max;
      position -= std::max(headway, min_spacing);
    }
  }

  for (Tick t = 0; t < road.duration; ++t) {
    if (t > 0) {
      // Synchronous update from the states at t - 1.
      std::vector<VehicleKinematicState> next;
      next.reserve(on_road.size());
      for (std::size_t k = 0; k < on_road.size(); ++k) {
        const VehicleKinematicState* leader =
            k == 0 ? nullptr : &on_road[k - 1].state;
        const double draw = on_road[k].rng.uniform();
        // The limit is sampled once per tick, so it may drop by more than
        // b_max; never ask for a harder stop than the followers assume.
        const auto& s = on_road[k].state;
        const double limit =
            std::max(road_limit(road, s.position, s.desired_speed_factor, params),
                     (s.speed - params.b_max) / s.desired_speed_factor);
        next.push_back(krauss_step(on_road[k].state, leader, params, 1.0, draw, limit));
      }
      for (std::size_t k = 0; k < on_road.size(); ++k) {
        on_road[k].state = std::move(next[k]);
      }
      while (!on_road.empty() && on_road.front().state.position > road.length) {
        finished.push_back(std::move(on_road.front()));
        on_road.pop_front();
      }
    }

    while (next_arrival <= static_cast<double>(t)) {
      ++pending;
      next_arrival += arrivals.exponential(arrival_rate);
    }

    // At most one insertion per tick: every vehicle enters at x = 0.
    if (pending > 0) {
      Driver d = make_driver(created, road, params);
      const double wish = std::min(params.v_max, road_limit(road, 0.0, d.state.desired_speed_factor, params)) *
                          d.state.desired_speed_factor;
      bool blocked = false;
      double speed = wish;
      if (!on_road.empty()) {
        const auto& last = on_road.back().state;
        const double gap = net_gap(d.state, last, params);
        if (gap < 0.0) {
          blocked = true;
        } else {
          speed = std::max(0.0, std::min(wish, safe_speed(gap, last.speed, wish, params)));
        }
      }
      if (!blocked) {
        d.state.speed = speed;
        on_road.push_back(std::move(d));
        ++created;
        --pending;
      }
    }

    for (auto& d : on_road) {
      d.samples.push_back({t, d.state.position, 0.0, d.state.speed});
    }
  }

  for (auto& d : on_road) finished.push_back(std::move(d));
  return collect(finished);
}

TraceSet generate_ring(const RoadSpec& road, const KraussParams& params) {
  const auto n = static_cast<std::size_t>(std::llround(road.inflow));
  if (static_cast<double>(n) != road.inflow) {
    throw Error(ErrorKind::config, "road.inflow must be a whole vehicle count for a ring");
  }
  const double spacing = road.length / static_cast<double>(n);
  if (n > 1 && spacing < params.veh_length + params.min_gap) {
    throw Error(ErrorKind::config, "ring too short for " + std::to_string(n) + " vehicles");
  }
  const double radius = road.length / (2.0 * std::numbers::pi);

  // Positions are kept unwrapped (odometer); vehicle k + 1 is ahead of k.
  std::vector<Driver> drivers;
  drivers.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    drivers.push_back(make_driver(k, road, params));
    drivers.back().state.position = spacing * static_cast<double>(k);
  }

  auto record = [&](Tick t) {
    for (auto& d : drivers) {
      const double angle = std::fmod(d.state.position, road.length) / radius;
      d.samples.push_back(
          {t, radius * std::cos(angle), radius * std::sin(angle), d.state.speed});
    }
  };

  for (Tick t = 0; t < road.duration; ++t) {
    if (t > 0) {
      std::vector<VehicleKinematicState> next;
      next.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double draw = drivers[k].rng.uniform();
        if (n == 1) {
          next.push_back(krauss_step(drivers[k].state, nullptr, params, 1.0, draw));
          continue;
        }
        VehicleKinematicState leader = drivers[(k + 1) % n].state;
        if (k + 1 == n) leader.position += road.length;
        next.push_back(krauss_step(drivers[k].state, &leader, params, 1.0, draw));
      }
      for (std::size_t k = 0; k < n; ++k) drivers[k].state = std::move(next[k]);
    }
    record(t);
  }
  return collect(drivers);
}

}  // namespace

void KraussParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::config, std::string("krauss.") + name + " must be positive");
    }
  };
  positive(a_max, "a_max");
  positive(b_max, "b_max");
  positive(v_max, "v_max");
  positive(tau, "tau");
  positive(min_gap, "min_gap");
  positive(veh_length, "veh_length");
  positive(speed_dev, "speed_dev");
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw Error(ErrorKind::config, "krauss.sigma must lie in [0, 1]");
  }
}

Topology parse_topology(const std::string& text) {
  if (text == "strip") return Topology::strip;
  if (text == "ring") return Topology::ring;
  throw Error(ErrorKind::config, "unknown road topology '" + text + "'");
}

const char* to_string(Topology topology) noexcept {
  return topology == Topology::strip ? "strip" : "ring";
}

void RoadSpec::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorKind::config, "road.length must be positive");
  }
  if (!(inflow > 0.0) || !std::isfinite(inflow)) {
    throw Error(ErrorKind::config, "road.inflow must be positive");
  }
  if (duration < 0) throw Error(ErrorKind::config, "road.duration must be >= 0");
  if (!std::isfinite(zone_start) || !std::isfinite(zone_end) || !std::isfinite(zone_speed) ||
      zone_speed < 0.0) {
    throw Error(ErrorKind::config, "road.zone_* must be finite and zone_speed >= 0");
  }
}

double net_gap(const VehicleKinematicState& follower,
               const VehicleKinematicState& leader, const KraussParams& params) {
  return leader.position - follower.position - params.veh_length - params.min_gap;
}

VehicleKinematicState krauss_step(const VehicleKinematicState& follower,
                                  const VehicleKinematicState* leader,
                                  const KraussParams& params, double dt,
                                  double rng_draw) {
  return krauss_step(follower, leader, params, dt, rng_draw,
                     std::numeric_limits<double>::infinity());
}

VehicleKinematicState krauss_step(const VehicleKinematicState& follower,
                                  const VehicleKinematicState* leader,
                                  const KraussParams& params, double dt,
                                  double rng_draw, double speed_limit) {
  const double v = follower.speed;
  double v_des = std::min(std::min(params.v_max, speed_limit) * follower.desired_speed_factor,
                          v + params.a_max * dt);
  if (leader != nullptr) {
    const double gap = net_gap(follower, *leader, params);
    if (gap < -kGapTolerance) {
      throw Error(ErrorKind::integrity,
                  "vehicle " + follower.vehicle_id + " overlaps leader " +
                      leader->vehicle_id + " (gap " + std::to_string(gap) + " m)");
    }
    v_des = std::min(v_des, safe_speed(gap, leader->speed, v, params));
  }
  const double v_next =
      std::max(0.0, v_des - params.sigma * params.a_max * dt * rng_draw);

  VehicleKinematicState out = follower;
  out.speed = v_next;
  out.position = follower.position + v_next * dt;
  return out;
}

TraceSet generate_traces(const RoadSpec& road, const KraussParams& params) {
  road.validate();
  params.validate();
  if (road.duration == 0) return {};
  return road.topology == Topology::strip ? generate_strip(road, params)
                                          : generate_ring(road, params);
}

std::map<double, double> speed_distribution(std::span<const VehicleTrace> traces,
                                            double bin_width) {
  if (!(bin_width > 0.0)) {
    throw Error(ErrorKind::validation, "bin width must be positive");
  }
  std::map<double, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& trace : traces) {
    for (const auto& s : trace.samples) {
      ++counts[std::floor(s.speed / bin_width) * bin_width];
      ++total;
    }
  }
  if (total == 0) {
    throw Error(ErrorKind::validation, "speed distribution of an empty trace set");
  }
  std::map<double, double> out;
  for (const auto& [edge, count] : counts) {
    out[edge] = static_cast<double>(count) / static_cast<double>(total);
  }
  return out;
}

double mean_speed(std::span<const VehicleTrace> traces) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& trace : traces) {
    for (const auto& s : trace.samples) {
      sum += s.speed;
      ++n;
    }
  }
  if (n == 0) throw Error(ErrorKind::validation, "mean speed of an empty trace set");
  return sum / static_cast<double>(n);
}

}  // namespace c2c
