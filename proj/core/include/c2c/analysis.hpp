#pragma once

// Rate statistics, empirical CDFs, scenario ratios and the inverse
// resource-block planner.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "c2c/config.hpp"
#include "c2c/linkrate.hpp"
#include "c2c/results.hpp"

namespace c2c {

inline constexpr int kReportedPercentiles[] = {1, 5, 25, 50, 75, 95, 99};

struct RateStats {
  std::string scenario_label;
  double mean_rate = 0.0;  // bit/s
  double min_rate = 0.0;
  double max_rate = 0.0;
  std::map<int, double> percentiles;  // p -> bit/s
  std::size_t sample_count = 0;
};

// Lower-step percentile of an ascending sample: the smallest value whose
// empirical CDF reaches p / 100. p in 0..100; p = 0 gives the minimum.
double percentile(std::span<const double> sorted, int p);

// Throws ErrorKind::validation for an empty sample.
RateStats rate_stats(std::span<const double> rates, const std::string& scenario_label);

// Tick pooling uses every (tick, vehicle) rate; vehicle pooling uses one
// time-averaged rate per vehicle.
RateStats rate_stats(std::span<const TickResult> results, const std::string& scenario_label,
                     Pooling pooling = Pooling::tick);

struct CdfPoint {
  double rate = 0.0;
  double cum_prob = 0.0;

  bool operator==(const CdfPoint&) const = default;
};

// One point per distinct rate, ascending; the last probability is 1.
std::vector<CdfPoint> cdf(std::span<const double> rates);
std::vector<CdfPoint> cdf(std::span<const TickResult> results);

struct RbPlan {
  double required_rate = 0.0;  // bit/s
  double snr = 0.0;            // dB
  double speed = 0.0;          // m/s
  double rb_rate = 0.0;        // bit/s per RB
  std::uint64_t rb_needed = 0;
};

// Smallest n with n * rb_rate(snr, speed) >= required_rate.
// Throws ErrorKind::infeasible when the link is in outage and demand is
// positive, ErrorKind::validation for a negative or non-finite demand.
RbPlan plan_rb(double required_rate, double snr, double speed, const RateModel& model);
RbPlan plan_rb(double required_rate, double snr, double speed, const RbRateParams& params);

// a / b, with division by zero kept explicit.
struct Ratio {
  enum class Kind { finite, infinite, undefined };  // undefined: 0 / 0
  Kind kind = Kind::finite;
  double value = 0.0;

  static Ratio of(double a, double b);
};

struct RatioReport {
  std::string label_a;
  std::string label_b;
  Ratio mean;
  std::map<int, Ratio> percentiles;
};

RatioReport compare_scenarios(const RateStats& a, const RateStats& b);

// stats.json: one entry per scenario plus, when given, the ratio report.
void write_stats_json(std::ostream& out, std::span<const RateStats> stats,
                      const std::optional<RatioReport>& ratios, Pooling pooling);

// `rate_bps,cum_prob`
void write_cdf_csv(std::ostream& out, std::span<const CdfPoint> points);

// `station_id,mean_packages`
void write_cell_packages_csv(std::ostream& out, const std::map<std::string, double>& per_cell);

}  // namespace c2c
