#include "c2c/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "c2c/error.hpp"
#include "text.hpp"

namespace c2c {

namespace {

// min + mean offset: exact when all samples are equal, and never outside
// [min, max].
double mean_of(std::span<const double> sorted) {
  const double lo = sorted.front();
  double acc = 0.0;
  for (double x : sorted) acc += x - lo;
  const double m = lo + acc / static_cast<double>(sorted.size());
  return std::clamp(m, sorted.front(), sorted.back());
}

std::vector<double> rates_of(std::span<const TickResult> results) {
  std::vector<double> out;
  out.reserve(results.size());
  for (const auto& r : results) out.push_back(r.rate_bps);
  return out;
}

nlohmann::ordered_json ratio_json(const Ratio& r) {
  switch (r.kind) {
    case Ratio::Kind::infinite:
      return "inf";
    case Ratio::Kind::undefined:
      return "undefined";
    case Ratio::Kind::finite:
      break;
  }
  return r.value;
}

}  // namespace

double percentile(std::span<const double> sorted, int p) {
  if (sorted.empty()) throw Error(ErrorKind::validation, "percentile of an empty sample");
  if (p < 0 || p > 100) throw Error(ErrorKind::validation, "percentile must lie in 0..100");
  const std::size_t n = sorted.size();
  const std::size_t rank = (static_cast<std::size_t>(p) * n + 99) / 100;  // ceil(p n / 100)
  return sorted[rank == 0 ? 0 : rank - 1];
}

RateStats rate_stats(std::span<const double> rates, const std::string& scenario_label) {
  if (rates.empty()) {
    throw Error(ErrorKind::validation, "no rate samples for scenario '" + scenario_label + "'");
  }
  std::vector<double> sorted(rates.begin(), rates.end());
  for (double r : sorted) {
    if (!std::isfinite(r)) throw Error(ErrorKind::validation, "non-finite rate sample");
  }
  std::sort(sorted.begin(), sorted.end());
  RateStats s;
  s.scenario_label = scenario_label;
  s.sample_count = sorted.size();
  s.min_rate = sorted.front();
  s.max_rate = sorted.back();
  s.mean_rate = mean_of(sorted);
  for (int p : kReportedPercentiles) s.percentiles[p] = percentile(sorted, p);
  return s;
}

RateStats rate_stats(std::span<const TickResult> results, const std::string& scenario_label,
                     Pooling pooling) {
  if (pooling == Pooling::tick) return rate_stats(rates_of(results), scenario_label);
  std::map<std::string, std::vector<double>> by_vehicle;
  for (const auto& r : results) by_vehicle[r.vehicle_id].push_back(r.rate_bps);
  std::vector<double> means;
  means.reserve(by_vehicle.size());
  for (auto& [id, rates] : by_vehicle) {
    std::sort(rates.begin(), rates.end());
    means.push_back(mean_of(rates));
  }
  return rate_stats(means, scenario_label);
}

std::vector<CdfPoint> cdf(std::span<const double> rates) {
  if (rates.empty()) throw Error(ErrorKind::validation, "cdf of an empty sample");
  std::vector<double> sorted(rates.begin(), rates.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.push_back({sorted[i], i + 1 == sorted.size() ? 1.0 : static_cast<double>(i + 1) / n});
  }
  return out;
}

std::vector<CdfPoint> cdf(std::span<const TickResult> results) { return cdf(rates_of(results)); }

RbPlan plan_rb(double required_rate, double snr, double speed, const RateModel& model) {
  if (!std::isfinite(required_rate) || required_rate < 0.0) {
    throw Error(ErrorKind::validation, "required rate must be a finite value >= 0");
  }
  RbPlan plan{required_rate, snr, speed, model.rb_rate(snr, speed), 0};
  if (required_rate == 0.0) return plan;
  if (!(plan.rb_rate > 0.0)) {
    throw Error(ErrorKind::infeasible, "link in outage at snr " + text::format_double(snr) +
                                           " dB: no number of resource blocks carries " +
                                           text::format_double(required_rate) + " bit/s");
  }
  const double ratio = std::ceil(required_rate / plan.rb_rate);
  if (ratio > 1e18) throw Error(ErrorKind::infeasible, "required resource blocks overflow");
  auto n = static_cast<std::uint64_t>(ratio);
  // Correct the quotient's rounding in either direction.
  while (static_cast<double>(n) * plan.rb_rate < required_rate) ++n;
  while (n > 1 && static_cast<double>(n - 1) * plan.rb_rate >= required_rate) --n;
  plan.rb_needed = n;
  return plan;
}

RbPlan plan_rb(double required_rate, double snr, double speed, const RbRateParams& params) {
  return plan_rb(required_rate, snr, speed, ShannonRateModel(params));
}

Ratio Ratio::of(double a, double b) {
  if (b == 0.0) return {a == 0.0 ? Kind::undefined : Kind::infinite, 0.0};
  return {Kind::finite, a / b};
}

RatioReport compare_scenarios(const RateStats& a, const RateStats& b) {
  RatioReport out;
  out.label_a = a.scenario_label;
  out.label_b = b.scenario_label;
  out.mean = Ratio::of(a.mean_rate, b.mean_rate);
  for (const auto& [p, value] : a.percentiles) {
    const auto other = b.percentiles.find(p);
    if (other != b.percentiles.end()) out.percentiles[p] = Ratio::of(value, other->second);
  }
  return out;
}

void write_stats_json(std::ostream& out, std::span<const RateStats> stats,
                      const std::optional<RatioReport>& ratios, Pooling pooling) {
  nlohmann::ordered_json j;
  j["pooling"] = pooling == Pooling::tick ? "tick" : "vehicle";
  j["percentile_convention"] = "lower-step";
  j["guaranteed_rate_95pct_of_cases"] = "p5";
  auto& list = j["scenarios"];
  list = nlohmann::ordered_json::array();
  for (const auto& s : stats) {
    nlohmann::ordered_json e;
    e["scenario_label"] = s.scenario_label;
    e["sample_count"] = s.sample_count;
    e["mean_rate_bps"] = s.mean_rate;
    e["min_rate_bps"] = s.min_rate;
    e["max_rate_bps"] = s.max_rate;
    auto& pct = e["percentiles_bps"];
    pct = nlohmann::ordered_json::object();
    for (const auto& [p, v] : s.percentiles) pct["p" + std::to_string(p)] = v;
    list.push_back(std::move(e));
  }
  if (ratios) {
    nlohmann::ordered_json r;
    r["numerator"] = ratios->label_a;
    r["denominator"] = ratios->label_b;
    r["mean"] = ratio_json(ratios->mean);
    auto& pct = r["percentiles"];
    pct = nlohmann::ordered_json::object();
    for (const auto& [p, v] : ratios->percentiles) pct["p" + std::to_string(p)] = ratio_json(v);
    j["ratios"] = std::move(r);
  }
  out << j.dump(2) << '\n';
}

void write_cdf_csv(std::ostream& out, std::span<const CdfPoint> points) {
  out << "rate_bps,cum_prob\n";
  for (const auto& p : points) {
    out << text::format_double(p.rate) << ',' << text::format_double(p.cum_prob) << '\n';
  }
}

void write_cell_packages_csv(std::ostream& out, const std::map<std::string, double>& per_cell) {
  out << "station_id,mean_packages\n";
  for (const auto& [station, mean] : per_cell) {
    out << station << ',' << text::format_double(mean) << '\n';
  }
}

}  // namespace c2c
