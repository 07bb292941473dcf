#include "c2c/radio.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "c2c/error.hpp"
#include "text.hpp"

namespace c2c {

namespace {

void check_height(double height, const char* what) {
  if (!(height > 1.0)) {
    throw Error(ErrorKind::config, std::string(what) + " antenna height must exceed 1 m (got " +
                                       text::format_double(height) + ")");
  }
}

}  // namespace

void LinkBudgetConfig::validate() const {
  if (!(carrier_freq > 0.0)) throw Error(ErrorKind::config, "radio.carrier_freq must be positive");
  check_height(ue_height, "UE");
  for (double v : {tx_power, ue_gain, noise_figure, noise_power, path_loss_offset}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::config, "radio parameters must be finite");
  }
}

double breakpoint_distance(const LinkBudgetConfig& cfg, double bs_height) {
  check_height(bs_height, "BS");
  check_height(cfg.ue_height, "UE");
  const double freq_hz = cfg.carrier_freq * 1e9;
  return 4.0 * (bs_height - 1.0) * (cfg.ue_height - 1.0) * freq_hz / kSpeedOfLight;
}

double path_loss_b1(double distance, const LinkBudgetConfig& cfg, double bs_height) {
  const double d_bp = breakpoint_distance(cfg, bs_height);
  const double d = std::max(distance, kMinB1Distance);
  const double f_ratio = cfg.carrier_freq / 5.0;
  double loss = 0.0;
  if (d <= d_bp) {
    loss = 22.7 * std::log10(d) + 41.0 + 20.0 * std::log10(f_ratio);
  } else {
    loss = 40.0 * std::log10(d) + 9.45 - 17.3 * std::log10(bs_height - 1.0) -
           17.3 * std::log10(cfg.ue_height - 1.0) + 2.7 * std::log10(f_ratio);
  }
  return loss + cfg.path_loss_offset;
}

double budget_constant(const BaseStation& station, const LinkBudgetConfig& cfg) {
  return cfg.tx_power + cfg.ue_gain + station.antenna_gain -
         (cfg.noise_power + cfg.noise_figure);
}

SnrSample snr(double x, double y, const BaseStation& station, const LinkBudgetConfig& cfg) {
  SnrSample out;
  out.distance = std::hypot(x - station.x, y - station.y);
  out.path_loss = path_loss_b1(out.distance, cfg, station.height);
  out.snr = budget_constant(station, cfg) - out.path_loss;
  return out;
}

Association best_link(double x, double y, std::span<const BaseStation> stations,
                      const LinkBudgetConfig& cfg) {
  if (stations.empty()) throw Error(ErrorKind::config, "no base stations configured");
  Association best{0, snr(x, y, stations[0], cfg)};
  for (std::size_t i = 1; i < stations.size(); ++i) {
    const SnrSample s = snr(x, y, stations[i], cfg);
    if (s.snr > best.link.snr ||
        (s.snr == best.link.snr &&
         stations[i].station_id < stations[best.station_index].station_id)) {
      best = {i, s};
    }
  }
  return best;
}

const std::string& associate(double x, double y, std::span<const BaseStation> stations,
                             const LinkBudgetConfig& cfg) {
  return stations[best_link(x, y, stations, cfg).station_index].station_id;
}

std::vector<BaseStation> parse_station_csv(std::istream& in, double default_gain,
                                           double default_height) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::parse, "station CSV: missing header");
  }
  const auto header = text::split(text::trim(line), ',');
  const std::vector<std::string_view> expected{"station_id", "x", "y", "antenna_gain", "height"};
  if (header.size() < 3 || header.size() > expected.size()) {
    throw Error(ErrorKind::parse, "station CSV line 1: bad header '" + line + "'");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (text::trim(header[i]) != expected[i]) {
      throw Error(ErrorKind::parse, "station CSV line 1: unexpected column '" +
                                        std::string(header[i]) + "'");
    }
  }

  std::vector<BaseStation> out;
  std::set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(text::trim(line), ',');
    auto fail = [&](ErrorKind kind, const std::string& why) {
      throw Error(kind, "station CSV line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < 3 || fields.size() > header.size()) {
      fail(ErrorKind::parse, "expected " + std::to_string(header.size()) + " fields");
    }
    BaseStation bs;
    bs.station_id = std::string(text::trim(fields[0]));
    if (bs.station_id.empty()) fail(ErrorKind::parse, "empty station_id");
    const auto x = text::parse_double(fields[1]);
    const auto y = text::parse_double(fields[2]);
    if (!x || !y) fail(ErrorKind::parse, "x and y must be finite numbers");
    bs.x = *x;
    bs.y = *y;
    bs.antenna_gain = default_gain;
    bs.height = default_height;
    auto optional_column = [&](std::size_t i, double& target) {
      if (i >= fields.size() || text::trim(fields[i]).empty()) return;
      const auto v = text::parse_double(fields[i]);
      if (!v) fail(ErrorKind::parse, "column " + std::string(expected[i]) + " is not a number");
      target = *v;
    };
    optional_column(3, bs.antenna_gain);
    optional_column(4, bs.height);
    if (!(bs.height > 1.0)) fail(ErrorKind::validation, "height must exceed 1 m");
    if (!seen.insert(bs.station_id).second) {
      fail(ErrorKind::validation, "duplicate station_id '" + bs.station_id + "'");
    }
    out.push_back(std::move(bs));
  }
  return out;
}

void emit_station_csv(std::ostream& out, std::span<const BaseStation> stations) {
  out << "station_id,x,y,antenna_gain,height\n";
  for (const auto& s : stations) {
    out << s.station_id << ',' << text::format_double(s.x) << ',' << text::format_double(s.y)
        << ',' << text::format_double(s.antenna_gain) << ',' << text::format_double(s.height)
        << '\n';
  }
}

}  // namespace c2c
