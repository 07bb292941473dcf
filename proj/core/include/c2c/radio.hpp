#pragma once

// Uplink link budget: WINNER II B1 (LOS) path loss, SNR and best-SNR cell
// association.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace c2c {

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s
inline constexpr double kMinB1Distance = 10.0;  // m

struct BaseStation {
  std::string station_id;
  double x = 0.0;
  double y = 0.0;
  double antenna_gain = 15.0;  // dBi
  double height = 10.0;        // m
};

struct LinkBudgetConfig {
  double carrier_freq = 1.8;    // GHz
  double tx_power = 23.0;       // dBm
  double ue_gain = 1.0;         // dBi
  double ue_height = 1.5;       // m
  double noise_figure = 6.0;    // dB
  double noise_power = -100.0;  // dBm
  // Additive term folded into the path loss (shadowing hook), dB.
  double path_loss_offset = 0.0;

  void validate() const;
};

struct SnrSample {
  double distance = 0.0;   // m
  double path_loss = 0.0;  // dB
  double snr = 0.0;        // dB
};

// 4 h'_bs h'_ue f / c with effective heights h' = h - 1 m.
double breakpoint_distance(const LinkBudgetConfig& cfg, double bs_height);

// B1 LOS path loss in dB; distances below 10 m are clamped to 10 m.
// Throws ErrorKind::config if either antenna is not above 1 m.
double path_loss_b1(double distance, const LinkBudgetConfig& cfg, double bs_height);

// tx_power + ue_gain + bs_gain - (noise_power + noise_figure), i.e. the
// path loss at which the SNR is 0 dB.
double budget_constant(const BaseStation& station, const LinkBudgetConfig& cfg);

SnrSample snr(double x, double y, const BaseStation& station, const LinkBudgetConfig& cfg);

struct Association {
  std::size_t station_index = 0;  // into the station span
  SnrSample link;
};

// Best-SNR station; ties go to the lexicographically smallest station_id.
// Throws ErrorKind::config for an empty station set.
Association best_link(double x, double y, std::span<const BaseStation> stations,
                      const LinkBudgetConfig& cfg);

const std::string& associate(double x, double y, std::span<const BaseStation> stations,
                             const LinkBudgetConfig& cfg);

// `station_id,x,y[,antenna_gain[,height]]`; missing or empty gain/height
// columns take the given defaults. Throws ErrorKind::parse / validation.
std::vector<BaseStation> parse_station_csv(std::istream& in, double default_gain = 15.0,
                                           double default_height = 10.0);
void emit_station_csv(std::ostream& out, std::span<const BaseStation> stations);

}  // namespace c2c
