#pragma once

// Achievable uplink rate per LTE resource block as a function of SNR and
// vehicle speed.

#include <cstddef>

namespace c2c {

struct RbRateParams {
  double rb_bandwidth = 180000.0;  // Hz
  double attenuation_beta = 0.6;
  double eta_max = 5.55;  // bit/s/Hz
  double snr_min = -10.0;  // dB, outage below
  double speed_penalty_at_vmax = 0.3;
  double v_ref = 130.0 / 3.6;  // m/s

  void validate() const;
};

// Any model used by the scheduler and engine. Implementations must be
// nondecreasing in snr and nonincreasing in speed.
class RateModel {
 public:
  virtual ~RateModel() = default;
  virtual double rb_rate(double snr_db, double speed) const = 0;  // bit/s
};

// Truncated, attenuated Shannon bound with a linear speed penalty:
//   r = min(beta * log2(1 + snr_lin), eta_max) * B * phi(v),
//   phi(v) = 1 - penalty * min(v, v_ref) / v_ref,
// and r = 0 below snr_min.
class ShannonRateModel final : public RateModel {
 public:
  explicit ShannonRateModel(RbRateParams params = {});

  double rb_rate(double snr_db, double speed) const override;
  const RbRateParams& params() const { return params_; }

 private:
  RbRateParams params_;
};

double rb_rate(double snr_db, double speed, const RbRateParams& params);

double speed_factor(double speed, const RbRateParams& params);

double cell_peak_rate(std::size_t n_rb, double snr_db, double speed, const RbRateParams& params);

}  // namespace c2c
