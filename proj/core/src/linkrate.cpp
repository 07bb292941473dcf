#include "c2c/linkrate.hpp"

#include <algorithm>
#include <cmath>

#include "c2c/error.hpp"

namespace c2c {

void RbRateParams::validate() const {
  if (!(rb_bandwidth > 0.0)) throw Error(ErrorKind::config, "linkrate.rb_bandwidth must be positive");
  if (!(attenuation_beta > 0.0 && attenuation_beta <= 1.0)) {
    throw Error(ErrorKind::config, "linkrate.attenuation_beta must lie in (0, 1]");
  }
  if (!(eta_max > 0.0)) throw Error(ErrorKind::config, "linkrate.eta_max must be positive");
  if (!(speed_penalty_at_vmax >= 0.0 && speed_penalty_at_vmax < 1.0)) {
    throw Error(ErrorKind::config, "linkrate.speed_penalty_at_vmax must lie in [0, 1)");
  }
  if (!(v_ref > 0.0)) throw Error(ErrorKind::config, "linkrate.v_ref must be positive");
  if (!std::isfinite(snr_min)) throw Error(ErrorKind::config, "linkrate.snr_min must be finite");
}

double speed_factor(double speed, const RbRateParams& params) {
  return 1.0 - params.speed_penalty_at_vmax * std::min(speed, params.v_ref) / params.v_ref;
}

double rb_rate(double snr_db, double speed, const RbRateParams& params) {
  if (snr_db < params.snr_min) return 0.0;
  const double snr_linear = std::pow(10.0, snr_db / 10.0);
  const double efficiency =
      std::min(params.attenuation_beta * std::log2(1.0 + snr_linear), params.eta_max);
  return efficiency * params.rb_bandwidth * speed_factor(speed, params);
}

double cell_peak_rate(std::size_t n_rb, double snr_db, double speed, const RbRateParams& params) {
  return static_cast<double>(n_rb) * rb_rate(snr_db, speed, params);
}

ShannonRateModel::ShannonRateModel(RbRateParams params) : params_(params) {
  params_.validate();
}

double ShannonRateModel::rb_rate(double snr_db, double speed) const {
  return c2c::rb_rate(snr_db, speed, params_);
}

}  // namespace c2c
