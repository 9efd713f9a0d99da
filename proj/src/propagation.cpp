#include "secsim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace secsim {

double path_loss_constant(double carrier_hz) {
  const double k = kSpeedOfLight / (4.0 * kPi * carrier_hz);
  return k * k;
}

double path_loss(double distance, double exponent, double carrier_hz, double ref_distance) {
  return path_loss_constant(carrier_hz) * std::pow(std::max(ref_distance, distance), -exponent);
}

RxComponents eve_rx_components(const SystemParams& params, double gain, double loss,
                               double rho_applied) {
  const double received = params.tx_power * gain * loss * rho_applied;
  return {(1.0 - params.ts_ratio) * received, params.ts_ratio * received};
}

double sinr(const LinkBudget& b) {
  const double denom = b.self_interference + b.external_interference + b.noise;
  if (!(denom > 0.0)) throw std::domain_error("sinr: interference plus noise is zero");
  return b.signal_power / denom;
}

}  // namespace secsim
