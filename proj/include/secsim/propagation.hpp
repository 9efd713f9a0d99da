// Link-budget arithmetic: path loss, reflection attenuation, the
// time-switching split of received power, and SINR.
#pragma once

#include "secsim/config.hpp"

namespace secsim {

struct LinkBudget {
  double signal_power = 0.0;           // information slot, W
  double self_interference = 0.0;      // energy slot leakage from the same BS, W
  double external_interference = 0.0;  // other BSs, W
  double noise = 0.0;                  // W
};

/// Free-space constant (c / (4 pi f_c))^2.
double path_loss_constant(double carrier_hz);

/// (c/(4 pi f_c))^2 * max(d_ref, d)^(-alpha).
double path_loss(double distance, double exponent, double carrier_hz, double ref_distance);

inline double reflected_power(double p_incident, double rho) { return rho * p_incident; }

struct RxComponents {
  double signal = 0.0;
  double self_interference = 0.0;
};

/// Split P_t * gain * loss * rho_applied into the information fraction (1-eta)
/// and the energy fraction eta that the eavesdropper sees as interference.
RxComponents eve_rx_components(const SystemParams& params, double gain, double loss,
                               double rho_applied);

/// S / (I_self + I_ext + noise). Throws std::domain_error on a zero
/// denominator.
double sinr(const LinkBudget& budget);

}  // namespace secsim
