// Closed-form stochastic-geometry quantities and the eavesdropping success
// probability (ESP) for independent and colluding eavesdroppers.
#pragma once

#include <optional>

#include "secsim/config.hpp"
#include "secsim/diagnostics.hpp"

namespace secsim {

/// Blockage statistics of a Boolean model of rectangles: the number of
/// obstacles crossing a link of length d is Poisson(beta0*d + p); k is the
/// fraction of crossings tall enough to cut the BS-receiver ray.
struct BlockageStats {
  double beta0 = 0.0;  // per meter, 2*lambda0*(E[L]+E[W])/pi
  double p = 0.0;      // lambda0*E[L]*E[W]
  double k = 1.0;      // height scaling factor
};

/// k = 1 - int_0^1 int_{Hmin}^{s*H_rx+(1-s)*H_b} f_H(h) dh ds, by adaptive
/// quadrature to 1e-8 absolute.
double height_scaling_factor(const SystemParams& params, double rx_height);

BlockageStats blockage_stats(const SystemParams& params);  // receiver at eve height
BlockageStats blockage_stats(const SystemParams& params, double rx_height);

double expected_blockage_count(const BlockageStats& stats, double d);
double los_probability(const BlockageStats& stats, double d);

struct ReflectionGeometry {
  double delay = 0.0;            // s
  double direct_distance = 0.0;  // m
  double incidence_angle = 0.0;  // rad

  /// tau = factor*D/c and the configured angle.
  static ReflectionGeometry nominal(const SystemParams& params, double direct_distance);
};

/// Void probability of a first-order reflection path, exp(-lambda0*A), clamped
/// to [0,1] (A < 0 clamps to 1 and is counted). Throws std::domain_error if
/// c*tau < D or D <= 0.
double reflection_probability(const ReflectionGeometry& geom, const SystemParams& params,
                              Diagnostics* diag = nullptr);

/// The literal published form exp(+lambda0*A), kept for comparison only.
double reflection_probability_published_sign(const ReflectionGeometry& geom,
                                             const SystemParams& params);

/// Distance to the nearest LOS base station (a defective CDF: its limit at
/// infinity is below one).
double nearest_los_bs_cdf(const BlockageStats& stats, double bs_density, double x);

/// int_0^r (2x/r^2) L(x) dx for one exponent. Regularized uses the clamped
/// path loss b*max(d_ref,x)^-alpha; PaperFaithful returns 2/(r^alpha (2-alpha))
/// and throws ModelError at alpha = 2.
double interference_integral(double alpha, const SystemParams& params, InterferenceMode mode);

/// Distance at which the LOS/reflection mixture of interferers is evaluated:
/// espEvalDistance if set, else the mean interferer distance 2r/3.
double mixture_distance(const SystemParams& params);

/// Mean aggregate interference from the other base stations, W.
double interference_mean(const SystemParams& params, const BlockageStats& stats,
                         InterferenceMode mode, Diagnostics* diag = nullptr);

struct EspInputs {
  SystemParams params;
  BlockageStats stats;
  InterferenceMode mode = InterferenceMode::Regularized;
  /// Fixed reflection geometry; unset uses the nominal geometry at each
  /// evaluation distance.
  std::optional<ReflectionGeometry> geometry;
  /// Distance for P_Los / P_Ref; unset evaluates at the threshold radii.
  std::optional<double> eval_distance;
  double expected_gain = 1.0;  // E[G_e]
  double interference = 0.0;   // W
  double noise = 0.0;          // W
};

/// Inputs derived from params (stats, E[G_e], interference mean, noise).
EspInputs make_esp_inputs(const SystemParams& params, Diagnostics* diag = nullptr);

struct ThresholdRadii {
  double los = 0.0;         // a
  double reflection = 0.0;  // b
};

/// Largest BS distances at which the LOS / reflected signal still clears
/// beta; both zero when (1-eta) - beta*eta <= 0.
ThresholdRadii threshold_radii(const EspInputs& in, double beta);

/// ESP under independent eavesdropping, clamped to [0,1].
double esp_independent(const EspInputs& in, double beta, Diagnostics* diag = nullptr);

struct ColludingEsp {
  double esp = 0.0;    // indicator: ratio > beta
  double ratio = 0.0;  // approximate aggregate SINR
};

/// ESP under colluding (MRC) eavesdropping with noise neglected. Throws
/// ModelError when the common LOS/reflection bracket is not positive.
ColludingEsp esp_colluding(const SystemParams& params, const BlockageStats& stats, double beta,
                           InterferenceMode mode, Diagnostics* diag = nullptr);

/// Known discrepancies in the published closed forms that affect these
/// params, as warnings (for validate-config and sweep headers).
Diagnostics audit_model(const SystemParams& params);

}  // namespace secsim
