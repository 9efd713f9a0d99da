#include "secsim/analytic.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "secsim/antenna.hpp"
#include "secsim/geometry.hpp"
#include "secsim/propagation.hpp"

namespace secsim {

namespace {

constexpr double kQuadTol = 1e-8;

template <typename F>
double integrate(F f, double a, double b) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  // The tolerance argument is relative; scale it so the result is absolute.
  const double span = b - a;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 15, kQuadTol / std::max(1.0, span), &err);
}

double height_pdf(const SystemParams& params, double h) {
  const double lo = params.obstacle_height_min;
  const double hi = params.obstacle_height_max;
  if (h < lo || h > hi) return 0.0;
  const double w = hi - lo;
  switch (params.height_law) {
    case HeightLaw::Uniform:
      return 1.0 / w;
    case HeightLaw::Triangular: {
      const double x = (h - lo) / w;
      return (x <= 0.5 ? 4.0 * x : 4.0 * (1.0 - x)) / w;
    }
  }
  return 0.0;
}

}  // namespace

double height_scaling_factor(const SystemParams& params, double rx_height) {
  const double lo = params.obstacle_height_min;
  const double hi = params.obstacle_height_max;
  const double hb = params.bs_height;
  auto ray_height = [&](double s) { return s * rx_height + (1.0 - s) * hb; };

  if (hi <= lo) {
    // Point mass at lo: the inner integral is the indicator ray_height >= lo.
    // Measure of s where the ray clears the obstacle.
    if (rx_height == hb) return ray_height(0.0) >= lo ? 0.0 : 1.0;
    const double s_cross = (lo - hb) / (rx_height - hb);
    double clear = 0.0;
    if (rx_height > hb) {
      clear = 1.0 - std::clamp(s_cross, 0.0, 1.0);
    } else {
      clear = std::clamp(s_cross, 0.0, 1.0);
    }
    return 1.0 - clear;
  }

  // Inner integral of the density, split where the density has kinks.
  std::vector<double> h_breaks{lo, hi};
  if (params.height_law == HeightLaw::Triangular) h_breaks.push_back(0.5 * (lo + hi));
  std::sort(h_breaks.begin(), h_breaks.end());
  auto inner = [&](double s) {
    const double upper = std::min(ray_height(s), hi);
    double acc = 0.0;
    double a = lo;
    for (double brk : h_breaks) {
      if (brk <= a) continue;
      const double b = std::min(brk, upper);
      if (b > a) acc += integrate([&](double h) { return height_pdf(params, h); }, a, b);
      a = std::max(a, brk);
      if (a >= upper) break;
    }
    return acc;
  };

  // Outer integral over s, split where the ray height crosses a density kink.
  std::vector<double> s_breaks{0.0, 1.0};
  if (rx_height != hb) {
    for (double brk : h_breaks) {
      const double s = (brk - hb) / (rx_height - hb);
      if (s > 0.0 && s < 1.0) s_breaks.push_back(s);
    }
  }
  std::sort(s_breaks.begin(), s_breaks.end());
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < s_breaks.size(); ++i) {
    mass += integrate(inner, s_breaks[i], s_breaks[i + 1]);
  }
  return std::clamp(1.0 - mass, 0.0, 1.0);
}

BlockageStats blockage_stats(const SystemParams& params) {
  return blockage_stats(params, params.eve_height);
}

BlockageStats blockage_stats(const SystemParams& params, double rx_height) {
  const double lambda0 = params.obstacle_density;
  const double el = params.obstacle_length_mean;
  const double ew = params.obstacle_width_mean;
  return {2.0 * lambda0 * (el + ew) / kPi, lambda0 * el * ew,
          height_scaling_factor(params, rx_height)};
}

double expected_blockage_count(const BlockageStats& stats, double d) {
  return stats.beta0 * d + stats.p;
}

double los_probability(const BlockageStats& stats, double d) {
  return std::exp(-stats.k * expected_blockage_count(stats, d));
}

ReflectionGeometry ReflectionGeometry::nominal(const SystemParams& params,
                                               double direct_distance) {
  return {params.reflection_delay_factor * direct_distance / kSpeedOfLight, direct_distance,
          params.reflection_angle};
}

namespace {

double reflection_area(const ReflectionGeometry& g, const SystemParams& params) {
  const double d = g.direct_distance;
  const double ct = kSpeedOfLight * g.delay;
  if (!(d > 0.0)) throw std::domain_error("reflection_probability: direct distance must be > 0");
  if (ct < d * (1.0 - 1e-12)) throw std::domain_error("reflection_probability: c*tau < D");
  const double el = params.obstacle_length_mean;
  const double ew = params.obstacle_width_mean;
  const double cos_t = std::cos(g.incidence_angle);
  const double ct2 = ct * ct;
  const double slack = std::sqrt(std::max(0.0, ct2 - d * d));
  return el * std::sqrt(std::max(0.0, ct2 - d * d * cos_t * cos_t)) + ew * d * std::abs(cos_t) +
         el * ew - el * (ct - d) / 4.0 - el * el * slack / (8.0 * d);
}

double clamp_probability(double p, Diagnostics* diag) {
  if (p >= 0.0 && p <= 1.0) return p;
  if (diag != nullptr) diag->count_clamp();
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double reflection_probability(const ReflectionGeometry& geom, const SystemParams& params,
                              Diagnostics* diag) {
  return clamp_probability(std::exp(-params.obstacle_density * reflection_area(geom, params)),
                           diag);
}

double reflection_probability_published_sign(const ReflectionGeometry& geom,
                                             const SystemParams& params) {
  return std::exp(params.obstacle_density * reflection_area(geom, params));
}

namespace {

// 1 - (1+y)e^-y, accurate for small y.
double los_bs_bracket(double y) {
  if (std::isinf(y)) return 1.0;
  if (y < 0.05) {
    // sum_{n>=2} (-1)^n (n-1) y^n / n!
    double term = 1.0;
    double sum = 0.0;
    for (int n = 1; n <= 12; ++n) {
      term *= y / n;
      if (n >= 2) sum += ((n % 2 == 0) ? 1.0 : -1.0) * (n - 1) * term;
    }
    return sum;
  }
  return -std::expm1(-y) - y * std::exp(-y);
}

}  // namespace

double nearest_los_bs_cdf(const BlockageStats& stats, double bs_density, double x) {
  if (!(x > 0.0)) return 0.0;
  const double scale = 2.0 * kPi * bs_density * std::exp(-stats.p) / (stats.beta0 * stats.beta0);
  return -std::expm1(-scale * los_bs_bracket(stats.beta0 * x));
}

double interference_integral(double alpha, const SystemParams& params, InterferenceMode mode) {
  const double r = params.comm_radius;
  if (mode == InterferenceMode::PaperFaithful) {
    if (alpha == 2.0) {
      throw ModelError("closed-form interference integral 2/(r^a (2-a)) is singular at a=2");
    }
    return 2.0 / (std::pow(r, alpha) * (2.0 - alpha));
  }
  const double d0 = params.ref_distance;
  const double b = path_loss_constant(params.carrier_freq);
  const double r2 = r * r;
  // Inside d0 the loss is flat; beyond it x^-alpha.
  const double near = std::pow(d0, 2.0 - alpha) / r2;
  const double far = (alpha == 2.0)
                         ? (2.0 / r2) * std::log(r / d0)
                         : (2.0 / r2) * (std::pow(r, 2.0 - alpha) - std::pow(d0, 2.0 - alpha)) /
                               (2.0 - alpha);
  return b * (near + far);
}

double mixture_distance(const SystemParams& params) {
  return params.esp_eval_distance.value_or(2.0 * params.comm_radius / 3.0);
}

double interference_mean(const SystemParams& params, const BlockageStats& stats,
                         InterferenceMode mode, Diagnostics* diag) {
  const auto exps = params.exponents();
  const double d = mixture_distance(params);
  const double p_los = los_probability(stats, d);
  const double p_ref = reflection_probability(ReflectionGeometry::nominal(params, d), params, diag);
  const double mix_los = p_los * (1.0 - p_ref);
  const double mix_ref = (1.0 - p_los) * p_ref;

  const double gain = expected_eve_gain(rx_pattern(params, diag), misalignment_model(params));
  const double r = params.comm_radius;
  const double count = kPi * r * r * params.effective_bs_density();
  const double j_los = interference_integral(exps.los, params, mode);
  const double j_nlos = interference_integral(exps.nlos, params, mode);
  const double mean = count * params.tx_power * gain *
                      (mix_los * j_los + params.reflection_coeff * mix_ref * j_nlos);
  if (mean < 0.0 && diag != nullptr) {
    diag->warn("interference-integral-negative",
               "closed-form interference integral is negative for path-loss exponents > 2");
  }
  return mean;
}

EspInputs make_esp_inputs(const SystemParams& params, Diagnostics* diag) {
  EspInputs in;
  in.params = params;
  in.stats = blockage_stats(params);
  in.mode = params.interference_mode;
  in.eval_distance = params.esp_eval_distance;
  in.expected_gain = expected_eve_gain(rx_pattern(params, diag), misalignment_model(params));
  in.interference = interference_mean(params, in.stats, in.mode, diag);
  in.noise = params.noise_power();
  return in;
}

ThresholdRadii threshold_radii(const EspInputs& in, double beta) {
  const auto& p = in.params;
  const double eta = p.ts_ratio;
  const double margin = (1.0 - eta) - beta * eta;
  if (margin <= 0.0) return {};
  const double floor = in.noise + in.interference;
  if (!(floor > 0.0)) {
    throw ModelError("noise plus mean interference is not positive; threshold radius undefined");
  }
  const auto exps = p.exponents();
  const double base = margin * p.tx_power * in.expected_gain *
                      path_loss_constant(p.carrier_freq) / (floor * beta);
  return {std::pow(base, 1.0 / exps.los),
          std::pow(base * p.reflection_coeff, 1.0 / exps.nlos)};
}

double esp_independent(const EspInputs& in, double beta, Diagnostics* diag) {
  const auto radii = threshold_radii(in, beta);
  const auto& p = in.params;
  const double density = p.effective_bs_density();
  auto geometry_at = [&](double d) {
    return in.geometry ? *in.geometry : ReflectionGeometry::nominal(p, d);
  };

  double esp = 0.0;
  if (radii.los > 0.0) {
    const double d = in.eval_distance.value_or(radii.los);
    esp += nearest_los_bs_cdf(in.stats, density, radii.los) * los_probability(in.stats, d) *
           (1.0 - reflection_probability(geometry_at(d), p, diag));
  }
  if (radii.reflection > 0.0) {
    const double d = in.eval_distance.value_or(radii.reflection);
    esp += nearest_los_bs_cdf(in.stats, density, radii.reflection) *
           (1.0 - los_probability(in.stats, d)) * reflection_probability(geometry_at(d), p, diag);
  }
  return clamp_probability(esp, diag);
}

ColludingEsp esp_colluding(const SystemParams& params, const BlockageStats& stats, double beta,
                           InterferenceMode mode, Diagnostics* diag) {
  const auto exps = params.exponents();
  const double d = mixture_distance(params);
  const double p_los = los_probability(stats, d);
  const double p_ref = reflection_probability(ReflectionGeometry::nominal(params, d), params, diag);
  const double bracket = p_los * (1.0 - p_ref) * interference_integral(exps.los, params, mode) +
                         params.reflection_coeff * (1.0 - p_los) * p_ref *
                             interference_integral(exps.nlos, params, mode);
  if (!(bracket > 0.0)) {
    if (diag != nullptr) {
      diag->warn("interference-integral-negative",
                 "colluding LOS/reflection bracket is not positive");
    }
    throw ModelError("colluding ESP undefined: LOS/reflection bracket is not positive");
  }
  const double r = params.comm_radius;
  const double eta = params.ts_ratio;
  const double count = kPi * r * r * params.effective_bs_density();
  const double ratio = ((1.0 - eta) * bracket) / ((count + eta) * bracket);
  return {ratio > beta ? 1.0 : 0.0, ratio};
}

Diagnostics audit_model(const SystemParams& params) {
  Diagnostics out;

  if (!(params.main_lobe_gain && params.side_lobe_gain)) {
    for (int n : {params.n_elements_tx, params.n_elements_rx}) {
      const double width = params.beamwidth.value_or(default_beamwidth(n));
      Diagnostics local;
      try {
        gains_from_elements(n, width, GainClampMode::SwapSafe, &local);
      } catch (const std::exception&) {
      }
      out.merge(local);
    }
  }

  const auto exps = params.exponents();
  {
    std::ostringstream msg;
    msg << "closed-form interference integral 2/(r^a (2-a)) at r=" << params.comm_radius << ":";
    bool bad = false;
    for (double a : {exps.los, exps.nlos}) {
      if (a == 2.0) {
        msg << " a=" << a << " singular;";
        bad = true;
      } else if (a > 2.0) {
        msg << " a=" << a << " gives " << 2.0 / (std::pow(params.comm_radius, a) * (2.0 - a))
            << " (negative);";
        bad = true;
      }
    }
    if (bad) {
      msg << (params.interference_mode == InterferenceMode::Regularized
                  ? " using the regularized integral with the reference-distance clamp"
                  : " paperFaithful mode will fail or go negative");
      out.warn("interference-integral-sign", msg.str());
    }
  }

  {
    const double d = mixture_distance(params);
    const auto geom = ReflectionGeometry::nominal(params, d);
    std::ostringstream msg;
    msg << "reflection-path void probability printed as exp(+lambda0*A) (="
        << reflection_probability_published_sign(geom, params) << " at D=" << d
        << " m, above 1); evaluated as exp(-lambda0*A) (=" << reflection_probability(geom, params)
        << ")";
    out.warn("reflection-exponent-sign", msg.str());
  }

  out.warn("gain-pdf-delta",
           "eavesdropper gain pdf is printed with delta(x-G_m) in both terms; the side-lobe "
           "term uses delta(x-G_s)");
  out.warn("reflection-radius-rho",
           "reflection threshold radius is printed with rho dividing the path-loss bound; rho "
           "attenuates the reflected power, so it multiplies");

  if (params.noise_mode == NoiseMode::Bandwidth) {
    std::ostringstream msg;
    msg << "published noise power reads -174 + 10log10(10) + NF dBm (" << -174.0 + 10.0 +
               params.noise_figure
        << " dBm); using bandwidth-based noise " << watts_to_dbm(params.noise_power())
        << " dBm (noiseMode=paperLiteral reproduces the literal value)";
    out.warn("noise-formula", msg.str());
  }
  return out;
}

}  // namespace secsim
