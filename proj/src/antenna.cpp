#include "secsim/antenna.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace secsim {

double default_beamwidth(int n_elements) {
  return 2.0 * kPi / std::sqrt(static_cast<double>(n_elements));
}

SectorPattern gains_from_elements(int n_elements, double beamwidth, GainClampMode clamp_mode,
                                  Diagnostics* diag) {
  if (n_elements < 1) throw std::invalid_argument("gains_from_elements: need at least 1 element");
  const double n = static_cast<double>(n_elements);
  const double s = std::sin(3.0 * kPi / (2.0 * std::sqrt(n)));
  SectorPattern p{n, 1.0 / (s * s), beamwidth};
  if (p.side_gain >= p.main_gain) {
    std::ostringstream msg;
    msg << "side-lobe gain formula 1/sin^2(3pi/(2 sqrt N)) breaks down at N=" << n_elements
        << " (G_s=" << p.side_gain << " >= G_m=" << p.main_gain << ")";
    if (clamp_mode == GainClampMode::Error) {
      throw ModelError(msg.str() +
                       "; supply mainLobeGain/sideLobeGain or set gainClampMode=swapSafe");
    }
    p.side_gain = std::min(p.side_gain, p.main_gain / 10.0);
    if (diag != nullptr) {
      msg << "; clamped G_s to " << p.side_gain;
      diag->warn("sidelobe-formula-breakdown", msg.str());
    }
  }
  return p;
}

namespace {

SectorPattern pattern_for(const SystemParams& params, int n_elements, Diagnostics* diag) {
  const double width = params.beamwidth.value_or(default_beamwidth(n_elements));
  if (!(width > 0.0 && width < 2.0 * kPi)) {
    throw ModelError("beamwidth for N=" + std::to_string(n_elements) +
                     " falls outside (0, 2pi); set beamwidthRad");
  }
  if (params.main_lobe_gain && params.side_lobe_gain) {
    if (!(*params.main_lobe_gain > *params.side_lobe_gain && *params.side_lobe_gain > 0.0)) {
      throw ModelError("override gains must satisfy mainLobeGain > sideLobeGain > 0");
    }
    return {*params.main_lobe_gain, *params.side_lobe_gain, width};
  }
  return gains_from_elements(n_elements, width, params.gain_clamp_mode, diag);
}

}  // namespace

SectorPattern tx_pattern(const SystemParams& params, Diagnostics* diag) {
  return pattern_for(params, params.n_elements_tx, diag);
}

SectorPattern rx_pattern(const SystemParams& params, Diagnostics* diag) {
  return pattern_for(params, params.n_elements_rx, diag);
}

MisalignmentModel misalignment_model(const SystemParams& params) {
  return {params.misalignment_sigma,
          params.beamwidth.value_or(default_beamwidth(params.n_elements_rx)),
          params.misalign_mode};
}

double gain_at(const SectorPattern& pattern, double offset) {
  return std::abs(offset) <= pattern.beamwidth / 2.0 ? pattern.main_gain : pattern.side_gain;
}

double misalignment_cdf(const MisalignmentModel& model, double x) {
  const double edge = model.beamwidth / 2.0;
  if (!(x >= 0.0 && x <= edge)) {
    throw std::domain_error("misalignment_cdf: x outside [0, beamwidth/2]");
  }
  const double scale = std::sqrt(2.0) * model.sigma;
  const double f = 0.5 * std::erf(x / scale) / std::erf(edge / scale);
  return model.mode == MisalignMode::OneSidedRenormalized ? 2.0 * f : f;
}

double sample_misalignment(const MisalignmentModel& model, Rng& rng) {
  const double edge = model.beamwidth / 2.0;
  std::normal_distribution<double> normal(0.0, model.sigma);
  for (;;) {
    const double x = std::abs(normal(rng));
    if (x <= edge) return x;
  }
}

double expected_eve_gain(const SectorPattern& pattern, const MisalignmentModel& model) {
  const double f = misalignment_cdf(model, model.beamwidth / 2.0);
  return f * pattern.main_gain + (1.0 - f) * pattern.side_gain;
}

double sample_eve_gain(const SectorPattern& pattern, const MisalignmentModel& model, Rng& rng) {
  const double f = misalignment_cdf(model, model.beamwidth / 2.0);
  if (uniform01(rng) < f) return gain_at(pattern, sample_misalignment(model, rng));
  return pattern.side_gain;
}

}  // namespace secsim
