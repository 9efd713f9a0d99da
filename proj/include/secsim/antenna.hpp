// Ideal sector antenna and beam-misalignment statistics.
#pragma once

#include "secsim/config.hpp"
#include "secsim/diagnostics.hpp"
#include "secsim/rng.hpp"

namespace secsim {

struct SectorPattern {
  double main_gain = 1.0;  // G_m
  double side_gain = 1.0;  // G_s
  double beamwidth = kPi;  // main-lobe width, rad
};

struct MisalignmentModel {
  double sigma = 0.1;      // rad
  double beamwidth = kPi;  // rad
  MisalignMode mode = MisalignMode::PaperLiteral;
};

/// Sector pattern of an N-element ULA: G_m = N, G_s = 1/sin^2(3pi/(2 sqrt N)).
/// The side-lobe approximation breaks down for small N (G_s >= G_m); that is
/// a ModelError unless clamp_mode is SwapSafe, which sets
/// G_s = min(formula, G_m/10) and records a warning.
SectorPattern gains_from_elements(int n_elements, double beamwidth,
                                  GainClampMode clamp_mode = GainClampMode::Error,
                                  Diagnostics* diag = nullptr);

/// Default beamwidth for N elements: 2*pi/sqrt(N).
double default_beamwidth(int n_elements);

/// Pattern for the transmit (BS) or receive (eavesdropper) side, honouring
/// beamwidth and explicit gain overrides from the config.
SectorPattern tx_pattern(const SystemParams& params, Diagnostics* diag = nullptr);
SectorPattern rx_pattern(const SystemParams& params, Diagnostics* diag = nullptr);
MisalignmentModel misalignment_model(const SystemParams& params);

/// G_m if |offset| <= beamwidth/2 (inclusive), else G_s.
double gain_at(const SectorPattern& pattern, double offset);

/// CDF of the misalignment angle on [0, beamwidth/2]. PaperLiteral integrates
/// the symmetric-normalized truncated normal over one side (mass 1/2 at the
/// edge); OneSidedRenormalized doubles it. Throws std::domain_error outside
/// the support.
double misalignment_cdf(const MisalignmentModel& model, double x);

/// Half-normal draw truncated to [0, beamwidth/2], by rejection.
double sample_misalignment(const MisalignmentModel& model, Rng& rng);

/// F*G_m + (1-F)*G_s with F = misalignment_cdf(beamwidth/2).
double expected_eve_gain(const SectorPattern& pattern, const MisalignmentModel& model);

/// Gain realization for one eavesdropper beam: main lobe with probability
/// F(beamwidth/2), in which case a misalignment angle is drawn and the
/// pattern evaluated there; side lobe otherwise.
double sample_eve_gain(const SectorPattern& pattern, const MisalignmentModel& model, Rng& rng);

}  // namespace secsim
