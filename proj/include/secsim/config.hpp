// Run parameters: one immutable SystemParams per run, loaded from flat
// "key=value" text. Absent keys take the UMi defaults below.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "secsim/diagnostics.hpp"
#include "secsim/units.hpp"

namespace secsim {

enum class NoiseMode { Bandwidth, PaperLiteral, Off };
enum class MisalignMode { PaperLiteral, OneSidedRenormalized };
enum class GainClampMode { Error, SwapSafe };
enum class InterferenceMode { Regularized, PaperFaithful };
enum class BsGainTowardEve { Bernoulli, AlwaysMain, AlwaysSide };
enum class BsPlacement { FixedCount, Ppp };
/// How colluding eavesdroppers combine: pooled powers (sum of signals over
/// sum of interference) or the sum of per-eavesdropper SINRs.
enum class Combining { Pooled, BranchSum };
enum class HeightLaw { Uniform, Triangular };
enum class SizeLaw { Fixed, Uniform };

struct PathLossExponents {
  double los;
  double nlos;
};

/// Measured LOS / reflection exponents for 28, 38 and 60 GHz. Returns nullopt
/// for any other carrier.
std::optional<PathLossExponents> measured_exponents(double carrier_hz);

struct SystemParams {
  double tx_power = 1.0;        // W (30 dBm)
  double carrier_freq = 28e9;   // Hz
  double ts_ratio = 0.3;        // energy-slot fraction eta
  double sinr_threshold = db_to_linear(8.0);

  std::optional<double> bs_density;  // per m^2; derived from num_bs when unset
  double eve_density = 5e-4;         // per m^2
  double obstacle_density = 5e-4;    // per m^2
  double reflection_coeff = 0.4;

  std::optional<double> alpha_los;   // unset: measured table by carrier
  std::optional<double> alpha_nlos;
  double ref_distance = 1.0;         // m

  double bs_height = 35.0;
  double eve_height = 1.5;
  double user_height = 1.5;

  double obstacle_length_mean = 15.0;
  double obstacle_width_mean = 10.0;
  double obstacle_height_min = 10.0;
  double obstacle_height_max = 50.0;
  HeightLaw height_law = HeightLaw::Uniform;
  SizeLaw size_law = SizeLaw::Fixed;
  double reflector_fraction = 1.0;

  int n_elements_tx = 2;
  int n_elements_rx = 2;
  std::optional<double> beamwidth;   // rad; default 2*pi/sqrt(N)
  std::optional<double> main_lobe_gain;
  std::optional<double> side_lobe_gain;
  double misalignment_sigma = 0.1;   // rad
  MisalignMode misalign_mode = MisalignMode::PaperLiteral;
  GainClampMode gain_clamp_mode = GainClampMode::Error;

  double comm_radius = 100.0;        // m
  double map_width = 200.0;
  double map_height = 160.0;
  double map_granularity = 1.0;

  double bandwidth = 800e6;          // Hz
  double noise_figure = 10.0;        // dB
  NoiseMode noise_mode = NoiseMode::Bandwidth;

  InterferenceMode interference_mode = InterferenceMode::Regularized;
  std::optional<double> esp_eval_distance;  // m; unset: evaluate at the threshold radii
  double reflection_angle = kPi / 4.0;      // rad
  double reflection_delay_factor = 1.2;     // c*tau / D

  int num_bs = 3;                    // target plus interferers
  BsPlacement bs_placement = BsPlacement::FixedCount;
  Combining combining = Combining::Pooled;
  BsGainTowardEve bs_gain_toward_eve = BsGainTowardEve::Bernoulli;
  double eve_distance_min = 10.0;
  double eve_distance_max = 500.0;
  int trials_per_world = 1;

  std::uint64_t rng_seed = 1;

  /// Exponents actually used: explicit values, else the measured table.
  [[nodiscard]] PathLossExponents exponents() const;
  /// BS density: explicit, else num_bs spread over the hearing disk.
  [[nodiscard]] double effective_bs_density() const;
  [[nodiscard]] double map_area() const { return map_width * map_height; }
  [[nodiscard]] double noise_power() const;
};

/// Thermal noise for a receiver: dBm(-174 + 10 log10(B) + NF) in watts.
double noise_power(double bandwidth_hz, double noise_figure_db);

/// Accumulates key=value assignments from several sources; later assignments
/// win. build() validates and produces the immutable SystemParams.
class ParamsBuilder {
 public:
  /// Parse config text. Throws ConfigError with the line number on bad lines
  /// or unknown keys.
  ParamsBuilder& apply_text(std::string_view text, std::string_view origin = "config");
  /// Apply a single assignment (CLI flags, environment).
  ParamsBuilder& set(const std::string& key, const std::string& value,
                     std::string_view origin = "override");
  /// ESP_SEED overrides the seed when present.
  ParamsBuilder& apply_env();

  [[nodiscard]] SystemParams build() const;

 private:
  struct Assignment {
    std::string key;
    std::string value;
    std::string origin;
  };
  std::vector<Assignment> assignments_;  // applied in order
};

/// Parse config text (no environment). Deterministic.
SystemParams load_params(std::string_view text);

/// Throws ConfigError naming the first violated invariant.
void validate(const SystemParams& params);

/// Known config keys, for help text and CLI passthrough.
const std::vector<std::string>& config_keys();

/// Render params back as config text (round-trips through load_params).
std::string to_config_text(const SystemParams& params);

}  // namespace secsim
