// Parameter sweeps over the SINR threshold and one system knob, written as CSV.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "secsim/config.hpp"
#include "secsim/diagnostics.hpp"
#include "secsim/montecarlo.hpp"

namespace secsim {

enum class SweepMode { Analytic, Simulate, Compare };

struct SweepSpec {
  SweepMode mode = SweepMode::Analytic;
  Attack attack = Attack::Independent;
  std::vector<double> betas_db;  // empty means 1..100 dB in 1 dB steps
  std::string vary_key;          // "", "eta", "fc" or "nb"
  std::vector<double> vary_values;
  std::size_t n_trials = 1000;
  unsigned workers = 1;
  bool dry_run = false;  // header only
};

const char* sweep_mode_name(SweepMode mode);
const char* attack_name(Attack attack);

/// "a:b:s" inclusive grid, or a comma list. Throws ConfigError.
std::vector<double> parse_beta_grid(std::string_view text);
/// "eta=0.3,0.5" into the key and its values. Throws ConfigError.
void parse_vary(std::string_view text, SweepSpec& spec);

/// params with one sweep knob replaced; fc accepts GHz or Hz.
SystemParams with_vary(const SystemParams& params, const std::string& key, double value);

/// Write the sweep CSV to `out`. Warnings raised by any cell are listed in that
/// row's warnings column and returned for a stderr summary. Throws
/// ConfigError/ModelError on invalid input.
Diagnostics run_sweep(const SweepSpec& spec, const SystemParams& params, std::ostream& out);

/// Obstacle CSV of the first world the simulator would draw for `seed`.
void dump_world(const SystemParams& params, std::uint64_t seed, std::ostream& out);

}  // namespace secsim
