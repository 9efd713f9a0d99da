// Map-based Monte Carlo estimation of the eavesdropping success probability.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "secsim/antenna.hpp"
#include "secsim/config.hpp"
#include "secsim/geometry.hpp"
#include "secsim/rng.hpp"

namespace secsim {

enum class Attack { Independent, Colluding };
enum class LinkKind { None, Los, Reflection };

const char* link_kind_name(LinkKind kind);

struct TrialOutcome {
  double sinr = 0.0;
  LinkKind link_kind = LinkKind::None;
  Vec2 eve_position;
  int n_interferers = 0;
  int n_eves = 1;
};

struct EspEstimate {
  double beta_db = 0.0;
  double esp = 0.0;
  std::size_t n_trials = 0;
  double ci95_halfwidth = 0.0;
};

/// Strongest usable path from a base station to a receiver: LOS when
/// unblocked, else the strongest unblocked first-order reflection.
struct LinkChoice {
  LinkKind kind = LinkKind::None;
  double loss = 0.0;         // path loss of the chosen path (<= 1)
  double rho_applied = 1.0;  // 1 for LOS, rho for reflections
  double length = 0.0;       // 3-D path length, m
};

LinkChoice best_link(const SystemParams& params, const WorldMap& world, std::size_t bs_index,
                     const Node& rx);

/// Power budget seen by one eavesdropper.
struct EveReception {
  Vec2 position;
  LinkKind link_kind = LinkKind::None;
  double signal = 0.0;                 // (1-eta) share from the target BS
  double self_interference = 0.0;      // eta share from the target BS
  double external_interference = 0.0;
};

/// Everything a trial needs that does not change per trial.
struct TrialContext {
  SystemParams params;
  SectorPattern bs_pattern;
  SectorPattern eve_pattern;
  MisalignmentModel misalignment;
  double noise = 0.0;

  explicit TrialContext(const SystemParams& p, Diagnostics* diag = nullptr);
};

/// Target BS at the map center, interferers uniform (or PPP), obstacles
/// resampled until no base station sits inside a footprint.
WorldMap generate_world(const SystemParams& params, Rng& rng);

/// Uniform eavesdropper position on the map grid, within the configured
/// distance band of the target BS and outside every footprint.
Vec2 place_eve(const SystemParams& params, const WorldMap& world, Rng& rng);

/// Received powers at an eavesdropper at `eve`. Randomness: BS gain toward
/// the eavesdropper and the eavesdropper's beam gain, per base station.
EveReception receive_at(const TrialContext& ctx, const WorldMap& world, Vec2 eve, Rng& rng);

double single_sinr(const EveReception& r, double noise);
/// Pooled combining across eavesdroppers: summed signal over summed
/// interference plus one noise term.
double aggregate_sinr(std::span<const EveReception> receptions, double noise);
/// Sum of the per-eavesdropper SINRs (coherent combining with independent
/// per-branch interference).
double branch_sum_sinr(std::span<const EveReception> receptions, double noise);

TrialOutcome run_independent_trial(const TrialContext& ctx, const WorldMap& world, Rng& rng);
TrialOutcome run_colluding_trial(const TrialContext& ctx, const WorldMap& world, Rng& rng);

struct SimulationOptions {
  std::size_t n_trials = 1000;
  Attack attack = Attack::Independent;
  unsigned workers = 1;
};

/// Run every trial; outcome i depends only on (seed, i), never on workers.
std::vector<TrialOutcome> simulate(const SystemParams& params, const SimulationOptions& options,
                                   Diagnostics* diag = nullptr);

/// esp(beta) = fraction of trials with sinr > beta, for every beta from the
/// same sample, so the estimates are nonincreasing in beta.
std::vector<EspEstimate> estimates_from_outcomes(std::span<const TrialOutcome> outcomes,
                                                 std::span<const double> betas_db);

std::vector<EspEstimate> estimate_esp(const SystemParams& params,
                                      std::span<const double> betas_db,
                                      const SimulationOptions& options,
                                      Diagnostics* diag = nullptr);

/// Per-trial CSV: trial,eveX,eveY,linkKind,sinrDb,nInterferers
void write_trials_csv(std::ostream& os, std::span<const TrialOutcome> outcomes);

}  // namespace secsim
