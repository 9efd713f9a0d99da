#include "secsim/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "secsim/kernels.hpp"
#include "secsim/propagation.hpp"

namespace secsim {

const char* link_kind_name(LinkKind kind) {
  switch (kind) {
    case LinkKind::Los:
      return "los";
    case LinkKind::Reflection:
      return "reflection";
    case LinkKind::None:
      break;
  }
  return "none";
}

TrialContext::TrialContext(const SystemParams& p, Diagnostics* diag)
    : params(p),
      bs_pattern(tx_pattern(p, diag)),
      eve_pattern(rx_pattern(p, diag)),
      misalignment(misalignment_model(p)),
      noise(p.noise_power()) {}

namespace {

constexpr int kMaxPlacementAttempts = 100000;

Vec2 uniform_point(Vec2 extent, Rng& rng) {
  const double x = extent.x * uniform01(rng);
  const double y = extent.y * uniform01(rng);
  return {x, y};
}

}  // namespace

WorldMap generate_world(const SystemParams& params, Rng& rng) {
  const Vec2 extent{params.map_width, params.map_height};
  const Vec2 target{0.5 * extent.x, 0.5 * extent.y};
  for (int attempt = 0; attempt < 1000; ++attempt) {
    WorldMap obstacles = sample_obstacles(params, rng);
    if (obstacles.inside_obstacle(target)) continue;

    long n_interferers = params.num_bs - 1;
    if (params.bs_placement == BsPlacement::Ppp) {
      const double mean = params.effective_bs_density() * params.map_area();
      n_interferers = std::poisson_distribution<long>(mean)(rng);
    }
    std::vector<Vec2> bs{target};
    for (long i = 0; i < n_interferers; ++i) {
      int tries = 0;
      Vec2 p;
      do {
        if (++tries > kMaxPlacementAttempts) {
          throw ModelError("generate_world: no free position for an interfering base station");
        }
        p = uniform_point(extent, rng);
      } while (obstacles.inside_obstacle(p) || p == target);
      bs.push_back(p);
    }
    return obstacles.with_base_stations(std::move(bs), params.bs_height);
  }
  throw ModelError("generate_world: target base station kept landing inside an obstacle");
}

Vec2 place_eve(const SystemParams& params, const WorldMap& world, Rng& rng) {
  const Vec2 extent = world.extent();
  const double g = world.granularity();
  const Vec2 target = world.bs_positions().at(0);
  for (int tries = 0; tries < kMaxPlacementAttempts; ++tries) {
    const Vec2 raw = uniform_point(extent, rng);
    // Center of the grid cell containing the raw draw.
    const Vec2 p{std::min((std::floor(raw.x / g) + 0.5) * g, extent.x),
                 std::min((std::floor(raw.y / g) + 0.5) * g, extent.y)};
    const double d = distance(p, target);
    if (d < params.eve_distance_min || d > params.eve_distance_max) continue;
    if (world.inside_obstacle(p)) continue;
    bool on_bs = false;
    for (const auto& b : world.bs_positions()) on_bs = on_bs || b == p;
    if (on_bs) continue;
    return p;
  }
  throw ModelError("place_eve: no admissible eavesdropper position in the distance band");
}

LinkChoice best_link(const SystemParams& params, const WorldMap& world, std::size_t bs_index,
                     const Node& rx) {
  const Node tx{world.bs_positions().at(bs_index), world.bs_height()};
  if (tx.pos == rx.pos) return {};
  const auto exps = params.exponents();
  if (!los_blocked(tx, rx, world)) {
    const double len = std::hypot(distance(tx.pos, rx.pos), rx.height - tx.height);
    return {LinkKind::Los, path_loss(len, exps.los, params.carrier_freq, params.ref_distance), 1.0,
            len};
  }
  LinkChoice best;
  for (const auto& path : find_first_order_reflections(tx, rx, world)) {
    const double loss =
        path_loss(path.slant_length, exps.nlos, params.carrier_freq, params.ref_distance);
    if (best.kind == LinkKind::None || loss > best.loss) {
      best = {LinkKind::Reflection, loss, params.reflection_coeff, path.slant_length};
    }
  }
  return best;
}

namespace {

double draw_bs_gain(const TrialContext& ctx, Rng& rng) {
  const double u = uniform01(rng);
  switch (ctx.params.bs_gain_toward_eve) {
    case BsGainTowardEve::AlwaysMain:
      return ctx.bs_pattern.main_gain;
    case BsGainTowardEve::AlwaysSide:
      return ctx.bs_pattern.side_gain;
    case BsGainTowardEve::Bernoulli:
      break;
  }
  // The BS beam tracks its own user, uniformly oriented relative to the Eve.
  return u < ctx.bs_pattern.beamwidth / (2.0 * kPi) ? ctx.bs_pattern.main_gain
                                                     : ctx.bs_pattern.side_gain;
}

}  // namespace

EveReception receive_at(const TrialContext& ctx, const WorldMap& world, Vec2 eve, Rng& rng) {
  const auto& p = ctx.params;
  const Node rx{eve, p.eve_height};
  EveReception out;
  out.position = eve;
  const auto& bs = world.bs_positions();
  for (std::size_t j = 0; j < bs.size(); ++j) {
    const double g_bs = draw_bs_gain(ctx, rng);
    const double g_eve = sample_eve_gain(ctx.eve_pattern, ctx.misalignment, rng);
    const LinkChoice link = best_link(p, world, j, rx);
    if (link.kind == LinkKind::None) continue;
    if (j == 0) {
      const auto parts = eve_rx_components(p, g_bs * g_eve, link.loss, link.rho_applied);
      out.link_kind = link.kind;
      out.signal = parts.signal;
      out.self_interference = parts.self_interference;
    } else {
      out.external_interference += p.tx_power * g_bs * g_eve * link.loss * link.rho_applied;
    }
  }
  return out;
}

double single_sinr(const EveReception& r, double noise) {
  if (r.link_kind == LinkKind::None || r.signal <= 0.0) return 0.0;
  return sinr({r.signal, r.self_interference, r.external_interference, noise});
}

double aggregate_sinr(std::span<const EveReception> receptions, double noise) {
  LinkBudget total;
  total.noise = noise;
  for (const auto& r : receptions) {
    total.signal_power += r.signal;
    total.self_interference += r.self_interference;
    total.external_interference += r.external_interference;
  }
  if (total.signal_power <= 0.0) return 0.0;
  return sinr(total);
}

double branch_sum_sinr(std::span<const EveReception> receptions, double noise) {
  double total = 0.0;
  for (const auto& r : receptions) total += single_sinr(r, noise);
  return total;
}

TrialOutcome run_independent_trial(const TrialContext& ctx, const WorldMap& world, Rng& rng) {
  const Vec2 eve = place_eve(ctx.params, world, rng);
  const EveReception r = receive_at(ctx, world, eve, rng);
  TrialOutcome out;
  out.link_kind = r.link_kind;
  out.sinr = single_sinr(r, ctx.noise);
  out.eve_position = eve;
  out.n_interferers = static_cast<int>(world.bs_positions().size()) - 1;
  out.n_eves = 1;
  return out;
}

TrialOutcome run_colluding_trial(const TrialContext& ctx, const WorldMap& world, Rng& rng) {
  const double mean = ctx.params.eve_density * world.extent().x * world.extent().y;
  std::poisson_distribution<long> count_dist(mean);
  long n = 0;
  for (int tries = 0; n == 0; ++tries) {
    if (tries >= kMaxPlacementAttempts) {
      throw ModelError("run_colluding_trial: eavesdropper density too low to draw any");
    }
    n = count_dist(rng);
  }

  std::vector<EveReception> receptions;
  receptions.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const Vec2 eve = place_eve(ctx.params, world, rng);
    receptions.push_back(receive_at(ctx, world, eve, rng));
  }

  TrialOutcome out;
  out.sinr = ctx.params.combining == Combining::Pooled ? aggregate_sinr(receptions, ctx.noise)
                                                       : branch_sum_sinr(receptions, ctx.noise);
  out.eve_position = receptions.front().position;
  for (const auto& r : receptions) {
    if (r.link_kind == LinkKind::Los) {
      out.link_kind = LinkKind::Los;
    } else if (r.link_kind == LinkKind::Reflection && out.link_kind == LinkKind::None) {
      out.link_kind = LinkKind::Reflection;
    }
  }
  out.n_interferers = static_cast<int>(world.bs_positions().size()) - 1;
  out.n_eves = static_cast<int>(n);
  return out;
}

std::vector<TrialOutcome> simulate(const SystemParams& params, const SimulationOptions& options,
                                   Diagnostics* diag) {
  const TrialContext ctx(params, diag);
  const std::size_t n = options.n_trials;
  const std::size_t per_world = static_cast<std::size_t>(params.trials_per_world);
  const std::size_t n_worlds = (n + per_world - 1) / per_world;
  std::vector<TrialOutcome> outcomes(n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t w = next.fetch_add(1);
      if (w >= n_worlds) return;
      try {
        Rng world_rng = stream_rng(params.rng_seed, 2 * w);
        const WorldMap world = generate_world(params, world_rng);
        const std::size_t end = std::min(n, (w + 1) * per_world);
        for (std::size_t t = w * per_world; t < end; ++t) {
          Rng rng = stream_rng(params.rng_seed, 2 * t + 1);
          outcomes[t] = options.attack == Attack::Independent
                            ? run_independent_trial(ctx, world, rng)
                            : run_colluding_trial(ctx, world, rng);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_worlds);
        return;
      }
    }
  };

  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

std::vector<EspEstimate> estimates_from_outcomes(std::span<const TrialOutcome> outcomes,
                                                 std::span<const double> betas_db) {
  std::vector<double> sinrs;
  sinrs.reserve(outcomes.size());
  for (const auto& o : outcomes) sinrs.push_back(o.sinr);

  std::vector<EspEstimate> out;
  out.reserve(betas_db.size());
  const auto n = outcomes.size();
  for (double beta_db : betas_db) {
    EspEstimate e;
    e.beta_db = beta_db;
    e.n_trials = n;
    if (n > 0) {
      const auto above = kernels::count_above(sinrs, db_to_linear(beta_db));
      e.esp = static_cast<double>(above) / static_cast<double>(n);
      e.ci95_halfwidth = 1.96 * std::sqrt(e.esp * (1.0 - e.esp) / static_cast<double>(n));
    }
    out.push_back(e);
  }
  return out;
}

std::vector<EspEstimate> estimate_esp(const SystemParams& params,
                                      std::span<const double> betas_db,
                                      const SimulationOptions& options, Diagnostics* diag) {
  const auto outcomes = simulate(params, options, diag);
  return estimates_from_outcomes(outcomes, betas_db);
}

void write_trials_csv(std::ostream& os, std::span<const TrialOutcome> outcomes) {
  std::ostringstream buf;
  buf.precision(10);
  buf << "trial,eveX,eveY,linkKind,sinrDb,nInterferers\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    buf << i << ',' << o.eve_position.x << ',' << o.eve_position.y << ','
        << link_kind_name(o.link_kind) << ',';
    if (o.sinr > 0.0) {
      buf << linear_to_db(o.sinr);
    } else {
      buf << "-inf";
    }
    buf << ',' << o.n_interferers << '\n';
  }
  os << buf.str();
}

}  // namespace secsim
