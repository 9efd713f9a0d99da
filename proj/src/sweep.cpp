#include "secsim/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "secsim/analytic.hpp"
#include "secsim/units.hpp"

namespace secsim {

const char* sweep_mode_name(SweepMode mode) {
  switch (mode) {
    case SweepMode::Simulate:
      return "simulate";
    case SweepMode::Compare:
      return "compare";
    case SweepMode::Analytic:
      break;
  }
  return "analytic";
}

const char* attack_name(Attack attack) {
  return attack == Attack::Colluding ? "colluding" : "independent";
}

namespace {

double parse_number(std::string_view s, std::string_view what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number(text.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<double> default_betas() {
  std::vector<double> out;
  for (int b = 1; b <= 100; ++b) out.push_back(b);
  return out;
}

const char* interference_mode_name(InterferenceMode m) {
  return m == InterferenceMode::PaperFaithful ? "paperFaithful" : "regularized";
}

struct AnalyticCell {
  double esp = 0.0;
  std::string meta;
  Diagnostics diag;
};

/// One closed-form evaluation per beta for one parameter set.
std::vector<AnalyticCell> analytic_column(const SystemParams& p, Attack attack,
                                          const std::vector<double>& betas) {
  std::vector<AnalyticCell> cells(betas.size());
  const std::string base = std::string("analytic;interference=") +
                           interference_mode_name(p.interference_mode);
  if (attack == Attack::Independent) {
    Diagnostics setup;
    const EspInputs in = make_esp_inputs(p, &setup);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      cells[i].diag.merge(setup);
      cells[i].esp = esp_independent(in, db_to_linear(betas[i]), &cells[i].diag);
      cells[i].meta = base;
    }
  } else {
    Diagnostics setup;
    // The colluding closed form has no antenna term, but the configured
    // patterns must still be valid for the run to mean anything.
    (void)tx_pattern(p, &setup);
    (void)rx_pattern(p, &setup);
    const BlockageStats stats = blockage_stats(p);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      cells[i].diag.merge(setup);
      const ColludingEsp c =
          esp_colluding(p, stats, db_to_linear(betas[i]), p.interference_mode, &cells[i].diag);
      cells[i].esp = c.esp;
      cells[i].meta = base + ";ratio=" + fmt(c.ratio);
    }
  }
  return cells;
}

std::string mc_meta(const SystemParams& p) {
  return "mc;seed=" + std::to_string(p.rng_seed) +
         ";trialsPerWorld=" + std::to_string(p.trials_per_world);
}

}  // namespace

std::vector<double> parse_beta_grid(std::string_view text) {
  if (text.find(':') == std::string_view::npos) return parse_list(text, "beta grid");
  std::vector<double> parts;
  std::string_view rest = text;
  while (true) {
    const auto colon = rest.find(':');
    parts.push_back(parse_number(rest.substr(0, colon), "beta grid"));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  if (parts.size() != 3) throw ConfigError("beta grid: expected start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start) throw ConfigError("beta grid: need step > 0 and stop >= start");
  std::vector<double> out;
  // Index-based so that 1:100:1 yields exactly 100 values with no drift.
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

void parse_vary(std::string_view text, SweepSpec& spec) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError("vary: expected key=v1,v2,...");
  const std::string key(text.substr(0, eq));
  if (key != "eta" && key != "fc" && key != "nb") {
    throw ConfigError("vary: key must be eta, fc or nb, got '" + key + "'");
  }
  spec.vary_key = key;
  spec.vary_values = parse_list(text.substr(eq + 1), "vary");
}

SystemParams with_vary(const SystemParams& params, const std::string& key, double value) {
  SystemParams p = params;
  if (key == "eta") {
    p.ts_ratio = value;
  } else if (key == "fc") {
    p.carrier_freq = value < 1e6 ? value * 1e9 : value;
  } else if (key == "nb") {
    if (value != std::floor(value)) throw ConfigError("vary nb: not an integer");
    p.num_bs = static_cast<int>(value);
  } else if (!key.empty()) {
    throw ConfigError("vary: unknown key '" + key + "'");
  }
  validate(p);
  return p;
}

Diagnostics run_sweep(const SweepSpec& spec, const SystemParams& params, std::ostream& out) {
  const std::vector<double> betas = spec.betas_db.empty() ? default_betas() : spec.betas_db;
  const bool varied = !spec.vary_key.empty();
  if (varied && spec.vary_values.empty()) throw ConfigError("vary: no values");
  const std::vector<double> values = varied ? spec.vary_values : std::vector<double>{0.0};

  std::ostringstream csv;
  if (spec.mode == SweepMode::Compare) {
    csv << "mode,attack,varyKey,varyValue,betaDb,espAnalytic,espMc,absDiff,ci95,nTrials,"
           "engineMeta,warnings\n";
  } else {
    csv << "mode,attack,varyKey,varyValue,betaDb,esp,ci95,nTrials,engineMeta,warnings\n";
  }

  Diagnostics all;
  if (!spec.dry_run) {
    for (double value : values) {
      const SystemParams p = with_vary(params, spec.vary_key, value);
      const std::string prefix = std::string(sweep_mode_name(spec.mode)) + ',' +
                                 attack_name(spec.attack) + ',' +
                                 (varied ? spec.vary_key : "none") + ',' +
                                 (varied ? fmt(value) : "") + ',';

      std::vector<AnalyticCell> analytic;
      if (spec.mode != SweepMode::Simulate) analytic = analytic_column(p, spec.attack, betas);

      std::vector<EspEstimate> mc;
      Diagnostics mc_diag;
      if (spec.mode != SweepMode::Analytic) {
        SimulationOptions opts;
        opts.n_trials = spec.n_trials;
        opts.attack = spec.attack;
        opts.workers = spec.workers;
        mc = estimate_esp(p, betas, opts, &mc_diag);
      }

      for (std::size_t i = 0; i < betas.size(); ++i) {
        Diagnostics row;
        std::string meta;
        if (!analytic.empty()) {
          row.merge(analytic[i].diag);
          meta = analytic[i].meta;
        }
        if (!mc.empty()) {
          row.merge(mc_diag);
          meta += (meta.empty() ? "" : "|") + mc_meta(p);
        }
        csv << prefix << fmt(betas[i]) << ',';
        switch (spec.mode) {
          case SweepMode::Analytic:
            csv << fmt(analytic[i].esp) << ",0,0,";
            break;
          case SweepMode::Simulate:
            csv << fmt(mc[i].esp) << ',' << fmt(mc[i].ci95_halfwidth) << ',' << mc[i].n_trials
                << ',';
            break;
          case SweepMode::Compare:
            csv << fmt(analytic[i].esp) << ',' << fmt(mc[i].esp) << ','
                << fmt(std::fabs(analytic[i].esp - mc[i].esp)) << ','
                << fmt(mc[i].ci95_halfwidth) << ',' << mc[i].n_trials << ',';
            break;
        }
        csv << meta << ',' << row.codes() << '\n';
        all.merge(row);
      }
    }
  }
  out << csv.str();
  if (!out) throw ConfigError("sweep: failed to write output");
  return all;
}

void dump_world(const SystemParams& params, std::uint64_t seed, std::ostream& out) {
  // Same stream the simulator uses for world 0.
  Rng rng = stream_rng(seed, 0);
  write_obstacles_csv(out, generate_world(params, rng));
  if (!out) throw ConfigError("dump-world: failed to write output");
}

}  // namespace secsim
