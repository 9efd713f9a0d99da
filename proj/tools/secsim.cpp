// secsim: analytic and Monte Carlo eavesdropping success probability sweeps.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secsim/analytic.hpp"
#include "secsim/config.hpp"
#include "secsim/montecarlo.hpp"
#include "secsim/sweep.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> sets;
  long long seed = -1;
  std::string interference_mode;
};

struct SweepArgs {
  std::size_t trials = 1000;
  std::string vary;
  std::string beta_db = "1:100:1";
  std::string attack = "independent";
  unsigned workers = 1;
  bool dry_run = false;
  std::string trial_dump;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw secsim::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void apply_assignment(secsim::ParamsBuilder& b, const std::string& kv, const char* origin) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw secsim::ConfigError(std::string(origin) + ": expected key=value, got '" + kv + "'");
  }
  b.set(kv.substr(0, eq), kv.substr(eq + 1), origin);
}

/// file, then environment, then command line.
secsim::SystemParams resolve_params(const CommonArgs& args,
                                    const std::vector<std::string>& extras) {
  secsim::ParamsBuilder b;
  if (!args.config_path.empty()) b.apply_text(read_file(args.config_path), args.config_path);
  b.apply_env();
  if (!args.interference_mode.empty()) b.set("interferenceMode", args.interference_mode, "--mode");
  if (args.seed >= 0) b.set("rngSeed", std::to_string(args.seed), "--seed");
  for (const auto& kv : args.sets) apply_assignment(b, kv, "--set");
  for (const auto& e : extras) {
    if (e.rfind("--", 0) != 0) throw secsim::ConfigError("unexpected argument '" + e + "'");
    apply_assignment(b, e.substr(2), "flag");
  }
  return b.build();
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw secsim::ConfigError("cannot open output file '" + path + "'");
  fn(out);
}

void print_warnings(const secsim::Diagnostics& diag, std::ostream& os) {
  for (const auto& w : diag.warnings()) os << "warning: " << w.code << ": " << w.message << '\n';
}

void add_common(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--config", c.config_path, "Config file (key = value lines)");
  cmd->add_option("--seed", c.seed, "RNG seed (overrides file and ESP_SEED)");
  cmd->add_option("--set", c.sets, "Config override key=value (repeatable)");
  cmd->add_option("--mode", c.interference_mode, "Interference integral: regularized|paperFaithful");
  cmd->allow_extras();
}

void add_sweep(CLI::App* cmd, SweepArgs& s, CommonArgs& c) {
  add_common(cmd, c);
  cmd->add_option("--out", c.out_path, "Output CSV (default stdout)");
  cmd->add_option("--trials", s.trials, "Monte Carlo trials per sweep point");
  cmd->add_option("--vary", s.vary, "Swept knob, e.g. eta=0.3,0.5,0.8 (eta|fc|nb)");
  cmd->add_option("--beta-db", s.beta_db, "Threshold grid start:stop:step or list, dB");
  cmd->add_option("--attack", s.attack, "independent|colluding")
      ->check(CLI::IsMember({"independent", "colluding"}));
  cmd->add_option("--workers", s.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--dry-run", s.dry_run, "Write the header only");
}

int run_sweep_command(secsim::SweepMode mode, const SweepArgs& s, const CommonArgs& c,
                      const std::vector<std::string>& extras) {
  const auto params = resolve_params(c, extras);
  secsim::SweepSpec spec;
  spec.mode = mode;
  spec.attack = s.attack == "colluding" ? secsim::Attack::Colluding : secsim::Attack::Independent;
  spec.betas_db = secsim::parse_beta_grid(s.beta_db);
  if (!s.vary.empty()) secsim::parse_vary(s.vary, spec);
  spec.n_trials = s.trials;
  spec.workers = s.workers;
  spec.dry_run = s.dry_run || (mode != secsim::SweepMode::Analytic && s.trials == 0);

  if (!s.trial_dump.empty() && !spec.vary_key.empty()) {
    throw secsim::ConfigError("--trial-dump cannot be combined with --vary");
  }

  secsim::Diagnostics diag;
  with_output(c.out_path, [&](std::ostream& os) { diag = secsim::run_sweep(spec, params, os); });
  print_warnings(diag, std::cerr);

  if (!s.trial_dump.empty()) {
    secsim::SimulationOptions opts{spec.n_trials, spec.attack, spec.workers};
    const auto outcomes = secsim::simulate(params, opts);
    with_output(s.trial_dump, [&](std::ostream& os) { secsim::write_trials_csv(os, outcomes); });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eavesdropping success probability in mmWave SWIPT networks"};
  app.require_subcommand(1);

  CommonArgs common;
  SweepArgs sweep;

  auto* analytic = app.add_subcommand("analytic", "Closed-form ESP sweep");
  add_sweep(analytic, sweep, common);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ESP sweep");
  add_sweep(simulate, sweep, common);
  simulate->add_option("--trial-dump", sweep.trial_dump, "Per-trial CSV path");
  auto* compare = app.add_subcommand("compare", "Analytic and Monte Carlo side by side");
  add_sweep(compare, sweep, common);

  auto* dump = app.add_subcommand("dump-world", "Write one sampled obstacle map as CSV");
  add_common(dump, common);
  dump->add_option("--out", common.out_path, "Output CSV (default stdout)");

  auto* check = app.add_subcommand("validate-config", "Validate a config and list model warnings");
  add_common(check, common);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* cmd : app.get_subcommands()) {
      const auto extras = cmd->remaining();
      using secsim::SweepMode;
      if (cmd == analytic) return run_sweep_command(SweepMode::Analytic, sweep, common, extras);
      if (cmd == simulate) return run_sweep_command(SweepMode::Simulate, sweep, common, extras);
      if (cmd == compare) return run_sweep_command(SweepMode::Compare, sweep, common, extras);
      if (cmd == dump) {
        const auto params = resolve_params(common, extras);
        with_output(common.out_path,
                    [&](std::ostream& os) { secsim::dump_world(params, params.rng_seed, os); });
        return 0;
      }
      if (cmd == check) {
        const auto params = resolve_params(common, extras);
        std::cout << "config ok\n";
        print_warnings(secsim::audit_model(params), std::cout);
        return 0;
      }
    }
  } catch (const secsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
