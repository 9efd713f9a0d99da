#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "secsim/geometry.hpp"
#include "secsim/sweep.hpp"

using namespace secsim;

namespace {

SystemParams params_of(const std::string& extra = "") {
  return load_params("gainClampMode=swapSafe\n" + extra);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string sweep_csv(const SweepSpec& spec, const SystemParams& p) {
  std::ostringstream os;
  run_sweep(spec, p, os);
  return os.str();
}

}  // namespace

TEST_CASE("beta grids") {
  const auto g = parse_beta_grid("1:100:1");
  REQUIRE(g.size() == 100);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == 100.0);
  CHECK(parse_beta_grid("0:1:0.1").size() == 11);
  CHECK(parse_beta_grid("3,1.5,-2") == std::vector<double>{3.0, 1.5, -2.0});
  CHECK_THROWS_AS(parse_beta_grid("1:100"), ConfigError);
  CHECK_THROWS_AS(parse_beta_grid("1:100:0"), ConfigError);
  CHECK_THROWS_AS(parse_beta_grid("5:1:1"), ConfigError);
  CHECK_THROWS_AS(parse_beta_grid("a:b:c"), ConfigError);

  SweepSpec spec;
  parse_vary("eta=0.3,0.5,0.8", spec);
  CHECK(spec.vary_key == "eta");
  CHECK(spec.vary_values == std::vector<double>{0.3, 0.5, 0.8});
  CHECK_THROWS_AS(parse_vary("power=1", spec), ConfigError);
  CHECK_THROWS_AS(parse_vary("eta", spec), ConfigError);
  CHECK(with_vary(params_of(), "fc", 60).carrier_freq == 60e9);
  CHECK(with_vary(params_of(), "nb", 5).num_bs == 5);
  CHECK_THROWS_AS(with_vary(params_of(), "eta", 1.2), ConfigError);
}

TEST_CASE("analytic sweep over eta gives ordered, decreasing curves") {
  SweepSpec spec;
  spec.mode = SweepMode::Analytic;
  parse_vary("eta=0.3,0.5,0.8", spec);
  const auto rows = lines_of(sweep_csv(spec, params_of()));
  REQUIRE(rows.size() == 1 + 300);
  CHECK(rows[0] == "mode,attack,varyKey,varyValue,betaDb,esp,ci95,nTrials,engineMeta,warnings");
  std::vector<std::vector<double>> curves(3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 10);
    CHECK(f[0] == "analytic");
    CHECK(f[2] == "eta");
    curves[(i - 1) / 100].push_back(std::stod(f[5]));
  }
  for (int c = 0; c < 3; ++c) {
    for (int b = 1; b < 100; ++b) CHECK(curves[c][b] <= curves[c][b - 1]);
  }
  for (int b = 0; b < 100; ++b) {
    CHECK(curves[0][b] >= curves[1][b]);
    CHECK(curves[1][b] >= curves[2][b]);
  }
}

TEST_CASE("dry run writes only the header") {
  SweepSpec spec;
  spec.mode = SweepMode::Simulate;
  spec.dry_run = true;
  CHECK(sweep_csv(spec, params_of()) ==
        "mode,attack,varyKey,varyValue,betaDb,esp,ci95,nTrials,engineMeta,warnings\n");
}

TEST_CASE("compare mode joins both engines") {
  SweepSpec spec;
  spec.mode = SweepMode::Compare;
  spec.betas_db = {-5.0, 0.0, 2.0};
  spec.n_trials = 200;
  const auto rows = lines_of(sweep_csv(spec, params_of()));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] ==
        "mode,attack,varyKey,varyValue,betaDb,espAnalytic,espMc,absDiff,ci95,nTrials,"
        "engineMeta,warnings");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    REQUIRE(f.size() == 12);
    CHECK(std::stod(f[7]) == doctest::Approx(std::fabs(std::stod(f[5]) - std::stod(f[6]))));
    CHECK(f[9] == "200");
    CHECK(f[11].find("sidelobe-formula-breakdown") != std::string::npos);
  }
}

TEST_CASE("simulated sweep csv is identical across runs and worker counts") {
  SweepSpec spec;
  spec.mode = SweepMode::Simulate;
  spec.betas_db = parse_beta_grid("-10:10:1");
  spec.n_trials = 300;
  parse_vary("eta=0.3,0.5", spec);
  spec.workers = 1;
  const auto a = sweep_csv(spec, params_of());
  const auto b = sweep_csv(spec, params_of());
  spec.workers = 8;
  const auto c = sweep_csv(spec, params_of());
  CHECK(a == b);
  CHECK(a == c);

  spec.attack = Attack::Colluding;
  spec.workers = 1;
  const auto d = sweep_csv(spec, params_of());
  spec.workers = 8;
  CHECK(d == sweep_csv(spec, params_of()));
}

TEST_CASE("warnings reach the csv and the summary") {
  SweepSpec spec;
  spec.betas_db = {1.0};
  std::ostringstream os;
  // Weak transmitter: the negative integral stays below the noise floor.
  const auto p = params_of("carrierFreqGhz=60\ninterferenceMode=paperFaithful\ntxPowerDbm=-60");
  const auto diag = run_sweep(spec, p, os);
  CHECK(diag.has("interference-integral-negative"));
  CHECK(os.str().find("interference-integral-negative") != std::string::npos);
}

TEST_CASE("invalid model inputs surface as errors") {
  SweepSpec spec;
  spec.betas_db = {1.0};
  std::ostringstream os;
  CHECK_THROWS_AS(run_sweep(spec, load_params(""), os), ModelError);
}

TEST_CASE("world dump") {
  std::ostringstream a, b;
  dump_world(params_of(), 42, a);
  dump_world(params_of(), 42, b);
  CHECK(a.str() == b.str());
  CHECK(lines_of(a.str()).size() > 1);

  std::ostringstream empty;
  dump_world(params_of("obstacleDensity=1e-15"), 42, empty);
  CHECK(empty.str() == "cx,cy,l,w,theta,h,reflector\n");

  // The dumped map is the first world of a simulation with that seed.
  auto p = params_of("seed=42");
  Rng rng = stream_rng(42, 0);
  const auto world = generate_world(p, rng);
  std::istringstream in(a.str());
  const auto loaded = read_obstacles_csv(in);
  REQUIRE(loaded.size() == world.obstacles().size());
  const WorldMap replay(world.extent(), loaded, world.bs_positions(), world.bs_height(), 1.0);
  for (int t = 0; t < 200; ++t) {
    const Node tx{{uniform01(rng) * 200, uniform01(rng) * 160}, 35.0};
    const Node rx{{uniform01(rng) * 200, uniform01(rng) * 160}, 1.5};
    CHECK(los_blocked(tx, rx, world) == los_blocked(tx, rx, replay));
  }
}
