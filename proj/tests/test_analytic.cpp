#include <doctest.h>

#include <cmath>
#include <limits>

#include "secsim/analytic.hpp"
#include "secsim/antenna.hpp"
#include "secsim/propagation.hpp"
#include "secsim/units.hpp"

using namespace secsim;

namespace {

SystemParams table_defaults(const std::string& extra = "") {
  return load_params("gainClampMode=swapSafe\n" + extra);
}

// Independent k oracle: midpoint rule over s of F_H at the ray height.
double k_oracle(double hb, double hr, const std::function<double(double)>& cdf) {
  const int n = 200000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) / n;
    acc += cdf(s * hr + (1 - s) * hb);
  }
  return 1.0 - acc / n;
}

}  // namespace

TEST_CASE("blockage statistics") {
  auto p = table_defaults("obstacleDensity=1e-4\nobstacleHeightMin=0\nobstacleHeightMax=50");
  const auto s = blockage_stats(p);
  CHECK(s.beta0 == doctest::Approx(1.5915e-3).epsilon(1e-4));
  CHECK(s.beta0 == doctest::Approx(2 * 1e-4 * 25 / kPi).epsilon(1e-14));
  CHECK(s.p == doctest::Approx(0.015).epsilon(1e-14));
  CHECK(s.k == doctest::Approx(0.635).epsilon(1e-9));
  CHECK(expected_blockage_count(s, 0.0) == s.p);
  CHECK(expected_blockage_count(s, 100.0) == doctest::Approx(0.1742).epsilon(1e-3));
  CHECK(expected_blockage_count(s, 200.0) - expected_blockage_count(s, 100.0) ==
        doctest::Approx(expected_blockage_count(s, 100.0) - expected_blockage_count(s, 0.0)));
  CHECK(los_probability(s, 100.0) == doctest::Approx(0.8953).epsilon(1e-4));
  double prev = 1.0;
  for (double d = 0.0; d < 1000.0; d += 25.0) {
    const double v = los_probability(s, d);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(los_probability(BlockageStats{1e-3, 0.0, 0.7}, 0.0) == 1.0);
}

TEST_CASE("height scaling factor against an independent oracle") {
  // Uniform on [10, 50].
  auto p = table_defaults();
  CHECK(height_scaling_factor(p, 1.5) ==
        doctest::Approx(k_oracle(35, 1.5, [](double h) { return std::clamp((h - 10) / 40, 0.0, 1.0); }))
            .epsilon(1e-6));
  // Symmetric triangular on [0, 50].
  auto t = table_defaults("heightLaw=triangular\nobstacleHeightMin=0");
  auto tri = [](double h) {
    const double x = std::clamp(h / 50.0, 0.0, 1.0);
    return x <= 0.5 ? 2 * x * x : 1 - 2 * (1 - x) * (1 - x);
  };
  CHECK(height_scaling_factor(t, 1.5) == doctest::Approx(k_oracle(35, 1.5, tri)).epsilon(1e-6));
  for (double k : {height_scaling_factor(p, 1.5), height_scaling_factor(t, 1.5)}) {
    CHECK(k >= 0.0);
    CHECK(k <= 1.0);
  }
}

TEST_CASE("degenerate obstacle heights") {
  // Shorter than every point of the ray: never blocks.
  CHECK(height_scaling_factor(table_defaults("obstacleHeightMin=1\nobstacleHeightMax=1"), 1.5) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // Taller than both antennas: every crossing blocks.
  CHECK(height_scaling_factor(table_defaults("obstacleHeightMin=40\nobstacleHeightMax=40"), 1.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // In between: blocks only where the ray has dropped below 20 m, s > 15/33.5.
  CHECK(height_scaling_factor(table_defaults("obstacleHeightMin=20\nobstacleHeightMax=20"), 1.5) ==
        doctest::Approx(1.0 - 15.0 / 33.5).epsilon(1e-9));
}

TEST_CASE("reflection path probability") {
  auto p = table_defaults();
  const double d = 50.0;
  CHECK(reflection_probability({d / kSpeedOfLight, d, 0.0},
                               table_defaults("obstacleDensity=1e-15")) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // Degenerate ellipse: c*tau = D, theta = 0.
  CHECK(reflection_probability({d / kSpeedOfLight, d, 0.0}, p) ==
        doctest::Approx(std::exp(-5e-4 * (10.0 * d + 150.0))).epsilon(1e-9));
  CHECK_THROWS_AS(reflection_probability({0.9 * d / kSpeedOfLight, d, 0.0}, p),
                  std::domain_error);
  CHECK_THROWS_AS(reflection_probability({1e-6, 0.0, 0.0}, p), std::domain_error);

  double prev = 1.0;
  for (double f = 1.0; f < 3.0; f += 0.05) {
    const double v = reflection_probability({f * d / kSpeedOfLight, d, kPi / 2}, p);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    prev = v;
  }
  const auto g = ReflectionGeometry::nominal(p, 80.0);
  CHECK(g.delay == doctest::Approx(1.2 * 80.0 / kSpeedOfLight));
  CHECK(g.incidence_angle == doctest::Approx(kPi / 4));
  const double pub = reflection_probability_published_sign(g, p);
  CHECK(pub > 1.0);
  CHECK(reflection_probability(g, p) == doctest::Approx(1.0 / pub).epsilon(1e-12));
}

TEST_CASE("nearest LOS base station distance law") {
  auto p = table_defaults();
  const auto s = blockage_stats(p);
  const double lb = p.effective_bs_density();
  CHECK(nearest_los_bs_cdf(s, lb, 0.0) == 0.0);
  const double limit = 1.0 - std::exp(-2 * kPi * lb * std::exp(-s.p) / (s.beta0 * s.beta0));
  CHECK(std::fabs(nearest_los_bs_cdf(s, lb, std::numeric_limits<double>::infinity()) - limit) <
        1e-9);
  CHECK(std::fabs(nearest_los_bs_cdf(s, lb, 1e9) - limit) < 1e-9);
  CHECK(limit < 1.0);
  double prev = 0.0;
  for (double x = 1e-6; x < 1e6; x *= 1.5) {
    const double v = nearest_los_bs_cdf(s, lb, x);
    CHECK(v >= prev);
    prev = v;
  }
  // Small-distance branch agrees with direct evaluation.
  const double x = 10.0, y = s.beta0 * x;
  const double direct = 1.0 - std::exp(-2 * kPi * lb * std::exp(-s.p) / (s.beta0 * s.beta0) *
                                       (1 - y * std::exp(-y) - std::exp(-y)));
  CHECK(nearest_los_bs_cdf(s, lb, x) == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("interference integrals") {
  auto p = table_defaults();
  const double b = path_loss_constant(28e9);
  CHECK(interference_integral(2.0, p, InterferenceMode::Regularized) ==
        doctest::Approx(b * (1e-4 + 2e-4 * std::log(100.0))).epsilon(1e-12));
  CHECK(interference_integral(2.0, p, InterferenceMode::Regularized) ==
        doctest::Approx(b * (1e-4 + 9.21e-4)).epsilon(1e-3));
  // alpha = 3 against a direct numeric integral of (2x/r^2) b max(1,x)^-3.
  double num = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * 100.0 / n;
    num += 2 * x / 1e4 * b * std::pow(std::max(1.0, x), -3.0);
  }
  num *= 100.0 / n;
  CHECK(interference_integral(3.0, p, InterferenceMode::Regularized) ==
        doctest::Approx(num).epsilon(1e-5));

  CHECK(interference_integral(3.0, p, InterferenceMode::PaperFaithful) ==
        doctest::Approx(-2e-6).epsilon(1e-12));
  CHECK_THROWS_AS(interference_integral(2.0, p, InterferenceMode::PaperFaithful), ModelError);

  const auto s = blockage_stats(p);
  CHECK(interference_mean(table_defaults("bsDensity=1e-20"), s, InterferenceMode::Regularized) <
        1e-25);
  CHECK(interference_mean(p, s, InterferenceMode::Regularized) > 0.0);

  Diagnostics diag;
  auto pf = table_defaults("carrierFreqGhz=60");
  CHECK(interference_mean(pf, blockage_stats(pf), InterferenceMode::PaperFaithful, &diag) < 0.0);
  CHECK(diag.has("interference-integral-negative"));
}

TEST_CASE("independent ESP") {
  auto p = table_defaults();
  const auto in = make_esp_inputs(p);
  CHECK(in.expected_gain == doctest::Approx((2.0 + 0.2) / 2));

  // SINR can never exceed (1-eta)/eta.
  CHECK(esp_independent(in, 0.7 / 0.3) == 0.0);
  CHECK(esp_independent(in, 3.0) == 0.0);
  const auto half = make_esp_inputs(table_defaults("eta=0.5"));
  CHECK(esp_independent(half, 1.0) == 0.0);
  CHECK(threshold_radii(half, 1.0).los == 0.0);

  // Fewer reflections, smaller ESP; rho = 0 leaves only the LOS term.
  auto no_ref = make_esp_inputs(table_defaults("rho=0"));
  const double beta = db_to_linear(1.0);
  const auto radii = threshold_radii(no_ref, beta);
  CHECK(radii.reflection == 0.0);
  const double los_only =
      nearest_los_bs_cdf(no_ref.stats, p.effective_bs_density(), radii.los) *
      los_probability(no_ref.stats, radii.los) *
      (1.0 - reflection_probability(ReflectionGeometry::nominal(no_ref.params, radii.los),
                                    no_ref.params));
  CHECK(esp_independent(no_ref, beta) == doctest::Approx(los_only).epsilon(1e-14));

  // Nonincreasing over 1..100 dB, and inside [0, 1].
  double prev = 1.0;
  for (double db = 1.0; db <= 100.0; db += 0.25) {
    const double v = esp_independent(in, db_to_linear(db));
    CHECK(v >= 0.0);
    CHECK(v <= prev);
    prev = v;
  }
  // Far below 0 dB the radii grow past the blockage scale and P_Los at the
  // radius falls faster than F_d rises, so the curve bends back down.
  CHECK(esp_independent(in, db_to_linear(-20.0)) < esp_independent(in, db_to_linear(-10.0)));

  // With a fixed evaluation distance only F_d moves: monotone everywhere.
  const auto fixed = make_esp_inputs(table_defaults("espEvalDistance=50"));
  prev = 1.0;
  for (double db = -40.0; db <= 100.0; db += 0.5) {
    const double v = esp_independent(fixed, db_to_linear(db));
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("independent ESP ordering in eta") {
  for (const char* fc : {"28", "38", "60"}) {
    const std::string base = std::string("carrierFreqGhz=") + fc + "\n";
    const auto a = make_esp_inputs(table_defaults(base + "eta=0.3"));
    const auto b = make_esp_inputs(table_defaults(base + "eta=0.5"));
    const auto c = make_esp_inputs(table_defaults(base + "eta=0.8"));
    for (double db = -10.0; db <= 100.0; db += 1.0) {
      const double beta = db_to_linear(db);
      CHECK(esp_independent(a, beta) >= esp_independent(b, beta));
      CHECK(esp_independent(b, beta) >= esp_independent(c, beta));
    }
  }
}

TEST_CASE("independent ESP under joint power scaling") {
  auto p = table_defaults();
  const auto in = make_esp_inputs(p);
  p.tx_power *= 10.0;
  auto scaled = make_esp_inputs(p);
  scaled.noise = in.noise * 10.0;
  CHECK(scaled.interference == doctest::Approx(10.0 * in.interference).epsilon(1e-13));
  for (double db = -10.0; db <= 3.0; db += 0.25) {
    CHECK(esp_independent(scaled, db_to_linear(db)) ==
          doctest::Approx(esp_independent(in, db_to_linear(db))).epsilon(1e-12));
  }
}

TEST_CASE("fixed evaluation distance and geometry") {
  auto p = table_defaults("espEvalDistance=60");
  auto in = make_esp_inputs(p);
  CHECK(in.eval_distance.value() == 60.0);
  const double beta = db_to_linear(-3.0);
  const auto r = threshold_radii(in, beta);
  const double lb = p.effective_bs_density();
  const double pl = los_probability(in.stats, 60.0);
  const double pr = reflection_probability(ReflectionGeometry::nominal(p, 60.0), p);
  const double expected = nearest_los_bs_cdf(in.stats, lb, r.los) * pl * (1 - pr) +
                          nearest_los_bs_cdf(in.stats, lb, r.reflection) * (1 - pl) * pr;
  CHECK(esp_independent(in, beta) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("colluding ESP") {
  auto p = table_defaults();
  const auto s = blockage_stats(p);
  const double count = kPi * 1e4 * p.effective_bs_density();
  const auto c = esp_colluding(p, s, 0.1, InterferenceMode::Regularized);
  CHECK(c.ratio == doctest::Approx(0.7 / (count + 0.3)).epsilon(1e-14));
  CHECK(c.esp == 1.0);
  CHECK(esp_colluding(p, s, 0.5, InterferenceMode::Regularized).esp == 0.0);

  // Zero-interference limit.
  auto lonely = table_defaults("eta=0.4\nbsDensity=1e-18");
  const auto z = esp_colluding(lonely, blockage_stats(lonely), 1.4, InterferenceMode::Regularized);
  CHECK(z.ratio == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(z.esp == 1.0);
  CHECK(esp_colluding(lonely, blockage_stats(lonely), 1.5, InterferenceMode::Regularized).esp ==
        0.0);

  // Cancels every power-like factor; strictly decreasing in BS density.
  auto loud = table_defaults("txPower=50\nrho=0.9\nmainLobeGain=30\nsideLobeGain=1\nbeamwidthRad=1");
  CHECK(esp_colluding(loud, blockage_stats(loud), 1.0, InterferenceMode::Regularized).ratio ==
        doctest::Approx(c.ratio).epsilon(1e-14));
  double prev = std::numeric_limits<double>::infinity();
  for (double lb = 1e-6; lb < 1e-2; lb *= 2.0) {
    auto q = table_defaults("bsDensity=" + std::to_string(lb));
    const double r = esp_colluding(q, blockage_stats(q), 1.0, InterferenceMode::Regularized).ratio;
    CHECK(r < prev);
    prev = r;
  }

  // A negative bracket from the published integrals is a model error.
  auto pf = table_defaults("carrierFreqGhz=60");
  CHECK_THROWS_AS(esp_colluding(pf, blockage_stats(pf), 1.0, InterferenceMode::PaperFaithful),
                  ModelError);
}

TEST_CASE("model audit lists published discrepancies") {
  const auto d = audit_model(load_params(""));
  CHECK(d.has("sidelobe-formula-breakdown"));
  CHECK(d.has("interference-integral-sign"));
  CHECK(d.has("reflection-exponent-sign"));
  CHECK(d.has("gain-pdf-delta"));
  CHECK(d.has("reflection-radius-rho"));
  CHECK(d.has("noise-formula"));
  CHECK_FALSE(audit_model(load_params("nElements=16")).has("sidelobe-formula-breakdown"));
  CHECK_FALSE(audit_model(load_params("noiseMode=paperLiteral")).has("noise-formula"));
}
