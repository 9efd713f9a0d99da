#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "secsim/kernels.hpp"
#include "secsim/rng.hpp"

using namespace secsim;
using namespace secsim::kernels;

namespace {

ObstacleSoA random_obstacles(std::size_t n, Rng& rng) {
  ObstacleSoA soa;
  soa.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    soa.push_back(200 * uniform01(rng), 160 * uniform01(rng), 3.14159 * uniform01(rng),
                  1 + 30 * uniform01(rng), 1 + 20 * uniform01(rng), 60 * uniform01(rng));
  }
  soa.finalize();
  return soa;
}

Segment3 random_segment(Rng& rng) {
  Segment3 s{200 * uniform01(rng), 160 * uniform01(rng), 35 * uniform01(rng),
             200 * uniform01(rng), 160 * uniform01(rng), 35 * uniform01(rng)};
  const double u = uniform01(rng);
  // Axis-aligned and degenerate segments exercise the zero-direction slabs.
  if (u < 0.1) s.by = s.ay;
  else if (u < 0.2) s.bx = s.ax;
  else if (u < 0.25) { s.bx = s.ax; s.by = s.ay; }
  return s;
}

}  // namespace

TEST_CASE("padding") {
  Rng rng = stream_rng(1, 0);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 9u}) {
    const auto soa = random_obstacles(n, rng);
    CHECK(soa.count == n);
    CHECK(soa.padded_size() % ObstacleSoA::kLanes == 0);
    CHECK(soa.padded_size() >= n);
    for (std::size_t i = n; i < soa.padded_size(); ++i) CHECK(std::isinf(soa.height[i]));
  }
}

TEST_CASE("scalar segment test") {
  ObstacleSoA soa;
  soa.push_back(100, 80, 0.0, 10, 10, 20);
  soa.finalize();
  CHECK(segment_blocked_scalar(soa, {50, 80, 35, 150, 80, 1.5}, -1));
  CHECK_FALSE(segment_blocked_scalar(soa, {50, 80, 35, 150, 80, 1.5}, 0));
  CHECK_FALSE(segment_blocked_scalar(soa, {50, 80, 35, 150, 80, 30}, -1));
  CHECK_FALSE(segment_blocked_scalar(soa, {50, 100, 35, 150, 100, 1.5}, -1));
  CHECK(segment_blocked_scalar(soa, {100, 80, 35, 100, 80, 1.5}, -1));  // inside, vertical
  CHECK_FALSE(segment_blocked_scalar(soa, {0, 0, 35, 0, 0, 1.5}, -1));
}

TEST_CASE("vector kernels agree with scalar kernels bit for bit") {
  if (!isa_supported(Isa::Avx2)) {
    MESSAGE("AVX2 not available; equivalence not exercised");
    return;
  }
  Rng rng = stream_rng(99, 0);
  std::size_t blocked = 0, total = 0;
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 40u, 101u}) {
    const auto soa = random_obstacles(n, rng);
    for (int t = 0; t < 400; ++t) {
      const auto seg = random_segment(rng);
      for (std::ptrdiff_t skip : {std::ptrdiff_t{-1}, std::ptrdiff_t{0},
                                  static_cast<std::ptrdiff_t>(n / 2)}) {
        const bool s = segment_blocked_scalar(soa, seg, skip);
        CHECK(s == segment_blocked_avx2(soa, seg, skip));
        blocked += s ? 1 : 0;
        ++total;
      }
    }
  }
  CHECK(blocked > total / 10);
  CHECK(blocked < total);

  std::vector<double> xs;
  for (int i = 0; i < 103; ++i) xs.push_back(uniform01(rng) * 10 - 5);
  xs.push_back(std::numeric_limits<double>::quiet_NaN());
  xs.push_back(std::numeric_limits<double>::infinity());
  xs.push_back(-std::numeric_limits<double>::infinity());
  xs.push_back(0.0);
  for (std::size_t len = 0; len <= xs.size(); ++len) {
    const std::span<const double> view(xs.data(), len);
    for (double thr : {-10.0, -1.0, 0.0, 0.5, 4.9, std::numeric_limits<double>::infinity()}) {
      CHECK(count_above_scalar(view, thr) == count_above_avx2(view, thr));
    }
  }
}

TEST_CASE("count above") {
  const std::vector<double> v{1.0, 2.0, 3.0, std::numeric_limits<double>::quiet_NaN(), 2.0};
  CHECK(count_above_scalar(v, 2.0) == 1);
  CHECK(count_above_scalar(v, 0.0) == 4);
  CHECK(count_above(v, 1.5) == 3);
}

TEST_CASE("isa selection") {
  const Isa original = active_isa();
  force_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  CHECK(isa_name(Isa::Scalar) == "scalar");
  if (isa_supported(Isa::Avx2)) {
    force_isa(Isa::Avx2);
    CHECK(active_isa() == Isa::Avx2);
  } else {
    CHECK_THROWS(force_isa(Isa::Avx2));
  }
  force_isa(original);
}
