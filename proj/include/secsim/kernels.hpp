// Data-parallel inner loops of the simulator. Each kernel has a scalar
// reference and an AVX2 variant that performs the same IEEE operations in the
// same order, so both return identical results. The public entry points
// dispatch once at startup on the CPU's capabilities.
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace secsim::kernels {

/// Obstacles as structure-of-arrays, padded to a multiple of kLanes with
/// entries that can never block (height -inf).
struct ObstacleSoA {
  static constexpr std::size_t kLanes = 4;

  std::vector<double> cx, cy;            // footprint center
  std::vector<double> cos_t, sin_t;      // orientation of the length axis
  std::vector<double> half_len, half_wid;
  std::vector<double> height;
  std::size_t count = 0;                 // real (unpadded) entries

  void reserve(std::size_t n);
  void push_back(double x, double y, double theta, double length, double width, double h);
  /// Pad to a lane multiple. Call once after the last push_back.
  void finalize();
  [[nodiscard]] std::size_t padded_size() const { return cx.size(); }
};

/// 3-D segment from a to b.
struct Segment3 {
  double ax, ay, az;
  double bx, by, bz;
};

/// True iff some obstacle (other than `skip`, -1 for none) has a footprint
/// crossed by the segment in plan view and is taller than the segment's
/// lowest point over that crossing.
bool segment_blocked_scalar(const ObstacleSoA& obs, const Segment3& seg, std::ptrdiff_t skip);
bool segment_blocked_avx2(const ObstacleSoA& obs, const Segment3& seg, std::ptrdiff_t skip);

/// Number of samples strictly greater than threshold (NaN never counts).
std::size_t count_above_scalar(std::span<const double> samples, double threshold);
std::size_t count_above_avx2(std::span<const double> samples, double threshold);

enum class Isa { Scalar, Avx2 };

[[nodiscard]] bool isa_supported(Isa isa);
/// Currently selected implementation.
[[nodiscard]] Isa active_isa();
/// Override the selection (tests, SECSIM_ISA=scalar). Throws if unsupported.
void force_isa(Isa isa);
[[nodiscard]] std::string_view isa_name(Isa isa);

bool segment_blocked(const ObstacleSoA& obs, const Segment3& seg, std::ptrdiff_t skip = -1);
std::size_t count_above(std::span<const double> samples, double threshold);

}  // namespace secsim::kernels
