#include <cstdlib>
#include <stdexcept>
#include <string>

#include "secsim/kernels.hpp"

namespace secsim::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SECSIM_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("SECSIM_ISA"); env != nullptr && std::string(env) == "scalar") {
    return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

Isa& selected() {
  static Isa isa = initial_isa();
  return isa;
}

}  // namespace

bool isa_supported(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() { return selected(); }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::runtime_error("kernel ISA " + std::string(isa_name(isa)) + " not supported here");
  }
  selected() = isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

#if defined(SECSIM_HAVE_AVX2)

bool segment_blocked(const ObstacleSoA& obs, const Segment3& seg, std::ptrdiff_t skip) {
  return selected() == Isa::Avx2 ? segment_blocked_avx2(obs, seg, skip)
                                 : segment_blocked_scalar(obs, seg, skip);
}

std::size_t count_above(std::span<const double> samples, double threshold) {
  return selected() == Isa::Avx2 ? count_above_avx2(samples, threshold)
                                 : count_above_scalar(samples, threshold);
}

#else

bool segment_blocked_avx2(const ObstacleSoA& obs, const Segment3& seg, std::ptrdiff_t skip) {
  return segment_blocked_scalar(obs, seg, skip);
}

std::size_t count_above_avx2(std::span<const double> samples, double threshold) {
  return count_above_scalar(samples, threshold);
}

bool segment_blocked(const ObstacleSoA& obs, const Segment3& seg, std::ptrdiff_t skip) {
  return segment_blocked_scalar(obs, seg, skip);
}

std::size_t count_above(std::span<const double> samples, double threshold) {
  return count_above_scalar(samples, threshold);
}

#endif

}  // namespace secsim::kernels
