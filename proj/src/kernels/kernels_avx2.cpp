// Compiled with -mavx2. Only reached after a runtime CPU check.
#include <immintrin.h>

#include "secsim/kernels.hpp"

namespace secsim::kernels {

bool segment_blocked_avx2(const ObstacleSoA& obs, const Segment3& seg, std::ptrdiff_t skip) {
  const __m256d ax = _mm256_set1_pd(seg.ax);
  const __m256d ay = _mm256_set1_pd(seg.ay);
  const __m256d az = _mm256_set1_pd(seg.az);
  const __m256d dx = _mm256_set1_pd(seg.bx - seg.ax);
  const __m256d dy = _mm256_set1_pd(seg.by - seg.ay);
  const __m256d dz = _mm256_set1_pd(seg.bz - seg.az);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sign = _mm256_set1_pd(-0.0);

  const __m256i skip_v = _mm256_set1_epi64x(static_cast<long long>(skip));
  __m256i lane = _mm256_setr_epi64x(0, 1, 2, 3);
  const __m256i step = _mm256_set1_epi64x(4);

  const std::size_t n = obs.padded_size();
  for (std::size_t i = 0; i < n; i += 4, lane = _mm256_add_epi64(lane, step)) {
    const __m256d rx = _mm256_sub_pd(ax, _mm256_loadu_pd(&obs.cx[i]));
    const __m256d ry = _mm256_sub_pd(ay, _mm256_loadu_pd(&obs.cy[i]));
    const __m256d c = _mm256_loadu_pd(&obs.cos_t[i]);
    const __m256d s = _mm256_loadu_pd(&obs.sin_t[i]);

    const __m256d p0u = _mm256_add_pd(_mm256_mul_pd(rx, c), _mm256_mul_pd(ry, s));
    const __m256d du = _mm256_add_pd(_mm256_mul_pd(dx, c), _mm256_mul_pd(dy, s));
    const __m256d p0v = _mm256_sub_pd(_mm256_mul_pd(ry, c), _mm256_mul_pd(rx, s));
    const __m256d dv = _mm256_sub_pd(_mm256_mul_pd(dy, c), _mm256_mul_pd(dx, s));

    const __m256d hl = _mm256_loadu_pd(&obs.half_len[i]);
    const __m256d hw = _mm256_loadu_pd(&obs.half_wid[i]);
    const __m256d nhl = _mm256_xor_pd(hl, sign);
    const __m256d nhw = _mm256_xor_pd(hw, sign);
    const __m256d t1u = _mm256_div_pd(_mm256_sub_pd(nhl, p0u), du);
    const __m256d t2u = _mm256_div_pd(_mm256_sub_pd(hl, p0u), du);
    const __m256d t1v = _mm256_div_pd(_mm256_sub_pd(nhw, p0v), dv);
    const __m256d t2v = _mm256_div_pd(_mm256_sub_pd(hw, p0v), dv);

    const __m256d s_in = _mm256_max_pd(_mm256_max_pd(zero, _mm256_min_pd(t1u, t2u)),
                                       _mm256_min_pd(t1v, t2v));
    const __m256d s_out = _mm256_min_pd(_mm256_min_pd(one, _mm256_max_pd(t1u, t2u)),
                                        _mm256_max_pd(t1v, t2v));
    const __m256d crosses = _mm256_cmp_pd(s_in, s_out, _CMP_LE_OQ);

    const __m256d z_in = _mm256_add_pd(az, _mm256_mul_pd(s_in, dz));
    const __m256d z_out = _mm256_add_pd(az, _mm256_mul_pd(s_out, dz));
    const __m256d z_low = _mm256_min_pd(z_in, z_out);
    const __m256d taller = _mm256_cmp_pd(_mm256_loadu_pd(&obs.height[i]), z_low, _CMP_GT_OQ);

    const __m256d skipped = _mm256_castsi256_pd(_mm256_cmpeq_epi64(lane, skip_v));
    const __m256d hit = _mm256_andnot_pd(skipped, _mm256_and_pd(crosses, taller));
    if (_mm256_movemask_pd(hit) != 0) return true;
  }
  return false;
}

std::size_t count_above_avx2(std::span<const double> samples, double threshold) {
  const __m256d t = _mm256_set1_pd(threshold);
  const std::size_t n = samples.size();
  const double* x = samples.data();
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gt = _mm256_cmp_pd(_mm256_loadu_pd(x + i), t, _CMP_GT_OQ);
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(gt)));
  }
  for (; i < n; ++i) count += (x[i] > threshold) ? 1 : 0;
  return count;
}

}  // namespace secsim::kernels
