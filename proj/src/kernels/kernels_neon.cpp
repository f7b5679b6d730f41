// AArch64 only. Two doubles per lane group; same operation order as the scalar
// reference.

#include <arm_neon.h>

#include <algorithm>

#include "hostembed/kernels.hpp"

namespace hostembed::kernels::neon {

void converse_objective(const ConverseCoeffs& k, std::span<const double> sigma_xv,
                        std::span<double> out) {
  const std::size_t n = sigma_xv.size();
  const double s2 = k.sigma2;
  const float64x2_t v_s2 = vdupq_n_f64(s2);
  const float64x2_t v_num = vdupq_n_f64(s2 * k.rate_factor);
  const float64x2_t v_s2p = vdupq_n_f64(s2 * k.power);
  const float64x2_t v_base = vdupq_n_f64(1.0 + s2 + k.power);
  const float64x2_t v_inv_s2 = vdupq_n_f64(1.0 / s2);
  const float64x2_t v_two = vdupq_n_f64(2.0);
  const float64x2_t v_zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t s = vld1q_f64(sigma_xv.data() + i);
    const float64x2_t c2 = vdivq_f64(v_num, vaddq_f64(v_base, vmulq_f64(v_two, s)));
    const float64x2_t d = vsqrtq_f64(vmaxq_f64(vsubq_f64(v_s2p, vmulq_f64(s, s)), v_zero));
    const float64x2_t e = vsqrtq_f64(vmaxq_f64(vsubq_f64(v_s2, c2), v_zero));
    const float64x2_t h = vmulq_f64(
        vsubq_f64(vmulq_f64(vsqrtq_f64(c2), vaddq_f64(v_s2, s)), vmulq_f64(d, e)), v_inv_s2);
    const uint64x2_t positive = vcgtq_f64(h, v_zero);
    const float64x2_t sq = vmulq_f64(h, h);
    vst1q_f64(out.data() + i, vreinterpretq_f64_u64(vandq_u64(positive, vreinterpretq_u64_f64(sq))));
  }
  if (i < n) scalar::converse_objective(k, sigma_xv.subspan(i), out.subspan(i));
}

void scaled_sq_distances(std::span<const double> y, double scale, const CodebookView& book,
                         std::span<double> out) {
  const std::size_t n = book.count;
  const float64x2_t v_scale = vdupq_n_f64(scale);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < book.length; ++i) {
      const float64x2_t t = vld1q_f64(book.words.data() + i * n + j);
      const float64x2_t diff = vsubq_f64(vdupq_n_f64(y[i]), vmulq_f64(v_scale, t));
      acc = vaddq_f64(acc, vmulq_f64(diff, diff));
    }
    vst1q_f64(out.data() + j, acc);
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < book.length; ++i) {
      const double diff = y[i] - scale * book.words[i * n + j];
      acc = acc + diff * diff;
    }
    out[j] = acc;
  }
}

void dot_products(std::span<const double> x, const CodebookView& book, std::span<double> out) {
  const std::size_t n = book.count;
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < book.length; ++i) {
      const float64x2_t t = vld1q_f64(book.words.data() + i * n + j);
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(x[i]), t));
    }
    vst1q_f64(out.data() + j, acc);
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < book.length; ++i) acc = acc + x[i] * book.words[i * n + j];
    out[j] = acc;
  }
}

}  // namespace hostembed::kernels::neon
