// Compiled with -mavx2 on x86-64 only; reached through the dispatcher after a
// CPUID check.

#include <immintrin.h>

#include <algorithm>

#include "hostembed/kernels.hpp"

namespace hostembed::kernels::avx2 {

void converse_objective(const ConverseCoeffs& k, std::span<const double> sigma_xv,
                        std::span<double> out) {
  const std::size_t n = sigma_xv.size();
  const double s2 = k.sigma2;
  const __m256d v_s2 = _mm256_set1_pd(s2);
  const __m256d v_num = _mm256_set1_pd(s2 * k.rate_factor);
  const __m256d v_s2p = _mm256_set1_pd(s2 * k.power);
  const __m256d v_base = _mm256_set1_pd(1.0 + s2 + k.power);
  const __m256d v_inv_s2 = _mm256_set1_pd(1.0 / s2);
  const __m256d v_two = _mm256_set1_pd(2.0);
  const __m256d v_zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_loadu_pd(sigma_xv.data() + i);
    const __m256d c2 = _mm256_div_pd(v_num, _mm256_add_pd(v_base, _mm256_mul_pd(v_two, s)));
    const __m256d d = _mm256_sqrt_pd(_mm256_max_pd(_mm256_sub_pd(v_s2p, _mm256_mul_pd(s, s)), v_zero));
    const __m256d e = _mm256_sqrt_pd(_mm256_max_pd(_mm256_sub_pd(v_s2, c2), v_zero));
    const __m256d h = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_mul_pd(_mm256_sqrt_pd(c2), _mm256_add_pd(v_s2, s)), _mm256_mul_pd(d, e)),
        v_inv_s2);
    const __m256d positive = _mm256_cmp_pd(h, v_zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out.data() + i, _mm256_and_pd(positive, _mm256_mul_pd(h, h)));
  }
  if (i < n) scalar::converse_objective(k, sigma_xv.subspan(i), out.subspan(i));
}

void scaled_sq_distances(std::span<const double> y, double scale, const CodebookView& book,
                         std::span<double> out) {
  const std::size_t n = book.count;
  const __m256d v_scale = _mm256_set1_pd(scale);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < book.length; ++i) {
      const __m256d t = _mm256_loadu_pd(book.words.data() + i * n + j);
      const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(y[i]), _mm256_mul_pd(v_scale, t));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out.data() + j, acc);
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
  for (; j + 4 <= n; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < book.length; ++i) {
      const __m256d t = _mm256_loadu_pd(book.words.data() + i * n + j);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(x[i]), t));
    }
    _mm256_storeu_pd(out.data() + j, acc);
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < book.length; ++i) acc = acc + x[i] * book.words[i * n + j];
    out[j] = acc;
  }
}

}  // namespace hostembed::kernels::avx2
