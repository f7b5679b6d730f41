#include <algorithm>
#include <cmath>

#include "hostembed/kernels.hpp"

namespace hostembed::kernels::scalar {

// With u = 1/gamma the objective's square root is c*u - sqrt(sigma^2 u^2 - 2 B u + S),
// concave in u, maximized at c*B/sigma^2 - sqrt(sigma^2 P - s^2) sqrt(sigma^2 - c^2)/sigma^2
// where B = sigma^2 + s and S = sigma^2 + P + 2 s.
void converse_objective(const ConverseCoeffs& k, std::span<const double> sigma_xv,
                        std::span<double> out) {
  const double s2 = k.sigma2;
  const double num = s2 * k.rate_factor;
  const double s2p = s2 * k.power;
  const double inv_s2 = 1.0 / s2;
  for (std::size_t i = 0; i < sigma_xv.size(); ++i) {
    const double s = sigma_xv[i];
    const double c2 = num / (1.0 + s2 + k.power + 2.0 * s);
    const double d = std::sqrt(std::max(s2p - s * s, 0.0));
    const double e = std::sqrt(std::max(s2 - c2, 0.0));
    const double h = (std::sqrt(c2) * (s2 + s) - d * e) * inv_s2;
    out[i] = h > 0.0 ? h * h : 0.0;
  }
}

void scaled_sq_distances(std::span<const double> y, double scale, const CodebookView& book,
                         std::span<double> out) {
  const std::size_t n = book.count;
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
  for (std::size_t i = 0; i < book.length; ++i) {
    const double yi = y[i];
    const double* row = book.words.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = yi - scale * row[j];
      out[j] = out[j] + diff * diff;
    }
  }
}

void dot_products(std::span<const double> x, const CodebookView& book, std::span<double> out) {
  const std::size_t n = book.count;
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
  for (std::size_t i = 0; i < book.length; ++i) {
    const double xi = x[i];
    const double* row = book.words.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] = out[j] + xi * row[j];
  }
}

}  // namespace hostembed::kernels::scalar
