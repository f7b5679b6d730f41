#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and
// SIMD variants (AVX2 on x86-64, NEON on AArch64) selected at runtime. The
// variants use the same operation order and no fused multiply-add, so their
// results are bit-identical to the scalar reference.

#include <cstddef>
#include <span>
#include <string_view>

namespace hostembed::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

// Best instruction set supported by this CPU and build.
Isa detected_isa();
// Instruction set currently used by the dispatching entry points.
Isa active_isa();
bool isa_available(Isa isa);
// Throws ValidationError if `isa` is not available.
void set_active_isa(Isa isa);

class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

// Constants of the converse objective shared by a batch of sigma_xv values.
struct ConverseCoeffs {
  double sigma2 = 1.0;
  double power = 0.0;
  double rate_factor = 1.0;  // 2^{2R}
};

// out[i] = sup over gamma > 0 of (1/gamma^2) ((c - b(gamma))^+)^2 at
// sigma_xv = sigma_xv[i], evaluated in closed form.
void converse_objective(const ConverseCoeffs& k, std::span<const double> sigma_xv,
                        std::span<double> out);

// Codebook words stored coordinate-major: coordinate i of word j lives at
// words[i * count + j].
struct CodebookView {
  std::span<const double> words;
  std::size_t length = 0;  // blocklength m
  std::size_t count = 0;   // number of words
};

// out[j] = sum_i (y[i] - scale * t_j[i])^2
void scaled_sq_distances(std::span<const double> y, double scale, const CodebookView& book,
                         std::span<double> out);

// out[j] = sum_i x[i] * t_j[i]
void dot_products(std::span<const double> x, const CodebookView& book, std::span<double> out);

// Direct access to each implementation, used by the equivalence tests.
namespace scalar {
void converse_objective(const ConverseCoeffs& k, std::span<const double> sigma_xv,
                        std::span<double> out);
void scaled_sq_distances(std::span<const double> y, double scale, const CodebookView& book,
                         std::span<double> out);
void dot_products(std::span<const double> x, const CodebookView& book, std::span<double> out);
}  // namespace scalar

namespace avx2 {
void converse_objective(const ConverseCoeffs& k, std::span<const double> sigma_xv,
                        std::span<double> out);
void scaled_sq_distances(std::span<const double> y, double scale, const CodebookView& book,
                         std::span<double> out);
void dot_products(std::span<const double> x, const CodebookView& book, std::span<double> out);
}  // namespace avx2

namespace neon {
void converse_objective(const ConverseCoeffs& k, std::span<const double> sigma_xv,
                        std::span<double> out);
void scaled_sq_distances(std::span<const double> y, double scale, const CodebookView& book,
                         std::span<double> out);
void dot_products(std::span<const double> x, const CodebookView& book, std::span<double> out);
}  // namespace neon

}  // namespace hostembed::kernels
