#include <atomic>
#include <string>

#include "hostembed/errors.hpp"
#include "hostembed/kernels.hpp"

namespace hostembed::kernels {

#if !HOSTEMBED_HAVE_AVX2
namespace avx2 {
namespace {
[[noreturn]] void unavailable() { throw ValidationError("AVX2 kernels are not built"); }
}  // namespace
void converse_objective(const ConverseCoeffs&, std::span<const double>, std::span<double>) {
  unavailable();
}
void scaled_sq_distances(std::span<const double>, double, const CodebookView&, std::span<double>) {
  unavailable();
}
void dot_products(std::span<const double>, const CodebookView&, std::span<double>) {
  unavailable();
}
}  // namespace avx2
#endif

#if !HOSTEMBED_HAVE_NEON
namespace neon {
namespace {
[[noreturn]] void unavailable() { throw ValidationError("NEON kernels are not built"); }
}  // namespace
void converse_objective(const ConverseCoeffs&, std::span<const double>, std::span<double>) {
  unavailable();
}
void scaled_sq_distances(std::span<const double>, double, const CodebookView&, std::span<double>) {
  unavailable();
}
void dot_products(std::span<const double>, const CodebookView&, std::span<double>) {
  unavailable();
}
}  // namespace neon
#endif

namespace {

bool cpu_has_avx2() {
#if HOSTEMBED_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa probe() {
  if (cpu_has_avx2()) return Isa::avx2;
#if HOSTEMBED_HAVE_NEON
  return Isa::neon;
#else
  return Isa::scalar;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{probe()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

Isa detected_isa() { return probe(); }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
    case Isa::neon: return HOSTEMBED_HAVE_NEON != 0;
  }
  return false;
}

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw ValidationError("instruction set " + std::string(to_string(isa)) + " is not available");
  }
  active().store(isa, std::memory_order_relaxed);
}

void converse_objective(const ConverseCoeffs& k, std::span<const double> sigma_xv,
                        std::span<double> out) {
  switch (active_isa()) {
    case Isa::avx2: return avx2::converse_objective(k, sigma_xv, out);
    case Isa::neon: return neon::converse_objective(k, sigma_xv, out);
    case Isa::scalar: break;
  }
  scalar::converse_objective(k, sigma_xv, out);
}

void scaled_sq_distances(std::span<const double> y, double scale, const CodebookView& book,
                         std::span<double> out) {
  switch (active_isa()) {
    case Isa::avx2: return avx2::scaled_sq_distances(y, scale, book, out);
    case Isa::neon: return neon::scaled_sq_distances(y, scale, book, out);
    case Isa::scalar: break;
  }
  scalar::scaled_sq_distances(y, scale, book, out);
}

void dot_products(std::span<const double> x, const CodebookView& book, std::span<double> out) {
  switch (active_isa()) {
    case Isa::avx2: return avx2::dot_products(x, book, out);
    case Isa::neon: return neon::dot_products(x, book, out);
    case Isa::scalar: break;
  }
  scalar::dot_products(x, book, out);
}

}  // namespace hostembed::kernels
