#pragma once

#include <cstdint>

namespace hostembed {

// Radical-inverse (van der Corput) value of `index` in `base`; successive
// primes as bases give a Halton sequence.
inline double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace hostembed
