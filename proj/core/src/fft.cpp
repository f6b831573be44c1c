#include "czlab/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace czlab {

void fft_radix2(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_radix2: length must be a power of two");
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t t = 0; t < len / 2; ++t) {
        const Complex w = std::polar(1.0, base * static_cast<double>(t));
        const Complex u = a[i + t];
        const Complex v = a[i + t + len / 2] * w;
        a[i + t] = u + v;
        a[i + t + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

std::int64_t frequency_of_index(std::int64_t j, std::int64_t nfft) {
  return j < nfft / 2 ? j : j - nfft;
}

}  // namespace czlab
