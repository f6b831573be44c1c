// Radix-2 complex FFT for power-of-two signal lengths, plus the signed
// frequency layout used by multiplier operators.
#ifndef CZLAB_FFT_HPP
#define CZLAB_FFT_HPP

#include <cstdint>
#include <vector>

#include "czlab/gridfn.hpp"

namespace czlab {

// In-place transform: forward maps a[j] -> sum_i a[i] exp(-2 pi i ij/N);
// inverse uses the opposite sign and divides by N.  Length must be a power
// of two.  Twiddles are computed directly per butterfly (no incremental
// drift), so results are bit-stable across runs.
void fft_radix2(std::vector<Complex>& a, bool inverse);

// Signed frequency of FFT bin j: j for j < nfft/2, j - nfft otherwise.
// The Nyquist bin j = nfft/2 reports -nfft/2.
std::int64_t frequency_of_index(std::int64_t j, std::int64_t nfft);

}  // namespace czlab

#endif  // CZLAB_FFT_HPP
