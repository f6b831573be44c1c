// Deterministic pairwise (tree) reduction.  All norm/trace accumulations go
// through here so results are bit-identical for a given input regardless of
// thread count.
#ifndef CZLAB_REDUCE_HPP
#define CZLAB_REDUCE_HPP

#include <cstdint>

namespace czlab {

// Sum of g(i) for i in [lo, hi) by recursive halving.  T needs operator+=.
template <class T, class Get>
T pairwise_sum_range(std::int64_t lo, std::int64_t hi, const Get& g) {
  if (hi - lo <= 8) {
    T acc = g(lo);
    for (std::int64_t i = lo + 1; i < hi; ++i) acc += g(i);
    return acc;
  }
  const std::int64_t mid = lo + (hi - lo) / 2;
  T acc = pairwise_sum_range<T>(lo, mid, g);
  acc += pairwise_sum_range<T>(mid, hi, g);
  return acc;
}

// Sum of g(i) for i in [0, n); returns `zero` when n == 0.
template <class T, class Get>
T pairwise_sum(std::int64_t n, const Get& g, T zero) {
  if (n <= 0) return zero;
  return pairwise_sum_range<T>(0, n, g);
}

}  // namespace czlab

#endif  // CZLAB_REDUCE_HPP
