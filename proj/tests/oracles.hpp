// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written from scratch on plain vectors with
// naive loops — no code is shared with the library beyond the language — so
// agreement is evidence, not tautology.  Scalar (real-valued) line grids only.
#ifndef CZLAB_TESTS_ORACLES_HPP
#define CZLAB_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// ---- dyadic averages ---------------------------------------------------

// avg[k][i] = mean of f over the i-th generation-k interval, k = 0..K.
inline std::vector<std::vector<double>> dyadic_averages(const std::vector<double>& f, int K) {
  std::vector<std::vector<double>> avg(static_cast<std::size_t>(K) + 1);
  avg[static_cast<std::size_t>(K)] = f;
  for (int k = K - 1; k >= 0; --k) {
    const auto& fine = avg[static_cast<std::size_t>(k) + 1];
    auto& coarse = avg[static_cast<std::size_t>(k)];
    coarse.resize(fine.size() / 2);
    for (std::size_t i = 0; i < coarse.size(); ++i)
      coarse[i] = (fine[2 * i] + fine[2 * i + 1]) / 2.0;
  }
  return avg;
}

// Conditional expectation at generation k by direct per-interval means.
inline std::vector<double> cond_exp(const std::vector<double>& f, int K, int k) {
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  const std::int64_t per = n >> k;
  std::vector<double> out(f.size());
  for (std::int64_t i = 0; i < (std::int64_t{1} << k); ++i) {
    double sum = 0.0;
    for (std::int64_t c = i * per; c < (i + 1) * per; ++c) sum += f[static_cast<std::size_t>(c)];
    const double mean = sum / static_cast<double>(per);
    for (std::int64_t c = i * per; c < (i + 1) * per; ++c) out[static_cast<std::size_t>(c)] = mean;
  }
  return out;
}

inline std::vector<double> mart_diff(const std::vector<double>& f, int K, int j) {
  std::vector<double> d = cond_exp(f, K, j);
  const std::vector<double> prev = cond_exp(f, K, j - 1);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= prev[i];
  return d;
}

// ---- concentric dilation on the circle ---------------------------------

// True iff the center of cell c lies within factor/2 interval side lengths
// of the center of generation-k interval i (wrapped, boundary included).
inline bool in_dilation(std::int64_t c, int K, int k, std::int64_t i, double factor) {
  const std::int64_t n = std::int64_t{1} << K;
  const std::int64_t w = std::int64_t{1} << (K - k);  // cells per interval
  // doubled coordinates: cell center 2c+1, interval center (2i+1)w, circle 2n
  std::int64_t d = (2 * c + 1) - (2 * i + 1) * w;
  d %= 2 * n;
  if (d < 0) d += 2 * n;
  d = std::min(d, 2 * n - d);
  // distance d/(2n) <= factor * (w/n) / 2  <=>  d <= factor * w
  return static_cast<double>(d) <= factor * static_cast<double>(w);
}

// ---- classical level-set decomposition ---------------------------------

// The scalar case of the level-set recursion: walk the tree from the root,
// cut the first interval whose average exceeds lambda.
struct ScalarDecomp {
  int K = 0;
  double lambda = 0.0;
  std::vector<std::vector<double>> avg;  // avg[k][i]
  std::vector<std::vector<char>> q;      // q[k][i] in {0,1}
  std::vector<std::vector<char>> p;      // p[k][i] = q[k-1][father] - q[k][i], k >= 1
  std::vector<double> qcell;             // terminal projection per cell
  std::vector<double> good, bad;         // f = good + bad
  std::vector<double> zeta;              // complement of the 9-dilated bad cubes
};

inline ScalarDecomp scalar_decompose(const std::vector<double>& f, int K, double lambda) {
  ScalarDecomp d;
  d.K = K;
  d.lambda = lambda;
  d.avg = dyadic_averages(f, K);
  if (d.avg[0][0] > lambda * (1.0 + 1e-12) + 1e-12)
    throw std::invalid_argument("scalar_decompose: root average exceeds lambda");
  d.q.resize(static_cast<std::size_t>(K) + 1);
  d.p.resize(static_cast<std::size_t>(K) + 1);
  d.q[0] = {1};
  for (int k = 1; k <= K; ++k) {
    const std::size_t nk = d.avg[static_cast<std::size_t>(k)].size();
    d.q[static_cast<std::size_t>(k)].resize(nk);
    d.p[static_cast<std::size_t>(k)].resize(nk);
    for (std::size_t i = 0; i < nk; ++i) {
      const char father = d.q[static_cast<std::size_t>(k) - 1][i / 2];
      const char keep =
          father && (d.avg[static_cast<std::size_t>(k)][i] <= lambda) ? 1 : 0;
      d.q[static_cast<std::size_t>(k)][i] = keep;
      d.p[static_cast<std::size_t>(k)][i] = static_cast<char>(father - keep);
    }
  }

  const std::size_t n = f.size();
  d.qcell.resize(n);
  d.good.resize(n);
  d.bad.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    // first generation (if any) at which the ancestry of c is cut
    int cut = 0;
    for (int k = 1; k <= K; ++k)
      if (d.p[static_cast<std::size_t>(k)][c >> (K - k)]) {
        cut = k;
        break;
      }
    if (cut == 0) {
      d.qcell[c] = d.q[static_cast<std::size_t>(K)][c] ? 1.0 : 0.0;
      d.good[c] = f[c];  // survived to the leaf
      d.bad[c] = 0.0;
    } else {
      d.qcell[c] = 0.0;
      d.good[c] = d.avg[static_cast<std::size_t>(cut)][c >> (K - cut)];
      d.bad[c] = f[c] - d.good[c];
    }
  }

  d.zeta.assign(n, 1.0);
  for (int k = 1; k <= K; ++k)
    for (std::size_t i = 0; i < d.p[static_cast<std::size_t>(k)].size(); ++i) {
      if (!d.p[static_cast<std::size_t>(k)][i]) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (in_dilation(static_cast<std::int64_t>(c), K, k, static_cast<std::int64_t>(i), 9.0))
          d.zeta[c] = 0.0;
    }
  return d;
}

// ---- localization masks and residuals ----------------------------------

// Union over k = 1..K-s of factor-dilated smallest interval unions covering
// the supports of the shifted martingale differences.
inline std::vector<char> localization_mask(const std::vector<double>& f, int K, int s,
                                           double factor) {
  const std::size_t n = f.size();
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::fabs(v));
  const double thr = 1e-12 * sup;
  std::vector<char> mask(n, 0);
  for (int k = 1; k + s <= K; ++k) {
    const std::vector<double> diff = mart_diff(f, K, k + s);
    std::vector<char> cubes(std::size_t{1} << k, 0);
    for (std::size_t c = 0; c < n; ++c)
      if (std::fabs(diff[c]) > thr) cubes[c >> (K - k)] = 1;
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      if (!cubes[i]) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (in_dilation(static_cast<std::int64_t>(c), K, k, static_cast<std::int64_t>(i), factor))
          mask[c] = 1;
    }
  }
  return mask;
}

inline double masked_l2(const std::vector<cplx>& tf, const std::vector<char>& mask) {
  double acc = 0.0;
  for (std::size_t c = 0; c < tf.size(); ++c)
    if (!mask[c]) acc += std::norm(tf[c]);
  return std::sqrt(acc / static_cast<double>(tf.size()));
}

// ---- discrete Fourier transform ----------------------------------------

// Quadratic-time DFT; forward uses exp(-2 pi i j nu / n).
inline std::vector<cplx> dft(const std::vector<cplx>& x, bool inverse) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  const double sign = inverse ? 2.0 : -2.0;
  for (std::size_t nu = 0; nu < n; ++nu) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j)
      acc += x[j] * std::polar(1.0, sign * std::acos(-1.0) * static_cast<double>(j * nu) /
                                        static_cast<double>(n));
    out[nu] = inverse ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

}  // namespace oracle

#endif  // CZLAB_TESTS_ORACLES_HPP
