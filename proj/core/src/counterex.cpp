#include "czlab/counterex.hpp"

#include <cmath>
#include <stdexcept>

#include "czlab/fft.hpp"
#include "czlab/singint.hpp"
#include "czlab/specfun.hpp"

namespace czlab {

namespace {

void check_close(double got, double want, double tol, const char* what) {
  if (std::fabs(got - want) > tol * std::max(1.0, std::fabs(want)))
    throw std::runtime_error(std::string(what) + ": computed value disagrees with closed form");
}

}  // namespace

Mat MatrixFiltration::expectation(const Mat& a, int s) const {
  if (a.rows() != d || a.cols() != d)
    throw std::invalid_argument("MatrixFiltration: matrix size mismatch");
  if (s < 1 || s > d) throw std::out_of_range("MatrixFiltration: level out of range");
  Mat out = Mat::Zero(d, d);
  out.topLeftCorner(s, s) = a.topLeftCorner(s, s);
  for (int i = s; i < d; ++i) out(i, i) = a(i, i);
  return out;
}

MartTransformResult mart_transform_example(int m, double p) {
  if (m < 2) throw std::invalid_argument("mart_transform_example: m >= 2 required");
  if (p < 1.0 || p == kInfinity)
    throw std::invalid_argument("mart_transform_example: p in [1, inf) required");
  const MatrixFiltration filt{m};
  const bool dual = p > 2.0;

  // Martingale f and transform coefficients xi_k (1-based unit indices).
  Mat f = Mat::Zero(m, m);
  for (int k = 2; k <= m; ++k) {
    if (dual)
      f(k - 2, k - 1) = Complex{1.0, 0.0};  // e_{k-1,k}
    else
      f(0, k - 1) = Complex{1.0, 0.0};  // e_{1k}
  }
  Mat transform = Mat::Zero(m, m);
  Mat martingale = Mat::Zero(m, m);
  for (int k = 2; k <= m; ++k) {
    const Mat df = filt.expectation(f, k) - filt.expectation(f, k - 1);
    Mat xi = Mat::Zero(m, m);  // xi_{k-1}
    if (dual)
      xi(0, k - 2) = Complex{1.0, 0.0};  // e_{1,k-1}
    else
      xi(k - 2, 0) = Complex{1.0, 0.0};  // e_{k-1,1}
    transform += xi * df;
    martingale += df;
  }
  if ((martingale - f).norm() > 1e-12)
    throw std::runtime_error("mart_transform_example: differences do not telescope to f");

  MartTransformResult res;
  res.transformed = schatten_norm(transform, p);
  res.original = schatten_norm(martingale, p);
  const double root = std::sqrt(static_cast<double>(m - 1));
  const double power = std::pow(static_cast<double>(m - 1), 1.0 / p);
  check_close(res.transformed, dual ? root : power, 1e-10, "mart_transform_example transformed");
  check_close(res.original, dual ? power : root, 1e-10, "mart_transform_example original");
  return res;
}

LpBlowupResult lp_blowup(int m, double p, int K) {
  if (m < 1) throw std::invalid_argument("lp_blowup: m >= 1 required");
  if (p < 1.0) throw std::invalid_argument("lp_blowup: p >= 1 required");
  const TorusGrid g{1, K};
  const BandTransform t1 = lp_counterexample_ops(g, m, BandWhich::kT1);
  const BandTransform t2 = lp_counterexample_ops(g, m, BandWhich::kT2);
  const std::int64_t nfft = g.cell_count();

  // Band-limited scalars: g_k the inverse DFT of the indicator of the
  // positive side of band k; all |g_k| coincide cellwise.
  std::vector<std::vector<Complex>> gk(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    std::vector<Complex> spec(static_cast<std::size_t>(nfft));
    for (std::int64_t nu = 4 * k; nu <= 4 * k + 3; ++nu)
      spec[static_cast<std::size_t>(nu)] = Complex{1.0, 0.0};
    fft_radix2(spec, true);
    gk[static_cast<std::size_t>(k - 1)] = std::move(spec);
  }

  GridFunction f1(g, m + 1);  // row 0 carries the scalars
  GridFunction f2(g, m + 1);  // diagonal carries the scalars
  for (int k = 1; k <= m; ++k) {
    f1.set_entry(0, k, gk[static_cast<std::size_t>(k - 1)]);
    f2.set_entry(k, k, gk[static_cast<std::size_t>(k - 1)]);
  }

  LpBlowupResult res;
  res.ratio_t1 = lp_norm(t1.apply(f1), p) / lp_norm(f1, p);
  res.ratio_t2 = lp_norm(t2.apply(f2), p) / lp_norm(f2, p);
  const double inv_p = p == kInfinity ? 0.0 : 1.0 / p;
  res.expected_t1 = std::pow(static_cast<double>(m), inv_p - 0.5);
  res.expected_t2 = std::pow(static_cast<double>(m), 0.5 - inv_p);
  check_close(res.ratio_t1, res.expected_t1, 1e-8, "lp_blowup T1 ratio");
  check_close(res.ratio_t2, res.expected_t2, 1e-8, "lp_blowup T2 ratio");
  return res;
}

AppendixBResult appendix_b(int m) {
  if (m < 1) throw std::invalid_argument("appendix_b: m >= 1 required");
  const int d = 2 * m;
  const MatrixFiltration filt{d};
  const Mat f = Mat::Ones(d, d);

  AppendixBResult res;
  res.q.push_back(Mat::Identity(d, d));
  for (int s = 1; s <= d; ++s) {
    const Mat& prev = res.q.back();
    Mat a = prev * filt.expectation(f, s) * prev;
    a = ((a + a.adjoint()) / 2.0).eval();
    Mat qs = spectral_proj_leq(a, 1.0, prev, SpectralMode::kStrictPositive);
    res.p.push_back(prev - qs);
    res.q.push_back(std::move(qs));
  }

  // Asserted structure: odd steps are inert, even step 2k removes the pair
  // of units {2k-1, 2k}.
  for (int k = 1; k <= m; ++k) {
    if (res.p[static_cast<std::size_t>(2 * k - 2)].norm() > 1e-10)
      throw std::runtime_error("appendix_b: odd-step projection is not zero");
    Mat want = Mat::Zero(d, d);
    want(2 * k - 2, 2 * k - 2) = Complex{1.0, 0.0};
    want(2 * k - 1, 2 * k - 1) = Complex{1.0, 0.0};
    if ((res.p[static_cast<std::size_t>(2 * k - 1)] - want).norm() > 1e-10)
      throw std::runtime_error("appendix_b: even-step projection has the wrong support");
  }
  Mat q2_want = Mat::Zero(d, d);
  for (int i = 2; i < d; ++i) q2_want(i, i) = Complex{1.0, 0.0};
  if ((res.q[2] - q2_want).norm() > 1e-10)
    throw std::runtime_error("appendix_b: second projection has the wrong support");
  if (d >= 3 && (res.q[3] - res.q[2]).norm() > 1e-10)
    throw std::runtime_error("appendix_b: third projection should equal the second");

  Mat acc = Mat::Zero(d, d);
  for (int s = 1; s <= d; ++s)
    acc += filt.expectation(f, s) * res.p[static_cast<std::size_t>(s - 1)];
  res.l1 = schatten_norm(f, 1.0);
  res.l2sq = (acc.adjoint() * acc).trace().real();
  res.l2sq_closed = 2.0 * m * (m + 1.0);
  check_close(res.l1, 2.0 * m, 1e-9, "appendix_b L1 norm");
  check_close(res.l2sq, res.l2sq_closed, 1e-9, "appendix_b L2 growth");
  return res;
}

}  // namespace czlab
