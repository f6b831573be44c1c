#include <random>

#include "czlab/fft.hpp"
#include "czlab/singint.hpp"
#include "czlab/specfun.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace czlab;

namespace {

std::vector<Complex> random_signal(std::int64_t n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::vector<Complex> v(static_cast<std::size_t>(n));
  for (auto& x : v)
    x = Complex{(static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5,
                (static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5};
  return v;
}

// signal with no mean and no Nyquist component (where the symbol vanishes)
std::vector<Complex> band_free_signal(std::int64_t n, std::uint32_t seed) {
  std::vector<Complex> hat = random_signal(n, seed);
  hat[0] = Complex{0.0, 0.0};
  hat[static_cast<std::size_t>(n) / 2] = Complex{0.0, 0.0};
  fft_radix2(hat, true);
  return hat;
}

GridFunction random_fn(const TorusGrid& g, int m, std::uint32_t seed) {
  GridFunction f(g, m);
  std::uint32_t s = seed;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) f.set_entry(r, c, random_signal(g.cell_count(), s++));
  return f;
}

double max_abs(const GridFunction& f) {
  double worst = 0.0;
  for (std::int64_t c = 0; c < f.grid().cell_count(); ++c)
    worst = std::max(worst, f.cell(c).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST_CASE("hilbert transform is an isometry away from the dead bins") {
  const TorusGrid g{1, 6};
  GridFunction f(g, 1);
  f.set_entry(0, 0, band_free_signal(g.cell_count(), 101));
  const GridFunction hf = hilbert(f);
  CHECK(lp_norm(hf, 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-10));
  GridFunction hhf = hilbert(hf);
  hhf += f;
  CHECK(max_abs(hhf) < 1e-10);
}

TEST_CASE("hilbert transform kills constants") {
  const TorusGrid g{1, 5};
  const GridFunction one = GridFunction::constant(g, Mat::Constant(1, 1, Complex{3.0, 0.0}));
  CHECK(max_abs(hilbert(one)) < 1e-12);
}

TEST_CASE("cotangent row transforms to the exact sawtooth") {
  const TorusGrid g{1, 6};
  const std::int64_t n = g.cell_count();
  const KernelOperator T = KernelOperator::cotangent(g);
  std::vector<Complex> scaled(static_cast<std::size_t>(n));
  for (std::int64_t d = 0; d < n; ++d)
    scaled[static_cast<std::size_t>(d)] = T.kernel_row()[static_cast<std::size_t>(d)] * g.cell_volume();
  const auto hat = oracle::dft(scaled, false);
  const double pi = std::acos(-1.0);
  CHECK(std::abs(hat[0]) < 1e-9);
  for (std::int64_t nu = 1; nu < n; ++nu) {
    const Complex want{0.0, -pi * (1.0 - 2.0 * static_cast<double>(nu) / static_cast<double>(n))};
    CHECK(std::abs(hat[static_cast<std::size_t>(nu)] - want) < 1e-8);
  }
}

TEST_CASE("cotangent kernel has unit size constant and finite smoothness") {
  const TorusGrid g{1, 7};
  const KernelOperator T = KernelOperator::cotangent(g);
  const KernelReport rep = validate_kernel(T, 1.0);
  CHECK(rep.size_const > 0.9);
  CHECK(rep.size_const < 1.05);
  CHECK(rep.smooth_y_const > 0.0);
  CHECK(rep.smooth_y_const < 100.0);
  CHECK(rep.smooth_x_const > 0.0);
  CHECK(rep.smooth_x_const < 100.0);
}

TEST_CASE("circulant application equals the literal double sum") {
  const TorusGrid g{1, 5};
  const KernelOperator T = KernelOperator::cotangent(g);
  GridFunction f(g, 1);
  f.set_entry(0, 0, random_signal(g.cell_count(), 102));
  const GridFunction got = kernel_apply(T, f, 0.0);
  const std::int64_t n = g.cell_count();
  for (std::int64_t x = 0; x < n; ++x) {
    Complex acc{0.0, 0.0};
    for (std::int64_t y = 0; y < n; ++y) {
      if (y == x) continue;
      acc += T.kernel_at(x, y) * f.at(y) * g.cell_volume();
    }
    CHECK(std::abs(got.at(x) - acc) < 1e-11);
  }
}

TEST_CASE("truncation at the torus diameter removes everything") {
  const TorusGrid g{1, 5};
  const KernelOperator T = KernelOperator::cotangent(g);
  GridFunction f(g, 1);
  f.set_entry(0, 0, random_signal(g.cell_count(), 103));
  CHECK(max_abs(kernel_apply(T, f, 0.5)) < 1e-14);
}

TEST_CASE("adjoints pair correctly in every kernel form") {
  const TorusGrid g{1, 5};
  const std::int64_t n = g.cell_count();
  GridFunction f(g, 1), h(g, 1);
  f.set_entry(0, 0, random_signal(n, 104));
  h.set_entry(0, 0, random_signal(n, 105));

  const KernelOperator mult = KernelOperator::hilbert(g);
  CHECK(std::abs(inner_phi(apply_operator(mult, f), h) -
                 inner_phi(f, apply_operator(mult.adjoint(), h))) < 1e-10);

  const KernelOperator circ = KernelOperator::cotangent(g);
  CHECK(std::abs(inner_phi(apply_operator(circ, f), h) -
                 inner_phi(f, apply_operator(circ.adjoint(), h))) < 1e-10);

  std::mt19937 gen(106);
  std::vector<double> entries(static_cast<std::size_t>(n * n));
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t y = 0; y < n; ++y)
      entries[static_cast<std::size_t>(x * n + y)] =
          x == y ? 0.0 : (static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5;
  const KernelOperator tab = KernelOperator::table(g, entries, 1.0);
  CHECK(std::abs(inner_phi(apply_operator(tab, f), h) -
                 inner_phi(f, apply_operator(tab.adjoint(), h))) < 1e-10);
}

TEST_CASE("a table holding the circulant row reproduces it exactly") {
  const TorusGrid g{1, 5};
  const std::int64_t n = g.cell_count();
  const KernelOperator circ = KernelOperator::cotangent(g);
  std::vector<double> entries(static_cast<std::size_t>(n * n));
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t y = 0; y < n; ++y)
      entries[static_cast<std::size_t>(x * n + y)] =
          circ.kernel_row()[static_cast<std::size_t>((x - y + n) % n)];
  const KernelOperator tab = KernelOperator::table(g, entries, 1.0);
  GridFunction f(g, 1);
  f.set_entry(0, 0, random_signal(n, 107));
  GridFunction diff = apply_operator(tab, f);
  GridFunction ref = apply_operator(circ, f);
  ref *= Complex{-1.0, 0.0};
  diff += ref;
  CHECK(max_abs(diff) < 1e-10);
  const KernelReport a = validate_kernel(circ, 1.0);
  const KernelReport b = validate_kernel(tab, 1.0);
  CHECK(a.size_const == doctest::Approx(b.size_const).epsilon(1e-9));
  CHECK(a.smooth_y_const == doctest::Approx(b.smooth_y_const).epsilon(1e-9));
  CHECK(a.smooth_x_const == doctest::Approx(b.smooth_x_const).epsilon(1e-9));
}

TEST_CASE("scalar kernels commute with constant matrix factors") {
  const TorusGrid g{1, 5};
  const GridFunction f = random_fn(g, 2, 108);
  std::mt19937 gen(109);
  Mat a(2, 2), b(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      a(r, c) = Complex{(static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5,
                        (static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5};
      b(r, c) = Complex{(static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5,
                        (static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5};
    }
  GridFunction afb(g, 2);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) afb.cell(c) = a * f.cell(c) * b;
  const GridFunction lhs = hilbert(afb);
  const GridFunction hf = hilbert(f);
  for (std::int64_t c = 0; c < g.cell_count(); ++c)
    CHECK((lhs.cell(c) - a * hf.cell(c) * b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("paraproduct of a constant density vanishes") {
  const TorusGrid g{1, 4};
  const GridFunction rho = GridFunction::constant(g, Mat::Constant(1, 1, Complex{2.5, 0.0}));
  const GridFunction f = random_fn(g, 1, 110);
  CHECK(max_abs(paraproduct(rho, f)) < 1e-12);
}

TEST_CASE("paraproduct against the identity telescopes the density") {
  const TorusGrid g{1, 5};
  const GridFunction rho = random_fn(g, 2, 111);
  const GridFunction one = GridFunction::constant(g, Mat::Identity(2, 2));
  GridFunction got = paraproduct(rho, one);
  GridFunction want = rho;
  GridFunction e0 = cond_expectation(rho, 0);
  e0 *= Complex{-1.0, 0.0};
  want += e0;
  want *= Complex{-1.0, 0.0};
  got += want;
  CHECK(max_abs(got) < 1e-10);
}

TEST_CASE("paraproduct and its adjoint pair under the trace inner product") {
  const TorusGrid g{1, 4};
  const GridFunction rho = random_fn(g, 2, 112);
  const GridFunction f = random_fn(g, 2, 113);
  const GridFunction h = random_fn(g, 2, 114);
  CHECK(std::abs(inner_phi(paraproduct(rho, f), h) -
                 inner_phi(f, paraproduct_adjoint(rho, h))) < 1e-10);
}

TEST_CASE("band symbols are disjoint zero-one multipliers") {
  const TorusGrid g{1, 6};
  const BandTransform bt = lp_counterexample_ops(g, 3, BandWhich::kT1);
  for (int j = 1; j <= bt.bands; ++j) {
    const auto sj = bt.band_symbol(j);
    double total = 0.0;
    for (const Complex& v : sj) {
      CHECK((std::abs(v) < 1e-15 || std::abs(v - Complex{1.0, 0.0}) < 1e-15));
      total += v.real();
    }
    CHECK(total == doctest::Approx(8.0));  // four positive and four negative bins
    for (int k = j + 1; k <= bt.bands; ++k) {
      const auto sk = bt.band_symbol(k);
      for (std::size_t i = 0; i < sj.size(); ++i) CHECK(std::abs(sj[i] * sk[i]) < 1e-15);
    }
  }
}

TEST_CASE("banded transform contracts L2 and kills out-of-band input") {
  const TorusGrid g{1, 6};
  const int bands = 2;
  const BandTransform bt = lp_counterexample_ops(g, bands, BandWhich::kT1);
  const GridFunction f = random_fn(g, bands + 1, 115);
  CHECK(lp_norm(bt.apply(f), 2.0) <= lp_norm(f, 2.0) + 1e-10);

  // content only at frequency 1 lies below every band
  std::vector<Complex> hat(static_cast<std::size_t>(g.cell_count()), Complex{0.0, 0.0});
  hat[1] = Complex{1.0, 0.0};
  fft_radix2(hat, true);
  GridFunction low(g, bands + 1);
  for (int r = 0; r < bands + 1; ++r)
    for (int c = 0; c < bands + 1; ++c) low.set_entry(r, c, hat);
  CHECK(max_abs(bt.apply(low)) < 1e-12);
}

TEST_CASE("band construction rejects grids that cannot hold the bands") {
  const TorusGrid g{1, 4};
  CHECK_THROWS_AS(lp_counterexample_ops(g, 2, BandWhich::kT1), std::range_error);
}

TEST_CASE("banded transform kernel matches the spectral action off the diagonal") {
  const TorusGrid g{1, 5};
  const int bands = 2;
  for (BandWhich which : {BandWhich::kT1, BandWhich::kT2}) {
    const BandTransform bt = lp_counterexample_ops(g, bands, which);
    const OperatorValuedKernel ker = band_transform_kernel(bt);
    const GridFunction f = random_fn(g, bands + 1, 116);
    GridFunction got = ker.apply(f, 0.0);
    // the kernel stores zero on the diagonal; add the missing x == y term
    Mat diag = Mat::Zero(bands + 1, bands + 1);
    for (int b = 1; b <= bands; ++b) {
      Mat unit = Mat::Zero(bands + 1, bands + 1);
      if (which == BandWhich::kT1)
        unit(b, 0) = 1.0;
      else
        unit(0, b) = 1.0;
      diag += 8.0 * unit;  // each band keeps eight frequency bins
    }
    for (std::int64_t c = 0; c < g.cell_count(); ++c)
      got.cell(c) += g.cell_volume() * (diag * f.cell(c));
    GridFunction want = bt.apply(f);
    want *= Complex{-1.0, 0.0};
    got += want;
    CHECK(max_abs(got) < 1e-9);
    CHECK(ker.size_constant() > 0.0);
  }
}
