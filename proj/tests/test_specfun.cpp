#include <algorithm>
#include <random>

#include "czlab/gridfn.hpp"
#include "czlab/specfun.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace czlab;

namespace {

Mat random_hermitian(int m, std::uint32_t seed) {
  std::mt19937 gen(seed);
  Mat a(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      a(r, c) = Complex{(static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5,
                        (static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5};
  return Mat(0.5 * (a + a.adjoint()));
}

GridFunction random_scalar(const TorusGrid& g, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
  for (auto& x : v) x = (static_cast<double>(gen() & 0xFFFFFF) / double{0x1000000}) - 0.5;
  return GridFunction::scalar(g, v);
}

}  // namespace

TEST_CASE("trace functional on a hand-built function") {
  const TorusGrid g{1, 2};
  GridFunction f(g, 2);
  f.cell(0) << 1.0, 0.0, 0.0, 3.0;
  f.cell(1) << 2.0, 0.0, 0.0, 0.0;
  CHECK(trace_phi(f) == doctest::Approx(6.0 / 4).epsilon(1e-14));
  CHECK(lp_norm(f, 1.0) == doctest::Approx(6.0 / 4).epsilon(1e-12));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(14.0 / 4)).epsilon(1e-12));
  CHECK(lp_norm(f, kInfinity) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("inner product is conjugate-symmetric and positive") {
  const TorusGrid g{1, 4};
  const GridFunction a = random_scalar(g, 3);
  const GridFunction b = random_scalar(g, 4);
  CHECK(std::abs(inner_phi(a, b) - std::conj(inner_phi(b, a))) < 1e-12);
  CHECK(inner_phi(a, a).real() == doctest::Approx(lp_norm(a, 2.0) * lp_norm(a, 2.0)).epsilon(1e-12));
}

TEST_CASE("weak L1 norm equals the brute-force supremum over breakpoints") {
  const TorusGrid g{1, 6};
  const GridFunction f = random_scalar(g, 9);
  std::vector<double> mags;
  for (std::int64_t c = 0; c < g.cell_count(); ++c) mags.push_back(std::abs(f.at(c)));
  std::sort(mags.begin(), mags.end());
  double sup = 0.0;
  for (double lam : mags) {
    if (lam <= 0.0) continue;
    double meas = 0.0;
    for (double v : mags)
      if (v >= lam) meas += g.cell_volume();
    sup = std::max(sup, lam * meas);
  }
  CHECK(weak_l1(f) == doctest::Approx(sup).epsilon(1e-10));
  CHECK(weak_l1(f) <= lp_norm(f, 1.0) + 1e-12);
}

TEST_CASE("operator absolute value squares to the square") {
  const TorusGrid g{1, 0};
  GridFunction f(g, 4);
  f.cell(0) = random_hermitian(4, 21);
  const Mat a = f.cell(0);
  const Mat b = op_abs(f).cell(0);
  CHECK((b * b - a * a).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::SelfAdjointEigenSolver<Mat> es(b);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("spectral projection keeps the small part of the spectrum") {
  const Mat h = random_hermitian(5, 33);
  const Mat a = Mat(h * h);  // PSD with the squared spectrum
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  const double lambda = es.eigenvalues()(2) + 1e-6;
  const Mat within = Mat::Identity(5, 5);
  const Mat p = spectral_proj_leq(a, lambda, within);
  CHECK(is_projection(p));
  CHECK((p * a - a * p).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(op_norm_mat(Mat(p * a * p)) <= lambda + 1e-9);
  CHECK(std::lround(p.trace().real()) == 3);
}

TEST_CASE("strict mode drops the kernel that inclusive mode keeps") {
  Mat a = Mat::Zero(3, 3);
  a(0, 0) = 2.0;
  const Mat within = Mat::Identity(3, 3);
  const Mat incl = spectral_proj_leq(a, 1.0, within, SpectralMode::kIncludeKernel);
  const Mat strict = spectral_proj_leq(a, 1.0, within, SpectralMode::kStrictPositive);
  CHECK(std::lround(incl.trace().real()) == 2);
  CHECK(std::lround(strict.trace().real()) == 0);
}

TEST_CASE("projection restricted to a subspace stays inside it") {
  Mat within = Mat::Zero(3, 3);
  within(0, 0) = 1.0;
  within(1, 1) = 1.0;
  Mat a = Mat::Zero(3, 3);
  a(0, 0) = 5.0;
  a(1, 1) = 0.5;
  const Mat p = spectral_proj_leq(a, 1.0, within);
  CHECK(is_projection(p));
  CHECK((within * p - p).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(p(1, 1) - Complex{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(p(0, 0)) < 1e-12);
}

TEST_CASE("range projection reproduces the column space") {
  Mat v(3, 1);
  v << 1.0, 1.0, 0.0;
  const Mat a = Mat(v * v.adjoint());  // rank-one PSD
  const Mat p = range_projection(a);
  CHECK(is_projection(p));
  CHECK((p * a - a).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::lround(p.trace().real()) == 1);
}

TEST_CASE("projection order and meet on commuting projections") {
  Mat p = Mat::Zero(3, 3);
  p(0, 0) = 1.0;
  Mat q = Mat::Zero(3, 3);
  q(0, 0) = 1.0;
  q(1, 1) = 1.0;
  CHECK(proj_leq(p, q));
  CHECK_FALSE(proj_leq(q, p));
  CHECK((proj_meet(p, q) - p).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("schatten norms agree with closed forms") {
  Mat a = Mat::Zero(2, 2);
  a(0, 1) = 3.0;
  a(1, 0) = 4.0;
  CHECK(schatten_norm(a, 1.0) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(schatten_norm(a, 2.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(schatten_norm(a, kInfinity) == doctest::Approx(4.0).epsilon(1e-12));
  const Mat h = random_hermitian(4, 77);
  CHECK(schatten_norm(h, 2.0) == doctest::Approx(std::sqrt((h.adjoint() * h).trace().real())).epsilon(1e-12));
}

TEST_CASE("level measure counts the exceeding spectral mass") {
  const TorusGrid g{1, 3};
  GridFunction f(g, 2);
  f.set_hermitian(true);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) f.cell(c) << double(c), 0.0, 0.0, 0.5;
  // eigenvalues per cell: {c, 0.5}; eigenvalues > 1.5 occur for c = 2..7.
  CHECK(level_measure(f, 1.5) == doctest::Approx(6.0 * g.cell_volume()).epsilon(1e-12));
}

TEST_CASE("projection fields validate and convert") {
  const TorusGrid g{1, 3};
  ProjectionField e = ProjectionField::identity(g, 2, 1);
  CHECK(e.declared_generation == 1);
  e.validate();
  CHECK(e.phi_of_complement() == doctest::Approx(0.0));
  ProjectionField z = ProjectionField::zero(g, 2, 1);
  CHECK(z.phi_of_complement() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(field_leq(z, e));
  const GridFunction ge = e.to_gridfn();
  for (std::int64_t c = 0; c < g.cell_count(); ++c)
    CHECK((ge.cell(c) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}
