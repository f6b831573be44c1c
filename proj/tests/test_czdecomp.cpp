#include <random>

#include "czlab/czdecomp.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace czlab;

namespace {

GridFunction random_psd(const TorusGrid& g, int m, std::uint32_t seed) {
  std::mt19937 gen(seed);
  GridFunction f(g, m);
  Mat a(m, m);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s)
        a(r, s) = Complex{(static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5,
                          (static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5};
    f.cell(c) = a * a.adjoint();
  }
  f.set_hermitian(true).set_psd(true);
  return f;
}

double max_abs(const GridFunction& f) {
  double worst = 0.0;
  for (std::int64_t c = 0; c < f.grid().cell_count(); ++c)
    worst = std::max(worst, f.cell(c).cwiseAbs().maxCoeff());
  return worst;
}

CZParts fixture_parts(std::uint32_t seed, int K = 4, int m = 2) {
  const TorusGrid g{1, K};
  const GridFunction f = random_psd(g, m, seed);
  const double lambda = 2.0 * op_norm_mat(cond_expectation(f, 0).cell(0));
  return decompose(f, lambda);
}

}  // namespace

TEST_CASE("good and bad parts add back to the function") {
  const CZParts parts = fixture_parts(71);
  GridFunction sum = parts.g;
  sum += parts.b;
  sum -= parts.f;
  CHECK(max_abs(sum) < 1e-9);
}

TEST_CASE("off-diagonal parts equal the graded sums") {
  const CZParts parts = fixture_parts(72);
  GridFunction gsum = parts.g_off;
  for (const auto& [key, part] : parts.gks) {
    GridFunction tmp = part;
    tmp *= Complex{-1.0, 0.0};
    gsum += tmp;
  }
  CHECK(max_abs(gsum) < 1e-9);
  GridFunction bsum = parts.b_off;
  for (const auto& [key, part] : parts.bks) {
    GridFunction tmp = part;
    tmp *= Complex{-1.0, 0.0};
    bsum += tmp;
  }
  CHECK(max_abs(bsum) < 1e-9);
}

TEST_CASE("diagonal estimates verify and report the trace identities") {
  const CZParts parts = fixture_parts(73);
  const DiagonalReport rep = diagonal_estimates(parts);
  CHECK(rep.phi_gd == doctest::Approx(rep.l1_f).epsilon(1e-8));
  CHECK(rep.linf_gd <= 2.0 * parts.lambda + 1e-8);
  CHECK(rep.sum_l1_bdk <= 2.0 * rep.l1_f + 1e-8);
  CHECK(rep.max_bdk_cube_mean < 1e-9);
}

TEST_CASE("graded good parts are pairwise orthogonal") {
  const CZParts parts = fixture_parts(74);
  CHECK(gks_orthogonality(parts) < 1e-10);
}

TEST_CASE("square sums of the graded good parts obey the level bound") {
  const CZParts parts = fixture_parts(75);
  const double sup = linf_l2_estimate(parts);
  CHECK(sup <= linf_l2_constant(1) * parts.lambda * lp_norm(parts.f, 1.0) + 1e-8);
  CHECK(linf_l2_constant(1) == doctest::Approx(2.0 * std::pow(std::sqrt(2.0) + 1.0, 2.0)));
  CHECK(linf_l2_constant(2) == doctest::Approx(18.0));
}

TEST_CASE("four overlapping windows polarize back to the graded bad part") {
  const CZParts parts = fixture_parts(76, 4, 2);
  const int K = parts.cuc.grid.K;
  for (int k = 1; k <= K - 1; ++k)
    for (int s = 1; k + s <= K; ++s) {
      const auto boxes = bks_fourbox(parts, k, s);
      GridFunction alt = boxes[0];
      GridFunction t1 = boxes[1];
      t1 *= Complex{-1.0, 0.0};
      alt += t1;
      GridFunction t2 = boxes[2];
      t2 *= Complex{-1.0, 0.0};
      alt += t2;
      alt += boxes[3];
      GridFunction target = parts.bks.at({k, s});
      target *= Complex{-1.0, 0.0};
      alt += target;
      CHECK(max_abs(alt) < 1e-9);
    }
}

TEST_CASE("windowed localizations have zero mean on the shifted cubes") {
  const CZParts parts = fixture_parts(77);
  const int k = 1, s = 2;
  const auto boxes = bks_fourbox(parts, k, s);
  const TorusGrid& g = parts.cuc.grid;
  for (const GridFunction& box : boxes) {
    const GridFunction avg = cond_expectation(box, k + s);
    CHECK(max_abs(avg) < 1e-9);
  }
  (void)g;
}

TEST_CASE("weighted off-diagonal sums respect their envelopes") {
  const CZParts parts = fixture_parts(78);
  const std::vector<double> alpha{1.0, 0.5, 0.25};
  const std::vector<double> beta{1.0, 0.7};
  const auto [bsum, gsq] = weighted_offdiag(parts, alpha, beta);
  double weight = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) weight += static_cast<double>(i + 1) * alpha[i];
  CHECK(bsum <= 8.0 * weight * lp_norm(parts.f, 1.0) + 1e-8);
  // the square identity: cross terms vanish by orthogonality in s
  double expect = 0.0;
  for (const auto& [key, part] : parts.gks) {
    const auto [k, s] = key;
    if (s - 1 < static_cast<int>(beta.size())) {
      const double nrm = lp_norm(part, 2.0);
      expect += beta[static_cast<std::size_t>(s) - 1] * beta[static_cast<std::size_t>(s) - 1] *
                nrm * nrm;
    }
  }
  CHECK(gsq == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("scalar input degenerates to the classical split") {
  const int K = 5;
  const TorusGrid g{1, K};
  std::vector<double> vals(static_cast<std::size_t>(g.cell_count()), 0.2);
  vals[3] = 12.0;
  vals[20] = 30.0;
  const double lambda = 1.5;
  GridFunction f = GridFunction::scalar(g, vals);
  f.set_hermitian(true).set_psd(true);
  const CZParts parts = decompose(f, lambda);
  // commuting projections kill every off-diagonal term
  CHECK(max_abs(parts.g_off) < 1e-10);
  CHECK(max_abs(parts.b_off) < 1e-10);
  const oracle::ScalarDecomp ref = oracle::scalar_decompose(vals, K, lambda);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    CHECK(parts.g.at(c).real() ==
          doctest::Approx(ref.good[static_cast<std::size_t>(c)]).epsilon(1e-9));
    CHECK(parts.b.at(c).real() ==
          doctest::Approx(ref.bad[static_cast<std::size_t>(c)]).epsilon(1e-9));
  }
}

TEST_CASE("shifted sums of the good parts pass the containment check") {
  const CZParts parts = fixture_parts(79, 4, 2);
  const int K = parts.cuc.grid.K;
  for (int s = 1; s <= K - 1; ++s) {
    GridFunction gs(parts.cuc.grid, parts.cuc.m);
    bool any = false;
    for (const auto& [key, part] : parts.gks)
      if (key.second == s) {
        gs += part;
        any = true;
      }
    if (!any) continue;
    std::vector<ProjectionField> qseq(parts.cuc.q.begin() + 1,
                                      parts.cuc.q.begin() + (K - s + 1));
    CHECK(shift_check(gs, qseq, s));
  }
}
