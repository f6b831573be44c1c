// Exact finite-matrix examples exhibiting the failure modes of the theory:
// unbounded martingale transforms on the corner filtration, the L_p blow-up
// of the banded matrix-unit transforms, and the failure of the classical L2
// bound for the diagonal good part.
#ifndef CZLAB_COUNTEREX_HPP
#define CZLAB_COUNTEREX_HPP

#include <vector>

#include "czlab/gridfn.hpp"

namespace czlab {

// Filtration of the d x d matrix algebra by the subalgebras spanned by the
// top-left s x s corner together with the remaining diagonal units.  The
// conditional expectation onto level s zeroes every entry outside that span;
// it is trace-preserving, idempotent, and positivity-preserving, and
// expectations at different levels compose to the coarser one.
struct MatrixFiltration {
  int d = 0;

  Mat expectation(const Mat& a, int s) const;  // s = 1..d
};

// Martingale transform with corner coefficients on the d = m algebra.  For
// p <= 2 the transform of the rank-one row sums to the nilpotent shift,
// inflating the Schatten-p norm from (m-1)^{1/2} to (m-1)^{1/p}; for p > 2
// the dual construction inflates (m-1)^{1/p} to (m-1)^{1/2}.  Both norms are
// recomputed from singular values and checked against the closed forms to
// 1e-10 before returning.
struct MartTransformResult {
  double transformed = 0.0;  // Schatten-p norm of sum_k xi_{k-1} df_k
  double original = 0.0;     // Schatten-p norm of sum_k df_k
};
MartTransformResult mart_transform_example(int m, double p);

// The banded transforms applied to their extremal inputs on a depth-K line
// grid: f1 puts the band-limited scalars g_k (all of identical modulus) in
// row 0, and T1 moves them onto the diagonal, scaling the Schatten-p norm by
// exactly m^{1/p - 1/2}; T2 performs the inverse move with ratio
// m^{1/2 - 1/p}.  Both measured ratios are checked against the closed forms
// to 1e-8.
struct LpBlowupResult {
  double ratio_t1 = 0.0;
  double ratio_t2 = 0.0;
  double expected_t1 = 0.0;
  double expected_t2 = 0.0;
};
LpBlowupResult lp_blowup(int m, double p, int K);

// The level-set recursion at lambda = 1 on the 2m x 2m all-ones matrix over
// the corner filtration, with the strict spectral rule (kernel directions of
// each compression excluded).  The recursion alternates: odd steps change
// nothing, even step 2k cuts the two-dimensional corner overlap, so
// p_{2k-1} = 0 and p_{2k} = e_{2k-1,2k-1} + e_{2k,2k}.  The L1 norm of f
// stays 2m while the squared L2 norm of sum_k E_k(f) p_k grows like
// 2m(m+1) — the diagonal estimate that fails in the matrix setting.  All
// structure is asserted before returning.  Norms use the unnormalized trace.
struct AppendixBResult {
  double l1 = 0.0;
  double l2sq = 0.0;
  double l2sq_closed = 0.0;
  std::vector<Mat> q;  // q_0 (identity) .. q_{2m}
  std::vector<Mat> p;  // p_1 .. p_{2m}, p_s = q_{s-1} - q_s
};
AppendixBResult appendix_b(int m);

}  // namespace czlab

#endif  // CZLAB_COUNTEREX_HPP
