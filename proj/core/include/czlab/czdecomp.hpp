// The matrix Calderon-Zygmund decomposition driven by the Cuculescu family:
// good/bad parts from the double sum over projection indices, diagonal and
// off-diagonal splits, and the (k,s)-graded families g_{k,s}, b_{k,s}.
#ifndef CZLAB_CZDECOMP_HPP
#define CZLAB_CZDECOMP_HPP

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "czlab/cuculescu.hpp"

namespace czlab {

// Index (k,s): generation k >= 1 of the bad projection, shift s >= 1 with
// k + s <= K.
using KSKey = std::pair<int, int>;

struct CZParts {
  double lambda = 0.0;
  GridFunction f;
  CuculescuData cuc;
  GridFunction g, b;          // f = g + b
  GridFunction g_d, b_d;      // diagonal parts: q f q + sum p_k f_k p_k, sum p_k (f - f_k) p_k
  GridFunction g_off, b_off;  // g - g_d, b - b_d
  std::map<KSKey, GridFunction> gks;  // p_k df_{k+s} q_{k+s-1} + q_{k+s-1} df_{k+s} p_k
  std::map<KSKey, GridFunction> bks;  // p_k (f - f_{k+s}) p_{k+s} + adjoint term
};

// Runs cuculescu(f, lambda) and assembles every part.  g and b are built
// independently from the double sums over indices {0..K, infinity} (with
// f_inf = f and p_inf = the terminal projection), so f = g + b is a genuine
// check of the partition of unity rather than true by construction.
CZParts decompose(const GridFunction& f, double lambda);

// Trace and norm facts about the diagonal parts.  Throws if any asserted
// bound fails; returns the measured quantities.
struct DiagonalReport {
  double l1_f = 0.0;
  double phi_gd = 0.0;        // equals ||f||_1
  double linf_gd = 0.0;       // <= 2^n lambda
  double max_bdk_cube_mean = 0.0;  // max over k, Q of ||mean of b_{d,k} over Q||
  double sum_l1_bdk = 0.0;    // <= 2 ||f||_1
};
DiagonalReport diagonal_estimates(const CZParts& parts);

// Max |phi(g_{k,s} g_{k',s'}^*)| over distinct pairs; also verifies
// ||g_off||_2^2 = sum ||g_{k,s}||_2^2 to 1e-8 relative (throws otherwise).
double gks_orthogonality(const CZParts& parts);

// sup over s of sum over k of ||g_{k,s}||_2^2; asserts the bound
// C_n * lambda * ||f||_1 with C_n = 2 (2^{n/2} + 1)^2.
double linf_l2_estimate(const CZParts& parts);
double linf_l2_constant(int n);

// The four overlapping-window localizations of b_{k,s}: each window
// A = sum of p_{k+r} over r in [0,s], [0,s-1], [1,s], [1,s-1] gives
// b^i = A (f - f_{k+s}) A.  Asserts that each b^i has zero mean on every
// generation-(k+s) cube; the alternating sum recovers bks[k,s].
std::array<GridFunction, 4> bks_fourbox(const CZParts& parts, int k, int s);

// Weighted off-diagonal sums: returns
//   first  = sum_s sum_k alpha_s ||b_{k,s}||_1   (bounded by 8 (sum_s s alpha_s) ||f||_1)
//   second = ||sum_s sum_k beta_s g_{k,s}||_2^2  (equals sum beta_s^2 sum_k ||g_{k,s}||_2^2)
// alpha[i] and beta[i] weight shift s = i + 1; shorter sequences mean zero.
std::pair<double, double> weighted_offdiag(const CZParts& parts,
                                           const std::vector<double>& alpha,
                                           const std::vector<double>& beta);

}  // namespace czlab

#endif  // CZLAB_CZDECOMP_HPP
