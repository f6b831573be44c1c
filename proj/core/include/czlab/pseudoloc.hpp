// Pseudo-localization experiments: localization sets built from martingale
// differences, residual-mass measurements in L2 and L1, shifted dyadic
// operator blocks and their norms, Schur row/column diagnostics, decay-rate
// fitting, and the end-to-end weak-(1,1) profile.
#ifndef CZLAB_PSEUDOLOC_HPP
#define CZLAB_PSEUDOLOC_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "czlab/gridfn.hpp"
#include "czlab/singint.hpp"

namespace czlab {

// A measured decay curve.  xs is the fit abscissa (the shift s, or log2 of a
// dilation factor), measurements the observed quantities, envelope the
// reference curve evaluated at the same parameters.  fit() least-squares
// fits log2(measurement) against xs over the strictly positive points; the
// slope is NaN when fewer than 3 such points exist.
struct DecaySeries {
  std::vector<double> params;        // raw parameter values (s, xi, lambda)
  std::vector<double> xs;            // fit abscissa
  std::vector<double> measurements;  // nonnegative
  std::vector<double> envelope;      // reference curve, same length
  double fitted_slope = 0.0;
  double fit_residual = 0.0;  // rms of log2 residuals about the fit line
  int nonzero_points = 0;

  void fit();
};

// A linear map on scalar grid functions together with its adjoint.
struct LinearOp {
  TorusGrid grid;
  std::function<GridFunction(const GridFunction&)> forward;
  std::function<GridFunction(const GridFunction&)> adjoint;
};

// The localization set of (f, s): the union over k = 1..K-s of the
// 9-concentric dilations of the smallest R_k-set containing the support of
// the martingale difference of f at generation k+s.  Support means cells
// whose value exceeds 1e-12 times the sup norm of f.  Scalar f, 1 <= s <= K-1.
CellMask sigma_fs(const GridFunction& f, int s);

// L2 mass of Tf outside the localization set, over the L2 norm of f.
double l2_residual(const KernelOperator& T, const GridFunction& f, int s);

// L1 mass of Tf outside the union of 3-concentric dilations of the same
// R_k-sets, over the L1 norm of f.  Requires the conditional expectation of f
// at the declared generation j to vanish (mean-zero atom condition).
double l1_atomic_residual(const KernelOperator& T, const GridFunction& f, int j, int s);

// Residual L2 mass outside the xi-dilated support skeleton: the skeleton is
// the union over k = 1..K of the supports of the martingale differences of f
// (each an R_k-set), each dilated concentrically by 9*xi.  One measurement
// per xi > 4 (smaller xi are skipped with a warning); the fit abscissa is
// log2(xi) and the envelope xi^{-gamma/4} log(xi).
DecaySeries corollary_decay(const KernelOperator& T, const GridFunction& f,
                            const std::vector<double>& xis);

// Shifted dyadic blocks of T:
//   phi_s: f -> sum_{k=1}^{K-s} E_k T d_{k+s} f          (untruncated action)
//   psi_s: f -> sum_{k=3}^{K-s} (id - E_k) T_{4 2^{-k}} d_{k+s} f
// where T_eps is the kernel truncated at radius eps and d_j the martingale
// difference at generation j.  An empty k-range yields the zero operator.
// psi_s requires an explicit kernel.
LinearOp phi_s(const KernelOperator& T, int s);
LinearOp psi_s(const KernelOperator& T, int s);

// Largest singular value of L by power iteration on L*L with a deterministic
// seeded start, 1e-6 relative tolerance, at most 10^4 iterations.
struct OpNormResult {
  double value = 0.0;  // Rayleigh-quotient certificate (a lower bound)
  int iterations = 0;
  bool converged = false;
};
OpNormResult op_norm(const LinearOp& L, std::uint32_t seed = 0x5eed);

// op_norm(phi_s) and op_norm(psi_s) over s = s_min..s_max with envelopes
// s 2^{-gamma s/4} and 2^{-gamma s/2} (gamma from the operator).
std::pair<DecaySeries, DecaySeries> shifted_t1_scan(const KernelOperator& T, int s_min,
                                                    int s_max);

// Dense cell-basis matrix H of T: (Tf)(x) = sum_y H(x,y) f(y) on cell values.
// Refuses grids with more than 2^14 cells.
Eigen::MatrixXcd materialize_operator(const KernelOperator& T);

// The block E_k T d_{k+s} as a cell-basis matrix.
Eigen::MatrixXcd shifted_block_matrix(const KernelOperator& T, int s, int k);

// (max row abs sum, max column abs sum) of the materialized block; the row
// sums equal the y-integrals of the block kernel in the cell basis.
std::pair<double, double> schur_diagnostics(const KernelOperator& T, int s, int k);

// End-to-end localization check for matrix f: decompose at lambda, and for
// each s form the shifted good part g_(s) = sum_k g_{k,s}, verify the shift
// compatibility of g_(s) with the run's projections (hard error on failure),
// and measure || zeta_s T(g_(s)) zeta_s ||_2 / || g_(s) ||_2 against the
// envelope s 2^{-gamma s/4}, with zeta_s the dilated projection built from
// q_1..q_{K-s}.  T acts entrywise (scalar kernel).
DecaySeries nc_pseudoloc_check(const GridFunction& f, double lambda, const KernelOperator& T,
                               int s_min, int s_max);

// lambda * phi{ |Tf| > lambda } / ||f||_1 over a lambda grid, plus its max.
struct Weak11Profile {
  std::vector<double> lambdas;
  std::vector<double> values;
  double max_value = 0.0;
};
Weak11Profile weak11_profile(const KernelOperator& T, const GridFunction& f,
                             const std::vector<double>& lambdas);

}  // namespace czlab

#endif  // CZLAB_PSEUDOLOC_HPP
