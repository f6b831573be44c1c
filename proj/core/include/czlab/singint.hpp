// Discretized singular integral operators on the torus grid: Fourier
// multipliers, translation-invariant (circulant) kernels with truncation,
// dense kernel tables, kernel size/smoothness diagnostics, the dyadic
// paraproduct, and the banded matrix-unit transforms used by the Lp blow-up
// construction.
#ifndef CZLAB_SINGINT_HPP
#define CZLAB_SINGINT_HPP

#include <functional>
#include <vector>

#include "czlab/gridfn.hpp"

namespace czlab {

enum class KernelForm { kMultiplier, kCirculant, kTable };

// A scalar kernel operator.  Forms:
//   multiplier — frequency symbol sigma(nu), applied by DFT (n = 1 only);
//   circulant  — translation-invariant kernel row c(d) = k at cell
//                displacement d, applied by FFT convolution (n = 1 only);
//   table      — dense k(x,y) on cell-center pairs, applied by direct sums.
// A multiplier may additionally carry a circulant kernel row (the discretized
// kernel of the same operator); truncation then acts on that row while the
// untruncated action stays spectral.  Scalar kernels act entrywise on matrix
// values, so they commute with constant matrix factors on either side.
class KernelOperator {
 public:
  static KernelOperator multiplier(const TorusGrid& g, std::vector<Complex> symbol,
                                   double gamma = 1.0);
  // Symbol -i sign(nu) with sign(0) = 0 and the Nyquist bin mapped to 0.
  static KernelOperator hilbert(const TorusGrid& g);
  static KernelOperator circulant(const TorusGrid& g, std::vector<double> row, double gamma,
                                  double epsilon = 0.0);
  // Periodized Hilbert kernel pi cot(pi (x - y)) sampled at displacements.
  static KernelOperator cotangent(const TorusGrid& g, double epsilon = 0.0);
  // The hilbert multiplier carrying the cotangent row as its kernel: the
  // canonical L2-normalized test operator with truncatable kernel, gamma = 1.
  static KernelOperator hilbert_cotangent(const TorusGrid& g);
  static KernelOperator table(const TorusGrid& g, std::vector<double> entries, double gamma,
                              double epsilon = 0.0);

  KernelForm form() const { return form_; }
  const TorusGrid& grid() const { return grid_; }
  double gamma() const { return gamma_; }
  double epsilon() const { return epsilon_; }
  bool has_multiplier() const { return !symbol_.empty(); }
  bool has_kernel() const { return !row_.empty() || !table_.empty(); }
  const std::vector<Complex>& symbol() const { return symbol_; }
  const std::vector<double>& kernel_row() const { return row_; }
  double kernel_at(std::int64_t x, std::int64_t y) const;  // explicit kernel value
  KernelOperator adjoint() const;

 private:
  KernelOperator(const TorusGrid& g, KernelForm f) : grid_(g), form_(f) {}
  TorusGrid grid_;
  KernelForm form_;
  double gamma_ = 1.0;
  double epsilon_ = 0.0;
  std::vector<Complex> symbol_;
  std::vector<double> row_;
  std::vector<double> table_;  // row-major x * cells + y
};

// Untruncated action: spectral when a symbol is present, else the kernel sum
// with the operator's declared truncation radius.
GridFunction apply_operator(const KernelOperator& T, const GridFunction& f);

// Truncated action sum_{d(x,y) > eps} k(x,y) f(y) vol (eps = 0 keeps every
// off-diagonal cell).  Requires an explicit kernel.
GridFunction kernel_apply(const KernelOperator& T, const GridFunction& f, double eps);

// The canonical multiplier: per matrix entry, DFT, multiply frequency nu by
// -i sign(nu), inverse DFT.  n = 1 only.
GridFunction hilbert(const GridFunction& f);

// Grid suprema of the kernel size and gamma-smoothness ratios; reported, not
// asserted.  Smoothness ratios sweep pairs with d(y,y') <= d(x,y)/2.  Dense
// tables are limited to 512 cells (the sweep is cubic).
struct KernelReport {
  double size_const = 0.0;      // max |k(x,y)| d(x,y)^n
  double smooth_y_const = 0.0;  // max |k(x,y)-k(x,y')| d(x,y)^{n+gamma} / d(y,y')^gamma
  double smooth_x_const = 0.0;  // same with the first argument varied
};
KernelReport validate_kernel(const KernelOperator& T, double gamma);

// Dyadic paraproduct sum_{j=1..K} (E_j rho - E_{j-1} rho) . E_{j-1} f
// (matrix product per cell, in that order) and its adjoint
// sum_j E_{j-1}((E_j rho - E_{j-1} rho)^* . f).
GridFunction paraproduct(const GridFunction& rho, const GridFunction& f);
GridFunction paraproduct_adjoint(const GridFunction& rho, const GridFunction& f);

// Banded matrix-unit transforms on functions with matrix size bands+1:
//   kT1: f -> sum_k E(k,0) . (band_k f),   kT2: f -> sum_k E(0,k) . (band_k f),
// band_k the sharp frequency projector onto 4k <= |nu| <= 4k+3, k = 1..bands.
// Bands are mutually orthogonal idempotents on frequency space and each is a
// modulus-one multiplier, hence L2-contractive.
enum class BandWhich { kT1, kT2 };
struct BandTransform {
  TorusGrid grid;
  int bands = 0;
  BandWhich which = BandWhich::kT1;

  std::vector<Complex> band_symbol(int k) const;  // k = 1..bands
  GridFunction apply(const GridFunction& f) const;
};
// Throws std::range_error unless 4 (bands + 1) <= 2^{K-1} (bands below Nyquist).
BandTransform lp_counterexample_ops(const TorusGrid& g, int bands, BandWhich which);

// Matrix-valued kernel with lazily computed entries; size measured in the
// matrix operator norm.  Used to inspect the kernels of the banded transforms.
struct OperatorValuedKernel {
  TorusGrid grid;
  int m = 1;
  double gamma = 1.0;
  double epsilon = 0.0;
  std::function<Mat(std::int64_t, std::int64_t)> at;  // k(x,y); zero when x == y

  GridFunction apply(const GridFunction& f, double eps) const;
  double size_constant() const;  // max ||k(x,y)|| d(x,y)^n, guarded to 4096 cells
};
OperatorValuedKernel band_transform_kernel(const BandTransform& op);

}  // namespace czlab

#endif  // CZLAB_SINGINT_HPP
