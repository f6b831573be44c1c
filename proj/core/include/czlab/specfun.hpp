// Finite von Neumann algebra calculus over the grid: the trace phi, L_p and
// weak-L1 norms, operator absolute values, spectral projections and the
// projection order.  Norms are computed from per-cell singular values.
#ifndef CZLAB_SPECFUN_HPP
#define CZLAB_SPECFUN_HPP

#include <limits>

#include "czlab/gridfn.hpp"

namespace czlab {

// phi(f) = sum_cells trace(f(x)) * cell_volume.  For functions flagged
// Hermitian the imaginary part must vanish to 1e-12 (asserted).
double trace_phi(const GridFunction& f);

// <a,b> = sum_cells trace(b(x)^* a(x)) * cell_volume  (the L2 inner product).
Complex inner_phi(const GridFunction& a, const GridFunction& b);

// Schatten-p over cells: (sum_cells sum_i sigma_i^p * vol)^{1/p}; p = inf is
// the essential sup of the largest singular value.  p < 1 is rejected.
double lp_norm(const GridFunction& f, double p);
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// sup_{t>0} t * phi{|f| > t}, exact over the singular-value breakpoints.
double weak_l1(const GridFunction& f);

// Cellwise |A| = (A^*A)^{1/2}.
GridFunction op_abs(const GridFunction& f);

// phi(chi_{(lambda,inf)}(|f|)): trace-weighted measure of singular values
// strictly above lambda (used by weak-(1,1) profiles).
double level_measure(const GridFunction& f, double lambda);

// --- single-matrix spectral helpers ---

// Kernel handling at eigenvalue 0 for the level-set projection: the inclusive
// mode keeps null directions of the compression (the recursion default), the
// strict mode is the literal chi_{(0,lambda]}.
enum class SpectralMode { kIncludeKernel, kStrictPositive };

// Projection onto the eigenspace of a (restricted to range(within)) with
// eigenvalues <= lambda + 1e-10*max(1,|a|).  Requires a Hermitian PSD and
// a = within a within up to 1e-10.
Mat spectral_proj_leq(const Mat& a, double lambda, const Mat& within,
                      SpectralMode mode = SpectralMode::kIncludeKernel);

// Projection onto the span of eigenvectors of (Hermitian PSD) a with
// eigenvalue > thresh.
Mat range_projection(const Mat& a, double thresh = 1e-10);

// Projection order: P <= Q iff |P - QPQ| <= tol (operator norm).
bool proj_leq(const Mat& p, const Mat& q, double tol = 1e-9);
bool is_projection(const Mat& p, double tol = 1e-10);

// Meet of two projections: 1 - rangeproj((1-P) + (1-Q)).
Mat proj_meet(const Mat& p, const Mat& q);

// Largest singular value / operator norm of one matrix.
double op_norm_mat(const Mat& a);

// Schatten-p norm of one matrix: (sum_i sigma_i^p)^{1/p}, p = inf the largest
// singular value.  Unnormalized trace (no volume weight).
double schatten_norm(const Mat& a, double p);

// --- projection fields ---

// A projection-valued function constant on the cubes of a declared
// generation; stores one matrix per cube.
struct ProjectionField {
  TorusGrid grid;
  int m = 1;
  int declared_generation = 0;
  std::vector<Mat> per_cube;

  ProjectionField() = default;
  ProjectionField(const TorusGrid& g, int m_, int k);
  static ProjectionField identity(const TorusGrid& g, int m_, int k = 0);
  static ProjectionField zero(const TorusGrid& g, int m_, int k = 0);

  Mat& at_cube(std::int64_t lin) { return per_cube[static_cast<std::size_t>(lin)]; }
  const Mat& at_cube(std::int64_t lin) const { return per_cube[static_cast<std::size_t>(lin)]; }
  const Mat& value_at_cell(std::int64_t cell) const;

  GridFunction to_gridfn() const;
  double phi_of_complement() const;  // phi(1 - P)

  // Checks P = P^*, |P^2 - P| <= 1e-10 per cube.
  void validate() const;
};

// Cellwise difference a - b evaluated at generation k (k at least as fine as
// both declared generations).
ProjectionField field_sub(const ProjectionField& a, const ProjectionField& b, int k);

// Cellwise projection order between fields (compared at the finer generation).
bool field_leq(const ProjectionField& a, const ProjectionField& b, double tol = 1e-9);

}  // namespace czlab

#endif  // CZLAB_SPECFUN_HPP
