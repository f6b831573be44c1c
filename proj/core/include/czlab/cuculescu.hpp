// Cuculescu's construction over the dyadic filtration: per-cube spectral
// projections xi_Q forming the decreasing family q_k, the disjoint p_k, and
// the 9-concentric dilated projections zeta and zeta_fs.
#ifndef CZLAB_CUCULESCU_HPP
#define CZLAB_CUCULESCU_HPP

#include <vector>

#include "czlab/gridfn.hpp"
#include "czlab/specfun.hpp"

namespace czlab {

// Output of the recursion q_k = proj_{<=lambda}(q_{k-1} f_k q_{k-1}) run once
// per cube.  q[k] is constant on generation-k cubes; its per-cube value is
// xi_Q.  p[k] = q[k-1] - q[k] (p[0] = 0 since q[0] = identity); the per-cube
// value of p[k] is pi_Q = xi_{father(Q)} - xi_Q.
struct CuculescuData {
  TorusGrid grid;
  int m = 1;
  double lambda = 0.0;
  GridFunction f;                  // the function the family was built from
  std::vector<ProjectionField> q;  // k = 0..K, q[0] = identity
  std::vector<ProjectionField> p;  // k = 0..K, p[0] = 0

  const ProjectionField& terminal() const { return q.back(); }
  const Mat& xi(const DyadicCube& cube) const;
  const Mat& pi(const DyadicCube& cube) const;  // only defined for generation >= 1

  // Checks every structural invariant: projection fields valid, q decreasing,
  // p[k] = q[k-1] - q[k], p_j p_k = 0 for j != k, sum p_k + terminal = 1.
  void validate(double tol = 1e-9) const;
};

// Builds the family for PSD f with ||E_0 f||_inf <= lambda (rejected
// otherwise); q_0 = identity and each later q_k is computed per cube from the
// father's projection.
CuculescuData cuculescu(const GridFunction& f, double lambda);

// Weak-type (1,1) behaviour of the terminal projection q: sup_k ||q f_k q||
// and phi(1 - q).  PSD input is run directly (bound lambda); Hermitian input
// is split f = f_plus - f_minus with q the meet of the two terminals (bound
// 2*lambda).  Throws if a bound fails.
struct DoobWeakReport {
  double lambda = 0.0;
  double l1_norm = 0.0;       // ||f||_1
  double sup_qfq = 0.0;       // sup_k ||q f_k q||_inf
  double phi_complement = 0.0;  // phi(1 - q)
  double bound_qfq = 0.0;       // lambda (PSD) or 2*lambda (Hermitian split)
  double bound_complement = 0.0;  // ||f||_1 / lambda
};
DoobWeakReport doob_weak_check(const GridFunction& f, double lambda);

// The dilated projection: per cell x, zeta(x) = 1 - range projection of
// psi(x) = sum over k >= 1 and cubes Q of generation k with x in 9Q of pi_Q.
ProjectionField zeta(const CuculescuData& c);

// Shifted variant built from complements: per cell x,
// 1 - range projection of sum over the given fields q_k and cubes Q at their
// declared generation with x in 9Q of (1 - xi_Q).  The shift parameter only
// caps which fields the caller passes; the sum itself uses every entry.
ProjectionField zeta_fs(const std::vector<ProjectionField>& qseq, int s);

// True iff ||q_k . (E_{k+s}h - E_{k+s-1}h) . q_k||_inf <= 1e-9 for every
// field q_k in qseq with k + s <= K (weak-support containment of the shifted
// martingale differences in the complements of q_k).
bool shift_check(const GridFunction& h, const std::vector<ProjectionField>& qseq, int s);

}  // namespace czlab

#endif  // CZLAB_CUCULESCU_HPP
