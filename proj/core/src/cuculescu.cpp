#include "czlab/cuculescu.hpp"

#include <cmath>
#include <sstream>

#include "czlab/parallel.hpp"

namespace czlab {

const Mat& CuculescuData::xi(const DyadicCube& cube) const {
  return q[static_cast<std::size_t>(cube.generation)].at_cube(cube_linear_index(grid, cube));
}

const Mat& CuculescuData::pi(const DyadicCube& cube) const {
  if (cube.generation < 1) throw std::out_of_range("pi: generation must be >= 1");
  return p[static_cast<std::size_t>(cube.generation)].at_cube(cube_linear_index(grid, cube));
}

void CuculescuData::validate(double tol) const {
  if (q.size() != static_cast<std::size_t>(grid.K) + 1 || p.size() != q.size())
    throw std::runtime_error("CuculescuData: wrong family length");
  for (int k = 0; k <= grid.K; ++k) {
    q[static_cast<std::size_t>(k)].validate();
    if (q[static_cast<std::size_t>(k)].declared_generation != k)
      throw std::runtime_error("CuculescuData: generation mismatch");
  }
  for (int k = 1; k <= grid.K; ++k)
    if (!field_leq(q[static_cast<std::size_t>(k)], q[static_cast<std::size_t>(k) - 1], tol))
      throw std::runtime_error("CuculescuData: q_k not decreasing");
  // p[k] = q[k-1] - q[k] per cube, and p[0] = 0.
  for (const auto& mat : p[0].per_cube)
    if (mat.norm() > tol) throw std::runtime_error("CuculescuData: p_0 not zero");
  for (int k = 1; k <= grid.K; ++k)
    for (std::int64_t c = 0; c < grid.cube_count(k); ++c) {
      const DyadicCube cube = cube_from_linear(grid, k, c);
      const Mat want = xi(cube.father()) - xi(cube);
      if ((p[static_cast<std::size_t>(k)].at_cube(c) - want).norm() > tol)
        throw std::runtime_error("CuculescuData: p_k != q_{k-1} - q_k");
    }
  // Disjointness p_j p_k = 0 (j < k), checked once per generation-k cube.
  for (int k = 1; k <= grid.K; ++k)
    for (std::int64_t c = 0; c < grid.cube_count(k); ++c) {
      const DyadicCube cube = cube_from_linear(grid, k, c);
      DyadicCube anc = cube;
      for (int j = k - 1; j >= 1; --j) {
        anc = anc.father();
        if ((pi(anc) * pi(cube)).norm() > tol)
          throw std::runtime_error("CuculescuData: p_j p_k != 0");
      }
    }
  // Telescoping: sum_k p_k + terminal = identity, per finest cube.
  for (std::int64_t c = 0; c < grid.cube_count(grid.K); ++c) {
    DyadicCube cube = cube_from_linear(grid, grid.K, c);
    Mat acc = terminal().at_cube(c);
    for (int k = grid.K; k >= 1; --k) {
      acc += pi(cube);
      cube = cube.father();
    }
    if ((acc - Mat::Identity(m, m)).norm() > tol)
      throw std::runtime_error("CuculescuData: sum p_k + terminal != identity");
  }
}

namespace {

// Shared recursion body.  When require_root_bound is set, the root average
// must satisfy ||E_0 f|| <= lambda and q_0 is the identity exactly; otherwise
// q_0 is computed by the same spectral step with q_{-1} = identity.
CuculescuData cuculescu_impl(const GridFunction& f, double lambda, bool require_root_bound) {
  if (lambda <= 0.0) throw std::invalid_argument("cuculescu: lambda must be > 0");
  if (!f.psd()) throw std::invalid_argument("cuculescu: input must be flagged PSD");
  f.assert_flags();
  const TorusGrid& g = f.grid();
  const int m = f.m();

  const auto avg = average_pyramid(f);
  CuculescuData out;
  out.grid = g;
  out.m = m;
  out.lambda = lambda;
  out.f = f;
  out.q.reserve(static_cast<std::size_t>(g.K) + 1);
  out.p.reserve(static_cast<std::size_t>(g.K) + 1);

  const Mat id = Mat::Identity(m, m);
  if (require_root_bound) {
    const double root = op_norm_mat(avg[0][0]);
    if (root > lambda * (1.0 + 1e-12) + 1e-12) {
      std::ostringstream msg;
      msg << "cuculescu: ||E_0 f||_inf = " << root << " exceeds lambda = " << lambda;
      throw std::invalid_argument(msg.str());
    }
    out.q.push_back(ProjectionField::identity(g, m, 0));
  } else {
    ProjectionField q0(g, m, 0);
    q0.at_cube(0) = spectral_proj_leq(avg[0][0], lambda, id);
    out.q.push_back(std::move(q0));
  }
  out.p.push_back(ProjectionField::zero(g, m, 0));

  for (int k = 1; k <= g.K; ++k) {
    ProjectionField qk(g, m, k);
    ProjectionField pk(g, m, k);
    const ProjectionField& prev = out.q.back();
    const auto& level = avg[static_cast<std::size_t>(k)];
    parallel_for(g.cube_count(k), [&](std::int64_t c) {
      const DyadicCube cube = cube_from_linear(g, k, c);
      const Mat& father = prev.at_cube(cube_linear_index(g, cube.father()));
      Mat a = father * level[static_cast<std::size_t>(c)] * father;
      a = 0.5 * (a + a.adjoint()).eval();
      qk.at_cube(c) = spectral_proj_leq(a, lambda, father);
      pk.at_cube(c) = father - qk.at_cube(c);
    });
    out.q.push_back(std::move(qk));
    out.p.push_back(std::move(pk));
  }
  return out;
}

// sup over cells of ||q(x) . avg_k(cube of x) . q(x)|| for one generation.
double sup_compressed_norm(const TorusGrid& g, const ProjectionField& q,
                           const std::vector<Mat>& level, int k) {
  double best = 0.0;
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {  // cell id == gen-K cube index
    const Mat& qc = q.at_cube(c);
    const Mat& fk = level[static_cast<std::size_t>(cube_linear_index(g, cube_of_cell(g, c, k)))];
    best = std::max(best, op_norm_mat(qc * fk * qc));
  }
  return best;
}

}  // namespace

CuculescuData cuculescu(const GridFunction& f, double lambda) {
  return cuculescu_impl(f, lambda, /*require_root_bound=*/true);
}

DoobWeakReport doob_weak_check(const GridFunction& f, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("doob_weak_check: lambda must be > 0");
  if (!f.hermitian()) throw std::invalid_argument("doob_weak_check: input must be Hermitian");
  f.assert_flags();
  const TorusGrid& g = f.grid();
  const int m = f.m();

  DoobWeakReport r;
  r.lambda = lambda;
  r.l1_norm = lp_norm(f, 1.0);
  r.bound_complement = r.l1_norm / lambda;

  ProjectionField q(g, m, g.K);
  if (f.psd()) {
    q = cuculescu_impl(f, lambda, /*require_root_bound=*/false).terminal();
    r.bound_qfq = lambda;
  } else {
    // Hermitian split: f = f_plus - f_minus, q the cellwise meet of the two
    // terminal projections; triangle inequality gives the 2*lambda bound.
    GridFunction abs = op_abs(f);
    GridFunction plus = abs;
    plus += f;
    plus *= Complex{0.5, 0.0};
    plus.set_psd(true);
    GridFunction minus = std::move(abs);
    minus -= f;
    minus *= Complex{0.5, 0.0};
    minus.set_psd(true);
    const ProjectionField qp = cuculescu_impl(plus, lambda, false).terminal();
    const ProjectionField qm = cuculescu_impl(minus, lambda, false).terminal();
    for (std::int64_t c = 0; c < g.cube_count(g.K); ++c)
      q.at_cube(c) = proj_meet(qp.at_cube(c), qm.at_cube(c));
    r.bound_qfq = 2.0 * lambda;
  }

  const auto avg = average_pyramid(f);
  for (int k = 0; k <= g.K; ++k)
    r.sup_qfq = std::max(r.sup_qfq, sup_compressed_norm(g, q, avg[static_cast<std::size_t>(k)], k));
  r.phi_complement = q.phi_of_complement();

  const double slack = 1e-9 * std::max(1.0, r.l1_norm);
  if (r.sup_qfq > r.bound_qfq + slack)
    throw std::runtime_error("doob_weak_check: sup_k ||q f_k q|| bound violated");
  if (r.phi_complement > r.bound_complement + slack)
    throw std::runtime_error("doob_weak_check: phi(1-q) bound violated");
  return r;
}

ProjectionField zeta(const CuculescuData& c) {
  const TorusGrid& g = c.grid;
  const int m = c.m;
  // Accumulate psi(x) = sum of pi_Q over bad cubes Q with x in 9Q,
  // output-sensitively over the nonzero pi_Q.
  GridFunction psi(g, m);
  for (int k = 1; k <= g.K; ++k) {
    const ProjectionField& pk = c.p[static_cast<std::size_t>(k)];
    for (std::int64_t q = 0; q < g.cube_count(k); ++q) {
      const Mat& pi = pk.at_cube(q);
      if (pi.squaredNorm() < 0.5) continue;  // pi_Q is a projection: 0 or norm >= 1
      for (auto cell : concentric_cells(g, cube_from_linear(g, k, q), 9.0))
        psi.cell(cell) += pi;
    }
  }
  ProjectionField z(g, m, g.K);
  const Mat id = Mat::Identity(m, m);
  parallel_for(g.cell_count(), [&](std::int64_t cell) {
    z.at_cube(cell) = id - range_projection(psi.cell(cell), 1e-10);
  });
  return z;
}

ProjectionField zeta_fs(const std::vector<ProjectionField>& qseq, int s) {
  if (qseq.empty()) throw std::invalid_argument("zeta_fs: empty projection family");
  if (s < 1) throw std::invalid_argument("zeta_fs: s must be >= 1");
  const TorusGrid& g = qseq.front().grid;
  const int m = qseq.front().m;
  GridFunction acc(g, m);
  const Mat id = Mat::Identity(m, m);
  for (const auto& field : qseq) {
    const int k = field.declared_generation;
    for (std::int64_t q = 0; q < g.cube_count(k); ++q) {
      const Mat gap = id - field.at_cube(q);
      if (gap.squaredNorm() < 0.5) continue;
      for (auto cell : concentric_cells(g, cube_from_linear(g, k, q), 9.0))
        acc.cell(cell) += gap;
    }
  }
  ProjectionField z(g, m, g.K);
  parallel_for(g.cell_count(), [&](std::int64_t cell) {
    z.at_cube(cell) = id - range_projection(acc.cell(cell), 1e-10);
  });
  return z;
}

bool shift_check(const GridFunction& h, const std::vector<ProjectionField>& qseq, int s) {
  if (s < 1) throw std::invalid_argument("shift_check: s must be >= 1");
  const TorusGrid& g = h.grid();
  for (const auto& field : qseq) {
    const int k = field.declared_generation;
    if (k + s > g.K) continue;  // no generation-(k+s) difference exists
    const GridFunction d = mart_diff(h, k + s);
    for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
      const Mat& qc = field.value_at_cell(cell);
      if (op_norm_mat(qc * d.cell(cell) * qc) > 1e-9) return false;
    }
  }
  return true;
}

}  // namespace czlab
