#include "czlab/specfun.hpp"

#include <algorithm>
#include <cmath>

#include "czlab/reduce.hpp"

namespace czlab {

namespace {

Eigen::VectorXd singular_values(const Mat& a) {
  if (a.rows() == 1 && a.cols() == 1) {
    Eigen::VectorXd s(1);
    s(0) = std::abs(a(0, 0));
    return s;
  }
  return a.jacobiSvd().singularValues();
}

}  // namespace

double trace_phi(const GridFunction& f) {
  const Complex total = pairwise_sum<Complex>(
      f.cells(), [&](std::int64_t i) { return f.cell(i).trace(); }, Complex{0.0, 0.0});
  const Complex phi = total * f.grid().cell_volume();
  if (f.hermitian() && std::fabs(phi.imag()) > 1e-12 * std::max(1.0, std::fabs(phi.real())))
    throw std::runtime_error("trace_phi: nonreal trace on Hermitian input");
  return phi.real();
}

Complex inner_phi(const GridFunction& a, const GridFunction& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("inner_phi: shape mismatch");
  const Complex total = pairwise_sum<Complex>(
      a.cells(),
      [&](std::int64_t i) { return (b.cell(i).adjoint() * a.cell(i)).trace(); },
      Complex{0.0, 0.0});
  return total * a.grid().cell_volume();
}

double lp_norm(const GridFunction& f, double p) {
  if (p < 1.0) throw std::out_of_range("lp_norm: p must be >= 1");
  if (p == kInfinity) {
    double best = 0.0;
    for (std::int64_t i = 0; i < f.cells(); ++i)
      best = std::max(best, singular_values(f.cell(i)).maxCoeff());
    return best;
  }
  const double total = pairwise_sum<double>(
      f.cells(),
      [&](std::int64_t i) {
        const Eigen::VectorXd s = singular_values(f.cell(i));
        double acc = 0.0;
        for (Eigen::Index j = 0; j < s.size(); ++j) acc += std::pow(s(j), p);
        return acc;
      },
      0.0);
  return std::pow(total * f.grid().cell_volume(), 1.0 / p);
}

double weak_l1(const GridFunction& f) {
  // All singular values, each carrying one cell volume of trace weight.
  std::vector<double> sv;
  sv.reserve(static_cast<std::size_t>(f.cells()) * f.m());
  for (std::int64_t i = 0; i < f.cells(); ++i) {
    const Eigen::VectorXd s = singular_values(f.cell(i));
    for (Eigen::Index j = 0; j < s.size(); ++j) sv.push_back(s(j));
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  const double w = f.grid().cell_volume();
  double best = 0.0;
  for (std::size_t j = 0; j < sv.size(); ++j) {
    if (j + 1 < sv.size() && sv[j + 1] == sv[j]) continue;  // take tie groups whole
    best = std::max(best, sv[j] * static_cast<double>(j + 1) * w);
  }
  return best;
}

GridFunction op_abs(const GridFunction& f) {
  GridFunction out(f.grid(), f.m());
  for (std::int64_t i = 0; i < f.cells(); ++i) {
    const Mat a = f.cell(i);
    if (f.m() == 1) {
      out.cell(i)(0, 0) = std::abs(a(0, 0));
    } else {
      Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinV);
      out.cell(i) = svd.matrixV() * svd.singularValues().asDiagonal() *
                    svd.matrixV().adjoint();
    }
  }
  out.set_psd(true);
  return out;
}

double level_measure(const GridFunction& f, double lambda) {
  double count = 0.0;
  for (std::int64_t i = 0; i < f.cells(); ++i) {
    const Eigen::VectorXd s = singular_values(f.cell(i));
    for (Eigen::Index j = 0; j < s.size(); ++j)
      if (s(j) > lambda) count += 1.0;
  }
  return count * f.grid().cell_volume();
}

Mat spectral_proj_leq(const Mat& a, double lambda, const Mat& within, SpectralMode mode) {
  const Eigen::Index d = a.rows();
  const double scale = std::max(1.0, op_norm_mat(a));
  if ((a - a.adjoint()).norm() > 1e-10 * scale)
    throw std::invalid_argument("spectral_proj_leq: input not Hermitian");
  if ((a - within * a * within).norm() > 1e-8 * scale)
    throw std::invalid_argument("spectral_proj_leq: input not compressed by `within`");
  const Mat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> w(0.5 * (within + within.adjoint()));
  // Orthonormal basis of range(within); `within` must be a projection.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double mu = w.eigenvalues()(i);
    if (std::min(std::fabs(mu), std::fabs(mu - 1.0)) > 1e-8)
      throw std::invalid_argument("spectral_proj_leq: `within` is not a projection");
    if (mu > 0.5) keep.push_back(i);
  }
  if (keep.empty()) return Mat::Zero(d, d);
  Mat basis(d, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = w.eigenvectors().col(keep[i]);

  Mat compressed = basis.adjoint() * h * basis;
  compressed = 0.5 * (compressed + compressed.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(compressed);
  if (es.eigenvalues().minCoeff() < -1e-8 * scale)
    throw std::invalid_argument("spectral_proj_leq: input not PSD");

  const double upper = lambda + 1e-10 * scale;
  const double kernel_cut = 1e-10 * scale;
  std::vector<Eigen::Index> sel;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double mu = es.eigenvalues()(i);
    if (mu > upper) continue;
    if (mode == SpectralMode::kStrictPositive && mu <= kernel_cut) continue;
    sel.push_back(i);
  }
  if (sel.empty()) return Mat::Zero(d, d);
  Mat cols(basis.rows(), static_cast<Eigen::Index>(sel.size()));
  for (std::size_t i = 0; i < sel.size(); ++i)
    cols.col(static_cast<Eigen::Index>(i)) = basis * es.eigenvectors().col(sel[i]);
  Mat p = cols * cols.adjoint();
  return 0.5 * (p + p.adjoint());
}

Mat range_projection(const Mat& a, double thresh) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()));
  Mat p = Mat::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > thresh)
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return 0.5 * (p + p.adjoint());
}

bool proj_leq(const Mat& p, const Mat& q, double tol) {
  return op_norm_mat(p - q * p * q) <= tol;
}

bool is_projection(const Mat& p, double tol) {
  return (p - p.adjoint()).norm() <= tol * std::max(1.0, p.norm()) &&
         op_norm_mat(p * p - p) <= tol;
}

Mat proj_meet(const Mat& p, const Mat& q) {
  const Mat id = Mat::Identity(p.rows(), p.cols());
  return id - range_projection((id - p) + (id - q), 1e-10);
}

double op_norm_mat(const Mat& a) {
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  return a.jacobiSvd().singularValues()(0);
}

double schatten_norm(const Mat& a, double p) {
  if (p < 1.0) throw std::invalid_argument("schatten_norm: p >= 1 required");
  const Eigen::VectorXd s = singular_values(a);
  if (p == kInfinity) return s.size() ? s.maxCoeff() : 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), p);
  return std::pow(acc, 1.0 / p);
}

ProjectionField::ProjectionField(const TorusGrid& g, int m_, int k)
    : grid(g), m(m_), declared_generation(k) {
  g.check_generation(k);
  per_cube.assign(static_cast<std::size_t>(g.cube_count(k)), Mat::Zero(m, m));
}

ProjectionField ProjectionField::identity(const TorusGrid& g, int m_, int k) {
  ProjectionField f(g, m_, k);
  for (auto& p : f.per_cube) p = Mat::Identity(m_, m_);
  return f;
}

ProjectionField ProjectionField::zero(const TorusGrid& g, int m_, int k) {
  return ProjectionField(g, m_, k);
}

const Mat& ProjectionField::value_at_cell(std::int64_t cell) const {
  return per_cube[static_cast<std::size_t>(
      cube_linear_index(grid, cube_of_cell(grid, cell, declared_generation)))];
}

GridFunction ProjectionField::to_gridfn() const {
  GridFunction f(grid, m);
  for (std::int64_t c = 0; c < grid.cell_count(); ++c) f.cell(c) = value_at_cell(c);
  f.set_psd(true);
  return f;
}

double ProjectionField::phi_of_complement() const {
  const double cube_vol = 1.0 / static_cast<double>(grid.cube_count(declared_generation));
  const double tr = pairwise_sum<double>(
      static_cast<std::int64_t>(per_cube.size()),
      [&](std::int64_t i) {
        return static_cast<double>(m) - per_cube[static_cast<std::size_t>(i)].trace().real();
      },
      0.0);
  return tr * cube_vol;
}

void ProjectionField::validate() const {
  for (const auto& p : per_cube)
    if (!is_projection(p, 1e-10)) throw std::runtime_error("ProjectionField: value not a projection");
}

namespace {

// First (lowest-id) cell of the linear-indexed generation-k cube.
std::int64_t anchor_cell(const TorusGrid& g, int k, std::int64_t lin) {
  const DyadicCube q = cube_from_linear(g, k, lin);
  return g.cell_id(q.index[0] << (g.K - k), q.index[1] << (g.K - k));
}

}  // namespace

ProjectionField field_sub(const ProjectionField& a, const ProjectionField& b, int k) {
  if (k < a.declared_generation || k < b.declared_generation)
    throw std::invalid_argument("field_sub: target generation coarser than operands");
  ProjectionField out(a.grid, a.m, k);
  for (std::int64_t q = 0; q < a.grid.cube_count(k); ++q) {
    const std::int64_t cell = anchor_cell(a.grid, k, q);
    out.at_cube(q) = a.value_at_cell(cell) - b.value_at_cell(cell);
  }
  return out;
}

bool field_leq(const ProjectionField& a, const ProjectionField& b, double tol) {
  const int k = std::max(a.declared_generation, b.declared_generation);
  for (std::int64_t q = 0; q < a.grid.cube_count(k); ++q) {
    const std::int64_t cell = anchor_cell(a.grid, k, q);
    if (!proj_leq(a.value_at_cell(cell), b.value_at_cell(cell), tol)) return false;
  }
  return true;
}

}  // namespace czlab
