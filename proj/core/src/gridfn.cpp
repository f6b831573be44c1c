#include "czlab/gridfn.hpp"

#include <algorithm>
#include <cmath>

#include "czlab/reduce.hpp"

namespace czlab {

GridFunction GridFunction::constant(const TorusGrid& g, const Mat& value) {
  if (value.rows() != value.cols()) throw std::invalid_argument("constant: square matrix required");
  GridFunction f(g, static_cast<int>(value.rows()));
  for (std::int64_t i = 0; i < f.cells(); ++i) f.cell(i) = value;
  return f;
}

GridFunction GridFunction::scalar(const TorusGrid& g, const std::vector<double>& c) {
  if (static_cast<std::int64_t>(c.size()) != g.cell_count())
    throw std::invalid_argument("scalar: cell count mismatch");
  GridFunction f(g, 1);
  for (std::int64_t i = 0; i < f.cells(); ++i) f.at(i) = c[static_cast<std::size_t>(i)];
  f.set_hermitian(true);
  return f;
}

std::vector<Complex> GridFunction::entry(int r, int c) const {
  std::vector<Complex> out(static_cast<std::size_t>(cells()));
  for (std::int64_t i = 0; i < cells(); ++i) out[static_cast<std::size_t>(i)] = cell(i)(r, c);
  return out;
}

void GridFunction::set_entry(int r, int c, const std::vector<Complex>& signal) {
  if (static_cast<std::int64_t>(signal.size()) != cells())
    throw std::invalid_argument("set_entry: cell count mismatch");
  for (std::int64_t i = 0; i < cells(); ++i) cell(i)(r, c) = signal[static_cast<std::size_t>(i)];
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  if (!same_shape(o)) throw std::invalid_argument("GridFunction: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  psd_ = psd_ && o.psd_;
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  if (!same_shape(o)) throw std::invalid_argument("GridFunction: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  psd_ = false;
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

GridFunction& GridFunction::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  if (s.imag() != 0.0) { hermitian_ = false; psd_ = false; }
  if (s.real() < 0.0) psd_ = false;
  return *this;
}

GridFunction GridFunction::adjoint() const {
  GridFunction out(grid_, m_);
  for (std::int64_t i = 0; i < cells(); ++i) out.cell(i) = cell(i).adjoint();
  out.hermitian_ = hermitian_;
  out.psd_ = psd_;
  return out;
}

void GridFunction::assert_flags() const {
  if (!hermitian_ && !psd_) return;
  // tolerance relative to the whole function, so cells that are zero up to
  // roundoff cannot trip the check on their own noise
  double gscale = 0.0;
  for (std::int64_t i = 0; i < cells(); ++i) gscale = std::max(gscale, cell(i).norm());
  const double scale = std::max(1e-300, gscale);
  for (std::int64_t i = 0; i < cells(); ++i) {
    const Mat a = cell(i);
    if (hermitian_ && (a - a.adjoint()).norm() > 1e-12 * scale)
      throw std::runtime_error("GridFunction: hermitian flag violated");
    if (psd_) {
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()));
      if (es.eigenvalues().minCoeff() < -1e-10 * scale)
        throw std::runtime_error("GridFunction: psd flag violated");
    }
  }
}

GridFunction mul(const GridFunction& a, const GridFunction& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mul: shape mismatch");
  GridFunction out(a.grid(), a.m());
  for (std::int64_t i = 0; i < a.cells(); ++i) out.cell(i) = a.cell(i) * b.cell(i);
  return out;
}

GridFunction sandwich(const GridFunction& p, const GridFunction& f) {
  if (!p.same_shape(f)) throw std::invalid_argument("sandwich: shape mismatch");
  GridFunction out(p.grid(), p.m());
  for (std::int64_t i = 0; i < p.cells(); ++i) out.cell(i) = p.cell(i) * f.cell(i) * p.cell(i);
  if (p.hermitian() && f.hermitian()) out.set_hermitian(true);
  if (p.hermitian() && f.psd()) out.set_psd(true);
  return out;
}

GridFunction cond_expectation(const GridFunction& f, int k) {
  const TorusGrid& g = f.grid();
  g.check_generation(k);
  GridFunction out(g, f.m());
  const std::int64_t ncubes = g.cube_count(k);
  const double inv = 1.0 / static_cast<double>(g.cells_per_cube(k));
  for (std::int64_t q = 0; q < ncubes; ++q) {
    const auto cells = cells_of_cube(g, cube_from_linear(g, k, q));
    const Mat avg = inv * pairwise_sum<Mat>(
        static_cast<std::int64_t>(cells.size()),
        [&](std::int64_t j) { return Mat(f.cell(cells[static_cast<std::size_t>(j)])); },
        Mat::Zero(f.m(), f.m()));
    for (auto c : cells) out.cell(c) = avg;
  }
  out.set_hermitian(f.hermitian());
  if (f.psd()) out.set_psd(true);
  return out;
}

GridFunction mart_diff(const GridFunction& f, int k) {
  if (k < 1) throw std::out_of_range("mart_diff: k must be >= 1 (E_0 is the base term)");
  f.grid().check_generation(k);
  GridFunction out = cond_expectation(f, k);
  out -= cond_expectation(f, k - 1);
  out.set_hermitian(f.hermitian());
  return out;
}

MaximalFunction dyadic_maximal(const GridFunction& f) {
  if (f.m() != 1)
    throw std::invalid_argument(
        "dyadic_maximal: matrix-valued input unsupported (no total order on levels)");
  const TorusGrid& g = f.grid();
  MaximalFunction out{g, GridFunction(g, 1), {}};
  out.avg.resize(static_cast<std::size_t>(g.K) + 1);
  for (int k = 0; k <= g.K; ++k) {
    const GridFunction ek = cond_expectation(f, k);
    auto& level = out.avg[static_cast<std::size_t>(k)];
    level.resize(static_cast<std::size_t>(g.cube_count(k)));
    for (std::int64_t q = 0; q < g.cube_count(k); ++q) {
      const auto cells = cells_of_cube(g, cube_from_linear(g, k, q));
      const Complex v = ek.at(cells.front());
      if (v.real() < -1e-12 || std::fabs(v.imag()) > 1e-12)
        throw std::invalid_argument("dyadic_maximal: input must be nonnegative scalar");
      level[static_cast<std::size_t>(q)] = v.real();
    }
  }
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    double best = 0.0;
    for (int k = 0; k <= g.K; ++k)
      best = std::max(best, out.avg[static_cast<std::size_t>(k)][static_cast<std::size_t>(
                                cube_linear_index(g, cube_of_cell(g, c, k)))]);
    out.mdf.at(c) = best;
  }
  out.mdf.set_psd(true);
  return out;
}

CellMask MaximalFunction::level_set(double lambda) const {
  CellMask out(grid);
  if (avg[0][0] > lambda) return CellMask(grid, true);
  // good[q] at generation k: the whole ancestor chain (root..k) stays <= lambda.
  std::vector<std::uint8_t> good_father(1, 1);
  for (int k = 1; k <= grid.K; ++k) {
    std::vector<std::uint8_t> good(static_cast<std::size_t>(grid.cube_count(k)), 0);
    for (std::int64_t q = 0; q < grid.cube_count(k); ++q) {
      const DyadicCube cube = cube_from_linear(grid, k, q);
      const std::size_t fa = static_cast<std::size_t>(cube_linear_index(grid, cube.father()));
      const bool chain_ok = good_father[fa] != 0;
      const bool here_ok = avg[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] <= lambda;
      good[static_cast<std::size_t>(q)] = (chain_ok && here_ok) ? 1 : 0;
      if (chain_ok && !here_ok)  // maximal cube of E_lambda
        for (auto c : cells_of_cube(grid, cube)) out.set(c);
    }
    good_father = std::move(good);
  }
  return out;
}

std::vector<std::vector<Mat>> average_pyramid(const GridFunction& f) {
  const TorusGrid& g = f.grid();
  std::vector<std::vector<Mat>> pyr(static_cast<std::size_t>(g.K) + 1);
  auto& leaves = pyr[static_cast<std::size_t>(g.K)];
  leaves.resize(static_cast<std::size_t>(g.cell_count()));
  for (std::int64_t c = 0; c < g.cell_count(); ++c)
    leaves[static_cast<std::size_t>(c)] = f.cell(c);  // cell id == gen-K linear index
  const double child_weight = 1.0 / static_cast<double>(std::int64_t{1} << g.n);
  for (int k = g.K - 1; k >= 0; --k) {
    auto& level = pyr[static_cast<std::size_t>(k)];
    const auto& below = pyr[static_cast<std::size_t>(k) + 1];
    level.resize(static_cast<std::size_t>(g.cube_count(k)));
    for (std::int64_t q = 0; q < g.cube_count(k); ++q) {
      const DyadicCube cube = cube_from_linear(g, k, q);
      Mat acc = Mat::Zero(f.m(), f.m());
      for (int dy = 0; dy < (g.n == 2 ? 2 : 1); ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const DyadicCube child{k + 1, {2 * cube.index[0] + dx, 2 * cube.index[1] + dy}};
          acc += below[static_cast<std::size_t>(cube_linear_index(g, child))];
        }
      level[static_cast<std::size_t>(q)] = child_weight * acc;
    }
  }
  return pyr;
}

CellMask support_mask(const GridFunction& f, double rel_eps) {
  const TorusGrid& g = f.grid();
  std::vector<double> norms(static_cast<std::size_t>(g.cell_count()));
  double peak = 0.0;
  for (std::int64_t i = 0; i < g.cell_count(); ++i) {
    const Mat a = f.cell(i);
    const double nrm =
        f.m() == 1 ? std::abs(a(0, 0)) : a.jacobiSvd().singularValues()(0);
    norms[static_cast<std::size_t>(i)] = nrm;
    peak = std::max(peak, nrm);
  }
  CellMask out(g);
  for (std::int64_t i = 0; i < g.cell_count(); ++i)
    if (norms[static_cast<std::size_t>(i)] > rel_eps * peak) out.set(i);
  return out;
}

}  // namespace czlab
