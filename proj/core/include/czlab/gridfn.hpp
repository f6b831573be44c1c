// Cell-wise constant matrix-valued functions on the dyadic torus, and the
// martingale structure over the dyadic filtration: conditional expectations,
// martingale differences, the scalar dyadic maximal function.
#ifndef CZLAB_GRIDFN_HPP
#define CZLAB_GRIDFN_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "czlab/dyadic.hpp"

namespace czlab {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
// Cells are serialized row-major, so views into the flat buffer are row-major.
using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CellView = Eigen::Map<RowMat>;
using ConstCellView = Eigen::Map<const RowMat>;

// Map from generation-K cells to m x m complex matrices.  m = 1 recovers the
// scalar theory.  The hermitian/psd flags are promises checked by
// assert_flags(), not auto-maintained.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const TorusGrid& g, int m)
      : grid_(g), m_(m), data_(static_cast<std::size_t>(g.cell_count()) * m * m) {
    if (m < 1) throw std::invalid_argument("GridFunction: m must be >= 1");
  }
  static GridFunction constant(const TorusGrid& g, const Mat& value);
  static GridFunction scalar(const TorusGrid& g, const std::vector<double>& cells);

  const TorusGrid& grid() const { return grid_; }
  int m() const { return m_; }
  std::int64_t cells() const { return grid_.cell_count(); }

  bool hermitian() const { return hermitian_; }
  bool psd() const { return psd_; }
  GridFunction& set_hermitian(bool v) { hermitian_ = v; return *this; }
  GridFunction& set_psd(bool v) { psd_ = v; if (v) hermitian_ = true; return *this; }

  CellView cell(std::int64_t i) {
    return CellView(data_.data() + static_cast<std::size_t>(i) * m_ * m_, m_, m_);
  }
  ConstCellView cell(std::int64_t i) const {
    return ConstCellView(data_.data() + static_cast<std::size_t>(i) * m_ * m_, m_, m_);
  }

  // Scalar accessors (m = 1).
  Complex& at(std::int64_t i) { return data_[static_cast<std::size_t>(i) * m_ * m_]; }
  Complex at(std::int64_t i) const { return data_[static_cast<std::size_t>(i) * m_ * m_]; }

  // One matrix entry as a cell-indexed signal (for per-entry transforms).
  std::vector<Complex> entry(int r, int c) const;
  void set_entry(int r, int c, const std::vector<Complex>& signal);

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(Complex s);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(Complex s, GridFunction a) { return a *= s; }

  GridFunction adjoint() const;  // cellwise conjugate transpose

  // Enforces the flag invariants: hermitian -> |A - A*| <= 1e-12 |A| per cell,
  // psd -> min eigenvalue >= -1e-10 |A| per cell.  Throws on violation.
  void assert_flags() const;

  std::vector<Complex>& raw() { return data_; }
  const std::vector<Complex>& raw() const { return data_; }

  bool same_shape(const GridFunction& o) const { return grid_ == o.grid_ && m_ == o.m_; }

 private:
  TorusGrid grid_;
  int m_ = 1;
  bool hermitian_ = false;
  bool psd_ = false;
  std::vector<Complex> data_;
};

// Cellwise matrix product a(x) b(x).
GridFunction mul(const GridFunction& a, const GridFunction& b);
// Cellwise sandwich p(x) f(x) p(x).
GridFunction sandwich(const GridFunction& p, const GridFunction& f);

// Conditional expectation onto generation-k-measurable functions: on every
// generation-k cube, the cell-volume-weighted average of f.
GridFunction cond_expectation(const GridFunction& f, int k);

// Martingale difference E_k f - E_{k-1} f, k >= 1.
GridFunction mart_diff(const GridFunction& f, int k);

// Dyadic maximal function of a nonnegative scalar function, with its level
// sets.  avg[k][cube] holds the generation-k cube averages.
struct MaximalFunction {
  TorusGrid grid;
  GridFunction mdf;
  std::vector<std::vector<double>> avg;

  // E_lambda: union of the maximal dyadic cubes with average > lambda whose
  // strict ancestors all have average <= lambda (full torus if the root
  // average already exceeds lambda).
  CellMask level_set(double lambda) const;
};
MaximalFunction dyadic_maximal(const GridFunction& f);

// Cells where the spectral norm exceeds rel_eps times the global maximum.
CellMask support_mask(const GridFunction& f, double rel_eps = 1e-12);

// Per-cube means at every generation: pyramid[k][cube] = average of f over the
// generation-k cube, built bottom-up so each level sums a balanced binary tree.
std::vector<std::vector<Mat>> average_pyramid(const GridFunction& f);

}  // namespace czlab

#endif  // CZLAB_GRIDFN_HPP
