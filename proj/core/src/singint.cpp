#include "czlab/singint.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "czlab/fft.hpp"
#include "czlab/specfun.hpp"

namespace czlab {

namespace {

// Distance for a 1-d displacement of d cells.
double disp_dist(std::int64_t d, std::int64_t nfft) {
  const std::int64_t w = std::min(d, nfft - d);
  return static_cast<double>(w) / static_cast<double>(nfft);
}

// Entrywise spectral application of a symbol (n = 1).
GridFunction symbol_apply(const TorusGrid& g, const std::vector<Complex>& symbol,
                          const GridFunction& f) {
  GridFunction out(g, f.m());
  std::vector<Complex> signal;
  for (int r = 0; r < f.m(); ++r)
    for (int c = 0; c < f.m(); ++c) {
      signal = f.entry(r, c);
      fft_radix2(signal, false);
      for (std::size_t j = 0; j < signal.size(); ++j) signal[j] *= symbol[j];
      fft_radix2(signal, true);
      out.set_entry(r, c, signal);
    }
  return out;
}

}  // namespace

KernelOperator KernelOperator::multiplier(const TorusGrid& g, std::vector<Complex> symbol,
                                          double gamma) {
  if (g.n != 1) throw std::invalid_argument("KernelOperator: multiplier form needs n = 1");
  if (static_cast<std::int64_t>(symbol.size()) != g.cell_count())
    throw std::invalid_argument("KernelOperator: symbol length != cell count");
  KernelOperator op(g, KernelForm::kMultiplier);
  op.symbol_ = std::move(symbol);
  op.gamma_ = gamma;
  return op;
}

KernelOperator KernelOperator::hilbert(const TorusGrid& g) {
  const std::int64_t nfft = g.cell_count();
  std::vector<Complex> symbol(static_cast<std::size_t>(nfft));
  for (std::int64_t j = 0; j < nfft; ++j) {
    const std::int64_t nu = frequency_of_index(j, nfft);
    if (nu == 0 || j == nfft / 2) continue;  // mean and Nyquist killed
    symbol[static_cast<std::size_t>(j)] = Complex{0.0, nu > 0 ? -1.0 : 1.0};
  }
  return multiplier(g, std::move(symbol), 1.0);
}

KernelOperator KernelOperator::circulant(const TorusGrid& g, std::vector<double> row,
                                         double gamma, double epsilon) {
  if (g.n != 1) throw std::invalid_argument("KernelOperator: circulant form needs n = 1");
  if (static_cast<std::int64_t>(row.size()) != g.cell_count())
    throw std::invalid_argument("KernelOperator: kernel row length != cell count");
  if (row[0] != 0.0) throw std::invalid_argument("KernelOperator: kernel diagonal must be zero");
  KernelOperator op(g, KernelForm::kCirculant);
  op.row_ = std::move(row);
  op.gamma_ = gamma;
  op.epsilon_ = epsilon;
  return op;
}

KernelOperator KernelOperator::cotangent(const TorusGrid& g, double epsilon) {
  const std::int64_t nfft = g.cell_count();
  std::vector<double> row(static_cast<std::size_t>(nfft), 0.0);
  for (std::int64_t d = 1; d < nfft; ++d)
    row[static_cast<std::size_t>(d)] =
        std::numbers::pi / std::tan(std::numbers::pi * static_cast<double>(d) / static_cast<double>(nfft));
  return circulant(g, std::move(row), 1.0, epsilon);
}

KernelOperator KernelOperator::hilbert_cotangent(const TorusGrid& g) {
  KernelOperator op = hilbert(g);
  op.row_ = cotangent(g).row_;
  return op;
}

KernelOperator KernelOperator::table(const TorusGrid& g, std::vector<double> entries,
                                     double gamma, double epsilon) {
  const std::int64_t cells = g.cell_count();
  if (static_cast<std::int64_t>(entries.size()) != cells * cells)
    throw std::invalid_argument("KernelOperator: table size != cells^2");
  for (std::int64_t x = 0; x < cells; ++x)
    if (entries[static_cast<std::size_t>(x * cells + x)] != 0.0)
      throw std::invalid_argument("KernelOperator: kernel diagonal must be zero");
  KernelOperator op(g, KernelForm::kTable);
  op.table_ = std::move(entries);
  op.gamma_ = gamma;
  op.epsilon_ = epsilon;
  return op;
}

double KernelOperator::kernel_at(std::int64_t x, std::int64_t y) const {
  if (!row_.empty()) {
    const std::int64_t nfft = grid_.cell_count();
    return row_[static_cast<std::size_t>(((x - y) % nfft + nfft) % nfft)];
  }
  if (!table_.empty()) return table_[static_cast<std::size_t>(x * grid_.cell_count() + y)];
  throw std::logic_error("kernel_at: operator has no explicit kernel");
}

KernelOperator KernelOperator::adjoint() const {
  KernelOperator op(grid_, form_);
  op.gamma_ = gamma_;
  op.epsilon_ = epsilon_;
  if (!symbol_.empty()) {
    op.symbol_.resize(symbol_.size());
    for (std::size_t j = 0; j < symbol_.size(); ++j) op.symbol_[j] = std::conj(symbol_[j]);
  }
  if (!row_.empty()) {
    const std::size_t nfft = row_.size();
    op.row_.resize(nfft);
    for (std::size_t d = 0; d < nfft; ++d) op.row_[d] = row_[(nfft - d) % nfft];
  }
  if (!table_.empty()) {
    const std::int64_t cells = grid_.cell_count();
    op.table_.resize(table_.size());
    for (std::int64_t x = 0; x < cells; ++x)
      for (std::int64_t y = 0; y < cells; ++y)
        op.table_[static_cast<std::size_t>(x * cells + y)] =
            table_[static_cast<std::size_t>(y * cells + x)];
  }
  return op;
}

GridFunction apply_operator(const KernelOperator& T, const GridFunction& f) {
  if (!(T.grid() == f.grid())) throw std::invalid_argument("apply_operator: grid mismatch");
  if (T.has_multiplier()) return symbol_apply(T.grid(), T.symbol(), f);
  return kernel_apply(T, f, T.epsilon());
}

GridFunction kernel_apply(const KernelOperator& T, const GridFunction& f, double eps) {
  if (!(T.grid() == f.grid())) throw std::invalid_argument("kernel_apply: grid mismatch");
  if (!T.has_kernel())
    throw std::invalid_argument("kernel_apply: truncation unsupported for pure multiplier form");
  const TorusGrid& g = T.grid();
  const std::int64_t cells = g.cell_count();
  const double vol = g.cell_volume();

  if (T.form() == KernelForm::kTable) {
    GridFunction out(g, f.m());
    for (std::int64_t x = 0; x < cells; ++x) {
      Mat acc = Mat::Zero(f.m(), f.m());
      for (std::int64_t y = 0; y < cells; ++y) {
        if (!(center_dist(g, x, y) > eps)) continue;
        acc += T.kernel_at(x, y) * vol * f.cell(y);
      }
      out.cell(x) = acc;
    }
    return out;
  }

  // Circulant: truncate the kernel row, then convolve spectrally per entry.
  std::vector<Complex> rowhat(static_cast<std::size_t>(cells));
  for (std::int64_t d = 0; d < cells; ++d) {
    const bool keep = disp_dist(d, cells) > eps;
    rowhat[static_cast<std::size_t>(d)] =
        keep ? Complex{T.kernel_row()[static_cast<std::size_t>(d)] * vol, 0.0} : Complex{0.0, 0.0};
  }
  fft_radix2(rowhat, false);
  return symbol_apply(g, rowhat, f);
}

GridFunction hilbert(const GridFunction& f) {
  if (f.grid().n != 1) throw std::invalid_argument("hilbert: n = 1 only");
  return apply_operator(KernelOperator::hilbert(f.grid()), f);
}

KernelReport validate_kernel(const KernelOperator& T, double gamma) {
  if (!T.has_kernel()) throw std::invalid_argument("validate_kernel: explicit kernel required");
  const TorusGrid& g = T.grid();
  const std::int64_t cells = g.cell_count();
  KernelReport rep;

  if (!T.kernel_row().empty()) {
    // Translation-invariant: sweep displacements u (= x - y) and w.
    const auto& row = T.kernel_row();
    for (std::int64_t u = 1; u < cells; ++u) {
      const double du = disp_dist(u, cells);
      rep.size_const = std::max(
          rep.size_const, std::fabs(row[static_cast<std::size_t>(u)]) * std::pow(du, g.n));
      for (std::int64_t w = 1; w < cells; ++w) {
        const double dw = disp_dist(w, cells);
        if (!(dw <= du / 2.0)) continue;
        const double weight = std::pow(du, g.n + gamma) / std::pow(dw, gamma);
        const std::int64_t um = ((u - w) % cells + cells) % cells;
        const std::int64_t up = (u + w) % cells;
        if (um != 0)
          rep.smooth_y_const = std::max(
              rep.smooth_y_const,
              std::fabs(row[static_cast<std::size_t>(u)] - row[static_cast<std::size_t>(um)]) * weight);
        if (up != 0)
          rep.smooth_x_const = std::max(
              rep.smooth_x_const,
              std::fabs(row[static_cast<std::size_t>(u)] - row[static_cast<std::size_t>(up)]) * weight);
      }
    }
    return rep;
  }

  if (cells > 512) throw std::invalid_argument("validate_kernel: dense table sweep limited to 512 cells");
  for (std::int64_t x = 0; x < cells; ++x)
    for (std::int64_t y = 0; y < cells; ++y) {
      if (x == y) continue;
      const double dxy = center_dist(g, x, y);
      rep.size_const =
          std::max(rep.size_const, std::fabs(T.kernel_at(x, y)) * std::pow(dxy, g.n));
      for (std::int64_t z = 0; z < cells; ++z) {
        const double dyz = center_dist(g, y, z);
        if (z == y || z == x || !(dyz <= dxy / 2.0) || dyz == 0.0) continue;
        const double weight = std::pow(dxy, g.n + gamma) / std::pow(dyz, gamma);
        rep.smooth_y_const = std::max(
            rep.smooth_y_const, std::fabs(T.kernel_at(x, y) - T.kernel_at(x, z)) * weight);
        rep.smooth_x_const = std::max(
            rep.smooth_x_const, std::fabs(T.kernel_at(y, x) - T.kernel_at(z, x)) * weight);
      }
    }
  return rep;
}

GridFunction paraproduct(const GridFunction& rho, const GridFunction& f) {
  if (!rho.same_shape(f)) throw std::invalid_argument("paraproduct: shape mismatch");
  const TorusGrid& g = f.grid();
  const auto pr = average_pyramid(rho);
  const auto pf = average_pyramid(f);
  GridFunction out(g, f.m());
  for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
    Mat acc = Mat::Zero(f.m(), f.m());
    for (int j = 1; j <= g.K; ++j) {
      const auto cj = static_cast<std::size_t>(cube_linear_index(g, cube_of_cell(g, cell, j)));
      const auto cjm = static_cast<std::size_t>(cube_linear_index(g, cube_of_cell(g, cell, j - 1)));
      const Mat drho = pr[static_cast<std::size_t>(j)][cj] - pr[static_cast<std::size_t>(j) - 1][cjm];
      acc += drho * pf[static_cast<std::size_t>(j) - 1][cjm];
    }
    out.cell(cell) = acc;
  }
  return out;
}

GridFunction paraproduct_adjoint(const GridFunction& rho, const GridFunction& f) {
  if (!rho.same_shape(f)) throw std::invalid_argument("paraproduct_adjoint: shape mismatch");
  const TorusGrid& g = f.grid();
  const auto pr = average_pyramid(rho);
  GridFunction out(g, f.m());
  // sum_j E_{j-1}( (d_j rho)^* f ): assemble the product, then cube-average.
  for (int j = 1; j <= g.K; ++j) {
    GridFunction prod(g, f.m());
    for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
      const auto cj = static_cast<std::size_t>(cube_linear_index(g, cube_of_cell(g, cell, j)));
      const auto cjm = static_cast<std::size_t>(cube_linear_index(g, cube_of_cell(g, cell, j - 1)));
      const Mat drho = pr[static_cast<std::size_t>(j)][cj] - pr[static_cast<std::size_t>(j) - 1][cjm];
      prod.cell(cell) = drho.adjoint() * f.cell(cell);
    }
    out += cond_expectation(prod, j - 1);
  }
  return out;
}

std::vector<Complex> BandTransform::band_symbol(int k) const {
  if (k < 1 || k > bands) throw std::out_of_range("band_symbol: band index out of range");
  const std::int64_t nfft = grid.cell_count();
  std::vector<Complex> symbol(static_cast<std::size_t>(nfft));
  for (std::int64_t j = 0; j < nfft; ++j) {
    const std::int64_t nu = std::llabs(frequency_of_index(j, nfft));
    if (nu >= 4 * k && nu <= 4 * k + 3) symbol[static_cast<std::size_t>(j)] = Complex{1.0, 0.0};
  }
  return symbol;
}

GridFunction BandTransform::apply(const GridFunction& f) const {
  if (!(f.grid() == grid)) throw std::invalid_argument("BandTransform: grid mismatch");
  if (f.m() != bands + 1)
    throw std::invalid_argument("BandTransform: matrix size must be bands + 1");
  GridFunction out(grid, f.m());
  for (int k = 1; k <= bands; ++k) {
    const GridFunction banded = symbol_apply(grid, band_symbol(k), f);
    Mat unit = Mat::Zero(f.m(), f.m());
    if (which == BandWhich::kT1)
      unit(k, 0) = Complex{1.0, 0.0};
    else
      unit(0, k) = Complex{1.0, 0.0};
    for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell)
      out.cell(cell) += unit * banded.cell(cell);
  }
  return out;
}

BandTransform lp_counterexample_ops(const TorusGrid& g, int bands, BandWhich which) {
  if (g.n != 1) throw std::invalid_argument("lp_counterexample_ops: n = 1 only");
  if (bands < 1) throw std::invalid_argument("lp_counterexample_ops: need at least one band");
  if (4 * (static_cast<std::int64_t>(bands) + 1) > g.cell_count() / 2)
    throw std::range_error("lp_counterexample_ops: bands exceed the Nyquist frequency");
  return BandTransform{g, bands, which};
}

GridFunction OperatorValuedKernel::apply(const GridFunction& f, double eps) const {
  if (!(f.grid() == grid)) throw std::invalid_argument("OperatorValuedKernel: grid mismatch");
  if (f.m() != m) throw std::invalid_argument("OperatorValuedKernel: matrix size mismatch");
  const std::int64_t cells = grid.cell_count();
  if (cells > 4096) throw std::invalid_argument("OperatorValuedKernel: dense apply limited to 4096 cells");
  const double vol = grid.cell_volume();
  GridFunction out(grid, m);
  for (std::int64_t x = 0; x < cells; ++x) {
    Mat acc = Mat::Zero(m, m);
    for (std::int64_t y = 0; y < cells; ++y) {
      if (x == y || !(center_dist(grid, x, y) > eps)) continue;
      acc += at(x, y) * f.cell(y) * vol;
    }
    out.cell(x) = acc;
  }
  return out;
}

double OperatorValuedKernel::size_constant() const {
  const std::int64_t cells = grid.cell_count();
  if (cells > 4096)
    throw std::invalid_argument("OperatorValuedKernel: size sweep limited to 4096 cells");
  double best = 0.0;
  for (std::int64_t y = 1; y < cells; ++y) {
    const double d = center_dist(grid, 0, y);
    best = std::max(best, op_norm_mat(at(0, y)) * std::pow(d, grid.n));
  }
  return best;  // kernels here are translation-invariant, row x = 0 suffices
}

OperatorValuedKernel band_transform_kernel(const BandTransform& op) {
  const TorusGrid g = op.grid;
  const std::int64_t nfft = g.cell_count();
  // Scalar stencils psi_k(d) = sum_{nu in band k} exp(2 pi i nu d / N).
  auto stencils = std::make_shared<std::vector<std::vector<Complex>>>();
  for (int k = 1; k <= op.bands; ++k) {
    std::vector<Complex> sym = op.band_symbol(k);
    fft_radix2(sym, true);  // inverse DFT of the indicator, then undo the 1/N
    for (auto& v : sym) v *= static_cast<double>(nfft);
    stencils->push_back(std::move(sym));
  }
  OperatorValuedKernel kernel;
  kernel.grid = g;
  kernel.m = op.bands + 1;
  kernel.gamma = 1.0;
  kernel.epsilon = 0.0;
  const BandWhich which = op.which;
  const int bands = op.bands;
  kernel.at = [g, nfft, bands, which, stencils](std::int64_t x, std::int64_t y) -> Mat {
    Mat out = Mat::Zero(bands + 1, bands + 1);
    if (x == y) return out;
    const std::int64_t d = ((x - y) % nfft + nfft) % nfft;
    for (int k = 1; k <= bands; ++k) {
      const Complex psi = (*stencils)[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(d)];
      if (which == BandWhich::kT1)
        out(k, 0) = psi;
      else
        out(0, k) = psi;
    }
    return out;
  };
  return kernel;
}

}  // namespace czlab
