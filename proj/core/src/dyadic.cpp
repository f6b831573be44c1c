#include "czlab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace czlab {

double TorusGrid::wrapped_dist(const std::array<double, 2>& a,
                               const std::array<double, 2>& b) const {
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    double t = std::fabs(a[i] - b[i]);
    t = std::min(t, 1.0 - t);
    d = std::max(d, t);
  }
  return d;
}

std::int64_t cube_linear_index(const TorusGrid& g, const DyadicCube& q) {
  const std::int64_t per_axis = g.cubes_per_axis(q.generation);
  return q.index[0] + (g.n == 2 ? per_axis * q.index[1] : 0);
}

DyadicCube cube_of_cell(const TorusGrid& g, std::int64_t cell, int k) {
  g.check_generation(k);
  const auto c = g.cell_coords(cell);
  const int shift = g.K - k;
  return {k, {c[0] >> shift, c[1] >> shift}};
}

DyadicCube cube_from_linear(const TorusGrid& g, int k, std::int64_t lin) {
  g.check_generation(k);
  const std::int64_t per_axis = g.cubes_per_axis(k);
  return {k, {lin % per_axis, g.n == 2 ? lin / per_axis : 0}};
}

std::int64_t CellMask::count() const {
  return std::accumulate(bits_.begin(), bits_.end(), std::int64_t{0},
                         [](std::int64_t a, std::uint8_t b) { return a + b; });
}

CellMask& CellMask::operator|=(const CellMask& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("CellMask: grid mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

CellMask& CellMask::operator&=(const CellMask& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("CellMask: grid mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

CellMask CellMask::complement() const {
  CellMask r(grid_);
  for (std::int64_t c = 0; c < grid_.cell_count(); ++c) r.set(c, !test(c));
  return r;
}

bool CellMask::is_rk_set(int k) const {
  grid_.check_generation(k);
  for (std::int64_t q = 0; q < grid_.cube_count(k); ++q) {
    const auto cells = cells_of_cube(grid_, cube_from_linear(grid_, k, q));
    bool first = test(cells.front());
    for (auto c : cells)
      if (test(c) != first) return false;
  }
  return true;
}

std::vector<std::int64_t> cells_of_cube(const TorusGrid& g, const DyadicCube& q) {
  const std::int64_t w = std::int64_t{1} << (g.K - q.generation);
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(g.cells_per_cube(q.generation)));
  const std::int64_t x0 = q.index[0] * w, y0 = q.index[1] * w;
  if (g.n == 1) {
    for (std::int64_t x = x0; x < x0 + w; ++x) out.push_back(x);
  } else {
    for (std::int64_t y = y0; y < y0 + w; ++y)
      for (std::int64_t x = x0; x < x0 + w; ++x) out.push_back(g.cell_id(x, y));
  }
  return out;
}

CellMask smallest_rk_set(const CellMask& support, int k) {
  const TorusGrid& g = support.grid();
  g.check_generation(k);
  CellMask out(g);
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(g.cube_count(k)), 0);
  for (std::int64_t c = 0; c < g.cell_count(); ++c)
    if (support.test(c)) hit[static_cast<std::size_t>(cube_linear_index(g, cube_of_cell(g, c, k)))] = 1;
  for (std::int64_t q = 0; q < g.cube_count(k); ++q)
    if (hit[static_cast<std::size_t>(q)])
      for (auto c : cells_of_cube(g, cube_from_linear(g, k, q))) out.set(c);
  return out;
}

namespace {

// Cell range per axis covered by the wrapped interval of radius
// factor*l(Q)/2 around a generation-k cube's center, in cell indices.
// Exact in doubled-integer units: cell j is included iff
// |2j+1 - (2i+1)*2^{K-k}| <= factor*2^{K-k}, wrapped modulo 2^{K+1}.
struct AxisRange {
  std::int64_t lo = 0, len = 0;  // wrapped interval [lo, lo+len) mod side
};

AxisRange axis_range(const TorusGrid& g, int k, std::int64_t i, double factor) {
  const double w = static_cast<double>(std::int64_t{1} << (g.K - k));  // cells per cube axis
  const double center2 = (2.0 * static_cast<double>(i) + 1.0) * w;     // doubled units
  const double radius2 = factor * w;
  // |2j+1 - center2| <= radius2  =>  j in [ (center2-radius2-1)/2, (center2+radius2-1)/2 ]
  const double eps = 1e-9;
  std::int64_t jmin = static_cast<std::int64_t>(std::ceil((center2 - radius2 - 1.0) / 2.0 - eps));
  std::int64_t jmax = static_cast<std::int64_t>(std::floor((center2 + radius2 - 1.0) / 2.0 + eps));
  const std::int64_t side = g.side();
  AxisRange r;
  if (jmax - jmin + 1 >= side) {
    r.lo = 0;
    r.len = side;
  } else {
    r.lo = ((jmin % side) + side) % side;
    r.len = jmax - jmin + 1;
  }
  return r;
}

}  // namespace

std::vector<std::int64_t> concentric_cells(const TorusGrid& g, const DyadicCube& q, double factor) {
  const std::int64_t side = g.side();
  const AxisRange rx = axis_range(g, q.generation, q.index[0], factor);
  std::vector<std::int64_t> out;
  if (g.n == 1) {
    out.reserve(static_cast<std::size_t>(rx.len));
    for (std::int64_t t = 0; t < rx.len; ++t) out.push_back((rx.lo + t) % side);
  } else {
    const AxisRange ry = axis_range(g, q.generation, q.index[1], factor);
    out.reserve(static_cast<std::size_t>(rx.len * ry.len));
    for (std::int64_t ty = 0; ty < ry.len; ++ty)
      for (std::int64_t tx = 0; tx < rx.len; ++tx)
        out.push_back(g.cell_id((rx.lo + tx) % side, (ry.lo + ty) % side));
  }
  return out;
}

CellMask dilate_by(const CellMask& omega, int k, double factor) {
  const TorusGrid& g = omega.grid();
  g.check_generation(k);
  if (!omega.is_rk_set(k))
    throw std::invalid_argument("dilate_by: mask is not an R_k-set at the given generation");
  CellMask out(g);
  for (std::int64_t q = 0; q < g.cube_count(k); ++q) {
    const DyadicCube cube = cube_from_linear(g, k, q);
    // Membership of the whole cube is decided by its lowest-corner cell.
    const std::int64_t shift = g.K - k;
    const std::int64_t anchor =
        g.cell_id(cube.index[0] << shift, g.n == 2 ? cube.index[1] << shift : 0);
    if (!omega.test(anchor)) continue;
    for (auto c : concentric_cells(g, cube, factor)) out.set(c);
  }
  return out;
}

CellMask dilate_9(const CellMask& omega, int k) { return dilate_by(omega, k, 9.0); }
CellMask dilate_3(const CellMask& omega, int k) { return dilate_by(omega, k, 3.0); }

double center_dist(const TorusGrid& g, std::int64_t x, std::int64_t y) {
  const auto a = g.cell_coords(x);
  const auto b = g.cell_coords(y);
  const double side = static_cast<double>(g.side());
  double d = 0.0;
  for (int i = 0; i < g.n; ++i) {
    double t = std::fabs(static_cast<double>(a[i] - b[i])) / side;
    t = std::min(t, 1.0 - t);
    d = std::max(d, t);
  }
  return d;
}

}  // namespace czlab
