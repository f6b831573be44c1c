// Dyadic geometry on the periodic torus [0,1)^n at depth K: cubes, masks,
// concentric dilations.  Everything is exact integer arithmetic on cell
// indices; generation-k cubes tile the torus with side 2^{-k}.
#ifndef CZLAB_DYADIC_HPP
#define CZLAB_DYADIC_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace czlab {

// Depth-K dyadic grid on [0,1)^n, n in {1,2}.  Cells are the generation-K
// cubes; a cell's linear id is x + side*y with side = 2^K.
struct TorusGrid {
  int n = 1;
  int K = 0;

  TorusGrid() = default;
  TorusGrid(int n_, int K_) : n(n_), K(K_) {
    if (n != 1 && n != 2) throw std::invalid_argument("TorusGrid: n must be 1 or 2");
    if (K < 0 || K > 24) throw std::invalid_argument("TorusGrid: K out of range");
  }

  std::int64_t side() const { return std::int64_t{1} << K; }           // cells per axis
  std::int64_t cell_count() const { return std::int64_t{1} << (K * n); }
  double cell_volume() const { return 1.0 / static_cast<double>(cell_count()); }
  std::int64_t cubes_per_axis(int k) const { return std::int64_t{1} << k; }
  std::int64_t cube_count(int k) const { return std::int64_t{1} << (k * n); }
  std::int64_t cells_per_cube(int k) const { return std::int64_t{1} << ((K - k) * n); }

  void check_generation(int k) const {
    if (k < 0 || k > K) throw std::out_of_range("generation out of [0,K]");
  }

  std::int64_t cell_id(std::int64_t x, std::int64_t y = 0) const { return x + side() * y; }
  std::array<std::int64_t, 2> cell_coords(std::int64_t id) const {
    return {id % side(), n == 2 ? id / side() : 0};
  }

  // Wrapped l-infinity distance between points of [0,1)^n.
  double wrapped_dist(const std::array<double, 2>& a, const std::array<double, 2>& b) const;

  bool operator==(const TorusGrid& o) const { return n == o.n && K == o.K; }
};

// A generation-k cube: index vector in [0,2^k)^n.  Covers the cells
// [idx*2^{K-k}, (idx+1)*2^{K-k}) per axis.
struct DyadicCube {
  int generation = 0;
  std::array<std::int64_t, 2> index = {0, 0};

  double side_length() const { return 1.0 / static_cast<double>(std::int64_t{1} << generation); }
  std::array<double, 2> center() const {
    const double l = side_length();
    return {(static_cast<double>(index[0]) + 0.5) * l, (static_cast<double>(index[1]) + 0.5) * l};
  }
  DyadicCube father() const {
    if (generation == 0) throw std::out_of_range("root cube has no father");
    return {generation - 1, {index[0] >> 1, index[1] >> 1}};
  }
};

// Linear index of a cube within its generation, and the cube containing a cell.
std::int64_t cube_linear_index(const TorusGrid& g, const DyadicCube& q);
DyadicCube cube_of_cell(const TorusGrid& g, std::int64_t cell, int k);
DyadicCube cube_from_linear(const TorusGrid& g, int k, std::int64_t lin);

// Set of generation-K cells with bitset semantics.
class CellMask {
 public:
  CellMask() = default;
  explicit CellMask(const TorusGrid& g, bool full = false)
      : grid_(g), bits_(static_cast<std::size_t>(g.cell_count()), full ? 1 : 0) {}

  const TorusGrid& grid() const { return grid_; }
  bool test(std::int64_t cell) const { return bits_[static_cast<std::size_t>(cell)] != 0; }
  void set(std::int64_t cell, bool v = true) { bits_[static_cast<std::size_t>(cell)] = v ? 1 : 0; }

  std::int64_t count() const;
  double measure() const { return static_cast<double>(count()) * grid_.cell_volume(); }
  bool empty() const { return count() == 0; }
  bool full() const { return count() == grid_.cell_count(); }

  CellMask& operator|=(const CellMask& o);
  CellMask& operator&=(const CellMask& o);
  CellMask complement() const;

  // True iff the mask is a union of whole generation-k cubes (an R_k-set).
  bool is_rk_set(int k) const;

  bool operator==(const CellMask& o) const { return grid_ == o.grid_ && bits_ == o.bits_; }

 private:
  TorusGrid grid_;
  std::vector<std::uint8_t> bits_;
};

// Union of the generation-k cubes meeting `support` (the smallest R_k-set
// containing it).
CellMask smallest_rk_set(const CellMask& support, int k);

// Concentric dilation: for each generation-k cube Q of the R_k-set `omega`,
// include every cell whose center lies within wrapped l-inf distance
// factor*l(Q)/2 of c_Q (centers exactly on the boundary included).
// factor = 9 gives the 9-concentric father, factor = 3 the 3-dilation.
CellMask dilate_by(const CellMask& omega, int k, double factor);
CellMask dilate_9(const CellMask& omega, int k);
CellMask dilate_3(const CellMask& omega, int k);

// Cells of one cube, as linear ids (row-major over the cube's rows).
std::vector<std::int64_t> cells_of_cube(const TorusGrid& g, const DyadicCube& q);

// Cells of the concentric dilation of a single cube (same inclusion rule as
// dilate_by, without building a full mask).
std::vector<std::int64_t> concentric_cells(const TorusGrid& g, const DyadicCube& q, double factor);

// Wrapped l-inf distance between the centers of two cells.
double center_dist(const TorusGrid& g, std::int64_t x, std::int64_t y);

}  // namespace czlab

#endif  // CZLAB_DYADIC_HPP
