#include "czlab/pseudoloc.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

#include "czlab/cuculescu.hpp"
#include "czlab/czdecomp.hpp"
#include "czlab/reduce.hpp"
#include "czlab/specfun.hpp"

namespace czlab {

namespace {

// Support of a scalar function above an absolute threshold.
CellMask support_above(const GridFunction& f, double thr) {
  CellMask mask(f.grid());
  for (std::int64_t i = 0; i < f.cells(); ++i)
    if (std::abs(f.at(i)) > thr) mask.set(i);
  return mask;
}

// Union over k = 1..K-s of the factor-dilated smallest R_k-sets containing
// the supports of the shifted martingale differences of f.
CellMask localization_mask(const GridFunction& f, int s, double factor) {
  const TorusGrid& g = f.grid();
  if (f.m() != 1) throw std::invalid_argument("localization mask: scalar functions only");
  if (s < 1 || s > g.K - 1) throw std::out_of_range("localization mask: shift out of range");
  const double thr = 1e-12 * lp_norm(f, kInfinity);
  CellMask mask(g);
  for (int k = 1; k + s <= g.K; ++k) {
    const CellMask supp = support_above(mart_diff(f, k + s), thr);
    if (supp.empty()) continue;
    mask |= dilate_by(smallest_rk_set(supp, k), k, factor);
  }
  return mask;
}

// L2 mass of the scalar function tf over the complement of mask.
double masked_l2_mass(const GridFunction& tf, const CellMask& mask) {
  const double vol = tf.grid().cell_volume();
  const double sq = pairwise_sum(
      tf.cells(),
      [&](std::int64_t i) { return mask.test(i) ? 0.0 : std::norm(tf.at(i)) * vol; },
      0.0);
  return std::sqrt(sq);
}

}  // namespace

void DecaySeries::fit() {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < measurements.size(); ++i)
    if (measurements[i] > 0.0) {
      x.push_back(xs[i]);
      y.push_back(std::log2(measurements[i]));
    }
  nonzero_points = static_cast<int>(x.size());
  if (nonzero_points < 3) {
    fitted_slope = std::numeric_limits<double>::quiet_NaN();
    fit_residual = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fitted_slope = sxy / sxx;
  const double intercept = my - fitted_slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fitted_slope * x[i] + intercept);
    ss += r * r;
  }
  fit_residual = std::sqrt(ss / n);
}

CellMask sigma_fs(const GridFunction& f, int s) { return localization_mask(f, s, 9.0); }

double l2_residual(const KernelOperator& T, const GridFunction& f, int s) {
  const double l2 = lp_norm(f, 2.0);
  if (!(l2 > 0.0)) throw std::invalid_argument("l2_residual: f must be nonzero");
  const CellMask mask = sigma_fs(f, s);
  return masked_l2_mass(apply_operator(T, f), mask) / l2;
}

double l1_atomic_residual(const KernelOperator& T, const GridFunction& f, int j, int s) {
  const TorusGrid& g = f.grid();
  if (f.m() != 1) throw std::invalid_argument("l1_atomic_residual: scalar functions only");
  g.check_generation(j);
  const double linf = lp_norm(f, kInfinity);
  if (lp_norm(cond_expectation(f, j), kInfinity) > 1e-10 * std::max(1.0, linf))
    throw std::invalid_argument("l1_atomic_residual: expectation at the declared generation is nonzero");
  const double l1 = lp_norm(f, 1.0);
  if (!(l1 > 0.0)) return 0.0;
  const CellMask mask = localization_mask(f, s, 3.0);
  const GridFunction tf = apply_operator(T, f);
  const double vol = g.cell_volume();
  const double mass = pairwise_sum(
      tf.cells(),
      [&](std::int64_t i) { return mask.test(i) ? 0.0 : std::abs(tf.at(i)) * vol; },
      0.0);
  return mass / l1;
}

DecaySeries corollary_decay(const KernelOperator& T, const GridFunction& f,
                            const std::vector<double>& xis) {
  const TorusGrid& g = f.grid();
  if (f.m() != 1) throw std::invalid_argument("corollary_decay: scalar functions only");
  const double l2 = lp_norm(f, 2.0);
  if (!(l2 > 0.0)) throw std::invalid_argument("corollary_decay: f must be nonzero");
  const double thr = 1e-12 * lp_norm(f, kInfinity);

  // Support skeleton: one R_k-set per generation with detail.
  std::vector<std::pair<int, CellMask>> skeleton;
  for (int k = 1; k <= g.K; ++k) {
    CellMask supp = support_above(mart_diff(f, k), thr);
    if (supp.empty()) continue;
    skeleton.emplace_back(k, smallest_rk_set(supp, k));
  }

  const GridFunction tf = apply_operator(T, f);
  DecaySeries out;
  for (double xi : xis) {
    if (!(xi > 4.0)) {
      std::cerr << "corollary_decay: skipping xi = " << xi << " (requires xi > 4)\n";
      continue;
    }
    CellMask mask(g);
    for (const auto& [k, gam] : skeleton) mask |= dilate_by(gam, k, 9.0 * xi);
    out.params.push_back(xi);
    out.xs.push_back(std::log2(xi));
    out.measurements.push_back(masked_l2_mass(tf, mask) / l2);
    out.envelope.push_back(std::pow(xi, -T.gamma() / 4.0) * std::log(xi));
  }
  out.fit();
  return out;
}

LinearOp phi_s(const KernelOperator& T, int s) {
  if (s < 1) throw std::invalid_argument("phi_s: shift must be positive");
  const TorusGrid g = T.grid();
  auto fwd_op = std::make_shared<KernelOperator>(T);
  auto adj_op = std::make_shared<KernelOperator>(T.adjoint());
  LinearOp L;
  L.grid = g;
  L.forward = [g, s, fwd_op](const GridFunction& f) {
    GridFunction out(g, f.m());
    for (int k = 1; k + s <= g.K; ++k)
      out += cond_expectation(apply_operator(*fwd_op, mart_diff(f, k + s)), k);
    return out;
  };
  L.adjoint = [g, s, adj_op](const GridFunction& f) {
    GridFunction out(g, f.m());
    for (int k = 1; k + s <= g.K; ++k)
      out += mart_diff(apply_operator(*adj_op, cond_expectation(f, k)), k + s);
    return out;
  };
  return L;
}

LinearOp psi_s(const KernelOperator& T, int s) {
  if (s < 1) throw std::invalid_argument("psi_s: shift must be positive");
  if (!T.has_kernel()) throw std::invalid_argument("psi_s: explicit kernel required");
  const TorusGrid g = T.grid();
  auto fwd_op = std::make_shared<KernelOperator>(T);
  auto adj_op = std::make_shared<KernelOperator>(T.adjoint());
  LinearOp L;
  L.grid = g;
  L.forward = [g, s, fwd_op](const GridFunction& f) {
    GridFunction out(g, f.m());
    for (int k = 3; k + s <= g.K; ++k) {
      const double radius = 4.0 * std::pow(2.0, -k);
      GridFunction h = kernel_apply(*fwd_op, mart_diff(f, k + s), radius);
      h -= cond_expectation(h, k);
      out += h;
    }
    return out;
  };
  L.adjoint = [g, s, adj_op](const GridFunction& f) {
    GridFunction out(g, f.m());
    for (int k = 3; k + s <= g.K; ++k) {
      const double radius = 4.0 * std::pow(2.0, -k);
      GridFunction h = f;
      h -= cond_expectation(f, k);
      out += mart_diff(kernel_apply(*adj_op, h, radius), k + s);
    }
    return out;
  };
  return L;
}

OpNormResult op_norm(const LinearOp& L, std::uint32_t seed) {
  const TorusGrid g = L.grid;
  GridFunction v(g, 1);
  std::mt19937 gen(seed);
  auto draw = [&gen] {
    return static_cast<double>(gen() & 0xFFFFFF) / static_cast<double>(0x1000000) - 0.5;
  };
  for (std::int64_t i = 0; i < v.cells(); ++i) {
    const double re = draw();
    const double im = draw();
    v.cell(i)(0, 0) = Complex{re, im};
  }
  double nv = lp_norm(v, 2.0);
  v *= Complex{1.0 / nv, 0.0};

  OpNormResult res;
  double prev = 0.0;
  for (int iter = 1; iter <= 10000; ++iter) {
    res.iterations = iter;
    GridFunction w = L.adjoint(L.forward(v));
    const double ray = std::max(0.0, inner_phi(w, v).real());  // = ||Lv||_2^2
    res.value = std::sqrt(ray);
    const double nw = lp_norm(w, 2.0);
    if (nw <= 0.0) {
      res.converged = true;  // v annihilated: zero certificate is exact
      return res;
    }
    if (iter > 1 && std::fabs(ray - prev) <= 1e-6 * std::max(ray, 1e-300)) {
      res.converged = true;
      return res;
    }
    prev = ray;
    w *= Complex{1.0 / nw, 0.0};
    v = std::move(w);
  }
  return res;  // not converged
}

std::pair<DecaySeries, DecaySeries> shifted_t1_scan(const KernelOperator& T, int s_min,
                                                   int s_max) {
  if (s_min < 1 || s_max < s_min) throw std::invalid_argument("shifted_t1_scan: bad s range");
  const double gamma = T.gamma();
  DecaySeries phi, psi;
  for (int s = s_min; s <= s_max; ++s) {
    const OpNormResult a = op_norm(phi_s(T, s));
    const OpNormResult b = op_norm(psi_s(T, s));
    phi.params.push_back(s);
    phi.xs.push_back(s);
    phi.measurements.push_back(a.value);
    phi.envelope.push_back(s * std::pow(2.0, -gamma * s / 4.0));
    psi.params.push_back(s);
    psi.xs.push_back(s);
    psi.measurements.push_back(b.value);
    psi.envelope.push_back(std::pow(2.0, -gamma * s / 2.0));
  }
  phi.fit();
  psi.fit();
  return {phi, psi};
}

Eigen::MatrixXcd materialize_operator(const KernelOperator& T) {
  const TorusGrid& g = T.grid();
  const std::int64_t cells = g.cell_count();
  if (cells > (std::int64_t{1} << 14))
    throw std::invalid_argument("materialize_operator: limited to 2^14 cells");
  Eigen::MatrixXcd H(cells, cells);
  if (T.has_multiplier()) {
    GridFunction delta(g, 1);
    delta.cell(0)(0, 0) = Complex{1.0, 0.0};
    const GridFunction col = apply_operator(T, delta);
    for (std::int64_t x = 0; x < cells; ++x)
      for (std::int64_t y = 0; y < cells; ++y)
        H(x, y) = col.at(((x - y) % cells + cells) % cells);
    return H;
  }
  const double vol = g.cell_volume();
  const double eps = T.epsilon();
  for (std::int64_t x = 0; x < cells; ++x)
    for (std::int64_t y = 0; y < cells; ++y)
      H(x, y) = (center_dist(g, x, y) > eps)
                    ? Complex{T.kernel_at(x, y) * vol, 0.0}
                    : Complex{0.0, 0.0};
  return H;
}

namespace {

// Replace each column by the mean over its generation-j cube of columns.
Eigen::MatrixXcd column_average(const TorusGrid& g, const Eigen::MatrixXcd& a, int j) {
  const std::int64_t cells = g.cell_count();
  Eigen::MatrixXcd sums = Eigen::MatrixXcd::Zero(cells, g.cube_count(j));
  std::vector<std::int64_t> cube_of(static_cast<std::size_t>(cells));
  for (std::int64_t y = 0; y < cells; ++y) {
    cube_of[static_cast<std::size_t>(y)] = cube_linear_index(g, cube_of_cell(g, y, j));
    sums.col(cube_of[static_cast<std::size_t>(y)]) += a.col(y);
  }
  const double inv = 1.0 / static_cast<double>(g.cells_per_cube(j));
  Eigen::MatrixXcd out(cells, cells);
  for (std::int64_t y = 0; y < cells; ++y)
    out.col(y) = sums.col(cube_of[static_cast<std::size_t>(y)]) * inv;
  return out;
}

}  // namespace

Eigen::MatrixXcd shifted_block_matrix(const KernelOperator& T, int s, int k) {
  const TorusGrid& g = T.grid();
  if (s < 1 || k < 0 || k + s > g.K)
    throw std::out_of_range("shifted_block_matrix: bad shift/generation pair");
  const Eigen::MatrixXcd H = materialize_operator(T);
  const Eigen::MatrixXcd d =
      column_average(g, H, k + s) - column_average(g, H, k + s - 1);
  // Row averaging at generation k via the column helper on the adjoint.
  return column_average(g, d.adjoint(), k).adjoint();
}

std::pair<double, double> schur_diagnostics(const KernelOperator& T, int s, int k) {
  const Eigen::MatrixXcd m = shifted_block_matrix(T, s, k);
  const Eigen::MatrixXd abs = m.cwiseAbs();
  return {abs.rowwise().sum().maxCoeff(), abs.colwise().sum().maxCoeff()};
}

DecaySeries nc_pseudoloc_check(const GridFunction& f, double lambda, const KernelOperator& T,
                               int s_min, int s_max) {
  if (s_min < 1 || s_max < s_min)
    throw std::invalid_argument("nc_pseudoloc_check: bad s range");
  const TorusGrid& g = f.grid();
  const CZParts parts = decompose(f, lambda);
  const double gamma = T.gamma();
  DecaySeries out;
  for (int s = s_min; s <= s_max; ++s) {
    out.params.push_back(s);
    out.xs.push_back(s);
    out.envelope.push_back(s * std::pow(2.0, -gamma * s / 4.0));
    GridFunction gs(g, f.m());
    for (int k = 1; k + s <= g.K; ++k) {
      const auto it = parts.gks.find({k, s});
      if (it != parts.gks.end()) gs += it->second;
    }
    const double l2 = lp_norm(gs, 2.0);
    // parts below the roundoff floor of f are zero; a ratio against them
    // would only amplify noise
    if (l2 <= 1e-12 * std::max(1e-300, lp_norm(f, 2.0))) {
      out.measurements.push_back(0.0);
      continue;
    }
    const std::vector<ProjectionField> qseq(parts.cuc.q.begin() + 1,
                                            parts.cuc.q.begin() + (g.K - s + 1));
    if (!shift_check(gs, qseq, s))
      throw std::runtime_error(
          "nc_pseudoloc_check: shifted good part is not compatible with the projections");
    const GridFunction zg = zeta_fs(qseq, s).to_gridfn();
    const GridFunction squeezed = sandwich(zg, apply_operator(T, gs));
    out.measurements.push_back(lp_norm(squeezed, 2.0) / l2);
  }
  out.fit();
  return out;
}

Weak11Profile weak11_profile(const KernelOperator& T, const GridFunction& f,
                             const std::vector<double>& lambdas) {
  const GridFunction tf = apply_operator(T, f);
  const double l1 = lp_norm(f, 1.0);
  Weak11Profile prof;
  prof.lambdas = lambdas;
  for (double lam : lambdas) {
    const double v = l1 > 0.0 ? lam * level_measure(tf, lam) / l1 : 0.0;
    prof.values.push_back(v);
    prof.max_value = std::max(prof.max_value, v);
  }
  return prof;
}

}  // namespace czlab
