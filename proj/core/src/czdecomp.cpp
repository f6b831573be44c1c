#include "czlab/czdecomp.hpp"

#include <cmath>

#include "czlab/parallel.hpp"

namespace czlab {

namespace {

// Cellwise table of the conditional expectations E_v f for v = 0..K, plus the
// projection values; index infinity is encoded as K + 1.
struct DecompWork {
  const TorusGrid& g;
  int m;
  const CuculescuData& cuc;
  std::vector<std::vector<Mat>> avg;     // average_pyramid(f)
  std::vector<std::vector<std::int64_t>> cube_of;  // cube_of[v][cell]

  DecompWork(const GridFunction& f, const CuculescuData& c)
      : g(f.grid()), m(f.m()), cuc(c), avg(average_pyramid(f)) {
    cube_of.resize(static_cast<std::size_t>(g.K) + 1);
    for (int v = 0; v <= g.K; ++v) {
      auto& row = cube_of[static_cast<std::size_t>(v)];
      row.resize(static_cast<std::size_t>(g.cell_count()));
      for (std::int64_t c = 0; c < g.cell_count(); ++c)
        row[static_cast<std::size_t>(c)] = cube_linear_index(g, cube_of_cell(g, c, v));
    }
  }

  // E_v f at a cell; v = K + 1 means f itself.
  const Mat& ef(int v, std::int64_t cell) const {
    const int vv = std::min(v, g.K);
    return avg[static_cast<std::size_t>(vv)]
              [static_cast<std::size_t>(cube_of[static_cast<std::size_t>(vv)][static_cast<std::size_t>(cell)])];
  }

  // p_i at a cell; i = K + 1 means the terminal projection q.
  const Mat& proj(int i, std::int64_t cell) const {
    if (i == g.K + 1) return cuc.terminal().value_at_cell(cell);
    return cuc.p[static_cast<std::size_t>(i)].value_at_cell(cell);
  }
};

}  // namespace

CZParts decompose(const GridFunction& f, double lambda) {
  CZParts parts;
  parts.lambda = lambda;
  parts.f = f;
  parts.cuc = cuculescu(f, lambda);
  const TorusGrid& g = f.grid();
  const int m = f.m();
  const int inf = g.K + 1;
  DecompWork w(f, parts.cuc);

  // Double sums over i, j in {0..K, infinity}; i v j = max realizes the
  // coarser-of-the-two conditional expectation (f at infinity).
  parts.g = GridFunction(g, m);
  parts.b = GridFunction(g, m);
  parallel_for(g.cell_count(), [&](std::int64_t cell) {
    Mat acc_g = Mat::Zero(m, m);
    Mat acc_b = Mat::Zero(m, m);
    const Mat& fx = w.ef(inf, cell);
    for (int i = 0; i <= inf; ++i) {
      const Mat& pi = w.proj(i, cell);
      if (pi.squaredNorm() < 0.25) continue;
      for (int j = 0; j <= inf; ++j) {
        const Mat& pj = w.proj(j, cell);
        if (pj.squaredNorm() < 0.25) continue;
        const Mat& fv = w.ef(std::max(i, j), cell);
        acc_g += pi * fv * pj;
        acc_b += pi * (fx - fv) * pj;
      }
    }
    parts.g.cell(cell) = acc_g;
    parts.b.cell(cell) = acc_b;
  });
  parts.g.set_hermitian(true);
  parts.b.set_hermitian(true);

  // Diagonal parts: g_d = q f q + sum_k p_k f_k p_k, b_d = sum_k p_k (f - f_k) p_k.
  parts.g_d = GridFunction(g, m);
  parts.b_d = GridFunction(g, m);
  parallel_for(g.cell_count(), [&](std::int64_t cell) {
    const Mat& q = w.proj(inf, cell);
    const Mat& fx = w.ef(inf, cell);
    Mat acc_g = q * fx * q;
    Mat acc_b = Mat::Zero(m, m);
    for (int k = 1; k <= g.K; ++k) {
      const Mat& pk = w.proj(k, cell);
      if (pk.squaredNorm() < 0.25) continue;
      const Mat& fk = w.ef(k, cell);
      acc_g += pk * fk * pk;
      acc_b += pk * (fx - fk) * pk;
    }
    parts.g_d.cell(cell) = acc_g;
    parts.b_d.cell(cell) = acc_b;
  });
  parts.g_d.set_hermitian(true);
  parts.b_d.set_hermitian(true);
  parts.g_off = parts.g - parts.g_d;
  parts.b_off = parts.b - parts.b_d;

  // The (k,s) families.
  for (int k = 1; k + 1 <= g.K; ++k)
    for (int s = 1; k + s <= g.K; ++s) {
      GridFunction gks(g, m), bks(g, m);
      parallel_for(g.cell_count(), [&](std::int64_t cell) {
        const Mat& pk = w.proj(k, cell);
        const Mat& pks = w.proj(k + s, cell);
        const Mat& qprev = parts.cuc.q[static_cast<std::size_t>(k + s - 1)].value_at_cell(cell);
        const Mat df = w.ef(k + s, cell) - w.ef(k + s - 1, cell);
        const Mat h = w.ef(inf, cell) - w.ef(k + s, cell);
        gks.cell(cell) = pk * df * qprev + qprev * df * pk;
        bks.cell(cell) = pk * h * pks + pks * h * pk;
      });
      gks.set_hermitian(true);
      bks.set_hermitian(true);
      parts.gks.emplace(KSKey{k, s}, std::move(gks));
      parts.bks.emplace(KSKey{k, s}, std::move(bks));
    }
  return parts;
}

DiagonalReport diagonal_estimates(const CZParts& parts) {
  const TorusGrid& g = parts.f.grid();
  DiagonalReport r;
  r.l1_f = lp_norm(parts.f, 1.0);
  r.phi_gd = trace_phi(parts.g_d);
  r.linf_gd = lp_norm(parts.g_d, kInfinity);
  const double scale = std::max(1.0, r.l1_f);

  // b_{d,k} = p_k (f - f_k) p_k: cube means at generation k vanish, and the
  // L1 norms sum to at most 2 ||f||_1.
  const auto avg = average_pyramid(parts.f);
  for (int k = 1; k <= g.K; ++k) {
    GridFunction bdk(g, parts.f.m());
    for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
      const Mat& pk = parts.cuc.p[static_cast<std::size_t>(k)].value_at_cell(cell);
      const Mat& fk = avg[static_cast<std::size_t>(k)]
                         [static_cast<std::size_t>(cube_linear_index(g, cube_of_cell(g, cell, k)))];
      bdk.cell(cell) = pk * (parts.f.cell(cell) - fk) * pk;
    }
    bdk.set_hermitian(true);
    r.sum_l1_bdk += lp_norm(bdk, 1.0);
    const auto means = average_pyramid(bdk);
    for (const auto& mat : means[static_cast<std::size_t>(k)])
      r.max_bdk_cube_mean = std::max(r.max_bdk_cube_mean, op_norm_mat(mat));
  }

  const double pow2n = static_cast<double>(std::int64_t{1} << g.n);
  if (std::fabs(r.phi_gd - r.l1_f) > 1e-10 * scale)
    throw std::runtime_error("diagonal_estimates: phi(g_d) != ||f||_1");
  if (r.linf_gd > pow2n * parts.lambda + 1e-9)
    throw std::runtime_error("diagonal_estimates: ||g_d||_inf exceeds 2^n lambda");
  if (r.max_bdk_cube_mean > 1e-10 * scale)
    throw std::runtime_error("diagonal_estimates: b_{d,k} cube mean not zero");
  if (r.sum_l1_bdk > 2.0 * r.l1_f + 1e-9 * scale)
    throw std::runtime_error("diagonal_estimates: sum ||b_{d,k}||_1 exceeds 2 ||f||_1");
  return r;
}

double gks_orthogonality(const CZParts& parts) {
  double max_cross = 0.0;
  double sum_sq = 0.0;
  for (auto it = parts.gks.begin(); it != parts.gks.end(); ++it) {
    sum_sq += inner_phi(it->second, it->second).real();
    for (auto jt = std::next(it); jt != parts.gks.end(); ++jt)
      max_cross = std::max(max_cross, std::abs(inner_phi(it->second, jt->second)));
  }
  const double goff_sq = inner_phi(parts.g_off, parts.g_off).real();
  const double scale = std::max({1.0, goff_sq, sum_sq});
  if (std::fabs(goff_sq - sum_sq) > 1e-8 * scale)
    throw std::runtime_error("gks_orthogonality: ||g_off||_2^2 != sum ||g_{k,s}||_2^2");
  return max_cross;
}

double linf_l2_constant(int n) {
  const double root = std::pow(2.0, 0.5 * static_cast<double>(n)) + 1.0;
  return 2.0 * root * root;
}

double linf_l2_estimate(const CZParts& parts) {
  const TorusGrid& g = parts.f.grid();
  std::vector<double> per_s(static_cast<std::size_t>(g.K) + 1, 0.0);
  for (const auto& [key, gks] : parts.gks)
    per_s[static_cast<std::size_t>(key.second)] += inner_phi(gks, gks).real();
  double sup = 0.0;
  for (double v : per_s) sup = std::max(sup, v);
  const double l1 = lp_norm(parts.f, 1.0);
  const double bound = linf_l2_constant(g.n) * parts.lambda * l1;
  if (sup > bound + 1e-9 * std::max(1.0, bound))
    throw std::runtime_error("linf_l2_estimate: sup_s sum_k ||g_{k,s}||_2^2 exceeds C_n lambda ||f||_1");
  return sup;
}

std::array<GridFunction, 4> bks_fourbox(const CZParts& parts, int k, int s) {
  const TorusGrid& g = parts.f.grid();
  if (k < 1 || s < 1 || k + s > g.K)
    throw std::out_of_range("bks_fourbox: need 1 <= k, 1 <= s, k + s <= K");
  const int m = parts.f.m();
  const auto avg = average_pyramid(parts.f);

  // Window A over p_{k+r}, r in [lo, hi], telescopes to q_{k+lo-1} - q_{k+hi}.
  auto window = [&](int lo, int hi, std::int64_t cell) -> Mat {
    if (lo > hi) return Mat::Zero(m, m);
    return parts.cuc.q[static_cast<std::size_t>(k + lo - 1)].value_at_cell(cell) -
           parts.cuc.q[static_cast<std::size_t>(k + hi)].value_at_cell(cell);
  };
  const std::array<std::pair<int, int>, 4> ranges = {{{0, s}, {0, s - 1}, {1, s}, {1, s - 1}}};

  std::array<GridFunction, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[static_cast<std::size_t>(i)] = GridFunction(g, m);
    GridFunction& bi = out[static_cast<std::size_t>(i)];
    for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
      const Mat a = window(ranges[static_cast<std::size_t>(i)].first,
                           ranges[static_cast<std::size_t>(i)].second, cell);
      const Mat h = parts.f.cell(cell) -
                    avg[static_cast<std::size_t>(k + s)][static_cast<std::size_t>(
                        cube_linear_index(g, cube_of_cell(g, cell, k + s)))];
      bi.cell(cell) = a * h * a;
    }
    bi.set_hermitian(true);
    // Zero mean over every generation-(k+s) cube.
    const auto means = average_pyramid(bi);
    for (const auto& mat : means[static_cast<std::size_t>(k + s)])
      if (op_norm_mat(mat) > 1e-10 * std::max(1.0, lp_norm(parts.f, kInfinity)))
        throw std::runtime_error("bks_fourbox: window part has nonzero cube mean");
  }
  return out;
}

std::pair<double, double> weighted_offdiag(const CZParts& parts,
                                           const std::vector<double>& alpha,
                                           const std::vector<double>& beta) {
  for (double a : alpha)
    if (a < 0.0) throw std::invalid_argument("weighted_offdiag: negative alpha weight");
  for (double b : beta)
    if (b < 0.0) throw std::invalid_argument("weighted_offdiag: negative beta weight");
  const TorusGrid& g = parts.f.grid();
  const int m = parts.f.m();
  auto weight = [](const std::vector<double>& w, int s) {
    return s - 1 < static_cast<int>(w.size()) ? w[static_cast<std::size_t>(s - 1)] : 0.0;
  };

  double first = 0.0;
  double alpha_moment = 0.0;  // sum_s s alpha_s
  for (std::size_t i = 0; i < alpha.size(); ++i)
    alpha_moment += static_cast<double>(i + 1) * alpha[i];
  for (const auto& [key, bks] : parts.bks)
    first += weight(alpha, key.second) * lp_norm(bks, 1.0);

  GridFunction combined(g, m);
  double parseval = 0.0;
  double beta_sq = 0.0;
  for (double b : beta) beta_sq += b * b;
  for (const auto& [key, gks] : parts.gks) {
    const double b = weight(beta, key.second);
    if (b == 0.0) continue;
    GridFunction scaled = gks;
    scaled *= Complex{b, 0.0};
    combined += scaled;
    parseval += b * b * inner_phi(gks, gks).real();
  }
  const double second = inner_phi(combined, combined).real();

  const double l1 = lp_norm(parts.f, 1.0);
  const double scale = std::max(1.0, l1);
  if (first > 8.0 * alpha_moment * l1 + 1e-9 * scale)
    throw std::runtime_error("weighted_offdiag: alpha-weighted L1 bound violated");
  if (std::fabs(second - parseval) > 1e-8 * std::max(1.0, second))
    throw std::runtime_error("weighted_offdiag: beta-weighted Parseval identity violated");
  if (second > linf_l2_constant(g.n) * beta_sq * parts.lambda * l1 + 1e-9 * scale)
    throw std::runtime_error("weighted_offdiag: beta-weighted L2 bound violated");
  return {first, second};
}

}  // namespace czlab
