// czlab: batch experiment runner and fixture generator for the dyadic-torus
// laboratory.  `czlab run <experiment> --out DIR` writes one CSV (plot data)
// and one JSON summary (per-property pass/fail + measured constants) per run;
// exit code 0 = all properties hold, 1 = an assertion failed, 2 = bad config.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <czlab/counterex.hpp>
#include <czlab/cuculescu.hpp>
#include <czlab/czdecomp.hpp>
#include <czlab/dyadic.hpp>
#include <czlab/gridfn.hpp>
#include <czlab/io.hpp>
#include <czlab/pseudoloc.hpp>
#include <czlab/singint.hpp>
#include <czlab/specfun.hpp>

namespace {

using namespace czlab;
using json = nlohmann::ordered_json;

struct RunConfig {
  std::string experiment;
  std::string out_dir;
  int n = 1;
  int K = 0;  // 0 = per-experiment default
  int m = 0;  // 0 = per-experiment default
  int param = -1;
  double lambda = 0.0;  // 0 = auto: 2 ||E_0 f||_inf
  double gamma = 0.0;   // 0 = take the kernel's own gamma for envelopes
  std::uint32_t seed = 7;
  bool seed_given = false;
  std::string kernel = "hilbert-multiplier";
  std::string kernel_data, kernel_sidecar;
  std::string fixture;  // empty = per-experiment default
  std::string s_range;  // "a..b"
  int k_fixed = 3;
  double p = 1.0;
  std::vector<double> xis = {8, 16, 32, 64, 128, 256, 512, 1024};
  std::vector<double> lambda_grid = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0};
};

struct Property {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
};

struct RunResult {
  std::vector<CsvRow> rows;
  std::vector<Property> props;
  json extra = json::object();  // experiment-specific constants and series
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_cfg(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::pair<int, int> parse_range(const std::string& text, int lo_default, int hi_default) {
  if (text.empty()) return {lo_default, hi_default};
  const auto pos = text.find("..");
  require_cfg(pos != std::string::npos, "range must look like a..b: " + text);
  try {
    const int lo = std::stoi(text.substr(0, pos));
    const int hi = std::stoi(text.substr(pos + 2));
    require_cfg(lo >= 1 && hi >= lo, "empty or negative range: " + text);
    return {lo, hi};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("unparsable range: " + text);
  }
}

TorusGrid grid_for(const RunConfig& cfg) {
  require_cfg(cfg.n == 1 || cfg.n == 2, "n must be 1 or 2");
  require_cfg(cfg.K >= 0 && cfg.K <= 24, "K must lie in [0, 24]");
  require_cfg(cfg.n * cfg.K <= 20, "grid too large: n*K must be <= 20 for the runner");
  return TorusGrid{cfg.n, cfg.K};
}

KernelOperator kernel_for(const RunConfig& cfg, const TorusGrid& g) {
  if (cfg.kernel == "hilbert-multiplier") return KernelOperator::hilbert_cotangent(g);
  if (cfg.kernel == "cotangent") return KernelOperator::cotangent(g);
  if (cfg.kernel == "custom") {
    require_cfg(!cfg.kernel_data.empty() && !cfg.kernel_sidecar.empty(),
                "custom kernel needs --kernel-data and --kernel-sidecar");
    try {
      KernelOperator T = read_kernel_operator(cfg.kernel_data, cfg.kernel_sidecar);
      require_cfg(T.grid().n == g.n && T.grid().K == g.K,
                  "custom kernel grid does not match --n/--K");
      return T;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("custom kernel: ") + e.what());
    }
  }
  throw ConfigError("unknown kernel: " + cfg.kernel +
                    " (expected hilbert-multiplier | cotangent | custom)");
}

GridFunction fixture_for(const RunConfig& cfg, const TorusGrid& g, const std::string& fallback,
                         int param_fallback) {
  const std::string name = cfg.fixture.empty() ? fallback : cfg.fixture;
  const int param = cfg.param >= 0 ? cfg.param : param_fallback;
  return make_fixture(fixture_kind_from_name(name), g, cfg.m, param, cfg.seed);
}

double auto_lambda(const GridFunction& f) {
  return 2.0 * op_norm_mat(cond_expectation(f, 0).cell(0));
}

double pick_lambda(const RunConfig& cfg, const GridFunction& f) {
  return cfg.lambda > 0.0 ? cfg.lambda : auto_lambda(f);
}

// constant-on-children refinement: the same function realized on a finer grid
GridFunction refine(const GridFunction& f, int K2) {
  const TorusGrid& g = f.grid();
  TorusGrid g2{g.n, K2};
  GridFunction out(g2, f.m());
  const int shift = K2 - g.K;
  for (std::int64_t c = 0; c < g2.cell_count(); ++c) {
    const auto xy = g2.cell_coords(c);
    out.cell(c) = f.cell(g.cell_id(xy[0] >> shift, g.n == 2 ? xy[1] >> shift : 0));
  }
  out.set_hermitian(f.hermitian()).set_psd(f.psd());
  return out;
}

double sup_cell(const GridFunction& f) {
  double v = 0.0;
  for (std::int64_t c = 0; c < f.grid().cell_count(); ++c)
    v = std::max(v, f.cell(c).norm());
  return v;
}

void add_prop(RunResult& r, const std::string& name, bool pass, double measured, double bound) {
  r.props.push_back({name, pass, measured, bound});
}

// upper-bound property: measured <= bound (+ tiny absolute slack)
void add_le(RunResult& r, const std::string& name, double measured, double bound,
            double slack = 1e-9) {
  add_prop(r, name, measured <= bound + slack, measured, bound);
}

json series_json(const DecaySeries& d) {
  return json{{"params", d.params},
              {"measurements", d.measurements},
              {"envelope", d.envelope},
              {"fitted_slope", d.fitted_slope},
              {"nonzero_points", d.nonzero_points}};
}

CsvRow base_row(const RunConfig& cfg, double gamma) {
  CsvRow row;
  row.experiment = cfg.experiment;
  row.n = cfg.n;
  row.K = cfg.K;
  row.m = cfg.m;
  row.gamma = gamma;
  row.seed = cfg.seed;
  return row;
}

void rows_from_series(RunResult& r, const RunConfig& cfg, double gamma, const DecaySeries& d) {
  for (std::size_t i = 0; i < d.measurements.size(); ++i) {
    CsvRow row = base_row(cfg, gamma);
    row.param = d.params[i];
    row.measurement = d.measurements[i];
    row.envelope = d.envelope[i];
    row.fitted_slope = d.fitted_slope;
    r.rows.push_back(row);
  }
}

// ---------------------------------------------------------------------------
// experiments

RunResult run_decompose_audit(RunConfig& cfg) {
  if (cfg.K == 0) cfg.K = 8;
  if (cfg.m == 0) cfg.m = 2;
  const TorusGrid g = grid_for(cfg);
  const GridFunction f = fixture_for(cfg, g, "random-psd", 0);
  const double lambda = pick_lambda(cfg, f);
  const CZParts parts = decompose(f, lambda);
  const double l1f = lp_norm(f, 1.0), l2f = lp_norm(f, 2.0);
  const double cn = 2.0 * std::pow(std::pow(2.0, cfg.n / 2.0) + 1.0, 2.0);

  RunResult r;
  GridFunction resid = f;
  resid -= parts.g;
  resid -= parts.b;
  add_le(r, "f-equals-g-plus-b", lp_norm(resid, 2.0) / l2f, 1e-10, 0.0);
  GridFunction goff = parts.g_off;
  for (const auto& [key, part] : parts.gks) goff -= part;
  add_le(r, "g-off-equals-graded-sum", lp_norm(goff, 2.0) / l2f, 1e-10, 0.0);
  GridFunction boff = parts.b_off;
  for (const auto& [key, part] : parts.bks) boff -= part;
  add_le(r, "b-off-equals-graded-sum", lp_norm(boff, 2.0) / l2f, 1e-10, 0.0);

  const DiagonalReport d = diagonal_estimates(parts);
  add_le(r, "phi-gd-equals-l1", std::abs(d.phi_gd - l1f), 1e-10, 0.0);
  add_le(r, "gd-below-2lambda", d.linf_gd, 2.0 * lambda);
  add_le(r, "bdk-l1-below-2l1", d.sum_l1_bdk, 2.0 * l1f);
  add_le(r, "bdk-cube-means-vanish", d.max_bdk_cube_mean, 1e-9, 0.0);
  add_le(r, "gks-pairwise-orthogonal", gks_orthogonality(parts), 1e-10, 0.0);
  add_le(r, "linf-l2-square-function", linf_l2_estimate(parts), cn * lambda * l1f);

  // per-shift square-function mass against the uniform bound
  std::map<int, double> by_s;
  for (const auto& [key, part] : parts.gks) {
    const double v = lp_norm(part, 2.0);
    by_s[key.second] += v * v;
  }
  for (const auto& [s, mass] : by_s) {
    CsvRow row = base_row(cfg, 0.0);
    row.param = s;
    row.measurement = mass;
    row.envelope = cn * lambda * l1f;
    r.rows.push_back(row);
  }
  r.extra["lambda"] = lambda;
  r.extra["l1_norm"] = l1f;
  return r;
}

RunResult run_cuculescu_audit(RunConfig& cfg) {
  if (cfg.K == 0) cfg.K = 8;
  if (cfg.m == 0) cfg.m = 2;
  const TorusGrid g = grid_for(cfg);
  const GridFunction f = fixture_for(cfg, g, "random-psd", 0);
  const double lambda = pick_lambda(cfg, f);
  const CuculescuData cuc = cuculescu(f, lambda);
  const double l1f = lp_norm(f, 1.0);

  RunResult r;
  bool structural = true;
  try {
    cuc.validate(1e-9);
  } catch (const std::exception&) {
    structural = false;
  }
  add_prop(r, "structural-invariants", structural, structural ? 0.0 : 1.0, 0.0);

  double comm = 0.0, comp = 0.0, doub = 0.0;
  bool monotone = true;
  for (int k = 1; k <= cfg.K; ++k) {
    const auto& qk = cuc.q[static_cast<std::size_t>(k)];
    const auto& qp = cuc.q[static_cast<std::size_t>(k - 1)];
    monotone = monotone && field_leq(qk, qp, 1e-9);
    const GridFunction ek = cond_expectation(f, k);
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
      const Mat& a = qk.value_at_cell(c);
      const Mat& b = qp.value_at_cell(c);
      comm = std::max({comm, (a * b - a).norm(), (b * a - a).norm()});
      comp = std::max(comp, op_norm_mat(a * ek.cell(c) * a));
      const Mat& pk = cuc.p[static_cast<std::size_t>(k)].value_at_cell(c);
      doub = std::max(doub, op_norm_mat(pk * ek.cell(c) * pk));
    }
  }
  add_prop(r, "q-decreasing", monotone, monotone ? 0.0 : 1.0, 0.0);
  add_le(r, "xi-commutes-with-father", comm, 1e-9, 0.0);
  add_le(r, "compressed-average-below-lambda", comp, lambda);
  add_le(r, "doubling-bound", doub, std::pow(2.0, cfg.n) * lambda);
  add_le(r, "weak-l1-mass", lambda * cuc.terminal().phi_of_complement(), l1f);

  for (int k = 0; k <= cfg.K; ++k) {
    CsvRow row = base_row(cfg, 0.0);
    row.param = k;
    row.measurement = cuc.q[static_cast<std::size_t>(k)].phi_of_complement();
    row.envelope = l1f / lambda;
    r.rows.push_back(row);
  }
  r.extra["lambda"] = lambda;
  return r;
}

RunResult run_zeta_audit(RunConfig& cfg) {
  if (cfg.K == 0) cfg.K = 8;
  if (cfg.m == 0) cfg.m = 2;
  const TorusGrid g = grid_for(cfg);
  const GridFunction f = fixture_for(cfg, g, "random-psd", 0);
  const double lambda = pick_lambda(cfg, f);
  const CuculescuData cuc = cuculescu(f, lambda);
  const ProjectionField z = zeta(cuc);
  const double l1f = lp_norm(f, 1.0);

  RunResult r;
  add_le(r, "zeta-complement-mass", lambda * z.phi_of_complement(),
         std::pow(9.0, cfg.n) * l1f);

  // zeta(x) <= xi_Q for x in 9Q; exhaustive when affordable, else coarse k only
  std::vector<int> ks;
  if (g.cell_count() <= 1024)
    for (int k = 1; k <= cfg.K; ++k) ks.push_back(k);
  else
    ks = {1, cfg.K / 2, cfg.K};
  bool below = true;
  for (int k : ks)
    for (std::int64_t qi = 0; qi < g.cube_count(k); ++qi) {
      const DyadicCube cube = cube_from_linear(g, k, qi);
      const Mat& xi = cuc.q[static_cast<std::size_t>(k)].at_cube(qi);
      for (std::int64_t x : concentric_cells(g, cube, 9.0))
        below = below && proj_leq(z.value_at_cell(x), xi, 1e-8);
    }
  add_prop(r, g.cell_count() <= 1024 ? "zeta-below-xi-exhaustive" : "zeta-below-xi-sampled",
           below, below ? 0.0 : 1.0, 0.0);

  for (int k = 1; k <= cfg.K; ++k) {
    CsvRow row = base_row(cfg, 0.0);
    row.param = k;
    row.measurement = trace_phi(cuc.p[static_cast<std::size_t>(k)].to_gridfn());
    row.envelope = l1f / lambda;
    r.rows.push_back(row);
  }
  r.extra["lambda"] = lambda;
  r.extra["phi_of_zeta_complement"] = z.phi_of_complement();
  return r;
}

RunResult run_pseudoloc(RunConfig& cfg, bool l1_mode) {
  if (cfg.K == 0) cfg.K = 12;
  cfg.m = 1;
  const TorusGrid g = grid_for(cfg);
  require_cfg(cfg.n == 1, "pseudo-localization experiments run on n = 1");
  const int j = cfg.param >= 0 ? cfg.param : std::max(0, cfg.K - 3);
  const KernelOperator T = kernel_for(cfg, g);
  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : T.gamma();
  const GridFunction f = make_fixture(FixtureKind::kHaarAtom, g, 1, j, cfg.seed);
  auto [s_lo, s_hi] = parse_range(cfg.s_range, 1, cfg.K - j);
  require_cfg(s_hi <= cfg.K - 1, "s range exceeds K-1");

  DecaySeries d;
  for (int s = s_lo; s <= s_hi; ++s) {
    d.params.push_back(s);
    d.xs.push_back(s);
    d.measurements.push_back(l1_mode ? l1_atomic_residual(T, f, j, s) : l2_residual(T, f, s));
    d.envelope.push_back(l1_mode ? std::pow(2.0, -gamma * s)
                                 : s * std::pow(2.0, -gamma * s / 4.0));
  }
  d.fit();

  RunResult r;
  const double slope_bound = l1_mode ? -gamma + 0.15 : -gamma / 4.0 + 0.15;
  add_prop(r, "enough-nonzero-points", d.nonzero_points >= 3, d.nonzero_points, 3);
  add_prop(r, l1_mode ? "l1-residual-slope" : "l2-residual-slope",
           d.fitted_slope <= slope_bound, d.fitted_slope, slope_bound);
  rows_from_series(r, cfg, gamma, d);
  r.extra["atom_generation"] = j;
  r.extra["series"] = series_json(d);
  return r;
}

RunResult run_corollary_decay(RunConfig& cfg) {
  if (cfg.K == 0) cfg.K = 12;
  cfg.m = 1;
  const TorusGrid g = grid_for(cfg);
  require_cfg(cfg.n == 1, "corollary-decay runs on n = 1");
  const int j = cfg.param >= 0 ? cfg.param : std::max(0, cfg.K - 3);
  const KernelOperator T = kernel_for(cfg, g);
  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : T.gamma();
  const GridFunction f = make_fixture(FixtureKind::kHaarAtom, g, 1, j, cfg.seed);
  const DecaySeries d = corollary_decay(T, f, cfg.xis);

  RunResult r;
  add_prop(r, "enough-nonzero-points", d.nonzero_points >= 3, d.nonzero_points, 3);
  add_prop(r, "residual-slope-in-log-xi", d.fitted_slope <= -gamma / 4.0 + 0.15,
           d.fitted_slope, -gamma / 4.0 + 0.15);
  rows_from_series(r, cfg, gamma, d);
  r.extra["series"] = series_json(d);
  return r;
}

RunResult run_shifted_t1(RunConfig& cfg) {
  if (cfg.K == 0) cfg.K = 10;
  cfg.m = 1;
  const TorusGrid g = grid_for(cfg);
  require_cfg(cfg.n == 1, "shifted-t1 runs on n = 1");
  const KernelOperator T = kernel_for(cfg, g);
  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : T.gamma();
  auto [s_lo, s_hi] = parse_range(cfg.s_range, 1, std::min(8, cfg.K - 1));
  require_cfg(s_hi <= cfg.K - 1, "s range exceeds K-1");
  const auto [phi, psi] = shifted_t1_scan(T, s_lo, s_hi);

  RunResult r;
  add_prop(r, "phi-norm-slope", phi.fitted_slope <= -gamma / 4.0 + 0.15, phi.fitted_slope,
           -gamma / 4.0 + 0.15);
  add_prop(r, "psi-norm-slope", psi.fitted_slope <= -gamma / 2.0 + 0.15, psi.fitted_slope,
           -gamma / 2.0 + 0.15);
  rows_from_series(r, cfg, gamma, phi);
  r.extra["phi"] = series_json(phi);
  r.extra["psi"] = series_json(psi);
  return r;
}

RunResult run_schur(RunConfig& cfg) {
  if (cfg.K == 0) cfg.K = 10;
  cfg.m = 1;
  const TorusGrid g = grid_for(cfg);
  require_cfg(cfg.n == 1, "schur runs on n = 1");
  const KernelOperator T = kernel_for(cfg, g);
  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : T.gamma();
  auto [s_lo, s_hi] = parse_range(cfg.s_range, 1, cfg.K - cfg.k_fixed);
  require_cfg(cfg.k_fixed >= 0 && cfg.k_fixed + s_hi <= cfg.K, "k + s exceeds K");

  DecaySeries row_sums;
  for (int s = s_lo; s <= s_hi; ++s) {
    const auto [s1, s2] = schur_diagnostics(T, s, cfg.k_fixed);
    (void)s2;
    row_sums.params.push_back(s);
    row_sums.xs.push_back(s);
    row_sums.measurements.push_back(s1);
    row_sums.envelope.push_back(s * std::pow(2.0, -gamma * s));
  }
  row_sums.fit();

  RunResult r;
  add_prop(r, "row-sum-slope", row_sums.fitted_slope <= -gamma + 0.2, row_sums.fitted_slope,
           -gamma + 0.2);

  // column sums across the k window at small s: uniform up to 20%
  json colsums = json::object();
  double worst_spread = 0.0, fitted_c = 0.0;
  for (int s = 1; s <= 2; ++s) {
    if (3 + s > cfg.K) continue;
    double lo = 1e300, hi = 0.0;
    std::vector<double> vals;
    for (int k = 3; k <= std::min(8, cfg.K - s); ++k) {
      const double s2 = schur_diagnostics(T, s, k).second;
      vals.push_back(s2);
      lo = std::min(lo, s2);
      hi = std::max(hi, s2);
      fitted_c = std::max(fitted_c, s2 / s);
    }
    if (vals.size() >= 2) worst_spread = std::max(worst_spread, hi / lo);
    colsums["s=" + std::to_string(s)] = vals;
  }
  add_prop(r, "column-sum-k-uniformity", worst_spread <= 1.2, worst_spread, 1.2);
  rows_from_series(r, cfg, gamma, row_sums);
  r.extra["row_sums"] = series_json(row_sums);
  r.extra["column_sums"] = colsums;
  r.extra["column_sum_constant"] = fitted_c;
  r.extra["k_fixed"] = cfg.k_fixed;
  return r;
}

RunResult run_nc_pseudoloc(RunConfig& cfg) {
  if (cfg.K == 0) cfg.K = 8;
  if (cfg.m == 0) cfg.m = 2;
  if (!cfg.seed_given) cfg.seed = 11;
  const TorusGrid g = grid_for(cfg);
  require_cfg(cfg.n == 1, "nc-pseudoloc runs on n = 1");
  const KernelOperator T = kernel_for(cfg, g);
  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : T.gamma();
  GridFunction f = make_fixture(FixtureKind::kRandomPsd, g, cfg.m, 0, cfg.seed);
  // heavier tail so the auto lambda actually cuts cubes
  for (std::int64_t c = 0; c < g.cell_count(); ++c) f.cell(c) *= f.cell(c).norm();
  f.set_hermitian(true).set_psd(true);
  f *= Complex{1.0 / lp_norm(f, 1.0), 0.0};
  const double lambda = pick_lambda(cfg, f);
  auto [s_lo, s_hi] = parse_range(cfg.s_range, 1, cfg.K - 2);
  const DecaySeries d = nc_pseudoloc_check(f, lambda, T, s_lo, s_hi);

  RunResult r;
  add_prop(r, "shift-checks", true, 0.0, 0.0);  // nc_pseudoloc_check throws on failure
  std::vector<double> ratios;
  for (std::size_t i = 0; i < d.measurements.size(); ++i)
    if (d.measurements[i] > 0.0) ratios.push_back(d.measurements[i] / d.envelope[i]);
  std::sort(ratios.begin(), ratios.end());
  add_prop(r, "enough-nonzero-points", ratios.size() >= 3, static_cast<double>(ratios.size()),
           3);
  const double med = ratios.empty() ? 0.0 : ratios[ratios.size() / 2];
  const double top = ratios.empty() ? 0.0 : ratios.back();
  add_prop(r, "envelope-constant-uniform", !ratios.empty() && top <= 2.0 * med,
           med > 0.0 ? top / med : 0.0, 2.0);
  rows_from_series(r, cfg, gamma, d);
  r.extra["lambda"] = lambda;
  r.extra["fitted_constant"] = top;
  r.extra["series"] = series_json(d);
  return r;
}

RunResult run_weak11(RunConfig& cfg) {
  if (cfg.K == 0) cfg.K = 8;
  if (cfg.m == 0) cfg.m = 2;
  const TorusGrid g = grid_for(cfg);
  require_cfg(cfg.n == 1, "weak11 runs on n = 1");
  require_cfg(cfg.n * (cfg.K + 2) <= 20, "K + 2 refinement exceeds the grid cap");
  const KernelOperator T = kernel_for(cfg, g);
  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : T.gamma();
  const GridFunction f = fixture_for(cfg, g, "random-psd", 0);
  const Weak11Profile coarse = weak11_profile(T, f, cfg.lambda_grid);

  const GridFunction f2 = refine(f, cfg.K + 2);
  const KernelOperator T2 = kernel_for(cfg, f2.grid());
  const Weak11Profile fine = weak11_profile(T2, f2, cfg.lambda_grid);

  RunResult r;
  add_le(r, "refinement-stability", fine.max_value, 1.25 * coarse.max_value, 1e-12);
  for (std::size_t i = 0; i < coarse.values.size(); ++i) {
    CsvRow row = base_row(cfg, gamma);
    row.param = coarse.lambdas[i];
    row.measurement = coarse.values[i];
    row.envelope = 1.0;
    r.rows.push_back(row);
  }
  r.extra["max_value"] = coarse.max_value;
  r.extra["refined_max_value"] = fine.max_value;
  r.extra["refined_values"] = fine.values;
  return r;
}

RunResult run_appb(RunConfig& cfg) {
  if (cfg.m == 0) cfg.m = 4;
  require_cfg(cfg.m >= 1 && cfg.m <= 64, "appb: m must lie in [1, 64]");
  cfg.n = 0;
  cfg.K = 0;
  const AppendixBResult res = appendix_b(cfg.m);
  const int d = 2 * cfg.m;

  RunResult r;
  add_le(r, "l1-equals-2m", std::abs(res.l1 - 2.0 * cfg.m), 1e-9, 0.0);
  add_le(r, "l2sq-equals-2m(m+1)", std::abs(res.l2sq - 2.0 * cfg.m * (cfg.m + 1.0)), 1e-9,
         0.0);
  double shape = 0.0;
  for (int s = 1; s <= d; ++s) {
    const Mat& ps = res.p[static_cast<std::size_t>(s - 1)];
    if (s % 2 == 1) {
      shape = std::max(shape, ps.cwiseAbs().maxCoeff());
    } else {
      Mat want = Mat::Zero(d, d);
      want(s - 2, s - 2) = 1.0;
      want(s - 1, s - 1) = 1.0;
      shape = std::max(shape, (ps - want).cwiseAbs().maxCoeff());
    }
  }
  add_le(r, "projection-pattern", shape, 1e-9, 0.0);

  for (int s = 1; s <= d; ++s) {
    CsvRow row = base_row(cfg, 0.0);
    row.m = cfg.m;
    row.param = s;
    row.measurement = res.p[static_cast<std::size_t>(s - 1)].real().trace();
    row.envelope = s % 2 == 0 ? 2.0 : 0.0;
    r.rows.push_back(row);
  }
  r.extra["l1"] = res.l1;
  r.extra["l2sq"] = res.l2sq;
  r.extra["l2sq_closed"] = res.l2sq_closed;
  return r;
}

RunResult run_lpblowup(RunConfig& cfg) {
  if (cfg.m == 0) cfg.m = 16;
  if (cfg.K == 0) cfg.K = 8;
  cfg.n = 1;
  const LpBlowupResult res = lp_blowup(cfg.m, cfg.p, cfg.K);

  RunResult r;
  add_le(r, "t1-ratio-matches-closed-form", std::abs(res.ratio_t1 - res.expected_t1), 1e-8,
         0.0);
  add_le(r, "t2-ratio-matches-closed-form", std::abs(res.ratio_t2 - res.expected_t2), 1e-8,
         0.0);
  // param column carries the transform index (1 or 2)
  CsvRow a = base_row(cfg, 0.0);
  a.param = 1;
  a.measurement = res.ratio_t1;
  a.envelope = res.expected_t1;
  r.rows.push_back(a);
  CsvRow b = base_row(cfg, 0.0);
  b.param = 2;
  b.measurement = res.ratio_t2;
  b.envelope = res.expected_t2;
  r.rows.push_back(b);
  r.extra["p"] = cfg.p;
  r.extra["ratio_t1"] = res.ratio_t1;
  r.extra["ratio_t2"] = res.ratio_t2;
  r.extra["expected_t1"] = res.expected_t1;
  r.extra["expected_t2"] = res.expected_t2;
  return r;
}

RunResult run_marttransform(RunConfig& cfg) {
  if (cfg.m == 0) cfg.m = 5;
  require_cfg(cfg.m >= 2, "marttransform: m must be >= 2");
  cfg.n = 0;
  cfg.K = 0;
  const MartTransformResult res = mart_transform_example(cfg.m, cfg.p);
  const double a = std::pow(cfg.m - 1.0, 1.0 / cfg.p);
  const double b = std::sqrt(cfg.m - 1.0);

  RunResult r;
  const double err =
      std::max(std::abs(std::min(res.transformed, res.original) - std::min(a, b)),
               std::abs(std::max(res.transformed, res.original) - std::max(a, b)));
  add_le(r, "norm-pair-matches-closed-forms", err, 1e-10, 0.0);
  CsvRow t = base_row(cfg, 0.0);
  t.param = cfg.p;
  t.measurement = res.transformed;
  t.envelope = a;
  r.rows.push_back(t);
  CsvRow o = base_row(cfg, 0.0);
  o.param = cfg.p;
  o.measurement = res.original;
  o.envelope = b;
  r.rows.push_back(o);
  r.extra["p"] = cfg.p;
  r.extra["transformed"] = res.transformed;
  r.extra["original"] = res.original;
  return r;
}

RunResult dispatch(RunConfig& cfg) {
  if (cfg.experiment == "decompose-audit") return run_decompose_audit(cfg);
  if (cfg.experiment == "cuculescu-audit") return run_cuculescu_audit(cfg);
  if (cfg.experiment == "zeta-audit") return run_zeta_audit(cfg);
  if (cfg.experiment == "pseudoloc-l2") return run_pseudoloc(cfg, false);
  if (cfg.experiment == "pseudoloc-l1") return run_pseudoloc(cfg, true);
  if (cfg.experiment == "corollary-decay") return run_corollary_decay(cfg);
  if (cfg.experiment == "shifted-t1") return run_shifted_t1(cfg);
  if (cfg.experiment == "schur") return run_schur(cfg);
  if (cfg.experiment == "nc-pseudoloc") return run_nc_pseudoloc(cfg);
  if (cfg.experiment == "weak11") return run_weak11(cfg);
  if (cfg.experiment == "counterexample:appb") return run_appb(cfg);
  if (cfg.experiment == "counterexample:lpblowup") return run_lpblowup(cfg);
  if (cfg.experiment == "counterexample:marttransform") return run_marttransform(cfg);
  throw ConfigError("unknown experiment: " + cfg.experiment);
}

int do_run(RunConfig& cfg) {
  RunResult result;
  try {
    result = dispatch(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::range_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "assertion failed: %s\n", e.what());
    return 1;
  }

  std::string base = cfg.experiment;
  std::replace(base.begin(), base.end(), ':', '-');
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "config error: cannot create %s: %s\n", cfg.out_dir.c_str(),
                 ec.message().c_str());
    return 2;
  }
  const std::string csv_path = cfg.out_dir + "/" + base + ".csv";
  const std::string json_path = cfg.out_dir + "/" + base + ".json";

  json summary;
  summary["experiment"] = cfg.experiment;
  summary["config"] = {{"n", cfg.n},
                       {"K", cfg.K},
                       {"m", cfg.m},
                       {"seed", cfg.seed},
                       {"kernel", cfg.kernel},
                       {"lambda", cfg.lambda},
                       {"fixture", cfg.fixture},
                       {"param", cfg.param},
                       {"s_range", cfg.s_range},
                       {"k", cfg.k_fixed},
                       {"p", cfg.p}};
  bool all_pass = true;
  json props = json::array();
  for (const Property& p : result.props) {
    props.push_back(
        {{"name", p.name}, {"pass", p.pass}, {"measured", p.measured}, {"bound", p.bound}});
    all_pass = all_pass && p.pass;
  }
  summary["properties"] = props;
  for (auto& [key, value] : result.extra.items()) summary[key] = value;
  summary["pass"] = all_pass;

  try {
    write_text_atomic(csv_path, to_csv(result.rows));
    write_text_atomic(json_path, summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  std::printf("%s: %zu properties, %s; wrote %s and %s\n", cfg.experiment.c_str(),
              result.props.size(), all_pass ? "all pass" : "FAILURES", csv_path.c_str(),
              json_path.c_str());
  if (!all_pass) {
    for (const Property& p : result.props)
      if (!p.pass)
        std::fprintf(stderr, "assertion failed: %s (measured %g, bound %g)\n", p.name.c_str(),
                     p.measured, p.bound);
    return 1;
  }
  return 0;
}

int do_gen_fixture(const std::string& kind, int n, int K, int m, int param, std::uint32_t seed,
                   const std::string& out) {
  try {
    RunConfig probe;
    probe.n = n;
    probe.K = K;
    const TorusGrid g = grid_for(probe);
    require_cfg(m >= 1 && m <= 16, "m must lie in [1, 16]");
    const GridFunction f = make_fixture(fixture_kind_from_name(kind), g, m, param, seed);
    write_gridfn(out, f);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"czlab — numerical laboratory for matrix-valued dyadic singular integrals"};
  app.require_subcommand(1);

  RunConfig cfg;
  CLI::App* run = app.add_subcommand("run", "run one experiment and write CSV + JSON");
  run->add_option("experiment", cfg.experiment,
                  "decompose-audit | cuculescu-audit | zeta-audit | pseudoloc-l2 | "
                  "pseudoloc-l1 | corollary-decay | shifted-t1 | schur | nc-pseudoloc | "
                  "weak11 | counterexample:appb | counterexample:lpblowup | "
                  "counterexample:marttransform")
      ->required();
  run->add_option("--out", cfg.out_dir, "output directory")->required();
  run->add_option("--n", cfg.n, "dimension (1 or 2)");
  run->add_option("--K", cfg.K, "dyadic depth (0 = experiment default)");
  run->add_option("--m", cfg.m, "matrix size (0 = experiment default)");
  run->add_option("--param", cfg.param, "fixture parameter (haar generation, band index)");
  run->add_option("--lambda", cfg.lambda, "decomposition level (0 = 2||E_0 f||)");
  run->add_option("--gamma", cfg.gamma, "envelope smoothness exponent (0 = kernel's)");
  CLI::Option* seed_opt = run->add_option("--seed", cfg.seed, "fixture seed");
  run->add_option("--kernel", cfg.kernel, "hilbert-multiplier | cotangent | custom");
  run->add_option("--kernel-data", cfg.kernel_data, "custom kernel raw float64 file");
  run->add_option("--kernel-sidecar", cfg.kernel_sidecar, "custom kernel JSON sidecar");
  run->add_option("--fixture", cfg.fixture,
                  "random-psd | scalar-spike | haar-atom | band-limited | constant");
  run->add_option("--s", cfg.s_range, "shift range a..b");
  run->add_option("--k", cfg.k_fixed, "fixed generation for schur row sums");
  run->add_option("--p", cfg.p, "exponent for the counterexample families");
  run->add_option("--xis", cfg.xis, "dilation factors for corollary-decay")->delimiter(',');
  run->add_option("--lambda-grid", cfg.lambda_grid, "levels for weak11")->delimiter(',');

  std::string gf_kind, gf_out;
  int gf_n = 1, gf_K = 6, gf_m = 1, gf_param = 0;
  std::uint32_t gf_seed = 7;
  CLI::App* gen = app.add_subcommand("gen-fixture", "write a deterministic fixture file");
  gen->add_option("--kind", gf_kind,
                  "random-psd | scalar-spike | haar-atom | band-limited | constant")
      ->required();
  gen->add_option("--out", gf_out, "output path")->required();
  gen->add_option("--n", gf_n, "dimension (1 or 2)");
  gen->add_option("--K", gf_K, "dyadic depth");
  gen->add_option("--m", gf_m, "matrix size");
  gen->add_option("--param", gf_param, "fixture parameter");
  gen->add_option("--seed", gf_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) {
    cfg.seed_given = seed_opt->count() > 0;
    return do_run(cfg);
  }
  return do_gen_fixture(gf_kind, gf_n, gf_K, gf_m, gf_param, gf_seed, gf_out);
}
