#include "czlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "czlab/fft.hpp"
#include "czlab/specfun.hpp"

namespace czlab {

namespace {

constexpr char kMagic[4] = {'C', 'Z', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
               static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

// Uniform in (0,1) from raw engine words (portable across platforms).
double unit_uniform(std::mt19937& gen) {
  return (static_cast<double>(gen()) + 0.5) / 4294967296.0;
}

// Standard normal via Box-Muller on raw uniforms.
double gaussian(std::mt19937& gen) {
  const double u1 = unit_uniform(gen);
  const double u2 = unit_uniform(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void normalize_l1(GridFunction& f) {
  const double l1 = lp_norm(f, 1.0);
  if (l1 > 0.0) f *= Complex{1.0 / l1, 0.0};
}

std::vector<double> read_doubles(const std::string& path, std::size_t want) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open data file: " + path);
  std::vector<double> data(want);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(want * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != want * sizeof(double))
    throw std::runtime_error("data file too short: " + path);
  return data;
}

}  // namespace

void write_gridfn(const std::string& path, const GridFunction& f) {
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(f.grid().n));
  put_u32(out, static_cast<std::uint32_t>(f.grid().K));
  put_u32(out, static_cast<std::uint32_t>(f.m()));
  const char flags = static_cast<char>((f.hermitian() ? 1 : 0) | (f.psd() ? 2 : 0));
  out.write(&flags, 1);
  for (std::int64_t i = 0; i < f.cells(); ++i) {
    const ConstCellView c = f.cell(i);
    for (int r = 0; r < f.m(); ++r)
      for (int col = 0; col < f.m(); ++col) {
        const double re = c(r, col).real();
        const double im = c(r, col).imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(double));
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
      }
  }
  write_text_atomic(path, out.str());
}

GridFunction read_gridfn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open grid function file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != std::string(kMagic, 4))
    throw std::runtime_error("not a grid function file: " + path);
  if (get_u32(in) != kVersion) throw std::runtime_error("unsupported container version");
  const auto n = static_cast<int>(get_u32(in));
  const auto K = static_cast<int>(get_u32(in));
  const auto m = static_cast<int>(get_u32(in));
  char flags = 0;
  in.read(&flags, 1);
  GridFunction f(TorusGrid{n, K}, m);
  for (std::int64_t i = 0; i < f.cells(); ++i) {
    CellView c = f.cell(i);
    for (int r = 0; r < m; ++r)
      for (int col = 0; col < m; ++col) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), sizeof(double));
        in.read(reinterpret_cast<char*>(&im), sizeof(double));
        c(r, col) = Complex{re, im};
      }
  }
  if (!in) throw std::runtime_error("grid function file truncated: " + path);
  if (flags & 1) f.set_hermitian(true);
  if (flags & 2) f.set_psd(true);
  return f;
}

KernelOperator read_kernel_operator(const std::string& data_path,
                                    const std::string& sidecar_path) {
  std::ifstream side(sidecar_path);
  if (!side) throw std::runtime_error("cannot open sidecar: " + sidecar_path);
  const nlohmann::json meta = nlohmann::json::parse(side);
  const TorusGrid g{meta.at("n").get<int>(), meta.at("K").get<int>()};
  const std::string form = meta.at("form").get<std::string>();
  const double gamma = meta.at("gamma").get<double>();
  const double epsilon = meta.at("epsilon").get<double>();
  const auto cells = static_cast<std::size_t>(g.cell_count());
  if (form == "circulant")
    return KernelOperator::circulant(g, read_doubles(data_path, cells), gamma, epsilon);
  if (form == "table")
    return KernelOperator::table(g, read_doubles(data_path, cells * cells), gamma, epsilon);
  throw std::runtime_error("unknown kernel form: " + form);
}

FixtureKind fixture_kind_from_name(const std::string& name) {
  if (name == "random-psd") return FixtureKind::kRandomPsd;
  if (name == "scalar-spike") return FixtureKind::kScalarSpike;
  if (name == "haar-atom") return FixtureKind::kHaarAtom;
  if (name == "band-limited") return FixtureKind::kBandLimited;
  if (name == "constant") return FixtureKind::kConstant;
  throw std::invalid_argument("unknown fixture kind: " + name);
}

std::string fixture_kind_name(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::kRandomPsd: return "random-psd";
    case FixtureKind::kScalarSpike: return "scalar-spike";
    case FixtureKind::kHaarAtom: return "haar-atom";
    case FixtureKind::kBandLimited: return "band-limited";
    case FixtureKind::kConstant: return "constant";
  }
  throw std::logic_error("unreachable");
}

GridFunction make_fixture(FixtureKind kind, const TorusGrid& g, int m, int param,
                          std::uint32_t seed) {
  if (m < 1) throw std::invalid_argument("make_fixture: m >= 1 required");
  std::mt19937 gen(seed);
  GridFunction f(g, m);

  switch (kind) {
    case FixtureKind::kRandomPsd: {
      for (std::int64_t i = 0; i < f.cells(); ++i) {
        Mat a(m, m);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) a(r, c) = Complex{gaussian(gen), gaussian(gen)};
        f.cell(i) = a.adjoint() * a;
      }
      f.set_hermitian(true).set_psd(true);
      normalize_l1(f);
      return f;
    }
    case FixtureKind::kScalarSpike: {
      const std::int64_t where = static_cast<std::int64_t>(seed) % g.cell_count();
      f.cell(where) = Mat::Identity(m, m) * static_cast<double>(g.cell_count());
      f.set_hermitian(true).set_psd(true);
      normalize_l1(f);
      return f;
    }
    case FixtureKind::kHaarAtom: {
      const int j = param;
      if (j < 0 || j >= g.K)
        throw std::invalid_argument("make_fixture: haar-atom generation out of range");
      const DyadicCube q = cube_from_linear(g, j, static_cast<std::int64_t>(seed) % g.cube_count(j));
      const std::int64_t half = g.side() / g.cubes_per_axis(j) / 2;  // cells per half-cube, axis 0
      const std::int64_t x0 = q.index[0] * (g.side() / g.cubes_per_axis(j));
      for (std::int64_t cell : cells_of_cube(g, q)) {
        const auto xy = g.cell_coords(cell);
        const double sign = (xy[0] - x0 < half) ? 1.0 : -1.0;
        f.cell(cell) = Mat::Identity(m, m) * sign;
      }
      f.set_hermitian(true);
      normalize_l1(f);
      return f;
    }
    case FixtureKind::kBandLimited: {
      if (g.n != 1) throw std::invalid_argument("make_fixture: band-limited needs n = 1");
      const int b = param;
      const std::int64_t nfft = g.cell_count();
      if (b < 1 || 4 * b + 3 >= nfft / 2)
        throw std::invalid_argument("make_fixture: band index out of range");
      std::vector<Complex> spec(static_cast<std::size_t>(nfft));
      for (std::int64_t nu = 4 * b; nu <= 4 * b + 3; ++nu) {
        const double theta = 2.0 * std::numbers::pi * unit_uniform(gen);
        spec[static_cast<std::size_t>(nu)] = std::polar(1.0, theta);
        spec[static_cast<std::size_t>(nfft - nu)] = std::polar(1.0, -theta);
      }
      fft_radix2(spec, true);
      for (std::int64_t i = 0; i < nfft; ++i)
        f.cell(i) = Mat::Identity(m, m) * spec[static_cast<std::size_t>(i)].real();
      f.set_hermitian(true);
      normalize_l1(f);
      return f;
    }
    case FixtureKind::kConstant: {
      for (std::int64_t i = 0; i < f.cells(); ++i) f.cell(i) = Mat::Identity(m, m);
      f.set_hermitian(true).set_psd(true);
      normalize_l1(f);
      return f;
    }
  }
  throw std::logic_error("unreachable");
}

std::string csv_header() {
  return "experiment,n,K,m,gamma,s_or_xi_or_lambda,measurement,envelope,fitted_slope,seed";
}

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::ostringstream out;
  out << csv_header() << '\n';
  char buf[512];
  for (const CsvRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%u\n",
                  r.experiment.c_str(), r.n, r.K, r.m, r.gamma, r.param, r.measurement,
                  r.envelope, r.fitted_slope, r.seed);
    out << buf;
  }
  return out.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("short write: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into place: " + path);
}

}  // namespace czlab
