// Artifact persistence: grid-function container files, kernel-table import,
// deterministic fixture generation, and CSV emission for experiment results.
#ifndef CZLAB_IO_HPP
#define CZLAB_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "czlab/gridfn.hpp"
#include "czlab/singint.hpp"

namespace czlab {

// Container file: "CZGF" magic, a version word, the dimensions n/K/m, one
// flag byte (bit 0 Hermitian, bit 1 PSD), then the cell data as little-endian
// double pairs (re, im), cells outermost, entries row-major.
void write_gridfn(const std::string& path, const GridFunction& f);
GridFunction read_gridfn(const std::string& path);

// Kernel operator from a raw float64 data file plus a JSON sidecar with keys
// {n, K, form, gamma, epsilon}; form "circulant" expects one kernel row,
// form "table" a full cells x cells matrix.
KernelOperator read_kernel_operator(const std::string& data_path,
                                    const std::string& sidecar_path);

enum class FixtureKind { kRandomPsd, kScalarSpike, kHaarAtom, kBandLimited, kConstant };
FixtureKind fixture_kind_from_name(const std::string& name);
std::string fixture_kind_name(FixtureKind kind);

// Deterministic fixtures, all normalized to L1 norm 1.
//   random-psd   — cellwise A*A with complex Gaussian A
//   scalar-spike — identity matrix on a single seed-chosen cell
//   haar-atom    — sign split of one generation-`param` cube (expectation at
//                  generation `param` vanishes)
//   band-limited — real scalar with spectrum in frequency band `param`
//   constant     — identity everywhere
GridFunction make_fixture(FixtureKind kind, const TorusGrid& g, int m, int param,
                          std::uint32_t seed);

// One row of the experiment CSV; the parameter column is the experiment's
// sweep variable (a shift s, a dilation xi, or a level lambda).
struct CsvRow {
  std::string experiment;
  int n = 0, K = 0, m = 0;
  double gamma = 0.0;
  double param = 0.0;
  double measurement = 0.0;
  double envelope = 0.0;
  double fitted_slope = 0.0;
  std::uint32_t seed = 0;
};
std::string csv_header();
std::string to_csv(const std::vector<CsvRow>& rows);

// Whole-file write via a temporary and rename.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace czlab

#endif  // CZLAB_IO_HPP
