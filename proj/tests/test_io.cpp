#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "czlab/fft.hpp"
#include "czlab/io.hpp"
#include "czlab/specfun.hpp"
#include "doctest.h"

using namespace czlab;

namespace {

std::filesystem::path tmp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("container files round-trip values and flags") {
  const TorusGrid g{2, 2};
  GridFunction f(g, 2);
  std::mt19937 gen(301);
  for (auto& v : f.raw())
    v = Complex{(static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5,
                (static_cast<double>(gen() & 0xFFFF) / 65536.0) - 0.5};
  const auto path = tmp_path("czlab_roundtrip.czgf");
  write_gridfn(path.string(), f);
  const GridFunction back = read_gridfn(path.string());
  CHECK(back.grid() == g);
  CHECK(back.m() == 2);
  for (std::int64_t c = 0; c < g.cell_count(); ++c)
    CHECK((back.cell(c) - f.cell(c)).cwiseAbs().maxCoeff() == 0.0);

  GridFunction h(g, 1);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) h.at(c) = double(c);
  h.set_hermitian(true).set_psd(true);
  const auto hpath = tmp_path("czlab_roundtrip_flags.czgf");
  write_gridfn(hpath.string(), h);
  const GridFunction hback = read_gridfn(hpath.string());
  CHECK(hback.hermitian());
  CHECK(hback.psd());
  std::filesystem::remove(path);
  std::filesystem::remove(hpath);
}

TEST_CASE("fixtures are deterministic in the seed") {
  const TorusGrid g{1, 5};
  const GridFunction a = make_fixture(FixtureKind::kRandomPsd, g, 2, 0, 1234);
  const GridFunction b = make_fixture(FixtureKind::kRandomPsd, g, 2, 0, 1234);
  const auto pa = tmp_path("czlab_fix_a.czgf");
  const auto pb = tmp_path("czlab_fix_b.czgf");
  write_gridfn(pa.string(), a);
  write_gridfn(pb.string(), b);
  CHECK(slurp(pa) == slurp(pb));
  const GridFunction c = make_fixture(FixtureKind::kRandomPsd, g, 2, 0, 1235);
  const auto pc = tmp_path("czlab_fix_c.czgf");
  write_gridfn(pc.string(), c);
  CHECK(slurp(pa) != slurp(pc));
  std::filesystem::remove(pa);
  std::filesystem::remove(pb);
  std::filesystem::remove(pc);
}

TEST_CASE("every fixture kind is unit mass with its advertised structure") {
  const TorusGrid g{1, 6};
  const GridFunction psd = make_fixture(FixtureKind::kRandomPsd, g, 2, 0, 7);
  CHECK(psd.psd());
  CHECK(lp_norm(psd, 1.0) == doctest::Approx(1.0).epsilon(1e-10));

  const GridFunction spike = make_fixture(FixtureKind::kScalarSpike, g, 1, 0, 9);
  CHECK(lp_norm(spike, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  int nonzero = 0;
  for (std::int64_t c = 0; c < g.cell_count(); ++c)
    if (std::abs(spike.at(c)) > 0.0) ++nonzero;
  CHECK(nonzero == 1);

  const int j = 3;
  const GridFunction haar = make_fixture(FixtureKind::kHaarAtom, g, 2, j, 11);
  CHECK(lp_norm(haar, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  const GridFunction ej = cond_expectation(haar, j);
  double worst = 0.0;
  for (std::int64_t c = 0; c < g.cell_count(); ++c)
    worst = std::max(worst, ej.cell(c).cwiseAbs().maxCoeff());
  CHECK(worst < 1e-12);
  // support inside a single generation-j cube
  CellMask supp = support_mask(haar);
  CHECK(smallest_rk_set(supp, j).count() == g.cells_per_cube(j));

  const int band = 2;
  const GridFunction bl = make_fixture(FixtureKind::kBandLimited, g, 1, band, 13);
  CHECK(lp_norm(bl, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  std::vector<Complex> hat = bl.entry(0, 0);
  fft_radix2(hat, false);
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const int nu = std::abs(frequency_of_index(static_cast<std::int64_t>(i), g.cell_count()));
    if (nu < 4 * band || nu > 4 * band + 3) CHECK(std::abs(hat[i]) < 1e-9);
  }
  for (std::int64_t c = 0; c < g.cell_count(); ++c)
    CHECK(std::abs(bl.at(c).imag()) < 1e-12);

  const GridFunction one = make_fixture(FixtureKind::kConstant, g, 2, 0, 17);
  CHECK(one.psd());
  CHECK(lp_norm(one, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  for (std::int64_t c = 1; c < g.cell_count(); ++c)
    CHECK((one.cell(c) - one.cell(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fixture names round-trip") {
  for (FixtureKind k : {FixtureKind::kRandomPsd, FixtureKind::kScalarSpike,
                        FixtureKind::kHaarAtom, FixtureKind::kBandLimited,
                        FixtureKind::kConstant})
    CHECK(fixture_kind_from_name(fixture_kind_name(k)) == k);
  CHECK_THROWS(fixture_kind_from_name("no-such-fixture"));
}

TEST_CASE("kernel import reads a circulant row with its sidecar") {
  const TorusGrid g{1, 4};
  const KernelOperator src = KernelOperator::cotangent(g);
  const auto data = tmp_path("czlab_kernel.f64");
  {
    std::ofstream out(data, std::ios::binary);
    out.write(reinterpret_cast<const char*>(src.kernel_row().data()),
              static_cast<std::streamsize>(src.kernel_row().size() * sizeof(double)));
  }
  const auto side = tmp_path("czlab_kernel.json");
  write_text_atomic(side.string(),
                    "{\"n\":1,\"K\":4,\"form\":\"circulant\",\"gamma\":1.0,\"epsilon\":0.0}");
  const KernelOperator back = read_kernel_operator(data.string(), side.string());
  CHECK(back.form() == KernelForm::kCirculant);
  CHECK(back.gamma() == doctest::Approx(1.0));
  REQUIRE(back.kernel_row().size() == src.kernel_row().size());
  for (std::size_t i = 0; i < src.kernel_row().size(); ++i)
    CHECK(back.kernel_row()[i] == doctest::Approx(src.kernel_row()[i]).epsilon(1e-15));

  write_text_atomic(side.string(),
                    "{\"n\":1,\"K\":4,\"form\":\"sideways\",\"gamma\":1.0,\"epsilon\":0.0}");
  CHECK_THROWS(read_kernel_operator(data.string(), side.string()));
  std::filesystem::remove(data);
  std::filesystem::remove(side);
}

TEST_CASE("experiment rows serialize with the fixed header") {
  CHECK(csv_header() ==
        "experiment,n,K,m,gamma,s_or_xi_or_lambda,measurement,envelope,fitted_slope,seed");
  CsvRow row;
  row.experiment = "shifted-t1";
  row.n = 1;
  row.K = 10;
  row.m = 1;
  row.gamma = 1.0;
  row.param = 3.0;
  row.measurement = 0.125;
  row.envelope = 0.5;
  row.fitted_slope = -1.0;
  row.seed = 42;
  const std::string text = to_csv({row});
  CHECK(text.find("shifted-t1,1,10,1,1,3,0.125,0.5,-1,42") != std::string::npos);
}

TEST_CASE("atomic writes leave the final file and no temporary") {
  const auto path = tmp_path("czlab_atomic.txt");
  write_text_atomic(path.string(), "payload\n");
  CHECK(slurp(path) == "payload\n");
  bool leftover = false;
  for (const auto& e : std::filesystem::directory_iterator(path.parent_path())) {
    const std::string name = e.path().filename().string();
    if (name.rfind("czlab_atomic", 0) == 0 && name != "czlab_atomic.txt") leftover = true;
  }
  CHECK_FALSE(leftover);
  std::filesystem::remove(path);
}
