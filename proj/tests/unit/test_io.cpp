#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "qcc/errors.hpp"
#include "qcc/io.hpp"

using namespace qcc;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / "qcc_unit_io" / name;
}

}  // namespace

TEST_CASE("doubles round-trip with 17 significant digits") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("csv parsing") {
  const auto t = io::parse_csv("a,b\r\n1,2\n\n3,4\n");
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][t.column("b")] == "4");
  CHECK_THROWS_AS(t.column("c"), InputError);
  CHECK_THROWS_AS(io::parse_csv("a,b\n1\n"), InputError);
  CHECK_THROWS_AS(io::parse_csv(""), InputError);
}

TEST_CASE("artifact writers") {
  const auto traj = integrate(test::pe(0.0), {1, 0, 0, 0}, 0.01, 1.0, 10);
  const auto path = scratch("traj.csv");
  io::write_trajectory_csv(path, traj, 2);
  const std::string text = slurp(path);
  CHECK(text.rfind("t,q1,p1,q2,p2\n0,1,0,0,0\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  const auto table = io::parse_csv(text);
  CHECK(table.rows.size() == 6);

  SectionPoints sec{{{1.0, 2.0}}, {3.5}};
  io::write_section_csv(scratch("sec.csv"), sec);
  CHECK(slurp(scratch("sec.csv")) == "t_cross,q1,p1\n3.5,1,2\n");

  SpectralLines lines{{{1.0, 0.5}}, {{2.0, 0.25}}};
  io::write_lines_csv(scratch("lines.csv"), lines);
  CHECK(slurp(scratch("lines.csv")) == "observable,omega,weight\nq1,1,0.5\nq2,2,0.25\n");

  EntropyCurve curve{{0.0, 0.5}, {0.0, 0.25}, 0.25, 0.5};
  io::write_entropy_curve_csv(scratch("curve.csv"), curve);
  CHECK(slurp(scratch("curve.csv")) == "t,S_V\n0,0\n0.5,0.25\n");

  DensitySpectrum spec{{{1.5, 0.75}}, 1.6, 1.0};
  io::write_density_spectrum_csv(scratch("rho.csv"), spec);
  CHECK(slurp(scratch("rho.csv")) == "E_n,rho_nn\n1.5,0.75\n");

  PowerSpectrum ps;
  ps.frequencies = {0.0, 1.0, 2.0};
  ps.intensities = {1.0, 2.0, 3.0};
  io::write_spectrum_csv(scratch("spec.csv"), ps, 1.5);
  CHECK(slurp(scratch("spec.csv")) == "omega,intensity\n0,1\n1,2\n");

  CHECK_THROWS_AS(io::write_csv(scratch("bad.csv"), {"a", "b"}, {{"1"}}), InputError);
}
