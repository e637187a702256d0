#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wavelab/field.hpp"
#include "wavelab/field_io.hpp"
#include "wavelab/smooth.hpp"

using namespace wavelab;

TEST_CASE("grid validation and index maps") {
  CHECK_THROWS_AS(TorusGrid(6), parameter_error);
  CHECK_THROWS_AS(TorusGrid(15), parameter_error);
  TorusGrid g(16);
  CHECK(g.size() == 256);
  CHECK(g.freq(0) == 0);
  CHECK(g.freq(8) == -8);
  CHECK(g.freq(15) == -1);
  for (int k = -8; k < 8; ++k) CHECK(g.freq(g.bin(k)) == k);
  CHECK(japanese_bracket(0, 0) == doctest::Approx(1.0));
  CHECK(japanese_bracket(3, 4) == doctest::Approx(std::sqrt(26.0)));
}

TEST_CASE("transform convention: single mode") {
  TorusGrid g(16);
  GridField u(g);
  for (int j1 = 0; j1 < g.n; ++j1)
    for (int j2 = 0; j2 < g.n; ++j2)
      u.at(j1, j2) = std::exp(cplx(0.0, 3.0 * g.x(j1) - 2.0 * g.x(j2)));
  to_spectral(u);
  CHECK(std::abs(u.coeff(3, -2) - 1.0) < 1e-13);
  double off = 0.0;
  for (int k1 = -8; k1 < 8; ++k1)
    for (int k2 = -8; k2 < 8; ++k2)
      if (k1 != 3 || k2 != -2) off = std::max(off, std::abs(u.coeff(k1, k2)));
  CHECK(off < 1e-13);
}

TEST_CASE("roundtrip and norms") {
  TorusGrid g(32);
  GridField u = make_bump(g, 1.0, 2.0, 0.7);
  GridField v = u;
  to_physical(v);
  double diff = 0.0;
  for (int i = 0; i < g.size(); ++i) diff = std::max(diff, std::abs(u.phys[i] - v.phys[i]));
  CHECK(diff < 1e-12);

  GridField m(g);
  m.coeff(3, 4) = 2.0;
  CHECK(sobolev_norm(m, {0.5}) ==
        doctest::Approx(2.0 * std::pow(26.0, 0.25)).epsilon(1e-12));
  CHECK(sobolev_norm(m, {0.0}) == doctest::Approx(2.0));
  CHECK(l2_norm(m.spec) == doctest::Approx(2.0));
}

TEST_CASE("bump properties") {
  TorusGrid g(64);
  CHECK_THROWS_AS(make_bump(g, 0.0, 0.0, 0.0), parameter_error);
  CHECK_THROWS_AS(make_bump(g, 0.0, 0.0, 2.0), parameter_error);
  GridField u = make_bump(g, -std::numbers::pi / 2, 0.0, 0.5);
  for (const auto& z : u.phys) {
    CHECK(z.imag() == 0.0);
    CHECK(z.real() > 0.0);
  }
  // Smooth: coefficients decay fast.
  CHECK(std::abs(u.coeff(20, 0)) < 1e-10 * std::abs(u.coeff(0, 0)));
}

TEST_CASE("non-finite input rejected") {
  TorusGrid g(16);
  GridField u(g);
  u.at(3, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(to_spectral(u), numerical_error);
}

TEST_CASE("zfld roundtrip") {
  TorusGrid g(16);
  GridField u = make_bump(g, 0.3, 5.1, 0.4);
  const std::string path = "test_field_tmp.zfld";
  write_field(u, path);
  GridField v = read_field(path);
  CHECK(v.grid.n == 16);
  for (int k1 = -8; k1 < 8; ++k1)
    for (int k2 = -8; k2 < 8; ++k2)
      CHECK(v.coeff(k1, k2) == u.coeff(k1, k2));
  // Byte-identical rewrite.
  write_field(v, path + "2");
  std::ifstream a(path, std::ios::binary), b(path + "2", std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), {});
  std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  std::remove(path.c_str());
  std::remove((path + "2").c_str());
}

TEST_CASE("zfld error paths") {
  const std::string path = "test_field_bad.zfld";
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOPE";
  }
  CHECK_THROWS_AS(read_field(path), format_error);
  {
    TorusGrid g(16);
    GridField u(g);
    write_field(u, path);
    std::error_code ec;
    std::filesystem::resize_file(path, 100, ec);
  }
  CHECK_THROWS_AS(read_field(path), format_error);
  std::remove(path.c_str());
}

TEST_CASE("smooth cutoffs") {
  CHECK(mollifier(0.0) == doctest::Approx(1.0));
  CHECK(mollifier(1.0) == 0.0);
  CHECK(mollifier(-1.5) == 0.0);
  CHECK(smoothstep(-0.1) == 0.0);
  CHECK(smoothstep(1.1) == 1.0);
  CHECK(smoothstep(0.3) < smoothstep(0.7));
  CHECK(plateau(0.1, 0.0, 0.4) == doctest::Approx(1.0));
  CHECK(plateau(0.5, 0.0, 0.4) == 0.0);
  CHECK(plateau(0.3, 0.0, 0.4) > 0.0);
  CHECK(circle_window(1.0, 4.0, 4.0) == 1.0);  // radius >= pi: constant
  CHECK(circle_window(0.1, 0.0, 0.5) > 0.0);
  CHECK(circle_window(1.0, 0.0, 0.5) == 0.0);
}
