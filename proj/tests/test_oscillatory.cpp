#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wavelab/errors.hpp"
#include "wavelab/oscillatory.hpp"

using namespace wavelab;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("model accessors") {
  OscillatoryModel m = OscillatoryModel::attracting();
  CHECK(m.c(0.0) == doctest::Approx(-pi / 2));
  CHECK(m.c_prime(0.0) == doctest::Approx(-0.5));
  CHECK(m.dF_sign() == -1);
  CHECK(m.phi(0.0) == doctest::Approx(1.0));
  CHECK(m.phi(0.31) == 0.0);
  CHECK(m.a(0.0, 0.5) == 0.0);  // cut off below xi = 1
  CHECK(m.a(0.0, 64.0) ==
        doctest::Approx(std::pow(1.0 + 64.0 * 64.0, -0.25)).epsilon(1e-12));

  OscillatoryModel r = OscillatoryModel::repelling();
  CHECK(r.dF_sign() == +1);
}

TEST_CASE("model json") {
  auto m = OscillatoryModel::from_json_text(
      R"({"c": "builtin:p1", "symbol_order": -0.5, "phi_delta": 0.3})");
  CHECK(m.builtin_c);
  auto p = OscillatoryModel::from_json_text(R"({"c": [-1.0, 2.0, 0.5]})");
  CHECK(p.c(1.0) == doctest::Approx(1.5));
  CHECK(p.c_prime(1.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(OscillatoryModel::from_json_text("{bad"), format_error);
  CHECK_THROWS_AS(OscillatoryModel::from_json_text(R"({"c": 3})"), format_error);
}

TEST_CASE("trivial J values") {
  OscillatoryModel m = OscillatoryModel::attracting();
  CHECK(std::abs(eval_J(m, 0.0, 16.0)) == 0.0);
  CHECK_THROWS_AS(eval_J(m, -1.0, 16.0), parameter_error);
}

TEST_CASE("leading term formula") {
  OscillatoryModel m = OscillatoryModel::attracting();
  const cplx lead = leading_term(m, 16.0);
  CHECK(std::abs(lead) ==
        doctest::Approx(2.0 * pi * std::pow(257.0, -0.25)).epsilon(1e-12));
  CHECK(std::abs(std::abs(lead) - 6.2832 * 0.24976) < 1e-3);
  CHECK(std::abs(leading_term(OscillatoryModel::repelling(), 16.0)) == 0.0);
}

TEST_CASE("J approaches the leading term at saturation") {
  OscillatoryModel m = OscillatoryModel::attracting();
  const double xi = 64.0;
  const cplx J = eval_J(m, 10.0 * xi, xi);
  const cplx lead = leading_term(m, xi);
  CHECK(std::abs(J - lead) / std::abs(lead) < 0.15);
}

TEST_CASE("conjugation symmetry") {
  // With phi even and a real, reflecting the phase c(w) -> -c(-w)
  // conjugates J.
  OscillatoryModel m;
  m.c_coeffs = {-pi / 2, -0.5, 0.2};
  OscillatoryModel r;
  r.c_coeffs = {pi / 2, -0.5, -0.2};
  const cplx a = eval_J(m, 37.0, 32.0);
  const cplx b = eval_J(r, 37.0, 32.0);
  CHECK(std::abs(b - std::conj(a)) < 1e-10);
}

TEST_CASE("time-difference triangle bound") {
  OscillatoryModel m = OscillatoryModel::attracting();
  const double xi = 32.0, t1 = 50.0, t2 = 80.0;
  const cplx d = eval_J(m, t2, xi) - eval_J(m, t1, xi);
  auto g_t = [](double t, double w) {
    const double z = t * w / 2.0;
    const double sinc = std::abs(z) < 1e-8 ? 1.0 : std::sin(z) / z;
    return t * sinc * std::exp(cplx(0.0, -z));
  };
  const double bound = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double w) {
        return m.phi(w) * m.a(w, xi) * std::abs(g_t(t2, w) - g_t(t1, w));
      },
      -m.phi_delta, m.phi_delta, 15, 1e-12);
  CHECK(std::abs(d) <= bound + 1e-9);
}

TEST_CASE("uniform band in t") {
  OscillatoryModel m = OscillatoryModel::attracting();
  std::vector<double> vals;
  for (double xi : {8.0, 32.0, 128.0})
    for (double mult : {0.5, 1.0, 2.0, 4.0}) {
      const double v =
          std::abs(eval_J(m, mult * xi, xi)) * std::pow(1.0 + xi * xi, 0.2);
      vals.push_back(v);
    }
  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  CHECK(sorted.back() <= 3.0 * median);
}

TEST_CASE("stationary phase dichotomy (small list)") {
  std::vector<double> xi = {8.0, 16.0, 32.0, 64.0};
  auto att = stationary_phase_compare(OscillatoryModel::attracting(), xi);
  CHECK(att.attracting);
  CHECK(att.slope <= -1.2);
  CHECK(att.pass);
  auto rep = stationary_phase_compare(OscillatoryModel::repelling(), xi);
  CHECK_FALSE(rep.attracting);
  CHECK(rep.pass);
}

TEST_CASE("log scaling basics") {
  auto zero = log_scaling_L([](double) { return 0.0; },
                            [](double, double) { return 0.0; },
                            {1.0 / 16, 1.0 / 64}, 2.0, 6.0);
  for (const auto& r : zero) CHECK(std::abs(r.L) == 0.0);

  // Odd model: L(h) ~ i sqrt(pi) psi(0) h at small h (the log upper bound
  // is not attained pointwise), so |L|/h stabilizes.
  auto psi = [](double s) { return s < 1.0 ? 1.0 : (s < 2.0 ? 1.0 - (s - 1.0) : 0.0); };
  auto odd = log_scaling_L(
      [](double) { return 0.0; },
      [&](double s, double w) { return psi(s) * w * std::exp(-w * w); },
      {1.0 / 256, 1.0 / 512}, 2.0, 6.0);
  for (const auto& r : odd) CHECK(std::abs(r.L) / r.h ==
                                  doctest::Approx(std::sqrt(pi)).epsilon(0.05));
}
