#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "wavelab/lagrangian.hpp"

using namespace wavelab;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("phi constants on the built-in sinks") {
  // beta is constant on the built-in cycles, so phi = 1/beta.
  SymbolModel p1 = SymbolModel::p1();
  for (const auto& c : find_limit_cycles(p1, 0.0)) {
    if (c.kind != CycleKind::SINK) continue;
    for (double v : solve_phi(p1, c)) CHECK(std::abs(v - 0.5) < 1e-8);
  }
  SymbolModel p2 = SymbolModel::p2();
  for (const auto& c : find_limit_cycles(p2, 0.0)) {
    if (c.kind != CycleKind::SINK) continue;
    for (double v : solve_phi(p2, c)) CHECK(std::abs(v - 2.0) < 1e-8);
  }
}

TEST_CASE("invariant density integrates to one and is flat on built-ins") {
  SymbolModel m = SymbolModel::p1();
  auto cycles = find_limit_cycles(m, 0.0);
  const auto& c = cycles.front();
  auto mu = invariant_density(c);
  REQUIRE(mu.size() == c.points.size());
  // The cycle moves at unit speed in x2, so mu is the constant 1/(2 pi).
  for (double v : mu) CHECK(v == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-6));
  double integral = 0.0;
  const double dtau = c.period / (double(mu.size()) - 1.0);
  for (size_t i = 0; i + 1 < mu.size(); ++i) integral += 0.5 * (mu[i] + mu[i + 1]) * dtau;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("plus slice geometry for p1") {
  SymbolModel m = SymbolModel::p1();
  LagrangianSlice slice = build_slice(m, 0.0, SliceSign::PLUS);
  REQUIRE(slice.components.size() == 2);
  for (const auto& comp : slice.components) {
    REQUIRE(comp.conormal.has_value());
    CHECK(comp.cycle.kind == CycleKind::SINK);
    if (comp.conormal->xi1_sign > 0)
      CHECK(std::abs(comp.conormal->x1_c + pi / 2) < 1e-6);
    else
      CHECK(std::abs(comp.conormal->x1_c - pi / 2) < 1e-6);
    for (double v : comp.phi) CHECK(v > 0.0);
  }
}

TEST_CASE("minus slice mirrors the signs") {
  SymbolModel m = SymbolModel::p1();
  LagrangianSlice slice = build_slice(m, 0.0, SliceSign::MINUS);
  REQUIRE(slice.components.size() == 2);
  for (const auto& comp : slice.components) {
    CHECK(comp.cycle.kind == CycleKind::SOURCE);
    REQUIRE(comp.conormal.has_value());
    if (comp.conormal->xi1_sign > 0)
      CHECK(std::abs(comp.conormal->x1_c - pi / 2) < 1e-6);
    else
      CHECK(std::abs(comp.conormal->x1_c + pi / 2) < 1e-6);
  }
}

TEST_CASE("phi positivity across omega") {
  SymbolModel m = SymbolModel::p2();
  for (double w : {-0.2, -0.1, 0.0, 0.1, 0.2}) {
    LagrangianSlice slice = build_slice(m, w, SliceSign::PLUS);
    REQUIRE(!slice.components.empty());
    for (const auto& comp : slice.components)
      for (double v : comp.phi) CHECK(v > 0.0);
  }
}

TEST_CASE("phase derivative identity") {
  for (const auto& m : {SymbolModel::p1(), SymbolModel::p2()}) {
    for (double w : {-0.2, -0.1, 0.0, 0.1, 0.2}) {
      LagrangianSlice slice = build_slice(m, w, SliceSign::PLUS);
      for (const auto& comp : slice.components) {
        auto rep = phase_derivative_check(m, w, comp);
        CHECK(rep.rel_err <= 1e-3);
      }
    }
  }
}

TEST_CASE("slice json parses") {
  SymbolModel m = SymbolModel::p1();
  LagrangianSlice slice = build_slice(m, 0.1, SliceSign::PLUS);
  auto j = nlohmann::json::parse(slice_to_json(m, slice));
  CHECK(j["omega"] == 0.1);
  CHECK(j["components"].size() == slice.components.size());
  CHECK(j["components"][0].contains("phi_min"));
  CHECK(j["components"][0].contains("phi_max"));
}
