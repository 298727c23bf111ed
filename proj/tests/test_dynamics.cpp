#include <doctest.h>

#include <cmath>
#include <random>

#include "sirs/dynamics.hpp"
#include "sirs/hopf.hpp"

using namespace sirs;

namespace {

const EquilibriumReport* first_focus(const std::vector<EquilibriumReport>& eq) {
  for (const auto& e : eq)
    if (is_focus(e.kind)) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("an equilibrium does not drift") {
  const ModelParams m = validate_params(1, 5.417, 7.195, 0.75, 2);
  const auto eq = endemic_equilibria(m);
  REQUIRE_FALSE(eq.empty());
  for (const auto& e : eq) {
    const Trajectory tr = integrate(m, {e.z, e.y}, 100);
    for (const auto& s : tr.states) CHECK(std::hypot(s.x - e.z, s.y - e.y) <= 1e-9);
  }
}

TEST_CASE("k = 1 orbits settle on the endemic equilibrium") {
  const ModelParams m = validate_params(1, 2, 1.5, 1, 1);
  const Trajectory tr = integrate(m, {0.1, 0.05}, 300);
  CHECK(tr.states.back().x == doctest::Approx(0.625).epsilon(1e-7));
  CHECK(tr.states.back().y == doctest::Approx(0.625).epsilon(1e-7));
}

TEST_CASE("uniform sampling and input validation") {
  const ModelParams m = validate_params(1, 2, 1.5, 1, 2);
  const Trajectory tr = integrate(m, {0.5, 0.2}, 10, 1e-12, 1e-14, 0.5);
  CHECK(tr.t.size() == 21);
  CHECK(tr.t.back() == doctest::Approx(10));
  CHECK_THROWS_AS(integrate(m, {3, 0}, 1), DomainError);
  CHECK_THROWS_AS(integrate(m, {0.5, 0.2}, 1, 1e-15), DomainError);
  CHECK_THROWS_AS(integrate(m, {0.5, 0.2}, -1), DomainError);
}

TEST_CASE("forward invariance of the region") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  for (int set = 0; set < 5; ++set) {
    const double eta = 0.3 + 2 * u(rng);
    const ModelParams m = validate_params(0.2 + 4 * u(rng), 1 + 5 * u(rng), eta + 0.1 + 3 * u(rng), eta,
                                          0.5 + 3 * u(rng));
    const double xm = m.lambda0();
    for (int i = 0; i < 10; ++i) {
      const double x = xm * u(rng);
      const double y = (xm - x) * u(rng);
      const Trajectory tr = integrate(m, {x, y}, 50);
      for (const auto& s : tr.states) CHECK(in_region(m, s, kRegionSlack));
    }
  }
}

TEST_CASE("return map near an unstable weak focus") {
  const HopfLocus h = hopf_locus(1, 1, 1, 2);
  const ModelParams m = hopf_params(h);
  const Section s = make_section(m, 1);
  CHECK(s.linear_period == doctest::Approx(2 * M_PI).epsilon(1e-9));
  const double r = 1e-2;
  const double P = poincare_return(m, s, r);
  CHECK(P > r);
  // self-convergence under a tolerance change
  const double P_loose = poincare_return(m, s, r, {1e-10, 1e4});
  CHECK(std::abs(P - P_loose) < 1e-8 * r);
  // two returns equal one return started at the first image
  const double P2 = poincare_return(m, s, P);
  CHECK(P2 > P);
}

TEST_CASE("panel b has one repelling cycle and serial equals parallel") {
  const ModelParams m = validate_params(1, 5.417, 7.195, 0.75, 2);
  const auto eq = endemic_equilibria(m);
  const EquilibriumReport* f = first_focus(eq);
  REQUIRE(f);
  CycleOptions par, ser;
  ser.exec = Execution::Serial;
  const CycleSearch a = find_limit_cycles(m, f->z, par);
  const CycleSearch b = find_limit_cycles(m, f->z, ser);
  REQUIRE(a.cycles.size() == 1);
  CHECK(a.cycles[0].stability == CycleStability::Repelling);
  CHECK(a.alternating);
  REQUIRE(a.d.size() == b.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i) CHECK(a.d[i] == b.d[i]);
  CHECK(a.cycles[0].radius == b.cycles[0].radius);
  // the cycle is a fixed point of the return map
  CHECK(std::abs(poincare_return(m, a.section, a.cycles[0].radius) - a.cycles[0].radius) <= 1e-9);
}

TEST_CASE("a small attracting cycle appears just past a supercritical crossing") {
  // trace vanishes near lambda0 = 6.01 with a negative first focal value
  const ModelParams base = validate_params(1, 6.01, 6, 2.01, 2);
  double prev = 0;
  for (double off : {4e-3, 2e-3, 1e-3}) {
    const ModelParams m = with_parameter(base, "lambda0", 6.01 - off);
    const auto eq = endemic_equilibria(m);
    const EquilibriumReport* f = first_focus(eq);
    REQUIRE(f);
    CHECK(f->trace > 0);
    const CycleSearch cs = find_limit_cycles(m, f->z);
    REQUIRE(cs.cycles.size() >= 1);
    CHECK(cs.cycles[0].stability == CycleStability::Attracting);
    if (prev > 0) CHECK(cs.cycles[0].amplitude < prev);
    prev = cs.cycles[0].amplitude;
  }
}

TEST_CASE("sublinear incidence has no cycles") {
  const ModelParams m = validate_params(2, 3, 2, 1, 0.5);
  for (const auto& e : endemic_equilibria(m)) {
    if (!is_focus(e.kind)) continue;
    CHECK(find_limit_cycles(m, e.z).cycles.empty());
  }
  const Trajectory tr = integrate(m, {0.3, 0.1}, 300);
  const auto eq = find_endemic_equilibria(m);
  REQUIRE(eq.size() == 1);
  CHECK(tr.states.back().x == doctest::Approx(eq[0].z).epsilon(1e-6));
}

TEST_CASE("a gamma sweep brackets the trace sign change") {
  const ModelParams base = hopf_params(hopf_locus(1, 1, 1, 2));
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(5.9 + 0.02 * i);
  SweepOptions opt;
  opt.find_cycles = false;
  const SweepResult r = bifurcation_sweep(base, "gamma", grid, opt);
  int hopf = 0;
  for (const auto& e : r.events)
    if (e.kind == SweepEventKind::Hopf) {
      ++hopf;
      CHECK(std::min(e.a, e.b) <= 6.0);
      CHECK(std::max(e.a, e.b) >= 6.0);
      CHECK(std::abs(e.b - e.a) <= 0.02 + 1e-12);
    }
  CHECK(hopf == 1);
  CHECK_THROWS_AS(bifurcation_sweep(base, "gamma", {6.0, 5.9, 6.1}, opt), DomainError);
  CHECK_THROWS_AS(with_parameter(base, "mu", 1), DomainError);
}
