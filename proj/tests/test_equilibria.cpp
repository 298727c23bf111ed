#include <doctest.h>

#include <cmath>
#include <random>

#include "sirs/equilibria.hpp"
#include "sirs/model.hpp"

using namespace sirs;

namespace {

// dense sign scan of H over (0, xm) with bisection polish
std::vector<double> scan_roots(const ModelParams& m, int n) {
  const double xm = m.lambda0() / (1 + m.eta());
  std::vector<double> roots;
  auto H = [&](double x) { return evaluate_H(m, x); };
  double a = xm / n, ha = H(a);
  for (int i = 2; i <= n; ++i) {
    const double b = xm * i / n, hb = H(b);
    if ((ha < 0) != (hb < 0)) {
      double lo = a, hi = b, hlo = ha;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * xm; ++it) {
        const double mid = 0.5 * (lo + hi), hm = H(mid);
        if ((hm < 0) == (hlo < 0))
          lo = mid, hlo = hm;
        else
          hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a = b, ha = hb;
  }
  return roots;
}

}  // namespace

TEST_CASE("H at the boundary abscissa and the k > 1 limit") {
  const ModelParams m = validate_params(1.7, 3, 2.5, 0.8, 2.4);
  CHECK(evaluate_H(m, m.lambda0() / (1 + m.eta())) == doctest::Approx(-1 / m.r0()).epsilon(1e-14));
  CHECK(evaluate_H(m, 1e-12) == doctest::Approx(1 - 1 / m.r0()).epsilon(1e-9));
}

TEST_CASE("critical structure") {
  SUBCASE("k = 3 abscissa of the H' maximum") {
    const CriticalStructure cs = critical_structure(validate_params(1, 4, 4.5, 1, 3));
    CHECK(cs.regime == Regime::KAboveTwo);
    REQUIRE(cs.x_bar_c);
    CHECK(*cs.x_bar_c == doctest::Approx(2.0 / 3));
  }
  SUBCASE("k > 2 with negative H'(x_bar_c) has no turning points") {
    const CriticalStructure cs = critical_structure(validate_params(0.01, 4, 4.5, 1, 3));
    CHECK(*cs.hprime_at_xbar_c < 0);
    CHECK_FALSE(cs.x01);
    CHECK_FALSE(cs.x02);
  }
  SUBCASE("1 < k < 2 has a single turning point") {
    const CriticalStructure cs = critical_structure(validate_params(1, 4, 4.5, 1, 1.5));
    CHECK(cs.regime == Regime::KBetweenOneAndTwo);
    REQUIRE(cs.x_c);
    CHECK(std::abs(evaluate_H(validate_params(1, 4, 4.5, 1, 1.5), *cs.x_c, 1)) < 1e-10);
  }
}

TEST_CASE("closed-form roots") {
  SUBCASE("k = 1") {
    const auto r = find_endemic_equilibria(validate_params(1, 2, 1.5, 1, 1));
    REQUIRE(r.size() == 1);
    CHECK(r[0].z == doctest::Approx(0.625).epsilon(1e-14));
    CHECK(r[0].y == doctest::Approx(0.625).epsilon(1e-14));
  }
  SUBCASE("k = 2 two roots") {
    const auto r = find_endemic_equilibria(validate_params(2, 2, 2.2, 1, 2));
    REQUIRE(r.size() == 2);
    CHECK(r[0].z == doctest::Approx((2 - std::sqrt(0.8)) / 8).epsilon(1e-13));
    CHECK(r[1].z == doctest::Approx((2 + std::sqrt(0.8)) / 8).epsilon(1e-13));
  }
}

TEST_CASE("root count and location agree with a sign scan") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (double k : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    for (int i = 0; i < 30; ++i) {
      const double eta = 0.2 + 3 * u(rng);
      const double lambda0 = 0.5 + 6 * u(rng);
      const double gamma = eta + 0.05 + 6 * u(rng);
      const ModelParams m = validate_params(0.1 + 8 * u(rng), lambda0, gamma, eta, k);
      const auto got = find_endemic_equilibria(m);
      const auto want = scan_roots(m, 100000);
      CHECK(got.size() <= 3);
      // the scan can miss tangencies but never invents roots
      CHECK(got.size() >= want.size());
      if (got.size() == want.size())
        for (std::size_t j = 0; j < got.size(); ++j) CHECK(std::abs(got[j].z - want[j]) < 1e-8);
    }
  }
}

TEST_CASE("origin classification") {
  CHECK(classify_origin(validate_params(1, 1, 2, 1, 2)) == EquilibriumKind::DiseaseFreeStableNode);
  CHECK(classify_origin(validate_params(1, 3, 2, 1, 2)) == EquilibriumKind::DiseaseFreeSaddle);
  CHECK(classify_origin(validate_params(1, 2, 2, 1, 2)) == EquilibriumKind::DiseaseFreeSaddleNode);
}

TEST_CASE("interior classification") {
  SUBCASE("the smaller of two k = 2 roots is a saddle") {
    const auto r = endemic_equilibria(validate_params(2, 2, 2.2, 1, 2));
    REQUIRE(r.size() == 2);
    CHECK(r[0].kind == EquilibriumKind::Saddle);
    CHECK(r[0].det < 0);
  }
  SUBCASE("a point on the trace-zero locus is a weak focus candidate") {
    // z = p = eta = 1, k = 2 gives lambda0 = 5, gamma = 6
    const auto r = endemic_equilibria(validate_params(1, 5, 6, 1, 2));
    bool found = false;
    for (const auto& e : r)
      if (std::abs(e.z - 1) < 1e-10) {
        found = true;
        CHECK(e.kind == EquilibriumKind::WeakFocusCandidate);
        CHECK(e.det == doctest::Approx(1).epsilon(1e-10));
        CHECK(std::abs(e.trace) < 1e-10);
      }
    CHECK(found);
  }
}

TEST_CASE("det identity and finite-difference Jacobian") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 60; ++i) {
    const double eta = 0.2 + 2 * u(rng);
    const ModelParams m = validate_params(0.2 + 4 * u(rng), 1 + 5 * u(rng), eta + 0.1 + 4 * u(rng), eta,
                                          1.1 + 3 * u(rng));
    for (const auto& e : endemic_equilibria(m)) {
      ++checked;
      const double H = evaluate_H(m, e.z), Hp = evaluate_H(m, e.z, 1);
      CHECK(e.det == doctest::Approx(-m.lambda0() * (H + e.z * Hp)).epsilon(1e-9).scale(1));
      // centered differences of the field
      const double h = 1e-6 * e.z;
      auto f = [&](double x, double y) { return vector_field(m, {x, y}); };
      const Vec2 fxp = f(e.z + h, e.y), fxm = f(e.z - h, e.y), fyp = f(e.z, e.y + h), fym = f(e.z, e.y - h);
      const double a = (fxp[0] - fxm[0]) / (2 * h), b = (fyp[0] - fym[0]) / (2 * h);
      const double c = (fxp[1] - fxm[1]) / (2 * h), d = (fyp[1] - fym[1]) / (2 * h);
      CHECK(a + d == doctest::Approx(e.trace).epsilon(1e-6).scale(1));
      CHECK(a * d - b * c == doctest::Approx(e.det).epsilon(1e-6).scale(1));
      if (e.det < -1e-6) CHECK(e.kind == EquilibriumKind::Saddle);
      if (e.det > 1e-6 && (a + d) * (a + d) < 4 * (a * d - b * c) - 1e-6 && std::abs(a + d) > 1e-6)
        CHECK(is_focus(e.kind));
    }
  }
  CHECK(checked > 20);
}
