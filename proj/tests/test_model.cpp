#include <doctest.h>

#include <cmath>
#include <random>

#include "sirs/model.hpp"

using namespace sirs;

TEST_CASE("validate_params accepts members of the parameter space") {
  const ModelParams m = validate_params(1, 2, 1.5, 1, 2);
  CHECK(m.r0() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(m.r0() == m.lambda0() / m.gamma());
}

TEST_CASE("validate_params names the violated inequality") {
  auto message = [](auto fn) {
    try {
      fn();
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message([] { validate_params(1, 2, 1.0, 1, 2); }).find("gamma <= eta") != std::string::npos);
  CHECK(message([] { validate_params(0, 2, 1.5, 1, 2); }).find("p <= 0") != std::string::npos);
  CHECK(message([] { validate_params(1, 0, 1.5, 1, 2); }).find("lambda0 <= 0") != std::string::npos);
  CHECK(message([] { validate_params(1, 2, 1.5, 0, 2); }).find("eta <= 0") != std::string::npos);
  CHECK(message([] { validate_params(1, 2, 1.5, 1, 0); }).find("k <= 0") != std::string::npos);
  CHECK_THROWS_AS(validate_params(NAN, 2, 1.5, 1, 2), DomainError);
}

TEST_CASE("reduce_original_params") {
  SUBCASE("unit scale") {
    const ModelParams m = reduce_original_params({1, 1, 1, 0, 1, 1, 2});
    CHECK(m.p() == doctest::Approx(1));
    CHECK(m.lambda0() == doctest::Approx(1));
    CHECK(m.gamma() == doctest::Approx(2));
    CHECK(m.eta() == doctest::Approx(1));
  }
  SUBCASE("nontrivial scales") {
    const ModelParams m = reduce_original_params({2, 1, 2, 1, 1, 3, 2});
    CHECK(m.p() == doctest::Approx(3));
    CHECK(m.lambda0() == doctest::Approx(2));
    CHECK(m.gamma() == doctest::Approx(1));
    CHECK(m.eta() == doctest::Approx(0.5));
  }
  SUBCASE("gamma - eta = d/(d+delta) for random originals") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 5);
    for (int i = 0; i < 200; ++i) {
      OriginalParams o{u(rng), u(rng), u(rng), u(rng) - 0.05, u(rng), u(rng), u(rng)};
      const ModelParams m = reduce_original_params(o);
      CHECK(m.gamma() - m.eta() == doctest::Approx(o.d / (o.d + o.delta)).epsilon(1e-12));
    }
  }
  SUBCASE("invalid originals are rejected") {
    CHECK_THROWS_AS(reduce_original_params({1, 1, 1, -0.1, 1, 1, 2}), DomainError);
    CHECK_THROWS_AS(reduce_original_params({1, 0, 1, 0, 1, 1, 2}), DomainError);
  }
}

TEST_CASE("basic reproduction number") {
  CHECK(basic_reproduction_number(validate_params(1, 2, 2, 1, 2)) == 1.0);
  CHECK(basic_reproduction_number(validate_params(1, 5.106, 5.24, 2.01, 2)) ==
        doctest::Approx(0.974427).epsilon(1e-6));
  CHECK(basic_reproduction_number(validate_params(1, 6.02, 6, 2.01, 2)) == doctest::Approx(1.003333).epsilon(1e-6));
}

TEST_CASE("vector field values") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 4);
  for (int i = 0; i < 50; ++i) {
    const double eta = u(rng);
    const ModelParams m = validate_params(u(rng), u(rng), eta + u(rng), eta, u(rng));
    const Vec2 f = vector_field(m, {0, 0});
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 0.0);
  }
  const Vec2 a = vector_field(validate_params(1, 2, 1.5, 1, 1), {0.625, 0.625});
  CHECK(std::abs(a[0]) < 1e-15);
  CHECK(std::abs(a[1]) < 1e-15);
  const Vec2 b = vector_field(validate_params(1, 2, 1.5, 1, 2), {1, 0});
  CHECK(b[0] == doctest::Approx(0.5));
  CHECK(b[1] == doctest::Approx(1));
  // continuous extension at x = 0 for fractional k
  CHECK(incidence_factor(2, 0.5, 0) == 0.0);
  CHECK(incidence_factor(2, 0.5, 1e-12) == doctest::Approx(1e-12 + 2e-6));
}

TEST_CASE("region predicate") {
  const ModelParams m = validate_params(1, 2, 1.5, 1, 2);
  CHECK(in_region(m, {1, 1}));
  CHECK_FALSE(in_region(m, {1.5, 1}));
  CHECK_FALSE(in_region(m, {-1e-8, 0}));
  CHECK(in_region(m, {-1e-10, 0}, 1e-9));
}

TEST_CASE("taylor expansion") {
  SUBCASE("constant terms vanish at an equilibrium") {
    const ModelParams m = validate_params(1, 2, 1.5, 1, 1);
    const auto [f1, f2] = taylor_expand(m, {0.625, 0.625});
    CHECK(std::abs(static_cast<double>(f1(0, 0))) < 1e-15);
    CHECK(std::abs(static_cast<double>(f2(0, 0))) < 1e-15);
  }
  SUBCASE("integer k = 2 gives an exact cubic") {
    const ModelParams m = validate_params(1.3, 2, 1.5, 1, 2);
    const auto [f1, f2] = taylor_expand(m, {0.4, 0.3});
    for (int d = 4; d <= 9; ++d)
      for (int j = 0; j <= d; ++j) {
        CHECK(static_cast<double>(f1(d - j, j)) == 0.0);
        CHECK(static_cast<double>(f2(d - j, j)) == 0.0);
      }
  }
  SUBCASE("k = 2.5: X^2 coefficient matches a finite-difference second derivative") {
    const double p = 0.7;
    const ModelParams m = validate_params(p, 3, 2, 1, 2.5);
    const State c{1, 0.2};
    const auto [f1, f2] = taylor_expand(m, c);
    // p x^k contributes p k (k-1)/2 = 1.875 p to the X^2 coefficient of g
    const double g2 = 1.875 * p;
    const double rest = m.lambda0() - c.x - c.y;
    const double g1 = 1 + p * 2.5;
    CHECK(static_cast<double>(f1(2, 0)) == doctest::Approx(g2 * rest - g1).epsilon(1e-13));
    const double h = 1e-3;
    auto fx = [&](double x) { return vector_field(m, {x, c.y})[0]; };
    const double fd = (fx(c.x + h) - 2 * fx(c.x) + fx(c.x - h)) / (h * h) / 2;
    CHECK(static_cast<double>(f1(2, 0)) == doctest::Approx(fd).epsilon(1e-5));
  }
  SUBCASE("degree 9 reproduces the field at radius 0.01 x") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 3);
    for (int i = 0; i < 40; ++i) {
      const double eta = u(rng);
      const ModelParams m = validate_params(u(rng), 4 + u(rng), eta + u(rng), eta, 0.3 + u(rng));
      const State c{u(rng) * 0.5, u(rng) * 0.5};
      const auto [f1, f2] = taylor_expand(m, c);
      const double X = 0.01 * c.x * 0.6, Y = -0.01 * c.x * 0.8;
      const Vec2 exact = vector_field(m, {c.x + X, c.y + Y});
      const double s1 = static_cast<double>(f1.evaluate(X, Y)), s2 = static_cast<double>(f2.evaluate(X, Y));
      const double scale = std::max(1.0, std::abs(exact[0]));
      CHECK(std::abs(s1 - exact[0]) <= 1e-8 * scale);
      CHECK(std::abs(s2 - exact[1]) <= 1e-8 * std::max(1.0, std::abs(exact[1])));
    }
  }
  SUBCASE("domain errors") {
    const ModelParams m = validate_params(1, 2, 1.5, 1, 2);
    CHECK_THROWS_AS(taylor_expand(m, {0, 0.1}), DomainError);
    CHECK_THROWS_AS(taylor_expand(m, {0.5, 0.1}, 1), DomainError);
    CHECK_THROWS_AS(taylor_expand(m, {0.5, 0.1}, 10), DomainError);
  }
}
