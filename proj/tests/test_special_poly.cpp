#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "patmsts/special_poly.hpp"

using namespace patmsts;

namespace {
double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}
}  // namespace

TEST_CASE("factorial table") {
  CHECK(factorial(0) == 1.0);
  CHECK(factorial(1) == 1.0);
  CHECK(factorial(5) == 120.0);
  CHECK(factorial(12) == 479001600.0);
  CHECK(std::isfinite(factorial(170)));
  CHECK_THROWS_AS(factorial(-1), std::invalid_argument);
  CHECK_THROWS_AS(factorial(171), std::invalid_argument);
}

TEST_CASE("binomial, integer and generalized") {
  CHECK(binomial(5.0, 2) == doctest::Approx(10.0));
  CHECK(binomial(7.0, 0) == 1.0);
  CHECK(binomial(3.0, 5) == doctest::Approx(0.0));       // C(3,5) = 0
  CHECK(binomial(2.5, 2) == doctest::Approx(1.875));     // 2.5*1.5/2
  CHECK(binomial(-1.0, 3) == doctest::Approx(-1.0));     // (-1)^k
  CHECK_THROWS_AS(binomial(1.0, -1), std::invalid_argument);
}

TEST_CASE("jacobi low orders and endpoints") {
  CHECK(jacobi(0, 1.7, -0.3, 0.4) == 1.0);
  // P_1^(a,b)(x) = (a - b)/2 + (a + b + 2) x / 2
  CHECK(jacobi(1, 1.0, 0.0, 0.3) == doctest::Approx(0.5 + 1.5 * 0.3));
  CHECK(jacobi(1, 0.0, 1.0, 0.3) == doctest::Approx(-0.5 + 1.5 * 0.3));
  // At x = 1 the value is C(m + alpha, m).
  for (int m = 0; m <= 6; ++m)
    CHECK(rel(jacobi(m, 2.0, 0.0, 1.0), binomial(m + 2.0, m)) < 1e-13);
  // At x = -1 with beta = 0 the value is (-1)^m.
  for (int m = 0; m <= 6; ++m)
    CHECK(jacobi(m, 3.5, 0.0, -1.0) ==
          doctest::Approx(m % 2 ? -1.0 : 1.0).epsilon(1e-12));
}

TEST_CASE("legendre equals jacobi(0,0)") {
  const double x = 0.7;
  CHECK(legendre(3, x) == doctest::Approx((5 * x * x * x - 3 * x) / 2));
  for (int n = 0; n <= 8; ++n)
    CHECK(legendre(n, -0.35) == jacobi(n, 0.0, 0.0, -0.35));
}

TEST_CASE("laguerre low orders") {
  const double x = 1.3;
  CHECK(laguerre(0, x) == 1.0);
  CHECK(laguerre(1, x) == doctest::Approx(1.0 - x));
  CHECK(laguerre(2, x) == doctest::Approx(1.0 - 2 * x + x * x / 2));
  CHECK(laguerre(3, 0.5) ==
        doctest::Approx(1.0 - 1.5 + 3 * 0.25 / 2 - 0.125 / 6));
}

TEST_CASE("hermite2 explicit forms") {
  const cplx x{0.8, -0.4}, y{-0.3, 1.1};
  CHECK(hermite2(0, 0, x, y) == cplx{1.0, 0.0});
  CHECK(std::abs(hermite2(1, 1, x, y) - (x * y - 1.0)) < 1e-14);
  CHECK(std::abs(hermite2(2, 1, x, y) - (x * x * y - 2.0 * x)) < 1e-13);
  CHECK(std::abs(hermite2(0, 3, x, y) - y * y * y) < 1e-14);
  // Index symmetry H_{m,n}(x, y) = H_{n,m}(y, x).
  CHECK(std::abs(hermite2(3, 2, x, y) - hermite2(2, 3, y, x)) < 1e-12);
}

TEST_CASE("source_derivative hand cases") {
  SourceSpec sp;
  CHECK(source_derivative(sp) == cplx{1.0, 0.0});

  sp.o_tau = 1;
  sp.s_tau = cplx{0.3, -0.7};
  CHECK(std::abs(source_derivative(sp) - cplx{0.3, -0.7}) < 1e-15);

  // d^2/(dtau dt) exp(a tau t + s_tau tau + s_t t) = a + s_tau s_t.
  sp = SourceSpec{};
  sp.o_tau = sp.o_t = 1;
  sp.a = cplx{1.2, 0.0};
  sp.s_tau = cplx{0.5, 0.1};
  sp.s_t = cplx{-0.4, 0.9};
  CHECK(std::abs(source_derivative(sp) - (sp.a + sp.s_tau * sp.s_t)) < 1e-14);

  // d^2/(dtau dtau2) exp(b tau tau2 + ...) = b + s_tau s_tau2.
  sp = SourceSpec{};
  sp.o_tau = sp.o_tau2 = 1;
  sp.b = cplx{0.0, 2.0};
  sp.s_tau = cplx{1.0, 0.0};
  sp.s_tau2 = cplx{0.0, 0.5};
  CHECK(std::abs(source_derivative(sp) - (sp.b + sp.s_tau * sp.s_tau2)) <
        1e-14);

  // Source-free orders (1,1,1,1): a^2 + b^2.
  sp = SourceSpec{};
  sp.o_tau = sp.o_t = sp.o_tau2 = sp.o_t2 = 1;
  sp.a = 2.0;
  sp.b = 3.0;
  CHECK(source_derivative(sp).real() == doctest::Approx(13.0));
}

TEST_CASE("source_derivative source-swap symmetry") {
  std::mt19937 gen(123);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rc = [&] { return cplx(u(gen), u(gen)); };
  for (int i = 0; i < 20; ++i) {
    SourceSpec sp;
    sp.o_tau = sp.o_t = 2;
    sp.o_tau2 = sp.o_t2 = 3;
    sp.a = rc();
    sp.b = rc();
    sp.s_tau = rc();
    sp.s_t = rc();
    sp.s_tau2 = rc();
    sp.s_t2 = rc();
    SourceSpec sw = sp;
    std::swap(sw.s_tau, sw.s_t);
    std::swap(sw.s_tau2, sw.s_t2);
    CHECK(std::abs(source_derivative(sp) - source_derivative(sw)) <
          1e-12 * std::max(1.0, std::abs(source_derivative(sp))));
  }
}

TEST_CASE("source_derivative order guard") {
  SourceSpec sp;
  sp.o_tau = kMaxTotalOrder + 1;
  CHECK_THROWS_AS(source_derivative(sp), std::invalid_argument);
  sp.o_tau = -1;
  CHECK_THROWS_AS(source_derivative(sp), std::invalid_argument);
}

TEST_CASE("gen_quad_closed explicit values") {
  const double a = 1.3, b = 0.7;
  CHECK(gen_quad_closed(a, b, 0, 0) == 1.0);
  CHECK(gen_quad_closed(a, b, 0, 3) == doctest::Approx(6 * a * a * a));
  CHECK(gen_quad_closed(a, b, 2, 0) == doctest::Approx(2 * a * a));
  CHECK(gen_quad_closed(a, b, 1, 1) == doctest::Approx(a * a + b * b));
  CHECK(gen_quad_closed(a, b, 1, 2) ==
        doctest::Approx(2 * a * (a * a + 2 * b * b)));
  const double ups = a * a + b * b, om = a * a - b * b;
  CHECK(gen_quad_closed(a, b, 2, 2) ==
        doctest::Approx(2 * (3 * ups * ups - om * om)));
  // Symmetric in (m, n).
  CHECK(gen_quad_closed(a, b, 3, 1) == doctest::Approx(gen_quad_closed(a, b, 1, 3)));
}

TEST_CASE("gen_quad_closed degenerate pivot falls back cleanly") {
  // b^2 == a^2 defeats the Jacobi argument; the term-sum path takes over.
  const double a = 1.1;
  const double ups = 2 * a * a;
  CHECK(gen_quad_closed(a, a, 1, 1) == doctest::Approx(ups).epsilon(1e-13));
  CHECK(gen_quad_closed(a, a, 2, 2) ==
        doctest::Approx(2 * (3 * ups * ups)).epsilon(1e-13));
  // Continuity across the switch.
  const double near = gen_quad_closed(a, a + 1e-9, 2, 3);
  const double at = gen_quad_closed(a, a, 2, 3);
  CHECK(rel(near, at) < 1e-6);
}

TEST_CASE("four-index derivative values and symmetry") {
  const double b1 = 1.4, b2 = 0.6;
  CHECK(n4(0, 1, 0, 1, b1, b2) == doctest::Approx(b2));
  CHECK(n4(1, 0, 2, 1, b1, b2) == doctest::Approx(2 * b1 * b2));
  CHECK(n4(0, 1, 1, 2, b1, b2) == doctest::Approx(2 * b1 * b2));
  CHECK(n4(1, 2, 1, 2, b1, b2) ==
        doctest::Approx(2 * b2 * (2 * b1 * b1 + b2 * b2)));
  CHECK(n4(2, 1, 2, 1, b1, b2) ==
        doctest::Approx(2 * b2 * (2 * b1 * b1 + b2 * b2)));
  // Violating the pairing constraint gives exactly zero.
  CHECK(n4(1, 0, 0, 0, b1, b2) == 0.0);
  CHECK(n4_sum(1, 0, 0, 0, b1, b2) == 0.0);
}

TEST_CASE("n4_sum matches the engine") {
  const double b1 = 2.2, b2 = 0.9;
  for (int l = 0; l <= 3; ++l)
    for (int p = 0; p <= 3; ++p)
      for (int q = 0; q <= 3; ++q) {
        const int s = p + q - l;
        if (s < 0 || s > 3) continue;
        CHECK(rel(n4(l, p, q, s, b1, b2), n4_sum(l, p, q, s, b1, b2)) <
              1e-13);
      }
}
