#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "patmsts/closed_form.hpp"
#include "patmsts/phase_space.hpp"

using namespace patmsts;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("Gaussian envelope basics") {
  // Vacuum: un-added, r = 0, nbar = 0.
  const DerivedParams vac = derive(StateParams{0, 0, 0.0, 0.0});
  CHECK(wigner_w0(vac, cplx(0.0), cplx(0.0)) ==
        doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-14));
  const cplx al(0.3, 0.1), be(-0.2, 0.4);
  CHECK(wigner_w0(vac, al, be) ==
        doctest::Approx(std::exp(-2.0 * (std::norm(al) + std::norm(be))) /
                        (kPi * kPi))
            .epsilon(1e-12));

  // No additions means no factor: wigner == envelope everywhere.
  const DerivedParams d = derive(StateParams{0, 0, 0.7, 0.4});
  CHECK(wigner(0, 0, d, al, be) ==
        doctest::Approx(wigner_w0(d, al, be)).epsilon(1e-13));

  const double t = 2.0 * 0.4 + 1.0;
  CHECK(wigner_w0(d, cplx(0.0), cplx(0.0)) ==
        doctest::Approx(1.0 / (kPi * kPi * t * t)).epsilon(1e-13));
}

TEST_CASE("single addition dents the origin by the known amount") {
  for (double r : {0.3, 0.9})
    for (double nbar : {0.2, 1.0}) {
      const DerivedParams d = derive(StateParams{0, 1, r, nbar});
      const double t = 2.0 * nbar + 1.0;
      const double ch2 = std::cosh(r) * std::cosh(r);
      const double expect = -((nbar + ch2) / (t * t * t)) /
                            ((ch2 + nbar * std::cosh(2.0 * r)) * kPi * kPi);
      CHECK(wigner(0, 1, d, cplx(0.0), cplx(0.0)) ==
            doctest::Approx(expect).epsilon(1e-12));
      CHECK(wigner(0, 1, d, cplx(0.0), cplx(0.0)) < 0.0);
    }
}

TEST_CASE("factor paths agree away from the switch") {
  std::mt19937 gen(0x5ce9eu);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const DerivedParams d = derive(StateParams{2, 1, 0.45, 0.35});
  for (int i = 0; i < 20; ++i) {
    const cplx al(u(gen), u(gen)), be(u(gen), u(gen));
    const double h = wigner_factor_hermite(2, 1, d, al, be);
    const double s = wigner_factor_source(2, 1, d, al, be);
    CHECK(std::abs(h - s) <
          1e-10 * std::max({std::abs(h), std::abs(s), 1e-4}));
    CHECK(wigner_factor(2, 1, d, al, be) == h);
  }

  // Near r = 0 the Hermite arguments degenerate and the engine path takes
  // over; the value must stay continuous across the switch.
  const cplx al(0.2, -0.3), be(0.1, 0.25);
  const DerivedParams lo = derive(StateParams{1, 1, 1e-9, 0.5});
  const DerivedParams hi = derive(StateParams{1, 1, 1e-7, 0.5});
  CHECK(wigner_factor(1, 1, lo, al, be) ==
        doctest::Approx(wigner_factor(1, 1, hi, al, be)).epsilon(1e-4));
}

TEST_CASE("frozen reference values") {
  // From the truncated-Fock reference at trunc_tol 1e-13.
  const DerivedParams d = derive(StateParams{0, 1, 0.3, 0.2});
  CHECK(wigner(0, 1, d, cplx(0.3, -0.2), cplx(0.2, 0.3)) ==
        doctest::Approx(-0.020382307906628143).epsilon(1e-10));
  CHECK(wigner(0, 1, d, cplx(-0.1, 0.4), cplx(-0.4, -0.1)) ==
        doctest::Approx(-0.011194285763934265).epsilon(1e-10));

  const cplx cf1 = cf_patmsts(0, 1, d, cplx(0.3, -0.2), cplx(0.2, 0.3));
  CHECK(cf1.real() == doctest::Approx(0.82037442406295802).epsilon(1e-10));
  CHECK(std::abs(cf1.imag()) < 1e-12);

  const DerivedParams d2 = derive(StateParams{1, 1, 0.6, 0.5});
  CHECK(wigner(1, 1, d2, cplx(0.3, -0.2), cplx(0.2, 0.3)) ==
        doctest::Approx(0.0024039722752174655).epsilon(1e-10));
  const cplx cf2 = cf_patmsts(1, 1, d2, cplx(-0.1, 0.4), cplx(-0.4, -0.1));
  CHECK(cf2.real() == doctest::Approx(0.27224719370731015).epsilon(1e-10));
}

TEST_CASE("characteristic function structure") {
  const DerivedParams d = derive(StateParams{1, 2, 0.5, 0.3});
  // Normalization: exactly one at zero displacement.
  CHECK(std::abs(cf_patmsts(1, 2, d, cplx(0.0), cplx(0.0)) - cplx(1.0)) <
        1e-12);
  // Hermiticity of the state: chi(-args) is the conjugate.
  const cplx al(0.4, -0.1), be(0.2, 0.3);
  const cplx plus = cf_patmsts(1, 2, d, al, be);
  const cplx minus = cf_patmsts(1, 2, d, -al, -be);
  CHECK(std::abs(plus - std::conj(minus)) < 1e-12);
  // Bounded by one in magnitude away from the origin.
  CHECK(std::abs(plus) < 1.0);
}

TEST_CASE("grid sampling layout") {
  const DerivedParams d = derive(StateParams{0, 1, 0.3, 0.2});
  const WignerGrid g = wigner_grid(0, 1, d, AxisKind::Sum, 5, 2.0);
  REQUIRE(g.q.size() == 5);
  REQUIRE(g.p.size() == 5);
  REQUIRE(g.w.size() == 25);
  CHECK(g.q.front() == doctest::Approx(-2.0));
  CHECK(g.q.back() == doctest::Approx(2.0));
  CHECK(g.q[2] == doctest::Approx(0.0));

  // Sum axis: alpha = beta = (q + ip) / 2.
  const cplx eta(0.5 * g.q[3], 0.5 * g.p[1]);
  CHECK(g.w[3 * 5 + 1] ==
        doctest::Approx(wigner(0, 1, d, eta, eta)).epsilon(1e-13));

  // Diff axis: beta = -alpha.
  const WignerGrid gd = wigner_grid(0, 1, d, AxisKind::Diff, 5, 2.0);
  CHECK(gd.w[3 * 5 + 1] ==
        doctest::Approx(wigner(0, 1, d, eta, -eta)).epsilon(1e-13));

  CHECK_THROWS_AS(wigner_grid(0, 1, d, AxisKind::Sum, 1, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(wigner_grid(0, 1, d, AxisKind::Sum, 5, 0.0),
                  std::invalid_argument);
}

TEST_CASE("Gauss-Hermite rule") {
  const auto [x2, w2] = gauss_hermite(2);
  REQUIRE(x2.size() == 2);
  CHECK(x2[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(x2[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(w2[0] == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-13));

  // Moments of exp(-x^2): order 0 gives sqrt(pi), order 2 gives
  // sqrt(pi)/2, order 4 gives 3 sqrt(pi)/4; a 6-point rule is exact.
  const auto [x, w] = gauss_hermite(6);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    m0 += w[i];
    m2 += w[i] * x[i] * x[i];
    m4 += w[i] * std::pow(x[i], 4);
  }
  CHECK(m0 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(3.0 * std::sqrt(kPi) / 4.0).epsilon(1e-12));
}

TEST_CASE("fidelity quadrature agrees with the closed form") {
  for (double nbar : {0.0, 0.4}) {
    const DerivedParams d = derive(StateParams{0, 1, 0.5, nbar});
    const FidelityQuad q = fidelity_numeric(0, 1, d);
    CHECK(q.converged);
    CHECK(q.value ==
          doctest::Approx(fidelity_closed(0, 1, d)).epsilon(1e-8));
  }

  // Box rule covers the same integral on a square lattice.
  const DerivedParams d = derive(StateParams{1, 1, 0.4, 0.2});
  QuadratureSpec qs;
  qs.use_box = true;
  const FidelityQuad qb = fidelity_numeric(1, 1, d, qs);
  CHECK(qb.value ==
        doctest::Approx(fidelity_closed(1, 1, d)).epsilon(1e-7));

  // A displaced input only shifts phases that cancel in the integrand.
  const FidelityQuad base = fidelity_numeric(0, 1, d);
  const FidelityQuad moved =
      fidelity_numeric_displaced(0, 1, d, cplx(0.6, -0.8));
  CHECK(moved.value == doctest::Approx(base.value).epsilon(1e-10));
}
