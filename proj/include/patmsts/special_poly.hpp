#pragma once

#include <complex>

namespace patmsts {

using cplx = std::complex<double>;

// Largest per-variable derivative order accepted by the finite-sum engines
// below; keeps every factorial and power well inside double range.
inline constexpr int kMaxTotalOrder = 24;

// n! for n in [0, 170]; throws std::invalid_argument outside that range.
double factorial(int n);

// Generalized binomial coefficient C(a, k) for real a and integer k >= 0,
// evaluated as a running product of ratios.
double binomial(double a, int k);

// Jacobi polynomial P_m^(alpha,beta)(x) for real alpha, beta, via the
// two-binomial finite sum.  Stable at x = +-1 and for x outside [-1, 1].
double jacobi(int m, double alpha, double beta, double x);

// Legendre polynomial; exactly jacobi(n, 0, 0, x).
double legendre(int n, double x);

// Laguerre polynomial L_n(x).
double laguerre(int n, double x);

// Two-index Hermite polynomial
//   H_{m,n}(x, y) = sum_l (-1)^l m! n! x^(m-l) y^(n-l) / (l! (m-l)! (n-l)!).
cplx hermite2(int m, int n, cplx x, cplx y);

// Mixed partial derivative at the origin of
//   exp[ a (tau*t + tau2*t2) + b (tau*tau2 + t*t2)
//        + s_tau tau + s_t t + s_tau2 tau2 + s_t2 t2 ]
// taken o_tau, o_t, o_tau2, o_t2 times in the four variables.
struct SourceSpec {
  int o_tau = 0;
  int o_t = 0;
  int o_tau2 = 0;
  int o_t2 = 0;
  cplx a{0.0, 0.0};
  cplx b{0.0, 0.0};
  cplx s_tau{0.0, 0.0};
  cplx s_t{0.0, 0.0};
  cplx s_tau2{0.0, 0.0};
  cplx s_t2{0.0, 0.0};
};
cplx source_derivative(const SourceSpec& spec);

// Source-free case with orders (m, m, n, n), evaluated in closed Jacobi form:
//   m! n! a^|n-m| (b^2 - a^2)^min(m,n) P_min^(|n-m|,0)( (b^2+a^2)/(b^2-a^2) ).
// Falls back to the explicit term sum when b^2 - a^2 is too small a pivot.
double gen_quad_closed(double a, double b, int m, int n);

// Source-free mixed derivative with orders (l, p, q, s) in the four
// variables.  Zero unless p + q == l + s.  Primary path is the generic
// engine; n4_sum is an independent single-sum evaluation for cross-checks.
double n4(int l, int p, int q, int s, double b1, double b2);
double n4_sum(int l, int p, int q, int s, double b1, double b2);

}  // namespace patmsts
