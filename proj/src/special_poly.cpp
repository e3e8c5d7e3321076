#include "patmsts/special_poly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace patmsts {

namespace {

constexpr int kMaxFactorial = 170;  // 171! overflows a double

const std::array<double, kMaxFactorial + 1>& factorial_table() {
  static const auto table = [] {
    std::array<double, kMaxFactorial + 1> t{};
    t[0] = 1.0;
    for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

cplx ipow(cplx z, int n) {
  cplx out{1.0, 0.0};
  for (int i = 0; i < n; ++i) out *= z;
  return out;
}

double ipow(double x, int n) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

void check_order(int o, const char* what) {
  if (o < 0 || o > kMaxTotalOrder)
    throw std::invalid_argument(std::string(what) + " order out of [0, 24]");
}

}  // namespace

double factorial(int n) {
  if (n < 0 || n > kMaxFactorial)
    throw std::invalid_argument("factorial argument out of [0, 170]");
  return factorial_table()[n];
}

double binomial(double a, int k) {
  if (k < 0) throw std::invalid_argument("binomial k must be >= 0");
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out *= (a - k + i) / i;
  return out;
}

double jacobi(int m, double alpha, double beta, double x) {
  if (m < 0) throw std::invalid_argument("jacobi degree must be >= 0");
  const double lo = 0.5 * (x - 1.0);
  const double hi = 0.5 * (x + 1.0);
  double sum = 0.0;
  for (int k = 0; k <= m; ++k)
    sum += binomial(m + alpha, k) * binomial(m + beta, m - k) *
           ipow(lo, m - k) * ipow(hi, k);
  return sum;
}

double legendre(int n, double x) { return jacobi(n, 0.0, 0.0, x); }

double laguerre(int n, double x) {
  if (n < 0) throw std::invalid_argument("laguerre degree must be >= 0");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= -x * (n - k) / ((k + 1.0) * (k + 1.0));
    sum += term;
  }
  return sum;
}

cplx hermite2(int m, int n, cplx x, cplx y) {
  check_order(m, "hermite2");
  check_order(n, "hermite2");
  const int lmax = std::min(m, n);
  double coef = 1.0;  // (-1)^l m! n! / (l! (m-l)! (n-l)!)
  cplx sum{0.0, 0.0};
  for (int l = 0; l <= lmax; ++l) {
    sum += coef * ipow(x, m - l) * ipow(y, n - l);
    coef *= -static_cast<double>((m - l) * (n - l)) / (l + 1.0);
  }
  return sum;
}

cplx source_derivative(const SourceSpec& spec) {
  check_order(spec.o_tau, "source_derivative");
  check_order(spec.o_t, "source_derivative");
  check_order(spec.o_tau2, "source_derivative");
  check_order(spec.o_t2, "source_derivative");

  // Expand the exponential and keep the monomials whose four exponents
  // match the four requested orders.  A term is indexed by how many tau*t
  // pairs (a), tau2*t2 pairs (b), tau*tau2 pairs (c), t*t2 pairs (d) it
  // draws, with the remaining orders supplied by the linear sources.
  const auto& fact = factorial_table();
  cplx sum{0.0, 0.0};
  const int amax = std::min(spec.o_tau, spec.o_t);
  const int bmax = std::min(spec.o_tau2, spec.o_t2);
  for (int a = 0; a <= amax; ++a) {
    for (int b = 0; b <= bmax; ++b) {
      const int cmax = std::min(spec.o_tau - a, spec.o_tau2 - b);
      const int dmax = std::min(spec.o_t - a, spec.o_t2 - b);
      for (int c = 0; c <= cmax; ++c) {
        for (int d = 0; d <= dmax; ++d) {
          const int e = spec.o_tau - a - c;
          const int f = spec.o_t - a - d;
          const int g = spec.o_tau2 - b - c;
          const int h = spec.o_t2 - b - d;
          const double mult = fact[spec.o_tau] / (fact[a] * fact[c] * fact[e]) *
                              fact[spec.o_t] / (fact[a] * fact[d] * fact[f]) *
                              fact[spec.o_tau2] / (fact[b] * fact[c] * fact[g]) *
                              fact[spec.o_t2] / (fact[b] * fact[d] * fact[h]) *
                              fact[a] * fact[b] * fact[c] * fact[d];
          sum += mult * ipow(spec.a, a + b) * ipow(spec.b, c + d) *
                 ipow(spec.s_tau, e) * ipow(spec.s_t, f) *
                 ipow(spec.s_tau2, g) * ipow(spec.s_t2, h);
        }
      }
    }
  }
  return sum;
}

double gen_quad_closed(double a, double b, int m, int n) {
  check_order(m, "gen_quad_closed");
  check_order(n, "gen_quad_closed");
  const int mi = std::min(m, n);
  const int diff = std::abs(n - m);
  if (mi == 0) return factorial(std::max(m, n)) * ipow(a, diff);

  const double d2 = b * b - a * a;
  const double s2 = b * b + a * a;
  if (std::abs(d2) < 1e-10 * s2) {
    // Jacobi argument pivot too small; evaluate the term sum directly.
    SourceSpec spec;
    spec.o_tau = spec.o_t = m;
    spec.o_tau2 = spec.o_t2 = n;
    spec.a = a;
    spec.b = b;
    return source_derivative(spec).real();
  }
  return factorial(m) * factorial(n) * ipow(a, diff) * ipow(d2, mi) *
         jacobi(mi, diff, 0.0, s2 / d2);
}

double n4(int l, int p, int q, int s, double b1, double b2) {
  if (p + q != l + s) return 0.0;
  SourceSpec spec;
  spec.o_tau = l;
  spec.o_t = p;
  spec.o_tau2 = q;
  spec.o_t2 = s;
  spec.a = b1;
  spec.b = b2;
  return source_derivative(spec).real();
}

double n4_sum(int l, int p, int q, int s, double b1, double b2) {
  check_order(l, "n4_sum");
  check_order(p, "n4_sum");
  check_order(q, "n4_sum");
  check_order(s, "n4_sum");
  if (p + q != l + s) return 0.0;
  const double pref = factorial(l) * factorial(p) * factorial(q) * factorial(s);
  double sum = 0.0;
  for (int k = std::max(0, p - l); k <= std::min(p, s); ++k) {
    sum += ipow(b1, p + s - 2 * k) * ipow(b2, l - p + 2 * k) /
           (factorial(p - k) * factorial(s - k) * factorial(l - p + k) *
            factorial(k));
  }
  return pref * sum;
}

}  // namespace patmsts
