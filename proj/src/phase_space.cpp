#include "patmsts/phase_space.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "patmsts/closed_form.hpp"

namespace patmsts {

namespace {

constexpr double kPiSq = std::numbers::pi * std::numbers::pi;

double ipow(double x, int n) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

// Linear sources entering both the Hermite and the engine path.
struct WignerSources {
  cplx r1, r2, r3, r4;
};

WignerSources wigner_sources(const DerivedParams& d, cplx alpha, cplx beta) {
  WignerSources s;
  s.r1 = 2.0 * (d.k1 * alpha - d.k3 * std::conj(beta));
  s.r3 = 2.0 * (d.k1 * beta - d.k3 * std::conj(alpha));
  s.r2 = -std::conj(s.r1);
  s.r4 = -std::conj(s.r3);
  return s;
}

}  // namespace

double wigner_w0(const DerivedParams& d, cplx alpha, cplx beta) {
  const double t = 2.0 * d.sp.nbar + 1.0;
  const double e =
      (-2.0 * std::cosh(2.0 * d.sp.r) * (std::norm(alpha) + std::norm(beta)) +
       2.0 * std::sinh(2.0 * d.sp.r) * 2.0 * (alpha * beta).real()) /
      t;
  return std::exp(e) / (kPiSq * t * t);
}

double wigner_factor_hermite(int m, int n, const DerivedParams& d,
                             cplx alpha, cplx beta) {
  if (d.k3 <= 0.0)
    throw std::invalid_argument("Hermite path needs k3 > 0");
  const auto s = wigner_sources(d, alpha, beta);
  const double sq = std::sqrt(d.k3);
  const cplx x = s.r1 / (cplx(0.0, 1.0) * sq);
  const cplx y = s.r3 / (cplx(0.0, 1.0) * sq);
  const double ratio = -d.k1 / d.k3;
  const double fm = factorial(m);
  const double fn = factorial(n);
  double sum = 0.0;
  for (int l = 0; l <= m; ++l) {
    for (int j = 0; j <= n; ++j) {
      const double coef = fm * fm * fn * fn * ipow(ratio, l + j) /
                          (factorial(l) * factorial(j) *
                           factorial(m - l) * factorial(m - l) *
                           factorial(n - j) * factorial(n - j));
      sum += coef * std::norm(hermite2(m - l, n - j, x, y));
    }
  }
  return ipow(d.k3, m + n) * sum / normalization(m, n, d);
}

double wigner_factor_source(int m, int n, const DerivedParams& d,
                            cplx alpha, cplx beta) {
  const auto s = wigner_sources(d, alpha, beta);
  SourceSpec spec;
  spec.o_tau = spec.o_t = m;
  spec.o_tau2 = spec.o_t2 = n;
  spec.a = d.k1;
  spec.b = d.k3;
  spec.s_tau = s.r2;
  spec.s_t = s.r1;
  spec.s_tau2 = s.r4;
  spec.s_t2 = s.r3;
  const double sign = ((m + n) % 2) ? -1.0 : 1.0;
  return sign * source_derivative(spec).real() / normalization(m, n, d);
}

double wigner_factor(int m, int n, const DerivedParams& d, cplx alpha,
                     cplx beta) {
  if (m == 0 && n == 0) return 1.0;
  if (d.k3 < 1e-8) return wigner_factor_source(m, n, d, alpha, beta);
  return wigner_factor_hermite(m, n, d, alpha, beta);
}

double wigner(int m, int n, const DerivedParams& d, cplx alpha, cplx beta) {
  return wigner_w0(d, alpha, beta) * wigner_factor(m, n, d, alpha, beta);
}

WignerGrid wigner_grid(int m, int n, const DerivedParams& d, AxisKind axis,
                       int points, double halfwidth) {
  if (points < 2 || points > 4096)
    throw std::invalid_argument("grid points out of [2, 4096]");
  if (!std::isfinite(halfwidth) || halfwidth <= 0.0)
    throw std::invalid_argument("grid halfwidth must be finite and > 0");
  WignerGrid g;
  g.axis = axis;
  g.q.resize(points);
  g.p.resize(points);
  const double step = 2.0 * halfwidth / (points - 1);
  for (int i = 0; i < points; ++i) {
    g.q[i] = -halfwidth + i * step;
    g.p[i] = -halfwidth + i * step;
  }
  g.w.resize(static_cast<size_t>(points) * points);
  for (int iq = 0; iq < points; ++iq) {
    for (int ip = 0; ip < points; ++ip) {
      const cplx eta{0.5 * g.q[iq], 0.5 * g.p[ip]};
      const cplx beta = (axis == AxisKind::Sum) ? eta : -eta;
      g.w[static_cast<size_t>(iq) * points + ip] = wigner(m, n, d, eta, beta);
    }
  }
  return g;
}

cplx cf_patmsts(int m, int n, const DerivedParams& d, cplx alpha, cplx beta) {
  SourceSpec spec;
  spec.o_tau = spec.o_t = m;
  spec.o_tau2 = spec.o_t2 = n;
  spec.a = d.b1;
  spec.b = d.b2;
  spec.s_t = alpha * d.b1 - d.b2 * std::conj(beta);
  spec.s_tau = beta * d.b2 - d.b1 * std::conj(alpha);
  spec.s_tau2 = alpha * d.b2 - d.b1 * std::conj(beta);
  spec.s_t2 = beta * d.b1 - d.b2 * std::conj(alpha);
  const double env =
      std::exp(-(d.b1 - 0.5) * (std::norm(alpha) + std::norm(beta)) +
               2.0 * d.b2 * (alpha * beta).real());
  return env * source_derivative(spec) / normalization(m, n, d);
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  if (n < 1 || n > 400)
    throw std::invalid_argument("quadrature size out of [1, 400]");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(0.5 * k);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> nodes(n);
  std::vector<double> weights(n);
  const double sqrtpi = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double c = es.eigenvectors()(0, i);
    weights[i] = sqrtpi * c * c;
  }
  return {std::move(nodes), std::move(weights)};
}

namespace {

// One quadrature pass of the overlap integral.  gamma displaces the input
// coherent state; its phases multiply the two characteristic-function
// arguments and cancel pointwise, so gamma must not change the value.
double overlap_pass(int m, int n, const DerivedParams& d, cplx gamma,
                    const QuadratureSpec& q, int points) {
  const auto eval = [&](double x, double y) {
    const cplx eta{x, y};
    const cplx arga = -std::conj(eta);
    const cplx argb = -eta;
    cplx phase{1.0, 0.0};
    if (gamma != cplx{0.0, 0.0}) {
      const cplx za = arga * std::conj(gamma) - std::conj(arga) * gamma;
      const cplx zb = argb * gamma - std::conj(argb) * std::conj(gamma);
      phase = std::exp(za) * std::exp(zb);
    }
    return (phase * cf_patmsts(m, n, d, arga, argb)).real();
  };

  double sum = 0.0;
  if (q.use_box) {
    const double h = 2.0 * q.box_halfwidth / (points - 1);
    for (int i = 0; i < points; ++i) {
      const double x = -q.box_halfwidth + i * h;
      const double wx = (i == 0 || i == points - 1) ? 0.5 : 1.0;
      for (int k = 0; k < points; ++k) {
        const double y = -q.box_halfwidth + k * h;
        const double wy = (k == 0 || k == points - 1) ? 0.5 : 1.0;
        sum += wx * wy * h * h * std::exp(-x * x - y * y) * eval(x, y);
      }
    }
  } else {
    const auto [xs, ws] = gauss_hermite(points);
    for (int i = 0; i < points; ++i)
      for (int k = 0; k < points; ++k)
        sum += ws[i] * ws[k] * eval(xs[i], xs[k]);
  }
  return sum / std::numbers::pi;
}

FidelityQuad overlap_quad(int m, int n, const DerivedParams& d, cplx gamma,
                          const QuadratureSpec& q) {
  FidelityQuad out;
  const int base = q.use_box ? q.box_points : q.points;
  if (base < 4) throw std::invalid_argument("quadrature too small");
  const int fine = q.use_box ? 2 * base - 1 : base + 8;
  const double coarse = overlap_pass(m, n, d, gamma, q, base);
  const double refined = overlap_pass(m, n, d, gamma, q, fine);
  out.value = refined;
  out.refine_delta = std::abs(refined - coarse);
  out.converged = out.refine_delta <= 1e-8 * std::max(std::abs(refined), 1.0);
  return out;
}

}  // namespace

FidelityQuad fidelity_numeric(int m, int n, const DerivedParams& d,
                              const QuadratureSpec& q) {
  return overlap_quad(m, n, d, cplx{0.0, 0.0}, q);
}

FidelityQuad fidelity_numeric_displaced(int m, int n, const DerivedParams& d,
                                        cplx gamma, const QuadratureSpec& q) {
  return overlap_quad(m, n, d, gamma, q);
}

}  // namespace patmsts
