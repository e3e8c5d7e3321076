#include "patmsts/state_params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace patmsts {

namespace {
constexpr double kRelEps = 1e-12;  // relative guard for singular denominators
constexpr double kPiSq = std::numbers::pi * std::numbers::pi;
}  // namespace

DerivedParams derive(const StateParams& p) {
  if (p.m < 0 || p.m > 20 || p.n < 0 || p.n > 20)
    throw std::invalid_argument("photon additions must lie in [0, 20]");
  if (!std::isfinite(p.r) || p.r < 0.0)
    throw std::invalid_argument("squeeze strength must be finite and >= 0");
  if (!std::isfinite(p.nbar) || p.nbar < 0.0)
    throw std::invalid_argument("thermal occupation must be finite and >= 0");

  DerivedParams d;
  d.sp = p;

  const double ch = std::cosh(p.r);
  const double sh = std::sinh(p.r);
  const double ch2 = std::cosh(2.0 * p.r);
  const double t = 2.0 * p.nbar + 1.0;

  d.b1 = ch * ch + p.nbar * ch2;
  d.b2 = t * sh * ch;
  d.nu = d.b1 * d.b1 - d.b2 * d.b2;
  d.omega = d.nu;
  d.upsilon = d.b1 * d.b1 + d.b2 * d.b2;
  d.mu = t * ch * ch - (p.nbar + 1.0) * (p.nbar + 1.0);

  d.a1 = 1.0 / d.nu;
  d.a2 = d.b2 / d.nu;
  d.a3 = d.b1 / d.nu;
  d.one_minus_a3 = p.nbar * (p.nbar + 1.0) / d.nu;

  const double denom_scale = (p.nbar + 1.0) * (p.nbar + 1.0) + t * ch * ch;
  d.p_singular = std::abs(d.mu) < kRelEps * denom_scale;
  if (!d.p_singular) {
    d.at1 = -1.0 / d.mu;
    d.at2 = -d.b2 / d.mu;
    d.at3 = -(d.b1 - 1.0) / d.mu;
  }

  const double chi_den = d.b2 * d.b2 -
                         p.nbar * p.nbar * (p.nbar + 1.0) * (p.nbar + 1.0);
  const double chi_scale = d.b2 * d.b2 +
                           p.nbar * p.nbar * (p.nbar + 1.0) * (p.nbar + 1.0);
  if (std::abs(chi_den) >= kRelEps * chi_scale && chi_scale > 0.0)
    d.chi = chi_scale / chi_den;

  d.k1 = (p.nbar + ch * ch) / t;
  d.k3 = sh * ch / t;
  return d;
}

double p_function_tmsts(const DerivedParams& d, cplx alpha, cplx beta) {
  const double e = -d.at3 * (std::norm(alpha) + std::norm(beta)) +
                   2.0 * d.at2 * (alpha * beta).real();
  return d.at1 / kPiSq * std::exp(e);
}

double q_function_tmsts(const DerivedParams& d, cplx alpha, cplx beta) {
  const double e = -d.a3 * (std::norm(alpha) + std::norm(beta)) +
                   2.0 * d.a2 * (alpha * beta).real();
  return d.a1 / kPiSq * std::exp(e);
}

}  // namespace patmsts
