#include "patmsts/closed_form.hpp"

#include <cmath>
#include <stdexcept>

namespace patmsts {

namespace {

constexpr double kRelEps = 1e-12;

double ipow(double x, int n) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

void check_adds(int m, int n) {
  if (m < 0 || m > 20 || n < 0 || n > 20)
    throw std::invalid_argument("photon additions must lie in [0, 20]");
}

}  // namespace

double normalization(int m, int n, const DerivedParams& d) {
  check_adds(m, n);
  return gen_quad_closed(d.b1, d.b2, m, n);
}

std::pair<double, double> mean_photons(int m, int n, const DerivedParams& d) {
  const double norm = normalization(m, n, d);
  return {normalization(m + 1, n, d) / norm - 1.0,
          normalization(m, n + 1, d) / norm - 1.0};
}

double cross_moment(int m, int n, const DerivedParams& d) {
  const double norm = normalization(m, n, d);
  return (normalization(m + 1, n + 1, d) - normalization(m + 1, n, d) -
          normalization(m, n + 1, d)) /
             norm +
         1.0;
}

std::optional<double> cross_correlation_g(int m, int n,
                                          const DerivedParams& d) {
  const double norm = normalization(m, n, d);
  const double na = normalization(m + 1, n, d);
  const double nb = normalization(m, n + 1, d);
  const double nab = normalization(m + 1, n + 1, d);
  const double den = (na - norm) * (nb - norm);
  if (std::abs(den) < kRelEps * na * nb) return std::nullopt;
  return (nab * norm - na * nb) / den;
}

std::optional<double> antibunching_R(int m, int n, const DerivedParams& d) {
  const double norm = normalization(m, n, d);
  const double na = normalization(m + 1, n, d);
  const double nb = normalization(m, n + 1, d);
  const double nab = normalization(m + 1, n + 1, d);
  const double naa = normalization(m + 2, n, d);
  const double nbb = normalization(m, n + 2, d);
  const double off = norm - na - nb;
  if (std::abs(nab + off) < kRelEps * (nab + na + nb + norm))
    return std::nullopt;
  return (naa + nbb + 2.0 * (off - nab)) / (2.0 * (nab + off));
}

double pnd_tmsts(int ma, int nb, const DerivedParams& d) {
  if (ma < 0 || nb < 0)
    throw std::invalid_argument("photon counts must be >= 0");
  return d.a1 * gen_quad_closed(d.one_minus_a3, d.a2, ma, nb) /
         (factorial(ma) * factorial(nb));
}

double pnd_patmsts(int ma, int nb, int m, int n, const DerivedParams& d) {
  check_adds(m, n);
  if (ma < 0 || nb < 0)
    throw std::invalid_argument("photon counts must be >= 0");
  if (ma < m || nb < n) return 0.0;
  const double weight = factorial(ma) / factorial(ma - m) * factorial(nb) /
                        factorial(nb - n);
  return weight * pnd_tmsts(ma - m, nb - n, d) / normalization(m, n, d);
}

double sv_witness(int m, int n, const DerivedParams& d) {
  const double norm = normalization(m, n, d);
  const double x = normalization(m + 1, n, d) / norm;
  const double y = normalization(m, n + 1, d) / norm;
  const double c1 = n4(m, m + 1, n, n + 1, d.b1, d.b2);
  const double c2 = n4(m + 1, m, n + 1, n, d.b1, d.b2);
  return (x - 1.5) * (y - 1.5) - c1 * c2 / (norm * norm);
}

std::optional<double> sv_threshold(int m, int n, double nbar, double r_max) {
  check_adds(m, n);
  if (!std::isfinite(nbar) || nbar < 0.0)
    throw std::invalid_argument("thermal occupation must be finite and >= 0");
  if (!std::isfinite(r_max) || r_max <= 0.0)
    throw std::invalid_argument("r_max must be finite and > 0");

  const auto sv_at = [&](double r) {
    return sv_witness(m, n, derive({m, n, r, nbar}));
  };

  double lo = 1e-6;
  if (sv_at(lo) < 0.0) return std::nullopt;  // negative from the outset
  constexpr double kStep = 0.005;
  double hi = lo;
  bool found = false;
  while (hi < r_max) {
    hi = std::min(hi + kStep, r_max);
    if (sv_at(hi) < 0.0) {
      found = true;
      break;
    }
    lo = hi;
  }
  if (!found) return std::nullopt;
  for (int i = 0; i < 60 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sv_at(mid) < 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double subtraction_benchmark_rc(double nbar) {
  if (!std::isfinite(nbar) || nbar < 0.0)
    throw std::invalid_argument("thermal occupation must be finite and >= 0");
  return 0.5 * std::log(2.0 * nbar + 1.0);
}

double fidelity_closed(int m, int n, const DerivedParams& d) {
  check_adds(m, n);
  const double norm = normalization(m, n, d);
  return factorial(m + n) * ipow(d.b1 + d.b2, m + n) /
         ((d.b1 - d.b2) * std::ldexp(1.0, m + n + 1) * norm);
}

}  // namespace patmsts
