#pragma once

#include <optional>

#include "patmsts/special_poly.hpp"

namespace patmsts {

// Inputs: photon additions (m to mode a, n to mode b), squeeze strength r,
// and the common thermal occupation nbar of the two seed modes.
struct StateParams {
  int m = 0;
  int n = 0;
  double r = 0.0;
  double nbar = 0.0;
};

// Scalar coefficients shared by every closed-form quantity.  All are fixed
// by (r, nbar) alone.
struct DerivedParams {
  StateParams sp;

  // Moment generating-kernel coefficients.
  double b1 = 0.0;  // cosh^2 r + nbar cosh 2r
  double b2 = 0.0;  // (2 nbar + 1) sinh r cosh r

  double nu = 0.0;       // b1^2 - b2^2
  double omega = 0.0;    // same value as nu, kept under both names
  double upsilon = 0.0;  // b1^2 + b2^2
  double mu = 0.0;       // (2 nbar + 1) cosh^2 r - (nbar + 1)^2

  // Husimi-kernel coefficients (anti-normal moments).
  double a1 = 0.0;  // 1 / nu
  double a2 = 0.0;  // b2 / nu
  double a3 = 0.0;  // b1 / nu

  // 1 - a3 evaluated as nbar (nbar + 1) / nu, which is exact where the
  // subtraction would cancel (nbar = 0 must give exactly zero so that
  // off-diagonal photon-number weights vanish identically).
  double one_minus_a3 = 0.0;

  // Normal-order (P representation) kernel coefficients; the denominator
  // -mu crosses zero when the thermal seed can no longer absorb the
  // squeezing, so these are meaningful only when !p_singular.
  double at1 = 0.0;
  double at2 = 0.0;
  double at3 = 0.0;
  bool p_singular = false;

  // Argument of the Legendre form of the photon-number distribution;
  // absent where its denominator b2^2 - nbar^2 (nbar+1)^2 vanishes.
  std::optional<double> chi;

  // Wigner-kernel coefficients.
  double k1 = 0.0;  // (nbar + cosh^2 r) / (2 nbar + 1)
  double k3 = 0.0;  // sinh r cosh r / (2 nbar + 1)
};

// Validates p (m, n in [0, 20]; r, nbar finite and >= 0) and computes every
// derived scalar.  Throws std::invalid_argument on bad input.
DerivedParams derive(const StateParams& p);

// Gaussian quasiprobabilities of the un-added two-mode squeezed thermal
// state.  p_function_tmsts is meaningful only when !d.p_singular; the
// 1/pi^2 measure factor is included in both.
double p_function_tmsts(const DerivedParams& d, cplx alpha, cplx beta);
double q_function_tmsts(const DerivedParams& d, cplx alpha, cplx beta);

}  // namespace patmsts
