#pragma once

#include <utility>
#include <vector>

#include "patmsts/state_params.hpp"

namespace patmsts {

// Gaussian Wigner envelope of the un-added state.  Normalized so the
// double phase-space integral over both modes equals 1/4.
double wigner_w0(const DerivedParams& d, cplx alpha, cplx beta);

// Photon-addition factor multiplying the envelope.  Two independent
// evaluation paths: a two-index Hermite sum (default) and the generic
// source-derivative engine, which also covers the k3 -> 0 regime where the
// Hermite arguments blow up.  wigner_factor switches at k3 < 1e-8.
double wigner_factor_hermite(int m, int n, const DerivedParams& d,
                             cplx alpha, cplx beta);
double wigner_factor_source(int m, int n, const DerivedParams& d,
                            cplx alpha, cplx beta);
double wigner_factor(int m, int n, const DerivedParams& d, cplx alpha,
                     cplx beta);

double wigner(int m, int n, const DerivedParams& d, cplx alpha, cplx beta);

// Diagnostic cuts through four-dimensional phase space, q outer, p inner.
// Sum: both modes displaced together, alpha = beta = (q + ip) / 2.
// Diff: modes displaced oppositely, alpha = (q + ip) / 2, beta = -alpha.
enum class AxisKind { Sum, Diff };
struct WignerGrid {
  AxisKind axis = AxisKind::Sum;
  std::vector<double> q;
  std::vector<double> p;
  std::vector<double> w;  // w[iq * p.size() + ip]
};
WignerGrid wigner_grid(int m, int n, const DerivedParams& d, AxisKind axis,
                       int points, double halfwidth);

// Symmetric-order two-mode characteristic function.
cplx cf_patmsts(int m, int n, const DerivedParams& d, cplx alpha, cplx beta);

// Overlap fidelity evaluated by quadrature of the characteristic function;
// the closed form in closed_form.hpp is the cross-check target.
struct QuadratureSpec {
  int points = 40;  // Gauss-Hermite points per axis
  bool use_box = false;
  double box_halfwidth = 6.0;
  int box_points = 121;
};
struct FidelityQuad {
  double value = 0.0;
  double refine_delta = 0.0;  // change under one refinement step
  bool converged = false;
};
FidelityQuad fidelity_numeric(int m, int n, const DerivedParams& d,
                              const QuadratureSpec& q = {});

// Same integral for an input coherent state gamma (mode a displaced by
// gamma, mode b by its conjugate).  The displacement phases cancel inside
// the integrand, so this must reproduce fidelity_numeric for any gamma.
FidelityQuad fidelity_numeric_displaced(int m, int n, const DerivedParams& d,
                                        cplx gamma,
                                        const QuadratureSpec& q = {});

// Gauss-Hermite nodes and weights for the weight exp(-x^2).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

}  // namespace patmsts
