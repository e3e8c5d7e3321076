#pragma once

#include <optional>
#include <utility>

#include "patmsts/state_params.hpp"

namespace patmsts {

// Normalization weight of the (m, n)-added state; equals one for m = n = 0.
double normalization(int m, int n, const DerivedParams& d);

// Mean photon numbers {<n_a>, <n_b>}.
std::pair<double, double> mean_photons(int m, int n, const DerivedParams& d);

// Cross moment <n_a n_b>.
double cross_moment(int m, int n, const DerivedParams& d);

// Intermodal correlation g = cov(n_a, n_b) / (<n_a> <n_b>); empty where a
// marginal mean vanishes.
std::optional<double> cross_correlation_g(int m, int n,
                                          const DerivedParams& d);

// Two-mode antibunching ratio; negative values witness antibunching.
// Empty where <n_a n_b> vanishes.
std::optional<double> antibunching_R(int m, int n, const DerivedParams& d);

// Joint photon-number distribution P(n_a = ma, n_b = nb) of the un-added
// state, and of the (m, n)-added state.
double pnd_tmsts(int ma, int nb, const DerivedParams& d);
double pnd_patmsts(int ma, int nb, int m, int n, const DerivedParams& d);

// Two-mode squeezing witness; negative values certify nonclassical
// correlations.
double sv_witness(int m, int n, const DerivedParams& d);

// Smallest r in (0, r_max] where the witness turns negative, located by a
// coarse scan plus bisection; empty when no sign change exists (witness
// negative from r = 0+ on, or never negative).
std::optional<double> sv_threshold(int m, int n, double nbar,
                                   double r_max = 5.0);

// Squeeze strength at which photon addition stops beating photon
// subtraction as a nonclassicality resource: r_c = ln(2 nbar + 1) / 2.
double subtraction_benchmark_rc(double nbar);

// Fidelity for teleporting a coherent state over the standard
// continuous-variable protocol with this state as the shared resource;
// independent of the input amplitude.
double fidelity_closed(int m, int n, const DerivedParams& d);

}  // namespace patmsts
