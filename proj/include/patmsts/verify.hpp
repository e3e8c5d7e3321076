#pragma once

#include <string>
#include <utility>
#include <vector>

#include "patmsts/fock_oracle.hpp"

namespace patmsts::verify {

// One cross-check, aggregated over its whole parameter grid.  `deviation`
// is the worst relative deviation seen (against a small floor so that
// near-zero values compare absolutely), `detail` names the worst offender.
struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  double deviation = 0.0;
  bool pass = false;
  std::string detail;
};

// A quoted special-case expression or stated trend that the general
// computation contradicts.  Reported for the record; never a failure.
struct Discrepancy {
  std::string topic;
  std::string quoted;
  std::string computed;
  double deviation = 0.0;
};

struct Report {
  std::string profile;
  std::vector<CheckResult> checks;
  std::vector<Discrepancy> discrepancies;
  bool all_pass() const;
};

enum class Profile { Smoke, Desk };

// Grid for the closed-form-versus-brute-force sweep.
struct SweepSpec {
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> rs;
  std::vector<double> nbars;
  int pnd_max = 6;        // joint distribution compared on [0,pnd_max]^2
  int sample_points = 5;  // seeded (alpha, beta) draws for CF and Wigner
  double rel_tol = 1e-8;
  double wigner_tol = 1e-6;
  oracle::OracleConfig cfg;
};

SweepSpec smoke_sweep_spec();
SweepSpec desk_sweep_spec();

// Every closed-form quantity against the truncated-Fock reference, one
// aggregated CheckResult per quantity.
std::vector<CheckResult> run_sweep(const SweepSpec& spec);

// Degenerate-parameter reductions (single-column normalization, base-state
// correlation limits, thermal and squeezed-vacuum distribution limits).
std::vector<CheckResult> check_limits();

// Internal dual-path and algebraic identities (derivative engine vs a
// truncated power-series expansion, Jacobi reflection, Hermite derivative
// shifts, four-index and quadratic-form dual evaluations).
std::vector<CheckResult> check_identities();

// Witness thresholds and teleportation-fidelity cross checks.  `full` adds
// the slower multi-r quadrature comparisons.
std::vector<CheckResult> check_thresholds(bool full);

// Phase-space special values: origin value and sign for single addition,
// total integral, dual-path factor agreement.  `full` integrates all three
// reference pairs instead of one.
std::vector<CheckResult> check_wigner_specials(bool full);

// Density-matrix health of the brute-force states (hermiticity, positivity,
// trace) and the squeeze conjugation relation on ladder blocks.
std::vector<CheckResult> check_state_integrity(const oracle::OracleConfig& cfg);

// The quoted-result contradictions, quantified at runtime.
std::vector<Discrepancy> reference_discrepancies();

Report run_verify(Profile profile);

std::string to_text(const Report& report);
std::string to_json(const Report& report);

}  // namespace patmsts::verify
