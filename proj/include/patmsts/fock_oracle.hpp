#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "patmsts/state_params.hpp"

namespace patmsts::oracle {

// Numerical failure inside the brute-force reference machinery (divergent
// truncation, matrix-exponential residual, non-finite input).
struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleConfig {
  int max_dim = 256;       // hard cap on the per-mode Fock truncation
  double trunc_tol = 1e-10;  // relative norm drift allowed between cutoffs
  double expm_tol = 1e-13;   // probe-vector tolerance for expm
  int pad = 8;               // extra levels on top of the analytic estimate

  // Default config with PATMSTS_MAX_DIM (if set) applied to max_dim.
  static OracleConfig from_env();
};

// Matrix exponential by Pade approximation with scaling and squaring.
// Every result is cross-checked on a probe vector against a scaled Taylor
// expansion; a mismatch beyond tol throws OracleError.  tol <= 0 disables
// the check.
Eigen::MatrixXd expm(const Eigen::MatrixXd& m, double tol = 1e-13);
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m, double tol = 1e-13);

// Ladder operators for expectation words, e.g. {Adag, A} is the mode-a
// number operator.  Words act on kets right to left.
enum class Op { A, Adag, B, Bdag };

// The photon-number difference d = n_a - n_b is conserved by two-mode
// squeezing and by thermal mixing, so every state handled here is block
// diagonal over d.  Within block d, basis index t stands for the Fock pair
// (j, k) = (t + max(d, 0), t + max(-d, 0)) with t in [0, dim - |d| - 1].
struct BlockState {
  int dim = 0;                          // per-mode Fock truncation
  std::vector<Eigen::MatrixXd> blocks;  // slot i holds d = i - (dim - 1)
  double norm = 1.0;  // weight divided out when photons were added

  const Eigen::MatrixXd& block(int d) const { return blocks[d + dim - 1]; }
  Eigen::MatrixXd& block(int d) { return blocks[d + dim - 1]; }
};

// One ladder operator (or a composition of them) restricted to difference
// blocks: basis vector t of block d_in maps to coeff[t - t_lo] times basis
// vector t + shift of block d_out, for t in [t_lo, t_hi]; other t map to 0.
struct LadderMap {
  int d_in = 0;
  int d_out = 0;
  int shift = 0;
  int t_lo = 0;
  int t_hi = -1;  // empty when t_hi < t_lo
  Eigen::VectorXd coeff;
};

LadderMap ladder_map(Op op, int dim, int d_in);
// Map equal to applying `first`, then `second`.
LadderMap compose(const LadderMap& second, const LadderMap& first);
Eigen::MatrixXd to_dense(const LadderMap& map, int dim);

// Single-mode ingredients.
Eigen::MatrixXd annihilation(int dim);
Eigen::VectorXd thermal_weights(double nbar, int dim);  // renormalized
Eigen::MatrixXcd displacement(int dim, cplx alpha, double tol = 1e-13);

// Antisymmetric generator of the squeeze restricted to block d >= 0, and
// the cached orthogonal exponentials exp(r T_d) for all d in [0, dim - 1].
Eigen::MatrixXd squeeze_block_generator(int dim, int d);
const std::vector<Eigen::MatrixXd>& squeeze_blocks(double r, int dim,
                                                   double tol = 1e-13);

// State assembly.
BlockState build_tmsts(double r, double nbar, int dim, double tol = 1e-13);
BlockState add_photons(const BlockState& s, int m, int n);

// Smallest cutoff (multiple of 4) at which the added-state weight stops
// moving by more than cfg.trunc_tol between successive cutoffs; throws
// OracleError when no cutoff below cfg.max_dim converges.
int truncation_select(const StateParams& p, const OracleConfig& cfg);

// Full pipeline: select cutoff, squeeze, mix, add photons, normalize.
BlockState build_patmsts(const StateParams& p, const OracleConfig& cfg);

// Observables.
double oracle_expectation(const BlockState& s, const std::vector<Op>& word);
double oracle_pnd(const BlockState& s, int ma, int nb);
double oracle_wigner(const BlockState& s, cplx alpha, cplx beta);
cplx oracle_cf(const BlockState& s, cplx alpha, cplx beta);
double oracle_qfunc(const BlockState& s, cplx alpha, cplx beta);

// State-validity diagnostics.
double trace_total(const BlockState& s);
double hermiticity_defect(const BlockState& s);
double min_eigenvalue(const BlockState& s);

}  // namespace patmsts::oracle
