#include "patmsts/fock_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numbers>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

namespace patmsts::oracle {

namespace {

constexpr double kPiSq = std::numbers::pi * std::numbers::pi;

template <typename M>
using VectorOf = Eigen::Matrix<typename M::Scalar, Eigen::Dynamic, 1>;

template <typename M>
double one_norm(const M& a) {
  if (a.cols() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename M>
VectorOf<M> probe_vector(Eigen::Index n) {
  std::mt19937 gen(0x51ab5eedu ^ static_cast<uint32_t>(n));
  std::normal_distribution<double> dist;
  VectorOf<M> v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<typename M::Scalar, double>)
      v(i) = dist(gen);
    else
      v(i) = cplx(dist(gen), dist(gen));
  }
  v /= v.norm();
  return v;
}

template <typename M>
VectorOf<M> taylor_apply(const M& b, const VectorOf<M>& v) {
  VectorOf<M> term = v;
  VectorOf<M> acc = v;
  for (int k = 1; k <= 120; ++k) {
    term = (b * term) / static_cast<double>(k);
    acc += term;
    if (term.norm() <= 1e-20 * acc.norm()) break;
  }
  return acc;
}

template <typename M>
M pade_low(const M& a, int order) {
  static const std::vector<double> c3 = {120., 60., 12., 1.};
  static const std::vector<double> c5 = {30240., 15120., 3360., 420., 30., 1.};
  static const std::vector<double> c7 = {17297280., 8648640., 1995840.,
                                         277200., 25200., 1512., 56., 1.};
  static const std::vector<double> c9 = {17643225600., 8821612800.,
                                         2075673600., 302702400., 30270240.,
                                         2162160., 110880., 3960., 90., 1.};
  const std::vector<double>& c = order == 3   ? c3
                                 : order == 5 ? c5
                                 : order == 7 ? c7
                                              : c9;
  const Eigen::Index n = a.rows();
  std::vector<M> evenpow;  // I, A^2, A^4, ...
  evenpow.push_back(M::Identity(n, n));
  evenpow.push_back(a * a);
  for (int i = 2; i <= (order - 1) / 2 + (order % 2 ? 0 : 1); ++i)
    evenpow.push_back(evenpow.back() * evenpow[1]);
  M usum = M::Zero(n, n);
  M vsum = M::Zero(n, n);
  for (int k = order; k >= 0; --k) {
    if (k % 2)
      usum += c[k] * evenpow[k / 2];
    else
      vsum += c[k] * evenpow[k / 2];
  }
  M u = a * usum;
  return (vsum - u).partialPivLu().solve(M(vsum + u));
}

template <typename M>
M pade13(const M& a) {
  static const std::array<double, 14> b = {64764752532480000.,
                                           32382376266240000.,
                                           7771770303897600.,
                                           1187353796428800.,
                                           129060195264000.,
                                           10559470521600.,
                                           670442572800.,
                                           33522128640.,
                                           1323241920.,
                                           40840800.,
                                           960960.,
                                           16380.,
                                           182.,
                                           1.};
  const Eigen::Index n = a.rows();
  const M ident = M::Identity(n, n);
  const M a2 = a * a;
  const M a4 = a2 * a2;
  const M a6 = a2 * a4;
  M u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
             b[5] * a4 + b[3] * a2 + b[1] * ident);
  M v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
        b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(M(v + u));
}

template <typename M>
void probe_check(const M& a, const M& r, double nrm, double tol) {
  const Eigen::Index n = a.rows();
  const VectorOf<M> v = probe_vector<M>(n);
  const VectorOf<M> y = r * v;
  int c = 0;
  if (nrm > 4.0) c = static_cast<int>(std::ceil(std::log2(nrm / 4.0)));
  if (c > 24) throw OracleError("expm: norm too large to verify");
  const M b = a * std::ldexp(1.0, -c);
  VectorOf<M> w = v;
  const long reps = 1L << c;
  for (long i = 0; i < reps; ++i) w = taylor_apply(b, w);
  const double scale = std::max({y.norm(), w.norm(), 1e-300});
  const double err = (y - w).norm() / scale;
  if (err > tol * std::max(1.0, static_cast<double>(reps)))
    throw OracleError("expm: probe residual " + std::to_string(err));
}

template <typename M>
M expm_impl(const M& a, double tol) {
  if (a.rows() != a.cols()) throw OracleError("expm: matrix not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return M(0, 0);
  if (!a.allFinite()) throw OracleError("expm: non-finite input");

  constexpr double th3 = 1.495585217958292e-2;
  constexpr double th5 = 2.539398330063230e-1;
  constexpr double th7 = 9.504178996162932e-1;
  constexpr double th9 = 2.097847961257068e0;
  constexpr double th13 = 5.371920351148152e0;

  const double nrm = one_norm(a);
  M r;
  if (nrm <= th3)
    r = pade_low(a, 3);
  else if (nrm <= th5)
    r = pade_low(a, 5);
  else if (nrm <= th7)
    r = pade_low(a, 7);
  else if (nrm <= th9)
    r = pade_low(a, 9);
  else {
    const int s =
        std::max(0, static_cast<int>(std::ceil(std::log2(nrm / th13))));
    if (s > 64) throw OracleError("expm: norm too large to scale");
    r = pade13(M(a * std::ldexp(1.0, -s)));
    for (int i = 0; i < s; ++i) r = r * r;
  }
  if (tol > 0.0) probe_check(a, r, nrm, tol);
  return r;
}

double rise(int j, int m) {
  double out = 1.0;
  for (int i = 1; i <= m; ++i) out *= j + i;
  return out;
}

int round_up4(int x) { return (x + 3) / 4 * 4; }

// Sum of the weights the (m, n)-addition would give the state, counting
// only Fock pairs that survive a cutoff of `gate` levels per mode.
double added_weight(const BlockState& s, int m, int n, int gate) {
  double total = 0.0;
  for (int d = -(s.dim - 1); d <= s.dim - 1; ++d) {
    const auto& b = s.block(d);
    const int j0 = std::max(d, 0);
    const int k0 = std::max(-d, 0);
    for (int t = 0; t < b.rows(); ++t) {
      const int j = t + j0;
      const int k = t + k0;
      if (j + m >= gate || k + n >= gate) continue;
      total += rise(j, m) * rise(k, n) * b(t, t);
    }
  }
  return total;
}

int analytic_start(const StateParams& p, const OracleConfig& cfg) {
  int jt = 0;
  if (p.nbar > 0.0) {
    const double lam = p.nbar / (p.nbar + 1.0);
    jt = static_cast<int>(std::ceil(std::log(1e-16) / std::log(lam)));
  }
  int js = 0;
  const double th = std::tanh(p.r);
  if (th > 0.0)
    js = static_cast<int>(std::ceil(std::log(1e-16) / std::log(th)));
  const int d0 = std::max(jt + js + p.m + p.n + cfg.pad, p.m + p.n + 12);
  return round_up4(d0);
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& m, double tol) {
  return expm_impl(m, tol);
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m, double tol) {
  return expm_impl(m, tol);
}

OracleConfig OracleConfig::from_env() {
  OracleConfig cfg;
  if (const char* s = std::getenv("PATMSTS_MAX_DIM")) {
    int v = 0;
    try {
      size_t used = 0;
      v = std::stoi(s, &used);
      if (used != std::string(s).size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw std::invalid_argument("PATMSTS_MAX_DIM must be an integer");
    }
    if (v < 16 || v > 4096)
      throw std::invalid_argument("PATMSTS_MAX_DIM out of [16, 4096]");
    cfg.max_dim = v;
  }
  return cfg;
}

LadderMap ladder_map(Op op, int dim, int d_in) {
  int dj = 0;
  int dk = 0;
  switch (op) {
    case Op::A: dj = -1; break;
    case Op::Adag: dj = 1; break;
    case Op::B: dk = -1; break;
    case Op::Bdag: dk = 1; break;
  }
  LadderMap m;
  m.d_in = d_in;
  m.d_out = d_in + dj - dk;
  const int lin = dim - std::abs(d_in);
  if (lin <= 0 || std::abs(m.d_out) > dim - 1) return m;  // empty
  m.shift = dj + std::max(d_in, 0) - std::max(m.d_out, 0);

  const int j0 = std::max(d_in, 0);
  const int k0 = std::max(-d_in, 0);
  std::vector<double> coeffs;
  int lo = -1;
  for (int t = 0; t < lin; ++t) {
    const int j = t + j0;
    const int k = t + k0;
    const int j2 = j + dj;
    const int k2 = k + dk;
    if (j2 < 0 || k2 < 0 || j2 >= dim || k2 >= dim) continue;
    if (lo < 0) lo = t;
    double c = 1.0;
    switch (op) {
      case Op::A: c = std::sqrt(static_cast<double>(j)); break;
      case Op::Adag: c = std::sqrt(static_cast<double>(j + 1)); break;
      case Op::B: c = std::sqrt(static_cast<double>(k)); break;
      case Op::Bdag: c = std::sqrt(static_cast<double>(k + 1)); break;
    }
    coeffs.push_back(c);
  }
  if (lo < 0) return m;  // nothing survives
  m.t_lo = lo;
  m.t_hi = lo + static_cast<int>(coeffs.size()) - 1;
  m.coeff = Eigen::Map<Eigen::VectorXd>(coeffs.data(), coeffs.size());
  return m;
}

LadderMap compose(const LadderMap& second, const LadderMap& first) {
  if (second.d_in != first.d_out)
    throw std::logic_error("compose: block mismatch");
  LadderMap m;
  m.d_in = first.d_in;
  m.d_out = second.d_out;
  m.shift = first.shift + second.shift;
  if (first.t_hi < first.t_lo || second.t_hi < second.t_lo) return m;
  const int lo = std::max(first.t_lo, second.t_lo - first.shift);
  const int hi = std::min(first.t_hi, second.t_hi - first.shift);
  if (hi < lo) return m;
  m.t_lo = lo;
  m.t_hi = hi;
  m.coeff.resize(hi - lo + 1);
  for (int t = lo; t <= hi; ++t)
    m.coeff(t - lo) = first.coeff(t - first.t_lo) *
                      second.coeff(t + first.shift - second.t_lo);
  return m;
}

Eigen::MatrixXd to_dense(const LadderMap& map, int dim) {
  const int rows = std::max(0, dim - std::abs(map.d_out));
  const int cols = std::max(0, dim - std::abs(map.d_in));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  for (int t = map.t_lo; t <= map.t_hi; ++t)
    out(t + map.shift, t) = map.coeff(t - map.t_lo);
  return out;
}

Eigen::MatrixXd annihilation(int dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 1; j < dim; ++j) a(j - 1, j) = std::sqrt(j);
  return a;
}

Eigen::VectorXd thermal_weights(double nbar, int dim) {
  if (!std::isfinite(nbar) || nbar < 0.0)
    throw std::invalid_argument("thermal occupation must be finite and >= 0");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
  if (nbar == 0.0) {
    p(0) = 1.0;
    return p;
  }
  const double lam = nbar / (nbar + 1.0);
  p(0) = 1.0;
  for (int j = 1; j < dim; ++j) p(j) = p(j - 1) * lam;
  p /= p.sum();
  return p;
}

Eigen::MatrixXcd displacement(int dim, cplx alpha, double tol) {
  struct Entry {
    cplx alpha;
    int dim;
    Eigen::MatrixXcd mat;
  };
  static std::deque<Entry> cache;
  for (const auto& e : cache)
    if (e.alpha == alpha && e.dim == dim) return e.mat;
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 1; j < dim; ++j) {
    gen(j, j - 1) = alpha * std::sqrt(static_cast<double>(j));
    gen(j - 1, j) = -std::conj(alpha) * std::sqrt(static_cast<double>(j));
  }
  Entry e{alpha, dim, expm(gen, tol)};
  cache.push_front(std::move(e));
  while (cache.size() > 32) cache.pop_back();
  return cache.front().mat;
}

Eigen::MatrixXd squeeze_block_generator(int dim, int d) {
  if (d < 0 || d >= dim)
    throw std::invalid_argument("difference index out of range");
  const int len = dim - d;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(len, len);
  for (int k = 0; k + 1 < len; ++k) {
    const double c = std::sqrt(static_cast<double>((k + d + 1) * (k + 1)));
    t(k + 1, k) = c;
    t(k, k + 1) = -c;
  }
  return t;
}

const std::vector<Eigen::MatrixXd>& squeeze_blocks(double r, int dim,
                                                   double tol) {
  if (!std::isfinite(r) || r < 0.0)
    throw std::invalid_argument("squeeze strength must be finite and >= 0");
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  struct Entry {
    double r;
    int dim;
    std::vector<Eigen::MatrixXd> us;
  };
  static std::deque<Entry> cache;
  for (const auto& e : cache)
    if (e.r == r && e.dim == dim) return e.us;

  Entry e{r, dim, {}};
  e.us.reserve(dim);
  // The Taylor probe inside expm scales with the generator norm, so spot
  // check a stride of blocks; every block gets the cheap orthogonality probe.
  const int stride = std::max(1, dim / 8);
  for (int d = 0; d < dim; ++d) {
    const bool deep = (d % stride == 0) || (d >= dim - 2);
    Eigen::MatrixXd u =
        expm(Eigen::MatrixXd(r * squeeze_block_generator(dim, d)),
             deep ? tol : -1.0);
    const Eigen::VectorXd v = probe_vector<Eigen::MatrixXd>(u.rows());
    const double orth = (u.transpose() * (u * v) - v).norm();
    if (orth > 1e-10)
      throw OracleError("squeeze block lost orthogonality: " +
                        std::to_string(orth));
    e.us.push_back(std::move(u));
  }
  cache.push_front(std::move(e));
  while (cache.size() > 2) cache.pop_back();
  return cache.front().us;
}

BlockState build_tmsts(double r, double nbar, int dim, double tol) {
  if (dim < 4) throw std::invalid_argument("dimension must be >= 4");
  const auto& us = squeeze_blocks(r, dim, tol);
  const Eigen::VectorXd p = thermal_weights(nbar, dim);
  BlockState s;
  s.dim = dim;
  s.norm = 1.0;
  s.blocks.resize(2 * dim - 1);
  for (int d = 0; d < dim; ++d) {
    const int len = dim - d;
    Eigen::VectorXd w(len);
    for (int t = 0; t < len; ++t) w(t) = p(t + d) * p(t);
    Eigen::MatrixXd b = us[d] * w.asDiagonal() * us[d].transpose();
    if (d > 0) s.block(-d) = b;
    s.block(d) = std::move(b);
  }
  return s;
}

BlockState add_photons(const BlockState& s, int m, int n) {
  if (m < 0 || n < 0)
    throw std::invalid_argument("photon additions must be >= 0");
  if (m == 0 && n == 0) return s;
  const int dim = s.dim;
  BlockState out;
  out.dim = dim;
  out.blocks.resize(2 * dim - 1);
  for (int d = -(dim - 1); d <= dim - 1; ++d)
    out.block(d) = Eigen::MatrixXd::Zero(dim - std::abs(d), dim - std::abs(d));

  for (int din = -(dim - 1); din <= dim - 1; ++din) {
    const int dout = din + m - n;
    if (std::abs(dout) > dim - 1) continue;
    const int lin = dim - std::abs(din);
    const int lout = dim - std::abs(dout);
    const int delta = std::max(din, 0) + m - std::max(dout, 0);
    const int ls = std::min(lin, lout - delta);
    if (ls <= 0) continue;
    const int j0 = std::max(din, 0);
    const int k0 = std::max(-din, 0);
    Eigen::VectorXd c(ls);
    for (int t = 0; t < ls; ++t)
      c(t) = std::sqrt(rise(t + j0, m) * rise(t + k0, n));
    out.block(dout).block(delta, delta, ls, ls) +=
        (c * c.transpose())
            .cwiseProduct(s.block(din).topLeftCorner(ls, ls));
  }
  const double w = trace_total(out);
  if (!std::isfinite(w) || w <= 0.0)
    throw OracleError("photon addition weight vanished");
  for (auto& b : out.blocks) b /= w;
  out.norm = s.norm * w;
  return out;
}

int truncation_select(const StateParams& p, const OracleConfig& cfg) {
  derive(p);  // input validation
  const int floor_dim = round_up4(p.m + p.n + 12);
  const int cap = cfg.max_dim / 4 * 4;
  if (cap < floor_dim)
    throw OracleError("max_dim below the smallest usable cutoff");

  int d0 = std::min(analytic_start(p, cfg), cap);
  while (true) {
    const BlockState ref = build_tmsts(p.r, p.nbar, d0, cfg.expm_tol);
    // Guide pass: restrict the d0 build to smaller cutoffs.
    int guide = -1;
    for (int c = floor_dim; c + 4 <= d0; c += 4) {
      const double w0 = added_weight(ref, p.m, p.n, c);
      const double w1 = added_weight(ref, p.m, p.n, c + 4);
      if (w1 > 0.0 && std::abs(w1 - w0) <= cfg.trunc_tol * w1) {
        guide = c;
        break;
      }
    }
    if (guide >= 0) {
      // Confirm on genuinely rebuilt cutoffs.
      double prev = added_weight(build_tmsts(p.r, p.nbar, guide, cfg.expm_tol),
                                 p.m, p.n, guide);
      for (int c = guide; c + 4 <= d0; c += 4) {
        const double next = added_weight(
            build_tmsts(p.r, p.nbar, c + 4, cfg.expm_tol), p.m, p.n, c + 4);
        if (std::abs(next - prev) <= cfg.trunc_tol * next) return c + 4;
        prev = next;
      }
    }
    if (d0 >= cap)
      throw OracleError("truncation did not converge below max_dim");
    d0 = std::min(round_up4(2 * d0), cap);
  }
}

BlockState build_patmsts(const StateParams& p, const OracleConfig& cfg) {
  const int dim = truncation_select(p, cfg);
  return add_photons(build_tmsts(p.r, p.nbar, dim, cfg.expm_tol), p.m, p.n);
}

double oracle_expectation(const BlockState& s, const std::vector<Op>& word) {
  if (word.empty()) return trace_total(s);
  double total = 0.0;
  for (int d = -(s.dim - 1); d <= s.dim - 1; ++d) {
    LadderMap cur;
    cur.d_in = cur.d_out = d;
    cur.t_lo = 0;
    cur.t_hi = s.dim - std::abs(d) - 1;
    cur.coeff = Eigen::VectorXd::Ones(cur.t_hi + 1);
    bool dead = false;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      cur = compose(ladder_map(*it, s.dim, cur.d_out), cur);
      if (cur.t_hi < cur.t_lo) {
        dead = true;
        break;
      }
    }
    if (dead || cur.d_out != d) continue;
    const auto& rho = s.block(d);
    for (int t = cur.t_lo; t <= cur.t_hi; ++t)
      total += rho(t + cur.shift, t) * cur.coeff(t - cur.t_lo);
  }
  return total;
}

double oracle_pnd(const BlockState& s, int ma, int nb) {
  if (ma < 0 || nb < 0)
    throw std::invalid_argument("photon counts must be >= 0");
  if (ma >= s.dim || nb >= s.dim) return 0.0;
  return s.block(ma - nb)(std::min(ma, nb), std::min(ma, nb));
}

namespace {

// tr(rho (Xa (x) Xb)) over the block decomposition.
cplx block_contract(const BlockState& s, const Eigen::MatrixXcd& xa,
                    const Eigen::MatrixXcd& xb) {
  cplx acc{0.0, 0.0};
  for (int d = -(s.dim - 1); d <= s.dim - 1; ++d) {
    const int len = s.dim - std::abs(d);
    const int j0 = std::max(d, 0);
    const int k0 = std::max(-d, 0);
    acc += (s.block(d).cast<cplx>().cwiseProduct(
                xa.block(j0, j0, len, len).cwiseProduct(
                    xb.block(k0, k0, len, len))))
               .sum();
  }
  return acc;
}

}  // namespace

double oracle_wigner(const BlockState& s, cplx alpha, cplx beta) {
  const Eigen::MatrixXcd da = displacement(s.dim, alpha);
  const Eigen::MatrixXcd db = displacement(s.dim, beta);
  Eigen::VectorXcd par(s.dim);
  for (int j = 0; j < s.dim; ++j) par(j) = (j % 2) ? -1.0 : 1.0;
  const Eigen::MatrixXcd xa = da * par.asDiagonal() * da.adjoint();
  const Eigen::MatrixXcd xb = db * par.asDiagonal() * db.adjoint();
  return block_contract(s, xa, xb).real() / kPiSq;
}

cplx oracle_cf(const BlockState& s, cplx alpha, cplx beta) {
  return block_contract(s, displacement(s.dim, alpha),
                        displacement(s.dim, beta));
}

double oracle_qfunc(const BlockState& s, cplx alpha, cplx beta) {
  Eigen::VectorXcd va(s.dim);
  Eigen::VectorXcd vb(s.dim);
  va(0) = std::exp(-0.5 * std::norm(alpha));
  vb(0) = std::exp(-0.5 * std::norm(beta));
  for (int j = 1; j < s.dim; ++j) {
    va(j) = va(j - 1) * alpha / std::sqrt(static_cast<double>(j));
    vb(j) = vb(j - 1) * beta / std::sqrt(static_cast<double>(j));
  }
  cplx acc{0.0, 0.0};
  for (int d = -(s.dim - 1); d <= s.dim - 1; ++d) {
    const int len = s.dim - std::abs(d);
    const int j0 = std::max(d, 0);
    const int k0 = std::max(-d, 0);
    Eigen::VectorXcd w(len);
    for (int t = 0; t < len; ++t) w(t) = va(t + j0) * vb(t + k0);
    acc += w.dot(s.block(d).cast<cplx>() * w);
  }
  return acc.real() / kPiSq;
}

double trace_total(const BlockState& s) {
  double tr = 0.0;
  for (const auto& b : s.blocks) tr += b.trace();
  return tr;
}

double hermiticity_defect(const BlockState& s) {
  double worst = 0.0;
  for (const auto& b : s.blocks)
    worst = std::max(worst,
                     (b - Eigen::MatrixXd(b.transpose())).cwiseAbs().maxCoeff());
  return worst;
}

double min_eigenvalue(const BlockState& s) {
  double lo = 0.0;
  for (const auto& b : s.blocks) {
    if (b.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b,
                                                      Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

}  // namespace patmsts::oracle
