#pragma once

// Propagation of the forced system
//
//     J Δy(t) - (P_i(t) + λ W(t)) R(y)(t) = W(t) R(g)(t)
//
// for either side, written in blocked form:
//
//     (I - A) u(t+1) = u(t) + (B + λ W2) v(t) + W2 g_v(t)
//     v(t+1)         = (I - D) v(t) + (C - λ W1) u(t+1) - W1 g_u(t+1)
//
// with (A, B, C, D) read from P on side 1 and from P* on side 2.

#include "dhs/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dhs {

/// C^{2n}-valued sequence on the index range [first, last + 1] of a SiteRange.
struct Trajectory {
  int n = 0;
  SiteRange sites;
  std::vector<Vec> values;

  Trajectory() = default;
  Trajectory(int n_, SiteRange s) : n(n_), sites(s), values(static_cast<std::size_t>(s.points()), Vec::Zero(2 * n_)) {}
  Trajectory(int n_, const IntegerInterval& iv) : Trajectory(n_, SiteRange(iv)) {}

  long first_index() const { return sites.first; }
  long last_index() const { return sites.last + 1; }

  Vec& at(long t) {
    check(t);
    return values[static_cast<std::size_t>(t - sites.first)];
  }
  const Vec& at(long t) const {
    check(t);
    return values[static_cast<std::size_t>(t - sites.first)];
  }
  Vec u(long t) const { return at(t).head(n); }
  Vec v(long t) const { return at(t).tail(n); }

  /// R(y)(t) = (u(t+1); v(t)), defined for sites t.
  Vec shift(long t) const {
    if (!sites.contains_site(t)) throw InputError("shift requested outside the site range at t=" + std::to_string(t));
    Vec r(2 * n);
    r << u(t + 1), v(t);
    return r;
  }

  /// Stacked values, index (t - first) * 2n + j.
  Vec flatten() const {
    Vec out(static_cast<Eigen::Index>(values.size()) * 2 * n);
    for (std::size_t k = 0; k < values.size(); ++k) out.segment(static_cast<Eigen::Index>(k) * 2 * n, 2 * n) = values[k];
    return out;
  }
  static Trajectory from_flat(int n, SiteRange s, const Vec& flat) {
    Trajectory y(n, s);
    if (flat.size() != s.points() * 2 * n) throw InputError("flat vector length does not match the site range");
    for (std::size_t k = 0; k < y.values.size(); ++k) y.values[k] = flat.segment(static_cast<Eigen::Index>(k) * 2 * n, 2 * n);
    return y;
  }

  Trajectory& operator+=(const Trajectory& o) {
    same_shape(o);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += o.values[k];
    return *this;
  }
  Trajectory& operator-=(const Trajectory& o) {
    same_shape(o);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] -= o.values[k];
    return *this;
  }
  Trajectory& operator*=(cplx c) {
    for (auto& x : values) x *= c;
    return *this;
  }
  friend Trajectory operator+(Trajectory x, const Trajectory& y) { return x += y; }
  friend Trajectory operator-(Trajectory x, const Trajectory& y) { return x -= y; }
  friend Trajectory operator*(cplx c, Trajectory x) { return x *= c; }

  double max_norm() const {
    double m = 0.0;
    for (const auto& x : values) m = std::max(m, x.norm());
    return m;
  }

 private:
  void check(long t) const {
    if (!sites.contains_index(t)) throw InputError("trajectory index " + std::to_string(t) + " out of range");
  }
  void same_shape(const Trajectory& o) const {
    if (n != o.n || !(sites == o.sites)) throw InputError("trajectory shape mismatch");
  }
};

/// Shift R applied to a bundle of column trajectories: top rows from t+1, bottom from t.
inline Mat shift_rows(const Mat& at_t, const Mat& at_t1, int n) {
  Mat r(2 * n, at_t.cols());
  r.topRows(n) = at_t1.topRows(n);
  r.bottomRows(n) = at_t.bottomRows(n);
  return r;
}

/// Per-site factorizations of I - A(t) and I - D(t) for one side and one λ.
/// Construction fails with NumericalError where assumption A1 breaks.
class Propagator {
 public:
  Propagator(const CoefficientField& field, Side side, cplx lambda, const Tolerances& tol = {},
             std::optional<SiteRange> range = std::nullopt)
      : field_(&field), side_(side), lambda_(lambda), range_(range.value_or(SiteRange(field.interval()))) {
    if (!range_.within(SiteRange(field.interval()))) throw InputError("propagation range outside the interval");
    const int n = field.n();
    const Mat id = Mat::Identity(n, n);
    for (long t = range_.first; t <= range_.last; ++t) {
      SiteBlocks b = field.blocks(side, t);
      const Mat ima = id - b.A;
      const Mat imd = id - b.D;
      const double ca = condition_number(ima);
      const double cd = condition_number(imd);
      if (!(ca <= tol.cond_ceiling) || !(cd <= tol.cond_ceiling))
        throw NumericalError("assumption A1 fails at t=" + std::to_string(t) + " (cond(I-A)=" + std::to_string(ca) +
                             ", cond(I-D)=" + std::to_string(cd) + ")");
      sites_.push_back(Site{Eigen::PartialPivLU<Mat>(ima), Eigen::PartialPivLU<Mat>(imd), b});
    }
  }

  const CoefficientField& field() const { return *field_; }
  Side side() const { return side_; }
  cplx lambda() const { return lambda_; }
  const SiteRange& range() const { return range_; }
  int n() const { return field_->n(); }

  /// y(t+1) from y(t); `rg` is R(g)(t) (empty for the homogeneous system).
  Mat forward(long t, const Mat& y, const Mat& rg = Mat()) const {
    const Site& s = site(t);
    const int n = this->n();
    const auto& b = s.blocks;
    Mat rhs_u = y.topRows(n) + (b.B + lambda_ * b.W2) * y.bottomRows(n);
    if (rg.size()) rhs_u += b.W2 * rg.bottomRows(n);
    Mat out(2 * n, y.cols());
    out.topRows(n) = s.ima.solve(rhs_u);
    out.bottomRows(n) = y.bottomRows(n) - b.D * y.bottomRows(n) + (b.C - lambda_ * b.W1) * out.topRows(n);
    if (rg.size()) out.bottomRows(n) -= b.W1 * rg.topRows(n);
    return out;
  }

  /// y(t) from y(t+1); the algebraic inverse of forward.
  Mat backward(long t, const Mat& y1, const Mat& rg = Mat()) const {
    const Site& s = site(t);
    const int n = this->n();
    const auto& b = s.blocks;
    Mat rhs_v = y1.bottomRows(n) - (b.C - lambda_ * b.W1) * y1.topRows(n);
    if (rg.size()) rhs_v += b.W1 * rg.topRows(n);
    Mat out(2 * n, y1.cols());
    out.bottomRows(n) = s.imd.solve(rhs_v);
    out.topRows(n) = y1.topRows(n) - b.A * y1.topRows(n) - (b.B + lambda_ * b.W2) * out.bottomRows(n);
    if (rg.size()) out.topRows(n) -= b.W2 * rg.bottomRows(n);
    return out;
  }

  /// Solution bundle on [first, last+1] with y(t0) = y0, forced by `g`
  /// (a bundle of the same index range, or empty for the homogeneous case).
  std::vector<Mat> propagate(long t0, const Mat& y0, const std::vector<Mat>& g = {}) const {
    if (!range_.contains_index(t0)) throw InputError("initial index " + std::to_string(t0) + " outside the range");
    const auto pts = static_cast<std::size_t>(range_.points());
    if (!g.empty() && g.size() != pts) throw InputError("forcing bundle has the wrong length");
    const int n = this->n();
    std::vector<Mat> y(pts);
    auto idx = [&](long t) { return static_cast<std::size_t>(t - range_.first); };
    auto rg = [&](long t) { return g.empty() ? Mat() : shift_rows(g[idx(t)], g[idx(t + 1)], n); };
    y[idx(t0)] = y0;
    for (long t = t0; t <= range_.last; ++t) y[idx(t + 1)] = forward(t, y[idx(t)], rg(t));
    for (long t = t0 - 1; t >= range_.first; --t) y[idx(t)] = backward(t, y[idx(t + 1)], rg(t));
    return y;
  }

 private:
  struct Site {
    Eigen::PartialPivLU<Mat> ima, imd;
    SiteBlocks blocks;
  };
  const Site& site(long t) const {
    if (!range_.contains_site(t)) throw InputError("step requested outside the range at t=" + std::to_string(t));
    return sites_[static_cast<std::size_t>(t - range_.first)];
  }

  const CoefficientField* field_;
  Side side_;
  cplx lambda_;
  SiteRange range_;
  std::vector<Site> sites_;
};

enum class Direction { forward, backward };

/// One step of the homogeneous system: y(t) -> y(t+1) forward, y(t+1) -> y(t) backward.
inline Vec step(Side side, const CoefficientField& field, cplx lambda, const Vec& y, long t, Direction dir,
                const Tolerances& tol = {}) {
  Propagator p(field, side, lambda, tol, SiteRange(t, t));
  return dir == Direction::forward ? Vec(p.forward(t, y)) : Vec(p.backward(t, y));
}

/// Y(t) for t on [first, last+1] with Y(c0) = I.
struct FundamentalMatrix {
  Side side = Side::first;
  cplx lambda{};
  long c0 = 0;
  int n = 0;
  SiteRange sites;
  std::vector<Mat> values;

  const Mat& at(long t) const {
    if (!sites.contains_index(t)) throw InputError("fundamental matrix index out of range");
    return values[static_cast<std::size_t>(t - sites.first)];
  }
  Mat shift(long t) const { return shift_rows(at(t), at(t + 1), n); }

  Trajectory column(Eigen::Index j) const {
    Trajectory y(n, sites);
    for (std::size_t k = 0; k < values.size(); ++k) y.values[k] = values[k].col(j);
    return y;
  }
  Trajectory apply(const Vec& xi) const {
    Trajectory y(n, sites);
    for (std::size_t k = 0; k < values.size(); ++k) y.values[k] = values[k] * xi;
    return y;
  }
};

inline FundamentalMatrix fundamental_matrix(Side side, const CoefficientField& field, cplx lambda, long c0,
                                            const Tolerances& tol = {}, std::optional<SiteRange> range = std::nullopt) {
  Propagator p(field, side, lambda, tol, range);
  const int n = field.n();
  return FundamentalMatrix{side, lambda, c0, n, p.range(), p.propagate(c0, Mat::Identity(2 * n, 2 * n))};
}

/// Forcing bundle of a single trajectory.
inline std::vector<Mat> as_bundle(const Trajectory& g) {
  std::vector<Mat> b(g.values.size());
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = g.values[k];
  return b;
}

/// Solution of the forced system with y(t0) = y0, on the site range of `g`.
inline Trajectory solve_forced_ivp(Side side, const CoefficientField& field, cplx lambda, const Trajectory& g, long t0,
                                   const Vec& y0, const Tolerances& tol = {}) {
  if (g.n != field.n()) throw InputError("forcing has the wrong block size");
  if (y0.size() != 2 * field.n()) throw InputError("initial value has the wrong length");
  Propagator p(field, side, lambda, tol, g.sites);
  auto vals = p.propagate(t0, y0, as_bundle(g));
  Trajectory y(field.n(), g.sites);
  for (std::size_t k = 0; k < vals.size(); ++k) y.values[k] = vals[k];
  return y;
}

/// Scaled residual of the forced system at every site of y.sites:
/// ||J Δy - (P + λW) R(y) - W R(g)|| / (1 + ||y(t)|| + ||y(t+1)|| + ||(P + λW) R(y)|| + ||W R(g)||).
inline std::vector<double> residuals(Side side, const CoefficientField& field, cplx lambda, const Trajectory& y,
                                     const Trajectory* g = nullptr) {
  const int n = field.n();
  const Mat j = symplectic_j(n);
  std::vector<double> out;
  for (long t = y.sites.first; t <= y.sites.last; ++t) {
    const Mat pw = field.p_matrix(side, t) + lambda * field.w_matrix(t);
    const Vec lhs = j * (y.at(t + 1) - y.at(t));
    const Vec pr = pw * y.shift(t);
    Vec wg = Vec::Zero(2 * n);
    if (g) wg = field.w_matrix(t) * g->shift(t);
    const double scale = 1.0 + y.at(t).norm() + y.at(t + 1).norm() + pr.norm() + wg.norm();
    out.push_back((lhs - pr - wg).norm() / scale);
  }
  return out;
}

inline double max_residual(Side side, const CoefficientField& field, cplx lambda, const Trajectory& y,
                           const Trajectory* g = nullptr) {
  double m = 0.0;
  for (double r : residuals(side, field, lambda, y, g)) m = std::max(m, r);
  return m;
}

/// Variation-of-constants representation through the fundamental matrices of
/// both sides: with S(s) = R(Y_{3-i})*(s, conj λ) W(s) R(g)(s),
///   y(t) = Y_i(t) y0 - Y_i(t) J sum_{s=c0}^{t-1} S(s)   for t > c0,
///   y(t) = Y_i(t) y0 + Y_i(t) J sum_{s=t}^{c0-1} S(s)   for t < c0.
inline Trajectory solve_voc(Side side, const CoefficientField& field, cplx lambda, const Trajectory& g, long c0,
                            const Vec& y0, const Tolerances& tol = {}) {
  const int n = field.n();
  const auto range = g.sites;
  if (!range.contains_index(c0)) throw InputError("c0 outside the forcing range");
  const auto yi = fundamental_matrix(side, field, lambda, c0, tol, range);
  const auto yo = fundamental_matrix(other(side), field, std::conj(lambda), c0, tol, range);
  const Mat j = symplectic_j(n);
  auto term = [&](long s) -> Vec { return yo.shift(s).adjoint() * field.w_matrix(s) * g.shift(s); };

  Trajectory y(n, range);
  y.at(c0) = y0;
  Vec acc = Vec::Zero(2 * n);
  for (long t = c0 + 1; t <= range.last + 1; ++t) {
    acc += term(t - 1);
    y.at(t) = yi.at(t) * y0 - yi.at(t) * (j * acc);
  }
  acc.setZero();
  for (long t = c0 - 1; t >= range.first; --t) {
    acc += term(t);
    y.at(t) = yi.at(t) * y0 + yi.at(t) * (j * acc);
  }
  return y;
}

/// Weighted semi-inner product <y, z> = sum_t R(z)*(t) W(t) R(y)(t) over the sites of y.
inline cplx weighted_inner(const CoefficientField& field, const Trajectory& y, const Trajectory& z) {
  if (!(y.sites == z.sites)) throw InputError("weighted inner product of trajectories on different ranges");
  cplx s = 0.0;
  for (long t = y.sites.first; t <= y.sites.last; ++t) s += z.shift(t).dot(field.w_matrix(t) * y.shift(t));
  return s;
}

/// Sum of R(z)* W R(y) per site, as a matrix when y and z are column bundles.
inline Mat weighted_gram(const CoefficientField& field, const FundamentalMatrix& y, const FundamentalMatrix& z,
                         SiteRange window) {
  Mat g = Mat::Zero(z.values.front().cols(), y.values.front().cols());
  for (long t = window.first; t <= window.last; ++t) g += z.shift(t).adjoint() * field.w_matrix(t) * y.shift(t);
  return g;
}

struct IdentityReport {
  cplx sum_side{};
  cplx boundary_side{};
  double gap = 0.0;
  double scaled_gap = 0.0;
  double residual_x = 0.0;
  double residual_y = 0.0;
  // Homogeneous-pair data, filled when a spectral parameter is supplied.
  std::optional<cplx> lambda;
  double conservation_error = 0.0;  ///< max_t scaled ||Y2*(t, conj λ) J Y1(t, λ) - J||
  double wronskian_variation = 0.0; ///< max_t scaled deviation of y2* J y1 from its value at the first index
  bool pass = false;
};

/// Matrix conservation and Wronskian constancy for the homogeneous systems at λ.
inline void conservation_check(const CoefficientField& field, cplx lambda, long c0, IdentityReport& rep,
                               const Tolerances& tol = {}) {
  const int n = field.n();
  const Mat j = symplectic_j(n);
  const auto y1 = fundamental_matrix(Side::first, field, lambda, c0, tol);
  const auto y2 = fundamental_matrix(Side::second, field, std::conj(lambda), c0, tol);
  const long t0 = y1.sites.first;
  const Mat w0 = y2.at(t0).adjoint() * j * y1.at(t0);
  const double scale0 = y1.at(t0).norm() * y2.at(t0).norm();
  double cons = 0.0, wr = 0.0;
  for (long t = y1.sites.first; t <= y1.sites.last + 1; ++t) {
    const double st = y1.at(t).norm() * y2.at(t).norm();
    const Mat w = y2.at(t).adjoint() * j * y1.at(t);
    cons = std::max(cons, (w - j).norm() / (1.0 + st));
    wr = std::max(wr, (w - w0).norm() / (1.0 + std::max(st, scale0)));
  }
  rep.lambda = lambda;
  rep.conservation_error = cons;
  rep.wronskian_variation = wr;
}

/// Both sides of the summation identity
///   sum_{t=s}^{k} [R(y)* W R(f) - R(g)* W R(x)] = y* J x |_s^{k+1}
/// for L1 x = W R(f) and L2 y = W R(g).  The inputs are re-checked against
/// their systems and rejected when the residual exceeds the tolerance.
inline IdentityReport lagrange_report(const CoefficientField& field, const Trajectory& x, const Trajectory& f,
                                      const Trajectory& y, const Trajectory& g, long s, long k,
                                      const Tolerances& tol = {}, std::optional<cplx> lambda = std::nullopt) {
  const int n = field.n();
  const Mat j = symplectic_j(n);
  IdentityReport rep;
  rep.residual_x = max_residual(Side::first, field, 0.0, x, &f);
  rep.residual_y = max_residual(Side::second, field, 0.0, y, &g);
  if (rep.residual_x > tol.residual || rep.residual_y > tol.residual)
    throw InputError("lagrange_report inputs do not solve their systems (residuals " + std::to_string(rep.residual_x) +
                     ", " + std::to_string(rep.residual_y) + ")");
  if (s > k || !x.sites.contains_site(s) || !x.sites.contains_site(k) || !y.sites.contains_site(s) ||
      !y.sites.contains_site(k))
    throw InputError("summation range outside the trajectories");
  double mag = 0.0;
  for (long t = s; t <= k; ++t) {
    const Mat w = field.w_matrix(t);
    const cplx a = y.shift(t).dot(w * f.shift(t));
    const cplx b = g.shift(t).dot(w * x.shift(t));
    rep.sum_side += a - b;
    mag += std::abs(a) + std::abs(b);
  }
  const cplx end = y.at(k + 1).dot(j * x.at(k + 1));
  const cplx start = y.at(s).dot(j * x.at(s));
  rep.boundary_side = end - start;
  mag += std::abs(end) + std::abs(start);
  rep.gap = std::abs(rep.sum_side - rep.boundary_side);
  rep.scaled_gap = rep.gap / (1.0 + mag);
  bool ok = rep.scaled_gap <= tol.identity_gap;
  if (lambda) {
    conservation_check(field, *lambda, field.interval().a, rep, tol);
    ok = ok && rep.conservation_error <= tol.identity_gap && rep.wronskian_variation <= tol.identity_gap;
  }
  rep.pass = ok;
  return rep;
}

/// Solution of the two-point problem L_i y = W R(g) on the window [s, k] with
/// y(s) = α and y(k+1) = β.  Both trajectories live on the window.
struct PatchSolution {
  Trajectory g;
  Trajectory y;
  double boundary_residual = 0.0;
  double system_residual = 0.0;
};

/// Builds the patch from homogeneous solutions φ of the opposite side at λ = 0:
/// with G = sum R(Φ)* W R(Φ) over the window,
///   ψ1 = Φ c1, G c1 = Φ(k+1)* J β;  L_i u = W R(ψ1), u(s) = 0;
///   ψ2 = Φ c2, G c2 = Φ(s)* J α;    L_i v = -W R(ψ2), v(k+1) = 0;
/// and returns g = ψ1 - ψ2, y = u + v.  The summation identity pairs side-i
/// solutions with opposite-side solutions, which fixes the side of Φ.
inline PatchSolution patch_bvp(Side side, const CoefficientField& field, SiteRange window, const Vec& alpha,
                               const Vec& beta, const Tolerances& tol = {}) {
  const int n = field.n();
  if (alpha.size() != 2 * n || beta.size() != 2 * n) throw InputError("boundary data must have length 2n");
  if (!window.within(SiteRange(field.interval()))) throw InputError("patch window outside the interval");
  const Mat j = symplectic_j(n);
  const auto phi = fundamental_matrix(other(side), field, 0.0, window.first, tol, window);
  const Mat gram = weighted_gram(field, phi, phi, window);
  const auto eig = hermitian_eigen_desc(gram);
  const double emax = eig.values(0);
  const double emin = eig.values(eig.values.size() - 1);
  if (!(emax > 0.0) || emin <= tol.rank_rel * emax)
    throw NumericalError("patch Gram matrix is singular on the window: definiteness fails (min eigenvalue " +
                         std::to_string(emin) + ")");
  Eigen::LDLT<Mat> ldlt(0.5 * (gram + gram.adjoint()));
  const Vec c1 = ldlt.solve(phi.at(window.last + 1).adjoint() * j * beta);
  const Vec c2 = ldlt.solve(phi.at(window.first).adjoint() * j * alpha);
  const Trajectory psi1 = phi.apply(c1);
  const Trajectory psi2 = phi.apply(c2);
  const Vec zero = Vec::Zero(2 * n);
  const Trajectory u = solve_forced_ivp(side, field, 0.0, psi1, window.first, zero, tol);
  const Trajectory v = solve_forced_ivp(side, field, 0.0, cplx(-1.0) * psi2, window.last + 1, zero, tol);

  PatchSolution out{psi1 - psi2, u + v};
  const double bscale = 1.0 + alpha.norm() + beta.norm();
  out.boundary_residual =
      std::max((out.y.at(window.first) - alpha).norm(), (out.y.at(window.last + 1) - beta).norm()) / bscale;
  out.system_residual = max_residual(side, field, 0.0, out.y, &out.g);
  return out;
}

/// Zero extension of a window patch to a larger site range.  Entries of g that
/// the window equations never read (g_u(s), g_v(k+1)) are cleared so that the
/// extended pair solves the system wherever y vanishes outside the window.
inline std::pair<Trajectory, Trajectory> embed_patch(const PatchSolution& p, SiteRange target) {
  const int n = p.y.n;
  if (!p.y.sites.within(target)) throw InputError("patch window outside the target range");
  Trajectory y(n, target), g(n, target);
  for (long t = p.y.first_index(); t <= p.y.last_index(); ++t) {
    y.at(t) = p.y.at(t);
    g.at(t) = p.g.at(t);
  }
  g.at(p.y.first_index()).head(n).setZero();
  g.at(p.y.last_index()).tail(n).setZero();
  return {y, g};
}

}  // namespace dhs
