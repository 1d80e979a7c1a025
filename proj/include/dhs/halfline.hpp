#pragma once

// Truncation diagnostics for systems on the half-line [a, ∞).
//
// The scan counts square-summable solutions of the doubled system at λ = ±i.
// Solution bundles grow like μ^t for some directions and shrink like μ^{-t}
// for others, so the fundamental matrix is carried as an orthonormal frame
// with the growth factors kept in log form (QR after every step).  For
// direction j the weighted norm accumulated up to horizon T is
//   S_j(T) = sum_{t <= T} exp(2 L_j(t)) |W^{1/2} R(f_j)(t)|^2,
// where f_j is the j-th frame column and L_j the log of the product of the
// j-th diagonal entries of the triangular factors.  A direction counts as
// square summable when S_j stops growing between consecutive horizons.

#include "dhs/extension.hpp"
#include "dhs/random.hpp"

#include <functional>
#include <sstream>

namespace dhs {

/// Coefficient generator on [a, ∞).
struct HalfLineSystem {
  int n = 1;
  long a = 0;
  std::function<SiteBlocks(long)> blocks;

  /// Coefficients restricted to [a, b].
  CoefficientField truncate(long b) const {
    if (!blocks) throw InputError("half-line system has no coefficient generator");
    IntegerInterval iv(a, b, true);
    std::vector<SiteBlocks> s;
    s.reserve(static_cast<std::size_t>(iv.sites()));
    for (long t = a; t <= b; ++t) {
      try {
        s.push_back(blocks(t));
      } catch (const InputError&) {
        throw;
      } catch (const std::exception& e) {
        throw InputError("coefficient generator failed at t=" + std::to_string(t) + ": " + e.what());
      }
    }
    return CoefficientField(n, iv, std::move(s));
  }

  static HalfLineSystem constant(int n, long a, const SiteBlocks& b) {
    return HalfLineSystem{n, a, [b](long) { return b; }};
  }
  /// P ≡ 0, W = I.
  static HalfLineSystem free_system(int n, long a = 0) {
    const Mat z = Mat::Zero(n, n), id = Mat::Identity(n, n);
    return constant(n, a, SiteBlocks{z, z, z, z, id, id});
  }
  /// P ≡ 0, W(t) = 4^{-(t-a)} I: every solution is square summable.
  static HalfLineSystem decaying_weight(int n, long a = 0) {
    return HalfLineSystem{n, a, [n, a](long t) {
                            const Mat z = Mat::Zero(n, n);
                            const Mat w = std::pow(4.0, -static_cast<double>(t - a)) * Mat::Identity(n, n);
                            return SiteBlocks{z, z, z, z, w, w};
                          }};
  }
};

struct DirectionScan {
  std::vector<long> horizons;
  std::vector<RealVec> log_norms;  ///< per horizon, log S_j for each direction
  std::vector<int> estimates;      ///< per consecutive horizon pair (entry k compares k and k+1)
  RealVec growth_rates;            ///< mean log growth per step of each direction
  bool monotone = false;           ///< estimates nonincreasing in the horizon
  int estimate = 0;                ///< estimate at the last horizon pair
};

/// Frame scan of one system (side, λ) on the given field.
inline DirectionScan scan_directions(const CoefficientField& field, Side side, cplx lambda,
                                     const std::vector<long>& horizons, const Tolerances& tol = {}) {
  if (horizons.size() < 3) throw InputError("a scan needs at least three horizons");
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    if (horizons[k] < field.interval().a || horizons[k] > field.interval().b)
      throw InputError("horizon " + std::to_string(horizons[k]) + " outside the truncation");
    if (k && horizons[k] <= horizons[k - 1]) throw InputError("horizons must be strictly increasing");
  }
  const int n = field.n();
  const Eigen::Index m = 2 * n;
  const long a = field.interval().a;
  Propagator prop(field, side, lambda, tol, SiteRange(a, horizons.back()));

  DirectionScan out;
  out.horizons = horizons;
  Mat frame = Mat::Identity(m, m);
  RealVec logscale = RealVec::Zero(m);
  RealVec logsum = RealVec::Constant(m, -std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  for (long t = a; t <= horizons.back(); ++t) {
    const Mat ahead = prop.forward(t, frame);
    const Mat rf = shift_rows(frame, ahead, n);
    const Mat w = field.w_matrix(t);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double c = std::real(rf.col(j).dot(w * rf.col(j)));
      if (c <= 0.0) continue;
      const double term = 2.0 * logscale(j) + std::log(c);
      const double hi = std::max(logsum(j), term);
      logsum(j) = hi + std::log(std::exp(logsum(j) - hi) + std::exp(term - hi));
    }
    Eigen::HouseholderQR<Mat> qr(ahead);
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    frame = qr.householderQ() * Mat::Identity(m, m);
    for (Eigen::Index j = 0; j < m; ++j) logscale(j) += std::log(std::abs(r(j, j)));
    if (t == horizons[next]) {
      out.log_norms.push_back(logsum);
      ++next;
    }
  }
  out.growth_rates = logscale / static_cast<double>(horizons.back() - a + 1);
  for (std::size_t k = 0; k + 1 < out.log_norms.size(); ++k) {
    int count = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double prev = out.log_norms[k](j), cur = out.log_norms[k + 1](j);
      const double increment = std::isinf(cur) ? 0.0 : 1.0 - std::exp(prev - cur);
      if (increment < tol.stabilize_ratio) ++count;
    }
    out.estimates.push_back(count);
  }
  out.monotone = true;
  for (std::size_t k = 1; k < out.estimates.size(); ++k)
    if (out.estimates[k] > out.estimates[k - 1]) out.monotone = false;
  out.estimate = out.estimates.back();
  return out;
}

struct ScanReport {
  int n = 0;
  std::vector<long> horizons;
  DirectionScan plus, minus;              ///< doubled system at λ = i and λ = -i
  DirectionScan half_plus, half_minus;    ///< side 1 alone at λ = i and λ = -i
  bool limit_point = false;               ///< estimate 2n for both signs
  bool all_summable = false;              ///< estimate 4n for both signs
  std::string verdict;
};

inline ScanReport halfline_deficiency_scan(const HalfLineSystem& sys, const std::vector<long>& horizons,
                                           const Tolerances& tol = {}) {
  if (horizons.size() < 3) throw InputError("a scan needs at least three horizons");
  const auto field = sys.truncate(std::max(horizons.back(), sys.a + 1));
  const auto doubled = build_doubled(field);
  ScanReport rep;
  rep.n = sys.n;
  rep.horizons = horizons;
  rep.plus = scan_directions(doubled, Side::first, I_unit, horizons, tol);
  rep.minus = scan_directions(doubled, Side::first, -I_unit, horizons, tol);
  rep.half_plus = scan_directions(field, Side::first, I_unit, horizons, tol);
  rep.half_minus = scan_directions(field, Side::first, -I_unit, horizons, tol);
  const int n = sys.n;
  rep.limit_point = rep.plus.estimate == 2 * n && rep.minus.estimate == 2 * n;
  rep.all_summable = rep.plus.estimate == 4 * n && rep.minus.estimate == 4 * n;
  rep.verdict = rep.limit_point ? "limit point" : rep.all_summable ? "not limit point (all solutions summable)"
                                                                   : "not limit point";
  return rep;
}

/// horizon, direction norms at λ = i, at λ = -i, estimates (empty for the first horizon).
inline std::string scan_csv(const ScanReport& rep) {
  std::ostringstream os;
  os.precision(10);
  const Eigen::Index m = rep.plus.log_norms.empty() ? 0 : rep.plus.log_norms.front().size();
  os << "horizon";
  for (Eigen::Index j = 0; j < m; ++j) os << ",norm_plus_" << j;
  for (Eigen::Index j = 0; j < m; ++j) os << ",norm_minus_" << j;
  os << ",estimate_plus,estimate_minus\n";
  for (std::size_t k = 0; k < rep.horizons.size(); ++k) {
    os << rep.horizons[k];
    for (Eigen::Index j = 0; j < m; ++j) os << ',' << std::exp(0.5 * rep.plus.log_norms[k](j));
    for (Eigen::Index j = 0; j < m; ++j) os << ',' << std::exp(0.5 * rep.minus.log_norms[k](j));
    if (k == 0)
      os << ",,";
    else
      os << ',' << rep.plus.estimates[k - 1] << ',' << rep.minus.estimates[k - 1];
    os << '\n';
  }
  return os.str();
}

/// Eigenvalue moduli of the one-step transfer matrix of the doubled system
/// at λ for constant coefficients, with the count inside the unit circle.
struct TransferOracle {
  RealVec moduli;  ///< ascending
  int decaying = 0;
};

inline TransferOracle transfer_oracle(const HalfLineSystem& sys, cplx lambda, const Tolerances& tol = {}) {
  const auto doubled = build_doubled(sys.truncate(sys.a + 1));
  Propagator prop(doubled, Side::first, lambda, tol);
  const Eigen::Index m = 2 * doubled.n();
  const Mat step = prop.forward(sys.a, Mat::Identity(m, m));
  Eigen::ComplexEigenSolver<Mat> es(step, false);
  TransferOracle out;
  out.moduli = es.eigenvalues().cwiseAbs();
  std::sort(out.moduli.data(), out.moduli.data() + out.moduli.size());
  for (Eigen::Index j = 0; j < m; ++j)
    if (out.moduli(j) < 1.0 - 1e-9) ++out.decaying;
  return out;
}

namespace detail {

/// Values at `at` of the solutions whose value at a is frame(a) c, for the
/// d-dimensional subspace dominating backward propagation from `end`.
struct BackwardFrame {
  Mat at_a;                     ///< orthonormal frame at a
  std::vector<Mat> factors;     ///< triangular factors R_t, t = a .. end-1
  std::vector<Mat> frames;      ///< orthonormal frames at a .. end
  long a = 0;

  Vec value(long t, const Vec& c) const {
    Vec x = c;
    for (long s = a; s < t; ++s) {
      const Mat& r = factors[static_cast<std::size_t>(s - a)];
      x = r.triangularView<Eigen::Upper>().solve(x);
    }
    return frames[static_cast<std::size_t>(t - a)] * x;
  }
};

inline BackwardFrame backward_frame(const CoefficientField& field, cplx lambda, long end, Eigen::Index d, Rng& rng,
                                    const Tolerances& tol) {
  const long a = field.interval().a;
  const Eigen::Index m = 2 * field.n();
  Propagator prop(field, Side::first, lambda, tol, SiteRange(a, end - 1));
  BackwardFrame out;
  out.a = a;
  const auto pts = static_cast<std::size_t>(end - a + 1);
  out.frames.resize(pts);
  out.factors.resize(pts - 1);
  out.frames.back() = rng.subspace(m, d);
  for (long t = end - 1; t >= a; --t) {
    const Mat back = prop.backward(t, out.frames[static_cast<std::size_t>(t + 1 - a)]);
    Eigen::HouseholderQR<Mat> qr(back);
    out.frames[static_cast<std::size_t>(t - a)] = qr.householderQ() * Mat::Identity(m, d);
    // back = Q R, so a solution with frame coordinates x at t+1 has R x at t.
    out.factors[static_cast<std::size_t>(t - a)] = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  }
  out.at_a = out.frames.front();
  return out;
}

}  // namespace detail

struct CriterionReport {
  long horizon = 0;
  int trials = 0;
  int dim_plus = 0, dim_minus = 0;        ///< square-summable dimensions used
  double max_value = 0.0;                 ///< max |y2*(T) J y1(T)|
  double compact_max = 0.0;               ///< the same for compactly supported pairs alone
  std::vector<std::pair<long, double>> trend;  ///< first trial's value at intermediate horizons
  bool vanishes = false;
  bool consistent = false;                ///< vanishing agrees with the scan verdict
  ScanReport scan;
};

/// Boundary form at the horizon for pairs of doubled-maximal elements: the
/// square-summable solutions at λ = i and λ = -i plus compactly supported
/// patches near a.
inline CriterionReport limit_point_criterion_check(const HalfLineSystem& sys, long horizon, int trials, Rng& rng,
                                                   const Tolerances& tol = {}) {
  if (horizon < sys.a + 12) throw InputError("horizon too short for the criterion check");
  if (trials < 1) throw InputError("trial count must be positive");
  CriterionReport rep;
  rep.horizon = horizon;
  rep.trials = trials;
  const long span = horizon - sys.a;
  rep.scan = halfline_deficiency_scan(sys, {sys.a + span / 3, sys.a + 2 * span / 3, horizon}, tol);
  rep.dim_plus = rep.scan.plus.estimate;
  rep.dim_minus = rep.scan.minus.estimate;

  const long end = horizon + std::max<long>(20, span / 2);
  const auto doubled = build_doubled(sys.truncate(end));
  const int nn = doubled.n();
  const Mat j = symplectic_j(nn);
  const auto fp = detail::backward_frame(doubled, I_unit, end, rep.dim_plus, rng, tol);
  const auto fm = detail::backward_frame(doubled, -I_unit, end, rep.dim_minus, rng, tol);

  const SiteRange window(sys.a, sys.a + 4);
  auto compact = [&]() {
    auto p = patch_bvp(Side::first, doubled, window, rng.gaussian_vec(2 * nn), Vec::Zero(2 * nn), tol);
    return embed_patch(p, SiteRange(sys.a, horizon)).first;
  };
  for (int k = 0; k < trials; ++k) {
    Vec c1 = rng.gaussian_vec(rep.dim_plus), c2 = rng.gaussian_vec(rep.dim_minus);
    if (c1.size()) c1.normalize();
    if (c2.size()) c2.normalize();
    const Trajectory z1 = compact(), z2 = compact();
    const Vec y1 = (c1.size() ? fp.value(horizon, c1) : Vec::Zero(2 * nn)) + z1.at(horizon);
    const Vec y2 = (c2.size() ? fm.value(horizon, c2) : Vec::Zero(2 * nn)) + z2.at(horizon);
    rep.max_value = std::max(rep.max_value, std::abs(y2.dot(j * y1)));
    rep.compact_max = std::max(rep.compact_max, std::abs(z2.at(horizon).dot(j * z1.at(horizon))));
    if (k == 0) {
      for (long t : rep.scan.horizons) {
        const Vec a1 = c1.size() ? fp.value(t, c1) : Vec::Zero(2 * nn);
        const Vec a2 = c2.size() ? fm.value(t, c2) : Vec::Zero(2 * nn);
        rep.trend.emplace_back(t, std::abs(a2.dot(j * a1)));
      }
    }
  }
  rep.vanishes = rep.max_value <= tol.criterion_value;
  rep.consistent = rep.vanishes == rep.scan.limit_point;
  return rep;
}

}  // namespace dhs
