#pragma once

// Window Gram matrices Φ_i(λ, window) and the standing-assumption checks.

#include "dhs/dynamics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dhs {

/// Φ_i(λ, window) = sum_{t in window} R(Y_i)*(t, λ) W(t) R(Y_i)(t, λ) with Y_i(c0) = I.
inline Mat gram_window(const CoefficientField& field, Side side, cplx lambda, SiteRange window, long c0,
                       const Tolerances& tol = {}) {
  if (!window.within(SiteRange(field.interval()))) throw InputError("window outside the interval");
  if (!window.contains_site(c0)) throw InputError("c0 must be a site of the window");
  const auto y = fundamental_matrix(side, field, lambda, c0, tol, window);
  Mat phi = weighted_gram(field, y, y, window);
  return 0.5 * (phi + phi.adjoint());
}

struct SiteCondition {
  long t = 0;
  double cond_i_minus_a = 0.0;
  double cond_i_minus_d = 0.0;
  bool invertible = false;
};

struct PhiSample {
  cplx lambda{};
  Side side = Side::first;
  double min_eig = 0.0;
  double max_eig = 0.0;
  int rank = 0;
  bool positive_definite = false;
};

struct ValidationReport {
  bool a1 = false;
  std::vector<SiteCondition> per_site;
  std::vector<PhiSample> phi;
  bool definite = false;
  bool rank_constant = false;  ///< rank of Φ identical across all samples of each side
  std::optional<SiteRange> smallest_passing_prefix;
  std::string verdict;
  std::string detail;
};

namespace detail {

inline PhiSample sample_phi(const CoefficientField& field, Side side, cplx lambda, SiteRange window,
                            const Tolerances& tol) {
  const Mat phi = gram_window(field, side, lambda, window, window.first, tol);
  const RealVec ev = hermitian_eigen_desc(phi).values;
  PhiSample s{lambda, side, ev(ev.size() - 1), ev(0), 0, false};
  const double cut = rank_cutoff(std::max(ev(0), 0.0), tol);
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > cut) ++s.rank;
  s.positive_definite = s.rank == ev.size();
  return s;
}

inline bool window_definite(const CoefficientField& field, SiteRange window, const std::vector<cplx>& lambdas,
                            const Tolerances& tol) {
  for (Side side : {Side::first, Side::second})
    for (cplx l : lambdas)
      if (!sample_phi(field, side, l, window, tol).positive_definite) return false;
  return true;
}

}  // namespace detail

/// Checks A1 on every site and the definiteness surrogate (Φ_i(λ, window) > 0
/// for every sampled λ and both sides).  A1 failures are reported, not thrown.
inline ValidationReport validate_system(const CoefficientField& field, SiteRange window,
                                        const std::vector<cplx>& lambdas, const Tolerances& tol = {}) {
  if (!window.within(SiteRange(field.interval()))) throw InputError("window outside the interval");
  if (lambdas.empty()) throw InputError("at least one spectral parameter sample is required");
  ValidationReport rep;
  const int n = field.n();
  const Mat id = Mat::Identity(n, n);
  rep.a1 = true;
  bool a1_window = true;
  for (long t = field.interval().a; t <= field.interval().b; ++t) {
    const auto& b = field.at(t);
    SiteCondition c{t, condition_number(id - b.A), condition_number(id - b.D), false};
    c.invertible = c.cond_i_minus_a <= tol.cond_ceiling && c.cond_i_minus_d <= tol.cond_ceiling;
    if (!c.invertible) {
      rep.a1 = false;
      if (window.contains_site(t)) a1_window = false;
    }
    rep.per_site.push_back(c);
  }
  if (!a1_window) {
    rep.verdict = "fail";
    rep.detail = "assumption A1 fails inside the window; Φ cannot be propagated";
    return rep;
  }
  rep.definite = true;
  rep.rank_constant = true;
  for (Side side : {Side::first, Side::second}) {
    std::optional<int> rank;
    for (cplx l : lambdas) {
      PhiSample s = detail::sample_phi(field, side, l, window, tol);
      rep.definite = rep.definite && s.positive_definite;
      if (rank && *rank != s.rank) rep.rank_constant = false;
      rank = s.rank;
      rep.phi.push_back(s);
    }
  }
  if (rep.definite) {
    for (long last = window.first; last <= window.last; ++last) {
      SiteRange w(window.first, last);
      if (detail::window_definite(field, w, lambdas, tol)) {
        rep.smallest_passing_prefix = w;
        break;
      }
    }
  }
  const bool ok = rep.a1 && rep.definite;
  rep.verdict = ok ? "pass" : "fail";
  if (!rep.a1)
    rep.detail = "assumption A1 fails at one or more sites";
  else if (!rep.definite)
    rep.detail = "definiteness surrogate fails: Φ is singular for at least one sample";
  else
    rep.detail = "A1 holds and Φ is positive definite for every sample";
  return rep;
}

}  // namespace dhs
