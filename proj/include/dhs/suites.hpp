#pragma once

// Seeded property suites, one per acceptance criterion.  Shared by the
// acceptance binary and the CLI.

#include "dhs/extension.hpp"
#include "dhs/halfline.hpp"
#include "dhs/random.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace dhs {

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  int instances = 100;
  int n_max = 3;
  long sites_min = 4;
  long sites_max = 20;
  std::vector<cplx> lambdas{0.0, I_unit, -I_unit, cplx(1.0, 1.0)};
  int random_q_per_dim = 20;
  int family_size = 50;
  long horizon = 60;
  int criterion_trials = 5;
  Tolerances tol;
};

struct SuiteResult {
  std::string name;
  std::string anchor;
  bool pass = false;
  int instances = 0;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
  double seconds = 0.0;
};

namespace detail {

inline std::uint64_t suite_seed(std::uint64_t seed, int id) {
  return seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id + 1));
}

inline CoefficientField draw_instance(const SuiteOptions& opt, int k, Rng& rng, bool hermitian = false, int n = 0) {
  RandomSystemOptions ro;
  ro.n = n > 0 ? n : 1 + k % opt.n_max;
  ro.sites = rng.integer(static_cast<int>(opt.sites_min), static_cast<int>(opt.sites_max));
  ro.hermitian = hermitian;
  return random_definite_field(ro, rng, {0.0}, opt.tol);
}

inline Trajectory random_trajectory(int n, SiteRange s, Rng& rng) {
  Trajectory y(n, s);
  for (auto& v : y.values) v = rng.gaussian_vec(2 * n);
  return y;
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace detail

/// 1. Y2*(t, conj λ) J Y1(t, λ) = J at every index.
inline SuiteResult conservation_suite(const SuiteOptions& opt) {
  SuiteResult r{"conservation", "matrix conservation law for the fundamental matrices"};
  Rng rng(detail::suite_seed(opt.seed, 1));
  double cons = 0.0, wr = 0.0;
  for (int k = 0; k < opt.instances; ++k) {
    const auto f = detail::draw_instance(opt, k, rng);
    const long c0 = rng.integer(static_cast<int>(f.interval().a), static_cast<int>(f.interval().b + 1));
    for (cplx l : opt.lambdas) {
      IdentityReport rep;
      conservation_check(f, l, c0, rep, opt.tol);
      cons = std::max(cons, rep.conservation_error);
      wr = std::max(wr, rep.wronskian_variation);
    }
  }
  r.instances = opt.instances;
  r.metrics = {{"max_conservation_error", cons}, {"max_wronskian_variation", wr}};
  r.pass = cons <= opt.tol.identity_gap && wr <= opt.tol.identity_gap;
  r.detail = "max scaled error " + detail::fmt(cons) + ", Wronskian drift " + detail::fmt(wr) + " over " +
             std::to_string(opt.lambdas.size()) + " spectral samples";
  return r;
}

/// 2. Summation identity on forced pairs over random subranges.
inline SuiteResult lagrange_suite(const SuiteOptions& opt) {
  SuiteResult r{"lagrange", "summation identity for forced solutions of both sides"};
  Rng rng(detail::suite_seed(opt.seed, 2));
  double gap = 0.0;
  for (int k = 0; k < opt.instances; ++k) {
    const auto f = detail::draw_instance(opt, k, rng);
    const int n = f.n();
    const SiteRange s(f.interval());
    const auto fx = detail::random_trajectory(n, s, rng);
    const auto gy = detail::random_trajectory(n, s, rng);
    const auto x = solve_forced_ivp(Side::first, f, 0.0, fx, s.first, rng.gaussian_vec(2 * n), opt.tol);
    const auto y = solve_forced_ivp(Side::second, f, 0.0, gy, s.last + 1, rng.gaussian_vec(2 * n), opt.tol);
    const long lo = rng.integer(static_cast<int>(s.first), static_cast<int>(s.last));
    const long hi = rng.integer(static_cast<int>(lo), static_cast<int>(s.last));
    gap = std::max(gap, lagrange_report(f, x, fx, y, gy, lo, hi, opt.tol).scaled_gap);
  }
  r.instances = opt.instances;
  r.metrics = {{"max_scaled_gap", gap}};
  r.pass = gap <= opt.tol.identity_gap;
  r.detail = "max scaled gap " + detail::fmt(gap);
  return r;
}

/// 3. Variation of constants against the forward/backward recursion.
inline SuiteResult voc_suite(const SuiteOptions& opt) {
  SuiteResult r{"variation_of_constants", "variation-of-constants formula against direct recursion"};
  Rng rng(detail::suite_seed(opt.seed, 3));
  double worst = 0.0;
  for (int k = 0; k < opt.instances; ++k) {
    const auto f = detail::draw_instance(opt, k, rng);
    const int n = f.n();
    const SiteRange s(f.interval());
    const cplx l = opt.lambdas[static_cast<std::size_t>(k) % opt.lambdas.size()];
    const Side side = k % 2 == 0 ? Side::first : Side::second;
    const long c0 = s.first + s.points() / 2;
    const auto g = detail::random_trajectory(n, s, rng);
    const Vec y0 = rng.gaussian_vec(2 * n);
    const auto yv = solve_voc(side, f, l, g, c0, y0, opt.tol);
    const auto yr = solve_forced_ivp(side, f, l, g, c0, y0, opt.tol);
    double diff = 0.0, mag = 0.0;
    for (long t = s.first; t <= s.last + 1; ++t) {
      diff = std::max(diff, (yv.at(t) - yr.at(t)).norm());
      mag = std::max(mag, yr.at(t).norm());
    }
    worst = std::max(worst, diff / std::max(1.0, mag));
  }
  r.instances = opt.instances;
  r.metrics = {{"max_relative_error", worst}};
  r.pass = worst <= opt.tol.voc_rel;
  r.detail = "max relative error " + detail::fmt(worst) + " (c0 at the midpoint)";
  return r;
}

/// 4. Two-point patches on the full interval and on a random definite subwindow.
inline SuiteResult patch_suite(const SuiteOptions& opt) {
  SuiteResult r{"patch", "compactly supported patch solutions with prescribed end values"};
  Rng rng(detail::suite_seed(opt.seed, 4));
  double bd = 0.0, sys = 0.0;
  int sub = 0;
  for (int k = 0; k < opt.instances; ++k) {
    const auto f = detail::draw_instance(opt, k, rng);
    const int n = f.n();
    const SiteRange full(f.interval());
    std::vector<SiteRange> windows{full};
    const long lo = rng.integer(static_cast<int>(full.first), static_cast<int>(full.last));
    const long hi = rng.integer(static_cast<int>(lo), static_cast<int>(full.last));
    const SiteRange w(lo, hi);
    if (!(w.first == full.first && w.last == full.last) && detail::window_definite(f, w, {0.0}, opt.tol)) {
      windows.push_back(w);
      ++sub;
    }
    for (const auto& win : windows)
      for (Side side : {Side::first, Side::second}) {
        const auto p = patch_bvp(side, f, win, rng.gaussian_vec(2 * n), rng.gaussian_vec(2 * n), opt.tol);
        bd = std::max(bd, p.boundary_residual);
        sys = std::max(sys, p.system_residual);
      }
  }
  r.instances = opt.instances;
  r.metrics = {{"max_boundary_residual", bd}, {"max_system_residual", sys}, {"subwindows", static_cast<double>(sub)}};
  r.pass = bd <= opt.tol.boundary_residual && sys <= opt.tol.residual;
  r.detail = "boundary " + detail::fmt(bd) + ", system " + detail::fmt(sys) + ", " + std::to_string(sub) +
             " definite subwindows";
  return r;
}

/// 5. adjoint(H_{1,0}) = H_2 and adjoint(H_{2,0}) = H_1, with H_1 rebuilt
/// from a second parametrization.
inline SuiteResult duality_suite(const SuiteOptions& opt) {
  SuiteResult r{"duality", "adjoints of the minimal relations are the maximal relations"};
  Rng rng(detail::suite_seed(opt.seed, 5));
  double a1 = 0.0, a2 = 0.0, alt = 0.0;
  int dim_fail = 0;
  for (int k = 0; k < opt.instances; ++k) {
    const auto f = detail::draw_instance(opt, k, rng);
    const HamiltonianRelationSet h1(f, Side::first, opt.tol), h2(f, Side::second, opt.tol);
    const auto d1 = adjoint(h1.minimal()), d2 = adjoint(h2.minimal());
    if (d1.dim() != h2.maximal().dim() || d2.dim() != h1.maximal().dim()) ++dim_fail;
    a1 = std::max(a1, relation_angle(d1, h2.maximal()));
    a2 = std::max(a2, relation_angle(d2, h1.maximal()));
    const long c0 = rng.integer(static_cast<int>(f.interval().a), static_cast<int>(f.interval().b + 1));
    alt = std::max(alt, relation_angle(maximal_from_ambient_basis(f, Side::first, h1.space(), c0, opt.tol), h1.maximal()));
  }
  const double tol = opt.tol.subspace_angle;
  r.instances = opt.instances;
  r.metrics = {{"max_angle_h10", a1}, {"max_angle_h20", a2}, {"max_angle_alt_basis", alt},
               {"dimension_mismatches", static_cast<double>(dim_fail)}};
  r.pass = dim_fail == 0 && a1 <= tol && a2 <= tol && alt <= tol;
  r.detail = "angles " + detail::fmt(a1) + ", " + detail::fmt(a2) + "; second parametrization " + detail::fmt(alt);
  return r;
}

/// 6. Patch-corrected maximal elements against the boundary-zero subset.
inline SuiteResult minimal_suite(const SuiteOptions& opt) {
  SuiteResult r{"minimal", "boundary-zero elements of the maximal relation form the minimal relation"};
  Rng rng(detail::suite_seed(opt.seed, 6));
  double ang = 0.0, bd = 0.0, sys = 0.0;
  int dim_fail = 0, ill = 0;
  for (int k = 0; k < opt.instances; ++k) {
    const auto f = detail::draw_instance(opt, k, rng);
    for (Side side : {Side::first, Side::second}) {
      const HamiltonianRelationSet set(f, side, opt.tol);
      if (!set.well_defined()) ++ill;
      const auto pre = preminimal_via_patches(set);
      if (pre.relation.dim() != set.minimal().dim()) ++dim_fail;
      ang = std::max(ang, relation_angle(pre.relation, set.minimal()));
      bd = std::max(bd, pre.boundary_residual);
      sys = std::max(sys, pre.system_residual);
    }
  }
  r.instances = opt.instances;
  r.metrics = {{"max_angle", ang},
               {"max_boundary_residual", bd},
               {"max_system_residual", sys},
               {"dimension_mismatches", static_cast<double>(dim_fail)},
               {"ill_posed_parametrizations", static_cast<double>(ill)}};
  r.pass = dim_fail == 0 && ill == 0 && ang <= opt.tol.subspace_angle && bd <= opt.tol.boundary_residual &&
           sys <= opt.tol.residual;
  r.detail = "angle " + detail::fmt(ang) + ", patch residuals " + detail::fmt(bd) + " / " + detail::fmt(sys);
  return r;
}

/// 7. Dual-pair dimension identities for {H_{1,0}, H_{2,0}} with boundary
/// extensions, and for the left-end pair with K = H_1(Q ⊕ {0}).
///
/// Two readings of the hypothesis are tallied: `strict` requires the operator
/// parts to be contained in each other; `modulo` only asks the images to agree
/// after removing the multivalued part of the adjoint.  The verdict uses the
/// modulo reading.
inline SuiteResult identity_suite(const SuiteOptions& opt) {
  SuiteResult r{"dimension_identities", "dimension identities for dual pairs and their extensions"};
  Rng rng(detail::suite_seed(opt.seed, 7));
  int pairs = 0, hyp_modulo = 0, hyp_strict = 0, viol_modulo = 0, viol_strict = 0, qsa = 0, odd = 0, odd_left = 0;
  std::string first_violation;
  auto tally = [&](const PairReport& p, const std::string& what, bool left_end) {
    ++pairs;
    bool bad = !p.identity_symmetric;
    if (p.has_extension && p.proper_extension)
      bad = bad || !p.identity_split_k || !p.identity_split_kstar || !p.identity_half || !p.sufficiency_consistent;
    const bool base = p.dual_pair && p.trivial_intersections;
    if (base && p.operator_parts_modulo) {
      ++hyp_modulo;
      if (bad) {
        ++viol_modulo;
        if (first_violation.empty())
          first_violation = what + ": D(T*)/D(S)=" + std::to_string(p.tstar_over_s) + ", D(S*)/D(K)=" +
                            std::to_string(p.sstar_over_k) + ", D(T*)/D(K*)=" + std::to_string(p.tstar_over_kstar) +
                            ", D(K)/D(T)=" + std::to_string(p.k_over_t) + ", D(K*)/D(S)=" + std::to_string(p.kstar_over_s);
      }
    }
    if (base && p.operator_parts_agree) {
      ++hyp_strict;
      if (bad) ++viol_strict;
    }
    if (p.proper_extension && p.quasi_self_adjoint) {
      ++qsa;
      if (p.tstar_over_s % 2 != 0) ++(left_end ? odd_left : odd);
    }
  };
  for (int k = 0; k < opt.instances; ++k) {
    const auto f = detail::draw_instance(opt, k, rng);
    const int n = f.n();
    const HamiltonianRelationSet h1(f, Side::first, opt.tol), h2(f, Side::second, opt.tol);
    const std::string tag = "instance " + std::to_string(k) + " (n=" + std::to_string(n) + ")";
    const Eigen::Index dq = rng.integer(0, 4 * n);
    for (Eigen::Index d : {static_cast<Eigen::Index>(2 * n), dq}) {
      const BoundarySubspace qc(4 * n, rng.subspace(4 * n, d));
      tally(classify_pair(h1.minimal(), h2.minimal(), h1.boundary_extension(qc), opt.tol),
            tag + ", T(Qc) with dim Qc=" + std::to_string(d), false);
    }
    const Eigen::Index dl = rng.integer(0, 2 * n);
    tally(left_end_extension(h1, h2, BoundarySubspace(2 * n, rng.subspace(2 * n, dl))).pair,
          tag + ", left-end K with dim Q=" + std::to_string(dl), true);
  }
  r.instances = opt.instances;
  r.metrics = {{"pairs", static_cast<double>(pairs)},
               {"hypotheses_verified_modulo", static_cast<double>(hyp_modulo)},
               {"violations_modulo", static_cast<double>(viol_modulo)},
               {"hypotheses_verified_strict", static_cast<double>(hyp_strict)},
               {"violations_strict", static_cast<double>(viol_strict)},
               {"quasi_self_adjoint_found", static_cast<double>(qsa)},
               {"odd_quotients", static_cast<double>(odd)},
               {"odd_quotients_left_end", static_cast<double>(odd_left)}};
  r.pass = viol_modulo == 0 && odd == 0;
  r.detail = std::to_string(hyp_modulo) + "/" + std::to_string(pairs) + " pairs verify the modulo hypotheses with " +
             std::to_string(viol_modulo) + " violations; strict reading " + std::to_string(hyp_strict) + " verified, " +
             std::to_string(viol_strict) + " violations; " + std::to_string(qsa) + " quasi self-adjoint, " +
             std::to_string(odd) + " with odd D(H2)/D(H20), " + std::to_string(odd_left) +
             " left-end pairs with odd D(T*)/D(S)";
  if (!first_violation.empty()) r.detail += "; first violation: " + first_violation;
  return r;
}

/// 8. adjoint(H_1(Q ⊕ {0})) = H_2(Q* ⊕ C^{2n}).  For each n the coordinate
/// subspaces of C^{2n} and `random_q_per_dim` random Q of every dimension are
/// dealt round-robin over that n's instances.
inline SuiteResult qstar_suite(const SuiteOptions& opt) {
  SuiteResult r{"qstar_law", "adjoint of a one-end boundary extension through Q*"};
  Rng rng(detail::suite_seed(opt.seed, 8));
  std::vector<std::vector<BoundarySubspace>> tasks(static_cast<std::size_t>(opt.n_max + 1));
  for (int n = 1; n <= opt.n_max; ++n) {
    const Eigen::Index m = 2 * n;
    auto& list = tasks[static_cast<std::size_t>(n)];
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<Eigen::Index> axes;
      for (Eigen::Index j = 0; j < m; ++j)
        if (mask & (1u << j)) axes.push_back(j);
      list.push_back(BoundarySubspace::coordinates(m, axes));
    }
    for (Eigen::Index d = 0; d <= m; ++d)
      for (int s = 0; s < opt.random_q_per_dim; ++s) list.push_back(BoundarySubspace(m, rng.subspace(m, d)));
  }
  std::vector<int> count(static_cast<std::size_t>(opt.n_max + 1), 0);
  for (int k = 0; k < opt.instances; ++k) ++count[static_cast<std::size_t>(1 + k % opt.n_max)];

  int checks = 0, fails = 0;
  double worst = 0.0;
  for (int k = 0; k < opt.instances; ++k) {
    const auto f = detail::draw_instance(opt, k, rng);
    const auto n = static_cast<std::size_t>(f.n());
    const HamiltonianRelationSet h1(f, Side::first, opt.tol), h2(f, Side::second, opt.tol);
    const auto slot = static_cast<std::size_t>(k / opt.n_max);
    for (std::size_t j = slot; j < tasks[n].size(); j += static_cast<std::size_t>(count[n])) {
      const auto rep = verify_qstar_adjoint(h1, h2, tasks[n][j]);
      ++checks;
      if (!rep.pass) ++fails;
      worst = std::max(worst, rep.angle);
    }
  }
  r.instances = opt.instances;
  r.metrics = {{"checks", static_cast<double>(checks)}, {"failures", static_cast<double>(fails)}, {"max_angle", worst}};
  r.pass = fails == 0 && checks > 0;
  r.detail = std::to_string(checks) + " subspaces, " + std::to_string(fails) + " failures, max angle " + detail::fmt(worst);
  return r;
}

/// 9. n = 1: T = T(Qc) is quasi self-adjoint iff 𝐓 = gen{T, T*} is self-adjoint.
inline SuiteResult correspondence_suite(const SuiteOptions& opt) {
  SuiteResult r{"correspondence", "quasi self-adjoint extensions against self-adjoint doubled relations"};
  Rng rng(detail::suite_seed(opt.seed, 9));
  int qsa = 0, bold_sa = 0, counter = 0, outside = 0, not_between = 0, gen_fail = 0, h0_fail = 0;
  double gen_angle = 0.0;
  std::string example;
  for (int k = 0; k < opt.family_size; ++k) {
    const auto f = detail::draw_instance(opt, k, rng, false, 1);
    const DoubledSystem ds(f, opt.tol);
    const Eigen::Index d = k % 5;
    const BoundarySubspace qc(4, rng.subspace(4, d));
    const auto rep = correspondence_check(ds, qc);
    if (!rep.tstar_in_h2) {
      ++outside;
      continue;
    }
    if (rep.t_quasi_self_adjoint) ++qsa;
    if (rep.bold_self_adjoint) ++bold_sa;
    if (!rep.bold_between) ++not_between;
    if (rep.generated_adjoint_angle > opt.tol.subspace_angle) ++gen_fail;
    gen_angle = std::max(gen_angle, rep.generated_adjoint_angle);
    if (!rep.equivalence_holds) {
      ++counter;
      if (example.empty())
        example = "sample " + std::to_string(k) + ": dim Qc=" + std::to_string(d) + ", T quasi self-adjoint " +
                  (rep.t_quasi_self_adjoint ? "yes" : "no") + ", bold T self-adjoint " +
                  (rep.bold_self_adjoint ? "yes" : "no");
    }
    if (k < 5 && relation_angle(ds.generate(ds.first.minimal(), ds.second.minimal()), ds.doubled.minimal()) >
                     opt.tol.subspace_angle)
      ++h0_fail;
  }
  r.instances = opt.family_size;
  r.metrics = {{"samples", static_cast<double>(opt.family_size)},
               {"quasi_self_adjoint", static_cast<double>(qsa)},
               {"bold_self_adjoint", static_cast<double>(bold_sa)},
               {"counterexamples", static_cast<double>(counter)},
               {"adjoint_outside_h2", static_cast<double>(outside)},
               {"bold_not_between", static_cast<double>(not_between)},
               {"generated_adjoint_failures", static_cast<double>(gen_fail)},
               {"max_generated_adjoint_angle", gen_angle},
               {"minimal_generation_failures", static_cast<double>(h0_fail)}};
  r.pass = counter == 0 && outside == 0 && not_between == 0 && gen_fail == 0 && h0_fail == 0;
  r.detail = std::to_string(qsa) + " quasi self-adjoint, " + std::to_string(bold_sa) + " self-adjoint doubled, " +
             std::to_string(counter) + " counterexamples";
  if (!example.empty()) r.detail += "; " + example;
  return r;
}

/// 10. Free system against the decaying-weight toy on the half-line.
inline SuiteResult limit_point_suite(const SuiteOptions& opt) {
  SuiteResult r{"limit_point", "limit-point classification and boundary criterion at the horizon"};
  Rng rng(detail::suite_seed(opt.seed, 10));
  const long h = opt.horizon;
  const std::vector<long> horizons{h / 3, 2 * h / 3, h};
  bool ok = true;
  std::vector<std::string> notes;
  double free_value = 0.0, toy_value = std::numeric_limits<double>::infinity(), oracle_gap = 0.0;
  for (int n = 1; n <= opt.n_max; ++n) {
    const auto free = HalfLineSystem::free_system(n);
    const auto scan = halfline_deficiency_scan(free, horizons, opt.tol);
    const auto oracle = transfer_oracle(free, I_unit, opt.tol);
    if (!scan.limit_point || scan.plus.estimate != oracle.decaying || scan.minus.estimate != oracle.decaying) {
      ok = false;
      notes.push_back("free n=" + std::to_string(n) + ": estimates " + std::to_string(scan.plus.estimate) + "/" +
                      std::to_string(scan.minus.estimate) + ", oracle " + std::to_string(oracle.decaying));
    }
    if (n == 1) {
      const double lo = (3.0 - std::sqrt(5.0)) / 2.0, hi = (3.0 + std::sqrt(5.0)) / 2.0;
      for (Eigen::Index j = 0; j < oracle.moduli.size(); ++j)
        oracle_gap = std::max(oracle_gap, std::abs(oracle.moduli(j) - (j < oracle.moduli.size() / 2 ? lo : hi)));
    }
    const auto crit = limit_point_criterion_check(free, h, opt.criterion_trials, rng, opt.tol);
    free_value = std::max(free_value, crit.max_value);
    if (!crit.vanishes || !crit.consistent) {
      ok = false;
      notes.push_back("free n=" + std::to_string(n) + ": criterion value " + detail::fmt(crit.max_value));
    }

    const auto toy = HalfLineSystem::decaying_weight(n);
    const auto tscan = halfline_deficiency_scan(toy, horizons, opt.tol);
    if (tscan.limit_point) {
      ok = false;
      notes.push_back("toy n=" + std::to_string(n) + " classified limit point");
    }
    const auto tcrit = limit_point_criterion_check(toy, h, opt.criterion_trials, rng, opt.tol);
    toy_value = std::min(toy_value, tcrit.max_value);
    if (!tcrit.consistent) {
      ok = false;
      notes.push_back("toy n=" + std::to_string(n) + ": criterion inconsistent with the scan");
    }
  }
  if (oracle_gap > 1e-9) {
    ok = false;
    notes.push_back("oracle moduli off by " + detail::fmt(oracle_gap));
  }
  r.instances = 2 * opt.n_max;
  r.metrics = {{"free_criterion_max", free_value}, {"toy_criterion_min", toy_value}, {"oracle_modulus_gap", oracle_gap}};
  r.pass = ok;
  r.detail = "free system limit point with criterion value " + detail::fmt(free_value) + " at horizon " +
             std::to_string(h) + "; toy not limit point (criterion value " + detail::fmt(toy_value) + ")";
  for (const auto& s : notes) r.detail += "; " + s;
  return r;
}

/// 11. Hermitian coefficients: both sides coincide, H_0 is Hermitian, and
/// quasi self-adjoint boundary extensions are expected to be self-adjoint.
inline SuiteResult hermitian_suite(const SuiteOptions& opt) {
  SuiteResult r{"hermitian", "formally self-adjoint specialization"};
  Rng rng(detail::suite_seed(opt.seed, 11));
  int side_fail = 0, herm_fail = 0, qsa = 0, not_sa = 0, sep_fail = 0;
  std::string example;
  for (int k = 0; k < opt.instances; ++k) {
    const auto f = detail::draw_instance(opt, k, rng, true);
    const int n = f.n();
    if (!is_formally_self_adjoint(f)) ++side_fail;
    const HamiltonianRelationSet h1(f, Side::first, opt.tol), h2(f, Side::second, opt.tol);
    if (!same_relation(h1.maximal(), h2.maximal(), opt.tol) || !same_relation(h1.minimal(), h2.minimal(), opt.tol))
      ++side_fail;
    if (!is_hermitian(h1.minimal(), opt.tol)) ++herm_fail;
    // v(a) and v(b+1) free, u(a) = u(b+1) = 0: a separated Lagrangian condition.
    std::vector<Eigen::Index> axes;
    for (int j = 0; j < n; ++j) {
      axes.push_back(n + j);
      axes.push_back(3 * n + j);
    }
    if (!is_self_adjoint(h1.boundary_extension(BoundarySubspace::coordinates(4 * n, axes)), opt.tol)) ++sep_fail;
    const Eigen::Index d = k % 2 == 0 ? 2 * n : rng.integer(0, 4 * n);
    const BoundarySubspace qc(4 * n, rng.subspace(4 * n, d));
    const auto t = h1.boundary_extension(qc);
    const auto p = classify_pair(h1.minimal(), h1.minimal(), t, opt.tol);
    if (p.proper_extension && p.quasi_self_adjoint) {
      ++qsa;
      if (!is_self_adjoint(t, opt.tol)) {
        ++not_sa;
        if (example.empty()) example = "instance " + std::to_string(k) + " (n=" + std::to_string(n) + ")";
      }
    }
  }
  r.instances = opt.instances;
  r.metrics = {{"side_mismatches", static_cast<double>(side_fail)},
               {"minimal_not_hermitian", static_cast<double>(herm_fail)},
               {"quasi_self_adjoint_found", static_cast<double>(qsa)},
               {"quasi_self_adjoint_not_self_adjoint", static_cast<double>(not_sa)},
               {"separated_not_self_adjoint", static_cast<double>(sep_fail)}};
  r.pass = side_fail == 0 && herm_fail == 0 && not_sa == 0 && sep_fail == 0;
  r.detail = std::to_string(qsa) + " quasi self-adjoint extensions, " + std::to_string(not_sa) +
             " not self-adjoint; side mismatches " + std::to_string(side_fail) + ", non-Hermitian minimal " +
             std::to_string(herm_fail) + ", separated conditions not self-adjoint " + std::to_string(sep_fail);
  if (!example.empty()) r.detail += "; first: " + example;
  return r;
}

using SuiteFn = std::function<SuiteResult(const SuiteOptions&)>;

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> reg{
      {"conservation", conservation_suite}, {"lagrange", lagrange_suite},
      {"variation_of_constants", voc_suite}, {"patch", patch_suite},
      {"duality", duality_suite},           {"minimal", minimal_suite},
      {"dimension_identities", identity_suite}, {"qstar_law", qstar_suite},
      {"correspondence", correspondence_suite}, {"limit_point", limit_point_suite},
      {"hermitian", hermitian_suite}};
  return reg;
}

/// Runs a suite and records its wall time.  Exceptions are reported as failures.
inline SuiteResult run_suite(const std::string& name, const SuiteFn& fn, const SuiteOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  try {
    r = fn(opt);
  } catch (const std::exception& e) {
    r.name = name;
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace dhs
