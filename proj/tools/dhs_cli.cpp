// Command-line driver: reads a JSON run configuration, runs one command and
// writes a JSON report (plus CSV for scans).
//
// Exit codes: 0 every check passes, 1 a check fails or a numerical error
// occurs, 2 malformed configuration or input, 3 internal error.

#include "dhs/dhs.hpp"
#include "dhs/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace dhs;

namespace {

struct Check {
  std::string name;
  std::string anchor;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string verdict;
  std::vector<Check> checks;
  json data = json::object();
  std::string csv;

  void add(std::string name, std::string anchor, bool pass, std::string detail) {
    checks.push_back({std::move(name), std::move(anchor), pass, std::move(detail)});
  }
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

SiteRange window_for(const RunConfig& cfg, const CoefficientField& f) {
  const SiteRange full(f.interval());
  if (cfg.window && cfg.window->within(full)) return *cfg.window;
  if (cfg.window && cfg.source != Source::random) throw InputError("window outside the interval");
  return full;
}

long c0_for(const RunConfig& cfg, const CoefficientField& f) {
  const SiteRange s(f.interval());
  if (cfg.c0) {
    if (!s.contains_index(*cfg.c0)) throw InputError("c0 outside the interval");
    return *cfg.c0;
  }
  return s.first + s.points() / 2;
}

Trajectory random_trajectory(int n, SiteRange s, Rng& rng) {
  Trajectory y(n, s);
  for (auto& v : y.values) v = rng.gaussian_vec(2 * n);
  return y;
}

json lambda_list(const std::vector<cplx>& ls) {
  json a = json::array();
  for (cplx l : ls) a.push_back(to_json(l));
  return a;
}

/// Boundary subspaces of C^m from a Q specification.
std::vector<BoundarySubspace> subspaces(const QSpec& spec, Eigen::Index m, Rng& rng) {
  std::vector<BoundarySubspace> out;
  for (const auto& b : spec.explicit_bases) out.emplace_back(m, b);
  if (spec.coordinates)
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<Eigen::Index> axes;
      for (Eigen::Index j = 0; j < m; ++j)
        if (mask & (1u << j)) axes.push_back(j);
      out.push_back(BoundarySubspace::coordinates(m, axes));
    }
  for (Eigen::Index d = 0; d <= m; ++d)
    for (int k = 0; k < spec.random_per_dim; ++k) out.emplace_back(m, rng.subspace(m, d));
  return out;
}

// ---------------------------------------------------------------------------

Report cmd_check(const RunConfig& cfg, Rng& rng) {
  Report rep;
  json inst = json::array();
  int fails = 0;
  const auto fields = make_fields(cfg, rng);
  for (const auto& f : fields) {
    const auto v = validate_system(f, window_for(cfg, f), cfg.lambdas, cfg.tol);
    if (v.verdict != "pass") ++fails;
    json phi = json::array();
    for (const auto& s : v.phi)
      phi.push_back({{"side", side_index(s.side)},
                     {"lambda", to_json(s.lambda)},
                     {"min_eig", s.min_eig},
                     {"max_eig", s.max_eig},
                     {"rank", s.rank},
                     {"positive_definite", s.positive_definite}});
    json sites = json::array();
    for (const auto& c : v.per_site)
      sites.push_back({{"t", c.t}, {"cond_i_minus_a", c.cond_i_minus_a}, {"cond_i_minus_d", c.cond_i_minus_d}});
    json prefix = nullptr;
    if (v.smallest_passing_prefix) prefix = {v.smallest_passing_prefix->first, v.smallest_passing_prefix->last};
    inst.push_back({{"n", f.n()},
                    {"interval", {f.interval().a, f.interval().b}},
                    {"a1", v.a1},
                    {"definite", v.definite},
                    {"rank_constant", v.rank_constant},
                    {"smallest_passing_prefix", prefix},
                    {"verdict", v.verdict},
                    {"detail", v.detail},
                    {"phi", phi},
                    {"sites", sites}});
  }
  rep.data["instances"] = inst;
  rep.add("standing_assumptions", "invertibility of I - A, I - D and the definiteness condition", fails == 0,
          std::to_string(fields.size() - static_cast<std::size_t>(fails)) + "/" + std::to_string(fields.size()) +
              " instances pass");
  return rep;
}

Report cmd_solve(const RunConfig& cfg, Rng& rng) {
  Report rep;
  json inst = json::array();
  double res = 0.0, voc = 0.0;
  const auto fields = make_fields(cfg, rng);
  for (const auto& f : fields) {
    const int n = f.n();
    const SiteRange s(f.interval());
    const long c0 = c0_for(cfg, f);
    json per = json::array();
    for (cplx l : cfg.lambdas)
      for (Side side : {Side::first, Side::second}) {
        const auto g = random_trajectory(n, s, rng);
        const Vec y0 = rng.gaussian_vec(2 * n);
        const auto y = solve_forced_ivp(side, f, l, g, c0, y0, cfg.tol);
        const auto yv = solve_voc(side, f, l, g, c0, y0, cfg.tol);
        const double r = max_residual(side, f, l, y, &g);
        double diff = 0.0, mag = 0.0;
        for (long t = s.first; t <= s.last + 1; ++t) {
          diff = std::max(diff, (y.at(t) - yv.at(t)).norm());
          mag = std::max(mag, y.at(t).norm());
        }
        const double rel = diff / std::max(1.0, mag);
        res = std::max(res, r);
        voc = std::max(voc, rel);
        json e{{"lambda", to_json(l)}, {"side", side_index(side)}, {"c0", c0}, {"max_residual", r}, {"voc_relative_error", rel}};
        if (fields.size() == 1) e["solution"] = to_json(y);
        per.push_back(e);
      }
    inst.push_back({{"n", n}, {"interval", {f.interval().a, f.interval().b}}, {"runs", per}});
  }
  rep.data["instances"] = inst;
  rep.add("recursion_residual", "forward and backward recursion of the forced system", res <= cfg.tol.residual,
          "max scaled residual " + fmt(res));
  rep.add("variation_of_constants", "variation-of-constants formula", voc <= cfg.tol.voc_rel,
          "max relative error " + fmt(voc));
  return rep;
}

Report cmd_fundamental(const RunConfig& cfg, Rng& rng) {
  Report rep;
  json inst = json::array();
  double cons = 0.0, wr = 0.0;
  const auto fields = make_fields(cfg, rng);
  for (const auto& f : fields) {
    const long c0 = c0_for(cfg, f);
    json per = json::array();
    for (cplx l : cfg.lambdas) {
      IdentityReport ir;
      conservation_check(f, l, c0, ir, cfg.tol);
      cons = std::max(cons, ir.conservation_error);
      wr = std::max(wr, ir.wronskian_variation);
      json e{{"lambda", to_json(l)}, {"c0", c0}, {"conservation_error", ir.conservation_error},
             {"wronskian_variation", ir.wronskian_variation}};
      if (fields.size() == 1) {
        const auto y1 = fundamental_matrix(Side::first, f, l, c0, cfg.tol);
        const auto y2 = fundamental_matrix(Side::second, f, std::conj(l), c0, cfg.tol);
        json m1 = json::array(), m2 = json::array();
        for (const auto& m : y1.values) m1.push_back(to_json(m));
        for (const auto& m : y2.values) m2.push_back(to_json(m));
        e["Y1"] = m1;
        e["Y2_conj"] = m2;
      }
      per.push_back(e);
    }
    inst.push_back({{"n", f.n()}, {"interval", {f.interval().a, f.interval().b}}, {"samples", per}});
  }
  rep.data["instances"] = inst;
  rep.add("conservation", "matrix conservation law for the fundamental matrices",
          cons <= cfg.tol.identity_gap && wr <= cfg.tol.identity_gap,
          "max scaled error " + fmt(cons) + ", Wronskian drift " + fmt(wr));
  return rep;
}

Report cmd_identities(const RunConfig& cfg, Rng& rng) {
  Report rep;
  json inst = json::array();
  double gap = 0.0, cons = 0.0, wr = 0.0;
  const auto fields = make_fields(cfg, rng);
  for (const auto& f : fields) {
    const int n = f.n();
    const SiteRange s(f.interval());
    const auto fx = random_trajectory(n, s, rng), gy = random_trajectory(n, s, rng);
    const auto x = solve_forced_ivp(Side::first, f, 0.0, fx, s.first, rng.gaussian_vec(2 * n), cfg.tol);
    const auto y = solve_forced_ivp(Side::second, f, 0.0, gy, s.last + 1, rng.gaussian_vec(2 * n), cfg.tol);
    const long lo = rng.integer(static_cast<int>(s.first), static_cast<int>(s.last));
    const long hi = rng.integer(static_cast<int>(lo), static_cast<int>(s.last));
    const auto lr = lagrange_report(f, x, fx, y, gy, lo, hi, cfg.tol);
    gap = std::max(gap, lr.scaled_gap);
    double ci = 0.0, wi = 0.0;
    for (cplx l : cfg.lambdas) {
      IdentityReport ir;
      conservation_check(f, l, c0_for(cfg, f), ir, cfg.tol);
      ci = std::max(ci, ir.conservation_error);
      wi = std::max(wi, ir.wronskian_variation);
    }
    cons = std::max(cons, ci);
    wr = std::max(wr, wi);
    inst.push_back({{"n", n},
                    {"interval", {f.interval().a, f.interval().b}},
                    {"range", {lo, hi}},
                    {"sum_side", to_json(lr.sum_side)},
                    {"boundary_side", to_json(lr.boundary_side)},
                    {"scaled_gap", lr.scaled_gap},
                    {"conservation_error", ci},
                    {"wronskian_variation", wi}});
  }
  rep.data["lambdas"] = lambda_list(cfg.lambdas);
  rep.data["instances"] = inst;
  rep.add("lagrange", "summation identity for forced solutions of both sides", gap <= cfg.tol.identity_gap,
          "max scaled gap " + fmt(gap) + " over " + std::to_string(fields.size()) + " instances");
  rep.add("conservation", "matrix conservation law for the fundamental matrices",
          cons <= cfg.tol.identity_gap && wr <= cfg.tol.identity_gap,
          "max scaled error " + fmt(cons) + ", Wronskian drift " + fmt(wr));
  return rep;
}

Report cmd_bvp(const RunConfig& cfg, Rng& rng) {
  Report rep;
  json inst = json::array();
  double bd = 0.0, sys = 0.0;
  const auto fields = make_fields(cfg, rng);
  for (const auto& f : fields) {
    const int n = f.n();
    const SiteRange w = window_for(cfg, f);
    const Vec alpha = cfg.alpha && n == cfg.n ? *cfg.alpha : rng.gaussian_vec(2 * n);
    const Vec beta = cfg.beta && n == cfg.n ? *cfg.beta : rng.gaussian_vec(2 * n);
    json per = json::array();
    for (Side side : {Side::first, Side::second}) {
      const auto p = patch_bvp(side, f, w, alpha, beta, cfg.tol);
      bd = std::max(bd, p.boundary_residual);
      sys = std::max(sys, p.system_residual);
      json e{{"side", side_index(side)}, {"boundary_residual", p.boundary_residual}, {"system_residual", p.system_residual}};
      if (fields.size() == 1) {
        e["y"] = to_json(p.y);
        e["g"] = to_json(p.g);
      }
      per.push_back(e);
    }
    inst.push_back({{"n", n}, {"window", {w.first, w.last}}, {"alpha", to_json(alpha)}, {"beta", to_json(beta)}, {"patches", per}});
  }
  rep.data["instances"] = inst;
  rep.add("patch", "compactly supported patch solutions with prescribed end values",
          bd <= cfg.tol.boundary_residual && sys <= cfg.tol.residual,
          "boundary " + fmt(bd) + ", system " + fmt(sys));
  return rep;
}

Report cmd_relations(const RunConfig& cfg, Rng& rng) {
  Report rep;
  json inst = json::array();
  double dual = 0.0, minimal = 0.0, form = 0.0;
  int dim_fail = 0;
  const auto fields = make_fields(cfg, rng);
  for (const auto& f : fields) {
    const HamiltonianRelationSet h1(f, Side::first, cfg.tol), h2(f, Side::second, cfg.tol);
    const auto d1 = adjoint(h1.minimal()), d2 = adjoint(h2.minimal());
    const double a1 = relation_angle(d1, h2.maximal()), a2 = relation_angle(d2, h1.maximal());
    if (d1.dim() != h2.maximal().dim() || d2.dim() != h1.maximal().dim()) ++dim_fail;
    const auto p1 = preminimal_via_patches(h1), p2 = preminimal_via_patches(h2);
    const double m1 = relation_angle(p1.relation, h1.minimal()), m2 = relation_angle(p2.relation, h2.minimal());
    if (p1.relation.dim() != h1.minimal().dim() || p2.relation.dim() != h2.minimal().dim()) ++dim_fail;
    const Eigen::Index r = h1.rank();
    const Vec c1 = h1.maximal().basis() * rng.gaussian_vec(h1.maximal().dim());
    const Vec c2 = h2.maximal().basis() * rng.gaussian_vec(h2.maximal().dim());
    const auto bf = boundary_form(h1, c1.head(r), c1.tail(r), h2, c2.head(r), c2.tail(r));
    dual = std::max({dual, a1, a2});
    minimal = std::max({minimal, m1, m2});
    form = std::max(form, bf.scaled_gap);
    inst.push_back({{"n", f.n()},
                    {"interval", {f.interval().a, f.interval().b}},
                    {"quotient_dim", r},
                    {"dim_H1", h1.maximal().dim()},
                    {"dim_H2", h2.maximal().dim()},
                    {"dim_H10", h1.minimal().dim()},
                    {"dim_H20", h2.minimal().dim()},
                    {"multivalued_dim_H1", multivalued_part(h1.maximal(), cfg.tol).cols()},
                    {"duality_angles", {a1, a2}},
                    {"minimal_angles", {m1, m2}},
                    {"boundary_form_gap", bf.scaled_gap}});
  }
  rep.data["instances"] = inst;
  const double t = cfg.tol.subspace_angle;
  rep.add("duality", "adjoints of the minimal relations are the maximal relations", dim_fail == 0 && dual <= t,
          "max angle " + fmt(dual));
  rep.add("minimal", "boundary-zero elements of the maximal relation form the minimal relation",
          dim_fail == 0 && minimal <= t, "max angle " + fmt(minimal));
  rep.add("boundary_form", "Green formula through boundary values", form <= cfg.tol.identity_gap,
          "max scaled gap " + fmt(form));
  return rep;
}

json pair_json(const PairReport& p) {
  return {{"dual_pair", p.dual_pair},
          {"hypotheses_strict", p.dual_pair && p.operator_parts_agree && p.trivial_intersections},
          {"hypotheses_modulo", p.dual_pair && p.operator_parts_modulo && p.trivial_intersections},
          {"tstar_over_s", p.tstar_over_s},
          {"sstar_over_t", p.sstar_over_t},
          {"proper_extension", p.proper_extension},
          {"k_over_t", p.k_over_t},
          {"kstar_over_s", p.kstar_over_s},
          {"sstar_over_k", p.sstar_over_k},
          {"tstar_over_kstar", p.tstar_over_kstar},
          {"quasi_self_adjoint", p.quasi_self_adjoint},
          {"detail", p.detail}};
}

/// Integer identities of a pair report; false when any fails.
bool identities_ok(const PairReport& p) {
  bool ok = p.identity_symmetric;
  if (p.has_extension && p.proper_extension)
    ok = ok && p.identity_split_k && p.identity_split_kstar && p.identity_half && p.sufficiency_consistent;
  return ok;
}

Report cmd_extensions(const RunConfig& cfg, Rng& rng) {
  Report rep;
  json inst = json::array();
  int qs_checks = 0, qs_fail = 0, j_checks = 0, j_fail = 0, hyp = 0, viol = 0, qsa = 0, odd = 0;
  const auto fields = make_fields(cfg, rng);
  for (const auto& f : fields) {
    const int n = f.n();
    const HamiltonianRelationSet h1(f, Side::first, cfg.tol), h2(f, Side::second, cfg.tol);
    json qs = json::array(), qcs = json::array();
    for (const auto& q : subspaces(cfg.q, 2 * n, rng)) {
      const auto r = verify_qstar_adjoint(h1, h2, q);
      const auto le = left_end_extension(h1, h2, q);
      ++qs_checks;
      if (!r.pass) ++qs_fail;
      qs.push_back({{"dim_q", r.dim_q},
                    {"dim_qstar", r.dim_qstar},
                    {"angle", r.angle},
                    {"pass", r.pass},
                    {"left_end", pair_json(le.pair)},
                    {"left_end_quasi_self_adjoint", le.quasi_self_adjoint}});
    }
    for (const auto& qc : subspaces(cfg.qc, 4 * n, rng)) {
      const auto t = h1.boundary_extension(qc);
      const auto law = h2.boundary_extension(adjoint_boundary_subspace(qc));
      const double ang = relation_angle(adjoint(t), law);
      ++j_checks;
      const bool jok = adjoint(t).dim() == law.dim() && ang <= cfg.tol.subspace_angle;
      if (!jok) ++j_fail;
      const auto p = classify_pair(h1.minimal(), h2.minimal(), t, cfg.tol);
      if (p.dual_pair && p.operator_parts_modulo && p.trivial_intersections) {
        ++hyp;
        if (!identities_ok(p)) ++viol;
      }
      if (p.proper_extension && p.quasi_self_adjoint) {
        ++qsa;
        if (p.tstar_over_s % 2) ++odd;
      }
      qcs.push_back({{"dim_qc", qc.dim()}, {"adjoint_law_angle", ang}, {"pair", pair_json(p)}});
    }
    inst.push_back({{"n", n}, {"interval", {f.interval().a, f.interval().b}}, {"q", qs}, {"qc", qcs}});
  }
  rep.data["instances"] = inst;
  rep.add("qstar_law", "adjoint of a one-end boundary extension through Q*", qs_fail == 0,
          std::to_string(qs_checks) + " subspaces, " + std::to_string(qs_fail) + " failures");
  rep.add("adjoint_boundary_law", "adjoint of a boundary extension through the boundary form", j_fail == 0,
          std::to_string(j_checks) + " subspaces, " + std::to_string(j_fail) + " failures");
  if (j_checks > 0)
    rep.add("dimension_identities", "dimension identities for dual pairs and their extensions", viol == 0 && odd == 0,
            std::to_string(hyp) + " pairs with verified hypotheses, " + std::to_string(viol) + " violations; " +
                std::to_string(qsa) + " quasi self-adjoint, " + std::to_string(odd) + " with odd quotient");
  return rep;
}

Report cmd_double(const RunConfig& cfg, Rng& rng) {
  Report rep;
  json inst = json::array();
  double res = 0.0, gen = 0.0;
  int samples = 0, counter = 0, outside = 0;
  const auto fields = make_fields(cfg, rng);
  for (const auto& f : fields) {
    const int n = f.n();
    const DoubledSystem ds(f, cfg.tol);
    const SiteRange s(f.interval());
    const Eigen::Index r = ds.first.rank();
    const Vec c1 = ds.first.maximal().basis() * rng.gaussian_vec(ds.first.maximal().dim());
    const Vec c2 = ds.second.maximal().basis() * rng.gaussian_vec(ds.second.maximal().dim());
    const auto e1 = ds.first.representative(c1.head(r), c1.tail(r));
    const auto e2 = ds.second.representative(c2.head(r), c2.tail(r));
    const auto yy = pack_solution(e1.y, e2.y), gg = pack_forcing(e1.g, e2.g);
    const double dres = max_residual(Side::first, ds.doubled.field(), 0.0, yy, &gg);
    res = std::max(res, dres);
    const double ga = relation_angle(ds.generate(ds.first.minimal(), ds.second.minimal()), ds.doubled.minimal());
    gen = std::max(gen, ga);
    json per = json::array();
    for (const auto& qc : subspaces(cfg.qc, 4 * n, rng)) {
      const auto c = correspondence_check(ds, qc);
      ++samples;
      if (!c.tstar_in_h2) ++outside;
      else if (!c.equivalence_holds) ++counter;
      per.push_back({{"dim_qc", c.dim_qc},
                     {"t_quasi_self_adjoint", c.t_quasi_self_adjoint},
                     {"bold_self_adjoint", c.bold_self_adjoint},
                     {"bold_angle", c.bold_angle},
                     {"generated_adjoint_angle", c.generated_adjoint_angle},
                     {"bold_between", c.bold_between},
                     {"equivalence_holds", c.equivalence_holds}});
    }
    inst.push_back({{"n", n},
                    {"interval", {s.first, s.last}},
                    {"doubled_residual", dres},
                    {"generated_minimal_angle", ga},
                    {"correspondence", per}});
  }
  rep.data["instances"] = inst;
  rep.add("doubling", "the two sides as one doubled system", res <= cfg.tol.residual,
          "max doubled residual " + fmt(res));
  rep.add("generated_minimal", "the doubled minimal relation is generated by the two minimal relations",
          gen <= cfg.tol.subspace_angle, "max angle " + fmt(gen));
  if (samples > 0)
    rep.add("correspondence", "quasi self-adjoint extensions against self-adjoint doubled relations",
            counter == 0 && outside == 0,
            std::to_string(samples) + " boundary subspaces, " + std::to_string(counter) + " counterexamples");
  return rep;
}

Report cmd_classify(const RunConfig& cfg, Rng& rng) {
  Report rep;
  const auto sys = make_halfline(cfg);
  const auto& h = *cfg.halfline;
  const auto scan = halfline_deficiency_scan(sys, h.horizons, cfg.tol);
  rep.verdict = scan.verdict;
  rep.csv = scan_csv(scan);
  auto scan_json = [](const DirectionScan& d) {
    return json{{"estimates", d.estimates}, {"estimate", d.estimate}, {"monotone", d.monotone},
                {"growth_rates", to_json(d.growth_rates)}};
  };
  rep.data["horizons"] = scan.horizons;
  rep.data["doubled_plus"] = scan_json(scan.plus);
  rep.data["doubled_minus"] = scan_json(scan.minus);
  rep.data["half_plus"] = scan_json(scan.half_plus);
  rep.data["half_minus"] = scan_json(scan.half_minus);
  rep.data["limit_point"] = scan.limit_point;
  rep.add("scan_monotone", "square-summable solution count stabilizes in the horizon",
          scan.plus.monotone && scan.minus.monotone,
          "estimates " + std::to_string(scan.plus.estimate) + " / " + std::to_string(scan.minus.estimate));
  if (h.generator != "decaying_weight") {
    const auto oracle = transfer_oracle(sys, I_unit, cfg.tol);
    rep.data["oracle_moduli"] = to_json(oracle.moduli);
    rep.data["oracle_decaying"] = oracle.decaying;
    rep.add("transfer_oracle", "eigenvalue moduli of the constant transfer matrix",
            oracle.decaying == scan.plus.estimate,
            "oracle " + std::to_string(oracle.decaying) + ", scan " + std::to_string(scan.plus.estimate));
  }
  const auto crit = limit_point_criterion_check(sys, h.criterion_horizon, h.trials, rng, cfg.tol);
  json trend = json::array();
  for (const auto& [t, v] : crit.trend) trend.push_back({t, v});
  rep.data["criterion"] = {{"horizon", crit.horizon},
                           {"max_value", crit.max_value},
                           {"compact_max", crit.compact_max},
                           {"vanishes", crit.vanishes},
                           {"trend", trend}};
  rep.add("limit_point_criterion", "boundary form at the horizon vanishes exactly in the limit-point case",
          crit.consistent, "value " + fmt(crit.max_value) + " at horizon " + std::to_string(crit.horizon));
  return rep;
}

json report_json(const std::string& command, const Report& rep, const RunConfig& cfg) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"paper_anchor", c.anchor}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"command", command},
          {"verdict", rep.verdict.empty() ? (rep.pass() ? "pass" : "fail") : rep.verdict},
          {"pass", rep.pass()},
          {"seed", cfg.seed},
          {"tolerances", tolerances_to_json(cfg.tol)},
          {"paper_checks", checks},
          {"data", rep.data}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file '" + path + "'");
  out << text;
}

cplx parse_lambda(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InputError("cannot parse --lambda '" + s + "' (expected RE,IM)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Hamiltonian system toolkit"};
  std::string config_path, out_path, command;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> lambdas, overrides;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_path, "JSON report path (default: stdout)");
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--command", command, "check | solve | fundamental | identities | bvp | relations | extensions | double | classify")
      ->required();
  app.add_option("--lambda", lambdas, "spectral sample RE,IM (repeatable; replaces the configured list)");
  app.add_option("--tol-override", overrides, "KEY=VAL tolerance override (repeatable)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  json report;
  int code = 0;
  try {
    std::ifstream in(config_path);
    if (!in) throw InputError("cannot read configuration '" + config_path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("configuration is not valid JSON: ") + e.what());
    }
    cfg = parse_config(j);
    if (seed) cfg.seed = *seed;
    if (!lambdas.empty()) {
      cfg.lambdas.clear();
      for (const auto& l : lambdas) cfg.lambdas.push_back(parse_lambda(l));
    }
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw InputError("--tol-override expects KEY=VAL");
      double v = 0.0;
      try {
        v = std::stod(o.substr(eq + 1));
      } catch (const std::exception&) {
        throw InputError("cannot parse tolerance value in '" + o + "'");
      }
      set_tolerance(cfg.tol, o.substr(0, eq), v);
    }
    if (!out_path.empty()) cfg.out_json = out_path;

    using Handler = Report (*)(const RunConfig&, Rng&);
    static const std::map<std::string, Handler> handlers{
        {"check", cmd_check},           {"solve", cmd_solve},   {"fundamental", cmd_fundamental},
        {"identities", cmd_identities}, {"bvp", cmd_bvp},       {"relations", cmd_relations},
        {"extensions", cmd_extensions}, {"double", cmd_double}, {"classify", cmd_classify}};
    const auto it = handlers.find(command);
    if (it == handlers.end()) throw InputError("unknown command '" + command + "'");
    Rng rng(cfg.seed);
    const Report rep = it->second(cfg, rng);
    report = report_json(command, rep, cfg);
    if (!rep.csv.empty()) {
      std::string csv = cfg.out_csv;
      if (csv.empty() && !cfg.out_json.empty()) csv = cfg.out_json + ".csv";
      if (!csv.empty()) write_file(csv, rep.csv);
    }
    code = rep.pass() ? 0 : 1;
  } catch (const InputError& e) {
    report = {{"command", command}, {"verdict", "error"}, {"error", e.what()}};
    code = 2;
  } catch (const NumericalError& e) {
    report = {{"command", command}, {"verdict", "fail"}, {"error", e.what()}};
    code = 1;
  } catch (const std::exception& e) {
    report = {{"command", command}, {"verdict", "error"}, {"error", std::string("internal: ") + e.what()}};
    code = 3;
  }

  const std::string text = report.dump(2) + "\n";
  try {
    if (cfg.out_json.empty())
      std::cout << text;
    else
      write_file(cfg.out_json, text);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  if (code != 0 && report.contains("error")) std::cerr << report["error"].get<std::string>() << '\n';
  return code;
}
