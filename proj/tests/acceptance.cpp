// Acceptance run: one seeded suite per criterion, one PASS/FAIL line each.
// Exits nonzero if any criterion fails or a suite takes 60 s or longer.

#include "dhs/suites.hpp"

#include <cstdio>

int main() {
  dhs::SuiteOptions opt;
  opt.seed = 20240601;
  opt.instances = 100;
  opt.n_max = 3;
  opt.sites_min = 4;
  opt.sites_max = 20;
  opt.lambdas = {0.0, dhs::I_unit, -dhs::I_unit, dhs::cplx(1.0, 1.0)};
  opt.random_q_per_dim = 20;
  opt.family_size = 50;
  opt.horizon = 60;

  dhs::Tolerances& t = opt.tol;
  t.rank_rel = 1e-9;
  t.rank_abs = 1e-13;
  t.cond_ceiling = 1e12;
  t.subspace_angle = 1e-8;
  t.residual = 1e-10;
  t.boundary_residual = 1e-9;
  t.voc_rel = 1e-9;
  t.identity_gap = 1e-10;
  t.isometry = 1e-10;
  t.hermitian = 1e-12;
  t.stabilize_ratio = 1e-6;
  t.criterion_value = 1e-6;

  constexpr double time_limit = 60.0;
  int failures = 0, index = 0;
  for (const auto& [name, fn] : dhs::suite_registry()) {
    const auto r = dhs::run_suite(name, fn, opt);
    const bool pass = r.pass && r.seconds < time_limit;
    if (!pass) ++failures;
    std::printf("%s criterion %d %s: %s [%.1f s]\n", pass ? "PASS" : "FAIL", ++index, name.c_str(), r.detail.c_str(),
                r.seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria pass\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
