#include "dhs/extension.hpp"
#include "dhs/random.hpp"

#include <catch_amalgamated.hpp>

using namespace dhs;

namespace {

CoefficientField draw(int n, long sites, Rng& rng) {
  RandomSystemOptions opt;
  opt.n = n;
  opt.sites = sites;
  return random_definite_field(opt, rng, {0.0});
}

Trajectory random_trajectory(int n, SiteRange s, Rng& rng) {
  Trajectory y(n, s);
  for (auto& v : y.values) v = rng.gaussian_vec(2 * n);
  return y;
}

}  // namespace

TEST_CASE("doubling permutations") {
  for (int n = 1; n <= 3; ++n) {
    const Mat e1 = doubling_e1(n), e2 = doubling_e2(n);
    CHECK((e1.adjoint() * e1 - Mat::Identity(4 * n, 4 * n)).norm() == 0.0);
    CHECK((e2.adjoint() * e2 - Mat::Identity(4 * n, 4 * n)).norm() == 0.0);
  }
  // (u1, v1, u2, v2) = (1, 2, 3, 4) for n = 1.
  Vec y(4);
  y << 1.0, 2.0, 3.0, 4.0;
  Vec p(4), q(4);
  p << 3.0, 1.0, 2.0, 4.0;  // (u2, u1, v1, v2)
  q << 1.0, 3.0, 4.0, 2.0;  // (g1u, g2u, g2v, g1v)
  CHECK((doubling_e1(1) * y - p).norm() == 0.0);
  CHECK((doubling_e2(1) * y - q).norm() == 0.0);
}

TEST_CASE("doubled coefficients") {
  Rng rng(1);
  const auto f = draw(2, 4, rng);
  const auto d = build_doubled(f);
  CHECK(d.n() == 4);
  for (long t = f.interval().a; t <= f.interval().b; ++t) {
    const auto& b = f.at(t);
    const auto& bb = d.at(t);
    CHECK((bb.A.topLeftCorner(2, 2) - b.D.adjoint()).norm() == 0.0);
    CHECK((bb.A.bottomRightCorner(2, 2) - b.A).norm() == 0.0);
    CHECK((bb.B.topRightCorner(2, 2) - b.B.adjoint()).norm() == 0.0);
    CHECK((bb.B.bottomLeftCorner(2, 2) - b.B).norm() == 0.0);
    CHECK((bb.C.topRightCorner(2, 2) - b.C).norm() == 0.0);
    CHECK((bb.C.bottomLeftCorner(2, 2) - b.C.adjoint()).norm() == 0.0);
    CHECK((bb.D.topLeftCorner(2, 2) - b.D).norm() == 0.0);
    CHECK((bb.D.bottomRightCorner(2, 2) - b.A.adjoint()).norm() == 0.0);
  }
}

TEST_CASE("packed pairs solve the doubled system") {
  Rng rng(2);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 3;
    const auto f = draw(n, 4 + trial, rng);
    const auto d = build_doubled(f);
    const SiteRange s(f.interval());
    const auto g1 = random_trajectory(n, s, rng), g2 = random_trajectory(n, s, rng);
    const auto y1 = solve_forced_ivp(Side::first, f, 0.0, g1, s.first, rng.gaussian_vec(2 * n));
    const auto y2 = solve_forced_ivp(Side::second, f, 0.0, g2, s.last + 1, rng.gaussian_vec(2 * n));
    const auto yy = pack_solution(y1, y2), gg = pack_forcing(g1, g2);
    CHECK(max_residual(Side::first, d, 0.0, yy, &gg) < 1e-12);

    const auto [a1, a2] = unpack_solution(yy);
    const auto [b1, b2] = unpack_forcing(gg);
    CHECK((a1.flatten() - y1.flatten()).norm() == 0.0);
    CHECK((a2.flatten() - y2.flatten()).norm() == 0.0);
    CHECK((b1.flatten() - g1.flatten()).norm() == 0.0);
    CHECK((b2.flatten() - g2.flatten()).norm() == 0.0);

    // Weighted norms add up.
    const double lhs = weighted_inner(d, gg, gg).real();
    const double rhs = weighted_inner(f, g1, g1).real() + weighted_inner(f, g2, g2).real();
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("generated relations") {
  Rng rng(3);
  for (int n = 1; n <= 2; ++n) {
    const auto f = draw(n, 5, rng);
    const DoubledSystem ds(f);
    CHECK(ds.doubled.rank() == 2 * ds.first.rank());
    CHECK(same_relation(ds.generate(ds.first.minimal(), ds.second.minimal()), ds.doubled.minimal()));
    CHECK(same_relation(ds.generate(ds.first.maximal(), ds.second.maximal()), ds.doubled.maximal()));
  }
}

TEST_CASE("generated relation of an extension and its adjoint is self-adjoint") {
  // For every boundary subspace, 𝐓 = gen{T, T*} satisfies 𝐓* = gen{T**, T*} = 𝐓,
  // whether or not T is quasi self-adjoint.
  Rng rng(4);
  const auto f = draw(1, 5, rng);
  const DoubledSystem ds(f);
  for (Eigen::Index d = 0; d <= 4; ++d) {
    const BoundarySubspace qc(4, rng.subspace(4, d));
    const auto rep = correspondence_check(ds, qc);
    CHECK(rep.tstar_in_h2);
    CHECK(rep.bold_between);
    CHECK(rep.generated_adjoint_angle < 1e-8);
    CHECK(rep.bold_self_adjoint);
    CHECK(rep.t_quasi_self_adjoint == (d == 2));
  }
}
