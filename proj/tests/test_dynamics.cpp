#include "dhs/dynamics.hpp"
#include "dhs/random.hpp"

#include <catch_amalgamated.hpp>

#include <array>

using namespace dhs;

namespace {

Trajectory random_trajectory(int n, SiteRange s, Rng& rng) {
  Trajectory y(n, s);
  for (auto& v : y.values) v = rng.gaussian_vec(2 * n);
  return y;
}

}  // namespace

TEST_CASE("single steps") {
  auto f = CoefficientField::free_system(1, IntegerInterval(0, 3));
  Vec y(2);
  y << 1.0, 0.0;
  SECTION("zero λ keeps y") {
    CHECK((step(Side::first, f, 0.0, y, 0, Direction::forward) - y).norm() == 0.0);
  }
  SECTION("λ = i on the free system") {
    Vec expected(2);
    expected << 1.0, -I_unit;
    CHECK((step(Side::first, f, I_unit, y, 0, Direction::forward) - expected).norm() < 1e-15);
    CHECK((step(Side::second, f, I_unit, y, 0, Direction::forward) - expected).norm() < 1e-15);
  }
  SECTION("forward then backward round trip") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      RandomSystemOptions opt;
      opt.n = 1 + trial % 3;
      auto g = random_field(opt, rng);
      Vec y0 = rng.gaussian_vec(2 * opt.n);
      cplx l = rng.cnormal();
      for (Side side : {Side::first, Side::second}) {
        Vec y1 = step(side, g, l, y0, 2, Direction::forward);
        Vec back = step(side, g, l, y1, 2, Direction::backward);
        CHECK((back - y0).norm() <= 1e-12 * y0.norm());
      }
    }
  }
  SECTION("singular I - A is rejected") {
    std::vector<SiteBlocks> s(4, f.at(0));
    s[1].A = Mat::Identity(1, 1);
    CoefficientField bad(1, IntegerInterval(0, 3), s);
    CHECK_THROWS_AS(step(Side::first, bad, 0.0, y, 1, Direction::forward), NumericalError);
    CHECK_THROWS_AS(fundamental_matrix(Side::first, bad, 0.0, 0), NumericalError);
  }
}

TEST_CASE("fundamental matrix") {
  auto f = CoefficientField::free_system(1, IntegerInterval(0, 4));
  auto y = fundamental_matrix(Side::first, f, I_unit, 0);
  Mat expected(2, 2);
  expected << 1.0, I_unit, -I_unit, 2.0;
  CHECK((y.at(1) - expected).norm() < 1e-15);
  CHECK(y.at(0) == Mat::Identity(2, 2));

  auto z = fundamental_matrix(Side::first, f, 0.0, 2);
  for (long t = 0; t <= 5; ++t) CHECK((z.at(t) - Mat::Identity(2, 2)).norm() == 0.0);

  // M~* J M = J with M~ the side-2 matrix at conj λ.
  auto y2 = fundamental_matrix(Side::second, f, -I_unit, 0);
  const Mat j = symplectic_j(1);
  CHECK((y2.at(1).adjoint() * j * y.at(1) - j).norm() < 1e-14);

  Rng rng(5);
  RandomSystemOptions opt;
  opt.n = 2;
  auto g = random_field(opt, rng);
  auto ym = fundamental_matrix(Side::second, g, cplx(0.3, -0.7), 4);
  CHECK(ym.at(4) == Mat::Identity(4, 4));
  for (Eigen::Index c = 0; c < 4; ++c) CHECK(max_residual(Side::second, g, cplx(0.3, -0.7), ym.column(c)) < 1e-12);
}

TEST_CASE("shift identity for side-1 solutions") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    RandomSystemOptions opt;
    opt.n = 1 + trial % 3;
    auto f = random_field(opt, rng);
    const cplx l = rng.cnormal();
    const int n = opt.n;
    auto y = fundamental_matrix(Side::first, f, l, f.interval().a);
    for (long t = f.interval().a; t <= f.interval().b; ++t) {
      const auto& b = f.at(t);
      Mat inv = (Mat::Identity(n, n) - b.A).inverse();
      Mat m = Mat::Zero(2 * n, 2 * n);
      m.topLeftCorner(n, n) = inv;
      m.topRightCorner(n, n) = inv * (b.B + l * b.W2);
      m.bottomRightCorner(n, n) = Mat::Identity(n, n);
      CHECK((y.shift(t) - m * y.at(t)).norm() <= 1e-11 * (1.0 + y.at(t).norm()));
    }
  }
}

TEST_CASE("forced initial value problems") {
  SECTION("constant forcing through the B channel gives u(t) = t") {
    auto f = CoefficientField::free_system(1, IntegerInterval(0, 6));
    Trajectory g(1, f.interval());
    for (auto& v : g.values) v << 0.0, 1.0;
    auto y = solve_forced_ivp(Side::first, f, 0.0, g, 0, Vec::Zero(2));
    auto yv = solve_voc(Side::first, f, 0.0, g, 0, Vec::Zero(2));
    for (long t = 0; t <= 7; ++t) {
      CHECK(std::abs(y.at(t)(0) - cplx(double(t))) < 1e-14);
      CHECK(std::abs(y.at(t)(1)) < 1e-14);
      CHECK((yv.at(t) - y.at(t)).norm() < 1e-13);
    }
  }
  SECTION("zero forcing matches homogeneous propagation") {
    Rng rng(9);
    RandomSystemOptions opt;
    opt.n = 2;
    auto f = random_field(opt, rng);
    Vec y0 = rng.gaussian_vec(4);
    Trajectory g(2, f.interval());
    auto y = solve_forced_ivp(Side::first, f, I_unit, g, 3, y0);
    auto fm = fundamental_matrix(Side::first, f, I_unit, 3);
    auto yv = solve_voc(Side::first, f, I_unit, g, 3, y0);
    for (long t = y.first_index(); t <= y.last_index(); ++t) {
      CHECK((y.at(t) - fm.at(t) * y0).norm() <= 1e-12 * (1 + y.at(t).norm()));
      CHECK((yv.at(t) - y.at(t)).norm() <= 1e-12 * (1 + y.at(t).norm()));
    }
  }
  SECTION("variation of constants agrees with the recursion") {
    Rng rng(10);
    for (int trial = 0; trial < 40; ++trial) {
      RandomSystemOptions opt;
      opt.n = 1 + trial % 3;
      opt.sites = 4 + trial % 10;
      auto f = random_field(opt, rng);
      Trajectory g = random_trajectory(opt.n, SiteRange(f.interval()), rng);
      // Cancellation in the closed formula grows like ||Y_i|| ||Y_{3-i}||, so
      // long intervals start from the middle.
      const long c0 = opt.sites <= 8 ? f.interval().a + rng.integer(0, static_cast<int>(opt.sites))
                                     : f.interval().a + opt.sites / 2;
      const Vec y0 = rng.gaussian_vec(2 * opt.n);
      const cplx l = std::array<cplx, 4>{0.0, I_unit, -I_unit, cplx(1, 1)}[trial % 4];
      for (Side side : {Side::first, Side::second}) {
        auto y = solve_forced_ivp(side, f, l, g, c0, y0);
        CHECK(max_residual(side, f, l, y, &g) <= 1e-10);
        auto yv = solve_voc(side, f, l, g, c0, y0);
        CHECK((yv.flatten() - y.flatten()).norm() <= 1e-9 * y.flatten().norm());
      }
    }
  }
}

TEST_CASE("Lagrange identity and conservation") {
  SECTION("zero system homogeneous pair") {
    auto f = CoefficientField::free_system(1, IntegerInterval(0, 4));
    Trajectory x(1, f.interval()), zero(1, f.interval());
    for (auto& v : x.values) v << 1.0, 2.0;
    auto rep = lagrange_report(f, x, zero, x, zero, 0, 4);
    CHECK(std::abs(rep.sum_side) == 0.0);
    CHECK(std::abs(rep.boundary_side) == 0.0);
    CHECK(rep.pass);
  }
  SECTION("random forced pairs") {
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
      RandomSystemOptions opt;
      opt.n = 1 + trial % 3;
      opt.sites = 5 + trial % 8;
      auto f = random_field(opt, rng);
      SiteRange s(f.interval());
      Trajectory ff = random_trajectory(opt.n, s, rng);
      Trajectory gg = random_trajectory(opt.n, s, rng);
      auto x = solve_forced_ivp(Side::first, f, 0.0, ff, s.first, rng.gaussian_vec(2 * opt.n));
      auto y = solve_forced_ivp(Side::second, f, 0.0, gg, s.last + 1, rng.gaussian_vec(2 * opt.n));
      auto rep = lagrange_report(f, x, ff, y, gg, s.first + 1, s.last, {}, cplx(0.5, -1.0));
      CHECK(rep.scaled_gap <= 1e-10);
      CHECK(rep.conservation_error <= 1e-10);
      CHECK(rep.wronskian_variation <= 1e-10);
      CHECK(rep.pass);
    }
  }
  SECTION("inputs that do not solve the system are rejected") {
    auto f = CoefficientField::free_system(1, IntegerInterval(0, 4));
    Trajectory x(1, f.interval()), zero(1, f.interval());
    x.at(2) << 1.0, 0.0;
    CHECK_THROWS_AS(lagrange_report(f, x, zero, zero, zero, 0, 4), InputError);
  }
}

TEST_CASE("patch boundary value problem") {
  SECTION("zero data gives zero solution") {
    auto f = CoefficientField::free_system(1, IntegerInterval(0, 4));
    auto p = patch_bvp(Side::first, f, SiteRange(1, 3), Vec::Zero(2), Vec::Zero(2));
    CHECK(p.y.max_norm() == 0.0);
    CHECK(p.g.max_norm() == 0.0);
  }
  SECTION("random boundary data on random instances") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
      RandomSystemOptions opt;
      opt.n = 1 + trial % 3;
      opt.sites = 6 + trial % 6;
      auto f = random_definite_field(opt, rng);
      SiteRange w(f.interval());
      const Vec alpha = rng.gaussian_vec(2 * opt.n);
      const Vec beta = rng.gaussian_vec(2 * opt.n);
      for (Side side : {Side::first, Side::second}) {
        auto p = patch_bvp(side, f, w, alpha, beta);
        CHECK(p.boundary_residual <= 1e-9);
        CHECK(p.system_residual <= 1e-10);
      }
    }
  }
  SECTION("compact-support element after zero extension") {
    Rng rng(19);
    RandomSystemOptions opt;
    opt.n = 2;
    opt.sites = 12;
    opt.singular_weight = 0.0;
    auto f = random_field(opt, rng);
    for (int j = 0; j < 4; ++j) {
      Vec alpha = Vec::Zero(4);
      alpha(j) = 1.0;
      auto q = patch_bvp(Side::first, f, SiteRange(f.interval().a, 6), alpha, Vec::Zero(4));
      auto [y, g] = embed_patch(q, SiteRange(f.interval()));
      CHECK((y.at(f.interval().a) - alpha).norm() < 1e-9);
      for (long t = 7; t <= y.last_index(); ++t) CHECK(y.at(t).norm() < 1e-9);
      CHECK(max_residual(Side::first, f, 0.0, y, &g) <= 1e-10);
    }
  }
  SECTION("zero weight makes the Gram matrix singular") {
    auto f = CoefficientField::free_system(1, IntegerInterval(0, 4), 0.0);
    CHECK_THROWS_AS(patch_bvp(Side::first, f, SiteRange(0, 4), Vec::Ones(2), Vec::Zero(2)), NumericalError);
  }
}
