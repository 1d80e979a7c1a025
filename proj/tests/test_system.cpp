#include "dhs/gram.hpp"
#include "dhs/random.hpp"

#include <catch_amalgamated.hpp>

using namespace dhs;

namespace {

Mat scalar(cplx c) { return Mat::Constant(1, 1, c); }

SiteBlocks scalar_blocks(cplx a, cplx b, cplx c, cplx d, double w1 = 1.0, double w2 = 1.0) {
  return SiteBlocks{scalar(a), scalar(b), scalar(c), scalar(d), scalar(w1), scalar(w2)};
}

}  // namespace

TEST_CASE("interval and window validation") {
  CHECK_THROWS_AS(IntegerInterval(3, 3), InputError);
  CHECK_THROWS_AS(SiteRange(2, 1), InputError);
  IntegerInterval iv(0, 5);
  CHECK(iv.sites() == 6);
  CHECK(SiteRange(0, 0).points() == 2);
}

TEST_CASE("coefficient field rejects malformed blocks") {
  IntegerInterval iv(0, 1);
  SiteBlocks good = scalar_blocks(0, 0, 0, 0);
  SiteBlocks bad_dim = good;
  bad_dim.A = Mat::Zero(2, 2);
  CHECK_THROWS_AS(CoefficientField(1, iv, {good, bad_dim}), InputError);
  SiteBlocks indefinite = good;
  indefinite.W1 = scalar(-1.0);
  CHECK_THROWS_AS(CoefficientField(1, iv, {good, indefinite}), InputError);
  SiteBlocks non_herm = scalar_blocks(0, 0, 0, 0);
  non_herm.W2 = scalar(cplx(1.0, 0.5));
  CHECK_THROWS_AS(CoefficientField(1, iv, {good, non_herm}), InputError);
  CHECK_THROWS_AS(CoefficientField(1, iv, {good}), InputError);
}

TEST_CASE("adjoint-side coefficients") {
  IntegerInterval iv(0, 1);
  auto f = CoefficientField::constant(1, iv, scalar_blocks(cplx(0, 0.1), 0.2, 0.3, cplx(0, 0.4)));
  auto g = adjoint_side_coefficients(f);
  const auto& b = g.at(0);
  CHECK(std::abs(b.A(0, 0) - cplx(0, -0.4)) < 1e-15);
  CHECK(std::abs(b.B(0, 0) - cplx(0.2, 0)) < 1e-15);
  CHECK(std::abs(b.C(0, 0) - cplx(0.3, 0)) < 1e-15);
  CHECK(std::abs(b.D(0, 0) - cplx(0, -0.1)) < 1e-15);
  CHECK(adjoint_side_coefficients(g) == f);

  auto zero = CoefficientField::free_system(2, iv);
  CHECK(adjoint_side_coefficients(zero) == zero);

  Rng rng(7);
  RandomSystemOptions opt;
  opt.n = 3;
  opt.hermitian = true;
  auto h = random_field(opt, rng);
  CHECK(is_formally_self_adjoint(h));
  auto h2 = adjoint_side_coefficients(h);
  for (long t = h.interval().a; t <= h.interval().b; ++t)
    CHECK((h2.p_matrix(Side::first, t) - h.p_matrix(Side::first, t)).norm() < 1e-14);

  opt.hermitian = false;
  auto r = random_field(opt, rng);
  CHECK(adjoint_side_coefficients(adjoint_side_coefficients(r)) == r);
  // The second side reads P*.
  for (long t = r.interval().a; t <= r.interval().b; ++t)
    CHECK((r.p_matrix(Side::second, t) - r.p_matrix(Side::first, t).adjoint()).norm() < 1e-14);
}

TEST_CASE("window Gram matrix") {
  SECTION("one-site hand evaluation at λ = i") {
    auto f = CoefficientField::free_system(1, IntegerInterval(0, 3));
    Mat phi = gram_window(f, Side::first, I_unit, SiteRange(0, 0), 0);
    Mat expected(2, 2);
    expected << 1.0, I_unit, -I_unit, 2.0;
    CHECK((phi - expected).norm() < 1e-14);
  }
  SECTION("identity propagation gives m I") {
    auto f = CoefficientField::free_system(2, IntegerInterval(0, 6));
    Mat phi = gram_window(f, Side::second, 0.0, SiteRange(1, 4), 2);
    CHECK((phi - 4.0 * Mat::Identity(4, 4)).norm() < 1e-14);
  }
  SECTION("rank does not depend on λ") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      RandomSystemOptions opt;
      opt.n = 1 + trial % 3;
      opt.sites = 6;
      opt.singular_weight = 0.8;
      auto f = random_field(opt, rng);
      for (Side side : {Side::first, Side::second}) {
        SiteRange w(0, 1);
        std::vector<int> ranks;
        for (cplx l : {cplx(0), cplx(1), I_unit, cplx(1, 1)}) {
          Mat phi = gram_window(f, side, l, w, 0);
          CHECK(hermitian_defect(phi) <= 1e-12 * phi.norm());
          CHECK(min_eigenvalue_hermitian(phi) >= -1e-12 * phi.norm());
          ranks.push_back(numerical_rank(phi));
        }
        for (int r : ranks) CHECK(r == ranks.front());
      }
    }
  }
  SECTION("enlarging the window never lowers the rank") {
    Rng rng(12);
    RandomSystemOptions opt;
    opt.n = 2;
    opt.sites = 8;
    opt.singular_weight = 0.9;
    auto f = random_field(opt, rng);
    int prev = 0;
    for (long last = 0; last <= 7; ++last) {
      int r = numerical_rank(gram_window(f, Side::first, I_unit, SiteRange(0, last), 0));
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("validate_system") {
  std::vector<cplx> lambdas{0.0, I_unit};
  SECTION("zero coefficients with identity weight pass") {
    auto f = CoefficientField::free_system(1, IntegerInterval(0, 5));
    auto rep = validate_system(f, SiteRange(0, 2), lambdas);
    CHECK(rep.a1);
    CHECK(rep.definite);
    CHECK(rep.verdict == "pass");
    REQUIRE(rep.smallest_passing_prefix);
    CHECK(rep.smallest_passing_prefix->last == 0);
  }
  SECTION("A = 1 at one site breaks A1") {
    std::vector<SiteBlocks> s(6, scalar_blocks(0, 0, 0, 0));
    s[3].A = scalar(1.0);
    CoefficientField f(1, IntegerInterval(0, 5), s);
    auto rep = validate_system(f, SiteRange(0, 2), lambdas);
    CHECK_FALSE(rep.a1);
    CHECK_FALSE(rep.per_site[3].invertible);
    CHECK(rep.per_site[2].invertible);
    CHECK(rep.verdict == "fail");
  }
  SECTION("zero weight fails definiteness") {
    auto f = CoefficientField::free_system(1, IntegerInterval(0, 5), 0.0);
    auto rep = validate_system(f, SiteRange(0, 2), lambdas);
    CHECK(rep.a1);
    CHECK_FALSE(rep.definite);
    for (const auto& s : rep.phi) CHECK(s.max_eig == 0.0);
    CHECK(rep.verdict == "fail");
  }
}
