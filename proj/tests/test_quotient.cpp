#include "dhs/quotient.hpp"
#include "dhs/random.hpp"

#include <catch_amalgamated.hpp>

using namespace dhs;

namespace {

Trajectory random_trajectory(int n, SiteRange s, Rng& rng) {
  Trajectory y(n, s);
  for (auto& v : y.values) v = rng.gaussian_vec(2 * n);
  return y;
}

}  // namespace

TEST_CASE("identity weight on three sites") {
  Rng rng(1);
  RandomSystemOptions opt;
  opt.n = 1;
  opt.sites = 3;
  auto f = random_field(opt, rng);
  std::vector<SiteBlocks> s = f.sites();
  for (auto& b : s) b.W1 = b.W2 = Mat::Identity(1, 1);
  CoefficientField g(1, f.interval(), s);
  auto space = build_space(g);
  CHECK(space.ambient_dim() == 8);
  CHECK(space.rank() == 6);

  Trajectory y(1, g.interval());
  y.at(0)(0) = 3.0;       // u(a)
  y.at(3)(1) = -2.0;      // v(b+1)
  CHECK(project_class(space, y).norm() < 1e-15);
  y.at(1)(0) = 1.0;
  CHECK(project_class(space, y).norm() > 0.5);
}

TEST_CASE("zero weight gives a trivial space") {
  auto f = CoefficientField::free_system(2, IntegerInterval(0, 4), 0.0);
  auto space = build_space(f);
  CHECK(space.rank() == 0);
  Trajectory y(2, f.interval());
  CHECK(project_class(space, y).size() == 0);
}

TEST_CASE("coordinates are an isometry for the weighted sum") {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    RandomSystemOptions opt;
    opt.n = 1 + trial % 3;
    opt.sites = 4 + trial % 9;
    opt.singular_weight = 0.6;
    auto f = random_field(opt, rng);
    auto space = build_space(f);
    CHECK(hermitian_defect(space.gram()) == 0.0);
    CHECK((space.coord_map() * space.lift_map() - Mat::Identity(space.rank(), space.rank())).norm() < 1e-12);
    for (int k = 0; k < 5; ++k) {
      auto y = random_trajectory(opt.n, space.sites(), rng);
      auto z = random_trajectory(opt.n, space.sites(), rng);
      const cplx direct = weighted_inner(f, y, z);
      const cplx via = class_inner(space, project_class(space, y), project_class(space, z));
      const double scale = 1.0 + std::sqrt(std::abs(weighted_inner(f, y, y)) * std::abs(weighted_inner(f, z, z)));
      CHECK(std::abs(direct - via) <= 1e-10 * scale);
      CHECK(std::abs(space.ambient_inner(y.flatten(), z.flatten()) - direct) <= 1e-12 * scale);
      CHECK(weighted_inner(f, y, y).real() >= 0.0);
      CHECK(std::abs(project_class(space, y).norm() - std::sqrt(weighted_inner(f, y, y).real())) <=
            1e-10 * (1.0 + y.flatten().norm()));

      // Adding a kernel element does not change the class.
      Vec kvec = space.kernel_basis() * rng.gaussian_vec(space.kernel_basis().cols());
      auto yk = y + Trajectory::from_flat(opt.n, space.sites(), kvec);
      CHECK((project_class(space, yk) - project_class(space, y)).norm() <= 1e-10 * (1.0 + y.flatten().norm()));

      // Lift is a section of the projection.
      Vec p = project_class(space, y);
      CHECK((project_class(space, space.lift(p)) - p).norm() <= 1e-10 * (1.0 + p.norm()));
    }
    // Orthonormal coordinate vectors.
    if (space.rank() >= 2) {
      Vec e0 = Vec::Unit(space.rank(), 0), e1 = Vec::Unit(space.rank(), 1);
      CHECK(std::abs(class_inner(space, e0, e0) - 1.0) < 1e-15);
      CHECK(std::abs(class_inner(space, e0, e1)) < 1e-15);
    }
  }
}

TEST_CASE("build is deterministic") {
  Rng r1(4), r2(4);
  RandomSystemOptions opt;
  opt.n = 3;
  auto a = build_space(random_field(opt, r1));
  auto b = build_space(random_field(opt, r2));
  CHECK(a.coord_map() == b.coord_map());
}

TEST_CASE("mismatched inputs are rejected") {
  auto f = CoefficientField::free_system(1, IntegerInterval(0, 4));
  auto space = build_space(f);
  Trajectory y(1, SiteRange(0, 3));
  CHECK_THROWS_AS(project_class(space, y), InputError);
  CHECK_THROWS_AS(class_inner(space, Vec::Zero(2), Vec::Zero(3)), InputError);
}
