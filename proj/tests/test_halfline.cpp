#include "dhs/halfline.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace dhs;

TEST_CASE("free system transfer oracle") {
  // With P = 0 and W = I one step at λ = i is [[1, i], [-i, 2]] per component:
  // trace 3, determinant 1, eigenvalues (3 ± √5) / 2.
  const double small = (3.0 - std::sqrt(5.0)) / 2.0, large = (3.0 + std::sqrt(5.0)) / 2.0;
  for (int n = 1; n <= 2; ++n) {
    const auto o = transfer_oracle(HalfLineSystem::free_system(n), I_unit);
    REQUIRE(o.moduli.size() == 4 * n);
    CHECK(o.decaying == 2 * n);
    for (Eigen::Index j = 0; j < 2 * n; ++j) {
      CHECK(o.moduli(j) == Catch::Approx(small).epsilon(1e-12));
      CHECK(o.moduli(2 * n + j) == Catch::Approx(large).epsilon(1e-12));
    }
  }
}

TEST_CASE("free system is limit point") {
  for (int n = 1; n <= 2; ++n) {
    const auto sys = HalfLineSystem::free_system(n);
    const auto rep = halfline_deficiency_scan(sys, {20, 40, 60});
    CHECK(rep.limit_point);
    CHECK_FALSE(rep.all_summable);
    CHECK(rep.verdict == "limit point");
    CHECK(rep.plus.estimate == transfer_oracle(sys, I_unit).decaying);
    CHECK(rep.minus.estimate == transfer_oracle(sys, -I_unit).decaying);
    CHECK(rep.half_plus.estimate == n);
    CHECK(rep.plus.monotone);
    // Growth rates match log of the transfer moduli.
    RealVec g = rep.plus.growth_rates;
    std::sort(g.data(), g.data() + g.size());
    CHECK(g(0) == Catch::Approx(std::log((3.0 - std::sqrt(5.0)) / 2.0)).epsilon(0.05));
    CHECK(g(4 * n - 1) == Catch::Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(0.05));
  }
}

TEST_CASE("decaying weight makes every solution summable") {
  const auto rep = halfline_deficiency_scan(HalfLineSystem::decaying_weight(1), {20, 40, 60});
  CHECK(rep.all_summable);
  CHECK_FALSE(rep.limit_point);
  CHECK(rep.plus.estimate == 4);
  CHECK(rep.minus.estimate == 4);
}

TEST_CASE("limit-point criterion") {
  Rng rng(7);
  const auto free = limit_point_criterion_check(HalfLineSystem::free_system(1), 60, 5, rng);
  CHECK(free.dim_plus == 2);
  CHECK(free.dim_minus == 2);
  CHECK(free.max_value <= 1e-6);
  CHECK(free.vanishes);
  CHECK(free.consistent);

  const auto toy = limit_point_criterion_check(HalfLineSystem::decaying_weight(1), 60, 5, rng);
  CHECK(toy.max_value > 1e-6);
  CHECK_FALSE(toy.vanishes);
  CHECK(toy.consistent);
}

TEST_CASE("scan input checks") {
  const auto sys = HalfLineSystem::free_system(1);
  CHECK_THROWS_AS(halfline_deficiency_scan(sys, {20, 40}), InputError);
  CHECK_THROWS_AS(halfline_deficiency_scan(sys, {20, 20, 40}), InputError);
  CHECK_THROWS_AS(halfline_deficiency_scan(sys, {40, 20, 60}), InputError);
  Rng rng(1);
  CHECK_THROWS_AS(limit_point_criterion_check(sys, 5, 1, rng), InputError);
  CHECK_THROWS_AS(limit_point_criterion_check(sys, 60, 0, rng), InputError);
  CHECK_THROWS_AS(HalfLineSystem{}.truncate(3), InputError);
}

TEST_CASE("scan CSV") {
  const auto rep = halfline_deficiency_scan(HalfLineSystem::free_system(1), {10, 20, 30});
  const auto csv = scan_csv(rep);
  CHECK(csv == scan_csv(halfline_deficiency_scan(HalfLineSystem::free_system(1), {10, 20, 30})));
  std::istringstream is(csv);
  std::string line;
  int lines = 0;
  std::getline(is, line);
  CHECK(std::count(line.begin(), line.end(), ',') == 4 + 4 + 2);
  CHECK(line.rfind("horizon,", 0) == 0);
  while (std::getline(is, line)) {
    ++lines;
    CHECK(std::count(line.begin(), line.end(), ',') == 4 + 4 + 2);
  }
  CHECK(lines == 3);
}
