#include "dhs/random.hpp"
#include "dhs/relation.hpp"

#include <catch_amalgamated.hpp>

using namespace dhs;

namespace {

LinearRelation random_relation(Eigen::Index r, Eigen::Index k, Rng& rng) {
  return LinearRelation::span(r, rng.gaussian(2 * r, k));
}

Mat random_hermitian(Eigen::Index r, Rng& rng) {
  Mat m = rng.gaussian(r, r);
  return (m + m.adjoint()).eval();
}

}  // namespace

TEST_CASE("span_relation") {
  CHECK(span_relation(3, {}).dim() == 0);
  Vec x = Vec::Unit(3, 0), f = Vec::Unit(3, 2);
  auto t = span_relation(3, {{x, f}, {x, f}, {2.0 * x, 2.0 * f}});
  CHECK(t.dim() == 1);
  Rng rng(1);
  Mat m = rng.gaussian(4, 4);
  auto g = LinearRelation::graph(m);
  CHECK(g.dim() == 4);
  auto again = LinearRelation::span(4, g.basis());
  CHECK(same_relation(again, g));
  CHECK((g.basis().adjoint() * g.basis() - Mat::Identity(4, 4)).norm() < 1e-12);
  CHECK_THROWS_AS(span_relation(2, {{Vec::Zero(3), Vec::Zero(2)}}), InputError);
}

TEST_CASE("adjoint") {
  Rng rng(2);
  Mat h = random_hermitian(3, rng);
  auto g = LinearRelation::graph(h);
  CHECK(same_relation(adjoint(g), g));
  CHECK(is_self_adjoint(g));

  auto mv = LinearRelation::multivalued(Mat::Identity(3, 3));
  CHECK(same_relation(adjoint(mv), mv));

  // Non-Hermitian graph: adjoint is the graph of M*.
  Mat m = rng.gaussian(3, 3);
  CHECK(same_relation(adjoint(LinearRelation::graph(m)), LinearRelation::graph(m.adjoint())));

  for (int k = 0; k <= 8; ++k) {
    auto t = random_relation(4, k, rng);
    CHECK(same_relation(adjoint(adjoint(t)), t));
    CHECK(adjoint(t).dim() == 8 - t.dim());
    CHECK(max_bracket(t, adjoint(t)) < 1e-12);
    // N(T*) = Ran(T)^⊥
    CHECK(same_subspace(kernel(adjoint(t)), complement(range(t), 4), 1e-8));
  }
}

TEST_CASE("Arens decomposition") {
  Rng rng(3);
  Mat m = rng.gaussian(3, 3);
  auto g = LinearRelation::graph(m);
  auto parts = arens_decompose(g);
  CHECK(parts.multivalued_part.dim() == 0);
  CHECK(same_relation(parts.operator_part, g));

  auto mv = LinearRelation::multivalued(Mat::Identity(3, 3));
  auto p2 = arens_decompose(mv);
  CHECK(p2.operator_part.dim() == 0);
  CHECK(same_relation(p2.multivalued_part, mv));

  for (int trial = 0; trial < 20; ++trial) {
    // A relation with a known multivalued part: graph of a map on a subspace plus {0} x U.
    const Eigen::Index r = 4;
    Mat dom = rng.subspace(r, 2);
    Mat mvp = rng.subspace(r, 1);
    Mat pairs(2 * r, 3);
    pairs.topLeftCorner(r, 2) = dom;
    pairs.bottomLeftCorner(r, 2) = rng.gaussian(r, r) * dom;
    pairs.col(2) << Vec::Zero(r), mvp;
    auto t = LinearRelation::span(r, pairs);
    auto p = arens_decompose(t);
    CHECK(t.dim() == p.operator_part.dim() + p.multivalued_part.dim());
    CHECK(p.multivalued_part.dim() == 1);
    CHECK((p.operator_part.basis().adjoint() * p.multivalued_part.basis()).norm() < 1e-12);
    CHECK(same_subspace(domain(p.operator_part), domain(t), 1e-8));
    CHECK(same_subspace(range(p.multivalued_part), multivalued_part(t), 1e-8));
    CHECK(same_subspace(multivalued_part(t), mvp, 1e-8));
  }
}

TEST_CASE("deficiency index") {
  auto id = LinearRelation::graph(Mat::Identity(2, 2));
  CHECK(deficiency_index(id, 0.0) == 0);
  CHECK(deficiency_index(id, 1.0) == 2);
  CHECK(deficiency_index(LinearRelation::zero(3), I_unit) == 3);
  CHECK(deficiency_index(LinearRelation::zero(3), 0.0) == 3);

  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    // Hermitian restriction: graph of a Hermitian matrix on a proper subspace.
    const Eigen::Index r = 5;
    Mat h = random_hermitian(r, rng);
    Mat dom = rng.subspace(r, 3);
    Mat pairs(2 * r, 3);
    pairs << dom, h * dom;
    auto t = LinearRelation::span(r, pairs);
    CHECK(is_hermitian(t));
    CHECK(deficiency_index(t, I_unit) == deficiency_index(t, 2.0 * I_unit));
    CHECK(deficiency_index(t, -I_unit) == deficiency_index(t, -3.0 * I_unit));
  }
}

TEST_CASE("quotient_dim") {
  Mat e1 = Vec::Unit(2, 0);
  CHECK(quotient_dim(e1, Mat::Identity(2, 2)) == 1);
  CHECK(quotient_dim(e1, e1) == 0);
  CHECK_THROWS_AS(quotient_dim(Mat::Identity(2, 2), e1), InputError);
  Rng rng(5);
  Mat big = rng.subspace(6, 4);
  Mat small = orth(big * rng.gaussian(4, 2));
  CHECK(quotient_dim(small, big) == 2);
}

TEST_CASE("classify_pair") {
  Rng rng(6);
  SECTION("Hermitian graph") {
    auto t = LinearRelation::graph(random_hermitian(3, rng));
    auto rep = classify_pair(t, t, t);
    CHECK(rep.dual_pair);
    CHECK(rep.hypotheses);
    CHECK(rep.t_self_adjoint);
    CHECK(rep.quasi_self_adjoint);
    CHECK(rep.tstar_over_s == 0);
    CHECK(rep.k_over_t == 0);
    CHECK(rep.identities_hold);
    CHECK(rep.closure_matches);
  }
  SECTION("restrictions of an operator and of its adjoint") {
    // T = M on a 3-dimensional domain, S = M* on a 2-dimensional one: a dual
    // pair whose operator parts disagree, so the identities are not asserted.
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index r = 5;
      Mat m = rng.gaussian(r, r);
      Mat dt = rng.subspace(r, 3);
      Mat pt(2 * r, 3);
      pt << dt, m * dt;
      auto t = LinearRelation::span(r, pt);
      Mat ds = rng.subspace(r, 2);
      Mat ps(2 * r, 2);
      ps << ds, m.adjoint() * ds;
      auto s = LinearRelation::span(r, ps);
      auto rep = classify_pair(t, s);
      CHECK(rep.dual_pair);
      CHECK_FALSE(rep.operator_parts_agree);
      CHECK_FALSE(rep.hypotheses);
      CHECK(rep.tstar_over_s == 3);
      CHECK(rep.sstar_over_t == 2);
      CHECK(rep.closure_matches);
      CHECK(rep.adjoint_kernel_matches);
      CHECK(rep.identities_hold);
      // The graph of M itself is a proper extension.
      auto rk = classify_pair(t, s, LinearRelation::graph(m));
      CHECK(rk.proper_extension);
      CHECK(rk.k_over_t == 2);
      CHECK(rk.kstar_over_s == 3);
      CHECK_FALSE(rk.quasi_self_adjoint);
    }
  }
  SECTION("non-dual pair") {
    auto t = LinearRelation::graph(Mat::Identity(2, 2));
    auto s = LinearRelation::graph(2.0 * Mat::Identity(2, 2));
    auto rep = classify_pair(t, s);
    CHECK_FALSE(rep.dual_pair);
  }
}
