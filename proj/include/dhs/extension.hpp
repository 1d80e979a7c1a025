#pragma once

// Maximal and minimal Hamiltonian relations on a finite interval, boundary
// extensions, the Q* law for the left-end problem, and the doubled system.
//
// H_i is parametrized by θ = (y(a), q): g is the minimal-norm lift of the
// class q and y solves L_i y = W R(g) with initial value y(a).  Two θ with the
// same classes give the same y, so the boundary map (y(a), y(b+1)) is a
// function of the pair of classes.

#include "dhs/quotient.hpp"
#include "dhs/relation.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dhs {

/// Subspace of C^m given by an orthonormal basis (m x k).
struct BoundarySubspace {
  Mat basis;

  BoundarySubspace() = default;
  BoundarySubspace(Eigen::Index m, const Mat& spanning) : basis(orth(check(m, spanning))) {}

  static BoundarySubspace zero(Eigen::Index m) { return BoundarySubspace(m, Mat(m, 0)); }
  static BoundarySubspace full(Eigen::Index m) { return BoundarySubspace(m, Mat::Identity(m, m)); }
  /// Span of the listed coordinate axes.
  static BoundarySubspace coordinates(Eigen::Index m, const std::vector<Eigen::Index>& axes) {
    Mat s = Mat::Zero(m, static_cast<Eigen::Index>(axes.size()));
    for (std::size_t k = 0; k < axes.size(); ++k) {
      if (axes[k] < 0 || axes[k] >= m) throw InputError("coordinate axis out of range");
      s(axes[k], static_cast<Eigen::Index>(k)) = 1.0;
    }
    return BoundarySubspace(m, s);
  }

  Eigen::Index ambient() const { return basis.rows(); }
  Eigen::Index dim() const { return basis.cols(); }
  Mat projector() const { return basis * basis.adjoint(); }

 private:
  static const Mat& check(Eigen::Index m, const Mat& s) {
    if (s.rows() != m) throw InputError("boundary subspace has the wrong ambient dimension");
    return s;
  }
};

/// Q1 ⊕ Q2 in C^{2n} x C^{2n}, the first factor at a and the second at b+1.
inline BoundarySubspace direct_sum(const BoundarySubspace& left, const BoundarySubspace& right) {
  const Eigen::Index m = left.ambient();
  if (right.ambient() != m) throw InputError("direct sum of boundary subspaces of different size");
  Mat s = Mat::Zero(2 * m, left.dim() + right.dim());
  s.topLeftCorner(m, left.dim()) = left.basis;
  s.bottomRightCorner(m, right.dim()) = right.basis;
  return BoundarySubspace(2 * m, s);
}

/// Q* = (J Q)^⊥ in C^{2n}.
inline BoundarySubspace q_star(const BoundarySubspace& q) {
  const Eigen::Index m = q.ambient();
  if (m % 2) throw InputError("Q must live in C^{2n}");
  const Mat j = symplectic_j(static_cast<int>(m / 2));
  return BoundarySubspace(m, complement(j * q.basis, m));
}

/// The boundary form of a pair of boundary values (y(a), y(b+1)) is
/// z(b+1)* J y(b+1) - z(a)* J y(a) = z* 𝕁 y with 𝕁 = diag(-J, J).
inline Mat boundary_j(int n) {
  const Mat j = symplectic_j(n);
  Mat bj = Mat::Zero(4 * n, 4 * n);
  bj.topLeftCorner(2 * n, 2 * n) = -j;
  bj.bottomRightCorner(2 * n, 2 * n) = j;
  return bj;
}

/// Boundary subspace of the adjoint extension: Q♯ = (𝕁 Q)^⊥.
inline BoundarySubspace adjoint_boundary_subspace(const BoundarySubspace& qc) {
  const Eigen::Index m = qc.ambient();
  if (m % 4) throw InputError("boundary subspace must live in C^{4n}");
  return BoundarySubspace(m, complement(boundary_j(static_cast<int>(m / 4)) * qc.basis, m));
}

/// H_i on [a, b] together with its minimal relation and boundary map.
class HamiltonianRelationSet {
 public:
  struct Element {
    Trajectory y;
    Trajectory g;
    Vec boundary;  ///< (y(a); y(b+1))
    double residual = 0.0;
  };

  HamiltonianRelationSet(const CoefficientField& field, Side side, const Tolerances& tol = {})
      : field_(field), side_(side), tol_(tol), space_(field, tol) {
    const int n = field_.n();
    const Eigen::Index r = space_.rank();
    const Eigen::Index nb = 2 * n;
    params_ = nb + r;
    const SiteRange sites(field_.interval());
    const auto pts = static_cast<std::size_t>(sites.points());

    std::vector<Mat> forcing(pts);
    const Mat& lift = space_.lift_map();
    for (std::size_t k = 0; k < pts; ++k) {
      forcing[k] = Mat::Zero(nb, params_);
      forcing[k].rightCols(r) = lift.middleRows(static_cast<Eigen::Index>(k) * nb, nb);
    }
    Mat y0 = Mat::Zero(nb, params_);
    y0.leftCols(nb) = Mat::Identity(nb, nb);
    Propagator prop(field_, side_, 0.0, tol_);
    const auto ys = prop.propagate(sites.first, y0, forcing);

    y_map_ = Mat(space_.ambient_dim(), params_);
    g_map_ = Mat(space_.ambient_dim(), params_);
    for (std::size_t k = 0; k < pts; ++k) {
      y_map_.middleRows(static_cast<Eigen::Index>(k) * nb, nb) = ys[k];
      g_map_.middleRows(static_cast<Eigen::Index>(k) * nb, nb) = forcing[k];
    }
    m_rel_ = Mat(2 * r, params_);
    m_rel_.topRows(r) = space_.coord_map() * y_map_;
    m_rel_.bottomRows(r) = space_.coord_map() * g_map_;
    m_bd_ = Mat(2 * nb, params_);
    m_bd_.topRows(nb) = ys.front();
    m_bd_.bottomRows(nb) = ys.back();

    param_rank_ = numerical_rank(m_rel_, tol_);
    cod_.compute(m_rel_);
    maximal_ = LinearRelation::span(r, m_rel_, tol_);
    minimal_ = LinearRelation::span(r, m_rel_ * null_space(m_bd_, tol_), tol_);
  }

  const CoefficientField& field() const { return field_; }
  Side side() const { return side_; }
  const Tolerances& tolerances() const { return tol_; }
  const QuotientSpace& space() const { return space_; }
  int n() const { return field_.n(); }
  Eigen::Index rank() const { return space_.rank(); }

  const LinearRelation& maximal() const { return maximal_; }
  const LinearRelation& minimal() const { return minimal_; }

  /// Parameter-to-relation and parameter-to-boundary maps.
  const Mat& relation_params() const { return m_rel_; }
  const Mat& boundary_params() const { return m_bd_; }
  const Mat& trajectory_params() const { return y_map_; }
  const Mat& forcing_params() const { return g_map_; }
  /// Parameters are independent exactly when no nonzero θ has a zero image;
  /// otherwise the boundary map is not a function of the classes.
  bool well_defined() const { return param_rank_ == params_; }
  Eigen::Index parameter_count() const { return params_; }

  /// Solution representative of a pair of classes in H_i.  Throws InputError
  /// if the pair is not in the maximal relation.
  Element representative(const Vec& p, const Vec& q) const {
    const Eigen::Index r = rank();
    if (p.size() != r || q.size() != r) throw InputError("class coordinates have the wrong length");
    Vec target(2 * r);
    target << p, q;
    const Vec theta = cod_.solve(target);
    const double res = (m_rel_ * theta - target).norm() / std::max(1.0, target.norm());
    if (res > tol_.boundary_residual) throw InputError("pair is not in the maximal relation (residual " + std::to_string(res) + ")");
    const SiteRange sites(field_.interval());
    return Element{Trajectory::from_flat(n(), sites, y_map_ * theta), Trajectory::from_flat(n(), sites, g_map_ * theta),
                   m_bd_ * theta, res};
  }

  /// Boundary values of the basis pairs of a sub-relation of H_i (4n x dim).
  Mat boundary_values(const LinearRelation& t) const {
    if (t.space_dim() != rank()) throw InputError("relation lives on a different space");
    Mat theta = cod_.solve(t.basis());
    return m_bd_ * theta;
  }

  /// T(Qc) = {(y, g) in H_i : (y(a), y(b+1)) in Qc}.
  LinearRelation boundary_extension(const BoundarySubspace& qc) const {
    if (qc.ambient() != 4 * n()) throw InputError("boundary subspace must live in C^{4n}");
    const Mat off = (Mat::Identity(4 * n(), 4 * n()) - qc.projector()) * m_bd_;
    return LinearRelation::span(rank(), m_rel_ * null_space(off, tol_), tol_);
  }

 private:
  CoefficientField field_;
  Side side_;
  Tolerances tol_;
  QuotientSpace space_;
  Eigen::Index params_ = 0;
  Eigen::Index param_rank_ = 0;
  Mat y_map_, g_map_, m_rel_, m_bd_;
  Eigen::CompleteOrthogonalDecomposition<Mat> cod_;
  LinearRelation maximal_, minimal_;
};

inline LinearRelation build_maximal(const HamiltonianRelationSet& set) { return set.maximal(); }
inline LinearRelation build_minimal(const HamiltonianRelationSet& set) { return set.minimal(); }
inline LinearRelation boundary_extension(const HamiltonianRelationSet& set, const BoundarySubspace& qc) {
  return set.boundary_extension(qc);
}

/// H_i spanned a second way: initial data at c0 and forcing over the full
/// ambient coordinate basis, projected to classes.
inline LinearRelation maximal_from_ambient_basis(const CoefficientField& field, Side side, const QuotientSpace& space,
                                                 long c0, const Tolerances& tol = {}) {
  const int n = field.n();
  const Eigen::Index nb = 2 * n;
  const Eigen::Index amb = space.ambient_dim();
  const SiteRange sites(field.interval());
  const auto pts = static_cast<std::size_t>(sites.points());
  std::vector<Mat> forcing(pts);
  for (std::size_t k = 0; k < pts; ++k) {
    forcing[k] = Mat::Zero(nb, nb + amb);
    forcing[k].block(0, nb + static_cast<Eigen::Index>(k) * nb, nb, nb) = Mat::Identity(nb, nb);
  }
  Mat y0 = Mat::Zero(nb, nb + amb);
  y0.leftCols(nb) = Mat::Identity(nb, nb);
  Propagator prop(field, side, 0.0, tol);
  const auto ys = prop.propagate(c0, y0, forcing);
  Mat yf(amb, nb + amb), gf(amb, nb + amb);
  for (std::size_t k = 0; k < pts; ++k) {
    yf.middleRows(static_cast<Eigen::Index>(k) * nb, nb) = ys[k];
    gf.middleRows(static_cast<Eigen::Index>(k) * nb, nb) = forcing[k];
  }
  const Eigen::Index r = space.rank();
  Mat pairs(2 * r, nb + amb);
  pairs.topRows(r) = space.coord_map() * yf;
  pairs.bottomRows(r) = space.coord_map() * gf;
  return LinearRelation::span(r, pairs, tol);
}

/// Pre-minimal relation from compact patches: every element of H_i with
/// y(a) = 0 is corrected by the patch that carries y(b+1) back to zero.
struct PreminimalReport {
  LinearRelation relation;
  double boundary_residual = 0.0;  ///< largest |y(a)|, |y(b+1)| over the corrected elements, scaled
  double system_residual = 0.0;
};

inline PreminimalReport preminimal_via_patches(const HamiltonianRelationSet& set) {
  const int n = set.n();
  const Eigen::Index nb = 2 * n;
  const Eigen::Index r = set.rank();
  const auto& field = set.field();
  const auto& tol = set.tolerances();
  const SiteRange sites(field.interval());
  PreminimalReport out;

  std::vector<Trajectory> py, pg;
  for (Eigen::Index j = 0; j < nb; ++j) {
    auto p = patch_bvp(set.side(), field, sites, Vec::Zero(nb), Vec::Unit(nb, j), tol);
    out.system_residual = std::max(out.system_residual, p.system_residual);
    py.push_back(p.y);
    pg.push_back(p.g);
  }
  Mat pairs(2 * r, r);
  const Mat& ym = set.trajectory_params();
  const Mat& gm = set.forcing_params();
  for (Eigen::Index k = 0; k < r; ++k) {
    Trajectory z = Trajectory::from_flat(n, sites, ym.col(nb + k));
    Trajectory h = Trajectory::from_flat(n, sites, gm.col(nb + k));
    const Vec beta = z.at(sites.last + 1);
    for (Eigen::Index j = 0; j < nb; ++j) {
      z -= beta(j) * py[static_cast<std::size_t>(j)];
      h -= beta(j) * pg[static_cast<std::size_t>(j)];
    }
    const double scale = 1.0 + beta.norm() + z.max_norm();
    out.boundary_residual =
        std::max(out.boundary_residual, (z.at(sites.first).norm() + z.at(sites.last + 1).norm()) / scale);
    out.system_residual = std::max(out.system_residual, max_residual(set.side(), field, 0.0, z, &h));
    pairs.col(k) << set.space().project(z), set.space().project(h);
  }
  out.relation = LinearRelation::span(r, pairs, tol);
  return out;
}

/// <g1, y2> - <y1, g2> against z(b+1)* J y(b+1) - z(a)* J y(a) for
/// (y1, g1) in H_1 and (y2, g2) in H_2.
struct BoundaryFormReport {
  cplx inner_side{};
  cplx boundary_side{};
  double gap = 0.0;
  double scaled_gap = 0.0;
};

inline BoundaryFormReport boundary_form(const HamiltonianRelationSet& first, const Vec& p1, const Vec& q1,
                                        const HamiltonianRelationSet& second, const Vec& p2, const Vec& q2) {
  if (first.side() != Side::first || second.side() != Side::second) throw InputError("boundary form pairs H_1 with H_2");
  const auto e1 = first.representative(p1, q1);
  const auto e2 = second.representative(p2, q2);
  const int n = first.n();
  BoundaryFormReport rep;
  rep.inner_side = p2.dot(q1) - q2.dot(p1);
  rep.boundary_side = e2.boundary.dot(boundary_j(n) * e1.boundary);
  rep.gap = std::abs(rep.inner_side - rep.boundary_side);
  rep.scaled_gap = rep.gap / (1.0 + (p1.norm() + q1.norm()) * (p2.norm() + q2.norm()) +
                              e1.boundary.norm() * e2.boundary.norm());
  return rep;
}

/// adjoint(H_1(Q ⊕ {0})) against H_2(Q* ⊕ C^{2n}).
struct QStarReport {
  Eigen::Index dim_q = 0;
  Eigen::Index dim_qstar = 0;
  double angle = 0.0;
  bool pass = false;
};

inline QStarReport verify_qstar_adjoint(const HamiltonianRelationSet& first, const HamiltonianRelationSet& second,
                                        const BoundarySubspace& q) {
  const Eigen::Index m = 2 * first.n();
  if (q.ambient() != m) throw InputError("Q must live in C^{2n}");
  const auto t1 = first.boundary_extension(direct_sum(q, BoundarySubspace::zero(m)));
  const auto qs = q_star(q);
  const auto t2 = second.boundary_extension(direct_sum(qs, BoundarySubspace::full(m)));
  QStarReport rep;
  rep.dim_q = q.dim();
  rep.dim_qstar = qs.dim();
  const auto adj = adjoint(t1);
  rep.angle = relation_angle(adj, t2);
  rep.pass = adj.dim() == t2.dim() && rep.angle <= first.tolerances().subspace_angle;
  return rep;
}

/// The finite-interval stand-in for the half-line problem: the right end is
/// clamped to zero, so T = H_{1,0}, S = H_2({0} ⊕ C^{2n}) and K = H_1(Q ⊕ {0}).
struct LeftEndReport {
  Eigen::Index dim_q = 0;
  PairReport pair;
  bool quasi_self_adjoint = false;
  bool adjoint_law = false;  ///< K* = H_2(Q* ⊕ C^{2n})
};

inline LeftEndReport left_end_extension(const HamiltonianRelationSet& first, const HamiltonianRelationSet& second,
                                        const BoundarySubspace& q) {
  const Eigen::Index m = 2 * first.n();
  const auto& tol = first.tolerances();
  const auto s = second.boundary_extension(direct_sum(BoundarySubspace::zero(m), BoundarySubspace::full(m)));
  const auto k = first.boundary_extension(direct_sum(q, BoundarySubspace::zero(m)));
  LeftEndReport rep;
  rep.dim_q = q.dim();
  rep.pair = classify_pair(first.minimal(), s, k, tol);
  rep.quasi_self_adjoint = rep.pair.proper_extension && rep.pair.quasi_self_adjoint;
  rep.adjoint_law = verify_qstar_adjoint(first, second, q).pass;
  return rep;
}

// ---------------------------------------------------------------------------
// Doubling.  With y1 = (u1, v1), y2 = (u2, v2):
//   𝐲 = E1 (y1; y2) = (u2, u1, v1, v2),   𝐠̆ = E2 (g1; g2) = (g1u, g2u, g2v, g1v),
// and L_1 y1 = W R(g1), L_2 y2 = W R(g2) is the single system 𝐋 𝐲 = 𝐖 R(𝐠̆)
// with 𝐖 = diag(W1, W1, W2, W2) and
//   𝐏 = [[0, -C, D, 0], [-C*, 0, 0, A*], [D*, 0, 0, B*], [0, A, B, 0]].

inline Mat doubling_e1(int n) {
  const Mat id = Mat::Identity(n, n);
  Mat e = Mat::Zero(4 * n, 4 * n);
  e.block(0, 2 * n, n, n) = id;
  e.block(n, 0, n, n) = id;
  e.block(2 * n, n, n, n) = id;
  e.block(3 * n, 3 * n, n, n) = id;
  return e;
}

inline Mat doubling_e2(int n) {
  const Mat id = Mat::Identity(n, n);
  Mat e = Mat::Zero(4 * n, 4 * n);
  e.block(0, 0, n, n) = id;
  e.block(n, 2 * n, n, n) = id;
  e.block(2 * n, 3 * n, n, n) = id;
  e.block(3 * n, n, n, n) = id;
  return e;
}

/// Coefficients of the doubled system, block size 2n.
inline CoefficientField build_doubled(const CoefficientField& field) {
  const int n = field.n();
  std::vector<SiteBlocks> s;
  s.reserve(field.sites().size());
  const Mat z = Mat::Zero(n, n);
  auto diag = [&](const Mat& x, const Mat& y) {
    Mat m = Mat::Zero(2 * n, 2 * n);
    m.topLeftCorner(n, n) = x;
    m.bottomRightCorner(n, n) = y;
    return m;
  };
  auto anti = [&](const Mat& x, const Mat& y) {
    Mat m = Mat::Zero(2 * n, 2 * n);
    m.topRightCorner(n, n) = x;
    m.bottomLeftCorner(n, n) = y;
    return m;
  };
  for (const auto& b : field.sites()) {
    s.push_back(SiteBlocks{diag(b.D.adjoint(), b.A), anti(b.B.adjoint(), b.B), anti(b.C, b.C.adjoint()),
                           diag(b.D, b.A.adjoint()), diag(b.W1, b.W1), diag(b.W2, b.W2)});
  }
  return CoefficientField(2 * n, field.interval(), std::move(s));
}

namespace detail {
inline Trajectory pack(const Trajectory& x1, const Trajectory& x2, const Mat& e) {
  if (x1.n != x2.n || !(x1.sites == x2.sites)) throw InputError("doubling needs trajectories of the same shape");
  Trajectory out(2 * x1.n, x1.sites);
  Vec stacked(4 * x1.n);
  for (long t = x1.first_index(); t <= x1.last_index(); ++t) {
    stacked << x1.at(t), x2.at(t);
    out.at(t) = e * stacked;
  }
  return out;
}
inline std::pair<Trajectory, Trajectory> unpack(const Trajectory& x, const Mat& e) {
  if (x.n % 2) throw InputError("doubled trajectory has odd block size");
  const int n = x.n / 2;
  Trajectory a(n, x.sites), b(n, x.sites);
  for (long t = x.first_index(); t <= x.last_index(); ++t) {
    const Vec s = e.adjoint() * x.at(t);
    a.at(t) = s.head(2 * n);
    b.at(t) = s.tail(2 * n);
  }
  return {a, b};
}
}  // namespace detail

inline Trajectory pack_solution(const Trajectory& y1, const Trajectory& y2) {
  return detail::pack(y1, y2, doubling_e1(y1.n));
}
inline Trajectory pack_forcing(const Trajectory& g1, const Trajectory& g2) {
  return detail::pack(g1, g2, doubling_e2(g1.n));
}
inline std::pair<Trajectory, Trajectory> unpack_solution(const Trajectory& y) {
  return detail::unpack(y, doubling_e1(y.n / 2));
}
inline std::pair<Trajectory, Trajectory> unpack_forcing(const Trajectory& g) {
  return detail::unpack(g, doubling_e2(g.n / 2));
}

/// H_1, H_2 and the doubled 𝐇 on one interval.
struct DoubledSystem {
  HamiltonianRelationSet first;
  HamiltonianRelationSet second;
  HamiltonianRelationSet doubled;

  DoubledSystem(const CoefficientField& field, const Tolerances& tol = {})
      : first(field, Side::first, tol), second(field, Side::second, tol), doubled(build_doubled(field), Side::first, tol) {}

  /// Class of a doubled pair built from a side-1 and a side-2 pair.
  std::pair<Vec, Vec> doubled_classes(const Trajectory& y1, const Trajectory& g1, const Trajectory& y2,
                                      const Trajectory& g2) const {
    const auto& sp = doubled.space();
    return {sp.project(pack_solution(y1, y2)), sp.project(pack_forcing(g1, g2))};
  }

  /// Relation of the doubled space generated by {T1, T2}: the pairs
  /// (E1(y1; y2), E2(g1; g2)) with (y1, g1) in T1 and (y2, g2) in T2.
  LinearRelation generate(const LinearRelation& t1, const LinearRelation& t2) const {
    const Eigen::Index r = first.rank();
    const Eigen::Index rr = doubled.rank();
    Mat pairs(2 * rr, t1.dim() + t2.dim());
    const SiteRange sites(first.field().interval());
    const Trajectory z(first.n(), sites);
    for (Eigen::Index k = 0; k < t1.dim(); ++k) {
      const Vec b = t1.basis().col(k);
      const auto e = first.representative(b.head(r), b.tail(r));
      const auto [p, q] = doubled_classes(e.y, e.g, z, z);
      pairs.col(k) << p, q;
    }
    for (Eigen::Index k = 0; k < t2.dim(); ++k) {
      const Vec b = t2.basis().col(k);
      const auto e = second.representative(b.head(r), b.tail(r));
      const auto [p, q] = doubled_classes(z, z, e.y, e.g);
      pairs.col(t1.dim() + k) << p, q;
    }
    return LinearRelation::span(rr, pairs, first.tolerances());
  }
};

/// Correspondence between a boundary extension T of H_{1,0} (paired with
/// H_{2,0}) and the doubled relation 𝐓 generated by {T, T*}.
struct CorrespondenceReport {
  Eigen::Index dim_qc = 0;
  bool t_quasi_self_adjoint = false;
  bool bold_self_adjoint = false;
  bool equivalence_holds = false;
  double bold_angle = 0.0;           ///< angle between 𝐓 and 𝐓*
  double generated_adjoint_angle = 0.0;  ///< angle between 𝐓* and gen{T*, T**}
  bool tstar_in_h2 = false;
  bool bold_between = false;         ///< 𝐇_0 ⊆ 𝐓 ⊆ 𝐇
  PairReport pair;
};

inline CorrespondenceReport correspondence_check(const DoubledSystem& ds, const BoundarySubspace& qc) {
  const auto& tol = ds.first.tolerances();
  CorrespondenceReport rep;
  rep.dim_qc = qc.dim();
  const auto t = ds.first.boundary_extension(qc);
  const auto ts = adjoint(t);
  rep.pair = classify_pair(ds.first.minimal(), ds.second.minimal(), t, tol);
  rep.t_quasi_self_adjoint = rep.pair.proper_extension && rep.pair.quasi_self_adjoint;
  rep.tstar_in_h2 = relation_contains(ds.second.maximal(), ts, tol);
  if (!rep.tstar_in_h2) return rep;
  const auto bold = ds.generate(t, ts);
  const auto bold_star = adjoint(bold);
  rep.bold_angle = relation_angle(bold, bold_star);
  rep.bold_self_adjoint = bold.dim() == bold_star.dim() && rep.bold_angle <= tol.subspace_angle;
  rep.generated_adjoint_angle = relation_angle(bold_star, ds.generate(adjoint(ts), ts));
  rep.bold_between = relation_contains(bold, ds.doubled.minimal(), tol) && relation_contains(ds.doubled.maximal(), bold, tol);
  rep.equivalence_holds = rep.t_quasi_self_adjoint == rep.bold_self_adjoint;
  return rep;
}

}  // namespace dhs
