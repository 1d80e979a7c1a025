#pragma once

// Finite-dimensional linear relations: subspaces of C^r x C^r stored as an
// orthonormal basis of C^{2r} whose top block is the domain side x and whose
// bottom block is the range side f of the pairs (x, f).

#include "dhs/linalg.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dhs {

class LinearRelation {
 public:
  explicit LinearRelation(Eigen::Index r = 0) : r_(r), basis_(2 * r, 0) {}

  /// Span of the columns (x; f) of `pairs`, with a cutoff relative to the largest singular value.
  static LinearRelation span(Eigen::Index r, const Mat& pairs, const Tolerances& tol = {}) {
    if (pairs.rows() != 2 * r) throw InputError("pair matrix must have 2r rows");
    LinearRelation out(r);
    out.basis_ = orth_relative(pairs, tol);
    return out;
  }
  /// Adopts a matrix that already has orthonormal columns.
  static LinearRelation from_orthonormal(Eigen::Index r, Mat basis) {
    if (basis.rows() != 2 * r) throw InputError("basis must have 2r rows");
    LinearRelation out(r);
    out.basis_ = std::move(basis);
    return out;
  }
  static LinearRelation zero(Eigen::Index r) { return LinearRelation(r); }
  static LinearRelation full(Eigen::Index r) { return from_orthonormal(r, Mat::Identity(2 * r, 2 * r)); }
  /// Graph {(x, M x)} of a square matrix.
  static LinearRelation graph(const Mat& m) {
    if (m.rows() != m.cols()) throw InputError("graph of a non-square matrix");
    const Eigen::Index r = m.rows();
    Mat pairs(2 * r, r);
    pairs << Mat::Identity(r, r), m;
    return span(r, pairs);
  }
  /// {0} x U for a subspace U of C^r.
  static LinearRelation multivalued(const Mat& u) {
    const Eigen::Index r = u.rows();
    Mat pairs = Mat::Zero(2 * r, u.cols());
    pairs.bottomRows(r) = u;
    return span(r, pairs);
  }

  Eigen::Index space_dim() const { return r_; }
  Eigen::Index dim() const { return basis_.cols(); }
  const Mat& basis() const { return basis_; }
  Mat x_part() const { return basis_.topRows(r_); }
  Mat f_part() const { return basis_.bottomRows(r_); }

  /// Relative distance of (x, f) from the relation.
  double membership_gap(const Vec& x, const Vec& f) const {
    if (x.size() != r_ || f.size() != r_) throw InputError("pair dimension mismatch");
    Vec p(2 * r_);
    p << x, f;
    const double nrm = p.norm();
    if (nrm == 0.0) return 0.0;
    return project_out(p, basis_).norm() / nrm;
  }
  bool contains(const Vec& x, const Vec& f, const Tolerances& tol = {}) const {
    return membership_gap(x, f) <= tol.subspace_angle;
  }

 private:
  Eigen::Index r_;
  Mat basis_;
};

inline void same_space(const LinearRelation& a, const LinearRelation& b) {
  if (a.space_dim() != b.space_dim()) throw InputError("relations live on spaces of different dimension");
}

inline LinearRelation span_relation(Eigen::Index r, const std::vector<std::pair<Vec, Vec>>& pairs,
                                    const Tolerances& tol = {}) {
  Mat m(2 * r, static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (pairs[k].first.size() != r || pairs[k].second.size() != r) throw InputError("pair dimension mismatch");
    m.col(static_cast<Eigen::Index>(k)) << pairs[k].first, pairs[k].second;
  }
  return LinearRelation::span(r, m, tol);
}

/// sin of the largest angle by which `sub` leaves `super`.
inline double relation_containment_gap(const LinearRelation& sub, const LinearRelation& super) {
  same_space(sub, super);
  return containment_gap(sub.basis(), super.basis());
}
inline bool relation_contains(const LinearRelation& super, const LinearRelation& sub, const Tolerances& tol = {}) {
  return relation_containment_gap(sub, super) <= tol.subspace_angle;
}
inline double relation_angle(const LinearRelation& a, const LinearRelation& b) {
  same_space(a, b);
  return max_principal_angle(a.basis(), b.basis());
}
inline bool same_relation(const LinearRelation& a, const LinearRelation& b, const Tolerances& tol = {}) {
  same_space(a, b);
  return same_subspace(a.basis(), b.basis(), tol.subspace_angle);
}
inline LinearRelation relation_intersection(const LinearRelation& a, const LinearRelation& b,
                                            const Tolerances& tol = {}) {
  same_space(a, b);
  return LinearRelation::from_orthonormal(a.space_dim(),
                                          subspace_intersection(a.basis(), b.basis(), tol.subspace_angle));
}
inline LinearRelation relation_sum(const LinearRelation& a, const LinearRelation& b, const Tolerances& tol = {}) {
  same_space(a, b);
  return LinearRelation::from_orthonormal(a.space_dim(), subspace_sum(a.basis(), b.basis(), tol.subspace_angle));
}

/// T* = {(y, g) : <y, f> = <g, x> for all (x, f) in T}, the orthogonal
/// complement of {(f, -x) : (x, f) in T}.
inline LinearRelation adjoint(const LinearRelation& t) {
  const Eigen::Index r = t.space_dim();
  Mat swapped(2 * r, t.dim());
  swapped.topRows(r) = t.f_part();
  swapped.bottomRows(r) = -t.x_part();
  return LinearRelation::from_orthonormal(r, complement(swapped, 2 * r));
}

/// Subspaces of C^r attached to a relation, as orthonormal bases.
inline Mat domain(const LinearRelation& t, const Tolerances& tol = {}) { return orth(t.x_part(), tol.subspace_angle); }
inline Mat range(const LinearRelation& t, const Tolerances& tol = {}) { return orth(t.f_part(), tol.subspace_angle); }

/// T(0) = {f : (0, f) in T}.
inline Mat multivalued_part(const LinearRelation& t, const Tolerances& tol = {}) {
  if (t.dim() == 0) return Mat(t.space_dim(), 0);
  const Mat c = null_space_abs(t.x_part(), tol.subspace_angle);
  return orth(t.f_part() * c, tol.subspace_angle);
}
/// N(T) = {x : (x, 0) in T}.
inline Mat kernel(const LinearRelation& t, const Tolerances& tol = {}) {
  if (t.dim() == 0) return Mat(t.space_dim(), 0);
  const Mat c = null_space_abs(t.f_part(), tol.subspace_angle);
  return orth(t.x_part() * c, tol.subspace_angle);
}

struct ArensParts {
  LinearRelation operator_part;    ///< T_s = T ⊖ T_inf
  LinearRelation multivalued_part; ///< T_inf = {(0, g) in T}
};

inline ArensParts arens_decompose(const LinearRelation& t, const Tolerances& tol = {}) {
  const Eigen::Index r = t.space_dim();
  const Mat mv = multivalued_part(t, tol);
  Mat inf = Mat::Zero(2 * r, mv.cols());
  inf.bottomRows(r) = mv;
  const Mat rest = project_out(t.basis(), inf);
  return {LinearRelation::from_orthonormal(r, orth(rest, tol.subspace_angle)), LinearRelation::from_orthonormal(r, inf)};
}

/// d_λ(T) = dim of the orthogonal complement of Ran(T - λ), T - λ = {(x, f - λ x)}.
inline int deficiency_index(const LinearRelation& t, cplx lambda, const Tolerances& tol = {}) {
  const Eigen::Index r = t.space_dim();
  if (t.dim() == 0) return static_cast<int>(r);
  const Mat shifted = t.f_part() - lambda * t.x_part();
  Tolerances abs = tol;
  abs.rank_rel = 0.0;
  abs.rank_abs = tol.subspace_angle * (1.0 + std::abs(lambda));
  return static_cast<int>(r) - numerical_rank(shifted, abs);
}

/// dim(sup / sub) for subspaces given by orthonormal bases; sub must lie in sup.
inline int quotient_dim(const Mat& sub, const Mat& sup, const Tolerances& tol = {}) {
  const double gap = containment_gap(sub, sup);
  if (gap > tol.subspace_angle)
    throw InputError("quotient_dim: subspace not contained (largest principal-angle sine " + std::to_string(gap) + ")");
  return static_cast<int>(sup.cols() - sub.cols());
}

/// [(x, f) : (y, g)] = <f, y> - <x, g>.
inline cplx bracket(const Vec& x, const Vec& f, const Vec& y, const Vec& g) { return y.dot(f) - g.dot(x); }

/// Largest |[(x, f) : (y, g)]| over basis pairs of the two relations.
inline double max_bracket(const LinearRelation& a, const LinearRelation& b) {
  same_space(a, b);
  if (a.dim() == 0 || b.dim() == 0) return 0.0;
  const Mat m = b.x_part().adjoint() * a.f_part() - b.f_part().adjoint() * a.x_part();
  return m.cwiseAbs().maxCoeff();
}

/// {(x, f) in S* : [(x, f) : T*] = 0}, which equals the closure of T for a
/// dual pair {T, S}; takes the adjoints T* and S*.
inline LinearRelation closure_from_adjoints(const LinearRelation& ts, const LinearRelation& ss,
                                            const Tolerances& tol = {}) {
  same_space(ts, ss);
  const Eigen::Index r = ts.space_dim();
  // [(x, f) : (y, g)] = (y; g)* (f; -x), so the condition says (f; -x) is orthogonal to T*.
  const Mat perp = complement(ts.basis(), 2 * r);
  Mat pairs(2 * r, perp.cols());
  pairs.topRows(r) = -perp.bottomRows(r);
  pairs.bottomRows(r) = perp.topRows(r);
  return relation_intersection(ss, LinearRelation::from_orthonormal(r, pairs), tol);
}
inline LinearRelation closure_via_bracket(const LinearRelation& t, const LinearRelation& s, const Tolerances& tol = {}) {
  same_space(t, s);
  return closure_from_adjoints(adjoint(t), adjoint(s), tol);
}

inline bool is_hermitian(const LinearRelation& t, const Tolerances& tol = {}) {
  return relation_contains(adjoint(t), t, tol);
}
inline bool is_self_adjoint(const LinearRelation& t, const Tolerances& tol = {}) {
  return same_relation(adjoint(t), t, tol);
}

/// A relation with its Arens parts and multivalued part, computed once.
struct RelationParts {
  LinearRelation rel;
  ArensParts arens;
  Mat mv;

  RelationParts(const LinearRelation& t, const Tolerances& tol)
      : rel(t), arens(arens_decompose(t, tol)), mv(arens.multivalued_part.f_part()) {}
};

/// Checks (A)_s y = P g for every basis pair (y, g) of the operator part of
/// B, where P projects out A(0).  Requires B in A; the images are compared
/// after removing the multivalued part of A.
inline bool operator_parts_agree_on_domain(const RelationParts& a, const RelationParts& b, const Tolerances& tol = {}) {
  same_space(a.rel, b.rel);
  if (!relation_contains(a.rel, b.rel, tol)) return false;
  const LinearRelation& bs = b.arens.operator_part;
  if (bs.dim() == 0) return true;
  const LinearRelation& as = a.arens.operator_part;
  const Mat coeff = as.x_part().completeOrthogonalDecomposition().solve(bs.x_part());
  const Mat image = as.f_part() * coeff;
  const Mat projected = project_out(bs.f_part(), a.mv);
  const double scale = 1.0 + bs.f_part().norm();
  return (as.x_part() * coeff - bs.x_part()).norm() <= tol.subspace_angle * scale &&
         (image - projected).norm() <= tol.subspace_angle * scale;
}
inline bool operator_parts_agree_on_domain(const LinearRelation& a, const LinearRelation& b, const Tolerances& tol = {}) {
  return operator_parts_agree_on_domain(RelationParts(a, tol), RelationParts(b, tol), tol);
}

struct PairReport {
  bool dual_pair = false;
  double dual_gap = 0.0;
  bool t_hermitian = false, t_self_adjoint = false;
  bool s_hermitian = false, s_self_adjoint = false;

  // Hypotheses of the dimension identities.
  bool operator_parts_agree = false;     ///< S_s in (T*)_s and T_s in (S*)_s as subspaces
  bool operator_parts_modulo = false;    ///< weaker: images agree after removing T*(0), resp. S*(0)
  bool trivial_intersections = false;  ///< S*(0) ∩ N(T*) = {0} and T*(0) ∩ N(S*) = {0}
  bool hypotheses = false;

  int tstar_over_s = 0;  ///< dim D(T*)/D(S)
  int sstar_over_t = 0;  ///< dim D(S*)/D(T)
  bool identity_symmetric = false;

  bool has_extension = false;
  bool proper_extension = false;
  int k_over_t = 0, kstar_over_s = 0, sstar_over_k = 0, tstar_over_kstar = 0;
  bool quasi_self_adjoint = false;
  bool identity_split_k = false;      ///< D(T*)/D(S) = D(S*)/D(K) + D(T*)/D(K*)
  bool identity_split_kstar = false;  ///< D(T*)/D(S) = D(K)/D(T) + D(K*)/D(S)
  bool identity_half = false;         ///< evenness and the four halves, when K is quasi self-adjoint
  bool sufficiency_consistent = false;  ///< D(S*)/D(K) = D(K)/D(T) implies quasi self-adjoint

  double closure_angle = 0.0;
  bool closure_matches = false;
  bool adjoint_kernel_matches = false;  ///< N(T*) = Ran(T)^⊥

  /// All identities whose hypotheses verified hold.
  bool identities_hold = false;
  std::string detail;
};

/// Dual-pair diagnostics for {T, S}, with an optional extension K.
inline PairReport classify_pair(const LinearRelation& t, const LinearRelation& s,
                                const std::optional<LinearRelation>& k = std::nullopt, const Tolerances& tol = {}) {
  same_space(t, s);
  if (k) same_space(t, *k);
  const Eigen::Index r = t.space_dim();
  PairReport rep;
  const LinearRelation ts = adjoint(t);
  const LinearRelation ss = adjoint(s);
  rep.dual_gap = relation_containment_gap(t, ss);
  rep.dual_pair = rep.dual_gap <= tol.subspace_angle;
  rep.t_hermitian = relation_contains(ts, t, tol);
  rep.t_self_adjoint = same_relation(ts, t, tol);
  rep.s_hermitian = relation_contains(ss, s, tol);
  rep.s_self_adjoint = same_relation(ss, s, tol);

  const RelationParts pt(t, tol), ps(s, tol), pts(ts, tol), pss(ss, tol);
  rep.operator_parts_modulo = operator_parts_agree_on_domain(pts, ps, tol) && operator_parts_agree_on_domain(pss, pt, tol);
  rep.operator_parts_agree = relation_contains(pts.arens.operator_part, ps.arens.operator_part, tol) &&
                             relation_contains(pss.arens.operator_part, pt.arens.operator_part, tol);
  const Mat kts = kernel(ts, tol);
  rep.trivial_intersections = subspace_intersection(pss.mv, kts, tol.subspace_angle).cols() == 0 &&
                              subspace_intersection(pts.mv, kernel(ss, tol), tol.subspace_angle).cols() == 0;
  rep.hypotheses = rep.dual_pair && rep.operator_parts_agree && rep.trivial_intersections;

  std::vector<std::string> notes;
  bool ok = true;
  if (!rep.dual_pair) {
    notes.push_back("not a dual pair");
  } else {
    const Mat dt = domain(t, tol), ds = domain(s, tol), dts = domain(ts, tol), dss = domain(ss, tol);
    rep.tstar_over_s = quotient_dim(ds, dts, tol);
    rep.sstar_over_t = quotient_dim(dt, dss, tol);
    rep.identity_symmetric = rep.tstar_over_s == rep.sstar_over_t;
    if (rep.hypotheses && !rep.identity_symmetric) {
      ok = false;
      notes.push_back("dim D(T*)/D(S) differs from dim D(S*)/D(T)");
    }
    if (k) {
      rep.has_extension = true;
      rep.proper_extension = relation_contains(*k, t, tol) && relation_contains(ss, *k, tol);
      if (rep.proper_extension) {
        const LinearRelation ks = adjoint(*k);
        const Mat dk = domain(*k, tol), dks = domain(ks, tol);
        rep.k_over_t = quotient_dim(dt, dk, tol);
        rep.kstar_over_s = quotient_dim(ds, dks, tol);
        rep.sstar_over_k = quotient_dim(dk, dss, tol);
        rep.tstar_over_kstar = quotient_dim(dks, dts, tol);
        rep.quasi_self_adjoint = rep.k_over_t == rep.kstar_over_s;
        rep.identity_split_k = rep.tstar_over_s == rep.sstar_over_k + rep.tstar_over_kstar;
        rep.identity_split_kstar = rep.tstar_over_s == rep.k_over_t + rep.kstar_over_s;
        if (rep.quasi_self_adjoint) {
          const int h = rep.tstar_over_s;
          rep.identity_half = h % 2 == 0 && rep.sstar_over_k * 2 == h && rep.tstar_over_kstar * 2 == h &&
                              rep.k_over_t * 2 == h && rep.kstar_over_s * 2 == h;
        } else {
          rep.identity_half = true;  // vacuous
        }
        rep.sufficiency_consistent = rep.sstar_over_k != rep.k_over_t || rep.quasi_self_adjoint;
        if (rep.hypotheses) {
          if (!rep.identity_split_k || !rep.identity_split_kstar) {
            ok = false;
            notes.push_back("extension dimension split fails");
          }
          if (!rep.identity_half) {
            ok = false;
            notes.push_back("quasi self-adjoint extension without the half-dimension identities");
          }
          if (!rep.sufficiency_consistent) {
            ok = false;
            notes.push_back("sufficient condition holds but extension is not quasi self-adjoint");
          }
        }
      } else {
        notes.push_back("K is not a proper extension");
      }
    }
    const LinearRelation cl = closure_from_adjoints(ts, ss, tol);
    rep.closure_angle = relation_angle(cl, t);
    rep.closure_matches = rep.closure_angle <= tol.subspace_angle;
    if (!rep.closure_matches) {
      ok = false;
      notes.push_back("closure characterization fails");
    }
  }
  rep.adjoint_kernel_matches = same_subspace(kts, complement(range(t, tol), r), tol.subspace_angle);
  if (!rep.adjoint_kernel_matches) {
    ok = false;
    notes.push_back("N(T*) differs from Ran(T)^⊥");
  }
  if (!rep.hypotheses) notes.push_back("dimension-identity hypotheses not verified; identities not asserted");
  rep.identities_hold = ok;
  for (std::size_t i = 0; i < notes.size(); ++i) rep.detail += (i ? "; " : "") + notes[i];
  if (rep.detail.empty()) rep.detail = "all checks hold";
  return rep;
}

}  // namespace dhs
