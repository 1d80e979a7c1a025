#pragma once

// The weighted space L²_W([a, b]): trajectories on [a, b+1] modulo the kernel
// of the semi-inner product <y, z> = sum_t R(z)*(t) W(t) R(y)(t).
//
// Ambient coordinates stack y(a), y(a+1), ..., y(b+1); index (t - a) 2n + j.
// Since R(y)(t) reads u(t+1) and v(t), and W is block diagonal, the Gram
// matrix is block diagonal over the slots u(t') (weight W1(t'-1)) and v(t')
// (weight W2(t')); u(a) and v(b+1) carry no weight.

#include "dhs/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace dhs {

class QuotientSpace {
 public:
  QuotientSpace() = default;

  QuotientSpace(const CoefficientField& field, const Tolerances& tol = {})
      : n_(field.n()), interval_(field.interval()) {
    const long pts = interval_.sites() + 1;
    ambient_ = static_cast<Eigen::Index>(pts * 2 * n_);
    gram_ = Mat::Zero(ambient_, ambient_);

    struct Pair {
      double value;
      Eigen::Index order;
      Vec vec;
    };
    std::vector<Pair> pairs;
    auto add_block = [&](Eigen::Index offset, const Mat& w) {
      gram_.block(offset, offset, n_, n_) = w;
      const auto e = hermitian_eigen_desc(w);
      for (Eigen::Index k = 0; k < n_; ++k) {
        Vec v = Vec::Zero(ambient_);
        v.segment(offset, n_) = e.vectors.col(k);
        pairs.push_back({e.values(k), static_cast<Eigen::Index>(pairs.size()), v});
      }
    };
    for (long t = interval_.a; t <= interval_.b + 1; ++t) {
      const Eigen::Index base = static_cast<Eigen::Index>((t - interval_.a) * 2 * n_);
      add_block(base, t > interval_.a ? field.at(t - 1).W1 : Mat::Zero(n_, n_));
      add_block(base + n_, t <= interval_.b ? field.at(t).W2 : Mat::Zero(n_, n_));
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.value > y.value; });
    const double cut = rank_cutoff(pairs.empty() ? 0.0 : std::max(pairs.front().value, 0.0), tol);
    rank_ = 0;
    while (rank_ < static_cast<Eigen::Index>(pairs.size()) && pairs[static_cast<std::size_t>(rank_)].value > cut)
      ++rank_;
    eigenvalues_ = RealVec(ambient_);
    Mat v(ambient_, ambient_);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      eigenvalues_(static_cast<Eigen::Index>(k)) = pairs[k].value;
      v.col(static_cast<Eigen::Index>(k)) = pairs[k].vec;
    }
    coord_ = Mat(rank_, ambient_);
    lift_ = Mat(ambient_, rank_);
    for (Eigen::Index k = 0; k < rank_; ++k) {
      const double s = std::sqrt(eigenvalues_(k));
      coord_.row(k) = s * v.col(k).adjoint();
      lift_.col(k) = v.col(k) / s;
    }
    kernel_ = v.rightCols(ambient_ - rank_);
  }

  int n() const { return n_; }
  const IntegerInterval& interval() const { return interval_; }
  SiteRange sites() const { return SiteRange(interval_); }
  Eigen::Index ambient_dim() const { return ambient_; }
  Eigen::Index rank() const { return rank_; }
  const Mat& gram() const { return gram_; }
  const RealVec& eigenvalues() const { return eigenvalues_; }
  /// r x N map to quotient coordinates; coord* coord = Gram.
  const Mat& coord_map() const { return coord_; }
  /// N x r minimal-norm lift; coord lift = I.
  const Mat& lift_map() const { return lift_; }
  /// Orthonormal basis of the semi-norm kernel in ambient coordinates.
  const Mat& kernel_basis() const { return kernel_; }

  Vec project(const Trajectory& y) const {
    check(y);
    return coord_ * y.flatten();
  }
  Mat project_ambient(const Mat& flat) const {
    if (flat.rows() != ambient_) throw InputError("ambient vector has the wrong length");
    return coord_ * flat;
  }
  Trajectory lift(const Vec& p) const {
    if (p.size() != rank_) throw InputError("quotient coordinates have the wrong length");
    return Trajectory::from_flat(n_, sites(), lift_ * p);
  }

  /// Semi-inner product of ambient vectors, <y, z> = z* G y.
  cplx ambient_inner(const Vec& y, const Vec& z) const { return z.dot(gram_ * y); }

  cplx inner(const Vec& p, const Vec& q) const {
    if (p.size() != rank_ || q.size() != rank_) throw InputError("quotient coordinates have the wrong length");
    return q.dot(p);
  }

 private:
  void check(const Trajectory& y) const {
    if (y.n != n_ || !(y.sites == sites())) throw InputError("trajectory does not live on the space's interval");
  }

  int n_ = 0;
  IntegerInterval interval_;
  Eigen::Index ambient_ = 0;
  Eigen::Index rank_ = 0;
  Mat gram_, coord_, lift_, kernel_;
  RealVec eigenvalues_;
};

inline QuotientSpace build_space(const CoefficientField& field, const Tolerances& tol = {}) {
  return QuotientSpace(field, tol);
}

inline Vec project_class(const QuotientSpace& space, const Trajectory& y) { return space.project(y); }

/// <p, q> in quotient coordinates: linear in p, conjugate linear in q.
inline cplx class_inner(const QuotientSpace& space, const Vec& p, const Vec& q) { return space.inner(p, q); }

}  // namespace dhs
