#pragma once

// Coefficient data of the discrete linear Hamiltonian system
//
//     J Δy(t) - P(t) R(y)(t) = λ W(t) R(y)(t),   t in [a, b],
//
// with P blocked as [[-C, D], [A, B]] and W = diag(W1, W2), together with the
// companion system whose coefficient is P*.

#include "dhs/linalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dhs {

/// Integer interval [a, b] carrying the system; b >= a + 1.  Trajectories on
/// it are indexed by t in [a, b + 1].
struct IntegerInterval {
  long a = 0;
  long b = 1;
  bool emulates_half_line = false;  ///< true when [a, b] truncates [a, infinity)

  IntegerInterval() = default;
  IntegerInterval(long a_, long b_, bool half_line = false) : a(a_), b(b_), emulates_half_line(half_line) {
    if (b - a < 1) throw InputError("integer interval requires b >= a + 1");
  }

  long sites() const { return b - a + 1; }
  bool contains_site(long t) const { return t >= a && t <= b; }
  bool contains_index(long t) const { return t >= a && t <= b + 1; }
  bool operator==(const IntegerInterval&) const = default;
};

/// Contiguous run of sites [first, last] (first <= last).  Used for windows
/// and for the index range of trajectories, which live on [first, last + 1].
struct SiteRange {
  long first = 0;
  long last = 0;

  SiteRange() = default;
  SiteRange(long f, long l) : first(f), last(l) {
    if (l < f) throw InputError("site range requires first <= last");
  }
  explicit SiteRange(const IntegerInterval& iv) : first(iv.a), last(iv.b) {}

  long sites() const { return last - first + 1; }
  long points() const { return last - first + 2; }
  bool contains_site(long t) const { return t >= first && t <= last; }
  bool contains_index(long t) const { return t >= first && t <= last + 1; }
  bool within(const SiteRange& outer) const { return first >= outer.first && last <= outer.last; }
  bool operator==(const SiteRange&) const = default;
};

/// Selects the operator: `first` uses P, `second` uses P*.
enum class Side { first, second };

constexpr Side other(Side s) { return s == Side::first ? Side::second : Side::first; }
constexpr int side_index(Side s) { return s == Side::first ? 1 : 2; }

/// Spectral parameter; kept as a plain complex scalar.
using SpectralParam = cplx;

/// Per-site n x n blocks.
struct SiteBlocks {
  Mat A, B, C, D, W1, W2;

  /// P = [[-C, D], [A, B]]
  Mat p_matrix() const {
    const auto n = A.rows();
    Mat p(2 * n, 2 * n);
    p << -C, D, A, B;
    return p;
  }
  Mat w_matrix() const {
    const auto n = A.rows();
    Mat w = Mat::Zero(2 * n, 2 * n);
    w.topLeftCorner(n, n) = W1;
    w.bottomRightCorner(n, n) = W2;
    return w;
  }
  /// Blocks of P* read in the same roles: A -> D*, B -> B*, C -> C*, D -> A*.
  SiteBlocks adjoint_roles() const {
    return SiteBlocks{D.adjoint(), B.adjoint(), C.adjoint(), A.adjoint(), W1, W2};
  }
};

inline void check_psd_hermitian(const Mat& w, const std::string& what, double tol) {
  const double scale = std::max(1.0, w.norm());
  if (hermitian_defect(w) > tol * scale)
    throw InputError(what + " is not Hermitian");
  const double emin = min_eigenvalue_hermitian(w);
  if (emin < -1e-12 * scale)
    throw InputError(what + " is not positive semi-definite (min eigenvalue " + std::to_string(emin) + ")");
}

/// Coefficients A, B, C, D, W1, W2 on every site of an integer interval.
class CoefficientField {
 public:
  CoefficientField() = default;

  CoefficientField(int n, IntegerInterval interval, std::vector<SiteBlocks> sites, double herm_tol = 1e-12)
      : n_(n), interval_(interval), sites_(std::move(sites)) {
    if (n_ <= 0) throw InputError("block size n must be positive");
    if (static_cast<long>(sites_.size()) != interval_.sites())
      throw InputError("expected one coefficient block per site: got " + std::to_string(sites_.size()) +
                       " for " + std::to_string(interval_.sites()) + " sites");
    for (std::size_t k = 0; k < sites_.size(); ++k) {
      const auto& s = sites_[k];
      const std::string at = " at t=" + std::to_string(interval_.a + static_cast<long>(k));
      for (const Mat* m : {&s.A, &s.B, &s.C, &s.D, &s.W1, &s.W2})
        if (m->rows() != n_ || m->cols() != n_)
          throw InputError("coefficient block dimension mismatch" + at + " (expected " + std::to_string(n_) +
                           "x" + std::to_string(n_) + ")");
      check_psd_hermitian(s.W1, "W1" + at, herm_tol);
      check_psd_hermitian(s.W2, "W2" + at, herm_tol);
    }
  }

  /// Same blocks on every site.
  static CoefficientField constant(int n, IntegerInterval interval, const SiteBlocks& blocks) {
    return CoefficientField(n, interval, std::vector<SiteBlocks>(static_cast<std::size_t>(interval.sites()), blocks));
  }

  /// P = 0 and W = w I on every site.
  static CoefficientField free_system(int n, IntegerInterval interval, double w = 1.0) {
    const Mat z = Mat::Zero(n, n);
    const Mat id = w * Mat::Identity(n, n);
    return constant(n, interval, SiteBlocks{z, z, z, z, id, id});
  }

  int n() const { return n_; }
  const IntegerInterval& interval() const { return interval_; }
  const std::vector<SiteBlocks>& sites() const { return sites_; }

  const SiteBlocks& at(long t) const {
    if (!interval_.contains_site(t)) throw InputError("site " + std::to_string(t) + " outside the interval");
    return sites_[static_cast<std::size_t>(t - interval_.a)];
  }

  /// Blocks seen by the requested side.
  SiteBlocks blocks(Side side, long t) const { return side == Side::first ? at(t) : at(t).adjoint_roles(); }

  Mat p_matrix(Side side, long t) const { return blocks(side, t).p_matrix(); }
  Mat w_matrix(long t) const { return at(t).w_matrix(); }

  /// Restriction to a sub-interval.
  CoefficientField restricted(IntegerInterval sub) const {
    if (sub.a < interval_.a || sub.b > interval_.b) throw InputError("restriction outside the interval");
    std::vector<SiteBlocks> s(sites_.begin() + (sub.a - interval_.a), sites_.begin() + (sub.b - interval_.a) + 1);
    return CoefficientField(n_, sub, std::move(s));
  }

  bool operator==(const CoefficientField& o) const {
    if (n_ != o.n_ || !(interval_ == o.interval_) || sites_.size() != o.sites_.size()) return false;
    for (std::size_t k = 0; k < sites_.size(); ++k) {
      const auto& x = sites_[k];
      const auto& y = o.sites_[k];
      if (x.A != y.A || x.B != y.B || x.C != y.C || x.D != y.D || x.W1 != y.W1 || x.W2 != y.W2) return false;
    }
    return true;
  }

 private:
  int n_ = 0;
  IntegerInterval interval_;
  std::vector<SiteBlocks> sites_;
};

/// Coefficient field of the companion system: the blocked form of P*.
/// Applying it twice returns the original field.
inline CoefficientField adjoint_side_coefficients(const CoefficientField& field) {
  std::vector<SiteBlocks> s;
  s.reserve(field.sites().size());
  for (const auto& b : field.sites()) s.push_back(b.adjoint_roles());
  return CoefficientField(field.n(), field.interval(), std::move(s));
}

/// True when P is Hermitian on every site (C = C*, B = B*, D = A*).
inline bool is_formally_self_adjoint(const CoefficientField& field, double tol = 1e-12) {
  for (const auto& b : field.sites()) {
    const Mat p = b.p_matrix();
    if (hermitian_defect(p) > tol * std::max(1.0, p.norm())) return false;
  }
  return true;
}

}  // namespace dhs
