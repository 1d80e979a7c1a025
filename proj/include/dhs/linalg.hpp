#pragma once

// Dense complex linear algebra helpers shared by every module: numerical rank,
// orthonormal bases, complements, intersections and principal-angle
// comparisons of subspaces.  Subspaces are always represented by a matrix
// whose columns form an orthonormal basis.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace dhs {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};


/// Numerical thresholds used across the library.  Every default is the value
/// documented for the corresponding check; all are overridable from the CLI.
struct Tolerances {
  double rank_rel = 1e-9;           ///< relative singular-value cutoff for rank decisions
  double rank_abs = 1e-13;          ///< absolute floor below which a singular value is zero
  double cond_ceiling = 1e12;       ///< I-A, I-D condition numbers above this violate A1
  double subspace_angle = 1e-8;     ///< principal-angle threshold for subspace equality
  double residual = 1e-10;          ///< scaled per-site system residual
  double boundary_residual = 1e-9;  ///< boundary residual of patch solutions
  double voc_rel = 1e-9;            ///< variation-of-constants vs recursion, relative
  double identity_gap = 1e-10;      ///< scaled Lagrange / Wronskian / conservation gaps
  double isometry = 1e-10;          ///< quotient-coordinate inner product agreement
  double hermitian = 1e-12;         ///< ||M - M*|| <= hermitian * ||M||
  double stabilize_ratio = 1e-6;    ///< cumulative-norm ratio for square summability
  double criterion_value = 1e-6;    ///< boundary-form value treated as vanishing
};

/// Thrown when a precondition on the input data is violated.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical operation cannot proceed (singular system, lost definiteness).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thin SVD m = u diag(s) v* through LAPACK's zgesvd.  Eigen 3.4.0's own
/// divide-and-conquer solver returns NaN factors (and reads out of bounds) on
/// matrices with many coinciding singular values, and LAPACK's zgesdd returns
/// non-orthogonal factors with info = 0 on some rank-deficient inputs; the
/// Jacobi solver is correct but an order of magnitude slower, so it is only
/// the fallback.
struct Svd {
  RealVec s;
  Mat u, v;

  explicit Svd(const Mat& m) {
    const lapack_int rows = static_cast<lapack_int>(m.rows());
    const lapack_int cols = static_cast<lapack_int>(m.cols());
    const lapack_int k = std::min(rows, cols);
    s = RealVec(k);
    u = Mat(rows, k);
    Mat vt(k, cols);
    if (k == 0) {
      v = Mat(cols, 0);
      return;
    }
    Mat a = m;
    RealVec superb(std::max<lapack_int>(1, k - 1));
    const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', rows, cols, a.data(), rows, s.data(), u.data(),
                                           rows, vt.data(), k, superb.data());
    if (info == 0 && u.allFinite() && vt.allFinite()) {
      v = vt.adjoint();
      return;
    }
    Eigen::JacobiSVD<Mat> j(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    s = j.singularValues();
    u = j.matrixU();
    v = j.matrixV();
  }
};

/// Singular values alone, descending.
inline RealVec singular_values(const Mat& m) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  RealVec s(k);
  if (k == 0) return s;
  Mat a = m;
  RealVec superb(std::max<lapack_int>(1, k - 1));
  const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', rows, cols, a.data(), rows, s.data(), nullptr,
                                         1, nullptr, 1, superb.data());
  if (info == 0 && s.allFinite()) return s;
  return Eigen::JacobiSVD<Mat>(m).singularValues();
}

inline Mat symplectic_j(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Mat::Identity(n, n);
  j.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return j;
}

inline double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

inline double condition_number(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

inline double hermitian_defect(const Mat& m) {
  return (m - m.adjoint()).norm();
}

/// Rank cutoff: max(rank_abs, rank_rel * largest singular value).
inline double rank_cutoff(double smax, const Tolerances& tol) {
  return std::max(tol.rank_abs, tol.rank_rel * smax);
}

inline int numerical_rank(const Mat& m, const Tolerances& tol = {}) {
  if (m.size() == 0) return 0;
  const RealVec s = singular_values(m);
  const double cut = rank_cutoff(s(0), tol);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

/// Orthogonal complement of an orthonormal basis inside C^dim.
inline Mat complement(const Mat& basis, Eigen::Index dim) {
  if (basis.cols() == 0) return Mat::Identity(dim, dim);
  if (basis.cols() >= dim) return Mat(dim, 0);
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ() * Mat::Identity(dim, dim);
  return q.rightCols(dim - basis.cols());
}

/// Orthonormal basis of the column span.  Singular values below `abs_cut` are
/// dropped; columns of `m` are expected to be O(1) so an absolute cut is used.
inline Mat orth(const Mat& m, double abs_cut = 1e-9) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  const Svd svd(m);
  Eigen::Index r = 0;
  while (r < svd.s.size() && svd.s(r) > abs_cut) ++r;
  return svd.u.leftCols(r);
}

/// Orthonormal basis of the span with a cutoff relative to the largest singular value.
inline Mat orth_relative(const Mat& m, const Tolerances& tol = {}) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  const Svd svd(m);
  const double cut = rank_cutoff(svd.s(0), tol);
  Eigen::Index r = 0;
  while (r < svd.s.size() && svd.s(r) > cut) ++r;
  return svd.u.leftCols(r);
}

/// Orthonormal basis of the null space of `m` (relative cutoff).
inline Mat null_space(const Mat& m, const Tolerances& tol = {}) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  const Svd svd(m);
  const double cut = rank_cutoff(svd.s.size() ? svd.s(0) : 0.0, tol);
  Eigen::Index r = 0;
  while (r < svd.s.size() && svd.s(r) > cut) ++r;
  return complement(svd.v.leftCols(r), cols);
}

/// Orthonormal basis of {c : ||m c|| <= abs_cut ||c||} up to the singular-value split.
inline Mat null_space_abs(const Mat& m, double abs_cut) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  const Svd svd(m);
  Eigen::Index r = 0;
  while (r < svd.s.size() && svd.s(r) > abs_cut) ++r;
  return complement(svd.v.leftCols(r), cols);
}

/// sin of the largest principal angle between span(v) and span(u), measured
/// from v: || (I - U U*) V ||_2.  Zero iff span(v) is contained in span(u).
inline double containment_gap(const Mat& v, const Mat& u) {
  if (v.cols() == 0) return 0.0;
  if (u.cols() == 0) return 1.0;
  Mat r = v - u * (u.adjoint() * v);
  return std::min(1.0, spectral_norm(r));
}

/// Largest principal angle (radians) between two equal-dimension subspaces;
/// pi/2 if the dimensions differ.
inline double max_principal_angle(const Mat& u, const Mat& v) {
  if (u.cols() != v.cols()) return M_PI / 2;
  if (u.cols() == 0) return 0.0;
  return std::asin(std::max(containment_gap(v, u), containment_gap(u, v)));
}

inline bool same_subspace(const Mat& u, const Mat& v, double angle_tol) {
  return u.cols() == v.cols() && max_principal_angle(u, v) <= angle_tol;
}

inline Mat subspace_sum(const Mat& u, const Mat& v, double abs_cut = 1e-9) {
  Mat m(std::max(u.rows(), v.rows()), u.cols() + v.cols());
  if (u.cols()) m.leftCols(u.cols()) = u;
  if (v.cols()) m.rightCols(v.cols()) = v;
  return orth(m, abs_cut);
}

/// Intersection of two subspaces given by orthonormal bases.
inline Mat subspace_intersection(const Mat& u, const Mat& v, double abs_cut = 1e-9) {
  const Eigen::Index dim = u.rows();
  if (u.cols() == 0 || v.cols() == 0) return Mat(dim, 0);
  // x = U a = V b  <=>  [U, -V] (a; b) = 0.
  Mat stacked(dim, u.cols() + v.cols());
  stacked << u, -v;
  const Svd svd(stacked);
  Eigen::Index r = 0;
  while (r < svd.s.size() && svd.s(r) > abs_cut) ++r;
  const Mat kernel = complement(svd.v.leftCols(r), stacked.cols());
  if (kernel.cols() == 0) return Mat(dim, 0);
  return orth(u * kernel.topRows(u.cols()), abs_cut);
}

/// Projection of `v` onto the orthogonal complement of span(u).
inline Mat project_out(const Mat& v, const Mat& u) {
  if (u.cols() == 0) return v;
  return v - u * (u.adjoint() * v);
}

/// Descending eigen-decomposition of a Hermitian matrix with a deterministic
/// phase convention: the largest-magnitude component of every eigenvector is
/// real and positive (ties broken by the lowest index).
struct HermitianEigen {
  RealVec values;
  Mat vectors;
};

inline HermitianEigen hermitian_eigen_desc(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigen-decomposition failed");
  const Eigen::Index m = h.rows();
  HermitianEigen out{RealVec(m), Mat(m, m)};
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index src = m - 1 - k;
    out.values(k) = es.eigenvalues()(src);
    Vec col = es.eigenvectors().col(src);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = std::abs(col(i));
      if (a > best * (1.0 + 1e-12)) {
        best = a;
        arg = i;
      }
    }
    if (best > 0.0) col *= std::conj(col(arg)) / std::abs(col(arg));
    out.vectors.col(k) = col;
  }
  return out;
}

inline double min_eigenvalue_hermitian(const Mat& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace dhs
