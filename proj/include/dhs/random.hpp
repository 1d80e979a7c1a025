#pragma once

// Seeded random coefficient fields for property sweeps.

#include "dhs/gram.hpp"

#include <random>

namespace dhs {

struct RandomSystemOptions {
  int n = 1;
  long a = 0;
  long sites = 8;
  double rho = 0.5;           ///< spectral-norm bound on A and D (keeps I - A, I - D invertible)
  double coupling = 0.5;      ///< spectral-norm bound on B and C
  double singular_weight = 0.3;  ///< probability that a weight block is rank deficient
  bool hermitian = false;     ///< draw C = C*, B = B*, D = A*
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double normal() { return norm_(eng_); }
  double uniform() { return unif_(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  std::mt19937_64& engine() { return eng_; }

  cplx cnormal() { return {normal(), normal()}; }

  Mat gaussian(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cnormal();
    return m;
  }
  Vec gaussian_vec(Eigen::Index len) { return gaussian(len, 1).col(0); }

  /// Random matrix with spectral norm drawn uniformly in (0, bound].
  Mat bounded(Eigen::Index n, double bound) {
    Mat m = gaussian(n, n);
    return m * (bound * (0.05 + 0.95 * uniform()) / spectral_norm(m));
  }

  /// Random Hermitian PSD matrix of norm at most one; rank n - 1 with probability p_singular.
  Mat psd(Eigen::Index n, double p_singular) {
    Eigen::Index k = n;
    if (n > 1 && uniform() < p_singular) k = n - 1;
    if (n == 1 && uniform() < p_singular * 0.5) return Mat::Zero(1, 1);
    Mat x = gaussian(n, k);
    Mat w = x * x.adjoint();
    w = (0.5 * (w + w.adjoint())).eval();
    return w / spectral_norm(w);
  }

  /// Orthonormal basis of a random subspace of dimension k in C^m.
  Mat subspace(Eigen::Index m, Eigen::Index k) {
    if (k == 0) return Mat(m, 0);
    Eigen::HouseholderQR<Mat> qr(gaussian(m, k));
    return qr.householderQ() * Mat::Identity(m, k);
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> norm_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

inline CoefficientField random_field(const RandomSystemOptions& opt, Rng& rng) {
  if (opt.rho >= 1.0) throw InputError("rho must be below one so that I - A and I - D stay invertible");
  const int n = opt.n;
  std::vector<SiteBlocks> sites;
  for (long k = 0; k < opt.sites; ++k) {
    SiteBlocks b;
    b.A = rng.bounded(n, opt.rho);
    b.B = rng.bounded(n, opt.coupling);
    b.C = rng.bounded(n, opt.coupling);
    b.D = rng.bounded(n, opt.rho);
    if (opt.hermitian) {
      b.B = (0.5 * (b.B + b.B.adjoint())).eval();
      b.C = (0.5 * (b.C + b.C.adjoint())).eval();
      b.D = b.A.adjoint();
    }
    b.W1 = rng.psd(n, opt.singular_weight);
    b.W2 = rng.psd(n, opt.singular_weight);
    sites.push_back(b);
  }
  return CoefficientField(n, IntegerInterval(opt.a, opt.a + opt.sites - 1), std::move(sites));
}

/// Draws fields until the definiteness surrogate holds on the whole interval
/// for the given samples.
inline CoefficientField random_definite_field(const RandomSystemOptions& opt, Rng& rng,
                                              const std::vector<cplx>& lambdas = {0.0, I_unit},
                                              const Tolerances& tol = {}) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    CoefficientField f = random_field(opt, rng);
    if (detail::window_definite(f, SiteRange(f.interval()), lambdas, tol)) return f;
  }
  throw NumericalError("could not draw a definite random field");
}

}  // namespace dhs
