#pragma once

// Internal: full-covariance Gaussian sufficient statistics shared by the BIC
// scan and the clustering pass.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <string>

#include "pvseg/error.hpp"
#include "pvseg/bic.hpp"
#include "pvseg/features.hpp"

namespace pvseg::detail {

constexpr int kDim = static_cast<int>(kMfccCount);
using Vec = Eigen::Matrix<double, kDim, 1>;
using Mat = Eigen::Matrix<double, kDim, kDim>;

// Sufficient statistics of frames taken relative to a fixed reference point,
// which keeps the one-pass covariance free of large-offset cancellation.
struct GaussianStats {
  std::size_t n = 0;
  Vec sum = Vec::Zero();
  Mat outer = Mat::Zero();

  void add(const Vec& x) {
    ++n;
    sum += x;
    outer.noalias() += x * x.transpose();
  }

  GaussianStats operator+(const GaussianStats& o) const {
    GaussianStats r;
    r.n = n + o.n;
    r.sum = sum + o.sum;
    r.outer = outer + o.outer;
    return r;
  }

  GaussianStats operator-(const GaussianStats& o) const {
    GaussianStats r;
    r.n = n - o.n;
    r.sum = sum - o.sum;
    r.outer = outer - o.outer;
    return r;
  }

  // Maximum-likelihood covariance, symmetrized.
  Mat covariance() const {
    const double inv = 1.0 / static_cast<double>(n);
    const Vec mean = sum * inv;
    const Mat cov = outer * inv - mean * mean.transpose();
    return 0.5 * (cov + cov.transpose());
  }

  double log_det_covariance(const Mat& ridge) const {
    const Eigen::LLT<Mat> llt(covariance() + ridge);
    if (llt.info() != Eigen::Success)
      throw Error(Errc::singular_covariance, "covariance of " + std::to_string(n) +
                                                 " frames is not positive definite");
    const auto diag = llt.matrixL().toDenseMatrix().diagonal();
    double ld = 0.0;
    for (int i = 0; i < kDim; ++i) ld += std::log(diag[i]);
    return 2.0 * ld;
  }
};

// kCovarianceRidge in the whitened coordinates of the pooled data, with a
// kCovarianceRidge^2 floor for degenerate pools.
inline Mat pooled_ridge(const GaussianStats& whole) {
  Mat r = kCovarianceRidge * whole.covariance();
  r.diagonal().array() += kCovarianceRidge * kCovarianceRidge;
  return r;
}

inline Vec to_vec(const FeatureFrame& f, const FeatureFrame& ref) {
  Vec v;
  for (int i = 0; i < kDim; ++i) v[i] = f.coeffs[static_cast<std::size_t>(i)] - ref.coeffs[static_cast<std::size_t>(i)];
  return v;
}

// (N/2) ln|S| - (N1/2) ln|S1| - (N2/2) ln|S2|
inline double data_term(const GaussianStats& whole, const GaussianStats& left, const GaussianStats& right) {
  const Mat ridge = pooled_ridge(whole);
  return 0.5 * static_cast<double>(whole.n) * whole.log_det_covariance(ridge) -
         0.5 * static_cast<double>(left.n) * left.log_det_covariance(ridge) -
         0.5 * static_cast<double>(right.n) * right.log_det_covariance(ridge);
}

}  // namespace pvseg::detail
