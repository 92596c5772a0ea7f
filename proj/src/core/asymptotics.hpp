#pragma once

#include <cstddef>
#include <span>

#include "estimators.hpp"
#include "matrix.hpp"
#include "table_core.hpp"

namespace margadj {

/// Symmetric I x I asymptotic covariance (per-sqrt(n) scale) of a marginal estimator.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(RealMatrix entries);

  std::size_t dim() const noexcept { return entries_.rows(); }
  double operator()(std::size_t k, std::size_t l) const { return entries_(k, l); }
  const RealMatrix& entries() const noexcept { return entries_; }

  double min_eigenvalue() const;
  double max_asymmetry() const;
  double max_abs_row_sum() const;
  double max_abs_entry() const;
  /// c^T M c
  double quadratic_form(std::span<const double> c) const;

  friend CovarianceMatrix operator-(const CovarianceMatrix& a, const CovarianceMatrix& b);

 private:
  RealMatrix entries_;
};

/// Multinomial covariance: p_r (1 - p_r) on the diagonal, -p_r p_s off it.
CovarianceMatrix sigma_univariate(std::span<const double> p);

/// Covariance of the unadjusted row-marginal estimator.
CovarianceMatrix sigma_marginal(const JointDistribution& p);

/// Covariance of the adjusted row-marginal estimator:
///   Gamma_kl = p_k. 1{k = l} - sum_j p_kj p_lj / p_.j
/// Throws ContractError if a column marginal is zero.
CovarianceMatrix gamma_adjusted(const JointDistribution& p);

/// E[Cov(1{X = k}, 1{X = l} | Y)] for a single draw, computed by enumerating
/// every outcome (i, j). Independent of gamma_adjusted; the two must agree.
CovarianceMatrix conditional_cov_oracle(const JointDistribution& p);

struct VarianceGap {
  double gap;     // c^T (Sigma - Gamma) c from the matrices
  double direct;  // Var(E[sum_i c_i 1{X = i} | Y]) by enumeration
};

VarianceGap variance_gap_quadratic(const JointDistribution& p, std::span<const double> c);

/// sum_ij (p_ij - p_i. p_.j)^2 / (p_i. p_.j). Lower bound on the summed
/// relative variance reduction sum_i (Sigma_ii - Gamma_ii) / Sigma_ii.
double chi2_reduction_bound(const JointDistribution& p);

/// sum_t w_t^2; at least 1/n, with equality only for uniform weights.
double effective_sample_factor(const WeightVector& w);

}  // namespace margadj
