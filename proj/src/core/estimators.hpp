#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "matrix.hpp"
#include "table_core.hpp"

namespace margadj {

/// Observation weights w_t >= 0 summing to one.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);
  static WeightVector uniform(std::size_t n);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t t) const { return weights_[t]; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Clone multiplicities Z_t >= 1; total() = N.
class CloneCounts {
 public:
  explicit CloneCounts(std::vector<std::int64_t> counts);

  std::size_t size() const noexcept { return counts_.size(); }
  std::span<const std::int64_t> counts() const noexcept { return counts_; }
  std::int64_t total() const noexcept { return total_; }

  /// w_t = Z_t / N
  WeightVector as_weights() const;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// Cells rescaled column-wise to a known column marginal.
struct AdjustedTable {
  RealMatrix cells;
  MarginalDistribution known_col_marginal;
  /// Columns whose empirical mass was zero; those columns are left all-zero.
  std::vector<std::size_t> zero_column_mask;
};

/// p~_i = sum_t w_t 1{x_t = i}. Categories are 0-based and must be < categories.
std::vector<double> weighted_univariate(std::span<const std::uint32_t> xs, const WeightVector& w,
                                        std::size_t categories);

/// Relative frequencies of a categorical sample.
std::vector<double> empirical_univariate(std::span<const std::uint32_t> xs, std::size_t categories);

/// Frequencies of the sample in which observation t is repeated Z_t times.
std::vector<double> cloned_estimator(std::span<const std::uint32_t> xs, const CloneCounts& z,
                                     std::size_t categories);

/// p~_ij = p_hat_ij * p_.j / p_hat_.j for columns with positive empirical mass.
/// col must be strictly positive and of length J.
AdjustedTable adjust_to_known_marginal(const JointDistribution& phat, const MarginalDistribution& col);

/// p~_i. = sum_j p~_ij
std::vector<double> adjusted_row_marginal(const AdjustedTable& t);

/// One column-scaling step of proportional fitting: each column with positive
/// mass is multiplied by target_j / current_j; zero-mass columns stay zero.
/// Returns indices of zero-mass columns.
std::vector<std::size_t> scale_columns(RealMatrix& cells, std::span<const double> target);
std::vector<std::size_t> scale_rows(RealMatrix& cells, std::span<const double> target);

struct IpfOptions {
  double tol = 1e-10;
  int max_iter = 1000;
};

struct IpfResult {
  JointDistribution table;
  int iterations = 0;
  bool converged = false;
  double max_deviation = 0.0;
};

/// Iterative proportional fitting, column step first in each iteration. Stops
/// when both marginals are within tol (max absolute deviation) or after
/// max_iter iterations. A table already within tol is returned with 0 iterations.
IpfResult ipf_fit(const JointDistribution& init, const MarginalDistribution& row_target,
                  const MarginalDistribution& col_target, IpfOptions options = {});

}  // namespace margadj
