#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace margadj {

/// Tolerance for "sums to one" checks on stored distributions.
inline constexpr double kSumTolerance = 1e-12;

enum class Axis { Row, Column };

/// Probability vector over one axis of a two-way table.
class MarginalDistribution {
 public:
  /// Throws ContractError unless entries are finite, >= 0 and sum to 1 within kSumTolerance.
  MarginalDistribution(Axis axis, std::vector<double> probs);

  Axis axis() const noexcept { return axis_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }
  std::span<const double> probs() const noexcept { return probs_; }

  bool strictly_positive() const noexcept;
  /// Throws ContractError naming `what` if any entry is zero.
  void require_strictly_positive(const char* what) const;

  bool operator==(const MarginalDistribution&) const = default;

 private:
  Axis axis_;
  std::vector<double> probs_;
};

/// Exact I x J probability table p_ij.
class JointDistribution {
 public:
  /// Throws ContractError unless I, J >= 1, every cell is finite and >= 0, and
  /// the cells sum to 1 within kSumTolerance.
  explicit JointDistribution(RealMatrix cells);
  JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> cells);

  std::size_t rows() const noexcept { return cells_.rows(); }
  std::size_t cols() const noexcept { return cells_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return cells_(i, j); }
  const RealMatrix& cells() const noexcept { return cells_; }

  bool operator==(const JointDistribution&) const = default;

 private:
  RealMatrix cells_;
};

/// I x J nonnegative integer counts n_ij; total() is the sample size.
class CountTable {
 public:
  /// Throws ContractError on negative counts or empty dimensions.
  explicit CountTable(Matrix<std::int64_t> counts);
  CountTable(std::size_t rows, std::size_t cols, std::vector<std::int64_t> counts);

  std::size_t rows() const noexcept { return counts_.rows(); }
  std::size_t cols() const noexcept { return counts_.cols(); }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return counts_(i, j); }
  std::int64_t total() const noexcept { return total_; }
  const Matrix<std::int64_t>& counts() const noexcept { return counts_; }

  bool operator==(const CountTable&) const = default;

 private:
  Matrix<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// Observed pairs (x, y), 0-based category indices.
class SampleBatch {
 public:
  /// Throws ContractError if any index is outside [0, rows) x [0, cols).
  SampleBatch(std::size_t rows, std::size_t cols, std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs() const noexcept { return pairs_; }

  CountTable tabulate() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
};

MarginalDistribution row_marginal(const JointDistribution& p);
MarginalDistribution column_marginal(const JointDistribution& p);

/// Row and column sums of an arbitrary nonnegative cell matrix (no normalization).
std::vector<double> row_sums(const RealMatrix& cells);
std::vector<double> column_sums(const RealMatrix& cells);

/// p_hat_ij = n_ij / n. Throws ContractError("no observations") when n = 0.
JointDistribution empirical_joint(const CountTable& counts);

/// Draws a multinomial(n, vec(p)) count table. Cells are visited row-major with
/// the conditional-binomial method; identical (p, n, seed) give identical counts.
CountTable sample(const JointDistribution& p, std::int64_t n, std::uint64_t seed);

/// Draws n individual pairs (X_t, Y_t) i.i.d. from p.
SampleBatch sample_pairs(const JointDistribution& p, std::size_t n, std::uint64_t seed);

struct CrossProductRatio {
  std::size_t i, r;  // rows, i < r
  std::size_t j, s;  // columns, j < s
  double value;      // p_ij p_rs / (p_rj p_is); NaN when undefined
  bool defined;      // false when any of the four cells is zero
};

/// All ratios p_ij p_rs / (p_rj p_is) with i < r and j < s, ordered by (i, r, j, s).
std::vector<CrossProductRatio> cross_product_ratios(const RealMatrix& cells);
std::vector<CrossProductRatio> cross_product_ratios(const JointDistribution& p);

/// The 2 x 2 table with row marginal (a, 1 - a), column marginal (b, 1 - b) and
/// cross-product ratio cpr. The top-left cell solves
///   (1 - cpr) x^2 + (1 - a - b + cpr (a + b)) x - cpr a b = 0
/// inside the Frechet interval [max(0, a + b - 1), min(a, b)].
JointDistribution build_2x2_from_marginals_cpr(const MarginalDistribution& row,
                                               const MarginalDistribution& col, double cpr);

/// Outer product a b^T.
JointDistribution independent_table(const MarginalDistribution& row, const MarginalDistribution& col);

}  // namespace margadj
