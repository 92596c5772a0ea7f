#include "estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace margadj {

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ContractError("weights: empty");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw ContractError("weights: entries must be finite and nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) throw ContractError("weights: must sum to 1");
}

WeightVector WeightVector::uniform(std::size_t n) {
  if (n == 0) throw ContractError("weights: empty");
  return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

CloneCounts::CloneCounts(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw ContractError("clone counts: empty");
  for (std::int64_t z : counts_) {
    if (z < 1) throw ContractError("clone counts: every observation must appear at least once");
    total_ += z;
  }
}

WeightVector CloneCounts::as_weights() const {
  std::vector<double> w(counts_.size());
  const auto n = static_cast<double>(total_);
  for (std::size_t t = 0; t < counts_.size(); ++t) w[t] = static_cast<double>(counts_[t]) / n;
  return WeightVector(std::move(w));
}

namespace {

void check_categories(std::span<const std::uint32_t> xs, std::size_t categories) {
  if (categories == 0) throw ContractError("estimator: number of categories must be positive");
  for (std::uint32_t x : xs) {
    if (x >= categories) throw ContractError("estimator: category out of range");
  }
}

}  // namespace

std::vector<double> weighted_univariate(std::span<const std::uint32_t> xs, const WeightVector& w,
                                        std::size_t categories) {
  if (xs.size() != w.size()) throw ContractError("weighted estimator: sample and weight lengths differ");
  check_categories(xs, categories);
  std::vector<double> out(categories, 0.0);
  for (std::size_t t = 0; t < xs.size(); ++t) out[xs[t]] += w[t];
  return out;
}

std::vector<double> empirical_univariate(std::span<const std::uint32_t> xs, std::size_t categories) {
  if (xs.empty()) throw ContractError("no observations");
  check_categories(xs, categories);
  std::vector<std::int64_t> counts(categories, 0);
  for (std::uint32_t x : xs) ++counts[x];
  std::vector<double> out(categories);
  const auto n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < categories; ++i) out[i] = static_cast<double>(counts[i]) / n;
  return out;
}

std::vector<double> cloned_estimator(std::span<const std::uint32_t> xs, const CloneCounts& z,
                                     std::size_t categories) {
  if (xs.size() != z.size()) throw ContractError("cloned estimator: sample and clone-count lengths differ");
  check_categories(xs, categories);
  // frequencies in the expanded sample of size N
  std::vector<std::int64_t> copies(categories, 0);
  for (std::size_t t = 0; t < xs.size(); ++t) copies[xs[t]] += z.counts()[t];
  std::vector<double> out(categories);
  const auto total = static_cast<double>(z.total());
  for (std::size_t i = 0; i < categories; ++i) out[i] = static_cast<double>(copies[i]) / total;
  return out;
}

std::vector<std::size_t> scale_columns(RealMatrix& cells, std::span<const double> target) {
  if (target.size() != cells.cols()) throw ContractError("column target length does not match the table");
  const auto current = column_sums(cells);
  std::vector<std::size_t> empty;
  for (std::size_t j = 0; j < cells.cols(); ++j) {
    if (current[j] <= 0.0) {
      empty.push_back(j);
      for (std::size_t i = 0; i < cells.rows(); ++i) cells(i, j) = 0.0;
      continue;
    }
    const double factor = target[j] / current[j];
    for (std::size_t i = 0; i < cells.rows(); ++i) cells(i, j) *= factor;
  }
  return empty;
}

std::vector<std::size_t> scale_rows(RealMatrix& cells, std::span<const double> target) {
  if (target.size() != cells.rows()) throw ContractError("row target length does not match the table");
  const auto current = row_sums(cells);
  std::vector<std::size_t> empty;
  for (std::size_t i = 0; i < cells.rows(); ++i) {
    if (current[i] <= 0.0) {
      empty.push_back(i);
      continue;
    }
    const double factor = target[i] / current[i];
    for (std::size_t j = 0; j < cells.cols(); ++j) cells(i, j) *= factor;
  }
  return empty;
}

AdjustedTable adjust_to_known_marginal(const JointDistribution& phat, const MarginalDistribution& col) {
  if (col.size() != phat.cols()) throw ContractError("known marginal length does not match the number of columns");
  col.require_strictly_positive("known column marginal");
  RealMatrix cells = phat.cells();
  auto mask = scale_columns(cells, col.probs());
  return AdjustedTable{std::move(cells), col, std::move(mask)};
}

std::vector<double> adjusted_row_marginal(const AdjustedTable& t) { return row_sums(t.cells); }

namespace {

double max_marginal_deviation(const RealMatrix& cells, std::span<const double> row_target,
                              std::span<const double> col_target) {
  double dev = 0.0;
  const auto rs = row_sums(cells);
  const auto cs = column_sums(cells);
  for (std::size_t i = 0; i < rs.size(); ++i) dev = std::max(dev, std::abs(rs[i] - row_target[i]));
  for (std::size_t j = 0; j < cs.size(); ++j) dev = std::max(dev, std::abs(cs[j] - col_target[j]));
  return dev;
}

}  // namespace

IpfResult ipf_fit(const JointDistribution& init, const MarginalDistribution& row_target,
                  const MarginalDistribution& col_target, IpfOptions options) {
  if (row_target.size() != init.rows() || col_target.size() != init.cols()) {
    throw ContractError("ipf: target lengths do not match the table");
  }
  row_target.require_strictly_positive("ipf row target");
  col_target.require_strictly_positive("ipf column target");
  if (!(options.tol > 0.0) || options.max_iter < 0) throw ContractError("ipf: tol must be > 0 and max_iter >= 0");

  const auto rs = row_sums(init.cells());
  const auto cs = column_sums(init.cells());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] <= 0.0) throw ContractError("ipf: row " + std::to_string(i + 1) + " has positive target but no initial mass");
  }
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (cs[j] <= 0.0) {
      throw ContractError("ipf: column " + std::to_string(j + 1) + " has positive target but no initial mass");
    }
  }

  RealMatrix cells = init.cells();
  double dev = max_marginal_deviation(cells, row_target.probs(), col_target.probs());
  int iter = 0;
  while (dev >= options.tol && iter < options.max_iter) {
    scale_columns(cells, col_target.probs());
    scale_rows(cells, row_target.probs());
    ++iter;
    dev = max_marginal_deviation(cells, row_target.probs(), col_target.probs());
  }
  return IpfResult{JointDistribution(std::move(cells)), iter, dev < options.tol, dev};
}

}  // namespace margadj
