#include "table_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "random.hpp"

namespace margadj {
namespace {

void check_probabilities(std::span<const double> xs, const char* what) {
  double sum = 0.0;
  for (double x : xs) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ContractError(std::string(what) + ": entries must be finite and nonnegative");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ContractError(std::string(what) + ": entries sum to " + std::to_string(sum) + ", not 1");
  }
}

}  // namespace

MarginalDistribution::MarginalDistribution(Axis axis, std::vector<double> probs)
    : axis_(axis), probs_(std::move(probs)) {
  if (probs_.empty()) throw ContractError("marginal distribution: empty");
  check_probabilities(probs_, "marginal distribution");
}

bool MarginalDistribution::strictly_positive() const noexcept {
  return std::all_of(probs_.begin(), probs_.end(), [](double x) { return x > 0.0; });
}

void MarginalDistribution::require_strictly_positive(const char* what) const {
  if (!strictly_positive()) {
    throw ContractError(std::string(what) + ": every entry must be strictly positive");
  }
}

JointDistribution::JointDistribution(RealMatrix cells) : cells_(std::move(cells)) {
  if (cells_.rows() == 0 || cells_.cols() == 0) {
    throw ContractError("joint distribution: dimensions must be at least 1 x 1");
  }
  check_probabilities(cells_.values(), "joint distribution");
}

JointDistribution::JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> cells)
    : JointDistribution([&] {
        if (cells.size() != rows * cols) throw ContractError("joint distribution: cell count mismatch");
        return RealMatrix(rows, cols, std::move(cells));
      }()) {}

CountTable::CountTable(Matrix<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.rows() == 0 || counts_.cols() == 0) {
    throw ContractError("count table: dimensions must be at least 1 x 1");
  }
  for (std::int64_t c : counts_.values()) {
    if (c < 0) throw ContractError("count table: negative count");
    if (total_ > std::numeric_limits<std::int64_t>::max() - c) {
      throw ContractError("count table: total overflows 64 bits");
    }
    total_ += c;
  }
}

CountTable::CountTable(std::size_t rows, std::size_t cols, std::vector<std::int64_t> counts)
    : CountTable([&] {
        if (counts.size() != rows * cols) throw ContractError("count table: cell count mismatch");
        return Matrix<std::int64_t>(rows, cols, std::move(counts));
      }()) {}

SampleBatch::SampleBatch(std::size_t rows, std::size_t cols,
                         std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs)
    : rows_(rows), cols_(cols), pairs_(std::move(pairs)) {
  if (rows_ == 0 || cols_ == 0) throw ContractError("sample batch: dimensions must be at least 1 x 1");
  for (const auto& [x, y] : pairs_) {
    if (x >= rows_ || y >= cols_) throw ContractError("sample batch: category out of range");
  }
}

CountTable SampleBatch::tabulate() const {
  Matrix<std::int64_t> counts(rows_, cols_, 0);
  for (const auto& [x, y] : pairs_) ++counts(x, y);
  return CountTable(std::move(counts));
}

std::vector<double> row_sums(const RealMatrix& cells) {
  std::vector<double> out(cells.rows(), 0.0);
  for (std::size_t i = 0; i < cells.rows(); ++i) {
    for (std::size_t j = 0; j < cells.cols(); ++j) out[i] += cells(i, j);
  }
  return out;
}

std::vector<double> column_sums(const RealMatrix& cells) {
  std::vector<double> out(cells.cols(), 0.0);
  for (std::size_t i = 0; i < cells.rows(); ++i) {
    for (std::size_t j = 0; j < cells.cols(); ++j) out[j] += cells(i, j);
  }
  return out;
}

MarginalDistribution row_marginal(const JointDistribution& p) {
  return MarginalDistribution(Axis::Row, row_sums(p.cells()));
}

MarginalDistribution column_marginal(const JointDistribution& p) {
  return MarginalDistribution(Axis::Column, column_sums(p.cells()));
}

JointDistribution empirical_joint(const CountTable& counts) {
  if (counts.total() == 0) throw ContractError("no observations");
  const auto n = static_cast<double>(counts.total());
  RealMatrix cells(counts.rows(), counts.cols());
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    for (std::size_t j = 0; j < counts.cols(); ++j) cells(i, j) = static_cast<double>(counts(i, j)) / n;
  }
  return JointDistribution(std::move(cells));
}

CountTable sample(const JointDistribution& p, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw ContractError("sample: sample size must be at least 1");
  rng::Xoshiro256 gen(seed);
  Matrix<std::int64_t> counts(p.rows(), p.cols(), 0);
  rng::multinomial(gen, n, p.cells().values(), counts.values());
  return CountTable(std::move(counts));
}

SampleBatch sample_pairs(const JointDistribution& p, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ContractError("sample: sample size must be at least 1");
  rng::Xoshiro256 gen(seed);
  const auto cum = rng::cumulative(p.cells().values());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs(n);
  for (auto& pr : pairs) {
    const std::size_t cell = rng::categorical(gen, cum);
    pr = {static_cast<std::uint32_t>(cell / p.cols()), static_cast<std::uint32_t>(cell % p.cols())};
  }
  return SampleBatch(p.rows(), p.cols(), std::move(pairs));
}

std::vector<CrossProductRatio> cross_product_ratios(const RealMatrix& cells) {
  std::vector<CrossProductRatio> out;
  for (std::size_t i = 0; i < cells.rows(); ++i) {
    for (std::size_t r = i + 1; r < cells.rows(); ++r) {
      for (std::size_t j = 0; j < cells.cols(); ++j) {
        for (std::size_t s = j + 1; s < cells.cols(); ++s) {
          const double a = cells(i, j), d = cells(r, s), b = cells(r, j), c = cells(i, s);
          const bool defined = a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0;
          out.push_back({i, r, j, s, defined ? (a * d) / (b * c) : std::numeric_limits<double>::quiet_NaN(),
                         defined});
        }
      }
    }
  }
  return out;
}

std::vector<CrossProductRatio> cross_product_ratios(const JointDistribution& p) {
  return cross_product_ratios(p.cells());
}

JointDistribution independent_table(const MarginalDistribution& row, const MarginalDistribution& col) {
  RealMatrix cells(row.size(), col.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    for (std::size_t j = 0; j < col.size(); ++j) cells(i, j) = row[i] * col[j];
  }
  return JointDistribution(std::move(cells));
}

JointDistribution build_2x2_from_marginals_cpr(const MarginalDistribution& row,
                                               const MarginalDistribution& col, double cpr) {
  if (row.size() != 2 || col.size() != 2) throw ContractError("build_2x2: marginals must have two entries");
  if (!std::isfinite(cpr) || cpr <= 0.0) throw ContractError("build_2x2: cross-product ratio must be finite and > 0");
  const double a = row[0];
  const double b = col[0];
  if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) throw ContractError("build_2x2: degenerate marginal");

  const auto table_for = [&](double x) {
    return std::vector<double>{x, a - x, b - x, 1.0 - a - b + x};
  };

  if (cpr == 1.0) return independent_table(row, col);

  const double lo = std::max(0.0, a + b - 1.0);
  const double hi = std::min(a, b);
  const double qa = 1.0 - cpr;
  const double qb = 1.0 - a - b + cpr * (a + b);
  const double qc = -cpr * a * b;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (!(disc >= 0.0)) throw ContractError("build_2x2: no real solution for the requested cross-product ratio");

  // cancellation-free pair of roots
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  std::vector<double> roots;
  if (q != 0.0) roots.push_back(qc / q);
  if (qa != 0.0) roots.push_back(q / qa);

  double best = std::numeric_limits<double>::quiet_NaN();
  double best_err = std::numeric_limits<double>::infinity();
  for (double x : roots) {
    if (!(x >= lo && x <= hi)) continue;
    const auto c = table_for(x);
    const double got = (c[0] * c[3]) / (c[1] * c[2]);
    const double err = std::isfinite(got) ? std::abs(std::log(got) - std::log(cpr)) : std::numeric_limits<double>::infinity();
    if (std::isnan(best) || err < best_err) {
      best = x;
      best_err = err;
    }
  }
  if (std::isnan(best)) throw ContractError("build_2x2: no root inside the Frechet interval");

  auto cells = table_for(best);
  for (double& c : cells) {
    if (c < 0.0) throw ContractError("build_2x2: infeasible cross-product ratio for these marginals");
  }
  return JointDistribution(2, 2, std::move(cells));
}

}  // namespace margadj
