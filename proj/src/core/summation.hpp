#pragma once

#include <cstddef>
#include <span>

namespace margadj {

/// Pairwise (cascade) summation. The result depends only on the sequence,
/// never on how it was produced, so reductions over per-replication buffers
/// are reproducible across thread counts.
inline double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 32;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  // unbiased (n - 1 denominator)
  std::size_t count = 0;
};

/// Two-pass mean and unbiased sample variance.
MeanVariance mean_variance(std::span<const double> xs);

}  // namespace margadj
