#include "summation.hpp"

#include <vector>

namespace margadj {

MeanVariance mean_variance(std::span<const double> xs) {
  MeanVariance out;
  out.count = xs.size();
  if (xs.empty()) return out;
  out.mean = pairwise_sum(xs) / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  std::vector<double> sq(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double d = xs[k] - out.mean;
    sq[k] = d * d;
  }
  out.variance = pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
  return out;
}

}  // namespace margadj
