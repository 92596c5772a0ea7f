#include "random.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace margadj::rng {
namespace {

// log(k!) - [(k + 1/2) log(k + 1) - (k + 1) + log(sqrt(2 pi))]
double stirling_tail(std::int64_t k) {
  static constexpr double kTable[10] = {
      0.08106146679532726, 0.04134069595540929, 0.02767792568499834, 0.02079067210376509,
      0.01664469118982119, 0.01387612882307075, 0.01189670994589177, 0.01041126526197209,
      0.009255462182712733, 0.008330563433362871};
  if (k < 10) return kTable[k];
  const double r = 1.0 / static_cast<double>(k + 1);
  const double r2 = r * r;
  return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 * r2) * r2) * r;
}

std::int64_t binomial_inversion(Xoshiro256& gen, std::int64_t n, double p) {
  const double q = 1.0 - p;
  const double s = p / q;
  const double a = static_cast<double>(n + 1) * s;
  double r = std::pow(q, static_cast<double>(n));
  double u = gen.uniform();
  std::int64_t x = 0;
  while (u > r) {
    u -= r;
    ++x;
    const double r1 = (a / static_cast<double>(x) - s) * r;
    // the tail is geometrically small here; stop once terms are below rounding
    if (r1 < std::numeric_limits<double>::epsilon() && r1 < r) break;
    r = r1;
  }
  return std::min(x, n);
}

std::int64_t binomial_btrd(Xoshiro256& gen, std::int64_t n, double p) {
  const double dn = static_cast<double>(n);
  const auto m = static_cast<std::int64_t>(std::floor((dn + 1.0) * p));
  const double r = p / (1.0 - p);
  const double nr = (dn + 1.0) * r;
  const double npq = dn * p * (1.0 - p);
  const double sqrt_npq = std::sqrt(npq);
  const double b = 1.15 + 2.53 * sqrt_npq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = dn * p + 0.5;
  const double alpha = (2.83 + 5.1 / b) * sqrt_npq;
  const double v_r = 0.92 - 4.2 / b;
  const double u_rv_r = 0.86 * v_r;

  for (;;) {
    double v = gen.uniform();
    double u;
    if (v <= u_rv_r) {
      u = v / v_r - 0.43;
      return static_cast<std::int64_t>(std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + c));
    }
    if (v >= v_r) {
      u = gen.uniform() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = (u < 0 ? -0.5 : 0.5) - u;
      v = gen.uniform() * v_r;
    }

    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + c);
    if (kf < 0.0 || kf > dn) continue;
    const auto k = static_cast<std::int64_t>(kf);
    v = v * alpha / (a / (us * us) + b);
    const auto km = static_cast<double>(k > m ? k - m : m - k);

    if (km <= 15.0) {
      // recursive evaluation of f(k) / f(m)
      double f = 1.0;
      if (m < k) {
        for (std::int64_t i = m + 1; i <= k; ++i) f *= nr / static_cast<double>(i) - r;
      } else if (m > k) {
        for (std::int64_t i = k + 1; i <= m; ++i) v *= nr / static_cast<double>(i) - r;
      }
      if (v <= f) return k;
      continue;
    }

    // squeeze, then exact acceptance via Stirling corrections
    v = std::log(v);
    const double rho = (km / npq) * (((km / 3.0 + 0.625) * km + 1.0 / 6.0) / npq + 0.5);
    const double t = -km * km / (2.0 * npq);
    if (v < t - rho) return k;
    if (v > t + rho) continue;

    const auto nm = static_cast<double>(n - m + 1);
    const double h = (static_cast<double>(m) + 0.5) * std::log((static_cast<double>(m) + 1.0) / (r * nm)) +
                     stirling_tail(m) + stirling_tail(n - m);
    const auto nk = static_cast<double>(n - k + 1);
    const double bound = h + (dn + 1.0) * std::log(nm / nk) +
                         (static_cast<double>(k) + 0.5) * std::log(nk * r / (static_cast<double>(k) + 1.0)) -
                         stirling_tail(k) - stirling_tail(n - k);
    if (v <= bound) return k;
  }
}

}  // namespace

std::int64_t binomial(Xoshiro256& gen, std::int64_t trials, double p) {
  if (trials < 0 || !(p >= 0.0 && p <= 1.0)) {
    throw ContractError("binomial: trials must be >= 0 and p in [0, 1]");
  }
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  if (p > 0.5) return trials - binomial(gen, trials, 1.0 - p);
  const double mode = std::floor((static_cast<double>(trials) + 1.0) * p);
  return mode < 11.0 ? binomial_inversion(gen, trials, p) : binomial_btrd(gen, trials, p);
}

void multinomial(Xoshiro256& gen, std::int64_t total, std::span<const double> probs,
                 std::span<std::int64_t> out) {
  if (probs.size() != out.size() || probs.empty()) {
    throw ContractError("multinomial: probability and output sizes differ");
  }
  // tail[k] = sum of probs[k..]; conditional success probability is probs[k] / tail[k]
  std::vector<double> tail(probs.size() + 1, 0.0);
  for (std::size_t k = probs.size(); k-- > 0;) tail[k] = tail[k + 1] + probs[k];

  std::int64_t remaining = total;
  for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
    if (remaining == 0 || probs[k] <= 0.0 || tail[k] <= 0.0) {
      out[k] = 0;
      continue;
    }
    const double cond = std::min(1.0, probs[k] / tail[k]);
    out[k] = binomial(gen, remaining, cond);
    remaining -= out[k];
  }
  out.back() = remaining;
}

std::vector<double> cumulative(std::span<const double> probs) {
  std::vector<double> cum(probs.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    cum[k] = acc;
  }
  return cum;
}

std::size_t categorical(Xoshiro256& gen, std::span<const double> cum) {
  const double u = gen.uniform() * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
}

}  // namespace margadj::rng
