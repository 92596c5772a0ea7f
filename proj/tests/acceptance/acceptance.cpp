// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "estimators.hpp"
#include "io.hpp"
#include "random.hpp"
#include "simulation.hpp"
#include "summation.hpp"
#include "support/random_tables.hpp"

namespace {

using namespace margadj;

const std::string kData = MARGADJ_DATA_DIR;

// Tolerances and budgets.
constexpr double kOracleTol = 1e-12;
constexpr double kEigenFloor = -1e-10;
constexpr double kIndependentTol = 1e-12;
constexpr double kDependentFloor = 1e-6;
constexpr double kGapTol = 1e-12;
constexpr double kCltRelTol = 0.05;
constexpr double kReductionTol = 2.0;
constexpr double kSmallSampleCeiling = 0.5;
constexpr double kWeightedRelTol = 0.05;
constexpr double kBudget1 = 1.0;
constexpr double kBudget2 = 2.0;
constexpr double kBudget4 = 30.0;
constexpr double kBudget5 = 300.0;
constexpr double kBudget6 = 0.1;
constexpr double kBudget8 = 10.0;

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<JointDistribution> random_tables(std::uint64_t seed, int count) {
  std::mt19937_64 gen(seed);
  std::vector<JointDistribution> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const auto [r, c] = testing::random_dims(gen, 1, 6);
    out.push_back(testing::random_table(gen, r, c));
  }
  return out;
}

Verdict oracle_equivalence() {
  const auto tables = random_tables(1001, 1000);
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& p : tables) worst = std::max(worst, (gamma_adjusted(p) - conditional_cov_oracle(p)).max_abs_entry());
  const double secs = seconds_since(t0);
  return {worst < kOracleTol && secs < kBudget1,
          fmt("1000 tables, max |Gamma - oracle| = %.3g (< %.0e), %.3f s (< %.0f s)", worst, kOracleTol, secs, kBudget1)};
}

Verdict psd_ordering() {
  const auto tables = random_tables(1001, 1000);
  const auto t0 = std::chrono::steady_clock::now();
  double min_eig = INFINITY;
  for (const auto& p : tables) min_eig = std::min(min_eig, (sigma_marginal(p) - gamma_adjusted(p)).min_eigenvalue());

  std::mt19937_64 gen(2002);
  double worst_independent = 0.0;
  double weakest_dependent = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const auto [r, c] = testing::random_dims(gen, 2, 6);
    const auto ind = testing::random_independent_table(gen, r, c);
    worst_independent = std::max(worst_independent, (sigma_marginal(ind) - gamma_adjusted(ind)).max_abs_entry());
    const auto dep = testing::random_table(gen, r, c);
    weakest_dependent = std::min(weakest_dependent, (sigma_marginal(dep) - gamma_adjusted(dep)).max_abs_entry());
  }
  const double secs = seconds_since(t0);
  const bool pass = min_eig >= kEigenFloor && worst_independent < kIndependentTol &&
                    weakest_dependent > kDependentFloor && secs < kBudget2;
  return {pass, fmt("min eigenvalue %.3g, independent max entry %.3g, dependent min of max entry %.3g, %.3f s",
                    min_eig, worst_independent, weakest_dependent, secs)};
}

Verdict quadratic_identity() {
  std::mt19937_64 gen(3003);
  std::normal_distribution<double> z;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto [r, c] = testing::random_dims(gen, 1, 6);
    const auto p = testing::random_table(gen, r, c);
    std::vector<double> coef(r);
    for (double& x : coef) x = z(gen);
    const auto g = variance_gap_quadratic(p, coef);
    worst = std::max(worst, std::abs(g.gap - g.direct));
  }
  return {worst < kGapTol, fmt("1000 (table, c) pairs, max |gap - direct| = %.3g (< %.0e)", worst, kGapTol)};
}

Verdict monte_carlo_clt() {
  const auto t0 = std::chrono::steady_clock::now();
  const MarginalDistribution half_row(Axis::Row, {0.5, 0.5});
  const MarginalDistribution half_col(Axis::Column, {0.5, 0.5});
  const auto p = build_2x2_from_marginals_cpr(half_row, half_col, 9.0);
  const std::int64_t n = 10000;
  const int reps = 20000;
  std::vector<double> hat(reps), tilde(reps);
  for (int r = 0; r < reps; ++r) {
    const auto phat = empirical_joint(sample(p, n, rng::stream_key(4004, 0, static_cast<std::uint64_t>(r))));
    hat[r] = std::sqrt(static_cast<double>(n)) * (row_sums(phat.cells())[0] - 0.5);
    tilde[r] = std::sqrt(static_cast<double>(n)) *
               (adjusted_row_marginal(adjust_to_known_marginal(phat, half_col))[0] - 0.5);
  }
  const double vh = mean_variance(hat).variance;
  const double vt = mean_variance(tilde).variance;
  const double secs = seconds_since(t0);
  const double eh = std::abs(vh / 0.25 - 1.0);
  const double et = std::abs(vt / 0.1875 - 1.0);
  return {eh < kCltRelTol && et < kCltRelTol && secs < kBudget4,
          fmt("Var adjusted %.5f vs 0.1875 (%.2f%%), Var unadjusted %.5f vs 0.25 (%.2f%%)", vt, 100 * et, vh,
              100 * eh) +
              fmt(", %.2f s", secs)};
}

Verdict reduction_grid() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ExperimentGrid> grids;
  for (const char* name : {"caseI", "caseII", "caseIII"}) {
    const auto cfg = io::parse_experiment_config_json(io::read_text_file(kData + "/" + name + ".json"));
    grids.push_back(run_experiment(cfg));
  }
  const double grid_secs = seconds_since(t0);

  const auto& case1 = grids[0];
  const auto ratio9 = run_cell(case1.config, case1.cells.size(), 10000, std::log(9.0));

  double worst_independent = 0.0;
  double small_sample_max = -INFINITY;
  bool all_ok = ratio9.ok();
  for (const auto& g : grids) {
    for (const auto& cell : g.cells) {
      all_ok = all_ok && cell.ok();
      if (cell.log_cpr != 0.0) continue;
      if (cell.n >= 100) worst_independent = std::max(worst_independent, std::abs(cell.reduction_pct));
      if (cell.n == 20) small_sample_max = std::max(small_sample_max, cell.reduction_pct);
    }
  }
  const bool pass = all_ok && std::abs(ratio9.reduction_pct - 25.0) <= kReductionTol &&
                    worst_independent <= kReductionTol && small_sample_max <= kSmallSampleCeiling &&
                    grid_secs < kBudget5;
  return {pass, fmt("cpr=9 n=10000 reduction %.3f%% (25 +/- 2), log cpr=0 n>=100 max |reduction| %.3f, "
                    "n=20 max %.3f (<= 0.5), grid %.1f s",
                    ratio9.reduction_pct, worst_independent, small_sample_max, grid_secs)};
}

Verdict case_study() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto counts = io::parse_count_table(kData + "/gidas_table3.csv");
  const auto known =
      io::parse_marginal(kData + "/destatis2014.csv", Axis::Column, io::MarginalRole::KnownColumn).marginal;
  const auto r = run_case_study(counts, known);
  const double secs = seconds_since(t0);
  const double published[] = {11.4, 32.4, 28.7, 15.2, 6.9, 3.0, 1.4, 0.9};
  int matched = 0;
  int signs = 0;
  for (std::size_t i = 0; i < r.rows.size() && i < 8; ++i) {
    if (std::abs(std::round(r.rows[i].phat * 1000) / 10 - published[i]) < 1e-9) ++matched;
    const bool positive = r.rows[i].relative_difference_pct > 0.0;
    if (positive == (i < 3)) ++signs;
  }
  return {r.rows.size() == 8 && matched == 8 && signs == 8 && secs < kBudget6,
          fmt("%.0f/8 unadjusted percentages match, %.0f/8 signs match, %.4f s", matched, signs, secs)};
}

Verdict weighting_penalty() {
  std::mt19937_64 gen(7007);
  std::uniform_int_distribution<std::size_t> len(2, 500);
  int violations = 0;
  double tightest = INFINITY;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = len(gen);
    const double f = effective_sample_factor(WeightVector(testing::random_simplex(gen, n)));
    if (!(f > 1.0 / n)) ++violations;
    tightest = std::min(tightest, f * n - 1.0);
    if (std::abs(effective_sample_factor(WeightVector::uniform(n)) * n - 1.0) > 1e-12) ++violations;
  }

  // weights proportional to 1..5 repeated, categories drawn from p
  const std::vector<double> p = {0.2, 0.3, 0.5};
  const std::size_t n = 10000;
  const int reps = 20000;
  std::vector<double> w(n);
  double wsum = 0.0;
  for (std::size_t t = 0; t < n; ++t) wsum += (w[t] = 1.0 + static_cast<double>(t % 5));
  for (double& x : w) x /= wsum;
  const WeightVector weights(w);
  const double factor = effective_sample_factor(weights);
  const auto cum = rng::cumulative(p);
  std::vector<std::vector<double>> est(p.size(), std::vector<double>(reps));
  std::vector<std::uint32_t> xs(n);
  for (int r = 0; r < reps; ++r) {
    rng::Xoshiro256 g(rng::stream_key(7007, 1, static_cast<std::uint64_t>(r)));
    for (auto& x : xs) x = static_cast<std::uint32_t>(rng::categorical(g, cum));
    const auto pt = weighted_univariate(xs, weights, p.size());
    for (std::size_t i = 0; i < p.size(); ++i) est[i][r] = pt[i];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ratio = mean_variance(est[i]).variance / factor;
    worst = std::max(worst, std::abs(ratio / (p[i] * (1 - p[i])) - 1.0));
  }
  return {violations == 0 && worst < kWeightedRelTol,
          fmt("%.0f bound violations, min (n sum w^2 - 1) = %.3g, max rel. error of Var/sum w^2 vs Sigma_ii %.2f%%",
              violations, tightest, 100 * worst)};
}

Verdict structural_properties() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(8008);
  double worst_ratio = 0.0, worst_calibration = 0.0;
  int ipf_mismatch = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto [r, c] = testing::random_dims(gen, 2, 6);
    const auto p = testing::random_table(gen, r, c);
    const auto target = testing::random_simplex(gen, c, 0.01);
    const auto adj = adjust_to_known_marginal(p, MarginalDistribution(Axis::Column, target));
    const auto before = cross_product_ratios(p);
    const auto after = cross_product_ratios(adj.cells);
    for (std::size_t q = 0; q < before.size(); ++q) {
      worst_ratio = std::max(worst_ratio, std::abs(after[q].value / before[q].value - 1.0));
    }
    const auto cs = column_sums(adj.cells);
    for (std::size_t j = 0; j < c; ++j) worst_calibration = std::max(worst_calibration, std::abs(cs[j] - target[j]));
    RealMatrix step = p.cells();
    scale_columns(step, target);
    if (!(step == adj.cells)) ++ipf_mismatch;
  }

  ExperimentConfig cfg;
  cfg.row_first = 0.2;
  cfg.col_first = 0.7;
  cfg.n_grid = {20, 1000};
  cfg.log_cpr_grid = {-3.0, 0.0, 2.0};
  cfg.replications = 4000;
  cfg.seed = 88;
  const auto serial = run_experiment(cfg, {1});
  const bool deterministic = run_experiment(cfg, {4}) == serial && run_experiment(cfg, {3}) == serial;
  const double secs = seconds_since(t0);
  const bool pass = worst_ratio < 1e-12 && worst_calibration < 1e-14 && ipf_mismatch == 0 && deterministic &&
                    secs < kBudget8;
  return {pass, fmt("cpr drift %.3g, calibration error %.3g, IPF mismatches %.0f, ", worst_ratio, worst_calibration,
                    ipf_mismatch) +
                    std::string(deterministic ? "parallel == serial" : "parallel != serial") + fmt(", %.2f s", secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"PSD ordering", psd_ordering},
      {"quadratic-form identity", quadratic_identity},
      {"Monte Carlo CLT", monte_carlo_clt},
      {"variance-reduction grid", reduction_grid},
      {"case study", case_study},
      {"weighting penalty", weighting_penalty},
      {"structural properties", structural_properties},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v{false, ""};
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
