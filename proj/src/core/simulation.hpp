#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "table_core.hpp"

namespace margadj {

/// Monte Carlo comparison of the unadjusted and adjusted estimators of p_1.
/// on 2 x 2 tables with fixed marginals and a grid of cross-product ratios.
struct ExperimentConfig {
  std::string name;
  double row_first = 0.5;  // p_1.; the row marginal is (a, 1 - a)
  double col_first = 0.5;  // p_.1; the known column marginal is (b, 1 - b)
  std::vector<double> log_cpr_grid = default_log_cpr_grid();
  std::vector<std::int64_t> n_grid = {20, 100, 1000, 10000};
  std::int64_t replications = 20000;
  std::uint64_t seed = 0;

  /// 25 equispaced points on [-5, 5].
  static std::vector<double> default_log_cpr_grid();

  /// Throws ContractError on empty grids, replications < 2, n < 1 or a
  /// degenerate marginal.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct ExperimentCell {
  std::int64_t n = 0;
  double log_cpr = 0.0;
  double reduction_pct = 0.0;             // 100 (1 - Var(p~_1.) / Var(p^_1.)) over included replications
  double asymptotic_reduction_pct = 0.0;  // 100 (Sigma_11 - Gamma_11) / Sigma_11
  double bias_hat = 0.0;                  // mean(p^_1.) - p_1.
  double bias_tilde = 0.0;                // mean(p~_1.) - p_1.
  std::int64_t zero_column_events = 0;    // replications dropped for an empty column
  std::string error;                      // non-empty when the cell could not be computed

  bool ok() const noexcept { return error.empty(); }
  bool operator==(const ExperimentCell&) const = default;
};

/// Cells ordered n-major: cells[n_index * log_cpr_grid.size() + cpr_index].
struct ExperimentGrid {
  ExperimentConfig config;
  std::vector<ExperimentCell> cells;

  bool operator==(const ExperimentGrid&) const = default;
};

struct RunOptions {
  /// Worker threads; 0 selects std::thread::hardware_concurrency(). Results
  /// do not depend on this value.
  unsigned threads = 0;
};

/// Runs the grid. Replication r of cell c draws from the stream
/// rng::stream_key(config.seed, c, r), so output is a pure function of the config.
/// Infeasible cells carry an error string; the run continues.
ExperimentGrid run_experiment(const ExperimentConfig& config, RunOptions options = {});

/// Simulates one cell. Exposed for tests; run_experiment calls this per cell.
ExperimentCell run_cell(const ExperimentConfig& config, std::size_t cell_index, std::int64_t n, double log_cpr,
                        RunOptions options = {});

/// (Sigma_ii - Gamma_ii) / Sigma_ii for 0-based row i. Throws ContractError
/// when Sigma_ii = 0 or a marginal is zero.
double asymptotic_reduction(const JointDistribution& p, std::size_t i);

struct CaseStudyRow {
  double phat = 0.0;
  double ptilde = 0.0;
  double relative_difference_pct = 0.0;  // 100 (ptilde / phat - 1)

  bool operator==(const CaseStudyRow&) const = default;
};

struct CaseStudyResult {
  std::vector<CaseStudyRow> rows;
  std::vector<std::size_t> zero_column_mask;

  bool operator==(const CaseStudyResult&) const = default;
};

/// Row marginal of the sample with and without reweighting to a known column marginal.
CaseStudyResult run_case_study(const CountTable& counts, const MarginalDistribution& known_col);

}  // namespace margadj
