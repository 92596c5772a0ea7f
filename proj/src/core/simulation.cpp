#include "simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "asymptotics.hpp"
#include "error.hpp"
#include "estimators.hpp"
#include "random.hpp"
#include "summation.hpp"

namespace margadj {

std::vector<double> ExperimentConfig::default_log_cpr_grid() {
  constexpr int kPoints = 25;
  std::vector<double> grid(kPoints);
  for (int k = 0; k < kPoints; ++k) grid[k] = -5.0 + 10.0 * k / (kPoints - 1);
  return grid;
}

void ExperimentConfig::validate() const {
  if (log_cpr_grid.empty() || n_grid.empty()) throw ContractError("experiment: grids must be non-empty");
  if (replications < 2) throw ContractError("experiment: at least 2 replications are required");
  for (auto n : n_grid) {
    if (n < 1) throw ContractError("experiment: sample sizes must be >= 1");
  }
  for (double x : log_cpr_grid) {
    if (std::isnan(x)) throw ContractError("experiment: log cross-product ratio is NaN");
  }
  if (!(row_first > 0.0 && row_first < 1.0 && col_first > 0.0 && col_first < 1.0)) {
    throw ContractError("experiment: marginals must lie strictly between 0 and 1");
  }
}

double asymptotic_reduction(const JointDistribution& p, std::size_t i) {
  if (i >= p.rows()) throw ContractError("asymptotic reduction: row index out of range");
  const auto sigma = sigma_marginal(p);
  if (!(sigma(i, i) > 0.0)) throw ContractError("asymptotic reduction: degenerate row marginal (Sigma_ii = 0)");
  const auto gamma = gamma_adjusted(p);
  return (sigma(i, i) - gamma(i, i)) / sigma(i, i);
}

namespace {

struct ReplicationBuffers {
  std::vector<double> phat;
  std::vector<double> ptilde;
  std::vector<unsigned char> zero_column;
};

// Fills replications [begin, end) of one cell.
void simulate_block(const JointDistribution& p, const MarginalDistribution& col, std::int64_t n,
                    std::uint64_t seed, std::size_t cell_index, std::size_t begin, std::size_t end,
                    ReplicationBuffers& out) {
  for (std::size_t r = begin; r < end; ++r) {
    const CountTable counts = sample(p, n, rng::stream_key(seed, cell_index, r));
    const JointDistribution phat = empirical_joint(counts);
    const AdjustedTable adjusted = adjust_to_known_marginal(phat, col);
    out.phat[r] = row_sums(phat.cells())[0];
    out.ptilde[r] = adjusted_row_marginal(adjusted)[0];
    out.zero_column[r] = adjusted.zero_column_mask.empty() ? 0 : 1;
  }
}

void parallel_blocks(std::size_t total, std::size_t block, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t blocks = (total + block - 1) / block;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) body(b * block, std::min(total, (b + 1) * block));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++) {
          try {
            body(b * block, std::min(total, (b + 1) * block));
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

ExperimentCell run_cell(const ExperimentConfig& config, std::size_t cell_index, std::int64_t n, double log_cpr,
                        RunOptions options) {
  ExperimentCell cell;
  cell.n = n;
  cell.log_cpr = log_cpr;
  try {
    const MarginalDistribution row(Axis::Row, {config.row_first, 1.0 - config.row_first});
    const MarginalDistribution col(Axis::Column, {config.col_first, 1.0 - config.col_first});
    const JointDistribution p = build_2x2_from_marginals_cpr(row, col, std::exp(log_cpr));
    cell.asymptotic_reduction_pct = 100.0 * asymptotic_reduction(p, 0);

    const auto reps = static_cast<std::size_t>(config.replications);
    ReplicationBuffers buf{std::vector<double>(reps), std::vector<double>(reps), std::vector<unsigned char>(reps)};
    parallel_blocks(reps, 1024, options.threads, [&](std::size_t begin, std::size_t end) {
      simulate_block(p, col, n, config.seed, cell_index, begin, end, buf);
    });

    // aggregate serially in replication order
    std::vector<double> hat, tilde;
    hat.reserve(reps);
    tilde.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      if (buf.zero_column[r]) {
        ++cell.zero_column_events;
        continue;
      }
      hat.push_back(buf.phat[r]);
      tilde.push_back(buf.ptilde[r]);
    }
    if (hat.size() < 2) throw ContractError("fewer than 2 replications without an empty column");
    const MeanVariance mh = mean_variance(hat);
    const MeanVariance mt = mean_variance(tilde);
    if (!(mh.variance > 0.0)) throw ContractError("unadjusted estimator has zero empirical variance");
    cell.reduction_pct = 100.0 * (1.0 - mt.variance / mh.variance);
    cell.bias_hat = mh.mean - config.row_first;
    cell.bias_tilde = mt.mean - config.row_first;
  } catch (const ContractError& e) {
    cell.error = e.what();
  }
  return cell;
}

ExperimentGrid run_experiment(const ExperimentConfig& config, RunOptions options) {
  config.validate();
  ExperimentGrid grid{config, {}};
  grid.cells.reserve(config.n_grid.size() * config.log_cpr_grid.size());
  std::size_t index = 0;
  for (auto n : config.n_grid) {
    for (double lc : config.log_cpr_grid) grid.cells.push_back(run_cell(config, index++, n, lc, options));
  }
  return grid;
}

CaseStudyResult run_case_study(const CountTable& counts, const MarginalDistribution& known_col) {
  const JointDistribution phat = empirical_joint(counts);
  const AdjustedTable adjusted = adjust_to_known_marginal(phat, known_col);
  const auto hat = row_sums(phat.cells());
  const auto tilde = adjusted_row_marginal(adjusted);
  CaseStudyResult out;
  out.zero_column_mask = adjusted.zero_column_mask;
  out.rows.reserve(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const double rel = hat[i] > 0.0 ? 100.0 * (tilde[i] / hat[i] - 1.0) : std::numeric_limits<double>::quiet_NaN();
    out.rows.push_back({hat[i], tilde[i], rel});
  }
  return out;
}

}  // namespace margadj
