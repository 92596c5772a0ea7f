#include "margadj/margadj.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <limits>
#include <string>

#include "asymptotics.hpp"
#include "error.hpp"
#include "estimators.hpp"
#include "io.hpp"
#include "simulation.hpp"
#include "table_core.hpp"

struct margadj_counts {
  margadj::CountTable value;
};
struct margadj_table {
  margadj::JointDistribution value;
};
struct margadj_marginal {
  margadj::MarginalDistribution value;
  margadj::io::Normalization mode = margadj::io::Normalization::Probabilities;
};
struct margadj_adjusted {
  margadj::AdjustedTable value;
};
struct margadj_covariance {
  margadj::CovarianceMatrix value;
};
struct margadj_config {
  margadj::ExperimentConfig value;
};
struct margadj_grid {
  margadj::ExperimentGrid value;
};
struct margadj_case_study {
  margadj::CaseStudyResult value;
};

namespace {

thread_local std::string g_last_error;

margadj_status fail(margadj_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
margadj_status guard(F&& body) {
  try {
    g_last_error.clear();
    body();
    return MARGADJ_OK;
  } catch (const margadj::ParseError& e) {
    return fail(MARGADJ_ERR_PARSE, e.what());
  } catch (const margadj::ContractError& e) {
    return fail(MARGADJ_ERR_CONTRACT, e.what());
  } catch (const margadj::IoError& e) {
    return fail(MARGADJ_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MARGADJ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MARGADJ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MARGADJ_ERR_INTERNAL, "unknown error");
  }
}

template <typename... Ptrs>
margadj_status require(const char* what, Ptrs... ptrs) {
  if (((ptrs == nullptr) || ...)) return fail(MARGADJ_ERR_INVALID_ARGUMENT, std::string(what) + ": NULL argument");
  return MARGADJ_OK;
}

margadj_status copy_out(std::span<const double> src, double* out, std::size_t len) {
  if (out == nullptr || len < src.size()) {
    return fail(MARGADJ_ERR_INVALID_ARGUMENT,
                "output buffer too small: need " + std::to_string(src.size()) + ", got " + std::to_string(len));
  }
  std::copy(src.begin(), src.end(), out);
  g_last_error.clear();
  return MARGADJ_OK;
}

char* dup_string(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

margadj::io::Format to_format(margadj_format f) {
  switch (f) {
    case MARGADJ_FORMAT_CSV: return margadj::io::Format::Csv;
    case MARGADJ_FORMAT_JSON: return margadj::io::Format::Json;
  }
  throw margadj::ContractError("unknown output format");
}

margadj_status emit(char** out, const std::string& text) {
  *out = dup_string(text);
  return MARGADJ_OK;
}

}  // namespace

#define MARGADJ_REQUIRE(...)                                                           \
  do {                                                                                 \
    if (margadj_status st_ = require(__func__, __VA_ARGS__); st_ != MARGADJ_OK) return st_; \
  } while (0)

extern "C" {

const char* margadj_last_error(void) { return g_last_error.c_str(); }
const char* margadj_version(void) { return "1.0.0"; }
void margadj_string_free(char* s) { std::free(s); }

// ---- count tables ----

margadj_status margadj_counts_create(size_t rows, size_t cols, const int64_t* counts, margadj_counts** out) {
  MARGADJ_REQUIRE(counts, out);
  return guard([&] {
    *out = new margadj_counts{margadj::CountTable(rows, cols, std::vector<std::int64_t>(counts, counts + rows * cols))};
  });
}

margadj_status margadj_counts_parse_file(const char* path, margadj_counts** out) {
  MARGADJ_REQUIRE(path, out);
  return guard([&] { *out = new margadj_counts{margadj::io::parse_count_table(path)}; });
}

margadj_status margadj_counts_parse_text(const char* text, margadj_counts** out) {
  MARGADJ_REQUIRE(text, out);
  return guard([&] { *out = new margadj_counts{margadj::io::parse_count_table_text(text)}; });
}

void margadj_counts_free(margadj_counts* c) { delete c; }
size_t margadj_counts_rows(const margadj_counts* c) { return c ? c->value.rows() : 0; }
size_t margadj_counts_cols(const margadj_counts* c) { return c ? c->value.cols() : 0; }
int64_t margadj_counts_total(const margadj_counts* c) { return c ? c->value.total() : 0; }

margadj_status margadj_counts_get(const margadj_counts* c, int64_t* out, size_t len) {
  MARGADJ_REQUIRE(c, out);
  const auto v = c->value.counts().values();
  if (len < v.size()) return fail(MARGADJ_ERR_INVALID_ARGUMENT, "output buffer too small");
  std::copy(v.begin(), v.end(), out);
  return MARGADJ_OK;
}

margadj_status margadj_counts_to_csv(const margadj_counts* c, char** out) {
  MARGADJ_REQUIRE(c, out);
  return guard([&] { emit(out, margadj::io::format_count_table(c->value)); });
}

// ---- probability tables ----

margadj_status margadj_table_create(size_t rows, size_t cols, const double* cells, margadj_table** out) {
  MARGADJ_REQUIRE(cells, out);
  return guard([&] {
    *out = new margadj_table{margadj::JointDistribution(rows, cols, std::vector<double>(cells, cells + rows * cols))};
  });
}

margadj_status margadj_table_parse_file(const char* path, margadj_table** out) {
  MARGADJ_REQUIRE(path, out);
  return guard([&] { *out = new margadj_table{margadj::io::parse_joint_table(path)}; });
}

margadj_status margadj_table_from_counts(const margadj_counts* c, margadj_table** out) {
  MARGADJ_REQUIRE(c, out);
  return guard([&] { *out = new margadj_table{margadj::empirical_joint(c->value)}; });
}

margadj_status margadj_table_build_2x2(double row_first, double col_first, double cpr, margadj_table** out) {
  MARGADJ_REQUIRE(out);
  return guard([&] {
    const margadj::MarginalDistribution row(margadj::Axis::Row, {row_first, 1.0 - row_first});
    const margadj::MarginalDistribution col(margadj::Axis::Column, {col_first, 1.0 - col_first});
    *out = new margadj_table{margadj::build_2x2_from_marginals_cpr(row, col, cpr)};
  });
}

void margadj_table_free(margadj_table* t) { delete t; }
size_t margadj_table_rows(const margadj_table* t) { return t ? t->value.rows() : 0; }
size_t margadj_table_cols(const margadj_table* t) { return t ? t->value.cols() : 0; }

margadj_status margadj_table_get(const margadj_table* t, double* out, size_t len) {
  MARGADJ_REQUIRE(t);
  return copy_out(t->value.cells().values(), out, len);
}

margadj_status margadj_table_row_marginal(const margadj_table* t, double* out, size_t len) {
  MARGADJ_REQUIRE(t);
  return copy_out(margadj::row_marginal(t->value).probs(), out, len);
}

margadj_status margadj_table_col_marginal(const margadj_table* t, double* out, size_t len) {
  MARGADJ_REQUIRE(t);
  return copy_out(margadj::column_marginal(t->value).probs(), out, len);
}

margadj_status margadj_table_cross_product_ratio(const margadj_table* t, size_t i, size_t r, size_t j, size_t s,
                                                 double* value, int* defined) {
  MARGADJ_REQUIRE(t, value, defined);
  const auto& p = t->value;
  if (i >= p.rows() || r >= p.rows() || j >= p.cols() || s >= p.cols() || i == r || j == s) {
    return fail(MARGADJ_ERR_INVALID_ARGUMENT, "cross-product ratio: indices out of range or not distinct");
  }
  const double a = p(i, j), d = p(r, s), b = p(r, j), c = p(i, s);
  *defined = (a > 0 && b > 0 && c > 0 && d > 0) ? 1 : 0;
  *value = *defined ? (a * d) / (b * c) : std::numeric_limits<double>::quiet_NaN();
  return MARGADJ_OK;
}

margadj_status margadj_table_sample(const margadj_table* t, int64_t n, uint64_t seed, margadj_counts** out) {
  MARGADJ_REQUIRE(t, out);
  return guard([&] { *out = new margadj_counts{margadj::sample(t->value, n, seed)}; });
}

margadj_status margadj_table_to_csv(const margadj_table* t, char** out) {
  MARGADJ_REQUIRE(t, out);
  return guard([&] { emit(out, margadj::io::format_joint_table(t->value)); });
}

// ---- marginals ----

margadj_status margadj_marginal_create(size_t len, const double* probs, margadj_marginal** out) {
  MARGADJ_REQUIRE(probs, out);
  return guard([&] {
    *out = new margadj_marginal{
        margadj::MarginalDistribution(margadj::Axis::Column, std::vector<double>(probs, probs + len))};
  });
}

namespace {
margadj::io::MarginalRole role_of(int known_column) {
  return known_column ? margadj::io::MarginalRole::KnownColumn : margadj::io::MarginalRole::Generic;
}
}  // namespace

margadj_status margadj_marginal_parse_file(const char* path, int known_column, margadj_marginal** out) {
  MARGADJ_REQUIRE(path, out);
  return guard([&] {
    auto parsed = margadj::io::parse_marginal(path, margadj::Axis::Column, role_of(known_column));
    *out = new margadj_marginal{std::move(parsed.marginal), parsed.mode};
  });
}

margadj_status margadj_marginal_parse_text(const char* text, int known_column, margadj_marginal** out) {
  MARGADJ_REQUIRE(text, out);
  return guard([&] {
    auto parsed = margadj::io::parse_marginal_text(text, margadj::Axis::Column, role_of(known_column));
    *out = new margadj_marginal{std::move(parsed.marginal), parsed.mode};
  });
}

void margadj_marginal_free(margadj_marginal* m) { delete m; }
size_t margadj_marginal_size(const margadj_marginal* m) { return m ? m->value.size() : 0; }

margadj_status margadj_marginal_get(const margadj_marginal* m, double* out, size_t len) {
  MARGADJ_REQUIRE(m);
  return copy_out(m->value.probs(), out, len);
}

margadj_normalization margadj_marginal_normalization(const margadj_marginal* m) {
  return (m && m->mode == margadj::io::Normalization::Counts) ? MARGADJ_NORMALIZATION_COUNTS
                                                              : MARGADJ_NORMALIZATION_PROBABILITIES;
}

// ---- estimators ----

margadj_status margadj_weighted_univariate(const uint32_t* xs, const double* weights, size_t n, size_t categories,
                                           double* out) {
  MARGADJ_REQUIRE(xs, weights, out);
  return guard([&] {
    const margadj::WeightVector w(std::vector<double>(weights, weights + n));
    const auto est = margadj::weighted_univariate(std::span(xs, n), w, categories);
    std::copy(est.begin(), est.end(), out);
  });
}

margadj_status margadj_cloned_estimator(const uint32_t* xs, const int64_t* clones, size_t n, size_t categories,
                                        double* out) {
  MARGADJ_REQUIRE(xs, clones, out);
  return guard([&] {
    const margadj::CloneCounts z(std::vector<std::int64_t>(clones, clones + n));
    const auto est = margadj::cloned_estimator(std::span(xs, n), z, categories);
    std::copy(est.begin(), est.end(), out);
  });
}

margadj_status margadj_effective_sample_factor(const double* weights, size_t n, double* out) {
  MARGADJ_REQUIRE(weights, out);
  return guard([&] {
    *out = margadj::effective_sample_factor(margadj::WeightVector(std::vector<double>(weights, weights + n)));
  });
}

margadj_status margadj_adjust(const margadj_table* phat, const margadj_marginal* known_col, margadj_adjusted** out) {
  MARGADJ_REQUIRE(phat, known_col, out);
  return guard([&] { *out = new margadj_adjusted{margadj::adjust_to_known_marginal(phat->value, known_col->value)}; });
}

void margadj_adjusted_free(margadj_adjusted* a) { delete a; }

margadj_status margadj_adjusted_cells(const margadj_adjusted* a, double* out, size_t len) {
  MARGADJ_REQUIRE(a);
  return copy_out(a->value.cells.values(), out, len);
}

margadj_status margadj_adjusted_row_marginal(const margadj_adjusted* a, double* out, size_t len) {
  MARGADJ_REQUIRE(a);
  return copy_out(margadj::adjusted_row_marginal(a->value), out, len);
}

size_t margadj_adjusted_zero_column_count(const margadj_adjusted* a) {
  return a ? a->value.zero_column_mask.size() : 0;
}

margadj_status margadj_adjusted_zero_columns(const margadj_adjusted* a, size_t* out, size_t len) {
  MARGADJ_REQUIRE(a, out);
  const auto& mask = a->value.zero_column_mask;
  if (len < mask.size()) return fail(MARGADJ_ERR_INVALID_ARGUMENT, "output buffer too small");
  std::copy(mask.begin(), mask.end(), out);
  return MARGADJ_OK;
}

margadj_status margadj_ipf_fit(const margadj_table* init, const margadj_marginal* row_target,
                               const margadj_marginal* col_target, double tol, int max_iter, margadj_table** fitted,
                               int* iterations, int* converged) {
  MARGADJ_REQUIRE(init, row_target, col_target, fitted);
  return guard([&] {
    auto result = margadj::ipf_fit(init->value, row_target->value, col_target->value, {tol, max_iter});
    if (iterations) *iterations = result.iterations;
    if (converged) *converged = result.converged ? 1 : 0;
    *fitted = new margadj_table{std::move(result.table)};
  });
}

// ---- asymptotics ----

margadj_status margadj_sigma_marginal(const margadj_table* p, margadj_covariance** out) {
  MARGADJ_REQUIRE(p, out);
  return guard([&] { *out = new margadj_covariance{margadj::sigma_marginal(p->value)}; });
}

margadj_status margadj_gamma_adjusted(const margadj_table* p, margadj_covariance** out) {
  MARGADJ_REQUIRE(p, out);
  return guard([&] { *out = new margadj_covariance{margadj::gamma_adjusted(p->value)}; });
}

margadj_status margadj_conditional_cov_oracle(const margadj_table* p, margadj_covariance** out) {
  MARGADJ_REQUIRE(p, out);
  return guard([&] { *out = new margadj_covariance{margadj::conditional_cov_oracle(p->value)}; });
}

margadj_status margadj_covariance_difference(const margadj_covariance* a, const margadj_covariance* b,
                                             margadj_covariance** out) {
  MARGADJ_REQUIRE(a, b, out);
  return guard([&] { *out = new margadj_covariance{a->value - b->value}; });
}

void margadj_covariance_free(margadj_covariance* m) { delete m; }
size_t margadj_covariance_dim(const margadj_covariance* m) { return m ? m->value.dim() : 0; }

margadj_status margadj_covariance_get(const margadj_covariance* m, double* out, size_t len) {
  MARGADJ_REQUIRE(m);
  return copy_out(m->value.entries().values(), out, len);
}

margadj_status margadj_covariance_min_eigenvalue(const margadj_covariance* m, double* out) {
  MARGADJ_REQUIRE(m, out);
  return guard([&] { *out = m->value.min_eigenvalue(); });
}

margadj_status margadj_variance_gap(const margadj_table* p, const double* c, size_t len, double* gap,
                                    double* direct) {
  MARGADJ_REQUIRE(p, c, gap, direct);
  return guard([&] {
    const auto v = margadj::variance_gap_quadratic(p->value, std::span(c, len));
    *gap = v.gap;
    *direct = v.direct;
  });
}

margadj_status margadj_chi2_reduction_bound(const margadj_table* p, double* out) {
  MARGADJ_REQUIRE(p, out);
  return guard([&] { *out = margadj::chi2_reduction_bound(p->value); });
}

margadj_status margadj_asymptotic_reduction(const margadj_table* p, size_t row, double* out) {
  MARGADJ_REQUIRE(p, out);
  return guard([&] { *out = margadj::asymptotic_reduction(p->value, row); });
}

// ---- simulation ----

margadj_status margadj_config_parse_file(const char* path, margadj_config** out) {
  MARGADJ_REQUIRE(path, out);
  return guard([&] {
    *out = new margadj_config{margadj::io::parse_experiment_config_json(margadj::io::read_text_file(path))};
  });
}

margadj_status margadj_config_parse_json(const char* text, margadj_config** out) {
  MARGADJ_REQUIRE(text, out);
  return guard([&] { *out = new margadj_config{margadj::io::parse_experiment_config_json(text)}; });
}

void margadj_config_free(margadj_config* c) { delete c; }

margadj_status margadj_config_set_seed(margadj_config* c, uint64_t seed) {
  MARGADJ_REQUIRE(c);
  c->value.seed = seed;
  return MARGADJ_OK;
}

margadj_status margadj_config_set_replications(margadj_config* c, int64_t replications) {
  MARGADJ_REQUIRE(c);
  if (replications < 2) return fail(MARGADJ_ERR_CONTRACT, "at least 2 replications are required");
  c->value.replications = replications;
  return MARGADJ_OK;
}

margadj_status margadj_config_to_json(const margadj_config* c, char** out) {
  MARGADJ_REQUIRE(c, out);
  return guard([&] { emit(out, margadj::io::format_experiment_config_json(c->value)); });
}

margadj_status margadj_run_experiment(const margadj_config* c, unsigned threads, margadj_grid** out) {
  MARGADJ_REQUIRE(c, out);
  return guard([&] { *out = new margadj_grid{margadj::run_experiment(c->value, {threads})}; });
}

void margadj_grid_free(margadj_grid* g) { delete g; }
size_t margadj_grid_cell_count(const margadj_grid* g) { return g ? g->value.cells.size() : 0; }

size_t margadj_grid_failed_cells(const margadj_grid* g) {
  if (!g) return 0;
  size_t failed = 0;
  for (const auto& c : g->value.cells) failed += c.ok() ? 0 : 1;
  return failed;
}

margadj_status margadj_grid_cell(const margadj_grid* g, size_t index, int64_t* n, double* log_cpr,
                                 double* reduction_pct, double* asymptotic_pct, double* bias_hat, double* bias_tilde,
                                 int64_t* zero_columns, int* ok) {
  MARGADJ_REQUIRE(g);
  if (index >= g->value.cells.size()) return fail(MARGADJ_ERR_INVALID_ARGUMENT, "grid cell index out of range");
  const auto& c = g->value.cells[index];
  if (n) *n = c.n;
  if (log_cpr) *log_cpr = c.log_cpr;
  if (reduction_pct) *reduction_pct = c.reduction_pct;
  if (asymptotic_pct) *asymptotic_pct = c.asymptotic_reduction_pct;
  if (bias_hat) *bias_hat = c.bias_hat;
  if (bias_tilde) *bias_tilde = c.bias_tilde;
  if (zero_columns) *zero_columns = c.zero_column_events;
  if (ok) *ok = c.ok() ? 1 : 0;
  return MARGADJ_OK;
}

margadj_status margadj_grid_format(const margadj_grid* g, margadj_format format, char** out) {
  MARGADJ_REQUIRE(g, out);
  return guard([&] { emit(out, margadj::io::format_grid(g->value, to_format(format))); });
}

margadj_status margadj_case_study_run(const margadj_counts* counts, const margadj_marginal* known_col,
                                      margadj_case_study** out) {
  MARGADJ_REQUIRE(counts, known_col, out);
  return guard([&] { *out = new margadj_case_study{margadj::run_case_study(counts->value, known_col->value)}; });
}

void margadj_case_study_free(margadj_case_study* cs) { delete cs; }
size_t margadj_case_study_rows(const margadj_case_study* cs) { return cs ? cs->value.rows.size() : 0; }

margadj_status margadj_case_study_row(const margadj_case_study* cs, size_t row, double* phat, double* ptilde,
                                      double* relative_difference_pct) {
  MARGADJ_REQUIRE(cs);
  if (row >= cs->value.rows.size()) return fail(MARGADJ_ERR_INVALID_ARGUMENT, "case-study row out of range");
  const auto& r = cs->value.rows[row];
  if (phat) *phat = r.phat;
  if (ptilde) *ptilde = r.ptilde;
  if (relative_difference_pct) *relative_difference_pct = r.relative_difference_pct;
  return MARGADJ_OK;
}

size_t margadj_case_study_zero_column_count(const margadj_case_study* cs) {
  return cs ? cs->value.zero_column_mask.size() : 0;
}

margadj_status margadj_case_study_format(const margadj_case_study* cs, margadj_format format, char** out) {
  MARGADJ_REQUIRE(cs, out);
  return guard([&] { emit(out, margadj::io::format_case_study(cs->value, to_format(format))); });
}

// ---- reports ----

margadj_status margadj_report_estimate(const margadj_counts* c, margadj_format format, char** out) {
  MARGADJ_REQUIRE(c, out);
  return guard([&] { emit(out, margadj::io::estimate_report(c->value, to_format(format))); });
}

margadj_status margadj_report_adjust(const margadj_counts* c, const margadj_marginal* known_col,
                                     margadj_format format, char** out) {
  MARGADJ_REQUIRE(c, known_col, out);
  return guard([&] { emit(out, margadj::io::adjust_report(c->value, known_col->value, to_format(format))); });
}

margadj_status margadj_report_asymptotics(const margadj_table* p, margadj_format format, char** out) {
  MARGADJ_REQUIRE(p, out);
  return guard([&] { emit(out, margadj::io::asymptotics_report(p->value, to_format(format))); });
}

margadj_status margadj_report_ipf(const margadj_table* init, const margadj_marginal* row_target,
                                  const margadj_marginal* col_target, double tol, int max_iter,
                                  margadj_format format, char** out) {
  MARGADJ_REQUIRE(init, row_target, col_target, out);
  return guard([&] {
    const auto result = margadj::ipf_fit(init->value, row_target->value, col_target->value, {tol, max_iter});
    emit(out, margadj::io::ipf_report(result, to_format(format)));
  });
}

}  // extern "C"
