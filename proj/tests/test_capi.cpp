#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "margadj/margadj.h"

namespace {

const std::string kData = MARGADJ_DATA_DIR;

std::string take(char* s) {
  std::string out(s ? s : "");
  margadj_string_free(s);
  return out;
}

TEST(CApi, VersionAndNullArguments) {
  EXPECT_STRNE(margadj_version(), "");
  EXPECT_EQ(margadj_counts_parse_text("#rows=1 cols=1\n1\n", nullptr), MARGADJ_ERR_INVALID_ARGUMENT);
  EXPECT_STRNE(margadj_last_error(), "");
  margadj_counts* c = nullptr;
  EXPECT_EQ(margadj_counts_parse_text(nullptr, &c), MARGADJ_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(c, nullptr);
  margadj_counts_free(nullptr);
  margadj_table_free(nullptr);
  margadj_string_free(nullptr);
}

TEST(CApi, StatusCodes) {
  margadj_counts* c = nullptr;
  EXPECT_EQ(margadj_counts_parse_text("#rows=1 cols=2\n1,-1\n", &c), MARGADJ_ERR_PARSE);
  EXPECT_NE(std::strstr(margadj_last_error(), "line 2"), nullptr) << margadj_last_error();
  EXPECT_EQ(margadj_counts_parse_file("/nonexistent/file.csv", &c), MARGADJ_ERR_IO);

  margadj_table* t = nullptr;
  EXPECT_EQ(margadj_table_build_2x2(0.5, 0.5, -1.0, &t), MARGADJ_ERR_CONTRACT);
  const double bad[] = {0.3, 0.3};
  EXPECT_EQ(margadj_table_create(1, 2, bad, &t), MARGADJ_ERR_CONTRACT);
  EXPECT_EQ(t, nullptr);

  margadj_marginal* m = nullptr;
  EXPECT_EQ(margadj_marginal_parse_text("0.6,0.5", 0, &m), MARGADJ_ERR_PARSE);
  EXPECT_EQ(margadj_marginal_parse_text("1,0", 1, &m), MARGADJ_ERR_PARSE);
  ASSERT_EQ(margadj_marginal_parse_text("1,0", 0, &m), MARGADJ_OK);
  margadj_marginal_free(m);
}

TEST(CApi, CaseStudyPipeline) {
  margadj_counts* c = nullptr;
  ASSERT_EQ(margadj_counts_parse_file((kData + "/gidas_table3.csv").c_str(), &c), MARGADJ_OK);
  EXPECT_EQ(margadj_counts_total(c), 3254);
  EXPECT_EQ(margadj_counts_rows(c), 8u);
  margadj_marginal* m = nullptr;
  ASSERT_EQ(margadj_marginal_parse_file((kData + "/destatis2014.csv").c_str(), 1, &m), MARGADJ_OK);
  EXPECT_EQ(margadj_marginal_normalization(m), MARGADJ_NORMALIZATION_COUNTS);

  margadj_case_study* cs = nullptr;
  ASSERT_EQ(margadj_case_study_run(c, m, &cs), MARGADJ_OK);
  ASSERT_EQ(margadj_case_study_rows(cs), 8u);
  EXPECT_EQ(margadj_case_study_zero_column_count(cs), 0u);
  double phat = 0, ptilde = 0, rel = 0;
  ASSERT_EQ(margadj_case_study_row(cs, 0, &phat, &ptilde, &rel), MARGADJ_OK);
  EXPECT_DOUBLE_EQ(phat, 372.0 / 3254.0);
  EXPECT_GT(rel, 0.0);
  EXPECT_EQ(margadj_case_study_row(cs, 8, &phat, &ptilde, &rel), MARGADJ_ERR_INVALID_ARGUMENT);

  char* text = nullptr;
  ASSERT_EQ(margadj_case_study_format(cs, MARGADJ_FORMAT_CSV, &text), MARGADJ_OK);
  EXPECT_EQ(take(text).rfind("row,phat_pct,", 0), 0u);

  margadj_case_study_free(cs);
  margadj_marginal_free(m);
  margadj_counts_free(c);
}

TEST(CApi, TablesAndAsymptotics) {
  margadj_table* t = nullptr;
  ASSERT_EQ(margadj_table_build_2x2(0.5, 0.5, 9.0, &t), MARGADJ_OK);
  double cells[4];
  ASSERT_EQ(margadj_table_get(t, cells, 4), MARGADJ_OK);
  EXPECT_NEAR(cells[0], 0.375, 1e-15);
  EXPECT_EQ(margadj_table_get(t, cells, 3), MARGADJ_ERR_INVALID_ARGUMENT);

  double cpr = 0;
  int defined = 0;
  ASSERT_EQ(margadj_table_cross_product_ratio(t, 0, 1, 0, 1, &cpr, &defined), MARGADJ_OK);
  EXPECT_TRUE(defined);
  EXPECT_NEAR(cpr, 9.0, 1e-12);

  margadj_covariance *s = nullptr, *g = nullptr, *o = nullptr, *d = nullptr;
  ASSERT_EQ(margadj_sigma_marginal(t, &s), MARGADJ_OK);
  ASSERT_EQ(margadj_gamma_adjusted(t, &g), MARGADJ_OK);
  ASSERT_EQ(margadj_conditional_cov_oracle(t, &o), MARGADJ_OK);
  ASSERT_EQ(margadj_covariance_difference(s, g, &d), MARGADJ_OK);
  ASSERT_EQ(margadj_covariance_dim(g), 2u);
  double gv[4], ov[4], dv[4];
  margadj_covariance_get(g, gv, 4);
  margadj_covariance_get(o, ov, 4);
  margadj_covariance_get(d, dv, 4);
  EXPECT_NEAR(gv[0], 0.1875, 1e-15);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(gv[k], ov[k], 1e-15);
  EXPECT_NEAR(dv[0], 0.0625, 1e-15);
  double lam = 0;
  ASSERT_EQ(margadj_covariance_min_eigenvalue(d, &lam), MARGADJ_OK);
  EXPECT_NEAR(lam, 0.0, 1e-12);

  const double c[] = {1.0, 0.0};
  double gap = 0, direct = 0;
  ASSERT_EQ(margadj_variance_gap(t, c, 2, &gap, &direct), MARGADJ_OK);
  EXPECT_NEAR(gap, direct, 1e-15);
  EXPECT_EQ(margadj_variance_gap(t, c, 1, &gap, &direct), MARGADJ_ERR_CONTRACT);

  double bound = 0, red = 0;
  ASSERT_EQ(margadj_chi2_reduction_bound(t, &bound), MARGADJ_OK);
  EXPECT_NEAR(bound, 0.25, 1e-15);
  ASSERT_EQ(margadj_asymptotic_reduction(t, 0, &red), MARGADJ_OK);
  EXPECT_NEAR(red, 0.25, 1e-15);

  for (auto* m : {s, g, o, d}) margadj_covariance_free(m);
  margadj_table_free(t);
}

TEST(CApi, AdjustAndIpf) {
  const double cells[] = {0.25, 0.25, 0.25, 0.25};
  margadj_table* t = nullptr;
  ASSERT_EQ(margadj_table_create(2, 2, cells, &t), MARGADJ_OK);
  const double target[] = {0.8, 0.2};
  margadj_marginal* col = nullptr;
  ASSERT_EQ(margadj_marginal_create(2, target, &col), MARGADJ_OK);
  margadj_adjusted* a = nullptr;
  ASSERT_EQ(margadj_adjust(t, col, &a), MARGADJ_OK);
  double out[4];
  ASSERT_EQ(margadj_adjusted_cells(a, out, 4), MARGADJ_OK);
  EXPECT_DOUBLE_EQ(out[0], 0.4);
  EXPECT_DOUBLE_EQ(out[1], 0.1);
  EXPECT_EQ(margadj_adjusted_zero_column_count(a), 0u);
  margadj_adjusted_free(a);

  const double half[] = {0.5, 0.5};
  margadj_marginal* row = nullptr;
  ASSERT_EQ(margadj_marginal_create(2, half, &row), MARGADJ_OK);
  margadj_table* fitted = nullptr;
  int iterations = -1, converged = 0;
  ASSERT_EQ(margadj_ipf_fit(t, row, col, 1e-10, 1000, &fitted, &iterations, &converged), MARGADJ_OK);
  EXPECT_TRUE(converged);
  ASSERT_EQ(margadj_table_get(fitted, out, 4), MARGADJ_OK);
  EXPECT_NEAR(out[0], 0.4, 1e-10);
  EXPECT_NEAR(out[1], 0.1, 1e-10);
  margadj_table_free(fitted);

  margadj_marginal_free(row);
  margadj_marginal_free(col);
  margadj_table_free(t);
}

TEST(CApi, Estimators) {
  const uint32_t xs[] = {0, 0, 1};
  const double w[] = {0.5, 0.25, 0.25};
  double p[2];
  ASSERT_EQ(margadj_weighted_univariate(xs, w, 3, 2, p), MARGADJ_OK);
  EXPECT_DOUBLE_EQ(p[0], 0.75);
  const int64_t z[] = {3, 1};
  const uint32_t ys[] = {0, 1};
  ASSERT_EQ(margadj_cloned_estimator(ys, z, 2, 2, p), MARGADJ_OK);
  EXPECT_DOUBLE_EQ(p[0], 0.75);
  double f = 0;
  ASSERT_EQ(margadj_effective_sample_factor(w, 3, &f), MARGADJ_OK);
  EXPECT_DOUBLE_EQ(f, 0.375);
}

TEST(CApi, ExperimentIsDeterministic) {
  margadj_config* cfg = nullptr;
  ASSERT_EQ(margadj_config_parse_json(R"({"row_marginal":[0.5,0.5],"col_marginal":[0.5,0.5],)"
                                      R"("log_cpr_grid":[0,2.1972245773362196],"n_grid":[200],)"
                                      R"("replications":2000,"seed":4})",
                                      &cfg),
            MARGADJ_OK);
  margadj_grid *g1 = nullptr, *g2 = nullptr;
  ASSERT_EQ(margadj_run_experiment(cfg, 1, &g1), MARGADJ_OK);
  ASSERT_EQ(margadj_run_experiment(cfg, 4, &g2), MARGADJ_OK);
  ASSERT_EQ(margadj_grid_cell_count(g1), 2u);
  EXPECT_EQ(margadj_grid_failed_cells(g1), 0u);
  char *t1 = nullptr, *t2 = nullptr;
  ASSERT_EQ(margadj_grid_format(g1, MARGADJ_FORMAT_JSON, &t1), MARGADJ_OK);
  ASSERT_EQ(margadj_grid_format(g2, MARGADJ_FORMAT_JSON, &t2), MARGADJ_OK);
  EXPECT_EQ(take(t1), take(t2));

  int64_t n = 0, zeros = 0;
  double lc = 0, red = 0, asym = 0, bh = 0, bt = 0;
  int ok = 0;
  ASSERT_EQ(margadj_grid_cell(g1, 1, &n, &lc, &red, &asym, &bh, &bt, &zeros, &ok), MARGADJ_OK);
  EXPECT_EQ(n, 200);
  EXPECT_TRUE(ok);
  EXPECT_NEAR(asym, 25.0, 1e-9);

  ASSERT_EQ(margadj_config_set_replications(cfg, 1), MARGADJ_ERR_CONTRACT);
  margadj_grid_free(g1);
  margadj_grid_free(g2);
  margadj_config_free(cfg);
}

}  // namespace
