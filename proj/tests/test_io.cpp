#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "error.hpp"
#include "io.hpp"
#include "support/random_tables.hpp"

namespace margadj {
namespace {

const std::string kData = MARGADJ_DATA_DIR;

int parse_error_line(std::string_view text) {
  try {
    io::parse_count_table_text(text);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

TEST(FormatReal, ShortestRoundTrip) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 10000; ++k) {
    const double x = u(gen) * std::pow(10.0, k % 40 - 20);
    EXPECT_EQ(io::parse_real(io::format_real(x)), x);
  }
  EXPECT_EQ(io::format_real(0.1), "0.1");
  EXPECT_EQ(io::format_real(0.25), "0.25");
  EXPECT_EQ(io::format_pct(11.43330055316533), "11.43");
  EXPECT_EQ(io::format_pct(0.9219422249539029), "0.9219");
}

TEST(ParseNumbers, Strict) {
  EXPECT_THROW(io::parse_real("0.5x"), ParseError);
  EXPECT_THROW(io::parse_real(""), ParseError);
  EXPECT_THROW(io::parse_integer("1.0"), ParseError);
  EXPECT_EQ(io::parse_integer(" 42 "), 42);
}

TEST(ParseCountTable, BundledTable) {
  const auto c = io::parse_count_table(kData + "/gidas_table3.csv");
  EXPECT_EQ(c.rows(), 8u);
  EXPECT_EQ(c.cols(), 3u);
  EXPECT_EQ(c.total(), 3254);
  EXPECT_EQ(c(0, 0), 346);
  EXPECT_EQ(c(7, 2), 7);
}

TEST(ParseCountTable, SingleCell) {
  const auto c = io::parse_count_table_text("#rows=1 cols=1\n5\n");
  EXPECT_EQ(c, CountTable(1, 1, {5}));
}

TEST(ParseCountTable, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("#rows=2 cols=2\n1,2\n3,-4\n"), 3);
  EXPECT_EQ(parse_error_line("#rows=2 cols=2\n1,2\n# note\n3,x\n"), 4);
  EXPECT_EQ(parse_error_line("#rows=2 cols=2\n1,2,3\n3,4\n"), 2);
  EXPECT_EQ(parse_error_line("rows=2 cols=2\n1,2\n3,4\n"), 1);
  EXPECT_EQ(parse_error_line("#rows=1 cols=2\n1.5,2\n"), 2);
  EXPECT_THROW(io::parse_count_table_text("#rows=3 cols=2\n1,2\n3,4\n"), ParseError);
  EXPECT_THROW(io::parse_count_table_text("#rows=1 cols=2\n1,2\n3,4\n"), ParseError);
  EXPECT_THROW(io::parse_count_table("/nonexistent/table.csv"), IoError);
}

TEST(ParseMarginal, Examples) {
  const auto m = io::parse_marginal(kData + "/destatis2014.csv", Axis::Column, io::MarginalRole::KnownColumn);
  EXPECT_EQ(m.mode, io::Normalization::Counts);
  EXPECT_NEAR(m.marginal[0], 106181.0 / 118502.0, 1e-15);
  EXPECT_NEAR(m.marginal[0], 0.89603, 1e-5);
  EXPECT_NEAR(m.marginal[1], 0.10040, 1e-5);
  EXPECT_NEAR(m.marginal[2], 0.00357, 1e-5);

  const auto half = io::parse_marginal_text("0.5,0.5\n", Axis::Row);
  EXPECT_EQ(half.mode, io::Normalization::Probabilities);
  EXPECT_EQ(half.marginal[0], 0.5);

  EXPECT_THROW(io::parse_marginal_text("0.6,0.5", Axis::Row), ParseError);
  EXPECT_THROW(io::parse_marginal_text("1,0", Axis::Column, io::MarginalRole::KnownColumn), ParseError);
  EXPECT_NO_THROW(io::parse_marginal_text("1,0", Axis::Column));
  EXPECT_THROW(io::parse_marginal_text("0.5,0.5\n0.5,0.5\n", Axis::Row), ParseError);
  EXPECT_THROW(io::parse_marginal_text("", Axis::Row), ParseError);
}

TEST(RoundTrip, CountTables) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<std::int64_t> cell(0, 1'000'000'000'000LL);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [r, c] = testing::random_dims(gen, 1, 7);
    std::vector<std::int64_t> v(r * c);
    for (auto& x : v) x = cell(gen);
    const CountTable t(r, c, v);
    EXPECT_EQ(io::parse_count_table_text(io::format_count_table(t)), t);
  }
}

TEST(RoundTrip, JointTablesAndMarginals) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [r, c] = testing::random_dims(gen, 1, 7);
    const auto p = testing::random_table(gen, r, c);
    const auto back = io::parse_joint_table_text(io::format_joint_table(p));
    EXPECT_EQ(back.cells(), p.cells());
    const auto m = row_marginal(p);
    const auto mb = io::parse_marginal_text(io::format_marginal(m), Axis::Row).marginal;
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(mb[i], m[i]);
  }
}

TEST(ParseJointTable, IntegerCellsAreNormalized) {
  const auto p = io::parse_joint_table_text("#rows=2 cols=2\n1,1\n1,1\n");
  for (double x : p.cells().values()) EXPECT_EQ(x, 0.25);
  const auto q = io::parse_joint_table(kData + "/independent2x2.csv");
  EXPECT_EQ(q(1, 1), 0.25);
  EXPECT_THROW(io::parse_joint_table_text("#rows=1 cols=2\n0.5,0.6\n"), ParseError);
}

TEST(ExperimentConfigJson, BundledCases) {
  const auto c1 = io::parse_experiment_config_json(io::read_text_file(kData + "/caseI.json"));
  EXPECT_EQ(c1.row_first, 0.5);
  EXPECT_EQ(c1.col_first, 0.5);
  EXPECT_EQ(c1.log_cpr_grid, ExperimentConfig::default_log_cpr_grid());
  EXPECT_EQ(c1.replications, 20000);
  const auto c2 = io::parse_experiment_config_json(io::read_text_file(kData + "/caseII.json"));
  EXPECT_EQ(c2.row_first, 0.9);
  EXPECT_EQ(c2.col_first, 0.7);
  const auto c3 = io::parse_experiment_config_json(io::read_text_file(kData + "/caseIII.json"));
  EXPECT_EQ(c3.row_first, 0.2);
  EXPECT_EQ(c3.col_first, 0.7);
}

TEST(ExperimentConfigJson, RoundTripAndErrors) {
  ExperimentConfig c;
  c.name = "custom";
  c.row_first = 0.3;
  c.col_first = 0.45;
  c.log_cpr_grid = {-1.25, 0.0, 0.1, 3.0};
  c.n_grid = {7, 70};
  c.replications = 123;
  c.seed = std::numeric_limits<std::uint64_t>::max();
  EXPECT_EQ(io::parse_experiment_config_json(io::format_experiment_config_json(c)), c);

  EXPECT_THROW(io::parse_experiment_config_json("{"), ParseError);
  EXPECT_THROW(io::parse_experiment_config_json(R"({"row_marginal":[0.6,0.5]})"), ParseError);
  EXPECT_THROW(io::parse_experiment_config_json(R"({"replications":"many"})"), ParseError);
}

TEST(RoundTrip, Grid) {
  ExperimentConfig c;
  c.n_grid = {30, 300};
  c.log_cpr_grid = {-2.0, 0.0, 1.7};
  c.replications = 500;
  c.seed = 8;
  auto g = run_experiment(c);
  g.cells[0].error = "something failed";
  const auto csv = io::format_grid(g, io::Format::Csv);
  EXPECT_EQ(csv.substr(0, io::kGridCsvHeader.size()), io::kGridCsvHeader);
  EXPECT_EQ(io::parse_grid_csv(csv), g.cells);
  EXPECT_EQ(io::parse_grid_json(io::format_grid(g, io::Format::Json)), g);
}

TEST(RoundTrip, CaseStudy) {
  const auto counts = io::parse_count_table(kData + "/gidas_table3.csv");
  const auto col =
      io::parse_marginal(kData + "/destatis2014.csv", Axis::Column, io::MarginalRole::KnownColumn).marginal;
  const auto r = run_case_study(counts, col);
  EXPECT_EQ(io::parse_case_study_csv(io::format_case_study(r, io::Format::Csv)), r);

  const CountTable gap(2, 3, {5, 0, 1, 3, 0, 2});
  const auto rz = run_case_study(gap, MarginalDistribution(Axis::Column, {0.6, 0.3, 0.1}));
  const auto text = io::format_case_study(rz, io::Format::Csv);
  EXPECT_EQ(text.rfind("# zero_columns: 2\n", 0), 0u);
  EXPECT_EQ(io::parse_case_study_csv(text), rz);
}

TEST(Reports, AsymptoticsOfIndependentTableHasZeroGap) {
  const auto p = io::parse_joint_table(kData + "/independent2x2.csv");
  const auto recs = io::parse_report_csv(io::asymptotics_report(p, io::Format::Csv));
  int seen = 0;
  for (const auto& r : recs) {
    if (r.quantity == "sigma_minus_gamma") {
      ++seen;
      EXPECT_LT(std::abs(r.value), 1e-12);
    }
    if (r.quantity == "chi2_bound") EXPECT_LT(std::abs(r.value), 1e-12);
  }
  EXPECT_EQ(seen, 4);
}

TEST(Reports, EstimateCarriesCountsAndMarginals) {
  const auto counts = io::parse_count_table(kData + "/gidas_table3.csv");
  const auto recs = io::parse_report_csv(io::estimate_report(counts, io::Format::Csv));
  ASSERT_FALSE(recs.empty());
  EXPECT_EQ(recs.front(), (io::ReportRecord{"n", std::nullopt, std::nullopt, 3254.0}));
  bool found = false;
  for (const auto& r : recs) {
    if (r.quantity == "joint" && r.i == 1u && r.j == 1u) {
      found = true;
      EXPECT_EQ(r.value, 346.0 / 3254.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Files, WriteAndRead) {
  const auto path = (std::filesystem::temp_directory_path() / "margadj_io_test.txt").string();
  io::write_text_file(path, "abc\n");
  EXPECT_EQ(io::read_text_file(path), "abc\n");
  std::filesystem::remove(path);
  EXPECT_THROW(io::write_text_file("/nonexistent-dir/x.txt", "x"), IoError);
}

}  // namespace
}  // namespace margadj
