#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "estimators.hpp"
#include "simulation.hpp"
#include "table_core.hpp"

// Text formats.
//
// Count table:     "#rows=<I> cols=<J>" on the first line, then I lines of J
//                  comma-separated nonnegative integers. Later lines starting
//                  with '#' and blank lines are ignored.
// Joint table:     same header, cells are probabilities (or integer counts,
//                  which are normalized).
// Marginal:        one line of comma-separated probabilities, or of integer
//                  counts (normalized).
// Report CSV:      "quantity,i,j,value" rows with 1-based indices; an index
//                  column is empty when it does not apply.

namespace margadj::io {

enum class Format { Csv, Json };

Format parse_format(std::string_view name);

/// Shortest decimal that parses back to the same double.
std::string format_real(double x);
/// Four significant digits, for percentage columns.
std::string format_pct(double x);
/// Strict full-token parse; throws ParseError (with line) on failure.
double parse_real(std::string_view token, std::size_t line = 0);
std::int64_t parse_integer(std::string_view token, std::size_t line = 0);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

CountTable parse_count_table_text(std::string_view text);
CountTable parse_count_table(const std::string& path);
std::string format_count_table(const CountTable& counts);

JointDistribution parse_joint_table_text(std::string_view text);
JointDistribution parse_joint_table(const std::string& path);
std::string format_joint_table(const JointDistribution& p);

enum class MarginalRole { Generic, KnownColumn };
enum class Normalization { Probabilities, Counts };

struct ParsedMarginal {
  MarginalDistribution marginal;
  Normalization mode;
};

/// With MarginalRole::KnownColumn a zero entry is rejected.
ParsedMarginal parse_marginal_text(std::string_view text, Axis axis, MarginalRole role = MarginalRole::Generic);
ParsedMarginal parse_marginal(const std::string& path, Axis axis, MarginalRole role = MarginalRole::Generic);
std::string format_marginal(const MarginalDistribution& m);

ExperimentConfig parse_experiment_config_json(std::string_view text);
std::string format_experiment_config_json(const ExperimentConfig& config);

inline constexpr std::string_view kGridCsvHeader =
    "n,log_cpr,reduction_pct,asymptotic_pct,bias_hat,bias_tilde,zero_columns,"
    "reduction_pct_raw,asymptotic_pct_raw,status";

std::string format_grid(const ExperimentGrid& grid, Format format);
/// Cells only; the CSV form does not carry the config.
std::vector<ExperimentCell> parse_grid_csv(std::string_view text);
ExperimentGrid parse_grid_json(std::string_view text);

inline constexpr std::string_view kCaseStudyCsvHeader =
    "row,phat_pct,ptilde_pct,relative_difference_pct,phat,ptilde,relative_difference_pct_raw";

std::string format_case_study(const CaseStudyResult& result, Format format);
CaseStudyResult parse_case_study_csv(std::string_view text);

struct ReportRecord {
  std::string quantity;
  std::optional<std::size_t> i;  // 1-based
  std::optional<std::size_t> j;  // 1-based
  double value = 0.0;

  bool operator==(const ReportRecord&) const = default;
};

std::vector<ReportRecord> parse_report_csv(std::string_view text);

std::string estimate_report(const CountTable& counts, Format format);
std::string adjust_report(const CountTable& counts, const MarginalDistribution& known_col, Format format);
std::string asymptotics_report(const JointDistribution& p, Format format);
std::string ipf_report(const IpfResult& result, Format format);

}  // namespace margadj::io
