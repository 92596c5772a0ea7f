#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "asymptotics.hpp"
#include "error.hpp"

namespace margadj::io {
namespace {

using nlohmann::json;

struct Line {
  std::size_t number;
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 1;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.push_back({number++, trim(text.substr(0, nl))});
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  for (;;) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

bool is_skippable(const Line& l) { return l.text.empty() || l.text.front() == '#'; }

bool is_integer_literal(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

struct TableHeader {
  std::size_t rows;
  std::size_t cols;
};

TableHeader parse_header(const std::vector<Line>& lines) {
  if (lines.empty()) throw ParseError("empty input, expected '#rows=<I> cols=<J>' header", 1);
  static const std::regex kHeader(R"(^#\s*rows\s*=\s*(\d+)\s+cols\s*=\s*(\d+)$)");
  std::match_results<std::string_view::const_iterator> m;
  const auto& first = lines.front();
  if (!std::regex_match(first.text.begin(), first.text.end(), m, kHeader)) {
    throw ParseError("malformed header, expected '#rows=<I> cols=<J>'", first.number);
  }
  const auto rows = parse_integer(std::string_view(&*m[1].first, m[1].length()), first.number);
  const auto cols = parse_integer(std::string_view(&*m[2].first, m[2].length()), first.number);
  if (rows < 1 || cols < 1) throw ParseError("table dimensions must be positive", first.number);
  return {static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)};
}

// Data lines of a headed table: exactly `rows` lines of `cols` fields each.
std::vector<std::pair<std::size_t, std::vector<std::string_view>>> table_body(const std::vector<Line>& lines,
                                                                              const TableHeader& h) {
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> body;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (is_skippable(lines[k])) continue;
    if (body.size() == h.rows) {
      throw ParseError("more data rows than the header declares (" + std::to_string(h.rows) + ")", lines[k].number);
    }
    auto fields = split_fields(lines[k].text);
    if (fields.size() != h.cols) {
      throw ParseError("expected " + std::to_string(h.cols) + " values, found " + std::to_string(fields.size()),
                       lines[k].number);
    }
    body.emplace_back(lines[k].number, std::move(fields));
  }
  if (body.size() != h.rows) {
    const std::size_t at = lines.empty() ? 1 : lines.back().number;
    throw ParseError("expected " + std::to_string(h.rows) + " data rows, found " + std::to_string(body.size()), at);
  }
  return body;
}

std::string index_field(const std::optional<std::size_t>& k) { return k ? std::to_string(*k) : std::string(); }

class ReportWriter {
 public:
  void add(std::string_view quantity, std::optional<std::size_t> i, std::optional<std::size_t> j, double v) {
    out_ << quantity << ',' << index_field(i) << ',' << index_field(j) << ',' << format_real(v) << '\n';
  }
  void matrix(std::string_view quantity, const RealMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) add(quantity, i + 1, j + 1, m(i, j));
    }
  }
  void row_vector(std::string_view quantity, std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) add(quantity, i + 1, std::nullopt, v[i]);
  }
  void col_vector(std::string_view quantity, std::span<const double> v) {
    for (std::size_t j = 0; j < v.size(); ++j) add(quantity, std::nullopt, j + 1, v[j]);
  }
  std::string str() const { return "quantity,i,j,value\n" + out_.str(); }

 private:
  std::ostringstream out_;
};

json matrix_json(const RealMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  return rows;
}

json vector_json(std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); }

json one_based(const std::vector<std::size_t>& idx) {
  json a = json::array();
  for (auto k : idx) a.push_back(k + 1);
  return a;
}

double json_real(const json& v) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw ParseError("expected a number, found " + std::string(v.type_name()));
  return v.get<double>();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string sanitize_status(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ParseError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_pct(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 4);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view token, std::size_t line) {
  token = trim(token);
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError("not a number: '" + std::string(token) + "'", line);
  }
  return v;
}

std::int64_t parse_integer(std::string_view token, std::size_t line) {
  token = trim(token);
  std::int64_t v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError("not an integer: '" + std::string(token) + "'", line);
  }
  return v;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

CountTable parse_count_table_text(std::string_view text) {
  const auto lines = split_lines(text);
  const auto header = parse_header(lines);
  Matrix<std::int64_t> counts(header.rows, header.cols, 0);
  const auto body = table_body(lines, header);
  for (std::size_t i = 0; i < body.size(); ++i) {
    const auto& [number, fields] = body[i];
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto v = parse_integer(fields[j], number);
      if (v < 0) throw ParseError("negative count " + std::to_string(v), number);
      counts(i, j) = v;
    }
  }
  try {
    return CountTable(std::move(counts));
  } catch (const ContractError& e) {
    throw ParseError(e.what());
  }
}

CountTable parse_count_table(const std::string& path) { return parse_count_table_text(read_text_file(path)); }

std::string format_count_table(const CountTable& counts) {
  std::ostringstream out;
  out << "#rows=" << counts.rows() << " cols=" << counts.cols() << '\n';
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    for (std::size_t j = 0; j < counts.cols(); ++j) out << (j ? "," : "") << counts(i, j);
    out << '\n';
  }
  return out.str();
}

JointDistribution parse_joint_table_text(std::string_view text) {
  const auto lines = split_lines(text);
  const auto header = parse_header(lines);
  const auto body = table_body(lines, header);
  bool all_integers = true;
  for (const auto& [number, fields] : body) {
    for (auto f : fields) all_integers = all_integers && is_integer_literal(f);
  }
  if (all_integers) {
    std::vector<std::int64_t> counts;
    for (const auto& [number, fields] : body) {
      for (auto f : fields) counts.push_back(parse_integer(f, number));
    }
    try {
      return empirical_joint(CountTable(header.rows, header.cols, std::move(counts)));
    } catch (const ContractError& e) {
      throw ParseError(e.what());
    }
  }
  RealMatrix cells(header.rows, header.cols);
  for (std::size_t i = 0; i < body.size(); ++i) {
    const auto& [number, fields] = body[i];
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const double v = parse_real(fields[j], number);
      if (!std::isfinite(v) || v < 0.0) throw ParseError("probabilities must be finite and nonnegative", number);
      cells(i, j) = v;
    }
  }
  try {
    return JointDistribution(std::move(cells));
  } catch (const ContractError& e) {
    throw ParseError(e.what());
  }
}

JointDistribution parse_joint_table(const std::string& path) { return parse_joint_table_text(read_text_file(path)); }

std::string format_joint_table(const JointDistribution& p) {
  std::ostringstream out;
  out << "#rows=" << p.rows() << " cols=" << p.cols() << '\n';
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) out << (j ? "," : "") << format_real(p(i, j));
    out << '\n';
  }
  return out.str();
}

ParsedMarginal parse_marginal_text(std::string_view text, Axis axis, MarginalRole role) {
  const Line* data = nullptr;
  const auto lines = split_lines(text);
  for (const auto& l : lines) {
    if (is_skippable(l)) continue;
    if (data) throw ParseError("a marginal file holds exactly one data line", l.number);
    data = &l;
  }
  if (!data) throw ParseError("no data line found", lines.empty() ? 1 : lines.back().number);

  const auto fields = split_fields(data->text);
  const bool counts = std::all_of(fields.begin(), fields.end(), is_integer_literal);
  std::vector<double> probs;
  probs.reserve(fields.size());
  if (counts) {
    std::int64_t total = 0;
    std::vector<std::int64_t> raw;
    for (auto f : fields) {
      raw.push_back(parse_integer(f, data->number));
      total += raw.back();
    }
    if (total <= 0) throw ParseError("counts sum to zero", data->number);
    for (auto c : raw) probs.push_back(static_cast<double>(c) / static_cast<double>(total));
  } else {
    double sum = 0.0;
    for (auto f : fields) {
      const double v = parse_real(f, data->number);
      if (!std::isfinite(v) || v < 0.0) throw ParseError("probabilities must be finite and nonnegative", data->number);
      probs.push_back(v);
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw ParseError("probabilities sum to " + format_real(sum) + ", not 1 (and are not integer counts)",
                       data->number);
    }
  }
  if (role == MarginalRole::KnownColumn) {
    for (std::size_t j = 0; j < probs.size(); ++j) {
      if (probs[j] == 0.0) {
        throw ParseError("entry " + std::to_string(j + 1) + " is zero; a known column marginal must be positive",
                         data->number);
      }
    }
  }
  try {
    return {MarginalDistribution(axis, std::move(probs)), counts ? Normalization::Counts : Normalization::Probabilities};
  } catch (const ContractError& e) {
    throw ParseError(e.what(), data->number);
  }
}

ParsedMarginal parse_marginal(const std::string& path, Axis axis, MarginalRole role) {
  return parse_marginal_text(read_text_file(path), axis, role);
}

std::string format_marginal(const MarginalDistribution& m) {
  std::string out;
  for (std::size_t k = 0; k < m.size(); ++k) out += (k ? "," : "") + format_real(m[k]);
  return out + "\n";
}

ExperimentConfig parse_experiment_config_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("experiment config must be a JSON object");

  ExperimentConfig cfg;
  try {
    const auto first_of = [&](const char* key) {
      const auto v = j.at(key).get<std::vector<double>>();
      if (v.size() != 2) throw ParseError(std::string(key) + " must have two entries");
      return MarginalDistribution(Axis::Row, v)[0];
    };
    cfg.name = j.value("name", std::string());
    cfg.row_first = first_of("row_marginal");
    cfg.col_first = first_of("col_marginal");
    if (j.contains("log_cpr_grid")) {
      cfg.log_cpr_grid = j.at("log_cpr_grid").get<std::vector<double>>();
    } else if (j.contains("log_cpr_range")) {
      const auto& r = j.at("log_cpr_range");
      const double lo = r.at("from").get<double>();
      const double hi = r.at("to").get<double>();
      const int points = r.at("points").get<int>();
      if (points < 1) throw ParseError("log_cpr_range.points must be >= 1");
      cfg.log_cpr_grid.assign(static_cast<std::size_t>(points), lo);
      for (int k = 1; k < points; ++k) cfg.log_cpr_grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
    }
    if (j.contains("n_grid")) cfg.n_grid = j.at("n_grid").get<std::vector<std::int64_t>>();
    if (j.contains("replications")) cfg.replications = j.at("replications").get<std::int64_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  } catch (const ContractError& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const ContractError& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

namespace {

json config_json(const ExperimentConfig& cfg) {
  return json{{"name", cfg.name},
              {"row_marginal", {cfg.row_first, 1.0 - cfg.row_first}},
              {"col_marginal", {cfg.col_first, 1.0 - cfg.col_first}},
              {"log_cpr_grid", cfg.log_cpr_grid},
              {"n_grid", cfg.n_grid},
              {"replications", cfg.replications},
              {"seed", cfg.seed}};
}

}  // namespace

std::string format_experiment_config_json(const ExperimentConfig& config) { return dump(config_json(config)); }

std::string format_grid(const ExperimentGrid& grid, Format format) {
  if (format == Format::Json) {
    json cells = json::array();
    for (const auto& c : grid.cells) {
      cells.push_back({{"n", c.n},
                       {"log_cpr", c.log_cpr},
                       {"reduction_pct", c.reduction_pct},
                       {"asymptotic_pct", c.asymptotic_reduction_pct},
                       {"bias_hat", c.bias_hat},
                       {"bias_tilde", c.bias_tilde},
                       {"zero_columns", c.zero_column_events},
                       {"status", c.ok() ? std::string("ok") : "error: " + c.error}});
    }
    return dump(json{{"config", config_json(grid.config)}, {"cells", std::move(cells)}});
  }
  std::ostringstream out;
  out << kGridCsvHeader << '\n';
  for (const auto& c : grid.cells) {
    out << c.n << ',' << format_real(c.log_cpr) << ',' << format_pct(c.reduction_pct) << ','
        << format_pct(c.asymptotic_reduction_pct) << ',' << format_real(c.bias_hat) << ','
        << format_real(c.bias_tilde) << ',' << c.zero_column_events << ',' << format_real(c.reduction_pct) << ','
        << format_real(c.asymptotic_reduction_pct) << ','
        << (c.ok() ? std::string("ok") : "error: " + sanitize_status(c.error)) << '\n';
  }
  return out.str();
}

namespace {

std::string status_to_error(std::string_view status, std::size_t line) {
  if (status == "ok") return {};
  constexpr std::string_view kPrefix = "error: ";
  if (status.substr(0, kPrefix.size()) != kPrefix) throw ParseError("unknown status '" + std::string(status) + "'", line);
  return std::string(status.substr(kPrefix.size()));
}

}  // namespace

std::vector<ExperimentCell> parse_grid_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front().text != kGridCsvHeader) throw ParseError("missing grid CSV header", 1);
  std::vector<ExperimentCell> cells;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (is_skippable(lines[k])) continue;
    const auto f = split_fields(lines[k].text);
    const auto no = lines[k].number;
    if (f.size() != 10) throw ParseError("expected 10 fields", no);
    ExperimentCell c;
    c.n = parse_integer(f[0], no);
    c.log_cpr = parse_real(f[1], no);
    c.bias_hat = parse_real(f[4], no);
    c.bias_tilde = parse_real(f[5], no);
    c.zero_column_events = parse_integer(f[6], no);
    c.reduction_pct = parse_real(f[7], no);
    c.asymptotic_reduction_pct = parse_real(f[8], no);
    c.error = status_to_error(f[9], no);
    cells.push_back(std::move(c));
  }
  return cells;
}

ExperimentGrid parse_grid_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    ExperimentGrid grid;
    grid.config = parse_experiment_config_json(j.at("config").dump());
    for (const auto& c : j.at("cells")) {
      ExperimentCell cell;
      cell.n = c.at("n").get<std::int64_t>();
      cell.log_cpr = json_real(c.at("log_cpr"));
      cell.reduction_pct = json_real(c.at("reduction_pct"));
      cell.asymptotic_reduction_pct = json_real(c.at("asymptotic_pct"));
      cell.bias_hat = json_real(c.at("bias_hat"));
      cell.bias_tilde = json_real(c.at("bias_tilde"));
      cell.zero_column_events = c.at("zero_columns").get<std::int64_t>();
      cell.error = status_to_error(c.at("status").get<std::string>(), 0);
      grid.cells.push_back(std::move(cell));
    }
    return grid;
  } catch (const json::exception& e) {
    throw ParseError(std::string("grid JSON: ") + e.what());
  }
}

std::string format_case_study(const CaseStudyResult& result, Format format) {
  if (format == Format::Json) {
    json rows = json::array();
    for (const auto& r : result.rows) {
      rows.push_back({{"phat", r.phat}, {"ptilde", r.ptilde}, {"relative_difference_pct", r.relative_difference_pct}});
    }
    return dump(json{{"rows", std::move(rows)}, {"zero_column_mask", one_based(result.zero_column_mask)}});
  }
  std::ostringstream out;
  if (!result.zero_column_mask.empty()) {
    out << "# zero_columns:";
    for (auto j : result.zero_column_mask) out << ' ' << j + 1;
    out << '\n';
  }
  out << kCaseStudyCsvHeader << '\n';
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    out << i + 1 << ',' << format_pct(100.0 * r.phat) << ',' << format_pct(100.0 * r.ptilde) << ','
        << format_pct(r.relative_difference_pct) << ',' << format_real(r.phat) << ',' << format_real(r.ptilde) << ','
        << format_real(r.relative_difference_pct) << '\n';
  }
  return out.str();
}

CaseStudyResult parse_case_study_csv(std::string_view text) {
  CaseStudyResult result;
  bool header_seen = false;
  for (const auto& l : split_lines(text)) {
    if (l.text.empty()) continue;
    if (l.text.front() == '#') {
      constexpr std::string_view kMask = "# zero_columns:";
      if (l.text.substr(0, kMask.size()) == kMask) {
        std::istringstream ss{std::string(l.text.substr(kMask.size()))};
        std::string tok;
        while (ss >> tok) result.zero_column_mask.push_back(static_cast<std::size_t>(parse_integer(tok, l.number) - 1));
      }
      continue;
    }
    if (!header_seen) {
      if (l.text != kCaseStudyCsvHeader) throw ParseError("missing case-study CSV header", l.number);
      header_seen = true;
      continue;
    }
    const auto f = split_fields(l.text);
    if (f.size() != 7) throw ParseError("expected 7 fields", l.number);
    if (parse_integer(f[0], l.number) != static_cast<std::int64_t>(result.rows.size() + 1)) {
      throw ParseError("rows out of order", l.number);
    }
    result.rows.push_back({parse_real(f[4], l.number), parse_real(f[5], l.number), parse_real(f[6], l.number)});
  }
  if (!header_seen) throw ParseError("missing case-study CSV header", 1);
  return result;
}

std::vector<ReportRecord> parse_report_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front().text != "quantity,i,j,value") throw ParseError("missing report header", 1);
  std::vector<ReportRecord> out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (is_skippable(lines[k])) continue;
    const auto f = split_fields(lines[k].text);
    const auto no = lines[k].number;
    if (f.size() != 4) throw ParseError("expected 4 fields", no);
    ReportRecord r;
    r.quantity = std::string(f[0]);
    if (!f[1].empty()) r.i = static_cast<std::size_t>(parse_integer(f[1], no));
    if (!f[2].empty()) r.j = static_cast<std::size_t>(parse_integer(f[2], no));
    r.value = parse_real(f[3], no);
    out.push_back(std::move(r));
  }
  return out;
}

std::string estimate_report(const CountTable& counts, Format format) {
  const auto p = empirical_joint(counts);
  const auto rows = row_marginal(p);
  const auto cols = column_marginal(p);
  if (format == Format::Json) {
    return dump(json{{"n", counts.total()},
                     {"joint", matrix_json(p.cells())},
                     {"row_marginal", vector_json(rows.probs())},
                     {"col_marginal", vector_json(cols.probs())}});
  }
  ReportWriter w;
  w.add("n", std::nullopt, std::nullopt, static_cast<double>(counts.total()));
  w.matrix("joint", p.cells());
  w.row_vector("row_marginal", rows.probs());
  w.col_vector("col_marginal", cols.probs());
  return w.str();
}

std::string adjust_report(const CountTable& counts, const MarginalDistribution& known_col, Format format) {
  const auto phat = empirical_joint(counts);
  const auto adjusted = adjust_to_known_marginal(phat, known_col);
  const auto hat_rows = row_sums(phat.cells());
  const auto tilde_rows = adjusted_row_marginal(adjusted);
  if (format == Format::Json) {
    return dump(json{{"adjusted", matrix_json(adjusted.cells)},
                     {"adjusted_row_marginal", vector_json(tilde_rows)},
                     {"row_marginal", vector_json(hat_rows)},
                     {"known_col_marginal", vector_json(known_col.probs())},
                     {"zero_column_mask", one_based(adjusted.zero_column_mask)}});
  }
  ReportWriter w;
  w.matrix("adjusted", adjusted.cells);
  w.row_vector("adjusted_row_marginal", tilde_rows);
  w.row_vector("row_marginal", hat_rows);
  w.col_vector("known_col_marginal", known_col.probs());
  for (auto j : adjusted.zero_column_mask) w.add("zero_column", std::nullopt, j + 1, 1.0);
  return w.str();
}

std::string asymptotics_report(const JointDistribution& p, Format format) {
  const auto sigma = sigma_marginal(p);
  const auto gamma = gamma_adjusted(p);
  const auto diff = sigma - gamma;
  const double chi2 = chi2_reduction_bound(p);
  std::vector<double> reductions(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    try {
      reductions[i] = asymptotic_reduction(p, i);
    } catch (const ContractError&) {
      reductions[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  const double min_eig = diff.min_eigenvalue();
  if (format == Format::Json) {
    return dump(json{{"sigma", matrix_json(sigma.entries())},
                     {"gamma", matrix_json(gamma.entries())},
                     {"sigma_minus_gamma", matrix_json(diff.entries())},
                     {"min_eigenvalue_sigma_minus_gamma", min_eig},
                     {"chi2_bound", chi2},
                     {"asymptotic_reduction", vector_json(reductions)}});
  }
  ReportWriter w;
  w.matrix("sigma", sigma.entries());
  w.matrix("gamma", gamma.entries());
  w.matrix("sigma_minus_gamma", diff.entries());
  w.add("min_eigenvalue_sigma_minus_gamma", std::nullopt, std::nullopt, min_eig);
  w.add("chi2_bound", std::nullopt, std::nullopt, chi2);
  w.row_vector("asymptotic_reduction", reductions);
  return w.str();
}

std::string ipf_report(const IpfResult& result, Format format) {
  if (format == Format::Json) {
    return dump(json{{"fitted", matrix_json(result.table.cells())},
                     {"iterations", result.iterations},
                     {"converged", result.converged},
                     {"max_deviation", result.max_deviation}});
  }
  ReportWriter w;
  w.matrix("fitted", result.table.cells());
  w.add("iterations", std::nullopt, std::nullopt, result.iterations);
  w.add("converged", std::nullopt, std::nullopt, result.converged ? 1.0 : 0.0);
  w.add("max_deviation", std::nullopt, std::nullopt, result.max_deviation);
  return w.str();
}

}  // namespace margadj::io
