// Command-line front-end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "margadj/margadj.h"

namespace {

enum ExitCode { kSuccess = 0, kUsage = 1, kParse = 2, kContract = 3 };

// Carries a library status up to main().
struct Failure {
  margadj_status status;
  std::string message;
};

void check(margadj_status st) {
  if (st != MARGADJ_OK) throw Failure{st, margadj_last_error()};
}

int exit_code_for(margadj_status st) {
  switch (st) {
    case MARGADJ_ERR_PARSE:
    case MARGADJ_ERR_IO: return kParse;
    case MARGADJ_ERR_INVALID_ARGUMENT: return kUsage;
    default: return kContract;
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Counts = std::unique_ptr<margadj_counts, Deleter<margadj_counts, margadj_counts_free>>;
using Table = std::unique_ptr<margadj_table, Deleter<margadj_table, margadj_table_free>>;
using Marginal = std::unique_ptr<margadj_marginal, Deleter<margadj_marginal, margadj_marginal_free>>;
using Config = std::unique_ptr<margadj_config, Deleter<margadj_config, margadj_config_free>>;
using Grid = std::unique_ptr<margadj_grid, Deleter<margadj_grid, margadj_grid_free>>;
using CaseStudy = std::unique_ptr<margadj_case_study, Deleter<margadj_case_study, margadj_case_study_free>>;
using Text = std::unique_ptr<char, Deleter<char, margadj_string_free>>;

struct Options {
  std::string counts;
  std::string marginal;
  std::string row_marginal;
  std::string table;
  std::string config;
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> replications;
  double tol = 1e-10;
  int max_iter = 1000;
  unsigned threads = 0;
};

margadj_format output_format(const std::string& name) {
  return name == "json" ? MARGADJ_FORMAT_JSON : MARGADJ_FORMAT_CSV;
}

Counts load_counts(const std::string& path) {
  margadj_counts* c = nullptr;
  check(margadj_counts_parse_file(path.c_str(), &c));
  return Counts(c);
}

Marginal load_marginal(const std::string& path, bool known_column) {
  margadj_marginal* m = nullptr;
  check(margadj_marginal_parse_file(path.c_str(), known_column ? 1 : 0, &m));
  return Marginal(m);
}

// --table, or else --counts normalized to relative frequencies.
Table load_table(const Options& o) {
  margadj_table* t = nullptr;
  if (!o.table.empty()) {
    check(margadj_table_parse_file(o.table.c_str(), &t));
  } else {
    const Counts c = load_counts(o.counts);
    check(margadj_table_from_counts(c.get(), &t));
  }
  return Table(t);
}

void write_output(const Options& o, const Text& text) {
  if (o.out.empty()) {
    std::fputs(text.get(), stdout);
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  f << text.get();
  if (!f) throw Failure{MARGADJ_ERR_IO, "cannot write '" + o.out + "'"};
}

void run_estimate(const Options& o) {
  const Counts c = load_counts(o.counts);
  char* s = nullptr;
  check(margadj_report_estimate(c.get(), output_format(o.format), &s));
  write_output(o, Text(s));
}

void run_adjust(const Options& o) {
  const Counts c = load_counts(o.counts);
  const Marginal m = load_marginal(o.marginal, true);
  char* s = nullptr;
  check(margadj_report_adjust(c.get(), m.get(), output_format(o.format), &s));
  write_output(o, Text(s));
}

void run_asymptotics(const Options& o) {
  const Table t = load_table(o);
  char* s = nullptr;
  check(margadj_report_asymptotics(t.get(), output_format(o.format), &s));
  write_output(o, Text(s));
}

void run_simulate(const Options& o) {
  margadj_config* raw = nullptr;
  check(margadj_config_parse_file(o.config.c_str(), &raw));
  const Config cfg(raw);
  if (o.seed) check(margadj_config_set_seed(cfg.get(), *o.seed));
  if (o.replications) check(margadj_config_set_replications(cfg.get(), *o.replications));
  margadj_grid* g = nullptr;
  check(margadj_run_experiment(cfg.get(), o.threads, &g));
  const Grid grid(g);
  if (const auto failed = margadj_grid_failed_cells(grid.get()); failed > 0) {
    std::cerr << "warning: " << failed << " of " << margadj_grid_cell_count(grid.get())
              << " grid cells could not be computed (see status column)\n";
  }
  char* s = nullptr;
  check(margadj_grid_format(grid.get(), output_format(o.format), &s));
  write_output(o, Text(s));
}

void run_case_study(const Options& o) {
  const Counts c = load_counts(o.counts);
  const Marginal m = load_marginal(o.marginal, true);
  margadj_case_study* raw = nullptr;
  check(margadj_case_study_run(c.get(), m.get(), &raw));
  const CaseStudy cs(raw);
  if (const auto zeros = margadj_case_study_zero_column_count(cs.get()); zeros > 0) {
    std::cerr << "warning: " << zeros << " column(s) have no observations; adjusted estimates sum below 1\n";
  }
  char* s = nullptr;
  check(margadj_case_study_format(cs.get(), output_format(o.format), &s));
  write_output(o, Text(s));
}

void run_ipf(const Options& o) {
  const Table init = load_table(o);
  const Marginal rows = load_marginal(o.row_marginal, true);
  const Marginal cols = load_marginal(o.marginal, true);
  char* s = nullptr;
  check(margadj_report_ipf(init.get(), rows.get(), cols.get(), o.tol, o.max_iter, output_format(o.format), &s));
  write_output(o, Text(s));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marginal-adjusted estimation for two-way contingency tables"};
  app.require_subcommand(1);
  Options o;

  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "Output file (default: stdout)");
  };
  const auto add_table_input = [&](CLI::App* sub) {
    auto* table = sub->add_option("--table", o.table, "Probability table (or integer counts)");
    auto* counts = sub->add_option("--counts", o.counts, "Count table, normalized to frequencies");
    table->excludes(counts);
    sub->callback([sub, table, counts] {
      if (table->count() + counts->count() == 0) throw CLI::RequiredError("--table or --counts");
    });
  };

  auto* estimate = app.add_subcommand("estimate", "Empirical joint distribution and marginals");
  estimate->add_option("--counts", o.counts, "Count table")->required();
  add_output(estimate);

  auto* adjust = app.add_subcommand("adjust", "Reweight a sample to a known column marginal");
  adjust->add_option("--counts", o.counts, "Count table")->required();
  adjust->add_option("--marginal", o.marginal, "Known column marginal")->required();
  add_output(adjust);

  auto* asymptotics = app.add_subcommand("asymptotics", "Asymptotic covariances and variance reductions");
  add_table_input(asymptotics);
  add_output(asymptotics);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo variance-reduction grid");
  simulate->add_option("--config", o.config, "Experiment config (JSON)")->required();
  simulate->add_option("--seed", o.seed, "Override the config seed");
  simulate->add_option("--replications", o.replications, "Override the replication count")
      ->check(CLI::Range(std::int64_t{2}, std::numeric_limits<std::int64_t>::max()));
  simulate->add_option("--threads", o.threads, "Worker threads (0 = all); output does not depend on it");
  add_output(simulate);

  auto* case_study = app.add_subcommand("case-study", "Unadjusted vs adjusted row marginal of a count table");
  case_study->add_option("--counts", o.counts, "Count table")->required();
  case_study->add_option("--marginal", o.marginal, "Known column marginal")->required();
  add_output(case_study);

  auto* ipf = app.add_subcommand("ipf", "Iterative proportional fitting to row and column targets");
  add_table_input(ipf);
  ipf->add_option("--row-marginal", o.row_marginal, "Row target")->required();
  ipf->add_option("--marginal", o.marginal, "Column target")->required();
  ipf->add_option("--tol", o.tol, "Max marginal deviation at convergence")->check(CLI::PositiveNumber);
  ipf->add_option("--max-iter", o.max_iter, "Iteration limit")->check(CLI::NonNegativeNumber);
  add_output(ipf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*estimate) run_estimate(o);
    else if (*adjust) run_adjust(o);
    else if (*asymptotics) run_asymptotics(o);
    else if (*simulate) run_simulate(o);
    else if (*case_study) run_case_study(o);
    else if (*ipf) run_ipf(o);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return exit_code_for(f.status);
  }
  return kSuccess;
}
