// Command-line front end: solve, compare, plot, fixture.
//
// Exit codes: 0 solved, 2 infeasible, 3 feasibility unresolved,
// 4 budget exhausted, 1 any error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ibba/fixtures.hpp"
#include "ibba/ibba.hpp"

namespace {

struct SolveOptions {
  std::string file;
  std::string method = "ibba";
  std::optional<double> epsilon;
  std::size_t max_iterations = 100000;
  std::string trace_path;
  bool json = false;
};

struct Run {
  ibba::RunReport report;
  ibba::Trace trace;
};

Run run_method(const ibba::ProblemSpec& spec, ibba::Method method, std::optional<double> epsilon,
               std::size_t max_iterations, bool emit_trace) {
  const double eps = epsilon.value_or(1e-4 * (spec.b() - spec.a()));
  Run run;
  run.trace.levels = spec.level_count();
  run.trace.a = spec.a();
  run.trace.b = spec.b();
  if (method == ibba::Method::Ibba) {
    ibba::SolverConfig config;
    config.epsilon = eps;
    config.max_iterations = max_iterations;
    config.emit_trace = emit_trace;
    const auto outcome = ibba::solve(spec, config);
    run.report = ibba::make_report(spec, outcome);
    run.trace.method = "ibba";
    run.trace.records = outcome.trace;
  } else {
    ibba::PenaltyConfig config;
    config.max_iterations = max_iterations;
    config.emit_trace = emit_trace;
    const auto outcome = ibba::tune_penalty(spec, config, eps);
    run.report = ibba::make_report(spec, outcome, eps);
    run.trace.method = "pen";
    run.trace.records = outcome.trace;
  }
  return run;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("error writing " + path);
}

int cmd_solve(const SolveOptions& o) {
  const auto spec = ibba::load_problem(o.file);
  const auto method = o.method == "pen" ? ibba::Method::Pen : ibba::Method::Ibba;
  const Run run = run_method(spec, method, o.epsilon, o.max_iterations, !o.trace_path.empty());
  if (!o.trace_path.empty()) {
    std::ostringstream trace;
    ibba::write_trace(trace, run.trace);
    write_file(o.trace_path, trace.str());
  }
  if (o.json) {
    std::cout << ibba::to_json(run.report).dump(2) << '\n';
  } else {
    ibba::write_report(std::cout, run.report);
  }
  return ibba::exit_code(run.report.status);
}

int cmd_compare(const std::vector<std::string>& files, const std::string& out_path,
                std::optional<double> epsilon, std::size_t max_iterations) {
  std::vector<std::future<ibba::CompareRow>> jobs;
  for (const auto& file : files) {
    jobs.push_back(std::async(std::launch::async, [file, epsilon, max_iterations] {
      try {
        const auto spec = ibba::load_problem(file);
        const Run pen = run_method(spec, ibba::Method::Pen, epsilon, max_iterations, false);
        const Run ibba_run = run_method(spec, ibba::Method::Ibba, epsilon, max_iterations, false);
        return ibba::compare_row(pen.report, ibba_run.report);
      } catch (const std::exception& e) {
        ibba::CompareRow row;
        row.problem = std::filesystem::path(file).stem().string();
        row.error = e.what();
        return row;
      }
    }));
  }
  std::vector<ibba::CompareRow> rows;
  for (auto& job : jobs) rows.push_back(job.get());
  std::ostringstream table;
  ibba::write_compare(table, rows);
  if (out_path.empty()) {
    std::cout << table.str();
  } else {
    write_file(out_path, table.str());
  }
  return 0;
}

int cmd_plot(const std::string& trace_path, const std::string& problem_path, const std::string& out_path) {
  const auto spec = ibba::load_problem(problem_path);
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot open " + trace_path);
  const auto trace = ibba::read_trace(in);
  std::ostringstream svg;
  ibba::write_svg(svg, spec, trace);
  write_file(out_path, svg.str());
  return 0;
}

int cmd_fixture(const std::string& which, const std::string& out, std::uint64_t seed, std::size_t count) {
  if (which == "problem7") {
    const auto text = ibba::format_problem(ibba::fixtures::problem7());
    if (out.empty()) {
      std::cout << text;
    } else {
      write_file(out, text);
    }
    return 0;
  }
  if (out.empty()) throw std::runtime_error("battery needs --out DIR");
  std::filesystem::create_directories(out);
  for (const auto& g : ibba::fixtures::generate_battery(count, seed)) {
    const auto path = std::filesystem::path(out) / (g.spec.name() + ".txt");
    write_file(path.string(), ibba::format_problem(g.spec));
    std::cout << path.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Univariate Lipschitz global optimization with multiextremal constraints"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one problem file");
  solve_cmd->add_option("file", solve.file, "Problem file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--method", solve.method, "ibba or pen")
      ->check(CLI::IsMember({"ibba", "pen"}));
  solve_cmd->add_option("--epsilon", solve.epsilon, "Absolute accuracy (default 1e-4*(b-a))")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--max-iter", solve.max_iterations, "Trial budget per run")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  solve_cmd->add_option("--trace", solve.trace_path, "Write the trial trace here");
  solve_cmd->add_flag("--json", solve.json, "Print the report as JSON");

  std::vector<std::string> compare_files;
  std::string compare_out;
  std::optional<double> compare_epsilon;
  std::size_t compare_max = 100000;
  auto* compare_cmd = app.add_subcommand("compare", "IBBA vs PEN table over problem files");
  compare_cmd->add_option("files", compare_files, "Problem files")->required();
  compare_cmd->add_option("--out", compare_out, "Write the table here instead of stdout");
  compare_cmd->add_option("--epsilon", compare_epsilon, "Absolute accuracy (default 1e-4*(b-a))")
      ->check(CLI::NonNegativeNumber);
  compare_cmd->add_option("--max-iter", compare_max, "Trial budget per run")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));

  std::string plot_trace, plot_problem, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "SVG dynamic diagram of a trace");
  plot_cmd->add_option("--trace", plot_trace, "Trace file")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--problem", plot_problem, "Problem file")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--out", plot_out, "SVG output")->required();

  std::string fixture_name, fixture_out;
  std::uint64_t fixture_seed = 20240601;
  std::size_t fixture_count = 10;
  auto* fixture_cmd = app.add_subcommand("fixture", "Write built-in problems as problem files");
  fixture_cmd->add_option("name", fixture_name, "problem7 or battery")
      ->required()
      ->check(CLI::IsMember({"problem7", "battery"}));
  fixture_cmd->add_option("--out", fixture_out, "Output file (problem7) or directory (battery)");
  fixture_cmd->add_option("--seed", fixture_seed, "Battery seed");
  fixture_cmd->add_option("--count", fixture_count, "Battery size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve);
    if (*compare_cmd) return cmd_compare(compare_files, compare_out, compare_epsilon, compare_max);
    if (*plot_cmd) return cmd_plot(plot_trace, plot_problem, plot_out);
    if (*fixture_cmd) return cmd_fixture(fixture_name, fixture_out, fixture_seed, fixture_count);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
