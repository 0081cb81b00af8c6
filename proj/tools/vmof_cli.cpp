// vmof: run experiment plans, compare results, export fronts, time scaling.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "vmof/experiment.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& plan_path, const std::string& out_path, std::size_t workers,
            bool quiet) {
  const vmof::ExperimentPlan plan = vmof::load_plan(plan_path);

  const fs::path out(out_path);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  fs::path history_path = out;
  history_path.replace_extension(".history.csv");
  fs::path fronts_dir = out;
  fronts_dir.replace_extension(".fronts");

  std::ofstream results(out);
  std::ofstream history(history_path);
  if (!results || !history) {
    std::cerr << "vmof: cannot write " << out << '\n';
    return 2;
  }
  vmof::write_results_header(results);
  vmof::write_history_header(history);
  results.flush();

  std::size_t failures = 0;
  vmof::run_experiment(plan, workers, [&](const vmof::TrialRecord& r) {
    vmof::write_result_row(results, r);
    results.flush();
    vmof::write_history_rows(history, r);
    history.flush();
    if (r.ok()) {
      vmof::write_trial_front(fronts_dir, r);
    } else {
      ++failures;
      std::cerr << "vmof: cell " << r.algorithm << " / " << r.problem << " / seed " << r.seed
                << " failed: " << r.error << '\n';
    }
    if (!quiet) {
      std::cerr << std::setprecision(6) << r.algorithm << ' ' << r.problem << " seed=" << r.seed
                << " igd=" << r.igd << " hv=" << r.hv << " (" << r.wall_time_s << " s)\n";
    }
  });
  return failures == 0 ? 0 : 1;
}

int cmd_compare(const std::string& results_path, const std::string& baseline,
                const std::string& metric, double alpha) {
  const auto records = vmof::read_results_csv(results_path);
  const auto m = vmof::parse_metric(metric);
  const auto rows = vmof::compare_table(records, baseline, m, alpha);
  vmof::write_table_csv(std::cout, rows, m);
  return 0;
}

int cmd_front(const std::string& dir) {
  const auto fronts = vmof::collect_fronts(dir);
  std::size_t m = 0;
  for (const auto& f : fronts)
    if (!f.points.empty()) m = std::max(m, f.points.front().size());
  std::cout << "algorithm,problem,seed";
  for (std::size_t i = 0; i < m; ++i) std::cout << ",f" << (i + 1);
  std::cout << '\n' << std::setprecision(17);
  for (const auto& f : fronts) {
    for (const auto& p : f.points) {
      std::cout << f.algorithm << ",\"" << f.problem << "\"," << f.seed;
      for (double v : p) std::cout << ',' << v;
      std::cout << '\n';
    }
  }
  return 0;
}

int cmd_bench_scaling(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  const auto points = vmof::bench_scaling(dims, seed);
  std::cout << "d,seconds,evaluations,seconds_per_eval\n" << std::setprecision(9);
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    std::cout << p.d << ',' << p.seconds << ',' << p.evaluations << ',' << p.seconds_per_eval
              << '\n';
    xs.push_back(static_cast<double>(p.d));
    ys.push_back(p.seconds_per_eval);
  }
  if (points.size() >= 2)
    std::cout << "# loglog_slope=" << vmof::loglog_slope(xs, ys) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Very large-scale multiobjective optimization experiments"};
  app.require_subcommand(1);

  std::string plan_path, out_path = "results.csv";
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run every (algorithm, problem, seed) cell of a plan");
  run->add_option("plan", plan_path, "JSON plan file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "Results CSV (history and fronts are written beside it)");
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "Do not log finished cells");

  std::string results_path, baseline = "vmof", metric = "igd";
  double alpha = 0.05;
  auto* compare = app.add_subcommand("compare", "Median table with rank-sum marks");
  compare->add_option("results", results_path, "Results CSV")->required()->check(CLI::ExistingFile);
  compare->add_option("--baseline", baseline, "Algorithm the others are compared against");
  compare->add_option("--metric", metric, "igd or hv")->check(CLI::IsMember({"igd", "hv"}));
  compare->add_option("--alpha", alpha, "Significance level");

  std::string fronts_dir;
  auto* front = app.add_subcommand("front", "Emit non-dominated objective vectors as CSV");
  front->add_option("results-dir", fronts_dir, "Directory of front files (<results>.fronts)")
      ->required()
      ->check(CLI::ExistingDirectory);

  std::vector<std::size_t> dims{1000, 10000, 100000, 1000000};
  std::uint64_t seed = 1;
  auto* bench = app.add_subcommand("bench-scaling", "Time one iteration per dimension");
  bench->add_option("--dims", dims, "Decision-space dimensions");
  bench->add_option("--seed", seed, "Seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(plan_path, out_path, workers, quiet);
    if (*compare) return cmd_compare(results_path, baseline, metric, alpha);
    if (*front) return cmd_front(fronts_dir);
    if (*bench) return cmd_bench_scaling(dims, seed);
  } catch (const std::exception& e) {
    std::cerr << "vmof: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
