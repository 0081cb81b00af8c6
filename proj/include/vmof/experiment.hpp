#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vmof/baselines.hpp"
#include "vmof/framework.hpp"

namespace vmof {

class MissingCell : public Error {
 public:
  using Error::Error;
};

/// Outcome of one (algorithm, problem, seed) cell.
struct TrialRecord {
  std::string algorithm;
  std::string problem;
  std::size_t d = 0;
  std::size_t m = 0;
  std::size_t N = 0;
  std::uint64_t E = 0;
  std::uint64_t seed = 0;
  double igd = 0.0;
  double hv = 0.0;
  double wall_time_s = 0.0;
  std::string error;  // empty when the cell succeeded
  std::vector<HistoryRecord> history;
  std::vector<Vector> front;  // objectives of the final non-dominated set

  bool ok() const { return error.empty(); }
};

/// Parsed experiment plan. Budget "auto" means min(100 d, 100000).
struct ExperimentPlan {
  std::vector<std::string> problems;
  std::vector<std::string> algorithms{"vmof", "nsga2", "random_search"};
  std::vector<std::uint64_t> seeds;
  std::optional<std::uint64_t> total_budget;  // nullopt: auto
  VmofConfig vmof;                            // also supplies N and variation to baselines

  std::uint64_t budget_for(const Problem& problem) const;
};

/// JSON plan text. Nested "pso"/"variation" objects and dotted keys such
/// as "pso.w" are both accepted; unknown keys are rejected.
ExperimentPlan parse_plan(std::string_view json_text);
ExperimentPlan load_plan(const std::filesystem::path& path);

/// Runs one cell; failures are captured in TrialRecord::error.
TrialRecord run_cell(const ExperimentPlan& plan, const std::string& algorithm,
                     const std::string& problem, std::uint64_t seed);

/// Runs every cell on `workers` threads. on_record is called from the
/// calling thread in plan order (problem, algorithm, seed) as soon as each
/// prefix of cells is complete.
std::vector<TrialRecord> run_experiment(
    const ExperimentPlan& plan, std::size_t workers = 1,
    const std::function<void(const TrialRecord&)>& on_record = {});

// Results CSV: algorithm,problem,d,m,N,E,seed,igd,hv,wall_time_s,status
void write_results_header(std::ostream& out);
void write_result_row(std::ostream& out, const TrialRecord& r);
std::vector<TrialRecord> read_results_csv(const std::filesystem::path& path);

// History CSV: algorithm,problem,seed,phase,iteration,evaluations,igd,hv
void write_history_header(std::ostream& out);
void write_history_rows(std::ostream& out, const TrialRecord& r);

/// Writes the record's final front to dir/<algorithm>__<problem>__<seed>.csv.
std::filesystem::path write_trial_front(const std::filesystem::path& dir, const TrialRecord& r);

struct FrontFile {
  std::string algorithm;
  std::string problem;
  std::uint64_t seed = 0;
  std::vector<Vector> points;  // non-dominated rows only
};

/// Reads every front file in dir (sorted by name) and keeps non-dominated rows.
std::vector<FrontFile> collect_fronts(const std::filesystem::path& dir);

enum class Metric { igd, hv };
Metric parse_metric(std::string_view s);

struct TableRow {
  std::string problem;
  std::vector<std::string> algorithms;  // baseline first
  std::vector<double> medians;
  std::vector<char> marks;              // '\0' for the baseline column
  std::size_t best = 0;                 // column with the best median
  std::optional<double> roc;            // baseline vs best competitor, positive = baseline better
};

/// Median per (problem, algorithm), rank-sum marks of each competitor
/// against the baseline and the baseline's rate of change relative to the
/// best competitor.
std::vector<TableRow> compare_table(const std::vector<TrialRecord>& records,
                                    const std::string& baseline, Metric metric,
                                    double alpha = 0.05);

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows, Metric metric);

struct ScalingPoint {
  std::size_t d = 0;
  double seconds = 0.0;
  std::uint64_t evaluations = 0;
  double seconds_per_eval = 0.0;
};

/// Times one full VMOF iteration (N = 20, 100 evaluations per phase) on
/// sp1 for each dimension.
std::vector<ScalingPoint> bench_scaling(const std::vector<std::size_t>& dims,
                                        std::uint64_t seed = 1);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace vmof
