#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vmof/core.hpp"
#include "vmof/direction_finetuning.hpp"
#include "vmof/direction_sampling.hpp"
#include "vmof/optimizer.hpp"

namespace vmof {

/// Settings for one VMOF run. population_size and n_d of 0 mean "pick the
/// default for the problem" (100 and 25 for two objectives, 105 and 21 for
/// three).
struct VmofConfig {
  std::size_t population_size = 0;
  std::size_t n_d = 0;
  std::uint64_t total_budget = 100000;
  double phase_fraction = 0.05;
  std::uint64_t seed = 0;
  double init_direction_scale = 0.1;

  SamplingConfig sampling;  // its n_d is overwritten by the field above
  FinetuneConfig finetune;
  PsoParams pso;
  VariationParams variation;

  bool record_metrics = true;

  /// Copy with the problem-dependent defaults filled in.
  VmofConfig resolved(const Problem& problem) const;
  /// Throws ConfigInvalid. Expects a resolved config.
  void validate() const;
  std::uint64_t phase_budget() const;
};

std::size_t default_population_size(std::size_t n_obj);
std::size_t default_n_d(std::size_t population_size);

/// One measurement, taken after every phase (or generation for baselines).
struct HistoryRecord {
  std::string phase;  // "sampling", "finetuning", "optimizer", "generation", "batch"
  std::size_t iteration = 0;
  std::uint64_t evaluations = 0;
  double igd = 0.0;  // NaN when the problem has no analytic front
  double hv = 0.0;
};

struct RunResult {
  std::vector<Solution> final_pop;
  std::vector<HistoryRecord> history;
  std::vector<Vector> initial_objectives;  // the evaluated random start population
  std::uint64_t evaluations = 0;
  std::size_t iterations = 0;
};

/// Random initialization, then {sampling, fine-tuning, particle swarm}
/// phases until the evaluation budget is spent. Directions exported by the
/// swarm seed the next iteration's sampling phase.
RunResult vmof_run(const Problem& problem, const VmofConfig& cfg);

/// Last history record with evaluations <= budget_point, or nullptr.
const HistoryRecord* history_at(const std::vector<HistoryRecord>& history,
                                std::uint64_t budget_point);

}  // namespace vmof
