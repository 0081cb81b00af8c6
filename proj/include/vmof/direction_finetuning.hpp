#pragma once

#include <cstdint>
#include <vector>

#include "vmof/core.hpp"
#include "vmof/direction_sampling.hpp"
#include "vmof/optimizer.hpp"

namespace vmof {

struct FinetuneConfig {
  bool enabled = true;  // false: every solution of a group receives the recommendation
  std::size_t representatives_per_group = 1;
  double sigma_frac = 0.05;
};

/// Members of a direction population: x holds the direction, f the
/// objectives of the solution it produced from the representative.
struct DirectionPopulation {
  Direction base;
  std::vector<Solution> members;
};

/// A solution produced during fine-tuning and the direction that produced it.
struct ProducedSolution {
  Solution solution;
  Direction direction;
};

/// Top-k by (front rank, crowding distance desc, index). Returns indices
/// into group.
std::vector<std::size_t> select_representatives(const std::vector<Solution>& group, std::size_t k);

/// Member 0 is d_k itself; the others add zero-mean Gaussian noise with
/// per-coordinate standard deviation sigma_frac * (upper - lower).
std::vector<Direction> init_direction_population(const Direction& d_k, std::size_t n_di,
                                                 double sigma_frac, const Problem& problem,
                                                 Rng& rng);

struct FinetuneResult {
  std::vector<std::vector<Direction>> dirs;  // per group, n_di each
  std::vector<ProducedSolution> pool;
  std::vector<DirectionPopulation> populations;  // final population per (group, representative)

  /// Flattened in group order (n_d * n_di directions).
  std::vector<Direction> flat_directions() const;
};

/// Expands each recommended direction into a direction population, evolves
/// it with the inner optimizer against the group's representative, and
/// returns n_di fine-tuned directions per group plus every solution
/// produced on the way.
FinetuneResult evolution_directions_finetuning(const std::vector<Direction>& recommended,
                                               const GroupedSets& groups,
                                               const FinetuneConfig& cfg,
                                               std::uint64_t phase_budget,
                                               const InnerOptimizer& inner, const Evaluator& eval,
                                               std::uint64_t seed);

}  // namespace vmof
