#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vmof/core.hpp"

namespace vmof {

/// Real-coded variation settings for one NSGA-II generation.
/// A negative mutation_prob means 1/d.
struct VariationParams {
  double crossover_prob = 1.0;
  double crossover_index = 20.0;
  double mutation_prob = -1.0;
  double mutation_index = 20.0;

  void validate() const;
  double mutation_prob_for(std::size_t dim) const {
    return mutation_prob < 0.0 ? 1.0 / static_cast<double>(dim) : mutation_prob;
  }
};

/// Non-owning view of per-coordinate variable bounds.
struct BoundsView {
  std::span<const double> lower;
  std::span<const double> upper;
};

inline BoundsView bounds_of(const Problem& p) { return {p.lower, p.upper}; }

/// Simulated binary crossover (bounded form). Children are written in place
/// of the two inputs.
void sbx_crossover(Vector& a, Vector& b, BoundsView bounds, const VariationParams& params,
                   Rng& rng);

/// Bounded polynomial mutation; coordinates are picked with probability
/// mutation_prob_for(d) by geometric skipping.
void polynomial_mutation(Vector& x, BoundsView bounds, const VariationParams& params, Rng& rng);

/// Turns a candidate vector into an evaluated individual. For solution
/// populations this evaluates the problem; for direction populations it
/// evaluates the solution the direction produces. May throw BudgetExhausted.
using FitnessFn = std::function<Solution(Vector)>;

/// One NSGA-II generation: binary tournament on (rank, crowding), SBX and
/// polynomial mutation, evaluation of every offspring that differs from
/// both parents, then environmental selection back to the input size.
/// Offspring identical to a parent are dropped unevaluated. Budget
/// exhaustion truncates the offspring set.
std::vector<Solution> nsga2_generation(std::vector<Solution> pop, BoundsView bounds,
                                       const VariationParams& params, const FitnessFn& fitness,
                                       Rng& rng);

/// The pluggable evolutionary operator used inside the sampling and
/// fine-tuning phases.
using InnerOptimizer = std::function<std::vector<Solution>(
    std::vector<Solution>, BoundsView, const FitnessFn&, Rng&)>;

InnerOptimizer make_nsga2_optimizer(VariationParams params);

// ---------------------------------------------------------------------------
// Direction-driven particle swarm
// ---------------------------------------------------------------------------

struct PsoParams {
  double w = 0.4;
  double c1 = 2.0;
  double c2 = 2.0;
};

struct SwarmState {
  std::vector<Solution> positions;
  std::vector<Direction> velocities;
  std::vector<Solution> pbest;
  std::vector<Solution> archive;  // mutually non-dominated, at most N members
};

/// Swarm whose velocities are the given directions; pbest = positions and
/// the archive is the non-dominated subset of the positions.
SwarmState make_swarm(std::vector<Solution> positions, std::vector<Direction> velocities);

/// Merges candidates into a non-dominated archive, dropping exact objective
/// duplicates, then truncates to capacity by crowding distance.
void update_archive(std::vector<Solution>& archive, const std::vector<Solution>& candidates,
                    std::size_t capacity);

/// Runs inertia-weight PSO sweeps until phase_budget evaluations have been
/// spent (a started sweep is finished) or the global budget runs out. The
/// final velocities are the directions exported to the next iteration.
/// Particle RNG streams derive from (seed, sweep, particle).
void directed_pso(SwarmState& state, std::uint64_t phase_budget, const PsoParams& params,
                  const Evaluator& eval, std::uint64_t seed);

}  // namespace vmof
