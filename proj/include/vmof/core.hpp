#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmof {

using Vector = std::vector<double>;
using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExhausted : public Error {
 public:
  BudgetExhausted() : Error("evaluation budget exhausted") {}
};

class NonFiniteObjective : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class OutOfBounds : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer; used to derive independent child streams.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for the stream identified by (seed, a, b). Distinct tuples give
/// statistically independent streams, so work split across workers draws
/// the same numbers regardless of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return Rng(derive_seed(seed, a, b));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// A box-constrained multiobjective minimization problem.
struct Problem {
  std::string name;
  std::size_t dim = 0;
  std::size_t n_obj = 0;
  Vector lower;
  Vector upper;
  /// Pure and thread-safe.
  std::function<Vector(std::span<const double>)> evaluate;
  /// Analytic Pareto-front sample of (about) k points; empty when unknown.
  std::function<std::vector<Vector>(std::size_t)> pf_sampler;
  /// Hypervolume reference point; empty means "derive from the front".
  Vector hv_reference;

  double range(std::size_t i) const { return upper[i] - lower[i]; }
  bool has_front() const { return static_cast<bool>(pf_sampler); }

  /// Throws ConfigInvalid when the box or sizes are malformed.
  void validate() const;
};

/// Decision vector plus cached objectives. eval_id == 0 means unevaluated.
struct Solution {
  Vector x;
  Vector f;
  std::uint64_t eval_id = 0;

  bool evaluated() const { return eval_id > 0; }
};

/// Displacement in decision space, in problem units.
struct Direction {
  Vector v;
};

/// Global function-evaluation ledger. consumed never exceeds total; the
/// counter is atomic so concurrent evaluators can share one budget.
class EvalBudget {
 public:
  explicit EvalBudget(std::uint64_t total, double phase_fraction = 0.05);

  EvalBudget(const EvalBudget&) = delete;
  EvalBudget& operator=(const EvalBudget&) = delete;

  std::uint64_t total() const { return total_; }
  std::uint64_t consumed() const { return consumed_.load(); }
  std::uint64_t remaining() const { return total_ - consumed(); }
  bool exhausted() const { return remaining() == 0; }
  double phase_fraction() const { return phase_fraction_; }
  /// floor(phase_fraction * total)
  std::uint64_t phase_budget() const;

  /// Reserves one evaluation and returns its 1-based sequence number.
  /// Throws BudgetExhausted when nothing is left.
  std::uint64_t acquire();

 private:
  std::uint64_t total_;
  double phase_fraction_;
  std::atomic<std::uint64_t> consumed_{0};
};

/// Evaluates s.x against the budget. Consumes exactly one evaluation.
Solution evaluate_solution(const Problem& problem, Solution s, EvalBudget& budget);

/// Problem + budget + an optional observer that sees every evaluated
/// solution. Phases take one of these instead of the three pieces.
class Evaluator {
 public:
  using Observer = std::function<void(const Solution&)>;

  Evaluator(const Problem& problem, EvalBudget& budget, Observer observer = {})
      : problem_(&problem), budget_(&budget), observer_(std::move(observer)) {}

  const Problem& problem() const { return *problem_; }
  EvalBudget& budget() const { return *budget_; }

  Solution operator()(Vector x) const;
  Solution operator()(Solution s) const;

 private:
  const Problem* problem_;
  EvalBudget* budget_;
  Observer observer_;
};

Vector clamp_to_bounds(std::span<const double> x, const Problem& problem);
void clamp_in_place(Vector& x, const Problem& problem);

/// x + v projected onto the box.
Vector apply_direction(std::span<const double> x, std::span<const double> v,
                       const Problem& problem);

/// Uniform samples in the box; returned solutions are unevaluated.
std::vector<Solution> random_population(const Problem& problem, std::size_t n, Rng& rng);

/// Coordinates uniform in +-scale * (upper - lower).
std::vector<Direction> random_directions(const Problem& problem, std::size_t n,
                                         double scale, Rng& rng);

std::vector<Vector> objectives_of(const std::vector<Solution>& pop);

}  // namespace vmof
