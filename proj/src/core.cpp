#include "vmof/core.hpp"

#include <algorithm>
#include <cmath>

namespace vmof {

void Problem::validate() const {
  if (dim == 0) throw ConfigInvalid("problem dimension must be positive");
  if (n_obj < 2) throw ConfigInvalid("problem needs at least two objectives");
  if (lower.size() != dim || upper.size() != dim)
    throw ConfigInvalid("bound vectors must have length dim");
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(lower[i] < upper[i]))
      throw ConfigInvalid("lower bound must be strictly below upper bound");
  }
  if (!evaluate) throw ConfigInvalid("problem has no evaluation function");
}

EvalBudget::EvalBudget(std::uint64_t total, double phase_fraction)
    : total_(total), phase_fraction_(phase_fraction) {
  if (!(phase_fraction > 0.0 && phase_fraction <= 1.0))
    throw ConfigInvalid("phase fraction must lie in (0, 1]");
}

std::uint64_t EvalBudget::phase_budget() const {
  return static_cast<std::uint64_t>(std::floor(phase_fraction_ * static_cast<double>(total_)));
}

std::uint64_t EvalBudget::acquire() {
  std::uint64_t cur = consumed_.load();
  do {
    if (cur >= total_) throw BudgetExhausted();
  } while (!consumed_.compare_exchange_weak(cur, cur + 1));
  return cur + 1;
}

Solution evaluate_solution(const Problem& problem, Solution s, EvalBudget& budget) {
  const std::uint64_t id = budget.acquire();
  s.f = problem.evaluate(s.x);
  if (s.f.size() != problem.n_obj)
    throw DimensionMismatch("objective vector length differs from n_obj");
  for (double v : s.f) {
    if (!std::isfinite(v)) throw NonFiniteObjective("objective value is not finite");
  }
  s.eval_id = id;
  return s;
}

Solution Evaluator::operator()(Vector x) const {
  Solution s;
  s.x = std::move(x);
  return (*this)(std::move(s));
}

Solution Evaluator::operator()(Solution s) const {
  Solution out = evaluate_solution(*problem_, std::move(s), *budget_);
  if (observer_) observer_(out);
  return out;
}

Vector clamp_to_bounds(std::span<const double> x, const Problem& problem) {
  Vector out(x.begin(), x.end());
  clamp_in_place(out, problem);
  return out;
}

void clamp_in_place(Vector& x, const Problem& problem) {
  if (x.size() != problem.dim) throw DimensionMismatch("vector length differs from dim");
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::clamp(x[i], problem.lower[i], problem.upper[i]);
}

Vector apply_direction(std::span<const double> x, std::span<const double> v,
                       const Problem& problem) {
  if (x.size() != problem.dim || v.size() != problem.dim)
    throw DimensionMismatch("vector length differs from dim");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = std::clamp(x[i] + v[i], problem.lower[i], problem.upper[i]);
  return out;
}

std::vector<Solution> random_population(const Problem& problem, std::size_t n, Rng& rng) {
  std::vector<Solution> pop(n);
  for (auto& s : pop) {
    s.x.resize(problem.dim);
    for (std::size_t i = 0; i < problem.dim; ++i)
      s.x[i] = problem.lower[i] + uniform01(rng) * (problem.upper[i] - problem.lower[i]);
  }
  return pop;
}

std::vector<Direction> random_directions(const Problem& problem, std::size_t n,
                                         double scale, Rng& rng) {
  std::vector<Direction> dirs(n);
  for (auto& d : dirs) {
    d.v.resize(problem.dim);
    for (std::size_t i = 0; i < problem.dim; ++i) {
      const double half = scale * problem.range(i);
      d.v[i] = (2.0 * uniform01(rng) - 1.0) * half;
    }
  }
  return dirs;
}

std::vector<Vector> objectives_of(const std::vector<Solution>& pop) {
  std::vector<Vector> out;
  out.reserve(pop.size());
  for (const auto& s : pop) out.push_back(s.f);
  return out;
}

}  // namespace vmof
