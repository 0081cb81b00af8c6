#include "vmof/direction_finetuning.hpp"

#include <algorithm>

#include "vmof/dominance.hpp"

namespace vmof {

namespace {

constexpr std::uint64_t kFinetuneStream = 0xf17e;

// Drops pool entries dominated by at least `limit` other entries. Such a
// point always has `limit` better-ranked competitors, so it can never
// survive an environmental selection of size `limit` over any superset.
void prune_pool(std::vector<ProducedSolution>& pool, std::size_t limit) {
  const std::size_t n = pool.size();
  std::vector<std::size_t> dominated_count(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && dominates(pool[j].solution.f, pool[i].solution.f)) ++dominated_count[i];
  std::vector<ProducedSolution> kept;
  kept.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (dominated_count[i] < limit) kept.push_back(std::move(pool[i]));
  pool = std::move(kept);
}

}  // namespace

std::vector<std::size_t> select_representatives(const std::vector<Solution>& group,
                                                std::size_t k) {
  return environmental_select_indices(objectives_of(group), std::min(k, group.size()));
}

std::vector<Direction> init_direction_population(const Direction& d_k, std::size_t n_di,
                                                 double sigma_frac, const Problem& problem,
                                                 Rng& rng) {
  std::vector<Direction> out;
  out.reserve(n_di);
  if (n_di == 0) return out;
  out.push_back(d_k);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t j = 1; j < n_di; ++j) {
    Direction d = d_k;
    for (std::size_t i = 0; i < d.v.size(); ++i) d.v[i] += sigma_frac * problem.range(i) * normal(rng);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Direction> FinetuneResult::flat_directions() const {
  std::vector<Direction> out;
  for (const auto& g : dirs) out.insert(out.end(), g.begin(), g.end());
  return out;
}

FinetuneResult evolution_directions_finetuning(const std::vector<Direction>& recommended,
                                               const GroupedSets& groups,
                                               const FinetuneConfig& cfg,
                                               std::uint64_t phase_budget,
                                               const InnerOptimizer& inner, const Evaluator& eval,
                                               std::uint64_t seed) {
  const std::size_t n_d = recommended.size();
  if (groups.group_count() != n_d)
    throw DimensionMismatch("one recommended direction per group is required");
  const Problem& problem = eval.problem();
  EvalBudget& budget = eval.budget();

  FinetuneResult out;
  out.dirs.resize(n_d);
  std::size_t population_size = 0;
  for (const auto& g : groups.sol_groups) population_size += g.size();

  if (!cfg.enabled) {
    for (std::size_t g = 0; g < n_d; ++g)
      out.dirs[g].assign(groups.sol_groups[g].size(), recommended[g]);
    return out;
  }

  // Directions vary inside [-range, +range].
  Vector dir_lower(problem.dim), dir_upper(problem.dim);
  for (std::size_t i = 0; i < problem.dim; ++i) {
    dir_upper[i] = problem.range(i);
    dir_lower[i] = -dir_upper[i];
  }
  const BoundsView dir_bounds{dir_lower, dir_upper};
  std::size_t prune_at = std::max<std::size_t>(4 * population_size, 64);
  const std::uint64_t pair_budget = phase_budget / n_d;

  for (std::size_t g = 0; g < n_d; ++g) {
    const auto& group = groups.sol_groups[g];
    const std::size_t n_di = group.size();
    const auto reps = select_representatives(
        group, std::max<std::size_t>(1, cfg.representatives_per_group));
    const std::uint64_t rep_budget = pair_budget / reps.size();

    std::vector<Solution> finals;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const Solution& rep = group[reps[r]];
      Rng rng = make_rng(seed, kFinetuneStream, g * 1024 + r);
      const FitnessFn fitness = [&](Vector v) {
        Solution produced = eval(apply_direction(rep.x, v, problem));
        Solution member;
        member.f = produced.f;
        member.eval_id = produced.eval_id;
        member.x = v;
        out.pool.push_back({std::move(produced), Direction{std::move(v)}});
        if (out.pool.size() >= prune_at) {
          prune_pool(out.pool, population_size);
          prune_at = std::max(prune_at, 2 * out.pool.size());
        }
        return member;
      };

      const std::uint64_t rep_start = budget.consumed();
      auto init = init_direction_population(recommended[g], n_di, cfg.sigma_frac, problem, rng);
      std::vector<Solution> members;
      bool complete = true;
      for (auto& d : init) {
        if (complete) {
          try {
            members.push_back(fitness(d.v));
            continue;
          } catch (const BudgetExhausted&) {
            complete = false;
          }
        }
        Solution unevaluated;
        unevaluated.x = std::move(d.v);
        members.push_back(std::move(unevaluated));
      }

      while (complete && !budget.exhausted() && budget.consumed() - rep_start < rep_budget) {
        const std::uint64_t before = budget.consumed();
        members = inner(std::move(members), dir_bounds, fitness, rng);
        if (budget.consumed() == before) break;
      }

      out.populations.push_back({recommended[g], members});
      finals.insert(finals.end(), std::make_move_iterator(members.begin()),
                    std::make_move_iterator(members.end()));
    }

    if (finals.size() > n_di) {
      const bool all_evaluated = std::all_of(finals.begin(), finals.end(),
                                             [](const Solution& s) { return s.evaluated(); });
      if (all_evaluated) finals = environmental_select(std::move(finals), n_di);
      finals.resize(n_di);
    }
    for (auto& m : finals) out.dirs[g].push_back(Direction{std::move(m.x)});
  }
  return out;
}

}  // namespace vmof
