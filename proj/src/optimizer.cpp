#include "vmof/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "vmof/dominance.hpp"

namespace vmof {

void VariationParams::validate() const {
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0))
    throw ConfigInvalid("crossover_prob must lie in [0, 1]");
  if (mutation_prob > 1.0) throw ConfigInvalid("mutation_prob must lie in [0, 1]");
  if (!(crossover_index > 0.0) || !(mutation_index > 0.0))
    throw ConfigInvalid("distribution indices must be positive");
}

void sbx_crossover(Vector& a, Vector& b, BoundsView bounds, const VariationParams& params,
                   Rng& rng) {
  const double eta = params.crossover_index;
  const double exponent = 1.0 / (eta + 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (uniform01(rng) > 0.5) continue;
    if (std::fabs(a[i] - b[i]) <= 1e-14) continue;
    const double yl = bounds.lower[i];
    const double yu = bounds.upper[i];
    if (!(yu > yl)) continue;
    // Parents outside the box (e.g. velocities used as directions) are
    // projected first; the spread formula needs yl <= y1 <= y2 <= yu.
    const double y1 = std::clamp(std::min(a[i], b[i]), yl, yu);
    const double y2 = std::clamp(std::max(a[i], b[i]), yl, yu);
    if (y2 - y1 <= 1e-14) continue;
    const double u = uniform01(rng);

    auto spread = [&](double beta) {
      const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
      return u <= 1.0 / alpha ? std::pow(u * alpha, exponent)
                              : std::pow(1.0 / (2.0 - u * alpha), exponent);
    };
    const double bq1 = spread(1.0 + 2.0 * (y1 - yl) / (y2 - y1));
    const double bq2 = spread(1.0 + 2.0 * (yu - y2) / (y2 - y1));
    double c1 = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), yl, yu);
    double c2 = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), yl, yu);
    if (uniform01(rng) <= 0.5) std::swap(c1, c2);
    a[i] = c1;
    b[i] = c2;
  }
}

namespace {

void mutate_coordinate(double& y, double yl, double yu, double eta, Rng& rng) {
  if (!(yu > yl)) return;
  y = std::clamp(y, yl, yu);
  const double delta1 = (y - yl) / (yu - yl);
  const double delta2 = (yu - y) / (yu - yl);
  const double mut_pow = 1.0 / (eta + 1.0);
  const double u = uniform01(rng);
  double deltaq;
  if (u < 0.5) {
    const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - delta1, eta + 1.0);
    deltaq = std::pow(val, mut_pow) - 1.0;
  } else {
    const double val =
        2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - delta2, eta + 1.0);
    deltaq = 1.0 - std::pow(val, mut_pow);
  }
  y = std::clamp(y + deltaq * (yu - yl), yl, yu);
}

}  // namespace

void polynomial_mutation(Vector& x, BoundsView bounds, const VariationParams& params, Rng& rng) {
  const double pm = params.mutation_prob_for(x.size());
  if (pm <= 0.0 || x.empty()) return;
  if (pm >= 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i)
      mutate_coordinate(x[i], bounds.lower[i], bounds.upper[i], params.mutation_index, rng);
    return;
  }
  std::geometric_distribution<std::size_t> gap(pm);
  for (std::size_t i = gap(rng); i < x.size(); i += 1 + gap(rng))
    mutate_coordinate(x[i], bounds.lower[i], bounds.upper[i], params.mutation_index, rng);
}

std::vector<Solution> nsga2_generation(std::vector<Solution> pop, BoundsView bounds,
                                       const VariationParams& params, const FitnessFn& fitness,
                                       Rng& rng) {
  const std::size_t n = pop.size();
  if (n == 0) return pop;
  const RankCrowding rc = rank_and_crowding(objectives_of(pop));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  auto tournament = [&] {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    const bool j_better = rc.rank[j] < rc.rank[i] ||
                          (rc.rank[j] == rc.rank[i] && rc.crowding[j] > rc.crowding[i]);
    return j_better ? j : i;
  };

  std::vector<Solution> offspring;
  offspring.reserve(n);
  std::size_t produced = 0;
  bool exhausted = false;
  while (produced < n && !exhausted) {
    const std::size_t p1 = tournament();
    const std::size_t p2 = tournament();
    Vector c1 = pop[p1].x;
    Vector c2 = pop[p2].x;
    if (uniform01(rng) < params.crossover_prob) sbx_crossover(c1, c2, bounds, params, rng);
    polynomial_mutation(c1, bounds, params, rng);
    polynomial_mutation(c2, bounds, params, rng);
    for (Vector* child : {&c1, &c2}) {
      if (produced == n) break;
      ++produced;
      if (*child == pop[p1].x || *child == pop[p2].x) continue;
      try {
        offspring.push_back(fitness(std::move(*child)));
      } catch (const BudgetExhausted&) {
        exhausted = true;
        break;
      }
    }
  }

  for (auto& s : offspring) pop.push_back(std::move(s));
  return environmental_select(std::move(pop), n);
}

InnerOptimizer make_nsga2_optimizer(VariationParams params) {
  params.validate();
  return [params](std::vector<Solution> pop, BoundsView bounds, const FitnessFn& fitness,
                  Rng& rng) {
    return nsga2_generation(std::move(pop), bounds, params, fitness, rng);
  };
}

SwarmState make_swarm(std::vector<Solution> positions, std::vector<Direction> velocities) {
  if (positions.size() != velocities.size())
    throw DimensionMismatch("swarm needs one velocity per particle");
  SwarmState s;
  s.pbest = positions;
  update_archive(s.archive, positions, positions.size());
  s.positions = std::move(positions);
  s.velocities = std::move(velocities);
  return s;
}

void update_archive(std::vector<Solution>& archive, const std::vector<Solution>& candidates,
                    std::size_t capacity) {
  // Objectives of archive members first, then fresh candidates.
  std::vector<Vector> objs = objectives_of(archive);
  std::vector<std::size_t> source;  // candidate index, or npos for archive members
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  source.assign(archive.size(), npos);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto& f = candidates[c].f;
    if (std::find(objs.begin(), objs.end(), f) != objs.end()) continue;
    objs.push_back(f);
    source.push_back(c);
  }

  std::vector<std::size_t> keep = nondominated_indices(objs);
  if (keep.size() > capacity) {
    std::vector<Vector> sub;
    sub.reserve(keep.size());
    for (std::size_t k : keep) sub.push_back(objs[k]);
    const auto chosen = environmental_select_indices(sub, capacity);
    std::vector<std::size_t> mapped;
    mapped.reserve(chosen.size());
    for (std::size_t c : chosen) mapped.push_back(keep[c]);
    keep = std::move(mapped);
  }

  std::vector<Solution> next;
  next.reserve(keep.size());
  for (std::size_t k : keep) {
    if (source[k] == npos)
      next.push_back(std::move(archive[k]));
    else
      next.push_back(candidates[source[k]]);
  }
  archive = std::move(next);
}

void directed_pso(SwarmState& state, std::uint64_t phase_budget, const PsoParams& params,
                  const Evaluator& eval, std::uint64_t seed) {
  const std::size_t n = state.positions.size();
  if (n == 0) return;
  const Problem& problem = eval.problem();
  EvalBudget& budget = eval.budget();
  const std::uint64_t start = budget.consumed();

  bool stopped = false;
  for (std::uint64_t sweep = 0; !stopped && budget.consumed() - start < phase_budget; ++sweep) {
    if (budget.exhausted()) break;
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = make_rng(seed, sweep, i);
      const double r1 = uniform01(rng);
      const double r2 = uniform01(rng);
      const Solution& guide =
          state.archive.empty()
              ? state.pbest[i]
              : state.archive[std::uniform_int_distribution<std::size_t>(
                    0, state.archive.size() - 1)(rng)];

      const Vector& x = state.positions[i].x;
      const Vector& pb = state.pbest[i].x;
      Vector v = state.velocities[i].v;
      Vector next(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        v[k] = params.w * v[k] + params.c1 * r1 * (pb[k] - x[k]) +
               params.c2 * r2 * (guide.x[k] - x[k]);
        next[k] = std::clamp(x[k] + v[k], problem.lower[k], problem.upper[k]);
      }

      Solution moved;
      try {
        moved = eval(std::move(next));
      } catch (const BudgetExhausted&) {
        stopped = true;
        break;
      }
      state.velocities[i].v = std::move(v);

      const bool replace = dominates(moved.f, state.pbest[i].f) ||
                           (!dominates(state.pbest[i].f, moved.f) && uniform01(rng) < 0.5);
      if (replace) state.pbest[i] = moved;
      state.positions[i] = std::move(moved);
    }
    update_archive(state.archive, state.positions, n);
  }
}

}  // namespace vmof
