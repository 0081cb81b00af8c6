#include "vmof/framework.hpp"

#include <cmath>

#include "vmof/benchmarks.hpp"
#include "vmof/dominance.hpp"

namespace vmof {

namespace {
constexpr std::uint64_t kInitStream = 0x1a17;
constexpr std::uint64_t kIterationStream = 0x17e4;
}  // namespace

std::size_t default_population_size(std::size_t n_obj) { return n_obj <= 2 ? 100 : 105; }

std::size_t default_n_d(std::size_t population_size) {
  // N / 4 when it divides evenly, otherwise the divisor of N closest to N / 4.
  if (population_size % 4 == 0) return population_size / 4;
  const double target = static_cast<double>(population_size) / 4.0;
  std::size_t best = 1;
  for (std::size_t k = 1; k <= population_size; ++k) {
    if (population_size % k != 0) continue;
    if (std::fabs(static_cast<double>(k) - target) < std::fabs(static_cast<double>(best) - target))
      best = k;
  }
  return best;
}

VmofConfig VmofConfig::resolved(const Problem& problem) const {
  VmofConfig c = *this;
  if (c.population_size == 0) c.population_size = default_population_size(problem.n_obj);
  if (c.n_d == 0) c.n_d = default_n_d(c.population_size);
  c.sampling.n_d = c.n_d;
  return c;
}

void VmofConfig::validate() const {
  if (population_size == 0) throw ConfigInvalid("population_size must be positive");
  if (n_d == 0 || population_size % n_d != 0)
    throw ConfigInvalid("n_d must divide population_size");
  if (!(phase_fraction > 0.0 && 3.0 * phase_fraction <= 1.0))
    throw ConfigInvalid("phase_fraction must lie in (0, 1/3]");
  if (total_budget < population_size)
    throw ConfigInvalid("total_budget must cover the initial population");
  if (!(init_direction_scale > 0.0)) throw ConfigInvalid("init_direction_scale must be positive");
  if (!(finetune.sigma_frac > 0.0)) throw ConfigInvalid("sigma_frac must be positive");
  if (finetune.representatives_per_group == 0)
    throw ConfigInvalid("representatives_per_group must be positive");
  variation.validate();
}

std::uint64_t VmofConfig::phase_budget() const {
  return static_cast<std::uint64_t>(std::floor(phase_fraction * static_cast<double>(total_budget)));
}

const HistoryRecord* history_at(const std::vector<HistoryRecord>& history,
                                std::uint64_t budget_point) {
  const HistoryRecord* found = nullptr;
  for (const auto& r : history) {
    if (r.evaluations > budget_point) break;
    found = &r;
  }
  return found;
}

namespace {

template <class T>
std::vector<T> flatten(std::vector<std::vector<T>>&& groups) {
  std::vector<T> out;
  for (auto& g : groups)
    for (auto& item : g) out.push_back(std::move(item));
  return out;
}

void merge_elite(std::vector<Solution>& elite, const std::vector<Solution>& incoming,
                 std::size_t n) {
  std::vector<Solution> merged = std::move(elite);
  merged.insert(merged.end(), incoming.begin(), incoming.end());
  elite = environmental_select(std::move(merged), std::min(n, merged.size()));
}

}  // namespace

RunResult vmof_run(const Problem& problem, const VmofConfig& config) {
  problem.validate();
  const VmofConfig cfg = config.resolved(problem);
  cfg.validate();

  const std::size_t n = cfg.population_size;
  const std::uint64_t phase_budget = cfg.phase_budget();
  EvalBudget budget(cfg.total_budget, cfg.phase_fraction);

  MetricTracker tracker = cfg.record_metrics ? MetricTracker(problem) : MetricTracker(Problem{});
  Evaluator::Observer observer;
  if (tracker.enabled()) observer = [&tracker](const Solution& s) { tracker.observe(s.f); };
  const Evaluator eval(problem, budget, observer);
  const InnerOptimizer inner = make_nsga2_optimizer(cfg.variation);

  RunResult result;
  std::size_t iteration = 0;
  auto record = [&](const char* phase) {
    result.history.push_back({phase, iteration, budget.consumed(), tracker.igd(), tracker.hv()});
  };

  Rng init_rng = make_rng(cfg.seed, kInitStream);
  std::vector<Solution> pop = random_population(problem, n, init_rng);
  for (auto& s : pop) s = eval(std::move(s));
  result.initial_objectives = objectives_of(pop);
  std::vector<Direction> dirs = random_directions(problem, n, cfg.init_direction_scale, init_rng);
  std::vector<Solution> elite = pop;

  while (!budget.exhausted()) {
    ++iteration;
    const std::uint64_t it_seed = derive_seed(cfg.seed, kIterationStream, iteration);
    const std::uint64_t start = budget.consumed();

    SamplingResult sampled = evolution_directions_sampling(
        std::move(dirs), std::move(pop), cfg.sampling, phase_budget, inner, eval,
        derive_seed(it_seed, 1));
    record("sampling");
    if (budget.exhausted()) {
      pop = flatten(std::move(sampled.groups.sol_groups));
      dirs = flatten(std::move(sampled.groups.dir_groups));
      merge_elite(elite, pop, n);
      break;
    }

    FinetuneResult tuned =
        evolution_directions_finetuning(sampled.recommended, sampled.groups, cfg.finetune,
                                        phase_budget, inner, eval, derive_seed(it_seed, 2));

    // Group members take their fine-tuned directions; pool members keep the
    // direction that produced them. Truncate the union back to N.
    std::vector<Solution> candidates;
    std::vector<Direction> candidate_dirs;
    for (std::size_t g = 0; g < sampled.groups.group_count(); ++g) {
      auto& sols = sampled.groups.sol_groups[g];
      for (std::size_t j = 0; j < sols.size(); ++j) {
        candidates.push_back(std::move(sols[j]));
        candidate_dirs.push_back(std::move(tuned.dirs[g][j]));
      }
    }
    for (auto& p : tuned.pool) {
      candidates.push_back(std::move(p.solution));
      candidate_dirs.push_back(std::move(p.direction));
    }
    const auto keep = environmental_select_indices(objectives_of(candidates), n);
    pop.clear();
    dirs.clear();
    for (std::size_t k : keep) {
      pop.push_back(std::move(candidates[k]));
      dirs.push_back(std::move(candidate_dirs[k]));
    }
    candidates.clear();
    candidate_dirs.clear();
    merge_elite(elite, pop, n);
    record("finetuning");
    if (budget.exhausted()) break;

    SwarmState swarm = make_swarm(std::move(pop), std::move(dirs));
    directed_pso(swarm, phase_budget, cfg.pso, eval, derive_seed(it_seed, 3));
    pop = std::move(swarm.positions);
    dirs = std::move(swarm.velocities);
    merge_elite(elite, swarm.archive, n);
    merge_elite(elite, pop, n);
    record("optimizer");

    if (budget.consumed() == start) break;
  }

  result.final_pop = std::move(elite);
  result.evaluations = budget.consumed();
  result.iterations = iteration;
  return result;
}

}  // namespace vmof
