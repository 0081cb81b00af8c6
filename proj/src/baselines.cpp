#include "vmof/baselines.hpp"

#include "vmof/benchmarks.hpp"
#include "vmof/dominance.hpp"

namespace vmof {

namespace {

constexpr std::uint64_t kNsga2Stream = 0x2a5a;

struct Instrumented {
  EvalBudget budget;
  MetricTracker tracker;
  Evaluator eval;

  Instrumented(const Problem& problem, const BaselineConfig& cfg)
      : budget(cfg.total_budget),
        tracker(cfg.record_metrics ? MetricTracker(problem) : MetricTracker(Problem{})),
        eval(problem, budget, observer()) {}

  Evaluator::Observer observer() {
    return [this](const Solution& s) {
      if (tracker.enabled()) tracker.observe(s.f);
    };
  }

  HistoryRecord record(const char* phase, std::size_t iteration) const {
    return {phase, iteration, budget.consumed(), tracker.igd(), tracker.hv()};
  }
};

std::size_t population_for(const Problem& problem, const BaselineConfig& cfg) {
  const std::size_t n =
      cfg.population_size ? cfg.population_size : default_population_size(problem.n_obj);
  if (cfg.total_budget < n) throw ConfigInvalid("total_budget must cover the initial population");
  return n;
}

}  // namespace

RunResult nsga2_run(const Problem& problem, const BaselineConfig& cfg) {
  problem.validate();
  cfg.variation.validate();
  const std::size_t n = population_for(problem, cfg);
  Instrumented inst(problem, cfg);
  Rng rng = make_rng(cfg.seed, kNsga2Stream);

  std::vector<Solution> pop = random_population(problem, n, rng);
  for (auto& s : pop) s = inst.eval(std::move(s));

  RunResult result;
  const FitnessFn fitness = [&inst](Vector x) { return inst.eval(std::move(x)); };
  std::size_t generation = 0;
  while (!inst.budget.exhausted()) {
    ++generation;
    const std::uint64_t before = inst.budget.consumed();
    pop = nsga2_generation(std::move(pop), bounds_of(problem), cfg.variation, fitness, rng);
    result.history.push_back(inst.record("generation", generation));
    if (inst.budget.consumed() == before) break;
  }
  result.final_pop = std::move(pop);
  result.evaluations = inst.budget.consumed();
  result.iterations = generation;
  return result;
}

RunResult random_search_run(const Problem& problem, const BaselineConfig& cfg) {
  problem.validate();
  const std::size_t n = population_for(problem, cfg);
  Instrumented inst(problem, cfg);
  Rng rng = make_rng(cfg.seed, kRandomSearchStream);

  RunResult result;
  std::vector<Solution> front;
  std::size_t batch = 0;
  while (!inst.budget.exhausted()) {
    ++batch;
    const std::size_t take =
        static_cast<std::size_t>(std::min<std::uint64_t>(n, inst.budget.remaining()));
    auto samples = random_population(problem, take, rng);
    for (auto& s : samples) front.push_back(inst.eval(std::move(s)));
    const auto keep = nondominated_indices(objectives_of(front));
    std::vector<Solution> next;
    next.reserve(keep.size());
    for (std::size_t k : keep) next.push_back(std::move(front[k]));
    front = std::move(next);
    result.history.push_back(inst.record("batch", batch));
  }
  result.final_pop = std::move(front);
  result.evaluations = inst.budget.consumed();
  result.iterations = batch;
  return result;
}

}  // namespace vmof
