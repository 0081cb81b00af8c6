#include "vmof/direction_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vmof/dominance.hpp"

namespace vmof {

namespace {
constexpr std::uint64_t kPartitionStream = 0x70a1;
constexpr std::uint64_t kGroupStream = 0x70a2;
}  // namespace

Vector beta_sample_mean(const BetaArms& arms, Rng& rng) {
  Vector theta(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    std::gamma_distribution<double> ga(arms.alpha[i], 1.0);
    std::gamma_distribution<double> gb(arms.beta[i], 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    double t = x / (x + y);
    if (!(t > 0.0)) t = std::nextafter(0.0, 1.0);
    if (!(t < 1.0)) t = std::nextafter(1.0, 0.0);
    theta[i] = t;
  }
  return theta;
}

void credit_arm(BetaArms& arms, std::size_t arm, bool reward, double cap) {
  if (arm >= arms.size()) throw DimensionMismatch("arm index out of range");
  if (cap > 0.0 && arms.alpha[arm] + arms.beta[arm] >= cap) {
    const double s = cap / (cap + 1.0);
    arms.alpha[arm] *= s;
    arms.beta[arm] *= s;
  }
  const double r = reward ? 1.0 : 0.0;
  arms.alpha[arm] += r;
  arms.beta[arm] += 1.0 - r;
}

void parameter_update(BetaArms& arms, std::span<const std::uint8_t> flags, double cap) {
  if (flags.size() != arms.size())
    throw DimensionMismatch("one reward flag per arm is required");
  for (std::size_t i = 0; i < flags.size(); ++i) credit_arm(arms, i, flags[i] != 0, cap);
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

std::vector<std::vector<std::size_t>> partition_random(std::size_t n_items, std::size_t n_groups,
                                                       Rng& rng) {
  if (n_groups == 0 || n_items == 0 || n_items % n_groups != 0)
    throw IndivisibleGrouping("group count must divide the item count");
  std::vector<std::size_t> perm(n_items);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::size_t size = n_items / n_groups;
  std::vector<std::vector<std::size_t>> groups(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g)
    groups[g].assign(perm.begin() + static_cast<std::ptrdiff_t>(g * size),
                     perm.begin() + static_cast<std::ptrdiff_t>((g + 1) * size));
  return groups;
}

RewardMode parse_reward_mode(std::string_view s) {
  if (s == "front") return RewardMode::front;
  if (s == "pairwise") return RewardMode::pairwise;
  if (s == "bypass") return RewardMode::bypass;
  throw ConfigInvalid("unknown reward_mode: " + std::string(s));
}

BudgetSplit parse_budget_split(std::string_view s) {
  if (s == "even") return BudgetSplit::even;
  if (s == "shared") return BudgetSplit::shared;
  throw ConfigInvalid("unknown budget_split: " + std::string(s));
}

std::string_view to_string(RewardMode m) {
  switch (m) {
    case RewardMode::front: return "front";
    case RewardMode::pairwise: return "pairwise";
    case RewardMode::bypass: return "bypass";
  }
  return "front";
}

std::string_view to_string(BudgetSplit s) {
  return s == BudgetSplit::even ? "even" : "shared";
}

SamplingResult evolution_directions_sampling(std::vector<Direction> dirs,
                                             std::vector<Solution> sols,
                                             const SamplingConfig& cfg,
                                             std::uint64_t phase_budget,
                                             const InnerOptimizer& inner, const Evaluator& eval,
                                             std::uint64_t seed) {
  if (dirs.size() != sols.size())
    throw DimensionMismatch("directions and solutions must pair one to one");
  const Problem& problem = eval.problem();
  EvalBudget& budget = eval.budget();

  Rng part_rng = make_rng(seed, kPartitionStream);
  SamplingResult out;
  out.groups.members = partition_random(sols.size(), cfg.n_d, part_rng);
  for (const auto& idx : out.groups.members) {
    std::vector<Direction> dg;
    std::vector<Solution> sg;
    for (std::size_t i : idx) {
      dg.push_back(std::move(dirs[i]));
      sg.push_back(std::move(sols[i]));
    }
    out.groups.dir_groups.push_back(std::move(dg));
    out.groups.sol_groups.push_back(std::move(sg));
  }

  const FitnessFn fitness = [&eval](Vector x) { return eval(std::move(x)); };
  const std::uint64_t phase_start = budget.consumed();
  const std::uint64_t share = phase_budget / cfg.n_d;

  for (std::size_t g = 0; g < cfg.n_d; ++g) {
    Rng rng = make_rng(seed, kGroupStream, g);
    auto& gdirs = out.groups.dir_groups[g];
    auto& gsols = out.groups.sol_groups[g];
    BetaArms arms(gdirs.size());
    const std::uint64_t group_start = budget.consumed();

    auto has_budget = [&] {
      if (budget.exhausted()) return false;
      if (cfg.budget_split == BudgetSplit::shared)
        return budget.consumed() - phase_start < phase_budget;
      return budget.consumed() - group_start < share;
    };

    while (has_budget()) {
      std::vector<Solution> moved;
      moved.reserve(gsols.size());
      try {
        for (std::size_t j = 0; j < gsols.size(); ++j)
          moved.push_back(eval(apply_direction(gsols[j].x, gdirs[j].v, problem)));
      } catch (const BudgetExhausted&) {
        break;
      }

      std::vector<std::uint8_t> flags;
      if (cfg.reward_mode == RewardMode::pairwise) {
        flags.resize(moved.size());
        for (std::size_t j = 0; j < moved.size(); ++j)
          flags[j] = dominates(moved[j].f, gsols[j].f) ? 1 : 0;
      } else {
        flags = first_front_flags(objectives_of(moved));
      }
      parameter_update(arms, flags, cfg.dts_cap);

      gsols = inner(std::move(moved), bounds_of(problem), fitness, rng);
    }

    const Vector theta = beta_sample_mean(arms, rng);
    std::size_t k = argmax(theta);
    if (cfg.reward_mode == RewardMode::bypass)
      k = std::uniform_int_distribution<std::size_t>(0, gdirs.size() - 1)(rng);
    out.recommended.push_back(gdirs[k]);
    out.recommended_index.push_back(k);
    out.posteriors.push_back(std::move(arms));
  }
  return out;
}

}  // namespace vmof
