#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "../bandit.hpp"
#include "vmof/benchmarks.hpp"
#include "vmof/direction_sampling.hpp"

using namespace vmof;

namespace {

double mean_of_draws(double a, double b, int n, std::uint64_t seed) {
  BetaArms arms(1);
  arms.alpha[0] = a;
  arms.beta[0] = b;
  Rng rng(seed);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = beta_sample_mean(arms, rng)[0];
    REQUIRE(t > 0.0);
    REQUIRE(t < 1.0);
    s += t;
  }
  return s / n;
}

}  // namespace

TEST_CASE("beta draws have the right means") {
  CHECK(mean_of_draws(1, 1, 100000, 1) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::fabs(mean_of_draws(3, 1, 100000, 2) - 0.75) < 0.01);
  CHECK(std::fabs(mean_of_draws(1, 1, 100000, 3) - 0.5) < 0.01);
}

TEST_CASE("a strong posterior beats a weak one") {
  BetaArms arms(2);
  arms.alpha = {100, 1};
  arms.beta = {1, 100};
  Rng rng(4);
  int wins = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto t = beta_sample_mean(arms, rng);
    wins += t[0] > t[1];
  }
  CHECK(wins >= 9900);
}

TEST_CASE("parameter_update examples") {
  BetaArms arms(2);
  parameter_update(arms, std::vector<std::uint8_t>{1, 0});
  CHECK(arms.alpha == Vector{2, 1});
  CHECK(arms.beta == Vector{1, 2});

  BetaArms zeros(3);
  parameter_update(zeros, std::vector<std::uint8_t>{0, 0, 0});
  CHECK(zeros.alpha == Vector{1, 1, 1});
  CHECK(zeros.beta == Vector{2, 2, 2});

  BetaArms rep(2);
  for (int t = 0; t < 17; ++t) parameter_update(rep, std::vector<std::uint8_t>{0, 1});
  CHECK(rep.alpha[1] == 18);
  CHECK(rep.beta[1] == 1);

  CHECK_THROWS_AS(parameter_update(rep, std::vector<std::uint8_t>{1}), DimensionMismatch);
}

TEST_CASE("posterior mass grows by the group size per round") {
  Rng rng(8);
  BetaArms arms(4);
  double mass = 8.0;
  for (int t = 0; t < 200; ++t) {
    std::vector<std::uint8_t> flags(4);
    for (auto& f : flags) f = rng() % 2;
    parameter_update(arms, flags);
    double now = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(arms.alpha[i] >= 1.0);
      CHECK(arms.beta[i] >= 1.0);
      now += arms.alpha[i] + arms.beta[i];
    }
    CHECK(now == mass + 4.0);
    mass = now;
  }
  for (std::size_t i = 0; i < 4; ++i) CHECK(arms.alpha[i] + arms.beta[i] - 2.0 == 200.0);
}

TEST_CASE("capped update keeps the posterior bounded") {
  BetaArms arms(1);
  for (int t = 0; t < 1000; ++t) parameter_update(arms, std::vector<std::uint8_t>{1}, 20.0);
  CHECK(arms.alpha[0] + arms.beta[0] <= 21.0);
  CHECK(arms.alpha[0] > arms.beta[0]);
}

TEST_CASE("argmax breaks ties by lowest index") {
  CHECK(argmax(Vector{0.2, 0.7, 0.7, 0.1}) == 1);
  CHECK(argmax(Vector{0.5}) == 0);
}

TEST_CASE("partition_random covers every item once") {
  Rng rng(12);
  const auto groups = partition_random(100, 25, rng);
  REQUIRE(groups.size() == 25);
  std::set<std::size_t> seen;
  for (const auto& g : groups) {
    CHECK(g.size() == 4);
    seen.insert(g.begin(), g.end());
  }
  CHECK(seen.size() == 100);

  const auto singles = partition_random(7, 7, rng);
  for (const auto& g : singles) CHECK(g.size() == 1);
  auto whole = partition_random(9, 1, rng).front();
  std::sort(whole.begin(), whole.end());
  std::vector<std::size_t> ids(9);
  std::iota(ids.begin(), ids.end(), 0);
  CHECK(whole == ids);

  CHECK_THROWS_AS(partition_random(10, 3, rng), IndivisibleGrouping);
}

TEST_CASE("bandit with a clearly better arm recommends it") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    BetaArms arms(2);
    for (int t = 0; t < 200; ++t) {
      const std::vector<std::uint8_t> flags{static_cast<std::uint8_t>(uniform01(rng) < 0.9),
                                            static_cast<std::uint8_t>(uniform01(rng) < 0.1)};
      parameter_update(arms, flags);
    }
    hits += argmax(beta_sample_mean(arms, rng)) == 0;
  }
  CHECK(hits >= 95);
}

TEST_CASE("thompson sampling regret grows sublinearly") {
  const auto means = bandit::ten_arm_means();
  double ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto out = bandit::play(means, 2000, 1000 + seed);
    ratio += out.regret[1999] / out.regret[999];
  }
  CHECK(ratio / 10.0 < 1.8);
}

TEST_CASE("reward mode and budget split names") {
  CHECK(parse_reward_mode("pairwise") == RewardMode::pairwise);
  CHECK(to_string(RewardMode::bypass) == "bypass");
  CHECK(parse_budget_split("shared") == BudgetSplit::shared);
  CHECK_THROWS_AS(parse_reward_mode("best"), ConfigInvalid);
}

namespace {

struct SamplingFixture {
  Problem problem = make_sp1(20);
  EvalBudget budget{100000};
  Evaluator eval{problem, budget};
  InnerOptimizer inner = make_nsga2_optimizer({});
  std::vector<Solution> sols;
  std::vector<Direction> dirs;

  explicit SamplingFixture(std::size_t n, std::uint64_t seed = 1) {
    Rng rng(seed);
    sols = random_population(problem, n, rng);
    for (auto& s : sols) s = eval(std::move(s));
    dirs = random_directions(problem, n, 0.1, rng);
  }
};

}  // namespace

TEST_CASE("sampling phase respects its budget") {
  SamplingFixture fx(100);
  SamplingConfig cfg;
  cfg.n_d = 25;
  const auto before = fx.budget.consumed();
  const auto out =
      evolution_directions_sampling(fx.dirs, fx.sols, cfg, 5000, fx.inner, fx.eval, 3);
  const auto used = fx.budget.consumed() - before;
  CHECK(used >= 5000 - 25 * 8);
  CHECK(used <= 5000 + 100);
  CHECK(out.recommended.size() == 25);
  CHECK(out.groups.group_count() == 25);
  for (std::size_t g = 0; g < 25; ++g) {
    CHECK(out.groups.dir_groups[g].size() == 4);
    CHECK(out.groups.sol_groups[g].size() == 4);
    CHECK(out.recommended[g].v == out.groups.dir_groups[g][out.recommended_index[g]].v);
    // Every arm is credited once per round.
    const auto& post = out.posteriors[g];
    const double rounds = post.alpha[0] + post.beta[0] - 2.0;
    for (std::size_t i = 0; i < 4; ++i) CHECK(post.alpha[i] + post.beta[i] - 2.0 == rounds);
  }
}

TEST_CASE("sampling keeps directions with their original group members") {
  SamplingFixture fx(12);
  SamplingConfig cfg;
  cfg.n_d = 3;
  const auto out = evolution_directions_sampling(fx.dirs, fx.sols, cfg, 90, fx.inner, fx.eval, 5);
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(out.groups.dir_groups[g][j].v == fx.dirs[out.groups.members[g][j]].v);
}

TEST_CASE("singleton groups recommend their only direction") {
  SamplingFixture fx(5);
  SamplingConfig cfg;
  cfg.n_d = 5;
  const auto out = evolution_directions_sampling(fx.dirs, fx.sols, cfg, 50, fx.inner, fx.eval, 9);
  for (std::size_t g = 0; g < 5; ++g) {
    CHECK(out.recommended_index[g] == 0);
    CHECK(out.recommended[g].v == fx.dirs[out.groups.members[g][0]].v);
  }
}

TEST_CASE("sampling is deterministic") {
  SamplingFixture a(20), b(20);
  SamplingConfig cfg;
  cfg.n_d = 5;
  const auto ra = evolution_directions_sampling(a.dirs, a.sols, cfg, 400, a.inner, a.eval, 77);
  const auto rb = evolution_directions_sampling(b.dirs, b.sols, cfg, 400, b.inner, b.eval, 77);
  CHECK(ra.recommended_index == rb.recommended_index);
  for (std::size_t g = 0; g < 5; ++g)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(ra.groups.sol_groups[g][j].f == rb.groups.sol_groups[g][j].f);
}

TEST_CASE("sampling stops cleanly when the global budget runs out") {
  Problem p = make_sp1(10);
  EvalBudget budget(30);
  Evaluator eval(p, budget);
  Rng rng(2);
  auto sols = random_population(p, 8, rng);
  for (auto& s : sols) s = eval(std::move(s));
  auto dirs = random_directions(p, 8, 0.1, rng);
  SamplingConfig cfg;
  cfg.n_d = 2;
  const auto out =
      evolution_directions_sampling(dirs, sols, cfg, 1000, make_nsga2_optimizer({}), eval, 1);
  CHECK(budget.exhausted());
  CHECK(out.recommended.size() == 2);
}

TEST_CASE("a direction toward the front earns the recommendation") {
  // All solutions share f1, so the first front of each round is exactly the
  // moves with the smallest g. Zeroing the tail variables reaches g = 1 and
  // every other direction leaves some tail coordinate positive. An identity
  // inner optimizer keeps solution j paired with direction j.
  const InnerOptimizer identity = [](std::vector<Solution> pop, BoundsView, const FitnessFn&,
                                     Rng&) { return pop; };
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Problem p = make_sp1(30);
    EvalBudget budget(10000);
    Evaluator eval(p, budget);
    Rng rng(seed);
    auto sols = random_population(p, 6, rng);
    for (auto& s : sols) {
      s.x[0] = 0.5;
      s = eval(std::move(s));
    }
    auto dirs = random_directions(p, 6, 0.1, rng);
    for (auto& d : dirs) d.v[0] = 0.0;
    for (std::size_t i = 1; i < 30; ++i) dirs[2].v[i] = -1.0;
    SamplingConfig cfg;
    cfg.n_d = 1;
    const auto out = evolution_directions_sampling(dirs, sols, cfg, 300, identity, eval, seed);
    const auto& members = out.groups.members[0];
    const std::size_t arm = std::find(members.begin(), members.end(), 2) - members.begin();
    hits += out.recommended_index[0] == arm;
    CHECK(out.posteriors[0].alpha[arm] == doctest::Approx(51.0));
  }
  CHECK(hits == 20);
}
