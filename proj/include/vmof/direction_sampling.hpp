#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vmof/core.hpp"
#include "vmof/optimizer.hpp"

namespace vmof {

class IndivisibleGrouping : public Error {
 public:
  using Error::Error;
};

/// Beta(alpha_i, beta_i) posterior per arm; both start at 1 (uniform prior).
struct BetaArms {
  Vector alpha;
  Vector beta;

  BetaArms() = default;
  explicit BetaArms(std::size_t k) : alpha(k, 1.0), beta(k, 1.0) {}
  std::size_t size() const { return alpha.size(); }
};

/// One independent draw from each arm's posterior.
Vector beta_sample_mean(const BetaArms& arms, Rng& rng);

/// Credits a success to every flagged arm and a failure to the others.
/// With cap > 0, an arm whose alpha + beta has reached cap is first scaled
/// by cap / (cap + 1) (dynamic Thompson sampling); cap <= 0 is the plain
/// conjugate update.
void parameter_update(BetaArms& arms, std::span<const std::uint8_t> flags, double cap = 0.0);

/// The same update applied to a single arm (one pull of a classic bandit).
void credit_arm(BetaArms& arms, std::size_t arm, bool reward, double cap = 0.0);

/// Lowest index among the maxima.
std::size_t argmax(std::span<const double> values);

/// A random permutation of [0, n_items) cut into n_groups equal blocks.
std::vector<std::vector<std::size_t>> partition_random(std::size_t n_items, std::size_t n_groups,
                                                       Rng& rng);

enum class RewardMode {
  front,     // arm credited when its moved solution is in the group's first front
  pairwise,  // arm credited when the moved solution dominates its predecessor
  bypass,    // posteriors are still updated but the recommendation is uniform
};

enum class BudgetSplit {
  even,    // phase_budget / n_d per group
  shared,  // one counter across groups; early groups may consume everything
};

RewardMode parse_reward_mode(std::string_view s);
BudgetSplit parse_budget_split(std::string_view s);
std::string_view to_string(RewardMode m);
std::string_view to_string(BudgetSplit s);

struct SamplingConfig {
  std::size_t n_d = 25;
  RewardMode reward_mode = RewardMode::front;
  double dts_cap = 0.0;
  BudgetSplit budget_split = BudgetSplit::even;
};

/// Directions and solutions cut into n_d index-paired groups. members holds
/// the original population indices of each group.
struct GroupedSets {
  std::vector<std::vector<Direction>> dir_groups;
  std::vector<std::vector<Solution>> sol_groups;
  std::vector<std::vector<std::size_t>> members;

  std::size_t group_count() const { return sol_groups.size(); }
};

struct SamplingResult {
  std::vector<Direction> recommended;  // one per group
  std::vector<std::size_t> recommended_index;  // arm index within its group
  GroupedSets groups;
  std::vector<BetaArms> posteriors;
};

/// Thompson-sampling recommendation of one direction per group.
///
/// Each group runs rounds of: move every paired solution along its
/// direction and evaluate it, derive per-arm rewards, update the group's
/// posteriors, then let the inner optimizer evolve the group. When the
/// group's budget share is spent one draw per posterior picks the
/// recommendation. A round that runs into the global budget limit is
/// discarded and the posteriors accumulated so far are used.
SamplingResult evolution_directions_sampling(std::vector<Direction> dirs,
                                             std::vector<Solution> sols,
                                             const SamplingConfig& cfg,
                                             std::uint64_t phase_budget,
                                             const InnerOptimizer& inner, const Evaluator& eval,
                                             std::uint64_t seed);

}  // namespace vmof
