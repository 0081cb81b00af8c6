#pragma once

#include <cstdint>

#include "vmof/framework.hpp"
#include "vmof/optimizer.hpp"

namespace vmof {

struct BaselineConfig {
  std::size_t population_size = 0;  // 0: problem default
  std::uint64_t total_budget = 100000;
  std::uint64_t seed = 0;
  VariationParams variation;
  bool record_metrics = true;
};

/// Plain NSGA-II; one history record per generation.
RunResult nsga2_run(const Problem& problem, const BaselineConfig& cfg);

/// Stream id of random search: samples come from make_rng(seed, kRandomSearchStream),
/// drawn solution by solution and coordinate by coordinate.
inline constexpr std::uint64_t kRandomSearchStream = 0x4a4d;

/// Uniform sampling of the whole budget. The final population is the
/// non-dominated subset of every sample; history is recorded once per
/// population-sized batch.
RunResult random_search_run(const Problem& problem, const BaselineConfig& cfg);

}  // namespace vmof
