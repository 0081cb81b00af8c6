#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vmof/core.hpp"

namespace vmof {

/// Pareto dominance for minimization: a is no worse everywhere and strictly
/// better somewhere. Identical vectors do not dominate each other.
bool dominates(std::span<const double> a, std::span<const double> b);

struct FrontAssignment {
  std::vector<std::size_t> rank;                 // 0 = first front
  std::vector<std::vector<std::size_t>> fronts;  // ascending indices per front
};

/// Deb's O(n^2 m) non-dominated sorting.
FrontAssignment fast_nondominated_sort(const std::vector<Vector>& objs);

/// Crowding distance of the points of one front. Extremes of every
/// non-constant objective get +inf; fronts of one or two points are all
/// boundary.
Vector crowding_distance(const std::vector<Vector>& front_objs);

/// Rank and crowding of every point (crowding is computed per front).
struct RankCrowding {
  std::vector<std::size_t> rank;
  Vector crowding;
};
RankCrowding rank_and_crowding(const std::vector<Vector>& objs);

/// Indices of the n survivors in order (rank asc, crowding desc, index asc).
std::vector<std::size_t> environmental_select_indices(const std::vector<Vector>& objs,
                                                      std::size_t n);

std::vector<Solution> environmental_select(std::vector<Solution> pop, std::size_t n);

/// flag[i] = 1 iff point i is in the first front.
std::vector<std::uint8_t> first_front_flags(const std::vector<Vector>& objs);

/// Indices of the first front, ascending.
std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& objs);

}  // namespace vmof
