#pragma once

#include <span>
#include <vector>

#include "vmof/core.hpp"

namespace vmof {

enum class Mark { better, worse, equal };

/// '+', '-' or '='.
char mark_symbol(Mark m);

struct RankSumResult {
  double p_value = 1.0;
  Mark mark = Mark::equal;
  double u_statistic = 0.0;  // Mann-Whitney U of the first sample
  double z = 0.0;            // normal score (0 in exact mode)
  bool degenerate = false;   // every pooled value identical
};

/// Midranks of the pooled values (1-based, ties share the mean rank).
std::vector<double> midranks(std::span<const double> values);

double median(std::vector<double> values);

/// Two-sided Wilcoxon rank-sum test of a against b for minimization:
/// mark is '=' when p >= alpha, '+' when a's median is smaller, else '-'.
/// The default uses the normal approximation with tie-corrected variance;
/// exact = true enumerates the permutation distribution of the rank sum
/// (intended for samples of at most ten per side).
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                                double alpha = 0.05, bool exact = false);

}  // namespace vmof
