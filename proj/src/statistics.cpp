#include "vmof/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vmof {

char mark_symbol(Mark m) {
  switch (m) {
    case Mark::better: return '+';
    case Mark::worse: return '-';
    case Mark::equal: return '=';
  }
  return '=';
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

// P(|S - mu| >= |s_obs - mu|) where S is the rank sum of a random subset of
// size k drawn from the pooled midranks. Midranks are half-integers, so the
// doubled ranks are integers and a subset-sum count is exact.
double exact_two_sided(const std::vector<double>& ranks, std::size_t k, double observed) {
  std::vector<std::size_t> doubled;
  std::size_t total = 0;
  for (double r : ranks) {
    doubled.push_back(static_cast<std::size_t>(std::llround(2.0 * r)));
    total += doubled.back();
  }
  // ways[j][s]: number of j-subsets with doubled sum s.
  std::vector<std::vector<double>> ways(k + 1, std::vector<double>(total + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t r : doubled) {
    for (std::size_t j = k; j >= 1; --j)
      for (std::size_t s = total; s >= r; --s) {
        ways[j][s] += ways[j - 1][s - r];
        if (s == r) break;
      }
  }
  const double n = static_cast<double>(ranks.size());
  const double mu2 = static_cast<double>(k) * (n + 1.0);  // doubled mean
  const double dev = std::fabs(2.0 * observed - mu2);
  double extreme = 0.0, all = 0.0;
  for (std::size_t s = 0; s <= total; ++s) {
    all += ways[k][s];
    if (std::fabs(static_cast<double>(s) - mu2) >= dev - 1e-9) extreme += ways[k][s];
  }
  return std::min(1.0, extreme / all);
}

}  // namespace

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                                double alpha, bool exact) {
  if (a.size() < 2 || b.size() < 2) throw ConfigInvalid("rank-sum test needs two values per side");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) rank_sum_a += ranks[i];

  RankSumResult res;
  res.u_statistic = rank_sum_a - na * (na + 1.0) / 2.0;

  // Tie correction term sum(t^3 - t) over tie groups.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    ties += t * t * t - t;
    i = j + 1;
  }
  const double variance = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));

  if (!(variance > 0.0)) {
    res.degenerate = true;
    res.p_value = 1.0;
    res.mark = Mark::equal;
    return res;
  }

  if (exact) {
    res.p_value = exact_two_sided(ranks, a.size(), rank_sum_a);
  } else {
    res.z = (res.u_statistic - na * nb / 2.0) / std::sqrt(variance);
    res.p_value = std::clamp(std::erfc(std::fabs(res.z) / std::sqrt(2.0)),
                             std::numeric_limits<double>::min(), 1.0);
  }

  if (res.p_value >= alpha) {
    res.mark = Mark::equal;
  } else {
    const double ma = median(std::vector<double>(a.begin(), a.end()));
    const double mb = median(std::vector<double>(b.begin(), b.end()));
    res.mark = ma < mb ? Mark::better : Mark::worse;
  }
  return res;
}

}  // namespace vmof
