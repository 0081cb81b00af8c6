#include "vmof/dominance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace vmof {

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("objective vectors differ in length");
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly = true;
  }
  return strictly;
}

FrontAssignment fast_nondominated_sort(const std::vector<Vector>& objs) {
  const std::size_t n = objs.size();
  FrontAssignment out;
  out.rank.assign(n, 0);
  if (n == 0) return out;

  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> dom_count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(objs[i], objs[j])) {
        dominated_by_me[i].push_back(j);
        ++dom_count[j];
      } else if (dominates(objs[j], objs[i])) {
        dominated_by_me[j].push_back(i);
        ++dom_count[i];
      }
    }
  }

  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i)
    if (dom_count[i] == 0) current.push_back(i);

  std::size_t r = 0;
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      out.rank[i] = r;
      for (std::size_t j : dominated_by_me[i]) {
        if (--dom_count[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    out.fronts.push_back(std::move(current));
    current = std::move(next);
    ++r;
  }
  return out;
}

Vector crowding_distance(const std::vector<Vector>& front_objs) {
  const std::size_t k = front_objs.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (k <= 2) return Vector(k, inf);

  const std::size_t m = front_objs.front().size();
  Vector dist(k, 0.0);
  std::vector<std::size_t> order(k);
  for (std::size_t obj = 0; obj < m; ++obj) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return front_objs[a][obj] < front_objs[b][obj];
    });
    const double lo = front_objs[order.front()][obj];
    const double hi = front_objs[order.back()][obj];
    const double span = hi - lo;
    if (!(span > 0.0)) continue;
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    for (std::size_t p = 1; p + 1 < k; ++p) {
      const std::size_t i = order[p];
      if (dist[i] == inf) continue;
      dist[i] += (front_objs[order[p + 1]][obj] - front_objs[order[p - 1]][obj]) / span;
    }
  }
  return dist;
}

namespace {

Vector front_crowding(const std::vector<Vector>& objs, const std::vector<std::size_t>& front) {
  std::vector<Vector> sub;
  sub.reserve(front.size());
  for (std::size_t i : front) sub.push_back(objs[i]);
  return crowding_distance(sub);
}

// Front members ordered by crowding desc, index asc.
std::vector<std::size_t> order_front(const std::vector<std::size_t>& front, const Vector& crowd) {
  std::vector<std::size_t> pos(front.size());
  std::iota(pos.begin(), pos.end(), 0);
  std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
    if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
    return front[a] < front[b];
  });
  std::vector<std::size_t> out;
  out.reserve(front.size());
  for (std::size_t p : pos) out.push_back(front[p]);
  return out;
}

}  // namespace

RankCrowding rank_and_crowding(const std::vector<Vector>& objs) {
  RankCrowding rc;
  auto fa = fast_nondominated_sort(objs);
  rc.rank = std::move(fa.rank);
  rc.crowding.assign(objs.size(), 0.0);
  for (const auto& front : fa.fronts) {
    const Vector c = front_crowding(objs, front);
    for (std::size_t p = 0; p < front.size(); ++p) rc.crowding[front[p]] = c[p];
  }
  return rc;
}

std::vector<std::size_t> environmental_select_indices(const std::vector<Vector>& objs,
                                                      std::size_t n) {
  if (n > objs.size()) throw ConfigInvalid("cannot select more survivors than candidates");
  std::vector<std::size_t> out;
  out.reserve(n);
  if (n == 0) return out;
  const auto fa = fast_nondominated_sort(objs);
  for (const auto& front : fa.fronts) {
    if (out.size() == n) break;
    const auto ordered = order_front(front, front_crowding(objs, front));
    const std::size_t take = std::min(n - out.size(), ordered.size());
    out.insert(out.end(), ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

std::vector<Solution> environmental_select(std::vector<Solution> pop, std::size_t n) {
  const auto idx = environmental_select_indices(objectives_of(pop), n);
  std::vector<Solution> out;
  out.reserve(n);
  for (std::size_t i : idx) out.push_back(std::move(pop[i]));
  return out;
}

std::vector<std::uint8_t> first_front_flags(const std::vector<Vector>& objs) {
  std::vector<std::uint8_t> flags(objs.size(), 0);
  for (std::size_t i : nondominated_indices(objs)) flags[i] = 1;
  return flags;
}

std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& objs) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < objs.size() && !dominated; ++j)
      dominated = j != i && dominates(objs[j], objs[i]);
    if (!dominated) out.push_back(i);
  }
  return out;
}

}  // namespace vmof
