// Acceptance suite: runs each criterion at its stated scale and tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the failure count.
//
// Usage: vmof_acceptance [criterion numbers...]   (default: all)

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../bandit.hpp"
#include "../oracles.hpp"
#include "vmof/benchmarks.hpp"
#include "vmof/dominance.hpp"
#include "vmof/experiment.hpp"
#include "vmof/framework.hpp"
#include "vmof/statistics.hpp"

using namespace vmof;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double peak_rss_gb() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return static_cast<double>(ru.ru_maxrss) / (1024.0 * 1024.0);  // ru_maxrss is in KiB
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

void note(const std::string& s) { std::cout << "    " << s << '\n' << std::flush; }

std::string fmt(double v, int prec = 4) {
  std::ostringstream o;
  o.precision(prec);
  o << v;
  return o.str();
}

// Per-seed records of one algorithm, ordered by seed.
std::vector<const TrialRecord*> cells_of(const std::vector<TrialRecord>& recs,
                                         const std::string& alg) {
  std::vector<const TrialRecord*> out;
  for (const auto& r : recs)
    if (r.algorithm == alg) out.push_back(&r);
  std::sort(out.begin(), out.end(),
            [](const TrialRecord* a, const TrialRecord* b) { return a->seed < b->seed; });
  return out;
}

bool all_ok(const std::vector<TrialRecord>& recs, std::string& why) {
  for (const auto& r : recs)
    if (!r.ok()) {
      why = r.algorithm + " seed " + std::to_string(r.seed) + ": " + r.error;
      return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

Outcome c1_dominance_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t sort_mismatch = 0, select_mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 200;
    const std::size_t m = 2 + t % 2;
    // A quarter of the instances sit on a coarse grid to force ties.
    const auto objs = oracle::random_objectives(n, m, rng, t % 4 == 0 ? 5 : 0);
    if (fast_nondominated_sort(objs).rank != oracle::dominance_depth(objs)) ++sort_mismatch;
    const std::size_t keep = 1 + rng() % n;
    auto got = environmental_select_indices(objs, keep);
    std::sort(got.begin(), got.end());
    if (got != oracle::environmental_select(objs, keep)) ++select_mismatch;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = sort_mismatch == 0 && select_mismatch == 0 && secs < 30.0;
  o.detail = "sort mismatches=" + std::to_string(sort_mismatch) +
             ", select mismatches=" + std::to_string(select_mismatch) + ", " + fmt(secs) + " s";
  return o;
}

Outcome c2_thompson_sampling() {
  const auto t0 = Clock::now();
  const auto means = bandit::ten_arm_means();
  const std::size_t best = 9;
  int hits = 0;
  for (std::uint64_t s = 0; s < 100; ++s) hits += bandit::play(means, 2000, 5000 + s).recommended == best;

  const std::size_t T = 2000;
  double ratio_sum = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto out = bandit::play(means, 2 * T, 9000 + s);
    ratio_sum += out.regret[2 * T - 1] / out.regret[T - 1];
  }
  const double ratio = ratio_sum / 50.0;
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = hits >= 95 && ratio < 1.8 && secs < 60.0;
  o.detail = "best arm recommended " + std::to_string(hits) + "/100, regret(2T)/regret(T)=" +
             fmt(ratio) + ", " + fmt(secs) + " s";
  return o;
}

Outcome c3_metric_identities() {
  bool ok = true;
  std::ostringstream d;

  double self_igd = 0.0;
  for (const Problem& p : {make_sp1(10), make_sp2(10)}) {
    const auto f = default_reference_front(p);
    self_igd = std::max(self_igd, igd(f, f.points));
  }
  std::mt19937_64 rng(77);
  for (int t = 0; t < 20; ++t) {
    ReferenceFront f;
    f.points = oracle::random_objectives(2 + rng() % 50, 2 + t % 2, rng);
    self_igd = std::max(self_igd, igd(f, f.points));
  }
  ok = ok && self_igd == 0.0;
  d << "igd(F,F)=" << self_igd;

  std::size_t outside = 0;
  double worst_z = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 2 + t % 2;
    const auto pts = oracle::random_nondominated(2 + rng() % 19, m, rng);
    const oracle::Vec ref(m, 1.0);
    oracle::Vec lo(m, 1.0);
    for (const auto& p : pts)
      for (std::size_t i = 0; i < m; ++i) lo[i] = std::min(lo[i], p[i]);
    const auto [est, se] = oracle::hypervolume_mc(pts, ref, lo, 1000000, rng);
    const double exact = hypervolume(pts, ref);
    const double z = se > 0.0 ? std::fabs(exact - est) / se : (exact == est ? 0.0 : 1e9);
    worst_z = std::max(worst_z, z);
    if (z > 3.0) ++outside;
  }
  ok = ok && outside == 0;
  d << ", HV sets beyond 3 SE=" << outside << "/100 (max |z|=" << fmt(worst_z, 3) << ")";

  ReferenceFront tri;
  tri.points = {{0, 1}, {0.5, 0.5}, {1, 0}};
  const double ex_igd = igd(tri, {{0, 1}, {1, 0}});
  const double ex_hv = hypervolume({{0.25, 0.75}, {0.75, 0.25}}, Vector{1, 1});
  ok = ok && std::fabs(ex_igd - 0.23570226) <= 1e-8 && std::fabs(ex_hv - 0.3125) <= 1e-12;
  d.precision(12);
  d << ", examples igd=" << ex_igd << " hv=" << ex_hv;
  return {ok, d.str()};
}

Outcome c4_end_to_end() {
  const auto t0 = Clock::now();
  const auto plan = parse_plan(R"({
    "problems": ["sp1:d=1000"],
    "algorithms": ["vmof", "nsga2", "random_search"],
    "seeds": {"start": 1, "count": 10},
    "total_budget": 100000,
    "population_size": 100
  })");
  const auto recs = run_experiment(plan, 4);
  const double secs = seconds_since(t0);
  Outcome o;
  std::string why;
  if (!all_ok(recs, why)) return {false, "cell failed: " + why};

  const auto rows = compare_table(recs, "vmof", Metric::igd, 0.05);
  const auto& row = rows.front();
  std::map<std::string, char> mark;
  std::ostringstream d;
  d << "median IGD";
  for (std::size_t k = 0; k < row.algorithms.size(); ++k) {
    d << ' ' << row.algorithms[k] << '=' << fmt(row.medians[k]);
    if (k > 0) {
      mark[row.algorithms[k]] = row.marks[k];
      std::vector<double> a, b;
      for (const auto* r : cells_of(recs, row.algorithms[k])) a.push_back(r->igd);
      for (const auto* r : cells_of(recs, "vmof")) b.push_back(r->igd);
      d << " (mark " << row.marks[k] << ", p=" << fmt(wilcoxon_rank_sum(a, b).p_value, 3) << ")";
    }
  }
  d << ", " << fmt(secs) << " s with 4 workers on " << std::thread::hardware_concurrency()
    << " hardware threads";
  o.pass = mark["random_search"] == '-' && mark["nsga2"] == '-' && secs < 600.0;
  o.detail = d.str();
  return o;
}

// Shared by criteria 5 and 9: full VMOF and NSGA-II on SP1 d=10,000.
std::vector<TrialRecord> d10k_records;

const std::vector<TrialRecord>& d10k_runs() {
  if (d10k_records.empty()) {
    const auto plan = parse_plan(R"({
      "problems": ["sp1:d=10000"],
      "algorithms": ["vmof", "nsga2"],
      "seeds": {"start": 1, "count": 10},
      "total_budget": 100000
    })");
    d10k_records = run_experiment(plan, workers());
  }
  return d10k_records;
}

Outcome c5_convergence_profile() {
  const auto t0 = Clock::now();
  const auto& recs = d10k_runs();
  std::string why;
  if (!all_ok(recs, why)) return {false, "cell failed: " + why};
  const auto vm = cells_of(recs, "vmof");
  const auto ns = cells_of(recs, "nsga2");

  int monotone = 0;
  for (const auto* r : vm) {
    bool mono = true;
    for (std::size_t i = 1; i < r->history.size(); ++i) {
      if (r->history[i].iteration < 2) continue;  // after the first iteration
      if (r->history[i].igd > r->history[i - 1].igd) mono = false;
    }
    monotone += mono;
  }

  // Matched checkpoints every 10% of the budget; medians over seeds.
  const std::uint64_t E = vm.front()->E;
  int below = 0, checkpoints = 0;
  std::ostringstream trace;
  for (int c = 1; c <= 10; ++c) {
    const std::uint64_t at = E * static_cast<std::uint64_t>(c) / 10;
    std::vector<double> v, n;
    for (const auto* r : vm)
      if (const auto* h = history_at(r->history, at)) v.push_back(h->igd);
    for (const auto* r : ns)
      if (const auto* h = history_at(r->history, at)) n.push_back(h->igd);
    if (v.empty() || n.empty()) continue;
    ++checkpoints;
    const double mv = median(v), mn = median(n);
    below += mv < mn;
    trace << ' ' << (c * 10) << "%:" << fmt(mv, 3) << "/" << fmt(mn, 3);
  }
  Outcome o;
  o.pass = monotone >= 8 && checkpoints == 10 && below == checkpoints;
  o.detail = "nonincreasing histories " + std::to_string(monotone) +
             "/10, VMOF below NSGA-II at " + std::to_string(below) + "/" +
             std::to_string(checkpoints) + " checkpoints (median vmof/nsga2" + trace.str() +
             "), " + fmt(seconds_since(t0)) + " s";
  return o;
}

// Lowest f2 among points whose f1 does not exceed the query.
double attainment(const std::vector<Vector>& pts, double f1) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts)
    if (p[0] <= f1) best = std::min(best, p[1]);
  return best;
}

// f2 of a two-objective front at f1, linear between neighbouring points;
// nullopt outside the front's f1 range. `front` is non-dominated, so sorting
// by f1 sorts f2 in reverse.
std::optional<double> front_f2_at(std::vector<Vector> front, double f1) {
  std::sort(front.begin(), front.end());
  if (front.empty() || f1 < front.front()[0] || f1 > front.back()[0]) return std::nullopt;
  for (std::size_t i = 0; i + 1 < front.size(); ++i) {
    const auto& a = front[i];
    const auto& b = front[i + 1];
    if (f1 <= b[0]) return a[1] + (b[1] - a[1]) * (f1 - a[0]) / (b[0] - a[0]);
  }
  return front.back()[1];
}

Outcome c6_million_dimensions() {
  const auto t0 = Clock::now();
  const Problem p = load_external_problem("sp1:d=1000000");
  VmofConfig cfg;
  cfg.population_size = 20;
  cfg.n_d = 5;
  cfg.total_budget = 2000;
  cfg.seed = 1;
  cfg.record_metrics = false;
  RunResult r;
  try {
    r = vmof_run(p, cfg);
  } catch (const std::exception& e) {
    return {false, std::string("run failed: ") + e.what()};
  }
  const double secs = seconds_since(t0);
  const double rss = peak_rss_gb();

  std::vector<Vector> init, fin;
  for (std::size_t i : nondominated_indices(r.initial_objectives)) init.push_back(r.initial_objectives[i]);
  const auto fo = objectives_of(r.final_pop);
  for (std::size_t i : nondominated_indices(fo)) fin.push_back(fo[i]);
  std::size_t matched = 0, improved = 0, step_improved = 0;
  for (const auto& q : init) {
    step_improved += attainment(fin, q[0]) < q[1];
    if (const auto f2 = front_f2_at(fin, q[0])) {
      ++matched;
      improved += *f2 < q[1];
    }
  }

  Outcome o;
  o.pass = r.evaluations == 2000 && secs < 900.0 && rss < 8.0 && matched > 0 &&
           improved == matched;
  o.detail = "evaluations=" + std::to_string(r.evaluations) + ", " + fmt(secs) +
             " s, peak RSS " + fmt(rss, 3) + " GB, final front below the initial one at " +
             std::to_string(improved) + "/" + std::to_string(matched) +
             " matched f1 values (step attainment: " + std::to_string(step_improved) + "/" +
             std::to_string(init.size()) + ")";
  return o;
}

Outcome c7_scaling() {
  const auto t0 = Clock::now();
  const std::vector<std::size_t> dims{1000, 10000, 100000, 1000000};
  const auto pts = bench_scaling(dims, 1);
  std::vector<double> x, y;
  std::ostringstream d;
  for (const auto& p : pts) {
    x.push_back(static_cast<double>(p.d));
    y.push_back(p.seconds_per_eval);
    d << "d=" << p.d << ":" << fmt(p.seconds_per_eval, 3) << "s/eval ";
  }
  const double slope = loglog_slope(x, y);
  d << "slope=" << fmt(slope) << ", " << fmt(seconds_since(t0)) << " s";
  return {slope >= 0.8 && slope <= 1.3, d.str()};
}

std::string results_without_wall_time(const std::vector<TrialRecord>& recs) {
  std::ostringstream out;
  write_results_header(out);
  for (auto r : recs) {
    r.wall_time_s = 0.0;
    write_result_row(out, r);
  }
  return out.str();
}

Outcome c8_determinism() {
  const auto t0 = Clock::now();
  const auto plan = parse_plan(R"({
    "problems": ["sp1:d=300", "sp2:d=60"],
    "algorithms": ["vmof", "nsga2", "random_search"],
    "seeds": [1, 2, 3],
    "total_budget": 6000
  })");
  const std::string a = results_without_wall_time(run_experiment(plan, 4));
  const std::string b = results_without_wall_time(run_experiment(plan, 4));
  const std::string c = results_without_wall_time(run_experiment(plan, 1));
  return {a == b && a == c, std::to_string(a.size()) +
                                " bytes compared over three runs (4, 4 and 1 workers), " +
                                fmt(seconds_since(t0)) + " s"};
}

Outcome c9_ablations() {
  const auto t0 = Clock::now();
  const auto& full = d10k_runs();
  std::string why;
  if (!all_ok(full, why)) return {false, "cell failed: " + why};
  const auto base = cells_of(full, "vmof");

  auto ablate = [&](const std::string& extra) {
    return run_experiment(parse_plan(R"({
      "problems": ["sp1:d=10000"], "algorithms": ["vmof"],
      "seeds": {"start": 1, "count": 10}, "total_budget": 100000, )" + extra + "}"),
                          workers());
  };
  const auto bypass = ablate(R"("reward_mode": "bypass")");
  const auto plain = ablate(R"("finetune": false)");
  if (!all_ok(bypass, why) || !all_ok(plain, why)) return {false, "cell failed: " + why};

  auto worse_count = [&](const std::vector<TrialRecord>& recs) {
    int worse = 0;
    const auto abl = cells_of(recs, "vmof");
    for (std::size_t i = 0; i < abl.size(); ++i) worse += abl[i]->igd > base[i]->igd;
    return worse;
  };
  auto med = [](const std::vector<const TrialRecord*>& v) {
    std::vector<double> x;
    for (const auto* r : v) x.push_back(r->igd);
    return median(x);
  };
  const int wb = worse_count(bypass), wp = worse_count(plain);
  Outcome o;
  o.pass = wb >= 7 && wp >= 7;
  o.detail = "sampling bypass worse in " + std::to_string(wb) + "/10, fine-tuning off worse in " +
             std::to_string(wp) + "/10 (median IGD full=" + fmt(med(base)) +
             " bypass=" + fmt(med(cells_of(bypass, "vmof"))) +
             " no-finetune=" + fmt(med(cells_of(plain, "vmof"))) + "), " +
             fmt(seconds_since(t0)) + " s";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"dominance machinery matches brute-force oracles", c1_dominance_oracles},
      {"Thompson sampling picks the best arm with sublinear regret", c2_thompson_sampling},
      {"metric identities and hand-derived values", c3_metric_identities},
      {"SP1 d=1000: VMOF beats random search and NSGA-II", c4_end_to_end},
      {"SP1 d=10000: convergence profile against NSGA-II", c5_convergence_profile},
      {"SP1 d=1000000 feasibility", c6_million_dimensions},
      {"per-evaluation time scales linearly in d", c7_scaling},
      {"identical seeds give identical results", c8_determinism},
      {"both ablations degrade IGD on SP1 d=10000", c9_ablations},
  };

  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  std::vector<std::string> summary;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!wanted.empty() && !wanted.count(id)) continue;
    std::cout << "criterion " << id << ": " << criteria[i].first << '\n' << std::flush;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    note(o.detail);
    failures += !o.pass;
    summary.push_back(std::string(o.pass ? "PASS" : "FAIL") + "  criterion " + std::to_string(id) +
                      ": " + criteria[i].first + " -- " + o.detail);
  }
  std::cout << '\n';
  for (const auto& s : summary) std::cout << s << '\n';
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed")
            << '\n';
  return failures;
}
