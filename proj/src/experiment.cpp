#include "vmof/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vmof/benchmarks.hpp"
#include "vmof/dominance.hpp"
#include "vmof/statistics.hpp"

namespace vmof {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Plan
// ---------------------------------------------------------------------------

std::uint64_t ExperimentPlan::budget_for(const Problem& problem) const {
  if (total_budget) return *total_budget;
  return std::min<std::uint64_t>(100 * static_cast<std::uint64_t>(problem.dim), 100000);
}

namespace {

void flatten_into(const json& j, const std::string& prefix, std::map<std::string, json>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object() && (key == "pso" || key == "variation"))
      flatten_into(*it, key, out);
    else
      out[key] = *it;
  }
}

template <class T>
T as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigInvalid("plan key '" + key + "' has the wrong type");
  }
}

}  // namespace

ExperimentPlan parse_plan(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid(std::string("plan is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigInvalid("plan must be a JSON object");

  std::map<std::string, json> kv;
  flatten_into(root, "", kv);

  ExperimentPlan plan;
  VmofConfig& c = plan.vmof;
  for (const auto& [key, v] : kv) {
    if (key == "problems") {
      plan.problems = as<std::vector<std::string>>(v, key);
    } else if (key == "algorithms") {
      plan.algorithms = as<std::vector<std::string>>(v, key);
    } else if (key == "seeds") {
      if (v.is_object()) {
        const auto start = v.value("start", std::uint64_t{1});
        const auto count = v.value("count", std::uint64_t{0});
        plan.seeds.clear();
        for (std::uint64_t s = 0; s < count; ++s) plan.seeds.push_back(start + s);
      } else {
        plan.seeds = as<std::vector<std::uint64_t>>(v, key);
      }
    } else if (key == "total_budget") {
      if (v.is_string() && v.get<std::string>() == "auto")
        plan.total_budget.reset();
      else
        plan.total_budget = as<std::uint64_t>(v, key);
    } else if (key == "population_size") {
      c.population_size = as<std::size_t>(v, key);
    } else if (key == "n_d") {
      c.n_d = as<std::size_t>(v, key);
    } else if (key == "phase_fraction") {
      c.phase_fraction = as<double>(v, key);
    } else if (key == "init_direction_scale") {
      c.init_direction_scale = as<double>(v, key);
    } else if (key == "reward_mode") {
      c.sampling.reward_mode = parse_reward_mode(as<std::string>(v, key));
    } else if (key == "dts_cap") {
      c.sampling.dts_cap = as<double>(v, key);
    } else if (key == "budget_split") {
      c.sampling.budget_split = parse_budget_split(as<std::string>(v, key));
    } else if (key == "representatives_per_group") {
      c.finetune.representatives_per_group = as<std::size_t>(v, key);
    } else if (key == "sigma_frac") {
      c.finetune.sigma_frac = as<double>(v, key);
    } else if (key == "finetune") {
      c.finetune.enabled = as<bool>(v, key);
    } else if (key == "pso.w") {
      c.pso.w = as<double>(v, key);
    } else if (key == "pso.c1") {
      c.pso.c1 = as<double>(v, key);
    } else if (key == "pso.c2") {
      c.pso.c2 = as<double>(v, key);
    } else if (key == "variation.crossover_prob") {
      c.variation.crossover_prob = as<double>(v, key);
    } else if (key == "variation.crossover_index") {
      c.variation.crossover_index = as<double>(v, key);
    } else if (key == "variation.mutation_prob") {
      c.variation.mutation_prob = v.is_null() ? -1.0 : as<double>(v, key);
    } else if (key == "variation.mutation_index") {
      c.variation.mutation_index = as<double>(v, key);
    } else {
      throw ConfigInvalid("unknown plan key: " + key);
    }
  }
  if (plan.problems.empty()) throw ConfigInvalid("plan lists no problems");
  if (plan.algorithms.empty()) throw ConfigInvalid("plan lists no algorithms");
  if (plan.seeds.empty()) throw ConfigInvalid("plan lists no seeds");
  for (const auto& a : plan.algorithms)
    if (a != "vmof" && a != "nsga2" && a != "random_search")
      throw ConfigInvalid("unknown algorithm: " + a);
  return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open plan file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str());
}

// ---------------------------------------------------------------------------
// Cells
// ---------------------------------------------------------------------------

TrialRecord run_cell(const ExperimentPlan& plan, const std::string& algorithm,
                     const std::string& problem_desc, std::uint64_t seed) {
  TrialRecord rec;
  rec.algorithm = algorithm;
  rec.problem = problem_desc;
  rec.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Problem problem = load_external_problem(problem_desc);
    rec.problem = ProblemDescriptor::parse(problem_desc).str();
    rec.d = problem.dim;
    rec.m = problem.n_obj;
    rec.E = plan.budget_for(problem);

    VmofConfig vcfg = plan.vmof;
    vcfg.total_budget = rec.E;
    vcfg.seed = seed;
    vcfg = vcfg.resolved(problem);
    rec.N = vcfg.population_size;

    RunResult run;
    if (algorithm == "vmof") {
      run = vmof_run(problem, vcfg);
    } else {
      BaselineConfig bcfg;
      bcfg.population_size = vcfg.population_size;
      bcfg.total_budget = rec.E;
      bcfg.seed = seed;
      bcfg.variation = vcfg.variation;
      if (algorithm == "nsga2")
        run = nsga2_run(problem, bcfg);
      else if (algorithm == "random_search")
        run = random_search_run(problem, bcfg);
      else
        throw ConfigInvalid("unknown algorithm: " + algorithm);
    }

    const auto objs = objectives_of(run.final_pop);
    for (std::size_t i : nondominated_indices(objs)) rec.front.push_back(objs[i]);
    if (problem.has_front()) {
      const ReferenceFront ref = default_reference_front(problem);
      rec.igd = igd(ref, rec.front);
      const Vector hv_ref = default_hv_reference(problem, ref);
      if (problem.n_obj <= 3) {
        rec.hv = hypervolume(rec.front, hv_ref);
      } else {
        Rng rng = make_rng(seed, 0x4d43);
        rec.hv = hypervolume_monte_carlo(rec.front, hv_ref, 100000, rng).value;
      }
    } else {
      rec.igd = std::numeric_limits<double>::quiet_NaN();
      rec.hv = std::numeric_limits<double>::quiet_NaN();
    }
    rec.history = std::move(run.history);
  } catch (const std::exception& e) {
    rec.error = e.what();
    if (rec.error.empty()) rec.error = "error";
    rec.igd = std::numeric_limits<double>::quiet_NaN();
    rec.hv = std::numeric_limits<double>::quiet_NaN();
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<TrialRecord> run_experiment(const ExperimentPlan& plan, std::size_t workers,
                                        const std::function<void(const TrialRecord&)>& on_record) {
  struct Cell {
    const std::string* algorithm;
    const std::string* problem;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& p : plan.problems)
    for (const auto& a : plan.algorithms)
      for (std::uint64_t s : plan.seeds) cells.push_back({&a, &p, s});

  std::vector<std::optional<TrialRecord>> done(cells.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      TrialRecord r = run_cell(plan, *cells[i].algorithm, *cells[i].problem, cells[i].seed);
      {
        std::lock_guard lock(mu);
        done[i] = std::move(r);
      }
      cv.notify_all();
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(cells.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);

  std::vector<TrialRecord> out;
  out.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return done[i].has_value(); });
    TrialRecord r = std::move(*done[i]);
    done[i].reset();
    lock.unlock();
    if (on_record) on_record(r);
    out.push_back(std::move(r));
  }
  for (auto& t : pool) t.join();
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

double parse_double(const std::string& s) {
  if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ? c : '_';
  return out;
}

}  // namespace

void write_results_header(std::ostream& out) {
  out << "algorithm,problem,d,m,N,E,seed,igd,hv,wall_time_s,status\n";
}

void write_result_row(std::ostream& out, const TrialRecord& r) {
  out << csv_field(r.algorithm) << ',' << csv_field(r.problem) << ',' << r.d << ',' << r.m << ','
      << r.N << ',' << r.E << ',' << r.seed << ',' << fmt_double(r.igd) << ','
      << fmt_double(r.hv) << ',' << fmt_double(r.wall_time_s) << ','
      << csv_field(r.ok() ? std::string("ok") : "error: " + r.error) << '\n';
}

std::vector<TrialRecord> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open results file " + path.string());
  std::vector<TrialRecord> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("algorithm,", 0) == 0) continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() < 10) throw Error("malformed results row: " + line);
    TrialRecord r;
    r.algorithm = f[0];
    r.problem = f[1];
    r.d = std::stoull(f[2]);
    r.m = std::stoull(f[3]);
    r.N = std::stoull(f[4]);
    r.E = std::stoull(f[5]);
    r.seed = std::stoull(f[6]);
    r.igd = parse_double(f[7]);
    r.hv = parse_double(f[8]);
    r.wall_time_s = parse_double(f[9]);
    if (f.size() > 10 && f[10] != "ok") {
      r.error = f[10].rfind("error: ", 0) == 0 ? f[10].substr(7) : f[10];
      if (r.error.empty()) r.error = "error";
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_history_header(std::ostream& out) {
  out << "algorithm,problem,seed,phase,iteration,evaluations,igd,hv\n";
}

void write_history_rows(std::ostream& out, const TrialRecord& r) {
  for (const auto& h : r.history) {
    out << csv_field(r.algorithm) << ',' << csv_field(r.problem) << ',' << r.seed << ','
        << h.phase << ',' << h.iteration << ',' << h.evaluations << ',' << fmt_double(h.igd)
        << ',' << fmt_double(h.hv) << '\n';
  }
}

std::filesystem::path write_trial_front(const std::filesystem::path& dir, const TrialRecord& r) {
  std::filesystem::create_directories(dir);
  const auto path =
      dir / (sanitize(r.algorithm) + "__" + sanitize(r.problem) + "__" + std::to_string(r.seed) + ".csv");
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# algorithm=" << r.algorithm << '\n'
      << "# problem=" << r.problem << '\n'
      << "# seed=" << r.seed << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < r.m; ++i) out << (i ? "," : "") << 'f' << (i + 1);
  out << '\n';
  for (const auto& p : r.front) {
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
    out << '\n';
  }
  return path;
}

std::vector<FrontFile> collect_fronts(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<FrontFile> out;
  for (const auto& path : files) {
    FrontFile ff;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("# algorithm=", 0) == 0) ff.algorithm = line.substr(12);
      else if (line.rfind("# problem=", 0) == 0) ff.problem = line.substr(10);
      else if (line.rfind("# seed=", 0) == 0) ff.seed = std::stoull(line.substr(7));
    }
    if (ff.algorithm.empty()) ff.algorithm = path.stem().string();
    const auto pts = read_front_csv(path);
    for (std::size_t i : nondominated_indices(pts)) ff.points.push_back(pts[i]);
    out.push_back(std::move(ff));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparison table
// ---------------------------------------------------------------------------

Metric parse_metric(std::string_view s) {
  if (s == "igd") return Metric::igd;
  if (s == "hv") return Metric::hv;
  throw ConfigInvalid("unknown metric: " + std::string(s));
}

std::vector<TableRow> compare_table(const std::vector<TrialRecord>& records,
                                    const std::string& baseline, Metric metric, double alpha) {
  std::vector<std::string> problems, algorithms{baseline};
  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
  for (const auto& r : records) {
    if (std::find(problems.begin(), problems.end(), r.problem) == problems.end())
      problems.push_back(r.problem);
    if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end())
      algorithms.push_back(r.algorithm);
    if (!r.ok()) continue;
    const double v = metric == Metric::igd ? r.igd : r.hv;
    if (!std::isnan(v)) cells[{r.problem, r.algorithm}].push_back(v);
  }

  // Orientation: smaller is better after this transform.
  const double sign = metric == Metric::igd ? 1.0 : -1.0;
  std::vector<TableRow> rows;
  for (const auto& p : problems) {
    TableRow row;
    row.problem = p;
    row.algorithms = algorithms;
    for (const auto& a : algorithms) {
      const auto it = cells.find({p, a});
      if (it == cells.end() || it->second.size() < 2)
        throw MissingCell("cell (" + p + ", " + a + ") has fewer than two results");
      row.medians.push_back(median(it->second));
    }
    const auto& base = cells.at({p, baseline});
    std::vector<double> base_t(base.size());
    std::transform(base.begin(), base.end(), base_t.begin(), [&](double v) { return sign * v; });
    row.marks.push_back('\0');
    for (std::size_t k = 1; k < algorithms.size(); ++k) {
      const auto& other = cells.at({p, algorithms[k]});
      std::vector<double> other_t(other.size());
      std::transform(other.begin(), other.end(), other_t.begin(), [&](double v) { return sign * v; });
      row.marks.push_back(mark_symbol(wilcoxon_rank_sum(other_t, base_t, alpha).mark));
    }
    row.best = 0;
    for (std::size_t k = 1; k < algorithms.size(); ++k)
      if (sign * row.medians[k] < sign * row.medians[row.best]) row.best = k;
    if (algorithms.size() > 1) {
      std::size_t best_other = 1;
      for (std::size_t k = 2; k < algorithms.size(); ++k)
        if (sign * row.medians[k] < sign * row.medians[best_other]) best_other = k;
      const double bo = row.medians[best_other];
      if (bo != 0.0) row.roc = sign * (bo - row.medians[0]) / bo;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows, Metric metric) {
  out << "# metric=" << (metric == Metric::igd ? "igd" : "hv")
      << "; marks compare each algorithm with the baseline (+ better, - worse, = no "
         "significant difference); roc = baseline relative improvement over the best "
         "competitor median, positive when the baseline is better\n";
  if (rows.empty()) return;
  out << "problem";
  for (const auto& a : rows.front().algorithms) out << ',' << a << "_median," << a << "_mark";
  out << ",best,roc\n";
  for (const auto& r : rows) {
    out << csv_field(r.problem);
    for (std::size_t k = 0; k < r.algorithms.size(); ++k) {
      out << ',' << fmt_double(r.medians[k]) << ',';
      if (r.marks[k]) out << r.marks[k];
    }
    out << ',' << r.algorithms[r.best] << ',';
    if (r.roc) out << fmt_double(*r.roc);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Scaling
// ---------------------------------------------------------------------------

std::vector<ScalingPoint> bench_scaling(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  constexpr std::size_t n = 20;
  constexpr std::uint64_t per_phase = 100;
  std::vector<ScalingPoint> out;
  for (std::size_t d : dims) {
    const Problem problem = make_sp1(d);
    VmofConfig cfg;
    cfg.population_size = n;
    cfg.n_d = 5;
    cfg.total_budget = n + 3 * per_phase;
    cfg.phase_fraction = static_cast<double>(per_phase) / static_cast<double>(cfg.total_budget);
    cfg.seed = seed;
    cfg.record_metrics = false;
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult r = vmof_run(problem, cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back({d, secs, r.evaluations, secs / static_cast<double>(r.evaluations)});
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DimensionMismatch("need matching series of length >= 2");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace vmof
