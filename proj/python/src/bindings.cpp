#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vmof/baselines.hpp"
#include "vmof/benchmarks.hpp"
#include "vmof/dominance.hpp"
#include "vmof/experiment.hpp"
#include "vmof/framework.hpp"
#include "vmof/statistics.hpp"

namespace py = pybind11;
using namespace vmof;

namespace {

py::dict history_dict(const std::vector<HistoryRecord>& history) {
  py::list phase, iteration, evaluations, igd_v, hv_v;
  for (const auto& h : history) {
    phase.append(h.phase);
    iteration.append(h.iteration);
    evaluations.append(h.evaluations);
    igd_v.append(h.igd);
    hv_v.append(h.hv);
  }
  py::dict d;
  d["phase"] = phase;
  d["iteration"] = iteration;
  d["evaluations"] = evaluations;
  d["igd"] = igd_v;
  d["hv"] = hv_v;
  return d;
}

py::dict run_result_dict(const Problem& problem, const RunResult& r) {
  std::vector<Vector> xs;
  for (const auto& s : r.final_pop) xs.push_back(s.x);
  const auto fs = objectives_of(r.final_pop);
  py::dict d;
  d["x"] = xs;
  d["f"] = fs;
  d["evaluations"] = r.evaluations;
  d["iterations"] = r.iterations;
  d["history"] = history_dict(r.history);
  if (problem.has_front()) {
    const auto front = default_reference_front(problem);
    std::vector<Vector> nd;
    for (std::size_t i : nondominated_indices(fs)) nd.push_back(fs[i]);
    d["igd"] = igd(front, nd);
    d["hv"] = hypervolume(nd, default_hv_reference(problem, front));
  }
  return d;
}

py::dict record_dict(const TrialRecord& r) {
  py::dict d;
  d["algorithm"] = r.algorithm;
  d["problem"] = r.problem;
  d["d"] = r.d;
  d["m"] = r.m;
  d["N"] = r.N;
  d["E"] = r.E;
  d["seed"] = r.seed;
  d["igd"] = r.igd;
  d["hv"] = r.hv;
  d["wall_time_s"] = r.wall_time_s;
  d["error"] = r.error;
  d["front"] = r.front;
  d["history"] = history_dict(r.history);
  return d;
}

}  // namespace

PYBIND11_MODULE(vmof, mod) {
  mod.doc() = "Direction-guided optimization for very large-scale multiobjective problems";

  py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigInvalid>(mod, "ConfigInvalid", PyExc_ValueError);
  py::register_exception<DimensionMismatch>(mod, "DimensionMismatch", PyExc_ValueError);
  py::register_exception<OutOfBounds>(mod, "OutOfBounds", PyExc_ValueError);

  py::class_<Problem>(mod, "Problem")
      .def_readonly("name", &Problem::name)
      .def_readonly("dim", &Problem::dim)
      .def_readonly("n_obj", &Problem::n_obj)
      .def_readonly("lower", &Problem::lower)
      .def_readonly("upper", &Problem::upper)
      .def("evaluate", [](const Problem& p, const Vector& x) {
        if (x.size() != p.dim) throw DimensionMismatch("x has the wrong length");
        return p.evaluate(x);
      })
      .def("reference_front",
           [](const Problem& p, std::size_t k) { return sample_reference_front(p, k).points; },
           py::arg("k") = 1000)
      .def("__repr__", [](const Problem& p) { return "<Problem " + p.name + ">"; });

  mod.def("load_problem", &load_external_problem, py::arg("descriptor"),
          "Build a problem from 'name:key=value,...', e.g. 'sp1:d=1000'.");

  mod.def("dominates", [](const Vector& a, const Vector& b) { return dominates(a, b); });
  mod.def("fast_nondominated_sort",
          [](const std::vector<Vector>& objs) { return fast_nondominated_sort(objs).fronts; },
          "Fronts as lists of indices, best first.");
  mod.def("crowding_distance", &crowding_distance);
  mod.def("environmental_select", &environmental_select_indices, py::arg("objectives"),
          py::arg("n"));
  mod.def("nondominated_indices", &nondominated_indices);

  mod.def("igd", [](const std::vector<Vector>& front, const std::vector<Vector>& approx) {
    ReferenceFront f;
    f.points = front;
    return igd(f, approx);
  });
  mod.def("hypervolume", [](const std::vector<Vector>& approx, const Vector& ref) {
    return hypervolume(approx, ref);
  });
  mod.def(
      "wilcoxon_rank_sum",
      [](const Vector& a, const Vector& b, double alpha, bool exact) {
        const auto r = wilcoxon_rank_sum(a, b, alpha, exact);
        py::dict d;
        d["p_value"] = r.p_value;
        d["mark"] = std::string(1, mark_symbol(r.mark));
        d["u"] = r.u_statistic;
        d["z"] = r.z;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("alpha") = 0.05, py::arg("exact") = false);

  mod.def(
      "run_vmof",
      [](const std::string& problem, std::uint64_t budget, std::uint64_t seed,
         std::size_t population_size, std::size_t n_d, const std::string& reward_mode,
         bool finetune, bool record_metrics) {
        const Problem p = load_external_problem(problem);
        VmofConfig cfg;
        cfg.total_budget = budget;
        cfg.seed = seed;
        cfg.population_size = population_size;
        cfg.n_d = n_d;
        cfg.sampling.reward_mode = parse_reward_mode(reward_mode);
        cfg.finetune.enabled = finetune;
        cfg.record_metrics = record_metrics;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = vmof_run(p, cfg);
        }
        return run_result_dict(p, r);
      },
      py::arg("problem"), py::arg("budget"), py::arg("seed") = 0,
      py::arg("population_size") = 0, py::arg("n_d") = 0, py::arg("reward_mode") = "front",
      py::arg("finetune") = true, py::arg("record_metrics") = true);

  auto baseline = [](RunResult (*run)(const Problem&, const BaselineConfig&)) {
    return [run](const std::string& problem, std::uint64_t budget, std::uint64_t seed,
                 std::size_t population_size) {
      const Problem p = load_external_problem(problem);
      BaselineConfig cfg;
      cfg.total_budget = budget;
      cfg.seed = seed;
      cfg.population_size = population_size;
      RunResult r;
      {
        py::gil_scoped_release release;
        r = run(p, cfg);
      }
      return run_result_dict(p, r);
    };
  };
  mod.def("run_nsga2", baseline(&nsga2_run), py::arg("problem"), py::arg("budget"),
          py::arg("seed") = 0, py::arg("population_size") = 0);
  mod.def("run_random_search", baseline(&random_search_run), py::arg("problem"),
          py::arg("budget"), py::arg("seed") = 0, py::arg("population_size") = 0);

  mod.def(
      "run_plan",
      [](const std::string& plan_json, std::size_t workers) {
        const auto plan = parse_plan(plan_json);
        std::vector<TrialRecord> recs;
        {
          py::gil_scoped_release release;
          recs = run_experiment(plan, workers);
        }
        py::list out;
        for (const auto& r : recs) out.append(record_dict(r));
        return out;
      },
      py::arg("plan_json"), py::arg("workers") = 1,
      "Run every cell of a JSON plan and return one dict per cell.");
}
