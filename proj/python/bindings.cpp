// Copyright 2026 The FedOwen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>

#include "fedowen/aggregation.hpp"
#include "fedowen/budget.hpp"
#include "fedowen/config.hpp"
#include "fedowen/estimators.hpp"
#include "fedowen/game.hpp"
#include "fedowen/idx.hpp"
#include "fedowen/results.hpp"
#include "fedowen/selection.hpp"
#include "fedowen/simulator.hpp"

namespace py = pybind11;
using namespace fedowen;

namespace {

CoalitionalGame game_from_callable(int n, std::function<double(std::uint64_t)> fn,
                                   std::string name) {
  return CoalitionalGame(
      n, [fn = std::move(fn)](Coalition s) { return fn(s.mask()); }, std::move(name));
}

py::dict estimate(const CoalitionalGame& game, const std::string& estimator, int Q,
                  int M, double eta, const std::string& mode, const std::string& grid,
                  std::uint64_t seed, std::int64_t budget) {
  const int n = game.players();
  const double v_empty = game(Coalition::empty(n));
  const double v_full = game(Coalition::full(n));
  const NormalizedGame ng = v_full != v_empty ? normalize(game) : shift_only(game, v_full);
  EstimatorSpec spec;
  spec.id = estimator;
  spec.levels = Q;
  spec.draws = M;
  spec.eta = eta;
  spec.mode = parse_owen_mode(mode);
  spec.grid = parse_owen_grid(grid);
  spec.seed = seed;
  BudgetMeter meter(budget > 0 ? budget : static_cast<std::int64_t>(n) * M);
  ContributionVector cv = run_estimator(ng, spec, meter);
  for (double& v : cv.values) v *= ng.scale();
  py::dict out;
  out["values"] = cv.values;
  out["estimator"] = cv.estimator_id;
  out["budget_used"] = meter.used();
  out["budget_limit"] = meter.limit();
  return out;
}

py::dict round_to_dict(const RoundRecord& r) {
  py::dict d;
  d["round"] = r.round;
  d["selected"] = r.selected;
  d["phi"] = r.phi;
  d["alpha"] = r.alpha;
  d["eval_accuracy"] = r.eval_accuracy;
  d["utility_calls"] = r.utility_calls;
  d["explored"] = r.explored;
  return d;
}

py::dict report_to_dict(const ExperimentReport& report) {
  py::list runs;
  for (const auto& run : report.runs) {
    py::dict d;
    d["seed"] = run.seed;
    d["initial_accuracy"] = run.initial_accuracy;
    d["final_accuracy"] = run.final_accuracy;
    py::list rounds;
    for (const auto& r : run.rounds) rounds.append(round_to_dict(r));
    d["rounds"] = rounds;
    runs.append(d);
  }
  py::dict out;
  out["runs"] = runs;
  out["mean_final_accuracy"] = report.mean_final_accuracy;
  out["std_final_accuracy"] = report.std_final_accuracy;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Contribution valuation estimators and a federated-learning simulator";

  py::register_exception<Error>(m, "FedOwenError", PyExc_RuntimeError);
  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);

  py::class_<CoalitionalGame>(m, "Game")
      .def(py::init(&game_from_callable), py::arg("n"), py::arg("utility"),
           py::arg("name") = "python",
           "Game on n players; utility(mask) receives the coalition bitmask.")
      .def_property_readonly("players", &CoalitionalGame::players)
      .def_property_readonly("name", &CoalitionalGame::name)
      .def_property_readonly("eval_count", &CoalitionalGame::eval_count)
      .def("__call__", [](const CoalitionalGame& g, std::uint64_t mask) {
        return g(Coalition(g.players(), mask));
      });

  m.def("standard_game", &standard_game, py::arg("name"), py::arg("n"),
        py::arg("seed") = 0);
  m.def("standard_game_names", &standard_game_names);
  m.def("additive_game", &additive_game, py::arg("weights"));
  m.def("table_game",
        [](int n, std::vector<double> values) { return table_game(n, std::move(values)); },
        py::arg("n"), py::arg("values"));
  m.def("exact_shapley", [](const CoalitionalGame& g) { return exact_shapley(g).values; });
  m.def("exact_banzhaf", [](const CoalitionalGame& g) { return exact_banzhaf(g).values; });

  m.def("estimator_ids", &estimator_ids);
  m.def("estimate", &estimate, py::arg("game"), py::arg("estimator") = "owen",
        py::arg("Q") = 2, py::arg("M") = 4, py::arg("eta") = 0.05,
        py::arg("mode") = "visited", py::arg("grid") = "stratified", py::arg("seed") = 0,
        py::arg("budget") = 0,
        "Runs an estimator under a budget of n*M utility calls (or `budget`).");

  m.def(
      "select_clients",
      [](std::vector<double> phi, std::vector<std::int64_t> sigma, std::int64_t t,
         double epsilon, double c, double tau, int k, std::uint64_t seed,
         std::uint32_t round) {
        BanditState state(phi.size());
        if (!sigma.empty()) state.sigma = std::move(sigma);
        state.t = t;
        SelectionConfig cfg;
        cfg.epsilon = epsilon;
        cfg.c = c;
        cfg.tau = tau;
        cfg.k = k;
        CounterRng rng(seed, StreamTag::kSelection, round);
        SelectionOutcome out = select_clients(phi, state, cfg, rng);
        py::dict d;
        d["selected"] = out.selected;
        d["explored"] = out.explored;
        d["weights"] = out.weights;
        d["sigma"] = state.sigma;
        return d;
      },
      py::arg("phi"), py::arg("sigma") = std::vector<std::int64_t>{}, py::arg("t") = 0,
      py::arg("epsilon") = 0.1, py::arg("c") = 0.1, py::arg("tau") = 0.0,
      py::arg("k") = 1, py::arg("seed") = 0, py::arg("round") = 0);

  m.def("softmax_weights",
        [](std::vector<double> phi) { return softmax_weights(phi); });
  m.def("shapfed_wa_weights", [](std::vector<std::vector<double>> grads) {
    return shapfed_wa_weights(grads);
  });

  m.def("default_config", []() { return serialize_config(ExperimentConfig{}); },
        "Default configuration as config-file text.");
  m.def("normalize_config",
        [](const std::string& text) { return serialize_config(parse_config(text)); },
        "Parses and validates config text, returning its canonical form.");
  m.def(
      "run_experiment",
      [](const std::string& text, bool write) {
        const ExperimentConfig cfg = parse_config(text);
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(cfg);
          if (write) write_results(report, cfg.output_dir);
        }
        return report_to_dict(report);
      },
      py::arg("config_text"), py::arg("write") = false);

  m.def("read_idx", [](const std::filesystem::path& path) {
    IdxTensor t = read_idx(path);
    return py::make_tuple(t.dims, py::bytes(reinterpret_cast<const char*>(t.data.data()),
                                            t.data.size()));
  });
}
