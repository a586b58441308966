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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fedowen/budget.hpp"
#include "fedowen/config.hpp"
#include "fedowen/estimators.hpp"
#include "fedowen/game.hpp"
#include "fedowen/results.hpp"
#include "fedowen/selection.hpp"
#include "fedowen/simulator.hpp"
#include "grad_check.hpp"
#include "oracles.hpp"

using namespace fedowen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = "first failure: " + what + (detail.empty() ? "" : "; " + detail);
    ok = ok && cond;
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

int failures = 0;

void criterion(int id, const std::string& name, double limit_s,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.note(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(secs < limit_s, "runtime " + fmt(secs) + " s over " + fmt(limit_s) + " s");
  if (!out.ok) ++failures;
  std::cout << (out.ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << name << " ["
            << fmt(secs, 3) << " s] " << out.detail << std::endl;
}

oracle::Table table_from(const CoalitionalGame& g) {
  const int n = g.players();
  return oracle::table_of(n, [&](std::uint64_t m) { return g(Coalition(n, m)); });
}

CoalitionalGame from_table(int n, const oracle::Table& t, const std::string& name) {
  return table_game(n, t, name);
}

// Criterion 9's experiment; `mode` picks the arm.
ExperimentConfig desk_config(const std::string& mode) {
  ExperimentConfig cfg;
  cfg.classes = 5;
  cfg.examples = 6000;
  cfg.imbalance_factor = 0.05;
  cfg.dirichlet_alpha = 0.05;
  cfg.n_clients = 30;
  cfg.clients_per_round = 5;
  cfg.rounds = 40;
  cfg.model = "logistic";
  cfg.seeds = {1, 2, 3, 4, 5};
  if (mode == "fedavg") {
    cfg.estimator = "none";
    cfg.aggregator = "fedavg";
    cfg.ablation = true;
  } else if (mode == "ablation") {
    cfg.ablation = true;
  }
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main() {
  const fs::path tmp = FEDOWEN_TEST_TMP;
  fs::create_directories(tmp);

  criterion(1, "Shapley axioms on 50 random monotone 8-player games", 10.0, [](Outcome& out) {
    double worst_eff = 0, worst_sym = 0, worst_dummy = 0, worst_add = 0, worst_oracle = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const int n = 8;
      const CoalitionalGame v = random_monotone_game(n, seed);
      const CoalitionalGame w = random_monotone_game(n, seed + 1000);
      const auto tv = table_from(v);
      const auto phi = exact_shapley(v).values;
      double total = 0;
      for (double x : phi) total += x;
      worst_eff = std::max(worst_eff, std::abs(total - (tv.back() - tv.front())));
      worst_oracle =
          std::max(worst_oracle, oracle::max_abs_diff(phi, oracle::shapley_by_permutations(n, tv)));

      // Players 0 and 1 made interchangeable by averaging over the swap.
      oracle::Table sym(tv.size());
      for (std::uint64_t m = 0; m < tv.size(); ++m) {
        const std::uint64_t b0 = m & 1, b1 = (m >> 1) & 1;
        const std::uint64_t swapped = (m & ~std::uint64_t{3}) | (b0 << 1) | b1;
        sym[m] = 0.5 * (tv[m] + tv[swapped]);
      }
      const auto ps = exact_shapley(from_table(n, sym, "sym")).values;
      worst_sym = std::max(worst_sym, std::abs(ps[0] - ps[1]));

      // Player 7 made a dummy.
      oracle::Table dum(tv.size());
      for (std::uint64_t m = 0; m < tv.size(); ++m) dum[m] = tv[m & 0x7f];
      worst_dummy = std::max(worst_dummy, std::abs(exact_shapley(from_table(n, dum, "d")).values[7]));

      const auto pw = exact_shapley(w).values;
      const auto pvw = exact_shapley(sum_game(v, w)).values;
      for (int i = 0; i < n; ++i) worst_add = std::max(worst_add, std::abs(pvw[i] - (phi[i] + pw[i])));
    }
    out.require(worst_eff <= 1e-9, "efficiency " + fmt(worst_eff));
    out.require(worst_sym <= 1e-12, "symmetry " + fmt(worst_sym));
    out.require(worst_dummy <= 1e-12, "dummy " + fmt(worst_dummy));
    out.require(worst_add <= 1e-9, "additivity " + fmt(worst_add));
    out.require(worst_oracle <= 1e-12, "permutation oracle " + fmt(worst_oracle));
    out.note("max efficiency gap " + fmt(worst_eff) + ", additivity gap " + fmt(worst_add));
  });

  // Ten random 6-player games shared by criteria 2 and 3.
  std::vector<CoalitionalGame> six;
  for (std::uint64_t g = 1; g <= 10; ++g) six.push_back(random_monotone_game(6, 600 + g));

  criterion(2, "strict Owen mean within 3 SE of exact Shapley (Q=20, M=2000, 50 runs)", 120.0,
            [&](Outcome& out) {
    int checks = 0, misses = 0;
    double worst_z = 0;
    for (std::size_t g = 0; g < six.size(); ++g) {
      const auto exact = exact_shapley(six[g]).values;
      std::vector<std::vector<double>> runs(6);
      for (std::uint64_t r = 0; r < 50; ++r) {
        const auto est = owen_strict(six[g], 20, 2000, 10000 * (g + 1) + r).values;
        for (int i = 0; i < 6; ++i) runs[i].push_back(est[i]);
      }
      for (int i = 0; i < 6; ++i) {
        const auto [mean, se] = oracle::mean_se(runs[i]);
        const double z = std::abs(mean - exact[i]) / se;
        worst_z = std::max(worst_z, z);
        ++checks;
        if (z > 3.0) ++misses;
      }
    }
    out.require(misses == 0, std::to_string(misses) + " of " + std::to_string(checks) +
                                 " players beyond 3 SE");
    out.note(std::to_string(checks) + " checks, max |z| " + fmt(worst_z, 3));
  });

  criterion(3, "Owen walk rank fidelity and Q=1 coupling with permutation sampling", 120.0,
            [&](Outcome& out) {
    double rho_sum = 0;
    int count = 0;
    bool identical = true;
    for (const auto& raw : six) {
      const NormalizedGame g = normalize(raw);
      const auto exact = exact_shapley(raw).values;
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        BudgetMeter meter(6 * 64);
        const auto est =
            owen_walk(g, {2, 64, 0.05, OwenNormalization::kVisited, seed}, meter).values;
        rho_sum += oracle::spearman(est, exact);
        ++count;

        BudgetMeter a(6 * 64), b(6 * 64);
        const auto walk = owen_walk(g, {1, 64, 0.0, OwenNormalization::kPaper, seed}, a).values;
        const auto mc = mc_shapley(g.as_game(), 64, b, seed).values;
        identical = identical && walk == mc;
      }
    }
    const double rho = rho_sum / count;
    out.require(rho >= 0.9, "mean Spearman " + fmt(rho));
    out.require(identical, "paper mode Q=1, eta=0 differs from permutation sampling");
    out.note("mean Spearman " + fmt(rho) + " over " + std::to_string(count) +
             " runs; Q=1 coupling bit-identical: " + (identical ? "yes" : "no"));
  });

  criterion(4, "truncation economics on monotone normalized 10-player games", 30.0,
            [](Outcome& out) {
    // Half saturating (concave) and half random supermodular games.
    std::int64_t walks[2] = {0, 0}, truncated[2] = {0, 0};
    bool exact_budget = true;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const int family = seed % 2 ? 0 : 1;
      const CoalitionalGame raw =
          family == 0 ? saturating_game(10, seed) : random_monotone_game(10, seed);
      const NormalizedGame g = normalize(raw);
      BudgetMeter meter(10 * 4);
      std::vector<WalkRecord> trace;
      (void)owen_walk(g, {2, 4, 0.05, OwenNormalization::kVisited, seed}, meter, &trace);
      exact_budget = exact_budget && meter.used() == 40;
      for (const auto& w : trace) {
        ++walks[family];
        truncated[family] += w.truncated ? 1 : 0;
      }
    }
    const double rate =
        double(truncated[0] + truncated[1]) / double(walks[0] + walks[1]);
    out.require(rate >= 0.10, "truncation rate " + fmt(rate));
    out.require(exact_budget, "meter did not finish at n*M");
    out.note("truncated " + fmt(100 * rate, 3) + "% of walks (saturating " +
             std::to_string(truncated[0]) + "/" + std::to_string(walks[0]) +
             ", supermodular " + std::to_string(truncated[1]) + "/" +
             std::to_string(walks[1]) + "), every meter at n*M");
  });

  criterion(5, "GTG(eps=0) and WeightedSHAP(1,1) equal permutation sampling", 30.0,
            [](Outcome& out) {
    int equal_gtg = 0, equal_wshap = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const CoalitionalGame g = normalize(random_monotone_game(8, 300 + seed)).as_game();
      BudgetMeter a(8 * 32), b(8 * 32), c(8 * 32);
      const auto mc = mc_shapley(g, 32, a, seed).values;
      equal_gtg += gtg_shapley(g, 0.0, 32, b, seed).values == mc;
      equal_wshap += weighted_shap(g, 1.0, 1.0, 32, c, seed).values == mc;
    }
    out.require(equal_gtg == 20, "gtg matched on " + std::to_string(equal_gtg) + "/20");
    out.require(equal_wshap == 20, "wshap matched on " + std::to_string(equal_wshap) + "/20");
    out.note("exact equality on 20/20 games for both couplings");
  });

  criterion(6, "Data Banzhaf within 0.02 of half the exact Banzhaf value", 60.0,
            [](Outcome& out) {
    double worst = 0;
    for (std::uint64_t game = 1; game <= 5; ++game) {
      const NormalizedGame g = normalize(random_monotone_game(6, 700 + game));
      auto half = exact_banzhaf(g.as_game()).values;
      for (double& x : half) x /= 2;
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        BudgetMeter meter(6 * 20000);
        const auto est = data_banzhaf(g.as_game(), 20000, meter, seed).values;
        worst = std::max(worst, oracle::max_abs_diff(est, half));
      }
    }
    out.require(worst <= 0.02, "max error " + fmt(worst));
    out.note("5 normalized games x 3 seeds, max error " + fmt(worst));
  });

  criterion(7, "selection statistics", 60.0, [](Outcome& out) {
    SelectionConfig cfg;
    cfg.epsilon = 1.0;
    cfg.k = 3;
    BanditState state(10);
    const std::vector<double> phi(10, 0.0);
    std::vector<int> hits(10, 0);
    for (std::uint32_t r = 0; r < 10000; ++r) {
      CounterRng rng(77, StreamTag::kSelection, r);
      for (int i : select_clients(phi, state, cfg, rng).selected) ++hits[i];
      ++state.t;
    }
    double worst = 0;
    for (int h : hits) worst = std::max(worst, std::abs(h / 10000.0 - 0.3));
    out.require(worst <= 0.02, "exploration frequency off by " + fmt(worst));

    SelectionConfig greedy;
    greedy.epsilon = 0.0;
    greedy.k = 3;
    CounterRng gen(78, StreamTag::kGameParams);
    int argmax_ok = 0;
    for (std::uint32_t r = 0; r < 10000; ++r) {
      std::vector<double> p(10);
      for (double& x : p) x = gen.uniform();
      BanditState s(10);
      std::fill(s.sigma.begin(), s.sigma.end(), static_cast<std::int64_t>(gen.below(20)));
      s.t = static_cast<std::int64_t>(r);
      CounterRng rng(79, StreamTag::kSelection, r);
      const auto o = select_clients(p, s, greedy, rng);
      const auto best = std::max_element(p.begin(), p.end()) - p.begin();
      const double top = *std::max_element(o.weights.begin(), o.weights.end());
      argmax_ok += !o.explored && o.weights[best] == top;
    }
    out.require(argmax_ok == 10000, "argmax kept the top weight in " +
                                        std::to_string(argmax_ok) + "/10000 rounds");
    out.note("max frequency deviation " + fmt(worst) + "; argmax top weight 10000/10000");
  });

  criterion(8, "analytic gradients vs central differences (both models, 100 points)", 30.0,
            [](Outcome& out) {
    BlobSpec b;
    b.classes = 5;
    b.examples = 500;
    b.dim = 8;
    b.seed = 3;
    const Dataset d = make_blobs(b);
    double worst = 0;
    for (auto arch : {Architecture::kLogistic, Architecture::kMlp}) {
      const ModelSpec spec{arch, 8, 5, 6};
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        worst = std::max(worst, gradcheck::relative_error(spec, d, seed));
      }
    }
    out.require(worst <= 1e-4, "relative error " + fmt(worst));
    out.note("worst relative error " + fmt(worst));
  });

  criterion(9, "desk-scale trend: FedOwen >= FedAvg and adaptive >= ablation", 600.0,
            [](Outcome& out) {
    const auto fedowen = run_experiment(desk_config("fedowen"));
    const auto fedavg = run_experiment(desk_config("fedavg"));
    const auto ablation = run_experiment(desk_config("ablation"));
    out.require(fedowen.mean_final_accuracy >= fedavg.mean_final_accuracy,
                "FedOwen below FedAvg");
    out.require(fedowen.mean_final_accuracy >= ablation.mean_final_accuracy,
                "adaptive below non-adaptive");
    out.note("FedOwen " + fmt(fedowen.mean_final_accuracy) + " +- " +
             fmt(fedowen.std_final_accuracy) + ", FedAvg " + fmt(fedavg.mean_final_accuracy) +
             " +- " + fmt(fedavg.std_final_accuracy) + ", w/o adaptive " +
             fmt(ablation.mean_final_accuracy) + " +- " + fmt(ablation.std_final_accuracy));
  });

  criterion(10, "sensitivity sweeps over Q and epsilon emit one summary per value", 600.0,
            [&](Outcome& out) {
    ExperimentConfig base = desk_config("fedowen");
    base.seeds = {1};
    const fs::path cfg_path = tmp / "sweep.cfg";
    {
      std::ofstream f(cfg_path);
      f << serialize_config(base);
    }
    const std::vector<std::pair<std::string, std::vector<std::string>>> sweeps = {
        {"Q", {"1", "2", "4", "8"}}, {"epsilon", {"0", "0.1", "0.3", "1.0"}}};
    int summaries = 0;
    for (const auto& [param, values] : sweeps) {
      const fs::path root = tmp / ("sweep_" + param);
      fs::remove_all(root);
      std::string joined;
      for (const auto& v : values) joined += (joined.empty() ? "" : ",") + v;
#ifdef FEDOWEN_CLI
      const std::string cmd = std::string("\"") + FEDOWEN_CLI + "\" sweep \"" + cfg_path.string() +
                              "\" --param " + param + " --values " + joined + " --output \"" +
                              root.string() + "\" > \"" + (tmp / "sweep.log").string() + "\"";
      out.require(std::system(cmd.c_str()) == 0, "sweep exited non-zero for " + param);
#else
      for (const auto& v : values) {
        ExperimentConfig cfg = base;
        set_config_value(cfg, param, v);
        write_results(run_experiment(cfg), root / (param + "_" + v));
      }
#endif
      for (const auto& v : values) {
        const fs::path summary = root / (param + "_" + v) / "summary.json";
        if (!fs::exists(summary)) {
          out.require(false, "missing " + summary.string());
          continue;
        }
        const auto doc = nlohmann::json::parse(slurp(summary));
        const bool echoed = param == "Q" ? doc["config"]["Q"] == std::stoi(v)
                                         : doc["config"]["epsilon"] == std::stod(v);
        out.require(echoed, "summary for " + param + "=" + v + " does not echo the value");
        ++summaries;
      }
    }
    out.note(std::to_string(summaries) + "/8 summaries");
  });

  criterion(11, "same config and seed give byte-identical CSVs", 600.0, [&](Outcome& out) {
    ExperimentConfig cfg = desk_config("fedowen");
    cfg.seeds = {1};
    const fs::path a = tmp / "repro_a";
    const fs::path b = tmp / "repro_b";
    fs::remove_all(a);
    fs::remove_all(b);
    write_results(run_experiment(cfg), a);
    cfg.threads = 4;  // worker count must not matter
    write_results(run_experiment(cfg), b);
    const std::string csv_a = slurp(a / "rounds_seed1.csv");
    const std::string csv_b = slurp(b / "rounds_seed1.csv");
    out.require(!csv_a.empty(), "empty CSV");
    out.require(csv_a == csv_b, "CSV bytes differ");
    out.note(std::to_string(csv_a.size()) + " bytes, identical");
  });

  std::cout << (failures == 0 ? "all acceptance criteria passed"
                              : std::to_string(failures) + " acceptance criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
