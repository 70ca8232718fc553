// Copyright 2023 The Authors.
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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "masub/errors.h"
#include "masub/instance.h"
#include "masub/runner.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitBoundViolation = 3;
constexpr int kExitParseError = 4;
constexpr int kExitCapRefusal = 5;

void Emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    masub::WriteTextFile(out_path, text);
  }
}

std::vector<masub::Problem> LoadCorpus(const std::vector<std::string>& paths) {
  std::vector<masub::Problem> problems;
  for (const auto& path : paths) {
    problems.push_back(masub::ParseInstanceFile(path));
  }
  return problems;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solver and verification harness for constrained submodular "
               "optimization in single-agent, multi-agent, and multivariate "
               "forms"};
  app.require_subcommand(1);

  std::string instance_path, algorithm, out_path, family;
  std::vector<std::string> corpus_paths, algorithms;
  uint64_t seed = 0;
  int tau = -1;
  int brute_cap = 20;
  bool force_brute = false;
  int count = 10;

  CLI::App* solve = app.add_subcommand("solve", "run one algorithm on one instance");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--algorithm", algorithm)->required();
  solve->add_option("--seed", seed);
  solve->add_option("--tau", tau);
  solve->add_option("--brute-cap", brute_cap);
  solve->add_flag("--force-brute", force_brute);
  solve->add_option("--out", out_path);

  CLI::App* lp = app.add_subcommand("lp", "solve the covering relaxation only");
  lp->add_option("--instance", instance_path)->required();
  lp->add_option("--out", out_path);
  lp->add_option("--brute-cap", brute_cap);

  CLI::App* verify = app.add_subcommand(
      "verify", "re-check oracle flags and constraint structure");
  verify->add_option("--instance", instance_path)->required();
  verify->add_option("--out", out_path);

  CLI::App* gen = app.add_subcommand("gen", "generate a benchmark corpus");
  gen->add_option("--family", family)->required();
  gen->add_option("--count", count);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path)->required();

  CLI::App* bench = app.add_subcommand("bench", "run algorithms over a corpus");
  bench->add_option("--instance", corpus_paths)->required();
  bench->add_option("--algorithm", algorithms);
  bench->add_option("--brute-cap", brute_cap);
  bench->add_option("--seed", seed);
  bench->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    masub::RunOptions options;
    options.brute_cap_log2 = brute_cap;
    options.force_brute = force_brute;
    options.seed = seed;

    if (solve->parsed()) {
      masub::Problem problem = masub::ParseInstanceFile(instance_path);
      if (tau >= 0) {
        problem.tau = tau;
        if (problem.task == "max") problem.task = "robust";
      }
      masub::ReportRecord rec = masub::Run(problem, algorithm, options);
      Emit(out_path, rec.ToJson().dump() + "\n");
      if (!rec.feasible) return kExitInfeasible;
      if (!rec.bound_ok) return kExitBoundViolation;
      return kExitOk;
    }
    if (lp->parsed()) {
      masub::Problem problem = masub::ParseInstanceFile(instance_path);
      masub::ReportRecord rec = masub::Run(problem, "lp-only", options);
      Emit(out_path, rec.ToJson().dump() + "\n");
      return kExitOk;
    }
    if (verify->parsed()) {
      masub::Problem problem = masub::ParseInstanceFile(instance_path);
      std::string text;
      bool ok = true;
      for (const auto& line : masub::VerifyProblem(problem)) {
        text += line + "\n";
        if (line.rfind("FAIL", 0) == 0) ok = false;
      }
      Emit(out_path, text);
      return ok ? kExitOk : kExitBoundViolation;
    }
    if (gen->parsed()) {
      std::vector<std::string> files =
          masub::GenerateCorpus(family, count, seed);
      std::filesystem::create_directories(out_path);
      for (size_t i = 0; i < files.size(); ++i) {
        std::string name = out_path + "/" + family + "-" +
                           std::to_string(seed) + "-" + std::to_string(i) +
                           ".jsonl";
        masub::WriteTextFile(name, files[i]);
        std::cout << name << "\n";
      }
      return kExitOk;
    }
    if (bench->parsed()) {
      std::vector<masub::Problem> problems = LoadCorpus(corpus_paths);
      if (algorithms.empty()) {
        algorithms = {"bb-round",    "ma-bb-round",    "fracture",
                      "mv-k-alpha",  "msca-greedy",    "msca-bmatching",
                      "ma-greedy",   "robust-exhaustive"};
      }
      masub::BenchSummary summary = masub::Bench(problems, algorithms, options);
      std::string text;
      for (const auto& rec : summary.records) {
        text += rec.ToJson().dump() + "\n";
      }
      nlohmann::json table = nlohmann::json::array();
      for (const auto& row : summary.rows) {
        table.push_back({{"algorithm", row.algorithm},
                         {"runs", row.runs},
                         {"mean-ratio", row.mean_ratio},
                         {"max-ratio", row.max_ratio},
                         {"min-ratio", row.min_ratio},
                         {"seconds", row.total_seconds},
                         {"violations", row.violations}});
      }
      text += nlohmann::json{{"summary", table}}.dump() + "\n";
      Emit(out_path, text);
      if (!summary.ok) {
        std::cerr << "certified bound violated; see records\n";
        return kExitBoundViolation;
      }
      return kExitOk;
    }
  } catch (const masub::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const masub::CapExceededError& e) {
    std::cerr << "cap refusal: " << e.what() << "\n";
    return kExitCapRefusal;
  } catch (const masub::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const masub::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
