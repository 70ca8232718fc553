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

#ifndef MASUB_RUNNER_H_
#define MASUB_RUNNER_H_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "masub/instance.h"
#include "masub/rational.h"

namespace masub {

struct RunOptions {
  int brute_cap_log2 = 20;  // enumeration budget for brute-force OPT
  bool force_brute = false;
  uint64_t seed = 0;
};

// One solve, with feasibility re-verified by module oracles and certified
// bounds re-checked, never trusted from the solver.
struct ReportRecord {
  std::string instance_digest;
  std::string algorithm;
  std::string task;
  nlohmann::json solution;
  Rational objective;
  std::optional<Rational> lp_value;
  std::optional<Rational> brute_opt;
  std::optional<double> achieved_ratio;  // objective / brute_opt
  bool feasible = false;
  bool bound_ok = true;
  std::string bound_note;
  double wall_seconds = 0;
  std::vector<std::string> verification;
  nlohmann::json extra;

  nlohmann::json ToJson() const;
};

// Valid algorithm ids for a task.
std::vector<std::string> AlgorithmsForTask(const std::string& task);

ReportRecord Run(const Problem& problem, const std::string& algorithm,
                 const RunOptions& options = {});

// Runs the instance verification harness (flag validation, constraint
// sanity); returns human-readable verdict lines, all starting with ok/FAIL.
std::vector<std::string> VerifyProblem(const Problem& problem);

// Deterministic instance generators.
std::vector<std::string> GenerateCorpus(const std::string& family,
                                        int count, uint64_t seed);
const std::vector<std::string>& CorpusFamilies();

struct BenchSummary {
  struct Row {
    std::string algorithm;
    int runs = 0;
    double mean_ratio = 0;
    double max_ratio = 0;
    double min_ratio = 0;
    double total_seconds = 0;
    int violations = 0;
  };
  std::vector<Row> rows;
  std::vector<ReportRecord> records;
  bool ok = true;
};

BenchSummary Bench(const std::vector<Problem>& instances,
                   const std::vector<std::string>& algorithms,
                   const RunOptions& options = {});

}  // namespace masub

#endif  // MASUB_RUNNER_H_
