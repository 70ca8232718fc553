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

#include "masub/instance.h"

#include <fstream>
#include <sstream>

#include "masub/errors.h"

namespace masub {

namespace {

using nlohmann::json;

[[noreturn]] void Fail(int line, const std::string& message) {
  throw ParseError("line " + std::to_string(line) + ": " + message);
}

uint64_t MaskFromIndices(const json& arr, int n, int line,
                         const char* field) {
  if (!arr.is_array()) Fail(line, std::string(field) + " must be an array");
  uint64_t mask = 0;
  for (const auto& e : arr) {
    if (!e.is_number_integer()) {
      Fail(line, std::string(field) + " must hold element indices");
    }
    int v = e.get<int>();
    if (v < 0 || v >= n) {
      Fail(line, std::string(field) + ": index " + std::to_string(v) +
                     " outside the ground set");
    }
    mask |= uint64_t{1} << v;
  }
  return mask;
}

std::vector<Rational> RationalsFrom(const json& arr, int line,
                                    const char* field) {
  if (!arr.is_array()) Fail(line, std::string(field) + " must be an array");
  std::vector<Rational> out;
  for (const auto& e : arr) {
    if (e.is_number_integer()) {
      out.emplace_back(e.get<long long>());
    } else if (e.is_string()) {
      try {
        out.push_back(ParseRational(e.get<std::string>()));
      } catch (const ParseError& err) {
        Fail(line, std::string(field) + ": " + err.what());
      }
    } else {
      Fail(line, std::string(field) + " entries must be integers or 'p/q'");
    }
  }
  return out;
}

Graph GraphFrom(const json& rec, int line) {
  Graph g;
  if (!rec.contains("nodes") || !rec["nodes"].is_number_integer()) {
    Fail(line, "graph needs a 'nodes' count");
  }
  g.num_nodes = rec["nodes"].get<int>();
  if (!rec.contains("edges") || !rec["edges"].is_array()) {
    Fail(line, "graph needs an 'edges' array");
  }
  for (const auto& e : rec["edges"]) {
    if (!e.is_array() || e.size() != 2) Fail(line, "edge must be [u,v]");
    int u = e[0].get<int>(), v = e[1].get<int>();
    if (u < 0 || v < 0 || u >= g.num_nodes || v >= g.num_nodes) {
      Fail(line, "edge endpoint out of range");
    }
    g.AddEdge(u, v);
  }
  return g;
}

OraclePtr OracleFrom(const json& rec, const GroundSetPtr& ground, int line) {
  std::string kind = rec.value("kind", "");
  int n = ground->size();
  if (kind == "modular") {
    auto w = RationalsFrom(rec.at("weights"), line, "weights");
    if (static_cast<int>(w.size()) != n) Fail(line, "weights arity mismatch");
    return MakeModular(ground, std::move(w));
  }
  if (kind == "coverage") {
    const json& covers = rec.at("covers");
    if (!covers.is_array() || static_cast<int>(covers.size()) != n) {
      Fail(line, "coverage needs one covered-item list per element");
    }
    int items = rec.value("items", 0);
    std::vector<uint64_t> masks;
    for (const auto& c : covers) {
      masks.push_back(MaskFromIndices(c, std::max(items, 64), line, "covers"));
    }
    std::vector<Rational> weights;
    if (rec.contains("item-weights")) {
      weights = RationalsFrom(rec["item-weights"], line, "item-weights");
    }
    return MakeCoverage(ground, std::move(masks), std::move(weights));
  }
  if (kind == "concave-card") {
    auto table = RationalsFrom(rec.at("table"), line, "table");
    if (static_cast<int>(table.size()) != n + 1) {
      Fail(line, "concave table needs n+1 entries");
    }
    return MakeConcaveOfCardinality(ground, std::move(table));
  }
  if (kind == "cut") {
    Graph g = GraphFrom(rec, line);
    if (g.num_nodes != n) Fail(line, "cut graph must have n nodes");
    std::vector<Rational> weights;
    if (rec.contains("edge-weights")) {
      weights = RationalsFrom(rec["edge-weights"], line, "edge-weights");
    }
    return MakeCutFunction(ground, g.edges, std::move(weights));
  }
  if (kind == "goel") return MakeGoelAllocation();
  Fail(line, "unknown oracle kind '" + kind + "'");
}

MatroidPtr MatroidFrom(const json& rec, const GroundSetPtr& ground, int line) {
  std::string kind = rec.value("kind", "");
  int n = ground->size();
  if (kind == "uniform") return MakeUniform(ground, rec.value("b", 0));
  if (kind == "free") return MakeFree(ground);
  if (kind == "partition") {
    std::vector<uint64_t> parts;
    for (const auto& p : rec.at("parts")) {
      parts.push_back(MaskFromIndices(p, n, line, "parts"));
    }
    std::vector<int> caps = rec.at("caps").get<std::vector<int>>();
    return MakePartition(ground, std::move(parts), std::move(caps));
  }
  if (kind == "laminar") {
    std::vector<uint64_t> family;
    for (const auto& p : rec.at("family")) {
      family.push_back(MaskFromIndices(p, n, line, "family"));
    }
    std::vector<int> caps = rec.at("caps").get<std::vector<int>>();
    return MakeLaminar(ground, std::move(family), std::move(caps));
  }
  if (kind == "graphic") {
    Graph g = GraphFrom(rec, line);
    if (g.num_edges() != n) {
      Fail(line, "graphic matroid edge count must match the ground set");
    }
    return MakeGraphic(g, ground);
  }
  if (kind == "restricted-uniform") {
    uint64_t region = MaskFromIndices(rec.at("region"), n, line, "region");
    int b = rec.value("b", 0);
    return std::make_shared<Matroid>(
        ground,
        [region, b](uint64_t bits) {
          return (bits & ~region) == 0 && std::popcount(bits) <= b;
        },
        "restricted-uniform", std::min(b, std::popcount(region)));
  }
  Fail(line, "unknown matroid kind '" + kind + "'");
}

}  // namespace

std::string DigestText(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file '" + path + "'");
  out << text;
}

Problem ParseInstanceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseInstanceText(ss.str());
}

Problem ParseInstanceText(const std::string& text) {
  Problem problem;
  problem.canonical_text = text;
  problem.digest = DigestText(text);

  std::istringstream in(text);
  std::string raw_line;
  int line = 0;
  bool saw_header = false;
  std::vector<std::pair<int, json>> oracle_lines;
  std::optional<std::pair<int, json>> mv_line;
  std::optional<std::pair<int, json>> constraint_line;
  std::vector<std::pair<int, json>> agent_constraints;
  std::optional<std::pair<int, json>> msca_line;

  while (std::getline(in, raw_line)) {
    ++line;
    if (raw_line.empty()) continue;
    json rec;
    try {
      rec = json::parse(raw_line);
    } catch (const json::exception& e) {
      Fail(line, std::string("invalid JSON: ") + e.what());
    }
    std::string record = rec.value("record", "");
    if (record == "header") {
      if (saw_header) Fail(line, "duplicate header");
      saw_header = true;
      if (!rec.contains("labels")) Fail(line, "header needs 'labels'");
      std::vector<std::string> labels =
          rec["labels"].get<std::vector<std::string>>();
      try {
        problem.ground = GroundSet::Create(std::move(labels));
      } catch (const Error& e) {
        Fail(line, e.what());
      }
      problem.k = rec.value("k", 1);
      if (problem.k < 1) Fail(line, "k must be >= 1");
      problem.task = rec.value("task", "min");
      if (problem.task != "min" && problem.task != "max" &&
          problem.task != "robust" && problem.task != "lp-only") {
        Fail(line, "unknown task '" + problem.task + "'");
      }
      problem.tau = rec.value("tau", 0);
      problem.seed = rec.value("seed", 0ull);
    } else if (record == "oracle") {
      oracle_lines.emplace_back(line, rec);
    } else if (record == "mv-oracle") {
      if (mv_line) Fail(line, "duplicate mv-oracle");
      mv_line = {line, rec};
    } else if (record == "constraint") {
      if (constraint_line) Fail(line, "duplicate constraint");
      constraint_line = {line, rec};
    } else if (record == "agent-constraint") {
      agent_constraints.emplace_back(line, rec);
    } else if (record == "msca") {
      msca_line = {line, rec};
    } else {
      Fail(line, "unknown record '" + record + "'");
    }
  }
  if (!saw_header) throw ParseError("line 1: missing header record");
  int n = problem.ground->size();

  // Per-agent oracles (decomposable objective).
  problem.agent_oracles.assign(problem.k, nullptr);
  for (const auto& [ln, rec] : oracle_lines) {
    int agent = rec.value("agent", 0);
    if (agent < 0 || agent >= problem.k) Fail(ln, "oracle agent out of range");
    if (problem.agent_oracles[agent]) Fail(ln, "duplicate oracle for agent");
    problem.agent_oracles[agent] = OracleFrom(rec, problem.ground, ln);
  }

  bool have_all_agents = true;
  for (const auto& f : problem.agent_oracles) {
    if (!f) have_all_agents = false;
  }

  if (mv_line) {
    const auto& [ln, rec] = *mv_line;
    std::string kind = rec.value("kind", "");
    if (kind == "quadratic" || kind == "quadratic-penalty") {
      QuadraticMatrix a;
      a.k = problem.k;
      const json& rows = rec.at("matrix");
      if (!rows.is_array() || static_cast<int>(rows.size()) != problem.k) {
        Fail(ln, "matrix must be k x k");
      }
      for (const auto& row : rows) {
        auto vals = RationalsFrom(row, ln, "matrix");
        if (static_cast<int>(vals.size()) != problem.k) {
          Fail(ln, "matrix must be k x k");
        }
        for (auto& v : vals) a.a.push_back(std::move(v));
      }
      std::vector<Rational> weights;
      if (rec.contains("weights")) {
        weights = RationalsFrom(rec["weights"], ln, "weights");
      }
      MvOraclePtr quad = MakeQuadratic(problem.ground, a, std::move(weights));
      if (kind == "quadratic") {
        problem.mv_oracle = quad;
      } else {
        if (!have_all_agents) {
          Fail(ln, "quadratic-penalty needs one oracle per agent");
        }
        MvOraclePtr base = MakeDecomposable(problem.agent_oracles);
        OracleFlags flags;
        flags.normalized =
            base->flags().normalized && quad->flags().normalized;
        flags.nonnegative = false;
        flags.monotone = false;
        problem.mv_oracle = std::make_shared<MultivariateOracle>(
            problem.ground, problem.k,
            [base, quad](const std::vector<uint64_t>& parts) {
              return base->Value(parts) + quad->Value(parts);
            },
            flags, "penalized");
      }
    } else {
      Fail(ln, "unknown mv-oracle kind '" + kind + "'");
    }
  } else if (have_all_agents) {
    problem.mv_oracle = MakeDecomposable(problem.agent_oracles);
  } else {
    throw ParseError("instance provides neither k agent oracles nor an "
                     "mv-oracle");
  }

  // Constraint.
  if (constraint_line) {
    const auto& [ln, rec] = *constraint_line;
    std::string kind = rec.value("kind", "");
    if (kind == "vertex-cover") {
      Graph g = GraphFrom(rec, ln);
      if (g.num_nodes != n) Fail(ln, "vertex-cover graph must have n nodes");
      problem.blocking = std::make_shared<BlockingFamily>(
          BlockingFamily::VertexCover(problem.ground, g));
    } else if (kind == "edge-cover") {
      Graph g = GraphFrom(rec, ln);
      if (g.num_edges() != n) Fail(ln, "edge-cover needs n edges");
      problem.blocking = std::make_shared<BlockingFamily>(
          BlockingFamily::EdgeCover(problem.ground, g));
    } else if (kind == "hitting-set") {
      std::vector<uint64_t> sets;
      for (const auto& s : rec.at("sets")) {
        sets.push_back(MaskFromIndices(s, n, ln, "sets"));
      }
      problem.blocking = std::make_shared<BlockingFamily>(
          BlockingFamily::HittingSet(problem.ground, std::move(sets)));
    } else if (kind == "cardinality") {
      problem.blocking = std::make_shared<BlockingFamily>(
          BlockingFamily::Cardinality(problem.ground, rec.value("m", 0)));
    } else if (kind == "st-path") {
      Graph g = GraphFrom(rec, ln);
      if (g.num_edges() != n) Fail(ln, "st-path needs n edges");
      problem.blocking = std::make_shared<BlockingFamily>(BlockingFamily::StPath(
          problem.ground, g, rec.value("s", 0), rec.value("t", 1)));
    } else if (kind == "pruned-network") {
      Graph g = GraphFrom(rec, ln);
      if (g.num_edges() != n) Fail(ln, "pruned-network needs n edges");
      problem.blocking = std::make_shared<BlockingFamily>(
          BlockingFamily::PrunedNetwork(problem.ground, g,
                                        rec.value("tau", 1)));
    } else if (kind == "explicit-blocker") {
      std::vector<uint64_t> sets;
      for (const auto& s : rec.at("sets")) {
        sets.push_back(MaskFromIndices(s, n, ln, "sets"));
      }
      problem.blocking = std::make_shared<BlockingFamily>(
          BlockingFamily::FromBlocker(Clutter(problem.ground, std::move(sets))));
    } else if (kind == "full") {
      problem.blocking = std::make_shared<BlockingFamily>(
          BlockingFamily::Full(problem.ground));
      problem.feasible = LiftInput::Full(problem.ground);
    } else if (kind == "all") {
      problem.feasible = LiftInput::All(problem.ground);
    } else if (kind == "matroid") {
      problem.feasible =
          LiftInput::FromMatroid(MatroidFrom(rec.at("matroid"), problem.ground, ln));
    } else if (kind == "bases") {
      problem.feasible = LiftInput::FromBases(std::make_shared<BasesFamily>(
          MatroidFrom(rec.at("matroid"), problem.ground, ln)));
    } else if (kind == "intersection") {
      MatroidIntersection mi;
      for (const auto& part : rec.at("parts")) {
        mi.parts.push_back(MatroidFrom(part, problem.ground, ln));
      }
      if (mi.parts.empty()) Fail(ln, "intersection needs at least one part");
      problem.feasible = LiftInput::FromIntersection(std::move(mi));
    } else if (kind == "mv-ring") {
      // Ring over the lifted index space [k] x V, agent-major encoding.
      int total = problem.k * n;
      std::vector<std::pair<int, int>> implications;
      for (const auto& e : rec.value("implications", json::array())) {
        if (!e.is_array() || e.size() != 2) Fail(ln, "implication must be a pair");
        int a = e[0].get<int>(), b = e[1].get<int>();
        if (a < 0 || b < 0 || a >= total || b >= total) {
          Fail(ln, "implication endpoint outside the lifted space");
        }
        implications.emplace_back(a, b);
      }
      uint64_t forced = MaskFromIndices(rec.value("forced", json::array()),
                                        total, ln, "forced");
      uint64_t allowed = rec.contains("allowed")
                             ? MaskFromIndices(rec["allowed"], total, ln,
                                               "allowed")
                             : ((total == 64 ? ~uint64_t{0}
                                             : ((uint64_t{1} << total) - 1)));
      LiftedGroundSet space(problem.ground, problem.k);
      try {
        problem.mv_ring = RingFamily(space.lifted(), std::move(implications),
                                     forced, allowed);
      } catch (const Error& e) {
        Fail(ln, e.what());
      }
    } else {
      Fail(ln, "unknown constraint kind '" + kind + "'");
    }
  } else if (problem.task == "max" || problem.task == "robust") {
    problem.feasible = LiftInput::All(problem.ground);
  } else if (!msca_line && !problem.mv_ring) {
    throw ParseError("minimization instance needs a constraint record");
  }

  // Per-agent families.
  problem.agent_matroids.assign(problem.k, nullptr);
  bool any_agent_constraint = false;
  for (const auto& [ln, rec] : agent_constraints) {
    int agent = rec.value("agent", 0);
    if (agent < 0 || agent >= problem.k) Fail(ln, "agent out of range");
    problem.agent_matroids[agent] = MatroidFrom(rec, problem.ground, ln);
    any_agent_constraint = true;
  }
  if (any_agent_constraint) {
    for (auto& m : problem.agent_matroids) {
      if (!m) m = MakeFree(problem.ground);
    }
  } else {
    problem.agent_matroids.clear();
  }

  // MSCA extras.
  if (msca_line) {
    const auto& [ln, rec] = *msca_line;
    for (const auto& r : rec.at("regions")) {
      problem.regions.push_back(MaskFromIndices(r, n, ln, "regions"));
    }
    if (static_cast<int>(problem.regions.size()) != problem.k) {
      Fail(ln, "msca needs one region per agent");
    }
    if (rec.contains("caps")) {
      problem.caps = rec["caps"].get<std::vector<int>>();
      if (static_cast<int>(problem.caps.size()) != problem.k) {
        Fail(ln, "msca caps arity mismatch");
      }
    }
  }
  return problem;
}

}  // namespace masub
