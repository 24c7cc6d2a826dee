// Copyright 2026 The vqcqp Authors.
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

// Campaigns: restarts of one or both solvers on an instance, the summary
// written next to the per-run reports, and comparison tables.

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vqcqp/baseline.hpp"
#include "vqcqp/bench.hpp"
#include "vqcqp/errors.hpp"
#include "vqcqp/hybrid.hpp"
#include "vqcqp/ipm.hpp"
#include "vqcqp/model.hpp"
#include "vqcqp/problem_io.hpp"
#include "vqcqp/report.hpp"

namespace vqcqp {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSummarySchema = "vqcqp.summary/1";

enum class Method { hybrid, classical };

inline const char* to_string(Method m) {
  return m == Method::hybrid ? "hybrid" : "classical";
}

inline std::vector<Method> methods_from_string(const std::string& s) {
  if (s == "hybrid") return {Method::hybrid};
  if (s == "classical") return {Method::classical};
  if (s == "both") return {Method::hybrid, Method::classical};
  throw ParameterError("method must be hybrid, classical or both");
}

struct CampaignConfig {
  std::vector<Method> methods{Method::hybrid, Method::classical};
  HybridOptions hybrid;
  IpmConfig ipm;
  double delta_band = kDefaultEqualityBand;
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
  std::size_t workers = 1;  // does not affect any output

  void validate() const {
    if (methods.empty()) throw ParameterError("no solver selected");
    if (hybrid.layers < 1) throw ParameterError("layers must be >= 1");
    if (restarts < 1) throw ParameterError("restarts must be >= 1");
    if (!(delta_band > 0.0)) throw ParameterError("delta band must be > 0");
    ipm.validate();
  }
};

inline Json config_to_json(const CampaignConfig& c) {
  Json methods = Json::array();
  for (auto m : c.methods) methods.push_back(to_string(m));
  return {{"methods", methods},
          {"layers", c.hybrid.layers},
          {"shots", c.hybrid.shots},
          {"restarts", c.restarts},
          {"seed", c.seed},
          {"delta_band", c.delta_band},
          {"eps", c.ipm.eps},
          {"c_eps", c.ipm.c_eps},
          {"mu0", c.ipm.mu0},
          {"c_mu", c.ipm.c_mu},
          {"tau", c.ipm.tau},
          {"beta", c.ipm.beta},
          {"c_dec", c.ipm.c_dec},
          {"max_inner", c.ipm.max_inner},
          {"max_outer", c.ipm.max_outer},
          {"start_draws", c.ipm.start_draws},
          {"staged_start", c.ipm.staged_start},
          {"inertia_correction", c.ipm.inertia_correction},
          {"phase_one_attempts", c.ipm.phase_one_attempts},
          {"phase_one_jitter", c.ipm.phase_one_jitter}};
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

// Shortest round-trip decimal form.
inline std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// "maxcut-n16-p0.25-s7", "opf-n3-s1", or `fallback` without generator
// metadata.
inline std::string instance_id(const Json& metadata, const std::string& fallback) {
  const std::string gen = metadata.value("generator", "");
  if (gen == "maxcut") {
    return "maxcut-n" + std::to_string(metadata.at("N").get<std::size_t>()) + "-p" +
           format_number(metadata.at("P").get<double>()) + "-s" +
           std::to_string(metadata.at("seed").get<std::uint64_t>());
  }
  if (gen == "opf") {
    return "opf-n" + std::to_string(metadata.at("N").get<std::size_t>()) + "-s" +
           std::to_string(metadata.at("seed").get<std::uint64_t>());
  }
  return fallback;
}

inline std::optional<Graph> maxcut_graph(const ProblemDocument& doc) {
  if (doc.metadata.value("generator", "") != "maxcut") return std::nullopt;
  return graph_from_json(doc.metadata.at("graph"));
}

// Runs f(0..count-1) on up to `workers` threads. Results are written by
// index, so the output never depends on the worker count.
template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& f) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline SolveReport solve_once(const ProblemDocument& doc, Method method,
                              const CampaignConfig& config, std::uint64_t seed) {
  if (method == Method::hybrid) {
    return std::visit(
        [&](const auto& p) -> SolveReport {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, ComplexQcqp>) {
            return solve_hybrid(canonicalize(p, config.delta_band), config.hybrid,
                                config.ipm, seed);
          } else {
            const RealQcqp split = split_nonnegative(p).problem;
            return solve_hybrid(canonicalize(split, config.delta_band),
                                config.hybrid, config.ipm, seed);
          }
        },
        doc.problem);
  }
  return std::visit(
      [&](const auto& p) -> SolveReport {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RealQcqp>) {
          if (p.nonneg_domain) {
            throw ParameterError(
                "the classical baseline cannot enforce y >= 0 on its variables");
          }
        }
        return solve_direct(canonicalize(p, config.delta_band), config.ipm, seed);
      },
      doc.problem);
}

struct MethodRuns {
  Method method = Method::hybrid;
  std::vector<SolveReport> runs;
  std::size_t best = 0;

  const SolveReport& best_run() const { return runs.at(best); }
  std::optional<double> best_cut() const {
    std::optional<double> out;
    for (const auto& r : runs) {
      if (r.cut && r.feasible_start() && (!out || *r.cut > *out)) out = r.cut;
    }
    return out;
  }
  std::size_t converged_count() const {
    return static_cast<std::size_t>(
        std::count_if(runs.begin(), runs.end(), [](const auto& r) { return r.converged(); }));
  }
  std::size_t feasible_count() const {
    return static_cast<std::size_t>(std::count_if(
        runs.begin(), runs.end(), [](const auto& r) { return r.feasible_start(); }));
  }
};

struct CampaignResult {
  std::string instance;
  Json metadata;
  CampaignConfig config;
  std::vector<MethodRuns> methods;
};

inline CampaignResult run_campaign(const ProblemDocument& doc,
                                   const std::string& instance,
                                   const CampaignConfig& config) {
  config.validate();
  CampaignResult out;
  out.instance = instance;
  out.metadata = doc.metadata;
  out.config = config;

  const std::optional<Graph> graph = maxcut_graph(doc);
  std::optional<double> optimum;
  if (graph && graph->vertices <= kMaxBruteForceVertices) {
    optimum = brute_force_maxcut(*graph).value;
  }

  struct Job {
    std::size_t method;
    std::size_t restart;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    out.methods.push_back({config.methods[m], std::vector<SolveReport>(config.restarts), 0});
    for (std::size_t r = 0; r < config.restarts; ++r) jobs.push_back({m, r});
  }
  parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    SolveReport rep = solve_once(doc, config.methods[job.method], config,
                                 config.seed + job.restart);
    rep.instance = instance;
    if (graph && rep.feasible_start()) {
      rep.cut = decode_cut(*graph, rep.variables, rep.split_dimension).value;
    }
    rep.optimum_cut = optimum;
    out.methods[job.method].runs[job.restart] = std::move(rep);
  });
  for (auto& m : out.methods) m.best = best_report(m.runs);
  return out;
}

inline std::string campaign_status(const MethodRuns& m) {
  if (m.feasible_count() == 0) return "infeasible_start";
  return m.best_run().converged() ? "converged" : "not_converged";
}

// Everything in the summary is a function of (instance, config); timing
// lives in a separate file.
inline Json campaign_summary(const CampaignResult& c) {
  const Json config = config_to_json(c.config);
  Json methods = Json::array();
  for (const auto& m : c.methods) {
    const SolveReport& best = m.best_run();
    double outer = 0.0;
    double inner = 0.0;
    for (const auto& r : m.runs) {
      outer += static_cast<double>(r.outer_iterations);
      inner += static_cast<double>(r.inner_iterations);
    }
    const auto n = static_cast<double>(m.runs.size());
    methods.push_back(
        {{"method", to_string(m.method)},
         {"status", campaign_status(m)},
         {"best_seed", best.seed},
         {"best_objective", best.feasible_start() ? Json(best.objective) : Json()},
         {"best_run_converged", best.converged()},
         {"best_R0", best.feasible_start() ? Json(best.r0) : Json()},
         {"best_max_violation",
          best.feasible_start() ? Json(best.max_violation) : Json()},
         {"cut_of_best", optional_json(best.cut)},
         {"best_cut", optional_json(m.best_cut())},
         {"optimum_cut", optional_json(best.optimum_cut)},
         {"runs", m.runs.size()},
         {"converged_runs", m.converged_count()},
         {"feasible_runs", m.feasible_count()},
         {"convergence_rate", static_cast<double>(m.converged_count()) / n},
         {"mean_outer_iterations", outer / n},
         {"mean_inner_iterations", inner / n}});
  }
  return {{"schema", kSummarySchema},
          {"version", kVersion},
          {"instance", c.instance},
          {"metadata", {{"generator", c.metadata.value("generator", Json())},
                        {"N", c.metadata.value("N", Json())},
                        {"P", c.metadata.value("P", Json())},
                        {"seed", c.metadata.value("seed", Json())},
                        {"mode", c.metadata.value("mode", Json())}}},
          {"config", config},
          {"config_hash", hex64(fnv1a(config.dump()))},
          {"methods", methods}};
}

inline Json campaign_timing(const CampaignResult& c) {
  Json methods = Json::object();
  for (const auto& m : c.methods) {
    Json runs = Json::array();
    double total = 0.0;
    for (const auto& r : m.runs) {
      runs.push_back(r.wall_ms);
      total += r.wall_ms;
    }
    methods[to_string(m.method)] = {{"total_wall_ms", total}, {"run_wall_ms", runs}};
  }
  return {{"instance", c.instance}, {"methods", methods}};
}

// <out>/<instance>/{summary.json, timing.json, <method>_best.json,
//                   <method>/run_<r>.json}
inline std::filesystem::path write_campaign(const CampaignResult& c,
                                            const std::filesystem::path& out) {
  const std::filesystem::path dir = out / c.instance;
  for (const auto& m : c.methods) {
    for (std::size_t r = 0; r < m.runs.size(); ++r) {
      write_json_file(dir / to_string(m.method) / ("run_" + std::to_string(r) + ".json"),
                      report_to_json(m.runs[r]));
    }
    write_json_file(dir / (std::string(to_string(m.method)) + "_best.json"),
                    report_to_json(m.best_run()));
  }
  write_json_file(dir / "summary.json", campaign_summary(c));
  write_json_file(dir / "timing.json", campaign_timing(c));
  return dir;
}

struct ComparisonTables {
  std::string table;      // CSV
  std::string histogram;  // CSV
};

// One row per (instance, method); several reports for the same pair are
// reduced to the best one.
inline ComparisonTables compare_reports(const std::vector<SolveReport>& reports) {
  if (reports.empty()) throw ParameterError("compare needs at least one report");
  std::map<std::pair<std::string, std::string>, std::vector<SolveReport>> groups;
  std::vector<std::string> method_order;
  for (const auto& r : reports) {
    groups[{r.instance, r.method}].push_back(r);
    if (std::find(method_order.begin(), method_order.end(), r.method) ==
        method_order.end()) {
      method_order.push_back(r.method);
    }
  }
  std::sort(method_order.begin(), method_order.end(), [](const auto& a, const auto& b) {
    // hybrid first, then alphabetical
    if ((a == "hybrid") != (b == "hybrid")) return a == "hybrid";
    return a < b;
  });

  auto cell = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  std::ostringstream table;
  table << "instance,method,status,converged,objective,cut,optimum_cut,R0,"
           "max_violation,outer_iterations,inner_iterations,wall_ms\n";
  std::map<std::string, std::map<std::string, std::optional<double>>> hist;
  for (const auto& [key, group] : groups) {
    const SolveReport& r = group[best_report(group)];
    const bool feasible = r.feasible_start();
    table << key.first << ',' << key.second << ',' << to_string(r.status) << ','
          << (r.converged() ? "true" : "false") << ','
          << (feasible ? format_number(r.objective) : "") << ',' << cell(r.cut) << ','
          << cell(r.optimum_cut) << ',' << (feasible ? format_number(r.r0) : "") << ','
          << (feasible ? format_number(r.max_violation) : "") << ','
          << r.outer_iterations << ',' << r.inner_iterations << ','
          << format_number(r.wall_ms) << '\n';
    hist[key.first][key.second] =
        feasible ? std::optional<double>(r.objective) : std::nullopt;
  }
  std::ostringstream histogram;
  histogram << "instance";
  for (const auto& m : method_order) histogram << ',' << m;
  histogram << '\n';
  for (const auto& [inst, row] : hist) {
    histogram << inst;
    for (const auto& m : method_order) {
      const auto it = row.find(m);
      histogram << ',' << (it == row.end() ? std::string() : cell(it->second));
    }
    histogram << '\n';
  }
  return {table.str(), histogram.str()};
}

}  // namespace vqcqp
