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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqcqp/errors.hpp"

namespace vqcqp {

inline constexpr const char* kReportSchema = "vqcqp.report/1";

enum class SolveStatus {
  converged,
  max_iterations,
  line_search_failure,
  step_failure,
  infeasible_start,
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iterations:
      return "max_iterations";
    case SolveStatus::line_search_failure:
      return "line_search_failure";
    case SolveStatus::step_failure:
      return "step_failure";
    case SolveStatus::infeasible_start:
      return "infeasible_start";
  }
  return "?";
}

inline SolveStatus status_from_string(const std::string& s) {
  for (auto v : {SolveStatus::converged, SolveStatus::max_iterations,
                 SolveStatus::line_search_failure, SolveStatus::step_failure,
                 SolveStatus::infeasible_start}) {
    if (s == to_string(v)) return v;
  }
  throw SchemaError("unknown solve status '" + s + "'");
}

// One accepted step of the interior-point loop.
struct TraceEntry {
  std::string phase;  // "relaxed", "phase_one" or "main"
  std::size_t outer = 0;
  std::size_t k = 0;  // inner steps taken so far in this phase
  double mu = 0.0;
  double alpha = 0.0;
  double r_mu = 0.0;
  double residual_norm = 0.0;  // ||r||_2 at the accepted iterate
  double objective = 0.0;
  double rho = 0.0;
  bool barrier_merit = false;
};

struct SolveReport {
  std::string instance;
  std::string method;  // "hybrid" or "classical"
  SolveStatus status = SolveStatus::max_iterations;
  std::string message;

  double objective = 0.0;
  std::vector<double> variables;     // decoded variables (real part)
  std::vector<double> variables_im;  // imaginary part, complex problems only
  std::size_t split_dimension = 0;   // > 0 when variables hold [y1; y2]

  std::optional<double> eta;
  std::vector<double> theta;
  std::vector<double> point;
  std::vector<double> lambda;
  std::optional<double> lambda_eta;

  double dual_residual = 0.0;  // ||r_dual||_inf
  double cent_residual = 0.0;  // ||r_cent||_inf at mu = 0
  double r0 = 0.0;
  double max_violation = 0.0;  // max_i F_i over the canonical rows

  std::string start_stage;
  std::size_t start_draws = 0;
  std::size_t outer_iterations = 0;
  std::size_t inner_iterations = 0;
  std::vector<TraceEntry> trace;

  // Max-Cut only: decoded cut and the exact optimum when known.
  std::optional<double> cut;
  std::optional<double> optimum_cut;

  std::uint64_t seed = 0;
  double wall_ms = 0.0;

  bool converged() const { return status == SolveStatus::converged; }
  bool feasible_start() const { return status != SolveStatus::infeasible_start; }
};

inline void to_json(nlohmann::ordered_json& j, const TraceEntry& t) {
  j = nlohmann::ordered_json{{"phase", t.phase},
                             {"outer", t.outer},
                             {"k", t.k},
                             {"mu", t.mu},
                             {"alpha", t.alpha},
                             {"R_mu", t.r_mu},
                             {"residual_norm", t.residual_norm},
                             {"objective", t.objective},
                             {"rho", t.rho},
                             {"barrier_merit", t.barrier_merit}};
}

inline void from_json(const nlohmann::ordered_json& j, TraceEntry& t) {
  t.phase = j.at("phase").get<std::string>();
  t.outer = j.at("outer").get<std::size_t>();
  t.k = j.at("k").get<std::size_t>();
  t.mu = j.at("mu").get<double>();
  t.alpha = j.at("alpha").get<double>();
  t.r_mu = j.at("R_mu").get<double>();
  t.residual_norm = j.at("residual_norm").get<double>();
  t.objective = j.at("objective").get<double>();
  t.rho = j.at("rho").get<double>();
  t.barrier_merit = j.at("barrier_merit").get<bool>();
}

inline nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

inline std::optional<double> optional_from_json(const nlohmann::ordered_json& j,
                                                const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

// Timing is optional so that deterministic artifacts can drop it.
inline nlohmann::ordered_json report_to_json(const SolveReport& r,
                                             bool include_timing = true) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["instance"] = r.instance;
  j["method"] = r.method;
  j["status"] = to_string(r.status);
  j["converged"] = r.converged();
  j["message"] = r.message;
  j["objective"] = r.objective;
  j["variables"] = {{"re", r.variables}};
  if (!r.variables_im.empty()) j["variables"]["im"] = r.variables_im;
  j["split_dimension"] = r.split_dimension;
  j["eta"] = optional_json(r.eta);
  j["theta"] = r.theta;
  j["point"] = r.point;
  j["lambda"] = r.lambda;
  j["lambda_eta"] = optional_json(r.lambda_eta);
  j["residuals"] = {{"dual_inf", r.dual_residual},
                    {"cent_inf", r.cent_residual},
                    {"R0", r.r0},
                    {"max_violation", r.max_violation}};
  j["start"] = {{"stage", r.start_stage}, {"draws", r.start_draws}};
  j["iterations"] = {{"outer", r.outer_iterations}, {"inner", r.inner_iterations}};
  j["cut"] = optional_json(r.cut);
  j["optimum_cut"] = optional_json(r.optimum_cut);
  j["trace"] = r.trace;
  j["seed"] = r.seed;
  if (include_timing) j["wall_ms"] = r.wall_ms;
  return j;
}

inline SolveReport report_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("schema") ||
      j.at("schema") != kReportSchema) {
    throw SchemaError("document is not a solve report");
  }
  try {
    SolveReport r;
    r.instance = j.value("instance", "");
    r.method = j.at("method").get<std::string>();
    r.status = status_from_string(j.at("status").get<std::string>());
    r.message = j.value("message", "");
    r.objective = j.at("objective").get<double>();
    r.variables = j.at("variables").at("re").get<std::vector<double>>();
    if (j.at("variables").contains("im")) {
      r.variables_im = j.at("variables").at("im").get<std::vector<double>>();
    }
    r.split_dimension = j.value("split_dimension", std::size_t{0});
    r.eta = optional_from_json(j, "eta");
    r.theta = j.at("theta").get<std::vector<double>>();
    r.point = j.at("point").get<std::vector<double>>();
    r.lambda = j.at("lambda").get<std::vector<double>>();
    r.lambda_eta = optional_from_json(j, "lambda_eta");
    r.cut = optional_from_json(j, "cut");
    r.optimum_cut = optional_from_json(j, "optimum_cut");
    const auto& res = j.at("residuals");
    r.dual_residual = res.at("dual_inf").get<double>();
    r.cent_residual = res.at("cent_inf").get<double>();
    r.r0 = res.at("R0").get<double>();
    r.max_violation = res.at("max_violation").get<double>();
    r.start_stage = j.at("start").at("stage").get<std::string>();
    r.start_draws = j.at("start").at("draws").get<std::size_t>();
    r.outer_iterations = j.at("iterations").at("outer").get<std::size_t>();
    r.inner_iterations = j.at("iterations").at("inner").get<std::size_t>();
    r.trace = j.at("trace").get<std::vector<TraceEntry>>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.wall_ms = j.value("wall_ms", 0.0);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed solve report: ") + e.what());
  }
}

}  // namespace vqcqp
