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

// JSON problem documents:
//
//   { "schema": "vqcqp.problem/1", "kind": "complex" | "real", "N": ...,
//     "nonneg_domain": false,
//     "objective": { "re": [[...]], "im": [[...]], "offset": ... },
//     "constraints": [ { "re", "im", "sense", "bound" | "lo", "hi" } ],
//     "metadata": { ... } }
//
// "im" blocks are omitted for real problems.

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "vqcqp/bench.hpp"
#include "vqcqp/errors.hpp"
#include "vqcqp/model.hpp"

namespace vqcqp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kProblemSchema = "vqcqp.problem/1";

struct ProblemDocument {
  AnyQcqp problem;
  Json metadata = Json::object();
};

namespace detail {

inline Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_json(const Json& j, std::size_t n,
                                        const std::string& where) {
  if (!j.is_array() || j.size() != n) {
    throw SchemaError(where + ": expected " + std::to_string(n) + " rows");
  }
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || row.size() != n) {
      throw SchemaError(where + ": row " + std::to_string(i) + " must have " +
                        std::to_string(n) + " entries");
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!row[k].is_number()) throw SchemaError(where + ": non-numeric entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          row[k].get<double>();
    }
  }
  return m;
}

template <class Scalar>
Json quadratic_to_json(const DenseMatrix<Scalar>& m) {
  Json j = Json::object();
  if constexpr (is_complex_v<Scalar>) {
    j["re"] = matrix_to_json(m.real());
    j["im"] = matrix_to_json(m.imag());
  } else {
    j["re"] = matrix_to_json(m);
  }
  return j;
}

template <class Scalar>
DenseMatrix<Scalar> quadratic_from_json(const Json& j, std::size_t n,
                                        const std::string& where) {
  const Eigen::MatrixXd re = matrix_from_json(j.at("re"), n, where + ".re");
  if constexpr (is_complex_v<Scalar>) {
    Eigen::MatrixXcd m = re.cast<Complex>();
    if (j.contains("im")) {
      m += Complex(0.0, 1.0) * matrix_from_json(j.at("im"), n, where + ".im").cast<Complex>();
    }
    return m;
  } else {
    if (j.contains("im")) throw SchemaError(where + ": real problems carry no 'im'");
    return re;
  }
}

template <class Scalar>
Json qcqp_to_json(const Qcqp<Scalar>& p) {
  Json j;
  j["kind"] = is_complex_v<Scalar> ? "complex" : "real";
  j["N"] = p.dimension;
  j["nonneg_domain"] = p.nonneg_domain;
  Json obj = quadratic_to_json<Scalar>(p.objective);
  obj["offset"] = p.objective_offset;
  j["objective"] = std::move(obj);
  Json cons = Json::array();
  for (const auto& c : p.constraints) {
    Json cj = quadratic_to_json<Scalar>(c.matrix);
    cj["sense"] = to_string(c.sense);
    if (c.sense == Sense::range) {
      cj["lo"] = c.lo;
      cj["hi"] = c.hi;
    } else {
      cj["bound"] = c.bound;
    }
    cons.push_back(std::move(cj));
  }
  j["constraints"] = std::move(cons);
  return j;
}

template <class Scalar>
Qcqp<Scalar> qcqp_from_json(const Json& j) {
  Qcqp<Scalar> p;
  p.dimension = j.at("N").get<std::size_t>();
  if (p.dimension < 1) throw SchemaError("N must be >= 1");
  p.nonneg_domain = j.value("nonneg_domain", false);
  const Json& obj = j.at("objective");
  p.objective = quadratic_from_json<Scalar>(obj, p.dimension, "objective");
  p.objective_offset = obj.value("offset", 0.0);
  const Json& cons = j.value("constraints", Json::array());
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const Json& cj = cons[i];
    const std::string where = "constraints[" + std::to_string(i) + "]";
    Constraint<Scalar> c;
    c.matrix = quadratic_from_json<Scalar>(cj, p.dimension, where);
    c.sense = sense_from_string(cj.at("sense").get<std::string>());
    if (c.sense == Sense::range) {
      c.lo = cj.at("lo").get<double>();
      c.hi = cj.at("hi").get<double>();
    } else {
      c.bound = cj.at("bound").get<double>();
    }
    p.constraints.push_back(std::move(c));
  }
  return p;
}

}  // namespace detail

inline Json problem_to_json(const ProblemDocument& doc) {
  Json j;
  j["schema"] = kProblemSchema;
  const Json body = std::visit(
      [](const auto& p) { return detail::qcqp_to_json(p); }, doc.problem);
  for (const auto& [k, v] : body.items()) j[k] = v;
  j["metadata"] = doc.metadata;
  return j;
}

// Parses and validates a problem document.
inline ProblemDocument problem_from_json(const Json& j) {
  if (!j.is_object() || j.value("schema", "") != std::string(kProblemSchema)) {
    throw SchemaError("document is not a problem instance");
  }
  try {
    ProblemDocument doc;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "complex") {
      doc.problem = detail::qcqp_from_json<Complex>(j);
    } else if (kind == "real") {
      doc.problem = detail::qcqp_from_json<double>(j);
    } else {
      throw SchemaError("unknown problem kind '" + kind + "'");
    }
    doc.metadata = j.value("metadata", Json::object());
    std::visit([](const auto& p) { validate(p); }, doc.problem);
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed problem document: ") + e.what());
  }
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create '" + path.parent_path().string() +
                    "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, dump_json(j));
}

// ---------------------------------------------------- generator metadata

inline Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back({e.u, e.v});
  return {{"vertices", g.vertices}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const Json& j) {
  try {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : j.at("edges")) {
      edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    }
    return make_graph(j.at("vertices").get<std::size_t>(), edges);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed graph: ") + e.what());
  }
}

namespace detail {

inline Json complex_list(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

inline std::vector<Complex> complex_list_from(const Json& j) {
  std::vector<Complex> out;
  for (const auto& z : j) out.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  return out;
}

}  // namespace detail

inline ProblemDocument maxcut_document(const Graph& g, double p,
                                       std::uint64_t seed) {
  ProblemDocument doc;
  doc.problem = maxcut_qcqp(g).original;
  doc.metadata = {{"generator", "maxcut"},
                  {"N", g.vertices},
                  {"P", p},
                  {"seed", seed},
                  {"mode", nullptr},
                  {"graph", graph_to_json(g)}};
  return doc;
}

inline ProblemDocument opf_document(const OpfInstance& inst, std::uint64_t seed) {
  ProblemDocument doc;
  doc.problem = opf_qcqp(inst);
  doc.metadata = {{"generator", "opf"},
                  {"N", inst.size()},
                  {"P", nullptr},
                  {"seed", seed},
                  {"mode", to_string(inst.mode)},
                  {"graph", graph_to_json(inst.graph)},
                  {"node_admittance", detail::complex_list(inst.node_admittance)},
                  {"edge_admittance", detail::complex_list(inst.edge_admittance)},
                  {"load", detail::complex_list(inst.load)}};
  return doc;
}

inline OpfInstance opf_from_metadata(const Json& meta) {
  try {
    OpfInstance inst;
    inst.graph = graph_from_json(meta.at("graph"));
    inst.mode = admittance_mode_from_string(meta.at("mode").get<std::string>());
    inst.node_admittance = detail::complex_list_from(meta.at("node_admittance"));
    inst.edge_admittance = detail::complex_list_from(meta.at("edge_admittance"));
    inst.load = detail::complex_list_from(meta.at("load"));
    if (inst.node_admittance.size() != inst.size() ||
        inst.load.size() != inst.size() ||
        inst.edge_admittance.size() != inst.graph.edge_count()) {
      throw SchemaError("OPF metadata lengths do not match the graph");
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed OPF metadata: ") + e.what());
  }
}

}  // namespace vqcqp
