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

// Benchmark generators: Max-Cut on G(N, P) graphs and simplified optimal
// power flow on random connected networks.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqcqp/errors.hpp"
#include "vqcqp/model.hpp"

namespace vqcqp {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;  // u < v
};

struct Graph {
  std::size_t vertices = 0;
  std::vector<Edge> edges;

  std::size_t edge_count() const { return edges.size(); }

  Eigen::MatrixXd adjacency() const {
    const auto n = static_cast<Eigen::Index>(vertices);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : edges) {
      a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = 1.0;
      a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = 1.0;
    }
    return a;
  }
};

// Builds a graph from an edge list, normalizing each edge to u < v and
// rejecting self-loops, duplicates and out-of-range endpoints.
inline Graph make_graph(std::size_t vertices,
                        const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Graph g;
  g.vertices = vertices;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [u, v] : edges) {
    if (u >= vertices || v >= vertices) {
      throw ValidationError("edge endpoint out of range");
    }
    if (u == v) throw ValidationError("self-loop on vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) {
      throw ValidationError("duplicate edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ")");
    }
    g.edges.push_back({u, v});
  }
  return g;
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return make_graph(n, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  }
  return make_graph(n, e);
}

// Each pair (i, j), i < j, in lexicographic order is kept with probability P.
inline Graph gen_gnp_graph(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw ParameterError("G(N, P) needs N >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("P must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Graph g;
  g.vertices = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (u(rng) < p) g.edges.push_back({i, j});
    }
  }
  return g;
}

// ---------------------------------------------------------------- Max-Cut

struct MaxCutProblem {
  RealQcqp original;    // y in R^N
  RealQcqp split;       // [y1; y2] in R^2N, y1, y2 >= 0
  RealCanonical canonical;
  std::size_t split_dimension = 0;  // N
};

// min -(1/2)(M - (1/2) y'Ay)  s.t.  y_j^2 = 1, so that the objective equals
// minus the cut value on every sign vector.
inline MaxCutProblem maxcut_qcqp(const Graph& g,
                                 double equality_band = kDefaultEqualityBand) {
  if (g.vertices < 2) throw ParameterError("Max-Cut needs at least 2 vertices");
  const auto n = static_cast<Eigen::Index>(g.vertices);
  MaxCutProblem out;
  out.original.dimension = g.vertices;
  out.original.objective = 0.25 * g.adjacency();
  out.original.objective_offset = -0.5 * static_cast<double>(g.edge_count());
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    e(j, j) = 1.0;
    out.original.constraints.push_back(Constraint<double>::eq(std::move(e), 1.0));
  }
  out.split = split_nonnegative(out.original).problem;
  out.canonical = canonicalize(out.split, equality_band);
  out.split_dimension = g.vertices;
  return out;
}

struct Cut {
  std::vector<int> signs;
  double value = 0.0;
};

inline double cut_value(const Graph& g, std::span<const int> signs) {
  if (signs.size() != g.vertices) {
    throw DimensionError("sign vector length does not match the graph");
  }
  double value = 0.0;
  for (const auto& e : g.edges) {
    value += 0.5 * (1.0 - static_cast<double>(signs[e.u] * signs[e.v]));
  }
  return value;
}

// s_j = sign(y_j), ties (|y_j| < 1e-9) going to +1.
inline Cut decode_cut(const Graph& g, std::span<const double> y) {
  if (y.size() != g.vertices) {
    throw DimensionError("variable vector length does not match the graph");
  }
  Cut c;
  c.signs.reserve(y.size());
  for (double v : y) c.signs.push_back(std::abs(v) < 1e-9 ? 1 : (v > 0.0 ? 1 : -1));
  c.value = cut_value(g, c.signs);
  return c;
}

// Split variables [y1; y2] are recombined as y1 - y2 when split_dimension > 0.
inline Cut decode_cut(const Graph& g, std::span<const double> variables,
                      std::size_t split_dimension) {
  if (split_dimension == 0) return decode_cut(g, variables);
  if (variables.size() != 2 * split_dimension) {
    throw DimensionError("split variables must have length 2N");
  }
  std::vector<double> y(split_dimension);
  for (std::size_t j = 0; j < split_dimension; ++j) {
    y[j] = variables[j] - variables[j + split_dimension];
  }
  return decode_cut(g, y);
}

inline constexpr std::size_t kMaxBruteForceVertices = 24;

// Exhaustive search over the 2^(V-1) partitions with vertex 0 fixed to +1.
inline Cut brute_force_maxcut(const Graph& g) {
  if (g.vertices > kMaxBruteForceVertices) {
    throw ParameterError("brute force is limited to " +
                         std::to_string(kMaxBruteForceVertices) + " vertices");
  }
  Cut best;
  best.signs.assign(g.vertices, 1);
  best.value = g.vertices ? cut_value(g, best.signs) : 0.0;
  if (g.vertices < 2) return best;
  const std::uint64_t count = std::uint64_t{1} << (g.vertices - 1);
  std::vector<int> s(g.vertices, 1);
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    for (std::size_t j = 1; j < g.vertices; ++j) {
      s[j] = (mask >> (j - 1)) & 1u ? -1 : 1;
    }
    std::size_t value = 0;
    for (const auto& e : g.edges) value += s[e.u] != s[e.v];
    if (static_cast<double>(value) > best.value) {
      best.value = static_cast<double>(value);
      best.signs = s;
    }
  }
  return best;
}

// ------------------------------------------------------------------- OPF

enum class AdmittanceMode { real, complex };

inline const char* to_string(AdmittanceMode m) {
  return m == AdmittanceMode::real ? "real" : "complex";
}

inline AdmittanceMode admittance_mode_from_string(const std::string& s) {
  if (s == "real") return AdmittanceMode::real;
  if (s == "complex") return AdmittanceMode::complex;
  throw ParameterError("unknown admittance mode '" + s + "'");
}

struct OpfInstance {
  Graph graph;
  AdmittanceMode mode = AdmittanceMode::complex;
  std::vector<Complex> node_admittance;  // y_k
  std::vector<Complex> edge_admittance;  // y_jk, aligned with graph.edges
  std::vector<Complex> load;             // S^L

  std::size_t size() const { return graph.vertices; }
};

// Y_kk = y_k + sum_{j in N(k)} y_jk,  Y_jk = Y_kj = -y_jk.
inline Eigen::MatrixXcd admittance_matrix(const OpfInstance& inst) {
  const auto n = static_cast<Eigen::Index>(inst.size());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) y(k, k) = inst.node_admittance[static_cast<std::size_t>(k)];
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    const auto u = static_cast<Eigen::Index>(inst.graph.edges[e].u);
    const auto v = static_cast<Eigen::Index>(inst.graph.edges[e].v);
    const Complex w = inst.edge_admittance[e];
    y(u, u) += w;
    y(v, v) += w;
    y(u, v) -= w;
    y(v, u) -= w;
  }
  return y;
}

// Column j holds row j of `part`; the Hermitian part of that matrix is
// returned so that the quadratic form is real.
inline Eigen::MatrixXd node_matrix(const Eigen::MatrixXd& part, Eigen::Index j) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(part.rows(), part.cols());
  m.col(j) = part.row(j).transpose();
  return 0.5 * (m + m.transpose());
}

// Random labelled tree from a uniform Pruefer sequence, then every other
// pair (lexicographic order) added with probability 0.3. Admittances and
// loads are uniform on [0, 1]; complex mode draws real then imaginary part.
inline OpfInstance gen_opf(std::size_t n, std::uint64_t seed,
                           AdmittanceMode mode = AdmittanceMode::complex) {
  if (n < 2) throw ParameterError("OPF instances need N >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::set<std::pair<std::size_t, std::size_t>> edges;

  if (n == 2) {
    edges.insert({0, 1});
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> pruefer(n - 2);
    for (auto& v : pruefer) v = pick(rng);
    std::vector<std::size_t> degree(n, 1);
    for (auto v : pruefer) ++degree[v];
    for (auto v : pruefer) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      edges.insert({std::min(leaf, v), std::max(leaf, v)});
      --degree[leaf];
      --degree[v];
    }
    std::size_t a = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (degree[k] == 1) {
        if (a == n) {
          a = k;
        } else {
          edges.insert({a, k});
          break;
        }
      }
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> extra;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (edges.count({i, j})) continue;
      if (unit(rng) < 0.3) extra.insert({i, j});
    }
  }
  edges.insert(extra.begin(), extra.end());

  OpfInstance inst;
  inst.mode = mode;
  inst.graph.vertices = n;
  for (const auto& [u, v] : edges) inst.graph.edges.push_back({u, v});
  auto draw = [&] {
    const double re = unit(rng);
    const double im = mode == AdmittanceMode::complex ? unit(rng) : 0.0;
    return Complex(re, im);
  };
  for (std::size_t k = 0; k < n; ++k) inst.node_admittance.push_back(draw());
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    inst.edge_admittance.push_back(draw());
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double re = unit(rng);
    const double im = unit(rng);
    inst.load.emplace_back(re, im);
  }
  return inst;
}

//   min x'Y'x + sum_j Re S_j
//   s.t. x'Y'_j x + Re S_j in [0, 1],  x'Y''_j x + Im S_j in [0, 1],
//        |x_j|^2 in [0, 1].
inline ComplexQcqp opf_qcqp(const OpfInstance& inst) {
  const auto n = static_cast<Eigen::Index>(inst.size());
  const Eigen::MatrixXcd y = admittance_matrix(inst);
  const Eigen::MatrixXd re = y.real();
  const Eigen::MatrixXd im = y.imag();

  ComplexQcqp p;
  p.dimension = inst.size();
  p.objective = re.cast<Complex>();
  for (const auto& s : inst.load) p.objective_offset += s.real();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double sr = inst.load[static_cast<std::size_t>(j)].real();
    const double si = inst.load[static_cast<std::size_t>(j)].imag();
    p.constraints.push_back(Constraint<Complex>::in_range(
        node_matrix(re, j).cast<Complex>(), -sr, 1.0 - sr));
    p.constraints.push_back(Constraint<Complex>::in_range(
        node_matrix(im, j).cast<Complex>(), -si, 1.0 - si));
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
    e(j, j) = 1.0;
    p.constraints.push_back(Constraint<Complex>::in_range(std::move(e), 0.0, 1.0));
  }
  return p;
}

}  // namespace vqcqp
