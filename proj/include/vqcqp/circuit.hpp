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

// Hardware-efficient ansatz and a dense statevector simulator for it.
//
// Layout of an l-layer ansatz on q qubits:
//
//   l x [ Ry column | Rz column | CZ even pairs | CZ odd pairs ]
//   then a closing [ Ry column | Rz column ]
//
// Rotations follow R(a) = exp(-i a G / 2), so every parameter obeys the
// +-pi/2 shift rule. Qubit k is bit k of the basis-state index.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqcqp/errors.hpp"

namespace vqcqp {

inline constexpr std::size_t kMaxQubits = 20;

enum class GateKind { ry, rz, cz };

struct Gate {
  GateKind kind;
  std::size_t qubit;
  std::size_t partner = 0;             // second qubit of a CZ
  std::optional<std::size_t> parameter;  // rotations only
};

class Ansatz {
 public:
  Ansatz() = default;

  std::size_t qubit_count() const { return qubits_; }
  std::size_t layer_count() const { return layers_; }
  std::size_t parameter_count() const { return parameters_; }
  std::size_t dimension() const { return std::size_t{1} << qubits_; }

  // Flattened gate list in execution order.
  const std::vector<Gate>& gates() const { return gates_; }
  // Each moment holds gates acting on disjoint qubits.
  const std::vector<std::vector<std::size_t>>& moments() const {
    return moments_;
  }
  // Position in gates() of the rotation driven by parameter i.
  std::size_t gate_of_parameter(std::size_t i) const {
    return parameter_gate_.at(i);
  }

 private:
  friend Ansatz build_ansatz(std::size_t qubits, std::size_t layers);

  std::size_t qubits_ = 0;
  std::size_t layers_ = 0;
  std::size_t parameters_ = 0;
  std::vector<Gate> gates_;
  std::vector<std::vector<std::size_t>> moments_;
  std::vector<std::size_t> parameter_gate_;
};

inline Ansatz build_ansatz(std::size_t qubits, std::size_t layers) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw ParameterError("qubit count must lie in [1, " +
                         std::to_string(kMaxQubits) + "]");
  }
  if (layers < 1) throw ParameterError("layer count must be >= 1");

  Ansatz a;
  a.qubits_ = qubits;
  a.layers_ = layers;

  auto open_moment = [&a] { a.moments_.emplace_back(); };
  auto add = [&a](Gate g) {
    if (g.parameter) a.parameter_gate_.push_back(a.gates_.size());
    a.moments_.back().push_back(a.gates_.size());
    a.gates_.push_back(g);
  };
  auto rotation_column = [&](GateKind kind) {
    open_moment();
    for (std::size_t q = 0; q < qubits; ++q) {
      add({kind, q, 0, a.parameters_++});
    }
  };
  auto cz_sublayer = [&](std::size_t first) {
    if (first + 1 >= qubits) return;
    open_moment();
    for (std::size_t q = first; q + 1 < qubits; q += 2) {
      add({GateKind::cz, q, q + 1, std::nullopt});
    }
  };

  for (std::size_t layer = 0; layer < layers; ++layer) {
    rotation_column(GateKind::ry);
    rotation_column(GateKind::rz);
    cz_sublayer(0);
    cz_sublayer(1);
  }
  rotation_column(GateKind::ry);
  rotation_column(GateKind::rz);
  return a;
}

// One time step per moment: two per rotation pair, two for a CZ ladder on
// three or more qubits.
inline std::size_t circuit_depth(const Ansatz& a) {
  std::size_t depth = 0;
  for (const auto& m : a.moments()) {
    if (!m.empty()) ++depth;
  }
  return depth;
}

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t qubits)
      : qubits_(qubits),
        amplitudes_(Eigen::VectorXcd::Zero(Eigen::Index{1} << qubits)) {
    amplitudes_(0) = 1.0;
  }
  StateVector(std::size_t qubits, Eigen::VectorXcd amplitudes)
      : qubits_(qubits), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != (Eigen::Index{1} << qubits)) {
      throw DimensionError("amplitude vector length must be 2^qubits");
    }
  }

  std::size_t qubit_count() const { return qubits_; }
  std::size_t dimension() const {
    return static_cast<std::size_t>(amplitudes_.size());
  }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& mutable_amplitudes() { return amplitudes_; }

 private:
  std::size_t qubits_ = 0;
  Eigen::VectorXcd amplitudes_;
};

namespace detail {

inline void apply_ry(Eigen::VectorXcd& psi, std::size_t q, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const std::size_t bit = std::size_t{1} << q;
  const std::size_t n = static_cast<std::size_t>(psi.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i & bit) continue;
    const std::complex<double> a0 = psi(i);
    const std::complex<double> a1 = psi(i | bit);
    psi(i) = c * a0 - s * a1;
    psi(i | bit) = s * a0 + c * a1;
  }
}

inline void apply_rz(Eigen::VectorXcd& psi, std::size_t q, double angle) {
  const std::complex<double> lower = std::polar(1.0, -0.5 * angle);
  const std::complex<double> upper = std::polar(1.0, 0.5 * angle);
  const std::size_t bit = std::size_t{1} << q;
  const std::size_t n = static_cast<std::size_t>(psi.size());
  for (std::size_t i = 0; i < n; ++i) {
    psi(i) *= (i & bit) ? upper : lower;
  }
}

inline void apply_cz(Eigen::VectorXcd& psi, std::size_t q1, std::size_t q2) {
  const std::size_t mask = (std::size_t{1} << q1) | (std::size_t{1} << q2);
  const std::size_t n = static_cast<std::size_t>(psi.size());
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & mask) == mask) psi(i) = -psi(i);
  }
}

inline void apply_gate(Eigen::VectorXcd& psi, const Gate& g, double angle) {
  switch (g.kind) {
    case GateKind::ry:
      apply_ry(psi, g.qubit, angle);
      break;
    case GateKind::rz:
      apply_rz(psi, g.qubit, angle);
      break;
    case GateKind::cz:
      apply_cz(psi, g.qubit, g.partner);
      break;
  }
}

}  // namespace detail

// Runs gates [begin, end) of the ansatz on psi in place.
inline void apply_range(const Ansatz& a, const Eigen::VectorXd& theta,
                        Eigen::VectorXcd& psi, std::size_t begin,
                        std::size_t end) {
  const auto& gates = a.gates();
  for (std::size_t k = begin; k < end; ++k) {
    const Gate& g = gates[k];
    detail::apply_gate(psi, g, g.parameter ? theta(*g.parameter) : 0.0);
  }
}

inline StateVector apply(const Ansatz& a, const Eigen::VectorXd& theta) {
  if (static_cast<std::size_t>(theta.size()) != a.parameter_count()) {
    throw DimensionError("expected " + std::to_string(a.parameter_count()) +
                         " circuit parameters, got " +
                         std::to_string(theta.size()));
  }
  if (!theta.allFinite()) throw NumericalError("non-finite circuit parameter");
  StateVector state(a.qubit_count());
  apply_range(a, theta, state.mutable_amplitudes(), 0, a.gates().size());
  return state;
}

// <psi|H|psi>. Throws if the imaginary residue exceeds 1e-10 relative to
// the largest entry of H.
inline double expectation(const StateVector& state, const Eigen::MatrixXcd& h) {
  const auto& psi = state.amplitudes();
  if (h.rows() != psi.size() || h.cols() != psi.size()) {
    throw DimensionError("observable must be " +
                         std::to_string(psi.size()) + "x" +
                         std::to_string(psi.size()));
  }
  const std::complex<double> value = psi.dot(h * psi);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (std::abs(value.imag()) >= 1e-10 * scale) {
    throw NumericalError("expectation has imaginary residue " +
                         std::to_string(value.imag()));
  }
  return value.real();
}

inline Eigen::VectorXd probabilities(const StateVector& state) {
  return state.amplitudes().cwiseAbs2();
}

// Computational-basis measurement outcomes, i.i.d. from probabilities().
inline std::vector<std::size_t> sample(const StateVector& state,
                                       std::size_t shots,
                                       std::mt19937_64& rng) {
  if (shots < 1) throw ParameterError("shots must be >= 1");
  const Eigen::VectorXd p = probabilities(state);
  std::discrete_distribution<std::size_t> dist(p.data(), p.data() + p.size());
  std::vector<std::size_t> out(shots);
  for (auto& k : out) k = dist(rng);
  return out;
}

inline std::size_t qubits_for(std::size_t dimension) {
  std::size_t q = 1;
  while ((std::size_t{1} << q) < dimension) ++q;
  if (q > kMaxQubits) {
    throw ParameterError("problem dimension " + std::to_string(dimension) +
                         " needs more than " + std::to_string(kMaxQubits) +
                         " qubits");
  }
  return q;
}

}  // namespace vqcqp
