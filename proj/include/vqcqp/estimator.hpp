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

// Circuit-encoded quadratic functions of the primal point (eta, theta).
//
// Amplitude encoding (complex variables, x = sqrt(eta) psi):
//     F = eta <psi|A|psi> + c
// Probability encoding (non-negative reals, y_k = sqrt(eta) p_k):
//     F = eta sum_kl B_kl p_k p_l + c
//
// Derivatives in theta come from the +-pi/2 shift rule applied to the
// "features" of a state: the expectations <A_f> for amplitude encoding, the
// outcome probabilities p_k for probability encoding. Everything is linear
// in eta, so eta derivatives are analytic.
//
// Point vectors are laid out as [eta, theta_0, ..., theta_{n-1}].

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqcqp/circuit.hpp"
#include "vqcqp/errors.hpp"
#include "vqcqp/model.hpp"

namespace vqcqp {

struct PrimalPoint {
  double eta = 1.0;
  Eigen::VectorXd theta;

  Eigen::VectorXd to_vector() const {
    Eigen::VectorXd v(theta.size() + 1);
    v(0) = eta;
    v.tail(theta.size()) = theta;
    return v;
  }
  static PrimalPoint from_vector(const Eigen::VectorXd& v) {
    if (v.size() < 1) throw DimensionError("primal vector is empty");
    return {v(0), v.tail(v.size() - 1)};
  }
  bool valid() const {
    return eta > 0.0 && std::isfinite(eta) && theta.allFinite();
  }
};

enum class Encoding { amplitude, probability };

inline const char* to_string(Encoding e) {
  return e == Encoding::amplitude ? "amplitude" : "probability";
}

struct EncodedFunction {
  Encoding encoding = Encoding::amplitude;
  Eigen::MatrixXcd amplitude_matrix;
  Eigen::MatrixXd probability_matrix;
  double offset = 0.0;

  static EncodedFunction amplitude(Eigen::MatrixXcd m, double offset = 0.0) {
    detail::check_matrix<Complex>(m, static_cast<std::size_t>(m.rows()),
                                  "encoded function");
    EncodedFunction f;
    f.encoding = Encoding::amplitude;
    f.amplitude_matrix = std::move(m);
    f.offset = offset;
    return f;
  }
  static EncodedFunction probability(Eigen::MatrixXd m, double offset = 0.0) {
    detail::check_matrix<double>(m, static_cast<std::size_t>(m.rows()),
                                 "encoded function");
    EncodedFunction f;
    f.encoding = Encoding::probability;
    f.probability_matrix = std::move(m);
    f.offset = offset;
    return f;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(encoding == Encoding::amplitude
                                         ? amplitude_matrix.rows()
                                         : probability_matrix.rows());
  }
};

enum class Order { values, gradients, hessians };

// Values, gradients and Hessians of a family of functions at one point.
// Row i of `gradients` is the gradient of function i.
struct BatchResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd gradients;
  std::vector<Eigen::MatrixXd> hessians;
};

// Finite-shot evaluation of the probability encoding: every circuit run is
// replaced by `shots` measurements and the empirical frequencies.
struct ShotOptions {
  std::size_t shots = 0;
  std::mt19937_64* rng = nullptr;
  bool enabled() const { return shots > 0; }
};

namespace detail {

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// Shift-rule derivatives of a feature map g: state -> R^K.
struct FeatureDerivatives {
  Eigen::VectorXd value;
  Eigen::MatrixXd jacobian;              // K x n
  std::vector<Eigen::MatrixXd> hessian;  // K matrices, n x n
};

template <class FeatureMap>
FeatureDerivatives shift_derivatives(const Ansatz& a,
                                     const Eigen::VectorXd& theta, Order order,
                                     FeatureMap&& features) {
  const std::size_t n = a.parameter_count();
  const std::size_t gate_count = a.gates().size();

  // prefix[i]: state just before the rotation driven by parameter i.
  std::vector<Eigen::VectorXcd> prefix;
  Eigen::VectorXcd psi = StateVector(a.qubit_count()).amplitudes();
  if (order != Order::values) {
    prefix.reserve(n);
    std::size_t done = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t g = a.gate_of_parameter(i);
      apply_range(a, theta, psi, done, g);
      done = g;
      prefix.push_back(psi);
    }
    apply_range(a, theta, psi, done, gate_count);
  } else {
    apply_range(a, theta, psi, 0, gate_count);
  }

  FeatureDerivatives out;
  out.value = features(psi);
  const Eigen::Index k = out.value.size();
  if (order == Order::values) return out;

  Eigen::VectorXd shifted = theta;
  auto run = [&](std::size_t from_param) {
    Eigen::VectorXcd s = prefix[from_param];
    apply_range(a, shifted, s, a.gate_of_parameter(from_param), gate_count);
    return features(s);
  };

  out.jacobian.resize(k, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    shifted(i) = theta(i) + kHalfPi;
    const Eigen::VectorXd plus = run(i);
    shifted(i) = theta(i) - kHalfPi;
    const Eigen::VectorXd minus = run(i);
    shifted(i) = theta(i);
    out.jacobian.col(static_cast<Eigen::Index>(i)) = 0.5 * (plus - minus);
  }
  if (order == Order::gradients) return out;

  out.hessian.assign(static_cast<std::size_t>(k),
                     Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                           static_cast<Eigen::Index>(n)));
  auto store = [&](std::size_t i, std::size_t j, const Eigen::VectorXd& v) {
    for (Eigen::Index f = 0; f < k; ++f) {
      out.hessian[static_cast<std::size_t>(f)](i, j) = v(f);
      out.hessian[static_cast<std::size_t>(f)](j, i) = v(f);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    shifted(i) = theta(i) + 2.0 * kHalfPi;
    const Eigen::VectorXd plus = run(i);
    shifted(i) = theta(i) - 2.0 * kHalfPi;
    const Eigen::VectorXd minus = run(i);
    shifted(i) = theta(i);
    store(i, i, 0.25 * (plus - 2.0 * out.value + minus));

    for (std::size_t j = i + 1; j < n; ++j) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(k);
      for (int si : {+1, -1}) {
        for (int sj : {+1, -1}) {
          shifted(i) = theta(i) + si * kHalfPi;
          shifted(j) = theta(j) + sj * kHalfPi;
          acc += static_cast<double>(si * sj) * run(i);
        }
      }
      shifted(i) = theta(i);
      shifted(j) = theta(j);
      store(i, j, 0.25 * acc);
    }
  }
  return out;
}

inline void check_sizes(const std::vector<EncodedFunction>& fs,
                        const Ansatz& a, const PrimalPoint& point) {
  if (static_cast<std::size_t>(point.theta.size()) != a.parameter_count()) {
    throw DimensionError("expected " + std::to_string(a.parameter_count()) +
                         " circuit parameters, got " +
                         std::to_string(point.theta.size()));
  }
  if (!point.valid()) {
    throw ParameterError("primal point needs eta > 0 and finite angles");
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].size() > a.dimension()) {
      throw DimensionError("function " + std::to_string(i) + " has dimension " +
                           std::to_string(fs[i].size()) +
                           ", state holds only " +
                           std::to_string(a.dimension()));
    }
    if (fs[i].encoding != fs.front().encoding) {
      throw ParameterError("a batch must use a single encoding");
    }
  }
}

inline Eigen::VectorXd empirical_probabilities(const Eigen::VectorXcd& psi,
                                               const ShotOptions& shots) {
  const Eigen::VectorXd p = psi.cwiseAbs2();
  std::discrete_distribution<Eigen::Index> dist(p.data(), p.data() + p.size());
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(p.size());
  for (std::size_t s = 0; s < shots.shots; ++s) freq(dist(*shots.rng)) += 1.0;
  return freq / static_cast<double>(shots.shots);
}

inline void check_finite(const BatchResult& r) {
  for (Eigen::Index f = 0; f < r.gradients.rows(); ++f) {
    for (Eigen::Index j = 0; j < r.gradients.cols(); ++j) {
      if (!std::isfinite(r.gradients(f, j))) {
        throw NumericalError(
            j == 0 ? std::string("non-finite derivative in eta")
                   : "non-finite derivative in theta index " +
                         std::to_string(j - 1));
      }
    }
  }
  if (!r.values.allFinite()) throw NumericalError("non-finite function value");
}

}  // namespace detail

// Values and derivatives of every function, sharing one simulation per
// shifted parameter vector across the whole family.
inline BatchResult eval_batch(const std::vector<EncodedFunction>& fs,
                              const Ansatz& a, const PrimalPoint& point,
                              Order order = Order::hessians,
                              const ShotOptions& shots = {}) {
  BatchResult r;
  const auto m = static_cast<Eigen::Index>(fs.size());
  const auto n = static_cast<Eigen::Index>(a.parameter_count());
  r.values = Eigen::VectorXd::Zero(m);
  if (order != Order::values) r.gradients = Eigen::MatrixXd::Zero(m, n + 1);
  if (fs.empty()) return r;
  detail::check_sizes(fs, a, point);
  const double eta = point.eta;

  if (fs.front().encoding == Encoding::amplitude) {
    if (shots.enabled()) {
      throw ParameterError("shot-based evaluation needs the probability encoding");
    }
    auto features = [&fs](const Eigen::VectorXcd& psi) {
      Eigen::VectorXd e(static_cast<Eigen::Index>(fs.size()));
      for (std::size_t f = 0; f < fs.size(); ++f) {
        const auto& mat = fs[f].amplitude_matrix;
        const auto head = psi.head(mat.rows());
        e(static_cast<Eigen::Index>(f)) = head.dot(mat * head).real();
      }
      return e;
    };
    const auto d = detail::shift_derivatives(a, point.theta, order, features);
    for (Eigen::Index f = 0; f < m; ++f) {
      r.values(f) = eta * d.value(f) + fs[static_cast<std::size_t>(f)].offset;
    }
    if (order == Order::values) return r;
    r.gradients.col(0) = d.value;
    r.gradients.rightCols(n) = eta * d.jacobian;
    if (order == Order::hessians) {
      r.hessians.reserve(static_cast<std::size_t>(m));
      for (Eigen::Index f = 0; f < m; ++f) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
        h.block(0, 1, 1, n) = d.jacobian.row(f);
        h.block(1, 0, n, 1) = d.jacobian.row(f).transpose();
        h.bottomRightCorner(n, n) = eta * d.hessian[static_cast<std::size_t>(f)];
        r.hessians.push_back(0.5 * (h + h.transpose()));
      }
    }
  } else {
    if (shots.enabled() && shots.rng == nullptr) {
      throw ParameterError("shot-based evaluation needs a random generator");
    }
    auto features = [&shots](const Eigen::VectorXcd& psi) -> Eigen::VectorXd {
      if (shots.enabled()) return detail::empirical_probabilities(psi, shots);
      return psi.cwiseAbs2();
    };
    const auto d = detail::shift_derivatives(a, point.theta, order, features);
    for (Eigen::Index f = 0; f < m; ++f) {
      const auto& fn = fs[static_cast<std::size_t>(f)];
      const auto& b = fn.probability_matrix;
      const Eigen::Index k = b.rows();
      const Eigen::VectorXd p = d.value.head(k);
      const Eigen::VectorXd bp = b * p;
      const double q = p.dot(bp);
      r.values(f) = eta * q + fn.offset;
      if (order == Order::values) continue;

      const auto jac = d.jacobian.topRows(k);
      const Eigen::VectorXd grad_q = 2.0 * jac.transpose() * bp;
      r.gradients(f, 0) = q;
      r.gradients.row(f).tail(n) = eta * grad_q.transpose();
      if (order != Order::hessians) continue;

      Eigen::MatrixXd hq = jac.transpose() * b * jac;
      for (Eigen::Index kk = 0; kk < k; ++kk) {
        if (bp(kk) != 0.0) hq += bp(kk) * d.hessian[static_cast<std::size_t>(kk)];
      }
      hq *= 2.0;
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
      h.block(0, 1, 1, n) = grad_q.transpose();
      h.block(1, 0, n, 1) = grad_q;
      h.bottomRightCorner(n, n) = eta * hq;
      r.hessians.push_back(0.5 * (h + h.transpose()));
    }
  }
  if (order != Order::values) detail::check_finite(r);
  return r;
}

// Exact value of one encoded function.
inline double eval(const EncodedFunction& f, const Ansatz& a,
                   const PrimalPoint& point) {
  return eval_batch({f}, a, point, Order::values).values(0);
}

// Gradient in [eta, theta] layout.
inline Eigen::VectorXd grad(const EncodedFunction& f, const Ansatz& a,
                            const PrimalPoint& point) {
  return eval_batch({f}, a, point, Order::gradients).gradients.row(0).transpose();
}

inline Eigen::MatrixXd hessian(const EncodedFunction& f, const Ansatz& a,
                               const PrimalPoint& point) {
  return eval_batch({f}, a, point, Order::hessians).hessians.front();
}

// Sampling estimator for the probability encoding: each round prepares and
// measures the state twice, recording outcomes k and l, and the estimate is
// eta * mean(B_kl) + offset.
inline double mc_estimate_real(const EncodedFunction& f, const Ansatz& a,
                               const PrimalPoint& point, std::size_t samples,
                               std::mt19937_64& rng) {
  if (f.encoding != Encoding::probability) {
    throw ParameterError("Monte-Carlo estimation needs the probability encoding");
  }
  if (samples < 1) throw ParameterError("sample count must be >= 1");
  detail::check_sizes({f}, a, point);
  const Eigen::VectorXd p = probabilities(apply(a, point.theta));
  std::discrete_distribution<Eigen::Index> measure(p.data(), p.data() + p.size());
  const auto& b = f.probability_matrix;
  const Eigen::Index dim = b.rows();
  double sum = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Eigen::Index k = measure(rng);
    const Eigen::Index l = measure(rng);
    if (k < dim && l < dim) sum += b(k, l);
  }
  return point.eta * sum / static_cast<double>(samples) + f.offset;
}

}  // namespace vqcqp
