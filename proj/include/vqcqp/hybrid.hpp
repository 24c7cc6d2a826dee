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

// The hybrid solver: canonical functions are evaluated on the ansatz state
// and the interior-point engine runs over (eta, theta).

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqcqp/circuit.hpp"
#include "vqcqp/errors.hpp"
#include "vqcqp/estimator.hpp"
#include "vqcqp/ipm.hpp"
#include "vqcqp/model.hpp"
#include "vqcqp/report.hpp"

namespace vqcqp {

struct HybridOptions {
  std::size_t layers = 5;
  // > 0 replaces exact probabilities by shot frequencies (probability
  // encoding only).
  std::size_t shots = 0;
  // Half-width of the uniform perturbation around the starting angles.
  double start_spread = 0.1;
};

struct DecodedVariables {
  std::vector<double> re;
  std::vector<double> im;
};

// Rows 1..m are the canonical inequalities; row m+1 is -eta <= 0, which
// keeps eta positive for problems whose own rows do not bound it.
class CircuitProvider {
 public:
  template <class Scalar>
  CircuitProvider(const CanonicalQcqp<Scalar>& problem,
                  const HybridOptions& options, std::uint64_t seed = 0)
      : options_(options), rng_(seed), dimension_(problem.dimension) {
    if (options.layers < 1) throw ParameterError("layers must be >= 1");
    if (options.start_spread < 0.0) {
      throw ParameterError("start spread must be >= 0");
    }
    if constexpr (is_complex_v<Scalar>) {
      if (options.shots > 0) {
        throw ParameterError("shot mode needs the probability encoding");
      }
      encoding_ = Encoding::amplitude;
      functions_.push_back(
          EncodedFunction::amplitude(problem.objective, problem.objective_offset));
      for (const auto& row : problem.inequalities) {
        functions_.push_back(EncodedFunction::amplitude(row.matrix, row.offset));
      }
    } else {
      if (!problem.nonneg_domain) {
        throw ParameterError(
            "probability encoding needs a problem on y >= 0; split it first");
      }
      encoding_ = Encoding::probability;
      functions_.push_back(
          EncodedFunction::probability(problem.objective, problem.objective_offset));
      for (const auto& row : problem.inequalities) {
        functions_.push_back(EncodedFunction::probability(row.matrix, row.offset));
      }
    }
    ansatz_ = build_ansatz(qubits_for(problem.dimension), options.layers);
  }

  const Ansatz& ansatz() const { return ansatz_; }
  Encoding encoding() const { return encoding_; }
  std::size_t problem_dimension() const { return dimension_; }
  const std::vector<EncodedFunction>& functions() const { return functions_; }

  std::size_t dimension() const { return ansatz_.parameter_count() + 1; }
  std::size_t constraint_count() const { return functions_.size(); }

  bool in_domain(const Eigen::VectorXd& x) const {
    return x.size() == static_cast<Eigen::Index>(dimension()) && x(0) > 0.0 &&
           x.allFinite();
  }

  Evaluation evaluate(const Eigen::VectorXd& x, Order order) const {
    const PrimalPoint point = PrimalPoint::from_vector(x);
    ShotOptions shots;
    if (options_.shots > 0) {
      shots.shots = options_.shots;
      shots.rng = &rng_;
    }
    const BatchResult b = eval_batch(functions_, ansatz_, point, order, shots);
    const Eigen::Index m = b.values.size();
    const Eigen::Index d = x.size();
    Evaluation e;
    e.values.resize(m + 1);
    e.values.head(m) = b.values;
    e.values(m) = -point.eta;
    if (order != Order::values) {
      e.gradients = Eigen::MatrixXd::Zero(m + 1, d);
      e.gradients.topRows(m) = b.gradients;
      e.gradients(m, 0) = -1.0;
    }
    if (order == Order::hessians) {
      e.hessians = b.hessians;
      e.hessians.push_back(Eigen::MatrixXd::Zero(d, d));
    }
    return e;
  }

  // Ry angles pi/2 and Rz angles 0, each perturbed uniformly; eta = 1.
  Eigen::VectorXd random_start(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> jitter(-options_.start_spread,
                                                  options_.start_spread);
    Eigen::VectorXd x(static_cast<Eigen::Index>(dimension()));
    x(0) = 1.0;
    for (std::size_t i = 0; i < ansatz_.parameter_count(); ++i) {
      const Gate& g = ansatz_.gates()[ansatz_.gate_of_parameter(i)];
      const double base = g.kind == GateKind::ry ? std::numbers::pi / 2.0 : 0.0;
      x(static_cast<Eigen::Index>(i + 1)) = base + jitter(rng);
    }
    return x;
  }

  Eigen::VectorXd with_scale(const Eigen::VectorXd& x, double s) const {
    Eigen::VectorXd y = x;
    y(0) = s;
    return y;
  }

  Eigen::VectorXd offsets() const {
    Eigen::VectorXd c(static_cast<Eigen::Index>(functions_.size() + 1));
    for (std::size_t i = 0; i < functions_.size(); ++i) {
      c(static_cast<Eigen::Index>(i)) = functions_[i].offset;
    }
    c(c.size() - 1) = 0.0;
    return c;
  }

  // x = sqrt(eta) psi (amplitude) or y = sqrt(eta) p (probability), first
  // N entries.
  DecodedVariables decode(const Eigen::VectorXd& x) const {
    const PrimalPoint point = PrimalPoint::from_vector(x);
    const StateVector state = apply(ansatz_, point.theta);
    const double scale = std::sqrt(point.eta);
    const auto n = static_cast<Eigen::Index>(dimension_);
    DecodedVariables out;
    if (encoding_ == Encoding::amplitude) {
      const Eigen::VectorXcd v = scale * state.amplitudes().head(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        out.re.push_back(v(i).real());
        out.im.push_back(v(i).imag());
      }
    } else {
      const Eigen::VectorXd p = probabilities(state).head(n);
      for (Eigen::Index i = 0; i < n; ++i) out.re.push_back(scale * p(i));
    }
    return out;
  }

 private:
  HybridOptions options_;
  mutable std::mt19937_64 rng_;
  std::size_t dimension_ = 0;
  Encoding encoding_ = Encoding::amplitude;
  std::vector<EncodedFunction> functions_;
  Ansatz ansatz_;
};

// One hybrid run with the given seed. Algorithmic failures are reported
// through the status; invalid input throws.
template <class Scalar>
SolveReport solve_hybrid(const CanonicalQcqp<Scalar>& problem,
                         const HybridOptions& options, const IpmConfig& config,
                         std::uint64_t seed) {
  config.validate();
  const CircuitProvider provider(problem, options, seed);
  const IpmOutcome outcome = solve_interior_point(provider, config, seed);

  SolveReport report;
  report.method = "hybrid";
  report.seed = seed;
  report.split_dimension = problem.split_from;
  fill_report(report, outcome);
  if (outcome.status == SolveStatus::infeasible_start) return report;

  const Eigen::VectorXd& x = outcome.loop.state.point;
  report.eta = x(0);
  report.theta.assign(x.data() + 1, x.data() + x.size());
  // The last multiplier belongs to the eta row.
  report.lambda_eta = report.lambda.back();
  report.lambda.pop_back();
  const Eigen::VectorXd f = detail::constraint_values(outcome.loop.evaluation);
  report.max_violation = f.size() > 1 ? f.head(f.size() - 1).maxCoeff() : 0.0;
  DecodedVariables v = provider.decode(x);
  report.variables = std::move(v.re);
  report.variables_im = std::move(v.im);
  return report;
}

}  // namespace vqcqp
