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

// Classical baseline: the interior-point engine on the original variables
// with exact derivatives F = v'Mv + c, grad = 2Mv, Hessian = 2M.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqcqp/errors.hpp"
#include "vqcqp/ipm.hpp"
#include "vqcqp/model.hpp"
#include "vqcqp/report.hpp"

namespace vqcqp {

class DirectProvider {
 public:
  explicit DirectProvider(const RealCanonical& problem) {
    dimension_ = problem.dimension;
    matrices_.push_back(problem.objective);
    offsets_.push_back(problem.objective_offset);
    for (const auto& row : problem.inequalities) {
      matrices_.push_back(row.matrix);
      offsets_.push_back(row.offset);
    }
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t constraint_count() const { return matrices_.size() - 1; }
  bool in_domain(const Eigen::VectorXd& v) const {
    return v.size() == static_cast<Eigen::Index>(dimension_) && v.allFinite();
  }

  Evaluation evaluate(const Eigen::VectorXd& v, Order order) const {
    if (v.size() != static_cast<Eigen::Index>(dimension_)) {
      throw DimensionError("direct point has the wrong length");
    }
    const auto m = static_cast<Eigen::Index>(matrices_.size());
    Evaluation e;
    e.values.resize(m);
    if (order != Order::values) e.gradients.resize(m, v.size());
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::VectorXd mv = matrices_[static_cast<std::size_t>(i)] * v;
      e.values(i) = v.dot(mv) + offsets_[static_cast<std::size_t>(i)];
      if (order != Order::values) e.gradients.row(i) = 2.0 * mv.transpose();
      if (order == Order::hessians) {
        e.hessians.push_back(2.0 * matrices_[static_cast<std::size_t>(i)]);
      }
    }
    if (!e.values.allFinite()) throw NumericalError("non-finite function value");
    return e;
  }

  // Uniform direction on the unit sphere.
  Eigen::VectorXd random_start(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(static_cast<Eigen::Index>(dimension_));
    do {
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    } while (v.norm() == 0.0);
    return v / v.norm();
  }

  Eigen::VectorXd with_scale(const Eigen::VectorXd& v, double s) const {
    return std::sqrt(s) * v;
  }

  Eigen::VectorXd offsets() const {
    return Eigen::Map<const Eigen::VectorXd>(offsets_.data(),
                                             static_cast<Eigen::Index>(offsets_.size()));
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<Eigen::MatrixXd> matrices_;
  std::vector<double> offsets_;
};

// Real form of a complex canonical problem, acting on [Re x; Im x].
inline RealCanonical realify(const ComplexCanonical& p) {
  RealCanonical out;
  out.dimension = 2 * p.dimension;
  out.objective = realify(p.objective);
  out.objective_offset = p.objective_offset;
  for (const auto& row : p.inequalities) {
    out.inequalities.push_back({realify(row.matrix), row.offset});
  }
  out.provenance = p.provenance;
  out.equality_band = p.equality_band;
  return out;
}

namespace detail {

inline SolveReport solve_direct_real(const RealCanonical& problem,
                                     const IpmConfig& config,
                                     std::uint64_t seed,
                                     std::size_t complex_dimension) {
  config.validate();
  const DirectProvider provider(problem);
  const IpmOutcome outcome = solve_interior_point(provider, config, seed);
  SolveReport report;
  report.method = "classical";
  report.seed = seed;
  report.split_dimension = problem.split_from;
  fill_report(report, outcome);
  if (outcome.status == SolveStatus::infeasible_start) return report;
  const std::vector<double>& v = report.point;
  if (complex_dimension > 0) {
    report.variables.assign(v.begin(), v.begin() + complex_dimension);
    report.variables_im.assign(v.begin() + complex_dimension, v.end());
  } else {
    report.variables = v;
  }
  return report;
}

}  // namespace detail

inline SolveReport solve_direct(const RealCanonical& problem,
                                const IpmConfig& config, std::uint64_t seed) {
  return detail::solve_direct_real(problem, config, seed, 0);
}

inline SolveReport solve_direct(const ComplexCanonical& problem,
                                const IpmConfig& config, std::uint64_t seed) {
  return detail::solve_direct_real(realify(problem), config, seed,
                                   problem.dimension);
}

}  // namespace vqcqp
