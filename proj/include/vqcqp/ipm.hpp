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

// Primal-dual interior-point engine for
//
//   min F_0(x)   s.t.   F_i(x) <= 0,  i = 1..m,
//
// driven by the perturbed KKT residual
//
//   r_dual = grad F_0 + sum_i lambda_i grad F_i
//   r_cent = -diag(lambda) F - mu e
//
// The functions come from a provider (circuit-backed or direct algebra), so
// the same loop serves the hybrid solver and the classical baseline.
// Iterates stay strictly interior: F_i(x) < 0 and lambda_i > 0.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vqcqp/errors.hpp"
#include "vqcqp/estimator.hpp"
#include "vqcqp/report.hpp"

namespace vqcqp {

// Row 0 of an Evaluation is the objective; rows 1..m are the constraints.
using Evaluation = BatchResult;

template <class P>
concept FunctionProvider = requires(const P& p, const Eigen::VectorXd& x,
                                    Order order) {
  { p.dimension() } -> std::convertible_to<std::size_t>;
  { p.constraint_count() } -> std::convertible_to<std::size_t>;
  { p.evaluate(x, order) } -> std::convertible_to<Evaluation>;
  { p.in_domain(x) } -> std::convertible_to<bool>;
};

// Providers whose values are affine in a positive scale s along a ray:
// F_i(with_scale(x, s)) = s * (F_i(x) - offset_i) + offset_i for x at unit
// scale. Used to place random starting points.
template <class P>
concept ScalableProvider =
    FunctionProvider<P> &&
    requires(const P& p, const Eigen::VectorXd& x, double s,
             std::mt19937_64& rng) {
      { p.random_start(rng) } -> std::convertible_to<Eigen::VectorXd>;
      { p.with_scale(x, s) } -> std::convertible_to<Eigen::VectorXd>;
      { p.offsets() } -> std::convertible_to<Eigen::VectorXd>;
    };

struct IpmConfig {
  double eps = 1e-6;
  double c_eps = 10.0;
  double mu0 = 1.0;
  double c_mu = 0.1;
  double tau = 0.995;
  double beta = 0.5;
  double c_dec = 0.01;
  std::size_t max_inner = 200;
  std::size_t max_outer = 30;
  std::size_t restarts = 10;
  std::uint64_t seed = 0;

  // Random starting draws before falling back to the staged start.
  std::size_t start_draws = 50;
  // When no draw is interior: solve the subproblem of rows that hold at the
  // draw, then run a phase-one problem if rows are still violated.
  bool staged_start = true;
  // Shift the Hessian block until the condensed system is positive definite.
  bool inertia_correction = true;
  // Phase-one runs, each restarted from a jittered end point of the last.
  std::size_t phase_one_attempts = 3;
  double phase_one_jitter = 0.2;

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw ParameterError(what);
    };
    require(eps > 0.0, "eps must be > 0");
    require(c_eps > 0.0, "c_eps must be > 0");
    require(mu0 > 0.0, "mu0 must be > 0");
    require(c_mu > 0.0 && c_mu < 1.0, "c_mu must lie in (0, 1)");
    require(tau > 0.0 && tau < 1.0, "tau must lie in (0, 1)");
    require(beta > 0.0 && beta < 1.0, "beta must lie in (0, 1)");
    require(c_dec > 0.0 && c_dec < 1.0, "c_dec must lie in (0, 1)");
    require(max_inner >= 1 && max_outer >= 1, "iteration caps must be >= 1");
    require(start_draws >= 1, "start_draws must be >= 1");
    require(phase_one_attempts >= 1, "phase_one_attempts must be >= 1");
    require(phase_one_jitter >= 0.0, "phase_one_jitter must be >= 0");
  }
};

struct Residuals {
  Eigen::VectorXd dual;
  Eigen::VectorXd cent;

  double dual_inf() const { return dual.size() ? dual.lpNorm<Eigen::Infinity>() : 0.0; }
  double cent_inf() const { return cent.size() ? cent.lpNorm<Eigen::Infinity>() : 0.0; }
  // R_mu = max(||r_dual||_inf, ||r_cent||_inf).
  double r_mu() const { return std::max(dual_inf(), cent_inf()); }
  double norm2() const {
    return std::sqrt(dual.squaredNorm() + cent.squaredNorm());
  }
};

struct IpmState {
  Eigen::VectorXd point;
  Eigen::VectorXd lambda;
  double mu = 1.0;
  std::size_t outer = 0;
  std::size_t inner = 0;
  Residuals residuals;
  double alpha = 0.0;
};

struct NewtonStep {
  Eigen::VectorXd dx;
  Eigen::VectorXd dlambda;
  double rho = 0.0;
  // The Hessian block was shifted to fix the inertia; the step is then a
  // descent direction for the barrier function rather than a Newton step.
  bool inertia_corrected = false;
};

namespace detail {

inline Eigen::VectorXd constraint_values(const Evaluation& e) {
  return e.values.tail(e.values.size() - 1);
}

inline Eigen::MatrixXd constraint_jacobian(const Evaluation& e) {
  return e.gradients.bottomRows(e.gradients.rows() - 1);
}

inline Eigen::MatrixXd lagrangian_hessian(const Evaluation& e,
                                          const Eigen::VectorXd& lambda) {
  Eigen::MatrixXd h = e.hessians.front();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    h += lambda(i) * e.hessians[static_cast<std::size_t>(i + 1)];
  }
  return h;
}

inline bool strictly_interior(const Evaluation& e) {
  for (Eigen::Index i = 1; i < e.values.size(); ++i) {
    if (!(e.values(i) < 0.0)) return false;
  }
  return true;
}

inline double barrier_value(const Evaluation& e, double mu) {
  double v = e.values(0);
  for (Eigen::Index i = 1; i < e.values.size(); ++i) v -= mu * std::log(-e.values(i));
  return v;
}

inline Eigen::VectorXd barrier_gradient(const Evaluation& e, double mu) {
  Eigen::VectorXd g = e.gradients.row(0).transpose();
  for (Eigen::Index i = 1; i < e.values.size(); ++i) {
    g += (mu / -e.values(i)) * e.gradients.row(i).transpose();
  }
  return g;
}

}  // namespace detail

// L = F_0 + sum_i lambda_i F_i.
inline double lagrangian(const Evaluation& e, const Eigen::VectorXd& lambda) {
  if (lambda.size() + 1 != e.values.size()) {
    throw DimensionError("lambda length does not match the constraint count");
  }
  return e.values(0) + lambda.dot(detail::constraint_values(e));
}

template <FunctionProvider P>
double lagrangian(const P& provider, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& lambda) {
  return lagrangian(provider.evaluate(x, Order::values), lambda);
}

inline Residuals residuals(const Evaluation& e, const Eigen::VectorXd& lambda,
                           double mu) {
  if (lambda.size() + 1 != e.values.size()) {
    throw DimensionError("lambda length does not match the constraint count");
  }
  Residuals r;
  r.dual = e.gradients.row(0).transpose() +
           detail::constraint_jacobian(e).transpose() * lambda;
  r.cent = -lambda.cwiseProduct(detail::constraint_values(e)) -
           Eigen::VectorXd::Constant(lambda.size(), mu);
  return r;
}

template <FunctionProvider P>
Residuals residuals(const P& provider, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda, double mu) {
  return residuals(provider.evaluate(x, Order::gradients), lambda, mu);
}

//   [ grad^2 F_0 + sum lambda_i grad^2 F_i     grad F^T   ]
//   [ -diag(lambda) grad F                    -diag(F)    ]
inline Eigen::MatrixXd kkt_matrix(const Evaluation& e,
                                  const Eigen::VectorXd& lambda,
                                  double rho = 0.0) {
  const Eigen::Index n = e.gradients.cols();
  const Eigen::Index m = lambda.size();
  if (m + 1 != e.values.size()) {
    throw DimensionError("lambda length does not match the constraint count");
  }
  const Eigen::MatrixXd jac = detail::constraint_jacobian(e);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + m, n + m);
  k.topLeftCorner(n, n) = detail::lagrangian_hessian(e, lambda);
  if (rho != 0.0) k.topLeftCorner(n, n).diagonal().array() += rho;
  k.topRightCorner(n, m) = jac.transpose();
  k.bottomLeftCorner(m, n) = -(lambda.asDiagonal() * jac);
  k.bottomRightCorner(m, m) = (-detail::constraint_values(e)).asDiagonal();
  return k;
}

template <FunctionProvider P>
Eigen::MatrixXd kkt_matrix(const P& provider, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& lambda) {
  return kkt_matrix(provider.evaluate(x, Order::hessians), lambda);
}

// Solves K [dx; dlambda] = -r. A singular K is retried with rho I added to
// the Hessian block, rho = 1e-8, 1e-7, ..., 1e-2. With inertia correction
// enabled, an indefinite condensed matrix
//   W = H + grad F^T diag(lambda / -F) grad F
// is first shifted by 1.5 times its most negative eigenvalue.
inline NewtonStep newton_step(const Evaluation& e, const Eigen::VectorXd& lambda,
                              double mu, const IpmConfig& config = {},
                              std::size_t iteration = 0) {
  const Eigen::Index n = e.gradients.cols();
  const Eigen::Index m = lambda.size();
  const Residuals res = residuals(e, lambda, mu);
  Eigen::VectorXd rhs(n + m);
  rhs << -res.dual, -res.cent;
  const double r_inf = rhs.size() ? rhs.lpNorm<Eigen::Infinity>() : 0.0;

  NewtonStep step;
  if (r_inf == 0.0) {
    step.dx = Eigen::VectorXd::Zero(n);
    step.dlambda = Eigen::VectorXd::Zero(m);
    return step;
  }

  std::vector<double> ladder{0.0};
  double base = 1e-8;
  if (config.inertia_correction && n > 0) {
    const Eigen::VectorXd f = detail::constraint_values(e);
    const Eigen::MatrixXd jac = detail::constraint_jacobian(e);
    Eigen::MatrixXd w = detail::lagrangian_hessian(e, lambda);
    if (m > 0) {
      w += jac.transpose() * (lambda.array() / (-f.array())).matrix().asDiagonal() *
           jac;
    }
    w = 0.5 * (w + w.transpose());
    const double scale = std::max(1.0, w.diagonal().cwiseAbs().maxCoeff());
    const double lowest =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(w, Eigen::EigenvaluesOnly)
            .eigenvalues()(0);
    if (lowest < -1e-10 * scale) {
      base = -1.5 * lowest + 1e-6 * scale;
      ladder.clear();
      step.inertia_corrected = true;
    }
  }
  for (double rho = base; rho <= base * 1e6 * (1.0 + 1e-9); rho *= 10.0) {
    ladder.push_back(rho);
  }

  for (double rho : ladder) {
    const Eigen::MatrixXd k = kkt_matrix(e, lambda, rho);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
    const Eigen::VectorXd z = lu.solve(rhs);
    if (!z.allFinite()) continue;
    const double defect = (k * z - rhs).lpNorm<Eigen::Infinity>();
    if (defect < 1e-9 * (1.0 + r_inf)) {
      step.dx = z.head(n);
      step.dlambda = z.tail(m);
      step.rho = rho;
      return step;
    }
  }
  throw StepFailure("Newton system singular after regularization", iteration);
}

struct LineSearchResult {
  double alpha = 0.0;
  double alpha_max = 0.0;
  Evaluation trial;  // values (and gradients for the residual merit)
  bool barrier_merit = false;
};

inline double max_step_to_boundary(const Eigen::VectorXd& lambda,
                                   const Eigen::VectorXd& dlambda, double tau) {
  // alpha_max = min(1, tau * max{alpha : lambda + alpha dlambda >= (1 - tau) lambda}).
  double limit = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (dlambda(i) < 0.0) limit = std::min(limit, tau * lambda(i) / -dlambda(i));
  }
  return std::min(1.0, tau * limit);
}

// Backtracking from the fraction-to-boundary cap until the trial point is
// strictly interior and the merit decreases. The merit is the residual
// 2-norm, or the log-barrier function when the step carries an inertia
// correction.
template <FunctionProvider P>
LineSearchResult line_search(const P& provider, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& lambda,
                             const NewtonStep& step, double mu,
                             const Evaluation& current,
                             const IpmConfig& config = {}) {
  LineSearchResult out;
  out.alpha_max = max_step_to_boundary(lambda, step.dlambda, config.tau);
  const double r0 = residuals(current, lambda, mu).norm2();

  double slope = 0.0;
  out.barrier_merit = step.inertia_corrected;
  if (out.barrier_merit) {
    slope = detail::barrier_gradient(current, mu).dot(step.dx);
    if (!(slope < 0.0)) out.barrier_merit = false;
  }
  const double phi0 = out.barrier_merit ? detail::barrier_value(current, mu) : 0.0;

  for (double alpha = out.alpha_max; alpha >= 1e-12; alpha *= config.beta) {
    const Eigen::VectorXd xt = x + alpha * step.dx;
    if (!provider.in_domain(xt)) continue;
    if (out.barrier_merit) {
      Evaluation e = provider.evaluate(xt, Order::values);
      if (!e.values.allFinite() || !detail::strictly_interior(e)) continue;
      if (detail::barrier_value(e, mu) <= phi0 + config.c_dec * alpha * slope) {
        out.alpha = alpha;
        out.trial = std::move(e);
        return out;
      }
    } else {
      Evaluation e = provider.evaluate(xt, Order::gradients);
      if (!e.values.allFinite() || !detail::strictly_interior(e)) continue;
      const Eigen::VectorXd lt = lambda + alpha * step.dlambda;
      if (residuals(e, lt, mu).norm2() <= (1.0 - config.c_dec * alpha) * r0) {
        out.alpha = alpha;
        out.trial = std::move(e);
        return out;
      }
    }
  }
  throw LineSearchFailure("no acceptable step length above 1e-12");
}

// Result of one run of the nested mu / Newton loops.
struct LoopResult {
  IpmState state;
  Evaluation evaluation;  // with Hessians, at state.point
  SolveStatus status = SolveStatus::max_iterations;
  bool stopped_early = false;
  std::string message;
  std::size_t total_inner = 0;
};

// Outer loop: stop when R_0 < eps, otherwise run the inner Newton loop until
// R_mu < c_eps mu and contract mu <- mu0 c_mu^(l+1). `stop` may end the run
// after any accepted step.
template <FunctionProvider P>
LoopResult run_interior_point(
    const P& provider, Eigen::VectorXd x, Eigen::VectorXd lambda,
    const IpmConfig& config, std::vector<TraceEntry>* trace,
    const std::string& phase,
    const std::function<bool(const Eigen::VectorXd&, const Evaluation&)>& stop =
        {}) {
  LoopResult out;
  IpmState& s = out.state;
  s.point = std::move(x);
  s.lambda = std::move(lambda);
  s.mu = config.mu0;
  out.evaluation = provider.evaluate(s.point, Order::hessians);

  for (;;) {
    const Residuals r0 = residuals(out.evaluation, s.lambda, 0.0);
    s.residuals = r0;
    if (r0.r_mu() < config.eps) {
      out.status = SolveStatus::converged;
      return out;
    }
    if (s.outer >= config.max_outer) {
      out.status = SolveStatus::max_iterations;
      return out;
    }
    for (s.inner = 0;; ++s.inner) {
      const Residuals r = residuals(out.evaluation, s.lambda, s.mu);
      if (r.r_mu() < config.c_eps * s.mu || s.inner >= config.max_inner) break;
      NewtonStep step;
      LineSearchResult ls;
      try {
        step = newton_step(out.evaluation, s.lambda, s.mu, config, out.total_inner);
        ls = line_search(provider, s.point, s.lambda, step, s.mu, out.evaluation,
                         config);
      } catch (const StepFailure& e) {
        out.status = SolveStatus::step_failure;
        out.message = e.what();
        return out;
      } catch (const LineSearchFailure& e) {
        out.status = SolveStatus::line_search_failure;
        out.message = e.what();
        return out;
      }
      s.point += ls.alpha * step.dx;
      s.lambda += ls.alpha * step.dlambda;
      s.alpha = ls.alpha;
      ++out.total_inner;
      out.evaluation = provider.evaluate(s.point, Order::hessians);
      if (trace) {
        const Residuals ra = residuals(out.evaluation, s.lambda, s.mu);
        trace->push_back({phase, s.outer, out.total_inner, s.mu, ls.alpha,
                          ra.r_mu(), ra.norm2(), out.evaluation.values(0),
                          step.rho, ls.barrier_merit});
      }
      if (stop && stop(s.point, out.evaluation)) {
        out.stopped_early = true;
        s.residuals = residuals(out.evaluation, s.lambda, 0.0);
        return out;
      }
    }
    ++s.outer;
    s.mu = config.mu0 * std::pow(config.c_mu, static_cast<double>(s.outer));
  }
}

// Keeps a subset of the constraint rows of another provider.
template <FunctionProvider P>
class SubsetProvider {
 public:
  SubsetProvider(const P& inner, std::vector<Eigen::Index> rows)
      : inner_(&inner), rows_(std::move(rows)) {}

  std::size_t dimension() const { return inner_->dimension(); }
  std::size_t constraint_count() const { return rows_.size(); }
  bool in_domain(const Eigen::VectorXd& x) const { return inner_->in_domain(x); }

  Evaluation evaluate(const Eigen::VectorXd& x, Order order) const {
    Evaluation full = inner_->evaluate(x, order);
    Evaluation e;
    const auto m = static_cast<Eigen::Index>(rows_.size());
    e.values.resize(m + 1);
    e.values(0) = full.values(0);
    for (Eigen::Index i = 0; i < m; ++i) e.values(i + 1) = full.values(rows_[i] + 1);
    if (order != Order::values) {
      e.gradients.resize(m + 1, full.gradients.cols());
      e.gradients.row(0) = full.gradients.row(0);
      for (Eigen::Index i = 0; i < m; ++i) {
        e.gradients.row(i + 1) = full.gradients.row(rows_[i] + 1);
      }
    }
    if (order == Order::hessians) {
      e.hessians.push_back(full.hessians.front());
      for (Eigen::Index i = 0; i < m; ++i) {
        e.hessians.push_back(full.hessians[static_cast<std::size_t>(rows_[i] + 1)]);
      }
    }
    return e;
  }

 private:
  const P* inner_;
  std::vector<Eigen::Index> rows_;
};

// Phase-one problem over [x; s]:  min s  s.t.  F_i(x) - s <= 0.
template <FunctionProvider P>
class PhaseOneProvider {
 public:
  explicit PhaseOneProvider(const P& inner) : inner_(&inner) {}

  std::size_t dimension() const { return inner_->dimension() + 1; }
  std::size_t constraint_count() const { return inner_->constraint_count(); }
  bool in_domain(const Eigen::VectorXd& z) const {
    return std::isfinite(z(z.size() - 1)) && inner_->in_domain(z.head(z.size() - 1));
  }

  Evaluation evaluate(const Eigen::VectorXd& z, Order order) const {
    const Eigen::Index n = z.size() - 1;
    const double slack = z(n);
    Evaluation full = inner_->evaluate(z.head(n), order);
    const Eigen::Index m = full.values.size() - 1;
    Evaluation e;
    e.values.resize(m + 1);
    e.values(0) = slack;
    e.values.tail(m) = full.values.tail(m).array() - slack;
    if (order != Order::values) {
      e.gradients = Eigen::MatrixXd::Zero(m + 1, n + 1);
      e.gradients(0, n) = 1.0;
      e.gradients.block(1, 0, m, n) = full.gradients.bottomRows(m);
      e.gradients.block(1, n, m, 1).setConstant(-1.0);
    }
    if (order == Order::hessians) {
      e.hessians.assign(static_cast<std::size_t>(m + 1),
                        Eigen::MatrixXd::Zero(n + 1, n + 1));
      for (Eigen::Index i = 1; i <= m; ++i) {
        e.hessians[static_cast<std::size_t>(i)].topLeftCorner(n, n) =
            full.hessians[static_cast<std::size_t>(i)];
      }
    }
    return e;
  }

 private:
  const P* inner_;
};

struct InteriorStart {
  Eigen::VectorXd point;
  std::string stage;  // "draw", "relaxed" or "phase_one"
  std::size_t draws = 0;
};

namespace detail {

// Scale s > 0 minimizing max_i (s q_i + c_i). When the envelope keeps
// decreasing towards s -> 0, picks the s where it reaches half its limit.
inline double best_scale(const Eigen::VectorXd& q, const Eigen::VectorXd& c) {
  const Eigen::Index m = q.size();
  if (m == 0) return 1.0;
  auto envelope = [&](double s) { return (s * q + c).maxCoeff(); };

  // Limit as s -> 0+: the rows with the largest offset, steepest first.
  const double c_top = c.maxCoeff();
  double slope0 = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (c(i) == c_top) slope0 = std::max(slope0, q(i));
  }

  std::vector<double> candidates;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (q(i) == q(j)) continue;
      const double s = (c(j) - c(i)) / (q(i) - q(j));
      if (s > 0.0 && std::isfinite(s)) candidates.push_back(s);
    }
  }
  if (slope0 >= 0.0 && c_top < 0.0) {
    // Increasing from the start: back off to half the limiting value.
    double lo = 0.0;
    double hi = 1.0;
    while (envelope(hi) < 0.5 * c_top && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (envelope(mid) < 0.5 * c_top ? lo : hi) = mid;
    }
    return lo > 0.0 ? lo : hi;
  }
  if (candidates.empty()) return 1.0;
  const auto [mn, mx] = std::minmax_element(candidates.begin(), candidates.end());
  candidates.push_back(0.5 * *mn);
  candidates.push_back(2.0 * *mx);
  double best = candidates.front();
  double best_value = envelope(best);
  for (double s : candidates) {
    const double v = envelope(s);
    if (v < best_value) {
      best_value = v;
      best = s;
    }
  }
  return best;
}

inline Eigen::VectorXd initial_multipliers(const Evaluation& e, double mu0) {
  const Eigen::VectorXd f = constraint_values(e);
  return (mu0 / (-f.array())).matrix();
}

}  // namespace detail

// Finds a strictly interior starting point: random draws placed along their
// scaling ray first, then (optionally) a solve restricted to the rows that
// hold at the best draw, then a phase-one problem.
template <ScalableProvider P>
InteriorStart find_interior(const P& provider, const IpmConfig& config,
                            std::mt19937_64& rng,
                            std::vector<TraceEntry>* trace = nullptr) {
  const Eigen::VectorXd offsets = provider.offsets();
  const Eigen::VectorXd c = offsets.tail(offsets.size() - 1);
  Eigen::VectorXd best;
  double best_violation = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_unit;

  InteriorStart out;
  for (std::size_t d = 0; d < config.start_draws; ++d) {
    const Eigen::VectorXd unit = provider.random_start(rng);
    const Evaluation e = provider.evaluate(unit, Order::values);
    const Eigen::VectorXd q = detail::constraint_values(e) - c;
    const Eigen::VectorXd x = provider.with_scale(unit, detail::best_scale(q, c));
    const Evaluation ex = provider.evaluate(x, Order::values);
    out.draws = d + 1;
    if (!provider.in_domain(x)) continue;
    const double violation =
        c.size() ? detail::constraint_values(ex).maxCoeff()
                 : -std::numeric_limits<double>::infinity();
    if (violation < 0.0) {
      out.point = x;
      out.stage = "draw";
      return out;
    }
    if (violation < best_violation) {
      best_violation = violation;
      best = x;
      best_unit = unit;
    }
  }
  if (!config.staged_start || best.size() == 0) {
    throw NoInteriorFound("no strictly interior point among " +
                          std::to_string(config.start_draws) + " draws");
  }

  auto all_rows_hold = [&provider](const Eigen::VectorXd& x) {
    return provider.in_domain(x) &&
           detail::strictly_interior(provider.evaluate(x, Order::values));
  };

  // Rows satisfied near the origin of the best draw's ray.
  Eigen::VectorXd x = best;
  {
    const Evaluation e = provider.evaluate(best_unit, Order::values);
    const Eigen::VectorXd q = detail::constraint_values(e) - c;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      if (c(i) < 0.0 || (c(i) == 0.0 && q(i) < 0.0)) rows.push_back(i);
    }
    if (!rows.empty() && rows.size() < static_cast<std::size_t>(c.size())) {
      Eigen::VectorXd qk(static_cast<Eigen::Index>(rows.size()));
      Eigen::VectorXd ck(qk.size());
      for (std::size_t k = 0; k < rows.size(); ++k) {
        qk(static_cast<Eigen::Index>(k)) = q(rows[k]);
        ck(static_cast<Eigen::Index>(k)) = c(rows[k]);
      }
      const Eigen::VectorXd start = provider.with_scale(best_unit, detail::best_scale(qk, ck));
      const SubsetProvider<P> subset(provider, rows);
      const Evaluation es = subset.evaluate(start, Order::values);
      if (provider.in_domain(start) && detail::strictly_interior(es)) {
        const LoopResult r = run_interior_point(
            subset, start, detail::initial_multipliers(es, config.mu0), config,
            trace, "relaxed",
            [&](const Eigen::VectorXd& p, const Evaluation&) { return all_rows_hold(p); });
        x = r.state.point;
        if (all_rows_hold(x)) {
          out.point = x;
          out.stage = "relaxed";
          return out;
        }
      }
    }
  }

  // Phase one from x. A run that stalls at a stationary point with rows
  // still violated is retried from a jittered copy of its end point.
  std::normal_distribution<double> jitter(0.0, config.phase_one_jitter);
  std::string last_status;
  for (std::size_t attempt = 0; attempt < config.phase_one_attempts; ++attempt) {
    const Evaluation e = provider.evaluate(x, Order::values);
    const Eigen::VectorXd f = detail::constraint_values(e);
    const double worst = f.maxCoeff();
    Eigen::VectorXd z(x.size() + 1);
    z << x, worst + std::max(1e-2, 0.1 * std::abs(worst));
    const PhaseOneProvider<P> phase_one(provider);
    const Evaluation ez = phase_one.evaluate(z, Order::values);
    const LoopResult r = run_interior_point(
        phase_one, z, detail::initial_multipliers(ez, config.mu0), config, trace,
        "phase_one", [&](const Eigen::VectorXd& p, const Evaluation&) {
          return all_rows_hold(p.head(p.size() - 1));
        });
    const Eigen::VectorXd candidate = r.state.point.head(x.size());
    if (all_rows_hold(candidate)) {
      out.point = candidate;
      out.stage = "phase_one";
      return out;
    }
    last_status = to_string(r.status);
    Eigen::VectorXd next = candidate;
    do {
      next = candidate;
      for (Eigen::Index i = 0; i < next.size(); ++i) next(i) += jitter(rng);
    } while (!provider.in_domain(next));
    x = next;
  }
  throw NoInteriorFound("phase one ended without a strictly interior point (" +
                        last_status + ")");
}

// Raw outcome of a single solve, before problem-specific decoding.
struct IpmOutcome {
  LoopResult loop;
  InteriorStart start;
  std::vector<TraceEntry> trace;
  SolveStatus status = SolveStatus::max_iterations;
  std::string message;
  double wall_ms = 0.0;
};

// Interior start followed by the nested loops. Never throws for
// algorithmic failures; they are reported through the status.
template <ScalableProvider P>
IpmOutcome solve_interior_point(const P& provider, const IpmConfig& config,
                                std::uint64_t seed) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  IpmOutcome out;
  std::mt19937_64 rng(seed);
  try {
    out.start = find_interior(provider, config, rng, &out.trace);
  } catch (const NoInteriorFound& e) {
    out.status = SolveStatus::infeasible_start;
    out.message = e.what();
    out.start.draws = config.start_draws;
  } catch (const NumericalError& e) {
    out.status = SolveStatus::infeasible_start;
    out.message = e.what();
  }
  if (out.status != SolveStatus::infeasible_start) {
    const Evaluation e0 = provider.evaluate(out.start.point, Order::values);
    try {
      out.loop = run_interior_point(provider, out.start.point,
                                    detail::initial_multipliers(e0, config.mu0),
                                    config, &out.trace, "main");
      out.status = out.loop.status;
      out.message = out.loop.message;
    } catch (const NumericalError& e) {
      out.status = SolveStatus::step_failure;
      out.message = e.what();
    }
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

// Fills the solver-independent fields of a report.
inline void fill_report(SolveReport& report, const IpmOutcome& outcome) {
  report.status = outcome.status;
  report.message = outcome.message;
  report.trace = outcome.trace;
  report.wall_ms = outcome.wall_ms;
  report.start_stage = outcome.start.stage;
  report.start_draws = outcome.start.draws;
  if (outcome.status == SolveStatus::infeasible_start) return;
  const LoopResult& l = outcome.loop;
  const Eigen::VectorXd& x = l.state.point;
  report.point.assign(x.data(), x.data() + x.size());
  report.lambda.assign(l.state.lambda.data(),
                       l.state.lambda.data() + l.state.lambda.size());
  report.objective = l.evaluation.values(0);
  const Residuals r0 = residuals(l.evaluation, l.state.lambda, 0.0);
  report.dual_residual = r0.dual_inf();
  report.cent_residual = r0.cent_inf();
  report.r0 = r0.r_mu();
  const Eigen::VectorXd f = detail::constraint_values(l.evaluation);
  report.max_violation = f.size() ? f.maxCoeff() : 0.0;
  report.outer_iterations = l.state.outer;
  report.inner_iterations = l.total_inner;
}

// Picks the best report: converged first, then feasible, then the lowest
// objective; ties go to the earlier (lower-seed) entry.
inline std::size_t best_report(const std::vector<SolveReport>& reports) {
  if (reports.empty()) throw ParameterError("no reports to choose from");
  auto rank = [](const SolveReport& r) {
    if (r.converged()) return 0;
    if (r.feasible_start()) return 1;
    return 2;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& a = reports[i];
    const auto& b = reports[best];
    if (rank(a) < rank(b) || (rank(a) == rank(b) && rank(a) < 2 &&
                              a.objective < b.objective)) {
      best = i;
    }
  }
  return best;
}

}  // namespace vqcqp
