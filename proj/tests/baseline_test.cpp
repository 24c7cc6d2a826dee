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


#include "vqcqp/baseline.hpp"

#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "vqcqp/bench.hpp"
#include "vqcqp/hybrid.hpp"

namespace vqcqp {
namespace {

ComplexCanonical convex_toy() {
  ComplexQcqp p;
  p.dimension = 2;
  p.objective = Eigen::MatrixXcd::Identity(2, 2);
  p.constraints = {Constraint<Complex>::ge(Eigen::MatrixXcd::Identity(2, 2), 0.5),
                   Constraint<Complex>::le(Eigen::MatrixXcd::Identity(2, 2), 2.0)};
  return canonicalize(p);
}

TEST(DirectProviderTest, AnalyticDerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(8);
  RealCanonical p;
  p.dimension = 4;
  p.objective = testing::random_symmetric(4, rng);
  p.objective_offset = 0.3;
  p.inequalities.push_back({testing::random_symmetric(4, rng), -1.0});
  const DirectProvider provider(p);
  const Eigen::VectorXd v = testing::random_real(4, rng);
  const Evaluation e = provider.evaluate(v, Order::hessians);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index k = 0; k < 4; ++k) {
      Eigen::VectorXd a = v, b = v;
      a(k) += 1e-6;
      b(k) -= 1e-6;
      const double fd = (provider.evaluate(a, Order::values).values(i) -
                         provider.evaluate(b, Order::values).values(i)) / 2e-6;
      EXPECT_NEAR(e.gradients(i, k), fd, 1e-8);
    }
  }
  EXPECT_TRUE(e.hessians[0].isApprox(2.0 * p.objective));
  EXPECT_NEAR(e.values(0), v.dot(p.objective * v) + 0.3, 1e-14);
  EXPECT_THROW(provider.evaluate(Eigen::VectorXd::Zero(3), Order::values), DimensionError);
}

TEST(DirectProviderTest, ScaleIsQuadratic) {
  std::mt19937_64 rng(1);
  const DirectProvider provider(realify(convex_toy()));
  const Eigen::VectorXd u = provider.random_start(rng);
  EXPECT_NEAR(u.norm(), 1.0, 1e-14);
  const Eigen::VectorXd x = provider.with_scale(u, 3.0);
  const Eigen::VectorXd c = provider.offsets();
  const Eigen::VectorXd f1 = provider.evaluate(u, Order::values).values;
  const Eigen::VectorXd f3 = provider.evaluate(x, Order::values).values;
  EXPECT_LT((f3 - (3.0 * (f1 - c) + c)).norm(), 1e-12);
}

TEST(SolveDirectTest, ConvexToy) {
  const SolveReport r = solve_direct(convex_toy(), {}, 0);
  ASSERT_TRUE(r.converged()) << r.message;
  EXPECT_EQ(r.method, "classical");
  EXPECT_NEAR(r.objective, 0.5, 1e-6);
  EXPECT_LT(r.r0, 1e-6);
  ASSERT_EQ(r.variables.size(), 2u);
  ASSERT_EQ(r.variables_im.size(), 2u);
  double norm2 = 0.0;
  for (int i = 0; i < 2; ++i) norm2 += r.variables[i] * r.variables[i] + r.variables_im[i] * r.variables_im[i];
  EXPECT_NEAR(norm2, 0.5, 1e-6);
}

TEST(SolveDirectTest, UnconstrainedConvexQuadratic) {
  RealCanonical p;
  p.dimension = 3;
  p.objective = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  p.objective_offset = -1.0;
  const SolveReport r = solve_direct(p, {}, 0);
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(r.objective, -1.0, 1e-10);
}

TEST(SolveDirectTest, FourCycleMaxCut) {
  const Graph g = cycle_graph(4);
  const MaxCutProblem mc = maxcut_qcqp(g);
  const RealCanonical direct = canonicalize(mc.original);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SolveReport r = solve_direct(direct, {}, seed);
    if (!r.feasible_start()) continue;
    const double cut = decode_cut(g, r.variables).value;
    EXPECT_LE(cut, 4.0);
    hits += cut == 4.0;
  }
  EXPECT_GE(hits, 6);
}

TEST(SolveDirectTest, Deterministic) {
  const MaxCutProblem mc = maxcut_qcqp(complete_graph(4));
  const RealCanonical direct = canonicalize(mc.original);
  const SolveReport a = solve_direct(direct, {}, 5);
  const SolveReport b = solve_direct(direct, {}, 5);
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.status, b.status);
}

// On convex instances both solvers reach the same optimum.
TEST(SolveDirectTest, AgreesWithHybridOnConvexInstance) {
  ComplexQcqp p;
  p.dimension = 2;
  p.objective = (Eigen::MatrixXcd(2, 2) << 2.0, Complex(0.5, 0.5), Complex(0.5, -0.5), 1.0)
                    .finished();
  p.constraints = {Constraint<Complex>::ge(Eigen::MatrixXcd::Identity(2, 2), 1.0),
                   Constraint<Complex>::le(Eigen::MatrixXcd::Identity(2, 2), 3.0)};
  const ComplexCanonical c = canonicalize(p);
  const SolveReport classical = solve_direct(c, {}, 0);
  const SolveReport hybrid = solve_hybrid(c, {.layers = 2}, {}, 0);
  ASSERT_TRUE(classical.converged());
  ASSERT_TRUE(hybrid.converged());
  const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(p.objective)
                            .eigenvalues()(0);
  EXPECT_NEAR(classical.objective, lowest, 1e-5);
  EXPECT_NEAR(hybrid.objective, classical.objective, 1e-3);
}

}  // namespace
}  // namespace vqcqp
