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


#include "vqcqp/estimator.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace vqcqp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI(0.0, 1.0);

Eigen::VectorXd oracle_theta() {
  Eigen::VectorXd t(8);
  t << 0.3, -1.1, 0.7, 2.0, -0.4, 0.9, 1.3, -2.2;
  return t;
}

Eigen::MatrixXcd oracle_a() {
  Eigen::MatrixXcd a(4, 4);
  a << 1.0, 0.5 - 0.25 * kI, 0.0, 0.2 * kI,
       0.5 + 0.25 * kI, -0.3, 0.1, 0.0,
       0.0, 0.1, 0.8, -0.6 + 0.1 * kI,
       -0.2 * kI, 0.0, -0.6 - 0.1 * kI, 0.4;
  return a;
}

Eigen::MatrixXd oracle_b() {
  Eigen::MatrixXd b(3, 3);
  b << 0.6, -0.2, 0.3, -0.2, 1.1, 0.05, 0.3, 0.05, -0.4;
  return b;
}

// Central differences of f over the [eta, theta] vector.
template <class F>
Eigen::VectorXd fd_gradient(F&& f, const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

TEST(PrimalPointTest, VectorRoundTrip) {
  const PrimalPoint p{2.5, (Eigen::VectorXd(2) << 0.1, -0.2).finished()};
  const Eigen::VectorXd v = p.to_vector();
  EXPECT_EQ(v(0), 2.5);
  const PrimalPoint q = PrimalPoint::from_vector(v);
  EXPECT_EQ(q.eta, 2.5);
  EXPECT_EQ(q.theta, p.theta);
  EXPECT_TRUE(p.valid());
  EXPECT_FALSE((PrimalPoint{0.0, p.theta}.valid()));
}

TEST(EstimatorTest, AmplitudeFrozenOracle) {
  const Ansatz a = build_ansatz(2, 1);
  const auto f = EncodedFunction::amplitude(oracle_a(), -0.25);
  const PrimalPoint x{1.7, oracle_theta()};
  EXPECT_NEAR(eval(f, a, x), 1.3095164856638772, 1e-12);
  const double expected[] = {0.9173626386305144,  0.4726428096568646,
                             -0.03364868460531412, -0.21250073818368517,
                             -0.05613823381711568, 0.3762724114730886,
                             0.21967647493292827,  -0.27670300827287164,
                             -0.04306964701550341};
  const Eigen::VectorXd g = grad(f, a, x);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(g(i), expected[i], 1e-8) << i;
}

TEST(EstimatorTest, ProbabilityFrozenOracle) {
  const Ansatz a = build_ansatz(2, 1);
  const auto f = EncodedFunction::probability(oracle_b(), 0.5);
  const PrimalPoint x{1.7, oracle_theta()};
  EXPECT_NEAR(eval(f, a, x), 0.8482030520348154, 1e-12);
  const double g_expected[] = {0.20482532472332335, 0.087587415786849462,
                               0.54451901220775589, -0.0092285197095254290,
                               -0.48562279357788890, -0.0021366707791958817,
                               -0.45215969455281163, 0.0, 0.0};
  const Eigen::VectorXd g = grad(f, a, x);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(g(i), g_expected[i], 1e-8) << i;

  const Eigen::MatrixXd h = hessian(f, a, x);
  const double diag[] = {0.0, -0.47310881046147557, -0.13138432286563528,
                         -0.063566940600168209, 0.070716982270013773,
                         -0.43706375185692536, -0.15095713012946987, 0.0, 0.0};
  const double row3[] = {-0.0054285437256496039, -0.032472355360191330,
                         -0.052545326423292238, -0.063566940600168209,
                         -0.00070044248179357282, 0.022733123716811576,
                         0.058047924800241901, 0.0, 0.0};
  for (int i = 0; i < 9; ++i) {
    EXPECT_NEAR(h(i, i), diag[i], 1e-6) << i;
    EXPECT_NEAR(h(3, i), row3[i], 1e-6) << i;
  }
}

TEST(EstimatorTest, ExactEvaluationMatchesDenseAlgebra) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> eta(0.1, 5.0);
  for (int t = 0; t < 10; ++t) {
    const int nq = 2 + t % 3;
    const int l = 1 + t % 4;
    const Ansatz a = build_ansatz(nq, l);
    const Eigen::Index dim = a.dimension();
    const PrimalPoint x{eta(rng), testing::random_real(a.parameter_count(), rng, -kPi, kPi)};
    const Eigen::VectorXcd psi = testing::dense_state(x.theta, nq, l);

    const Eigen::Index k = dim - t % 2;  // exercises zero padding
    const Eigen::MatrixXcd am = testing::random_hermitian(k, rng);
    const double amp = x.eta * psi.head(k).dot(am * psi.head(k)).real() + 0.3;
    EXPECT_NEAR(eval(EncodedFunction::amplitude(am, 0.3), a, x), amp, 1e-10);

    const Eigen::MatrixXd bm = testing::random_symmetric(k, rng);
    const Eigen::VectorXd p = psi.head(k).cwiseAbs2();
    EXPECT_NEAR(eval(EncodedFunction::probability(bm, -0.2), a, x),
                x.eta * p.dot(bm * p) - 0.2, 1e-10);
  }
}

TEST(EstimatorTest, ShiftRuleMatchesFiniteDifferences) {
  std::mt19937_64 rng(202);
  for (auto enc : {Encoding::amplitude, Encoding::probability}) {
    for (int t = 0; t < 3; ++t) {
      const Ansatz a = build_ansatz(3, 2);
      const EncodedFunction f =
          enc == Encoding::amplitude
              ? EncodedFunction::amplitude(testing::random_hermitian(8, rng), 0.1)
              : EncodedFunction::probability(testing::random_symmetric(6, rng), 0.1);
      const PrimalPoint x{1.3, testing::random_real(a.parameter_count(), rng, -kPi, kPi)};
      auto value = [&](const Eigen::VectorXd& v) {
        return eval(f, a, PrimalPoint::from_vector(v));
      };
      const Eigen::VectorXd g = grad(f, a, x);
      const Eigen::VectorXd g_fd = fd_gradient(value, x.to_vector());
      EXPECT_LT((g - g_fd).norm() / std::max(1.0, g_fd.norm()), 1e-6);

      const Eigen::MatrixXd h = hessian(f, a, x);
      EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      Eigen::MatrixXd h_fd(h.rows(), h.cols());
      const Eigen::VectorXd v = x.to_vector();
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        Eigen::VectorXd p = v, m = v;
        p(i) += 1e-5;
        m(i) -= 1e-5;
        h_fd.col(i) = (grad(f, a, PrimalPoint::from_vector(p)) -
                       grad(f, a, PrimalPoint::from_vector(m))) / 2e-5;
      }
      EXPECT_LT((h - h_fd).cwiseAbs().maxCoeff(), 1e-4);
    }
  }
}

TEST(EstimatorTest, EtaDerivativesAreExact) {
  std::mt19937_64 rng(5);
  const Ansatz a = build_ansatz(2, 2);
  const auto f = EncodedFunction::amplitude(testing::random_hermitian(4, rng), 0.7);
  const PrimalPoint x{2.0, testing::random_real(a.parameter_count(), rng)};
  const Eigen::MatrixXd h = hessian(f, a, x);
  EXPECT_EQ(h(0, 0), 0.0);
  const double q = (eval(f, a, x) - 0.7) / x.eta;
  EXPECT_NEAR(grad(f, a, x)(0), q, 1e-12);
  // d^2 F / d eta d theta = (1 / eta) dF / dtheta.
  const Eigen::VectorXd g = grad(f, a, x);
  EXPECT_LT((h.row(0).tail(g.size() - 1).transpose() - g.tail(g.size() - 1) / x.eta)
                .norm(), 1e-12);
}

TEST(EstimatorTest, BatchSharesLayout) {
  std::mt19937_64 rng(9);
  const Ansatz a = build_ansatz(2, 1);
  const std::vector<EncodedFunction> fs = {
      EncodedFunction::probability(testing::random_symmetric(4, rng)),
      EncodedFunction::probability(testing::random_symmetric(3, rng), 1.0)};
  const PrimalPoint x{0.5, testing::random_real(8, rng)};
  const BatchResult r = eval_batch(fs, a, x);
  ASSERT_EQ(r.values.size(), 2);
  ASSERT_EQ(r.gradients.rows(), 2);
  ASSERT_EQ(r.gradients.cols(), 9);
  ASSERT_EQ(r.hessians.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(r.values(i), eval(fs[i], a, x), 1e-14);
    EXPECT_LT((r.gradients.row(i).transpose() - grad(fs[i], a, x)).norm(), 1e-14);
  }
  const BatchResult v = eval_batch(fs, a, x, Order::values);
  EXPECT_EQ(v.gradients.size(), 0);
  EXPECT_TRUE(v.hessians.empty());
}

TEST(EstimatorTest, RejectsBadInputs) {
  const Ansatz a = build_ansatz(2, 1);
  const auto f = EncodedFunction::probability(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_THROW(eval(f, a, {1.0, Eigen::VectorXd::Zero(7)}), DimensionError);
  EXPECT_THROW(eval(f, a, {-1.0, Eigen::VectorXd::Zero(8)}), ParameterError);
  const auto big = EncodedFunction::probability(Eigen::MatrixXd::Identity(5, 5));
  EXPECT_THROW(eval(big, a, {1.0, Eigen::VectorXd::Zero(8)}), DimensionError);
  const auto amp = EncodedFunction::amplitude(Eigen::MatrixXcd::Identity(4, 4));
  EXPECT_THROW(eval_batch({f, amp}, a, {1.0, Eigen::VectorXd::Zero(8)}), ParameterError);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 1.0;
  EXPECT_THROW(EncodedFunction::probability(asym), ValidationError);
}

TEST(EstimatorTest, ShotsNeedProbabilityEncodingAndGenerator) {
  const Ansatz a = build_ansatz(2, 1);
  const PrimalPoint x{1.0, Eigen::VectorXd::Constant(8, 0.4)};
  std::mt19937_64 rng(1);
  const auto amp = EncodedFunction::amplitude(Eigen::MatrixXcd::Identity(4, 4));
  EXPECT_THROW(eval_batch({amp}, a, x, Order::values, {100, &rng}), ParameterError);
  const auto prob = EncodedFunction::probability(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_THROW(eval_batch({prob}, a, x, Order::values, {100, nullptr}), ParameterError);
}

TEST(EstimatorTest, ShotEstimateIsUnbiasedForLinearFeatures) {
  // With B = ones, p'Bp = (sum p)^2 = 1 for any sample.
  const Ansatz a = build_ansatz(2, 2);
  std::mt19937_64 rng(3);
  const PrimalPoint x{1.5, testing::random_real(a.parameter_count(), rng)};
  const auto f = EncodedFunction::probability(Eigen::MatrixXd::Ones(4, 4), 0.0);
  const BatchResult r = eval_batch({f}, a, x, Order::values, {50, &rng});
  EXPECT_NEAR(r.values(0), 1.5, 1e-12);
}

TEST(MonteCarloTest, WithinStandardErrors) {
  const Ansatz a = build_ansatz(2, 1);
  const auto f = EncodedFunction::probability(oracle_b(), 0.5);
  const PrimalPoint x{1.7, oracle_theta()};
  std::mt19937_64 rng(77);
  const double exact = eval(f, a, x);
  double sum = 0.0;
  for (int s = 0; s < 50; ++s) sum += mc_estimate_real(f, a, x, 20000, rng);
  EXPECT_NEAR(sum / 50, exact, 1e-2);
  EXPECT_THROW(mc_estimate_real(f, a, x, 0, rng), ParameterError);
  EXPECT_THROW(mc_estimate_real(EncodedFunction::amplitude(oracle_a()), a, x, 10, rng),
               ParameterError);
}

}  // namespace
}  // namespace vqcqp
