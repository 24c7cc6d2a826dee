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


#include "vqcqp/bench.hpp"

#include <random>

#include <gtest/gtest.h>

namespace vqcqp {
namespace {

TEST(GraphTest, MakeGraphNormalizesAndRejects) {
  const Graph g = make_graph(3, {{2, 0}, {1, 2}});
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges[0].u, 0u);
  EXPECT_EQ(g.edges[0].v, 2u);
  EXPECT_THROW(make_graph(3, {{1, 1}}), ValidationError);
  EXPECT_THROW(make_graph(3, {{0, 1}, {1, 0}}), ValidationError);
  EXPECT_THROW(make_graph(3, {{0, 3}}), ValidationError);
}

TEST(GraphTest, GnpExtremes) {
  EXPECT_EQ(gen_gnp_graph(7, 1.0, 3).edge_count(), 21u);
  EXPECT_EQ(gen_gnp_graph(7, 0.0, 3).edge_count(), 0u);
  EXPECT_THROW(gen_gnp_graph(1, 0.5, 0), ParameterError);
  EXPECT_THROW(gen_gnp_graph(4, 1.5, 0), ParameterError);
}

TEST(GraphTest, GnpIsDeterministicPerSeed) {
  const Graph a = gen_gnp_graph(10, 0.4, 9);
  const Graph b = gen_gnp_graph(10, 0.4, 9);
  ASSERT_EQ(a.edge_count(), b.edge_count());
  for (std::size_t i = 0; i < a.edge_count(); ++i) {
    EXPECT_EQ(a.edges[i].u, b.edges[i].u);
    EXPECT_EQ(a.edges[i].v, b.edges[i].v);
  }
}

TEST(GraphTest, GnpMeanEdgeCount) {
  double total = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) total += gen_gnp_graph(16, 0.25, s).edge_count();
  EXPECT_NEAR(total / 1000.0, 30.0, 2.0);
}

TEST(MaxCutTest, SingleEdge) {
  const Graph g = make_graph(2, {{0, 1}});
  const MaxCutProblem mc = maxcut_qcqp(g);
  const Eigen::Vector2d y(1.0, -1.0);
  EXPECT_DOUBLE_EQ(y.dot(mc.original.objective * y) + mc.original.objective_offset, -1.0);
  double best = 0.0;
  for (int a : {-1, 1}) {
    for (int b : {-1, 1}) {
      const Eigen::Vector2d s(a, b);
      best = std::min(best, s.dot(mc.original.objective * s) + mc.original.objective_offset);
    }
  }
  EXPECT_DOUBLE_EQ(best, -1.0);
  EXPECT_EQ(brute_force_maxcut(g).value, 1.0);
}

TEST(MaxCutTest, ProblemShape) {
  const Graph g = cycle_graph(4);
  const MaxCutProblem mc = maxcut_qcqp(g, 0.01);
  EXPECT_EQ((g.adjacency().array() != 0.0).count(), 8);
  EXPECT_EQ(mc.original.constraints.size(), 4u);
  for (const auto& c : mc.original.constraints) {
    EXPECT_EQ(c.sense, Sense::equal);
    EXPECT_EQ(c.bound, 1.0);
  }
  EXPECT_EQ(mc.split.dimension, 8u);
  EXPECT_TRUE(mc.split.nonneg_domain);
  EXPECT_EQ(mc.canonical.inequality_count(), 8u);
  EXPECT_EQ(mc.canonical.equality_band, 0.01);
  EXPECT_EQ(mc.split_dimension, 4u);
  EXPECT_EQ(brute_force_maxcut(g).value, 4.0);
}

TEST(MaxCutTest, EmptyGraphHasZeroObjective) {
  const MaxCutProblem mc = maxcut_qcqp(make_graph(3, {}));
  EXPECT_TRUE(mc.original.objective.isZero());
  EXPECT_EQ(mc.original.objective_offset, 0.0);
}

// -1/2 (M - 1/2 s'As) = -cut for every sign vector.
TEST(MaxCutTest, ObjectiveIsNegativeCut) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = gen_gnp_graph(8, 0.5, seed);
    const MaxCutProblem mc = maxcut_qcqp(g);
    for (unsigned mask = 0; mask < 256; ++mask) {
      std::vector<int> s(8);
      Eigen::VectorXd v(8);
      for (int j = 0; j < 8; ++j) v(j) = s[j] = (mask >> j) & 1 ? -1 : 1;
      EXPECT_DOUBLE_EQ(v.dot(mc.original.objective * v) + mc.original.objective_offset,
                       -cut_value(g, s));
    }
  }
}

TEST(MaxCutTest, DecodeCut) {
  const Graph edge = make_graph(2, {{0, 1}});
  const std::vector<double> split{1.0, 0.0, 0.0, 1.0};  // y1 - y2 = (1, -1)
  EXPECT_EQ(decode_cut(edge, split, 2).value, 1.0);
  const Graph c4 = cycle_graph(4);
  EXPECT_EQ(decode_cut(c4, std::vector<double>{1, 1, 1, 1}).value, 0.0);
  const Cut alt = decode_cut(c4, std::vector<double>{0.9, -1.1, 1.0, -0.7});
  EXPECT_EQ(alt.value, 4.0);
  EXPECT_EQ(alt.signs, (std::vector<int>{1, -1, 1, -1}));
  // Ties go to +1.
  EXPECT_EQ(decode_cut(edge, std::vector<double>{1e-12, -1.0}).signs[0], 1);
  EXPECT_THROW(decode_cut(edge, std::vector<double>{1.0}), DimensionError);
}

TEST(BruteForceTest, KnownOptima) {
  EXPECT_EQ(brute_force_maxcut(complete_graph(4)).value, 4.0);
  EXPECT_EQ(brute_force_maxcut(complete_graph(5)).value, 6.0);
  EXPECT_EQ(brute_force_maxcut(cycle_graph(5)).value, 4.0);
  const Cut c = brute_force_maxcut(cycle_graph(6));
  EXPECT_EQ(c.value, 6.0);
  EXPECT_EQ(cut_value(cycle_graph(6), c.signs), 6.0);
  EXPECT_THROW(brute_force_maxcut(make_graph(kMaxBruteForceVertices + 1, {})),
               ParameterError);
}

TEST(OpfTest, TwoNodeAdmittance) {
  OpfInstance inst;
  inst.graph = make_graph(2, {{0, 1}});
  inst.node_admittance = {{0.2, 0.1}, {0.4, 0.0}};
  inst.edge_admittance = {{0.5, 0.3}};
  inst.load = {{0.1, 0.2}, {0.3, 0.4}};
  const Eigen::MatrixXcd y = admittance_matrix(inst);
  const Complex y1(0.2, 0.1), y2(0.4, 0.0), y12(0.5, 0.3);
  EXPECT_EQ(y(0, 0), y1 + y12);
  EXPECT_EQ(y(1, 1), y2 + y12);
  EXPECT_EQ(y(0, 1), -y12);
  EXPECT_EQ(y(1, 0), -y12);
}

TEST(OpfTest, LaplacianRowSums) {
  OpfInstance inst = gen_opf(5, 4);
  for (auto& y : inst.node_admittance) y = 0.0;
  const Eigen::MatrixXcd y = admittance_matrix(inst);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_LT(std::abs(y.row(i).sum()), 1e-14);
}

TEST(OpfTest, GeneratedInstanceProperties) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const OpfInstance inst = gen_opf(4, seed);
    EXPECT_GE(inst.graph.edge_count(), 3u);
    // Connected: union-find over the edges.
    std::vector<std::size_t> parent{0, 1, 2, 3};
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    for (const auto& e : inst.graph.edges) parent[find(e.u)] = find(e.v);
    for (std::size_t v = 1; v < 4; ++v) EXPECT_EQ(find(v), find(0));
    for (const auto& s : inst.load) {
      EXPECT_GE(s.real(), 0.0);
      EXPECT_LE(s.real(), 1.0);
      EXPECT_GE(s.imag(), 0.0);
      EXPECT_LE(s.imag(), 1.0);
    }
    const Eigen::MatrixXcd y = admittance_matrix(inst);
    EXPECT_TRUE(y.isApprox(y.transpose()));
    const ComplexQcqp p = opf_qcqp(inst);
    EXPECT_NO_THROW(validate(p));
    EXPECT_EQ(p.constraints.size(), 12u);
    EXPECT_EQ(canonicalize(p).inequality_count(), 24u);
    for (const auto& c : p.constraints) {
      EXPECT_TRUE(c.matrix.isApprox(c.matrix.adjoint()));
    }
  }
  EXPECT_THROW(gen_opf(1, 0), ParameterError);
}

TEST(OpfTest, OriginIsFeasibleWithLoadObjective) {
  const OpfInstance inst = gen_opf(3, 2);
  const ComplexQcqp p = opf_qcqp(inst);
  const ComplexCanonical c = canonicalize(p);
  EXPECT_LE(max_violation(c, Eigen::VectorXcd(Eigen::VectorXcd::Zero(3))), 0.0);
  double sum = 0.0;
  for (const auto& s : inst.load) sum += s.real();
  EXPECT_DOUBLE_EQ(p.objective_offset, sum);
}

TEST(OpfTest, RealModeHasRealAdmittances) {
  const OpfInstance inst = gen_opf(3, 1, AdmittanceMode::real);
  for (const auto& y : inst.node_admittance) EXPECT_EQ(y.imag(), 0.0);
  for (const auto& y : inst.edge_admittance) EXPECT_EQ(y.imag(), 0.0);
  EXPECT_EQ(admittance_mode_from_string("real"), AdmittanceMode::real);
  EXPECT_THROW(admittance_mode_from_string("dc"), ParameterError);
}

TEST(OpfTest, NodeMatrixIsSymmetricPart) {
  Eigen::Matrix3d part;
  part << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  const Eigen::MatrixXd m = node_matrix(part, 1);
  Eigen::Matrix3d raw = Eigen::Matrix3d::Zero();
  raw.col(1) = part.row(1).transpose();
  EXPECT_TRUE(m.isApprox(0.5 * (raw + raw.transpose())));
}

}  // namespace
}  // namespace vqcqp
