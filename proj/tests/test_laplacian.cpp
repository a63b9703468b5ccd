#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "simplexsp/complex.hpp"
#include "simplexsp/laplacian.hpp"

using namespace simplexsp;

namespace {

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

SimplicialComplex triangle(double w12, double w13, double w23) {
  return SimplicialComplex({0, 1, 2}, {{{0, 1}, w12}, {{0, 2}, w13}, {{1, 2}, w23}}, {{0, 1, 2}});
}

}  // namespace

TEST(Gromov, StarWeightsFor345) {
  EXPECT_EQ(gromov_product(3, 4, 5), 1.0);
  EXPECT_EQ(gromov_product(3, 5, 4), 2.0);
  EXPECT_EQ(gromov_product(4, 5, 3), 3.0);
  const auto se = star_expansion({0, 1, 2}, {{{0, 1}, 3.0}, {{0, 2}, 4.0}, {{1, 2}, 5.0}});
  EXPECT_EQ(se.star_weights, (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_FALSE(se.negative_weights);
  EXPECT_THROW(gromov_product(0, 1, 1), ValidationError);
}

TEST(ClosedForm, Fixture345) {
  Eigen::Matrix3d want;
  want << 1, -1.0 / 3, -2.0 / 3, -1.0 / 3, 4.0 / 3, -1, -2.0 / 3, -1, 5.0 / 3;
  const Eigen::Matrix3d got = two_simplex_closed_form(3, 4, 5);
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((got - oracle::triangle_operator(3, 4, 5)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ClosedForm, MatchesOracleOnRandomWeights) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b, c] = oracle::log_uniform_triple(rng, 0.1, 10);
    const Eigen::MatrixXd want = oracle::triangle_operator(a, b, c);
    EXPECT_LT(rel_diff(two_simplex_closed_form(a, b, c), want), 1e-12);
    const auto se = star_expansion({0, 1, 2}, {{{0, 1}, a}, {{0, 2}, b}, {{1, 2}, c}});
    EXPECT_LT(rel_diff(simplex_laplacian(se).matrix, want), 1e-12);
  }
}

TEST(ClosedForm, UnitTriangleIsSixthOfGraphLaplacian) {
  const Eigen::Matrix3d l = two_simplex_closed_form(1, 1, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(l(i, j), i == j ? 1.0 / 3 : -1.0 / 6, 1e-15);
}

TEST(StarExpansion, UnitTetrahedron) {
  EdgeWeights e;
  for (Index a = 0; a < 4; ++a)
    for (Index b = a + 1; b < 4; ++b) e[{a, b}] = 1.0;
  const auto se = star_expansion({0, 1, 2, 3}, e);
  for (double w : se.star_weights) EXPECT_EQ(w, 0.5);
  EXPECT_EQ(se.averaging.rows(), 5);
  EXPECT_EQ(se.averaging.cols(), 4);
  EXPECT_THROW(star_expansion({0, 1}, e), ValidationError);
}

TEST(StarExpansion, TetrahedronMatchesOracle) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(1.0, 2.0);  // any such weights satisfy the triangle inequality
  EdgeWeights e;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 4);
  for (Index a = 0; a < 4; ++a)
    for (Index b = a + 1; b < 4; ++b) {
      const double w = u(rng);
      e[{a, b}] = w;
      d(static_cast<int>(a), static_cast<int>(b)) = d(static_cast<int>(b), static_cast<int>(a)) = w;
    }
  const SimplicialComplex x({0, 1, 2, 3}, e, {{0, 1, 2, 3}});
  EXPECT_LT(rel_diff(complex_laplacian(x).matrix, oracle::star_operator(d)), 1e-12);
}

TEST(ShapeConstant, GraphTypeEquivalence) {
  std::mt19937_64 rng(3);
  int disagreements = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b, c] = oracle::log_uniform_triple(rng, 0.1, 10);
    const bool graph_type = is_graph_type(Eigen::MatrixXd(two_simplex_closed_form(a, b, c)), 1e-12);
    disagreements += graph_type != (shape_constant(a, b, c) >= 0);
  }
  EXPECT_EQ(disagreements, 0);
  EXPECT_TRUE(is_graph_type(Eigen::MatrixXd(two_simplex_closed_form(1, 1, 1))));
  EXPECT_LT(shape_constant(1, 3, 3), 0.0);
  EXPECT_FALSE(is_graph_type(Eigen::MatrixXd(two_simplex_closed_form(1, 3, 3))));
}

TEST(ComplexLaplacian, TriangleWithTail) {
  EdgeWeights e{{{0, 1}, 1.0}, {{0, 2}, 1.0}, {{1, 2}, 1.0}, {{2, 3}, 1.0}};
  const SimplicialComplex x({1, 2, 3, 4}, e, {{0, 1, 2}});
  const Eigen::MatrixXd l = complex_laplacian(x).matrix;
  EXPECT_NEAR(l(2, 2), 1.0 / 3 + 1.0, 1e-15);
  EXPECT_NEAR(l(2, 3), -1.0, 1e-15);
  EXPECT_NEAR(l(0, 1), -1.0 / 6, 1e-15);
}

TEST(ComplexLaplacian, RecoversGraphLaplacianExactly) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> w(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 20);
    EdgeWeights e;
    std::vector<oracle::Edge> oe;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng() % 3 == 0) {
          const double x = w(rng);
          e[{static_cast<Index>(a), static_cast<Index>(b)}] = x;
          oe.push_back({a, b, x});
        }
    const auto g = WeightedGraph::with_indices(static_cast<std::size_t>(n), e);
    const Eigen::MatrixXd l = complex_laplacian(SimplicialComplex(g)).matrix;
    EXPECT_TRUE(l == oracle::graph_laplacian(n, oe)) << "trial " << trial;
  }
}

TEST(ComplexLaplacian, SymmetricWithZeroRowSums) {
  EdgeWeights e{{{0, 1}, 3.0}, {{0, 2}, 4.0}, {{1, 2}, 5.0}, {{1, 3}, 4.5}, {{2, 3}, 2.0}, {{3, 4}, 1.0}};
  const SimplicialComplex x({0, 1, 2, 3, 4}, e, {{0, 1, 2}, {1, 2, 3}});
  const auto l = complex_laplacian(x);
  EXPECT_TRUE(l.matrix == l.matrix.transpose());
  EXPECT_LT(l.matrix.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(l.provenance.size(), 3u);
}

TEST(ComplexLaplacian, NonMetricWeightsAreFlagged) {
  const auto l = complex_laplacian(triangle(1, 1, 3));
  EXPECT_TRUE(l.negative_star_weights);
  EXPECT_FALSE(complex_laplacian(triangle(3, 4, 5)).negative_star_weights);
}

TEST(ComplexLaplacian, DifferenceOnSingleTriangleEdge) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    EdgeWeights e{{{0, 1}, a}, {{0, 2}, b}, {{1, 2}, c}, {{2, 3}, u(rng)}};
    const SimplicialComplex x({0, 1, 2, 3}, e, {{0, 1, 2}});
    const Eigen::MatrixXd diff = graph_laplacian(x.graph()) - complex_laplacian(x).matrix;
    EXPECT_NEAR(diff(0, 1), -(13 * a + b + c) / 18, 1e-12);
  }
}
