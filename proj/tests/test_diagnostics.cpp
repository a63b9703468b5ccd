#include <gtest/gtest.h>

#include "random_complex.hpp"
#include "simplexsp/diagnostics.hpp"

using namespace simplexsp;

namespace {

SimplicialComplex unit_complex(std::size_t n, const std::vector<std::pair<Index, Index>>& edges,
                               const std::vector<Simplex>& triangles) {
  EdgeWeights e;
  for (auto [a, b] : edges) e[edge_key(a, b)] = 1.0;
  for (const auto& t : triangles) {
    e[edge_key(t[0], t[1])] = 1.0;
    e[edge_key(t[0], t[2])] = 1.0;
    e[edge_key(t[1], t[2])] = 1.0;
  }
  return SimplicialComplex(WeightedGraph::with_indices(n, e), triangles);
}

// Two triangles sharing an edge, with two pendant paths that meet.
SimplicialComplex seven_vertex_fixture() {
  return unit_complex(7, {{1, 4}, {3, 5}, {4, 6}, {5, 6}}, {{0, 1, 2}, {0, 2, 3}});
}

// Triangle attached to a 4-cycle through one vertex.
SimplicialComplex triangle_with_cycle() {
  return unit_complex(7, {{0, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 3}}, {{0, 1, 2}});
}

}  // namespace

TEST(InteriorCounts, SevenVertexFixture) {
  EXPECT_EQ(interior_counts(seven_vertex_fixture()), (InteriorCounts{3, 1, 1, 2}));
}

TEST(InteriorCounts, Invariants) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto x = testgen::connected_complex(rng, 4 + rng() % 12);
    const auto c = interior_counts(x);
    EXPECT_LE(c.m3, c.m2);
    EXPECT_LE(c.m1, x.size());
    if (prop1_conditions(x).all()) {
      EXPECT_LE(c.m2, c.m4);
    }
  }
}

TEST(Attachment, Conditions) {
  const auto joined = unit_complex(6, {{2, 3}}, {{0, 1, 2}, {3, 4, 5}});
  EXPECT_FALSE(prop1_conditions(joined).no_direct_edge);
  EXPECT_FALSE(prop1_conditions(joined).single_attachment);  // no 1-interior vertex

  const auto fan = unit_complex(5, {{2, 3}, {2, 4}, {3, 4}}, {{0, 1, 2}, {0, 1, 3}});
  EXPECT_FALSE(prop1_conditions(fan).edge_in_one_triangle);

  const auto p = prop1_conditions(triangle_with_cycle());
  EXPECT_TRUE(p.all());
  EXPECT_TRUE(prop1_conditions(unit_complex(5, {{2, 3}, {3, 4}, {4, 0}}, {{0, 1, 2}})).single_attachment);
  EXPECT_FALSE(prop1_conditions(unit_complex(4, {{2, 3}, {3, 0}}, {{0, 1, 2}})).single_attachment);
}

TEST(Distinctive, SingleTriangleEdges) {
  const auto d = distinctive_check(unit_complex(4, {{2, 3}}, {{0, 1, 2}}));
  EXPECT_EQ(d.direction, Distinctive::X1_minus_X);
  EXPECT_NEAR(d.witness_value, -15.0 / 18, 1e-12);
  EXPECT_TRUE(distinctive_check(unit_complex(3, {{0, 1}, {1, 2}}, {})).trivially_distinctive);
}

TEST(Certificate, FiresOnTriangleWithCycle) {
  const auto c = shift_invariance_certificate(triangle_with_cycle());
  EXPECT_TRUE(c.theorem);
  EXPECT_TRUE(c.connected);
  EXPECT_GT(c.commutator, 1e-8);
}

TEST(Certificate, EquilateralTriangleCommutes) {
  const auto c = shift_invariance_certificate(unit_complex(3, {}, {{0, 1, 2}}));
  EXPECT_LT(c.commutator, 1e-12);
  EXPECT_FALSE(c.theorem);
  // The uncorrected condition holds here although the operators commute.
  EXPECT_TRUE(c.literal_condition);
}

TEST(Certificate, NeverFiresOnCommutingPairs) {
  std::mt19937_64 rng(8);
  int fired = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = testgen::connected_complex(rng, 4 + rng() % 12, 0.1, 0.6);
    const auto c = shift_invariance_certificate(x);
    if (c.theorem) {
      ++fired;
      EXPECT_GT(c.commutator, 1e-8);
    }
  }
  EXPECT_GT(fired, 20);
}

TEST(Audit, PassesOnLaplaciansFailsOnCorruption) {
  std::mt19937_64 rng(2);
  const auto x = testgen::connected_complex(rng, 12);
  const Eigen::MatrixXd l = complex_laplacian(x).matrix;
  EXPECT_TRUE(lemma2_audit(l, 1).all());
  EXPECT_FALSE(lemma2_audit(l, 2).kernel_dimension.pass);

  Eigen::MatrixXd bad = l;
  bad(0, 1) += 1e-3;
  EXPECT_FALSE(lemma2_audit(bad, 1).symmetric.pass);
  bad = l;
  bad(0, 0) -= 100.0;
  const auto audit = lemma2_audit(bad, 1);
  EXPECT_FALSE(audit.positive_semidefinite.pass);
  EXPECT_FALSE(audit.zero_row_sums.pass);

  const auto two = unit_complex(6, {}, {{0, 1, 2}, {3, 4, 5}});
  EXPECT_TRUE(lemma2_audit(complex_laplacian(two).matrix, 2).all());
}

TEST(Sandwich, ExtremeCases) {
  const auto tri = sandwich_bounds(unit_complex(3, {}, {{0, 1, 2}}));
  EXPECT_NEAR(tri.alpha, 1.0 / 6, 1e-12);
  EXPECT_NEAR(tri.beta, 1.0 / 6, 1e-12);
  EXPECT_EQ(tri.k_min, 1u);
  EXPECT_EQ(tri.k_max, 1u);

  const auto path = sandwich_bounds(unit_complex(4, {{0, 1}, {1, 2}, {2, 3}}, {}));
  EXPECT_NEAR(path.alpha, 1.0, 1e-12);
  EXPECT_NEAR(path.beta, 1.0, 1e-12);

  const auto tail = sandwich_bounds(unit_complex(4, {{2, 3}}, {{0, 1, 2}}));
  EXPECT_LE(tail.alpha, 1.0 / 6 + 1e-12);
  EXPECT_GE(tail.beta, 1.0 - 1e-12);

  EXPECT_THROW(sandwich_bounds(unit_complex(4, {{0, 1}}, {})), ValidationError);
}

TEST(Diagnose, ReportOnFixture) {
  const auto r = diagnose(seven_vertex_fixture());
  EXPECT_EQ(r.n, 7u);
  ASSERT_TRUE(r.gamma_min.has_value());
  EXPECT_DOUBLE_EQ(*r.gamma_min, 1.5);
  EXPECT_TRUE(r.graph_type);
  EXPECT_EQ(r.k_min, 0u);
  EXPECT_EQ(r.k_max, 2u);
  EXPECT_TRUE(r.lemma2.all());
  EXPECT_TRUE(r.sandwich.has_value());
  EXPECT_EQ(r.difference_ratio_samples.size(), 8u);
  for (double v : r.difference_ratio_samples) EXPECT_GT(v, 0.0);
  EXPECT_EQ(diagnose(seven_vertex_fixture()).difference_ratio_samples, r.difference_ratio_samples);

  const auto tetra = from_hypergraph({{0, 1, 2, 3}, {{0, 1, 2, 3}}});
  EXPECT_THROW(diagnose(tetra), ValidationError);
}
