#pragma once

// Generalized Laplacians of weighted simplicial complexes.
//
// Each maximal simplex with n+1 >= 3 vertices is replaced by a star: one
// barycenter joined to every vertex, the spoke weight being the mean Gromov
// product at that vertex. The simplex operator is T' L_star T where T keeps
// the original coordinates and sends the barycenter the vertex average.
// Maximal edges keep their ordinary weighted-edge Laplacian, and the complex
// operator is the sum of all maximal-simplex blocks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "simplexsp/complex.hpp"
#include "simplexsp/error.hpp"

namespace simplexsp {

struct GeneralizedLaplacian {
  Eigen::MatrixXd matrix;
  /// Maximal simplices that contributed a block, in summation order.
  std::vector<Simplex> provenance;
  /// Some star weight was negative (edge weights broke the triangle inequality).
  bool negative_star_weights = false;

  Eigen::Index size() const { return matrix.rows(); }
};

/// Gromov product at v_i of the pair (v_j, v_k), from the three side lengths.
inline double gromov_product(double w_ij, double w_ik, double w_jk) {
  if (!(w_ij > 0.0) || !(w_ik > 0.0) || !(w_jk > 0.0))
    throw ValidationError("gromov_product: weights must be positive");
  return (w_ij + w_ik - w_jk) / 2.0;
}

/// Star expansion of one simplex.
struct StarExpansion {
  Simplex vertices;                 // the simplex, sorted
  std::vector<double> star_weights; // w(v_i, u), one per vertex
  /// Graph node of each simplex vertex; the barycenter is node vertices.size().
  std::vector<Index> embedding;
  Eigen::MatrixXd averaging;        // T, (n+2) x (n+1)
  bool negative_weights = false;

  Index barycenter() const { return vertices.size(); }

  /// Laplacian of the star graph on n+2 nodes.
  Eigen::MatrixXd star_laplacian() const {
    const Eigen::Index m = static_cast<Eigen::Index>(vertices.size());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double w = star_weights[static_cast<std::size_t>(i)];
      l(i, i) += w;
      l(m, m) += w;
      l(i, m) -= w;
      l(m, i) -= w;
    }
    return l;
  }
};

namespace detail {

inline double lookup_weight(const EdgeWeights& w, Index a, Index b) {
  auto it = w.find(edge_key(a, b));
  if (it == w.end())
    throw ValidationError("missing weight for simplex edge (" + std::to_string(a) + ", " +
                          std::to_string(b) + ")");
  return it->second;
}

}  // namespace detail

/// Builds the star expansion of simplex_vertices using the simplex's own edge
/// weights as distances.
inline StarExpansion star_expansion(Simplex simplex_vertices, const EdgeWeights& edge_weights) {
  std::sort(simplex_vertices.begin(), simplex_vertices.end());
  const std::size_t m = simplex_vertices.size();
  if (m < 3) throw ValidationError("star_expansion: simplex must have at least 3 vertices");

  StarExpansion se;
  se.vertices = simplex_vertices;
  se.star_weights.assign(m, 0.0);
  const double pairs = static_cast<double>((m - 1) * (m - 2) / 2);  // C(n, 2), n = m - 1
  auto d = [&](std::size_t a, std::size_t b) {
    return detail::lookup_weight(edge_weights, simplex_vertices[a], simplex_vertices[b]);
  };
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      for (std::size_t k = j + 1; k < m; ++k) {
        if (k == i) continue;
        sum += gromov_product(d(i, j), d(i, k), d(j, k));
      }
    }
    se.star_weights[i] = sum / pairs;
    if (se.star_weights[i] < 0.0) se.negative_weights = true;
  }

  se.embedding.resize(m);
  const auto rows = static_cast<Eigen::Index>(m + 1);
  const auto cols = static_cast<Eigen::Index>(m);
  se.averaging = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index i = 0; i < cols; ++i) {
    se.embedding[static_cast<std::size_t>(i)] = static_cast<Index>(i);
    se.averaging(i, i) = 1.0;
    se.averaging(cols, i) = 1.0 / static_cast<double>(m);
  }
  return se;
}

/// Dense T' L_star T on the simplex's own vertices.
inline GeneralizedLaplacian simplex_laplacian(const StarExpansion& se) {
  GeneralizedLaplacian out;
  const Eigen::MatrixXd& t = se.averaging;
  out.matrix = t.transpose() * se.star_laplacian() * t;
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  out.provenance = {se.vertices};
  out.negative_star_weights = se.negative_weights;
  return out;
}

/// Closed form of the 2-simplex operator with Gromov products a, b, c at
/// v1, v2, v3.
inline Eigen::Matrix3d two_simplex_closed_form(double w12, double w13, double w23) {
  const double a = gromov_product(w12, w13, w23);
  const double b = gromov_product(w12, w23, w13);
  const double c = gromov_product(w13, w23, w12);
  Eigen::Matrix3d l;
  l << b + c + 4 * a, c - 2 * a - 2 * b, b - 2 * a - 2 * c,
       c - 2 * a - 2 * b, a + c + 4 * b, a - 2 * b - 2 * c,
       b - 2 * a - 2 * c, a - 2 * b - 2 * c, a + b + 4 * c;
  return l / 9.0;
}

/// Minimum over the three edges of (5 w_ij - w_ik - w_jk) / 2.
inline double shape_constant(double w12, double w13, double w23) {
  return std::min({(5 * w12 - w13 - w23) / 2, (5 * w13 - w12 - w23) / 2, (5 * w23 - w12 - w13) / 2});
}

/// Non-negative diagonal and non-positive off-diagonal, up to tol.
inline bool is_graph_type(const Eigen::MatrixXd& l, double tol = 0.0) {
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    for (Eigen::Index j = 0; j < l.cols(); ++j) {
      if (i == j && l(i, j) < -tol) return false;
      if (i != j && l(i, j) > tol) return false;
    }
  return true;
}

inline bool is_graph_type(const GeneralizedLaplacian& l, double tol = 0.0) {
  return is_graph_type(l.matrix, tol);
}

/// Adds the weighted-edge block [[w, -w], [-w, w]] at (a, b).
inline void add_edge_block(Eigen::MatrixXd& l, Index a, Index b, double w) {
  const auto i = static_cast<Eigen::Index>(a);
  const auto j = static_cast<Eigen::Index>(b);
  l(i, i) += w;
  l(j, j) += w;
  l(i, j) -= w;
  l(j, i) -= w;
}

/// Adds the closed-form 2-simplex block for triangle (a, b, c) with a < b < c.
inline void add_triangle_block(Eigen::MatrixXd& l, const Triangle& t, const EdgeWeights& w) {
  const Eigen::Matrix3d block = two_simplex_closed_form(detail::lookup_weight(w, t[0], t[1]),
                                                        detail::lookup_weight(w, t[0], t[2]),
                                                        detail::lookup_weight(w, t[1], t[2]));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      l(static_cast<Eigen::Index>(t[static_cast<std::size_t>(r)]),
        static_cast<Eigen::Index>(t[static_cast<std::size_t>(c)])) += block(r, c);
}

/// Standard weighted graph Laplacian D - W.
inline Eigen::MatrixXd graph_laplacian(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [key, w] : g.edges()) add_edge_block(l, key.first, key.second, w);
  return l;
}

/// Generalized Laplacian of the whole complex: sum over maximal simplices in
/// lexicographic order, then symmetrized.
inline GeneralizedLaplacian complex_laplacian(const SimplicialComplex& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  GeneralizedLaplacian out;
  out.matrix = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : maximal_simplices(x)) {
    if (s.size() < 2) continue;
    out.provenance.push_back(s);
    if (s.size() == 2) {
      add_edge_block(out.matrix, s[0], s[1], detail::lookup_weight(x.edges(), s[0], s[1]));
    } else if (s.size() == 3) {
      const Triangle t{s[0], s[1], s[2]};
      add_triangle_block(out.matrix, t, x.edges());
      const double a = detail::lookup_weight(x.edges(), s[0], s[1]);
      const double b = detail::lookup_weight(x.edges(), s[0], s[2]);
      const double c = detail::lookup_weight(x.edges(), s[1], s[2]);
      if (a + b < c || a + c < b || b + c < a) out.negative_star_weights = true;
    } else {
      const StarExpansion se = star_expansion(s, x.edges());
      const GeneralizedLaplacian block = simplex_laplacian(se);
      out.negative_star_weights = out.negative_star_weights || se.negative_weights;
      for (std::size_t r = 0; r < s.size(); ++r)
        for (std::size_t c = 0; c < s.size(); ++c)
          out.matrix(static_cast<Eigen::Index>(s[r]), static_cast<Eigen::Index>(s[c])) +=
              block.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  return out;
}

}  // namespace simplexsp
