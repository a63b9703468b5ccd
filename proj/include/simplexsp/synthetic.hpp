#pragma once

// Desk-scale stand-ins for the datasets the experiments were designed around:
// random point clouds and their kNN graphs, two-cluster label graphs, and
// complexes planted on a graph by sampling its closed triangles.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "simplexsp/complex.hpp"
#include "simplexsp/error.hpp"
#include "simplexsp/rng.hpp"
#include "simplexsp/spectral.hpp"
#include "simplexsp/structure_learning.hpp"

namespace simplexsp::synthetic {

/// n points uniform in the unit cube of the given dimension.
inline std::vector<std::vector<double>> random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts)
    for (auto& c : p) c = uniform01(rng);
  return pts;
}

/// Unit-weight kNN graph of n random planar points.
inline WeightedGraph random_knn_graph(std::size_t n, std::size_t k, std::uint64_t seed) {
  return knn_graph(random_points(n, 2, seed), k, KnnWeight::unit);
}

/// Each closed triangle of g kept independently with probability `fraction`.
inline SimplicialComplex plant_complex(const WeightedGraph& g, double fraction, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Simplex> kept;
  for (const auto& t : enumerate_candidate_triangles(g, CandidateMode::closed))
    if (uniform01(rng) < fraction) kept.push_back({t[0], t[1], t[2]});
  return SimplicialComplex(g, std::move(kept));
}

/// Unit-weight graph grown from random triples. A triple is accepted when at
/// most one of its edges is already present and closing it creates no other
/// 3-clique, so the result has exactly `triangles` closed triples (unless
/// the attempt budget runs out) and they share few edges.
inline WeightedGraph sparse_triangle_graph(std::size_t n, std::size_t triangles, std::uint64_t seed,
                                           std::size_t max_attempts = 2000000) {
  if (n < 3) throw ValidationError("sparse_triangle_graph: need at least 3 vertices");
  Rng rng(seed);
  std::vector<std::set<Index>> adj(n);
  auto has = [&](Index a, Index b) { return adj[a].count(b) > 0; };
  std::size_t made = 0;
  for (std::size_t attempt = 0; made < triangles && attempt < max_attempts; ++attempt) {
    const Index a = uniform_below(rng, n), b = uniform_below(rng, n), c = uniform_below(rng, n);
    if (a == b || b == c || a == c) continue;
    if (has(a, b) + has(a, c) + has(b, c) > 1) continue;
    const std::array<std::array<Index, 3>, 3> sides{{{a, b, c}, {a, c, b}, {b, c, a}}};
    bool extra = false;
    for (const auto& [u, v, o] : sides) {
      if (has(u, v)) continue;
      for (Index w : adj[u])
        if (w != o && adj[v].count(w)) extra = true;
    }
    if (extra) continue;
    for (const auto& [u, v, o] : sides) {
      adj[u].insert(v);
      adj[v].insert(u);
    }
    ++made;
  }
  EdgeWeights edges;
  for (Index u = 0; u < n; ++u)
    for (Index v : adj[u])
      if (u < v) edges.emplace(EdgeKey{u, v}, 1.0);
  return WeightedGraph::with_indices(n, std::move(edges));
}

/// Fills every closed triple of g whose longest side is at most the
/// q-quantile of all closed-triple sizes (a Rips-style complex at a hidden
/// scale).
inline SimplicialComplex threshold_complex(const WeightedGraph& g, double quantile) {
  if (!(quantile >= 0 && quantile <= 1)) throw ValidationError("threshold_complex: quantile must lie in [0, 1]");
  const auto tris = enumerate_candidate_triangles(g, CandidateMode::closed);
  if (tris.empty()) return SimplicialComplex(g);
  std::vector<double> size(tris.size());
  for (std::size_t i = 0; i < tris.size(); ++i) size[i] = triangle_size(tris[i], g.edges());
  std::vector<double> sorted = size;
  std::sort(sorted.begin(), sorted.end());
  const double cut = sorted[static_cast<std::size_t>(quantile * static_cast<double>(sorted.size() - 1))];
  std::vector<Simplex> kept;
  for (std::size_t i = 0; i < tris.size(); ++i)
    if (size[i] <= cut) kept.push_back({tris[i][0], tris[i][1], tris[i][2]});
  return SimplicialComplex(g, std::move(kept));
}

/// Temperature-like fields: mean + amplitude * (low-band signal with unit
/// RMS) + white noise of the given standard deviation. One column per field.
inline Eigen::MatrixXd smooth_fields(const Spectrum& s, double band, std::size_t count, double mean,
                                     double amplitude, double noise, std::uint64_t seed) {
  const Eigen::Index n = s.size();
  const Eigen::Index k = band_count(band, n);
  Rng rng(seed);
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(count));
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    Eigen::VectorXd coeff(k);
    for (Eigen::Index i = 0; i < k; ++i) coeff(i) = standard_normal(rng);
    Eigen::VectorXd field = s.eigenvectors.leftCols(k) * coeff;
    const double rms = field.norm() / std::sqrt(static_cast<double>(n));
    if (rms > 0) field *= amplitude / rms;
    for (Eigen::Index i = 0; i < n; ++i) out(i, c) = mean + field(i) + noise * standard_normal(rng);
  }
  return out;
}

struct LabelledGraph {
  WeightedGraph graph;
  Eigen::VectorXd labels;  // class ids 1..k
};

/// Two clusters of n/2 vertices, each a unit-weight kNN graph of its own
/// random points, joined by `bridges` random cross edges. Labels are the
/// cluster ids 1 and 2.
inline LabelledGraph two_cluster_graph(std::size_t n, std::size_t k, std::size_t bridges, std::uint64_t seed) {
  const std::size_t half = n / 2;
  const WeightedGraph a = random_knn_graph(half, k, derive_seed(seed, "cluster", 0));
  const WeightedGraph b = random_knn_graph(n - half, k, derive_seed(seed, "cluster", 1));
  EdgeWeights edges = a.edges();
  for (const auto& [key, w] : b.edges()) edges.emplace(EdgeKey{key.first + half, key.second + half}, w);
  Rng rng(derive_seed(seed, "bridges"));
  for (std::size_t i = 0; i < bridges; ++i) {
    const Index u = uniform_below(rng, half);
    const Index v = half + uniform_below(rng, n - half);
    edges.emplace(EdgeKey{u, v}, 1.0);
  }
  LabelledGraph out{WeightedGraph::with_indices(n, std::move(edges)), Eigen::VectorXd(static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < n; ++i) out.labels(static_cast<Eigen::Index>(i)) = i < half ? 1.0 : 2.0;
  return out;
}

}  // namespace simplexsp::synthetic
