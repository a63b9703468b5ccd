#pragma once

// Combinatorial model of finite weighted simplicial complexes.
//
// Vertices carry external integer ids and are kept sorted, so the internal
// index order agrees with the id order. Edges (the 1-skeleton) carry positive
// weights read as lengths; simplices of dimension >= 2 are stored as sorted
// index tuples and carry no weight of their own.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "simplexsp/error.hpp"

namespace simplexsp {

using VertexId = std::int64_t;
using Index = std::size_t;
using Simplex = std::vector<Index>;
using Triangle = std::array<Index, 3>;
using EdgeKey = std::pair<Index, Index>;
using EdgeWeights = std::map<EdgeKey, double>;

inline EdgeKey edge_key(Index a, Index b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

namespace detail {

inline std::string id_pair(VertexId u, VertexId v) {
  std::ostringstream os;
  os << "(" << u << ", " << v << ")";
  return os.str();
}

inline void check_weight(double w, const std::string& where) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    std::ostringstream os;
    os << "edge " << where << ": weight must be positive and finite, got " << w;
    throw ValidationError(os.str());
  }
}

inline std::vector<VertexId> sorted_unique(std::vector<VertexId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace detail

/// Undirected graph with strictly positive edge weights and no self-loops.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(std::vector<VertexId> vertices, EdgeWeights edges)
      : vertices_(detail::sorted_unique(std::move(vertices))),
        edges_(std::move(edges)) {
    adjacency_.resize(vertices_.size());
    for (const auto& [key, w] : edges_) {
      const auto [a, b] = key;
      if (a >= b) throw ValidationError("edge keys must satisfy first < second (no self-loops)");
      if (b >= vertices_.size()) throw ValidationError("edge endpoint out of range");
      detail::check_weight(w, detail::id_pair(vertices_[a], vertices_[b]));
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
  }

  /// Graph on vertex ids 0..n-1.
  static WeightedGraph with_indices(std::size_t n, EdgeWeights edges) {
    std::vector<VertexId> ids(n);
    std::iota(ids.begin(), ids.end(), VertexId{0});
    return WeightedGraph(std::move(ids), std::move(edges));
  }

  std::size_t size() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  const EdgeWeights& edges() const { return edges_; }
  const std::vector<Index>& neighbors(Index v) const { return adjacency_.at(v); }

  bool has_edge(Index a, Index b) const {
    return a != b && edges_.count(edge_key(a, b)) > 0;
  }

  std::optional<double> weight(Index a, Index b) const {
    if (a == b) return std::nullopt;
    auto it = edges_.find(edge_key(a, b));
    if (it == edges_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<Index> index_of(VertexId id) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id);
    if (it == vertices_.end() || *it != id) return std::nullopt;
    return static_cast<Index>(it - vertices_.begin());
  }

  bool operator==(const WeightedGraph& o) const {
    return vertices_ == o.vertices_ && edges_ == o.edges_;
  }

 private:
  std::vector<VertexId> vertices_;
  EdgeWeights edges_;
  std::vector<std::vector<Index>> adjacency_;
};

/// Vertex set plus hyperedges (subsets of size >= 2).
struct Hypergraph {
  std::vector<VertexId> vertices;
  std::vector<std::vector<VertexId>> hyperedges;
};

/// Finite weighted simplicial complex. Higher simplices are closed under
/// taking faces of size >= 3 on construction; every pair inside a simplex
/// must already be a weighted edge.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  SimplicialComplex(std::vector<VertexId> vertices, EdgeWeights edges,
                    std::vector<Simplex> simplices = {})
      : graph_(std::move(vertices), std::move(edges)) {
    for (auto s : simplices) {
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw ValidationError("simplex contains a repeated vertex");
      if (s.size() < 3)
        throw ValidationError("stored simplices must have at least 3 vertices; edges live in the edge map");
      for (Index v : s)
        if (v >= graph_.size()) throw ValidationError("simplex vertex out of range");
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
          if (!graph_.has_edge(s[i], s[j]))
            throw ValidationError("face closure violated: simplex edge " +
                                  detail::id_pair(graph_.vertices()[s[i]], graph_.vertices()[s[j]]) +
                                  " is not an edge of the complex");
      add_with_faces(s);
    }
  }

  SimplicialComplex(const WeightedGraph& g, std::vector<Simplex> simplices = {})
      : SimplicialComplex(g.vertices(), g.edges(), std::move(simplices)) {}

  std::size_t size() const { return graph_.size(); }
  const std::vector<VertexId>& vertices() const { return graph_.vertices(); }
  const EdgeWeights& edges() const { return graph_.edges(); }
  const std::set<Simplex>& simplices() const { return simplices_; }
  /// The weighted 1-skeleton.
  const WeightedGraph& graph() const { return graph_; }

  int dimension() const {
    if (!simplices_.empty()) {
      std::size_t m = 0;
      for (const auto& s : simplices_) m = std::max(m, s.size());
      return static_cast<int>(m) - 1;
    }
    if (graph_.edge_count() > 0) return 1;
    return graph_.size() > 0 ? 0 : -1;
  }

  std::vector<Triangle> triangles() const {
    std::vector<Triangle> out;
    for (const auto& s : simplices_)
      if (s.size() == 3) out.push_back({s[0], s[1], s[2]});
    return out;
  }

  bool operator==(const SimplicialComplex& o) const {
    return graph_ == o.graph_ && simplices_ == o.simplices_;
  }

 private:
  void add_with_faces(const Simplex& s) {
    if (s.size() < 3 || simplices_.count(s)) return;
    simplices_.insert(s);
    if (s.size() == 3) return;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      Simplex face;
      face.reserve(s.size() - 1);
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i != drop) face.push_back(s[i]);
      add_with_faces(face);
    }
  }

  WeightedGraph graph_;
  std::set<Simplex> simplices_;
};

/// One row of an edge list; the weight defaults to 1.
struct EdgeSpec {
  VertexId u;
  VertexId v;
  std::optional<double> weight;
};

inline SimplicialComplex from_edge_list(const std::vector<EdgeSpec>& edges,
                                        std::vector<VertexId> extra_vertices = {}) {
  std::vector<VertexId> ids = std::move(extra_vertices);
  for (const auto& e : edges) {
    if (e.u == e.v) throw ValidationError("self-loop at vertex " + std::to_string(e.u));
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  ids = detail::sorted_unique(std::move(ids));
  auto index = [&](VertexId id) {
    return static_cast<Index>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  EdgeWeights weights;
  for (const auto& e : edges) {
    const double w = e.weight.value_or(1.0);
    detail::check_weight(w, detail::id_pair(e.u, e.v));
    const auto key = edge_key(index(e.u), index(e.v));
    auto [it, inserted] = weights.emplace(key, w);
    if (!inserted && it->second != w)
      throw ValidationError("duplicate edge " + detail::id_pair(e.u, e.v) + " with conflicting weights");
  }
  return SimplicialComplex(std::move(ids), std::move(weights));
}

/// Complex spanned by the hyperedges and all of their faces.
inline SimplicialComplex from_hypergraph(const Hypergraph& h, double default_weight = 1.0) {
  detail::check_weight(default_weight, "default");
  const auto ids = detail::sorted_unique(h.vertices);
  auto index = [&](VertexId id) {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id)
      throw ValidationError("hyperedge vertex " + std::to_string(id) + " is not in the vertex set");
    return static_cast<Index>(it - ids.begin());
  };
  EdgeWeights weights;
  std::vector<Simplex> simplices;
  for (const auto& he : h.hyperedges) {
    Simplex s;
    for (VertexId id : he) s.push_back(index(id));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.size() < 2) throw ValidationError("hyperedge must contain at least 2 distinct vertices");
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) weights.emplace(EdgeKey{s[i], s[j]}, default_weight);
    if (s.size() >= 3) simplices.push_back(std::move(s));
  }
  return SimplicialComplex(ids, std::move(weights), std::move(simplices));
}

enum class KnnWeight { unit, euclidean };

/// Symmetric k-nearest-neighbour graph (union rule). Vertex ids are the
/// point row indices; distance ties go to the smaller index.
inline WeightedGraph knn_graph(const std::vector<std::vector<double>>& points, std::size_t k,
                               KnnWeight mode = KnnWeight::unit) {
  const std::size_t n = points.size();
  if (n == 0) throw ValidationError("knn_graph: empty point set");
  if (k == 0 || k >= n) throw ValidationError("knn_graph: k must satisfy 0 < k < number of points");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw ValidationError("knn_graph: ragged coordinate vectors");

  auto dist = [&](Index a, Index b) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double t = points[a][d] - points[b][d];
      s += t * t;
    }
    return std::sqrt(s);
  };

  EdgeWeights edges;
  std::vector<std::pair<double, Index>> cand;
  for (Index u = 0; u < n; ++u) {
    cand.clear();
    for (Index v = 0; v < n; ++v)
      if (v != u) cand.emplace_back(dist(u, v), v);
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    for (std::size_t i = 0; i < k; ++i) {
      const auto [d, v] = cand[i];
      const double w = mode == KnnWeight::unit ? 1.0 : d;
      if (!(w > 0.0))
        throw ValidationError("knn_graph: duplicate points give a zero-length edge under euclidean weights");
      edges.emplace(edge_key(u, v), w);
    }
  }
  return WeightedGraph::with_indices(n, std::move(edges));
}

enum class CandidateMode { closed, all };

/// Candidate 2-simplices: the 3-cliques of g (closed) or every vertex triple
/// (all), sorted lexicographically.
inline std::vector<Triangle> enumerate_candidate_triangles(const WeightedGraph& g,
                                                           CandidateMode mode = CandidateMode::closed) {
  std::vector<Triangle> out;
  const std::size_t n = g.size();
  if (mode == CandidateMode::all) {
    for (Index a = 0; a < n; ++a)
      for (Index b = a + 1; b < n; ++b)
        for (Index c = b + 1; c < n; ++c) out.push_back({a, b, c});
    return out;
  }
  for (Index a = 0; a < n; ++a) {
    const auto& na = g.neighbors(a);
    for (Index b : na) {
      if (b <= a) continue;
      // Intersect the higher neighbours of a and b.
      const auto& nb = g.neighbors(b);
      auto ia = std::upper_bound(na.begin(), na.end(), b);
      auto ib = std::upper_bound(nb.begin(), nb.end(), b);
      while (ia != na.end() && ib != nb.end()) {
        if (*ia < *ib) {
          ++ia;
        } else if (*ib < *ia) {
          ++ib;
        } else {
          out.push_back({a, b, *ia});
          ++ia;
          ++ib;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Simplices that are not faces of any other simplex, including bare edges
/// and isolated vertices, in lexicographic order.
inline std::vector<Simplex> maximal_simplices(const SimplicialComplex& x) {
  std::vector<Simplex> out;
  std::set<EdgeKey> covered_edges;
  std::vector<bool> covered_vertex(x.size(), false);
  const auto& all = x.simplices();
  for (const auto& s : all) {
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) covered_edges.insert({s[i], s[j]});
    bool maximal = true;
    for (const auto& t : all) {
      if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(s);
  }
  for (const auto& [key, w] : x.edges()) {
    covered_vertex[key.first] = covered_vertex[key.second] = true;
    if (!covered_edges.count(key)) out.push_back({key.first, key.second});
  }
  for (Index v = 0; v < x.size(); ++v)
    if (!covered_vertex[v]) out.push_back({v});
  std::sort(out.begin(), out.end());
  return out;
}

/// Subcomplex of all simplices of dimension <= m, weights preserved.
inline SimplicialComplex skeleton(const SimplicialComplex& x, std::size_t m) {
  if (m == 0) return SimplicialComplex(x.vertices(), {});
  std::vector<Simplex> kept;
  for (const auto& s : x.simplices())
    if (s.size() <= m + 1) kept.push_back(s);
  return SimplicialComplex(x.vertices(), x.edges(), std::move(kept));
}

/// Connected components, each sorted, ordered by smallest member.
inline std::vector<std::vector<Index>> connected_components(const WeightedGraph& g) {
  const std::size_t n = g.size();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Index>> comps;
  for (Index s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<Index> comp;
    std::queue<Index> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      Index v = q.front();
      q.pop();
      comp.push_back(v);
      for (Index u : g.neighbors(v))
        if (!seen[u]) {
          seen[u] = true;
          q.push(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace simplexsp
