#pragma once

// Learning a 2-complex on top of a graph: candidate triangles are split into
// size bands (small triangles first), ordered inside each band so that
// triangles sharing edges come later, cut into p batches, and added one batch
// at a time to give the nested family X_0 ⊂ X_1 ⊂ ... ⊂ X_p.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "simplexsp/complex.hpp"
#include "simplexsp/error.hpp"
#include "simplexsp/laplacian.hpp"
#include "simplexsp/rng.hpp"
#include "simplexsp/spectral.hpp"

namespace simplexsp {

struct TriangleQueue {
  std::vector<Triangle> entries;
  std::map<Triangle, std::size_t> band_of;       // 0-based band index
  std::vector<std::pair<double, double>> bands;  // (r_lo, r_hi]
};

/// Size statistic used by the filtration: the longest side.
inline double triangle_size(const Triangle& t, const EdgeWeights& w) {
  return std::max({detail::lookup_weight(w, t[0], t[1]), detail::lookup_weight(w, t[0], t[2]),
                   detail::lookup_weight(w, t[1], t[2])});
}

/// Splits triples into num_bands bands with equal-count quantile thresholds of
/// the size statistic. Entries come out grouped by band, in input order
/// within a band.
inline TriangleQueue filtration_bands(const std::vector<Triangle>& triples, const EdgeWeights& weights,
                                      std::size_t num_bands) {
  if (num_bands < 1) throw ValidationError("filtration_bands: need at least one band");
  TriangleQueue q;
  if (triples.empty()) return q;

  std::vector<double> sizes;
  sizes.reserve(triples.size());
  for (const auto& t : triples) sizes.push_back(triangle_size(t, weights));
  std::vector<double> sorted = sizes;
  std::sort(sorted.begin(), sorted.end());

  const std::size_t count = sorted.size();
  std::vector<double> upper(num_bands);
  for (std::size_t k = 1; k <= num_bands; ++k) {
    const std::size_t pos = (k * count + num_bands - 1) / num_bands;  // ceil(k N / m)
    upper[k - 1] = sorted[std::max<std::size_t>(pos, 1) - 1];
  }
  double lo = 0.0;
  for (std::size_t k = 0; k < num_bands; ++k) {
    q.bands.emplace_back(lo, upper[k]);
    lo = upper[k];
  }

  std::vector<std::vector<Triangle>> members(num_bands);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto band = static_cast<std::size_t>(
        std::lower_bound(upper.begin(), upper.end(), sizes[i]) - upper.begin());
    members[std::min(band, num_bands - 1)].push_back(triples[i]);
  }
  for (std::size_t k = 0; k < num_bands; ++k)
    for (const auto& t : members[k]) {
      q.entries.push_back(t);
      q.band_of[t] = k;
    }
  return q;
}

inline bool share_edge(const Triangle& a, const Triangle& b) {
  int common = 0;
  for (Index u : a)
    for (Index v : b) common += (u == v);
  return common >= 2;
}

/// One front-to-back scan: at position j every later triple sharing an edge
/// with entry j is moved, in its current relative order, behind the others.
inline std::vector<Triangle> push_back_sharing(std::vector<Triangle> triples) {
  std::vector<Triangle> keep, moved;
  for (std::size_t j = 0; j < triples.size(); ++j) {
    keep.clear();
    moved.clear();
    for (std::size_t k = j + 1; k < triples.size(); ++k)
      (share_edge(triples[j], triples[k]) ? moved : keep).push_back(triples[k]);
    if (moved.empty()) continue;
    std::copy(keep.begin(), keep.end(), triples.begin() + static_cast<std::ptrdiff_t>(j + 1));
    std::copy(moved.begin(), moved.end(), triples.begin() + static_cast<std::ptrdiff_t>(j + 1 + keep.size()));
  }
  return triples;
}

/// Seeded shuffle followed by push_back_sharing.
inline std::vector<Triangle> order_within_band(std::vector<Triangle> triples, std::uint64_t seed) {
  Rng rng(seed);
  fisher_yates(triples, rng);
  return push_back_sharing(std::move(triples));
}

/// Contiguous batches whose sizes differ by at most one, larger ones first.
inline std::vector<std::vector<Triangle>> partition_queue(const std::vector<Triangle>& queue, std::size_t p) {
  if (p < 1) throw ValidationError("partition_queue: p must be >= 1");
  std::vector<std::vector<Triangle>> batches(p);
  const std::size_t base = queue.size() / p;
  const std::size_t extra = queue.size() % p;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < p; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    batches[i].assign(queue.begin() + static_cast<std::ptrdiff_t>(pos),
                      queue.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return batches;
}

struct FamilyOptions {
  std::size_t p = 20;
  std::size_t bands = 20;
  std::uint64_t seed = 7;
  CandidateMode mode = CandidateMode::closed;
};

struct LaplacianFamily {
  std::vector<SimplicialComplex> complexes;          // X_0 .. X_p
  std::vector<GeneralizedLaplacian> laplacians;      // L_{X_0} .. L_{X_p}
  std::vector<std::vector<Triangle>> batches;        // Q_1 .. Q_p
  TriangleQueue queue;
  std::vector<Spectrum> spectra;                     // empty until computed

  std::size_t levels() const { return laplacians.size(); }
  std::vector<Eigen::MatrixXd> matrices() const {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(laplacians.size());
    for (const auto& l : laplacians) out.push_back(l.matrix);
    return out;
  }
};

namespace detail {

/// Shortest-path distances from src (Dijkstra).
inline std::vector<double> shortest_paths(const WeightedGraph& g, Index src) {
  std::vector<double> dist(g.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (Index u : g.neighbors(v)) {
      const double nd = d + *g.weight(v, u);
      if (nd < dist[u]) {
        dist[u] = nd;
        pq.emplace(nd, u);
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Queue of all candidate triangles: filtration bands, each ordered with a
/// band-specific sub-seed. Returns the weights used (graph weights plus
/// shortest-path lengths for absent edges in `all` mode).
inline std::pair<TriangleQueue, EdgeWeights> build_queue(const WeightedGraph& g, const FamilyOptions& opt) {
  EdgeWeights weights = g.edges();
  std::vector<Triangle> candidates = enumerate_candidate_triangles(g, opt.mode);
  if (opt.mode == CandidateMode::all) {
    std::vector<std::vector<double>> dist(g.size());
    for (Index v = 0; v < g.size(); ++v) dist[v] = detail::shortest_paths(g, v);
    std::vector<Triangle> reachable;
    for (const auto& t : candidates) {
      bool ok = true;
      for (int a = 0; a < 3 && ok; ++a)
        for (int b = a + 1; b < 3 && ok; ++b) {
          const Index u = t[static_cast<std::size_t>(a)];
          const Index v = t[static_cast<std::size_t>(b)];
          if (!std::isfinite(dist[u][v])) ok = false;
        }
      if (!ok) continue;
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          const Index u = t[static_cast<std::size_t>(a)];
          const Index v = t[static_cast<std::size_t>(b)];
          weights.emplace(edge_key(u, v), dist[u][v]);
        }
      reachable.push_back(t);
    }
    candidates = std::move(reachable);
  }

  TriangleQueue banded = filtration_bands(candidates, weights, opt.bands);
  TriangleQueue q;
  q.bands = banded.bands;
  q.band_of = banded.band_of;
  std::vector<std::vector<Triangle>> per_band(opt.bands);
  for (const auto& t : banded.entries) per_band[banded.band_of.at(t)].push_back(t);
  for (std::size_t k = 0; k < per_band.size(); ++k) {
    auto ordered = order_within_band(std::move(per_band[k]), derive_seed(opt.seed, "band-order", k));
    q.entries.insert(q.entries.end(), ordered.begin(), ordered.end());
  }
  return {std::move(q), std::move(weights)};
}

/// Runs enumerate -> filtration -> ordering -> partition -> incremental
/// assembly. L_{X_i} is updated from L_{X_{i-1}} by adding each new triangle
/// block and removing the edge block of every edge that stops being maximal.
inline LaplacianFamily build_family(const WeightedGraph& g, const FamilyOptions& opt = {}) {
  if (opt.p < 1) throw ValidationError("build_family: p must be >= 1");
  LaplacianFamily fam;
  auto [queue, weights] = build_queue(g, opt);
  fam.queue = std::move(queue);
  fam.batches = partition_queue(fam.queue.entries, opt.p);

  Eigen::MatrixXd l = graph_laplacian(g);
  fam.complexes.emplace_back(g);
  GeneralizedLaplacian l0;
  l0.matrix = l;
  for (const auto& [key, w] : g.edges()) l0.provenance.push_back({key.first, key.second});
  fam.laplacians.push_back(l0);

  std::map<EdgeKey, std::size_t> containing;  // triangles containing each edge
  EdgeWeights level_edges = g.edges();
  std::vector<Simplex> level_triangles;
  bool negative = false;
  for (const auto& batch : fam.batches) {
    for (const auto& t : batch) {
      add_triangle_block(l, t, weights);
      const double a = weights.at({t[0], t[1]});
      const double b = weights.at({t[0], t[2]});
      const double c = weights.at({t[1], t[2]});
      if (a + b < c || a + c < b || b + c < a) negative = true;
      for (const auto& key : {EdgeKey{t[0], t[1]}, EdgeKey{t[0], t[2]}, EdgeKey{t[1], t[2]}}) {
        auto& cnt = containing[key];
        if (cnt == 0) {
          auto it = g.edges().find(key);
          if (it != g.edges().end()) add_edge_block(l, key.first, key.second, -it->second);
          level_edges.emplace(key, weights.at(key));
        }
        ++cnt;
      }
      level_triangles.push_back({t[0], t[1], t[2]});
    }
    GeneralizedLaplacian li;
    li.matrix = 0.5 * (l + l.transpose());
    li.negative_star_weights = negative;
    li.provenance = level_triangles;
    fam.laplacians.push_back(std::move(li));
    fam.complexes.emplace_back(g.vertices(), level_edges, level_triangles);
  }
  return fam;
}

inline std::vector<Spectrum> family_spectra(const LaplacianFamily& fam) {
  std::vector<Spectrum> out;
  out.reserve(fam.levels());
  for (const auto& l : fam.laplacians) out.push_back(eigendecompose(l));
  return out;
}

/// Eigenvectors kept for a band fraction r: max(1, round(r n)).
inline Eigen::Index band_count(double r, Eigen::Index n) {
  return std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::llround(r * static_cast<double>(n))), 1, n);
}

/// Sum over signals of ||V V' f - f||^2 with V the first band_count(r, n)
/// eigenvectors.
inline double projection_residual(const Spectrum& s, const Eigen::MatrixXd& signals, double r) {
  const Eigen::Index k = band_count(r, s.size());
  const auto v = s.eigenvectors.leftCols(k);
  const Eigen::MatrixXd resid = v * (v.transpose() * signals) - signals;
  return resid.squaredNorm();
}

struct ModelSelection {
  std::size_t index = 0;
  std::vector<double> errors;  // per level
};

/// Picks the level whose low band best captures the signals (columns of
/// `signals`); near-ties resolve to the smaller level.
inline ModelSelection select_model(const LaplacianFamily& fam, const Eigen::MatrixXd& signals, double r1) {
  if (!(r1 > 0.0 && r1 <= 1.0)) throw ValidationError("select_model: r1 must lie in (0, 1]");
  if (signals.cols() == 0) throw ValidationError("select_model: empty signal set");
  if (fam.levels() == 0) throw ValidationError("select_model: empty family");
  detail::check_dims(fam.laplacians.front().size(), signals.rows(), "select_model");

  const std::vector<Spectrum> computed = fam.spectra.empty() ? family_spectra(fam) : std::vector<Spectrum>{};
  const std::vector<Spectrum>& spectra = fam.spectra.empty() ? computed : fam.spectra;

  ModelSelection sel;
  for (const auto& s : spectra) sel.errors.push_back(projection_residual(s, signals, r1));
  const double best = *std::min_element(sel.errors.begin(), sel.errors.end());
  const double tie = 1e-12 * std::max(1.0, signals.squaredNorm());
  for (std::size_t i = 0; i < sel.errors.size(); ++i)
    if (sel.errors[i] <= best + tie) {
      sel.index = i;
      break;
    }
  return sel;
}

/// Continuous filter fit over the family's interpolated operators.
inline FilterFit fit_continuous_filter(const LaplacianFamily& fam, const Signal& x1, const Signal& x2,
                                       std::size_t degree, std::size_t t_grid = 21) {
  const auto mats = fam.matrices();
  return fit_continuous_filter(std::span<const Eigen::MatrixXd>(mats), x1, x2, degree, t_grid);
}

}  // namespace simplexsp
