#pragma once

// Structural and spectral diagnostics of 2-complexes: how L_X relates to the
// graph Laplacian of its 1-skeleton, and whether the two can share an
// eigenbasis.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "simplexsp/complex.hpp"
#include "simplexsp/error.hpp"
#include "simplexsp/laplacian.hpp"
#include "simplexsp/rng.hpp"
#include "simplexsp/spectral.hpp"

namespace simplexsp {

struct InteriorCounts {
  std::size_t m1 = 0;  // 1-interior vertices: in no 2-simplex
  std::size_t m2 = 0;  // components of the union of all 2-simplices
  std::size_t m3 = 0;  // such components holding a 2-interior vertex
  std::size_t m4 = 0;  // triangle vertices with an isolating 1-interior neighbour

  bool operator==(const InteriorCounts&) const = default;
};

namespace detail {

inline void require_two_complex(const SimplicialComplex& x, const char* what) {
  if (x.dimension() > 2)
    throw ValidationError(std::string(what) + ": only defined for complexes of dimension <= 2");
}

struct TriangleIncidence {
  std::vector<bool> in_triangle;           // per vertex
  std::map<EdgeKey, std::size_t> count;    // triangles containing each edge
};

inline TriangleIncidence incidence(const SimplicialComplex& x) {
  TriangleIncidence inc;
  inc.in_triangle.assign(x.size(), false);
  for (const auto& [key, w] : x.edges()) inc.count[key] = 0;
  for (const auto& t : x.triangles()) {
    for (Index v : t) inc.in_triangle[v] = true;
    ++inc.count[{t[0], t[1]}];
    ++inc.count[{t[0], t[2]}];
    ++inc.count[{t[1], t[2]}];
  }
  return inc;
}

/// Components of the graph formed by triangle edges, restricted to
/// triangle vertices.
inline std::vector<std::vector<Index>> triangle_components(const SimplicialComplex& x) {
  EdgeWeights tri_edges;
  for (const auto& t : x.triangles()) {
    tri_edges[{t[0], t[1]}] = 1.0;
    tri_edges[{t[0], t[2]}] = 1.0;
    tri_edges[{t[1], t[2]}] = 1.0;
  }
  const auto inc = incidence(x);
  std::vector<std::vector<Index>> out;
  for (auto& comp : connected_components(WeightedGraph::with_indices(x.size(), tri_edges)))
    if (inc.in_triangle[comp.front()]) out.push_back(std::move(comp));
  return out;
}

}  // namespace detail

inline InteriorCounts interior_counts(const SimplicialComplex& x) {
  detail::require_two_complex(x, "interior_counts");
  const auto inc = detail::incidence(x);
  const auto& g = x.graph();
  InteriorCounts out;

  for (Index v = 0; v < x.size(); ++v)
    if (!inc.in_triangle[v]) ++out.m1;

  auto two_interior = [&](Index v) {
    for (Index u : g.neighbors(v))
      if (inc.count.at(edge_key(u, v)) == 0) return false;
    return true;
  };
  for (const auto& comp : detail::triangle_components(x)) {
    ++out.m2;
    if (std::any_of(comp.begin(), comp.end(), two_interior)) ++out.m3;
  }

  for (Index v = 0; v < x.size(); ++v) {
    if (!inc.in_triangle[v]) continue;
    for (Index nb : g.neighbors(v)) {
      if (inc.in_triangle[nb]) continue;
      const auto& others = g.neighbors(nb);
      const bool isolating =
          std::none_of(others.begin(), others.end(), [&](Index w) { return w != v && inc.in_triangle[w]; });
      if (isolating) {
        ++out.m4;
        break;
      }
    }
  }
  return out;
}

/// Fewest and most 2-simplices on a single edge. k_min runs over all edges
/// (bare edges give 0); k_max over edges in at least one triangle.
inline std::pair<std::size_t, std::size_t> edge_triangle_range(const SimplicialComplex& x) {
  const auto inc = detail::incidence(x);
  std::size_t kmin = inc.count.empty() ? 0 : std::numeric_limits<std::size_t>::max();
  std::size_t kmax = 0;
  for (const auto& [key, c] : inc.count) {
    kmin = std::min(kmin, c);
    kmax = std::max(kmax, c);
  }
  return {kmin, kmax};
}

enum class Distinctive { X1_minus_X, X_minus_X1, neither };

inline const char* to_string(Distinctive d) {
  switch (d) {
    case Distinctive::X1_minus_X: return "X1_minus_X";
    case Distinctive::X_minus_X1: return "X_minus_X1";
    case Distinctive::neither: return "neither";
  }
  return "neither";
}

struct DistinctiveResult {
  Distinctive direction = Distinctive::neither;
  bool trivially_distinctive = false;  // no 2-simplices at all
  /// First triangle edge breaking the sign pattern (for `neither`), else the
  /// first triangle edge examined.
  std::optional<EdgeKey> witness;
  double witness_value = 0.0;
};

inline constexpr double kDistinctiveTolerance = 1e-12;

/// Is L_{X^1} - L_X (or its negative) a graph Laplacian whose weights are
/// strictly positive on every triangle edge? Entries off triangle edges vanish
/// by construction, so only triangle edges are inspected.
inline DistinctiveResult distinctive_check(const SimplicialComplex& x) {
  detail::require_two_complex(x, "distinctive_check");
  DistinctiveResult out;
  const auto inc = detail::incidence(x);
  const Eigen::MatrixXd diff = graph_laplacian(x.graph()) - complex_laplacian(x).matrix;
  const double tol = kDistinctiveTolerance * std::max(1.0, diff.cwiseAbs().maxCoeff());

  bool all_neg = true, all_pos = true, any = false;
  std::optional<EdgeKey> first_bad_neg, first_bad_pos;
  for (const auto& [key, c] : inc.count) {
    if (c == 0) continue;
    const double v = diff(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second));
    if (!any) {
      out.witness = key;
      out.witness_value = v;
    }
    any = true;
    if (!(v < -tol)) {
      all_neg = false;
      if (!first_bad_neg) first_bad_neg = key;
    }
    if (!(v > tol)) {
      all_pos = false;
      if (!first_bad_pos) first_bad_pos = key;
    }
  }
  if (!any) {
    out.trivially_distinctive = true;
    return out;
  }
  if (all_neg) {
    out.direction = Distinctive::X1_minus_X;
  } else if (all_pos) {
    out.direction = Distinctive::X_minus_X1;
  } else {
    out.witness = first_bad_neg;
    out.witness_value =
        diff(static_cast<Eigen::Index>(first_bad_neg->first), static_cast<Eigen::Index>(first_bad_neg->second));
  }
  return out;
}

struct Prop1Conditions {
  bool no_direct_edge = false;        // (a) no bare edge joins two triangle vertices
  bool single_attachment = false;     // (b) each 1-interior vertex touches <= 1 triangle vertex; one exists
  bool edge_in_one_triangle = false;  // (c) k_max <= 1

  bool all() const { return no_direct_edge && single_attachment && edge_in_one_triangle; }
};

inline Prop1Conditions prop1_conditions(const SimplicialComplex& x) {
  detail::require_two_complex(x, "prop1_conditions");
  const auto inc = detail::incidence(x);
  const auto& g = x.graph();
  Prop1Conditions c;
  c.no_direct_edge = true;
  c.edge_in_one_triangle = true;
  for (const auto& [key, cnt] : inc.count) {
    if (cnt == 0 && inc.in_triangle[key.first] && inc.in_triangle[key.second]) c.no_direct_edge = false;
    if (cnt > 1) c.edge_in_one_triangle = false;
  }
  bool has_one_interior = false;
  c.single_attachment = true;
  for (Index v = 0; v < x.size(); ++v) {
    if (inc.in_triangle[v]) continue;
    has_one_interior = true;
    std::size_t touching = 0;
    for (Index u : g.neighbors(v)) touching += inc.in_triangle[u] ? 1 : 0;
    if (touching > 1) c.single_attachment = false;
  }
  c.single_attachment = c.single_attachment && has_one_interior;
  return c;
}

struct ShiftInvarianceCertificate {
  Prop1Conditions prop1;
  InteriorCounts counts;
  Distinctive distinctive = Distinctive::neither;
  bool connected = false;
  /// Upper bound on the dimension of the span of common eigenvectors that
  /// share an eigenvalue.
  std::size_t common_same_eigen_bound = 0;
  /// Combinatorial certificate that L_X and L_{X^1} share no orthonormal
  /// eigenbasis (hence do not commute).
  bool theorem = false;
  /// The uncorrected condition m1 + m4 < n and m2 <= m3 + m4 (given
  /// distinctiveness), reported for comparison.
  bool literal_condition = false;
  double commutator = 0.0;
};

/// Certificate of non-shift-invariance.
///
/// For a connected 1-skeleton and distinctive 2-simplices, a common
/// eigenvector with equal eigenvalues is either constant or lies in the
/// kernel of the difference graph and vanishes on triangle components holding
/// a 2-interior vertex; orthogonality to constants removes one further
/// dimension. That bounds the same-eigenvalue span by max(1, m1 + m2 - m3)
/// (m1 + m2 when m3 = 0). Eigenvectors with different eigenvalues vanish on
/// the m1 + m4 vertices, so the basis cannot exist when the bound is at most
/// m1 + m4 and m1 + m4 < n.
inline ShiftInvarianceCertificate shift_invariance_certificate(const SimplicialComplex& x) {
  detail::require_two_complex(x, "shift_invariance_certificate");
  ShiftInvarianceCertificate c;
  c.prop1 = prop1_conditions(x);
  c.counts = interior_counts(x);
  const auto dist = distinctive_check(x);
  c.distinctive = dist.direction;
  c.connected = x.size() > 0 && connected_components(x.graph()).size() == 1;

  const auto& m = c.counts;
  const std::size_t n = x.size();
  c.common_same_eigen_bound = m.m3 >= 1 ? std::max<std::size_t>(1, m.m1 + m.m2 - m.m3) : m.m1 + m.m2;
  const bool distinct = c.distinctive != Distinctive::neither;
  const bool thin = m.m1 + m.m4 < n;
  c.theorem = distinct && c.connected && thin && c.common_same_eigen_bound <= m.m1 + m.m4;
  c.literal_condition = distinct && thin && m.m2 <= m.m3 + m.m4;
  c.commutator = commutator_norm(complex_laplacian(x).matrix, graph_laplacian(x.graph()));
  return c;
}

struct SandwichBounds {
  double alpha = 0.0;  // smallest generalized Rayleigh quotient of (L_X, L_{X^1})
  double beta = 0.0;   // largest
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  double claimed_lower = 0.0;  // max(k_min / 3, 1 / 3)
  double claimed_upper = 0.0;  // k_max / 3
};

/// Extremal generalized Rayleigh quotients of L_X against L_{X^1} on the
/// complement of the constant vector, alongside the published constants.
inline SandwichBounds sandwich_bounds(const SimplicialComplex& x) {
  detail::require_two_complex(x, "sandwich_bounds");
  for (const auto& [key, w] : x.edges())
    if (w != 1.0) throw ValidationError("sandwich_bounds: requires unit edge weights");
  if (x.size() < 2 || connected_components(x.graph()).size() != 1)
    throw ValidationError("sandwich_bounds: requires a connected complex with at least two vertices");

  const auto n = static_cast<Eigen::Index>(x.size());
  // Orthonormal basis of the complement of the constant vector.
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  const Eigen::MatrixXd q = (qr.householderQ() * Eigen::MatrixXd::Identity(n, n)).rightCols(n - 1);

  const Eigen::MatrixXd a = q.transpose() * complex_laplacian(x).matrix * q;
  const Eigen::MatrixXd b = q.transpose() * graph_laplacian(x.graph()) * q;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (a + a.transpose()),
                                                                   0.5 * (b + b.transpose()));
  if (solver.info() != Eigen::Success) throw NumericalError("sandwich_bounds: generalized eigensolver failed");

  SandwichBounds out;
  out.alpha = solver.eigenvalues().minCoeff();
  out.beta = solver.eigenvalues().maxCoeff();
  std::tie(out.k_min, out.k_max) = edge_triangle_range(x);
  out.claimed_lower = std::max(static_cast<double>(out.k_min) / 3.0, 1.0 / 3.0);
  out.claimed_upper = static_cast<double>(out.k_max) / 3.0;
  return out;
}

struct AuditItem {
  bool pass = false;
  double residual = 0.0;
};

struct Lemma2Audit {
  AuditItem symmetric;
  AuditItem positive_semidefinite;
  AuditItem zero_row_sums;
  AuditItem kernel_dimension;  // residual = measured kernel dimension
  std::size_t expected_kernel = 0;

  bool all() const {
    return symmetric.pass && positive_semidefinite.pass && zero_row_sums.pass && kernel_dimension.pass;
  }
};

/// Checks symmetry, PSD, zero row sums and kernel dimension == components.
inline Lemma2Audit lemma2_audit(const Eigen::MatrixXd& l, std::size_t components) {
  Lemma2Audit out;
  out.expected_kernel = components;
  const double scale = std::max(1.0, l.norm());
  out.symmetric.residual = (l - l.transpose()).cwiseAbs().maxCoeff();
  out.symmetric.pass = out.symmetric.residual == 0.0;
  out.zero_row_sums.residual = l.rowwise().sum().cwiseAbs().maxCoeff();
  out.zero_row_sums.pass = out.zero_row_sums.residual < 1e-10 * scale;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (l + l.transpose()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  out.positive_semidefinite.residual = ev.size() ? ev.minCoeff() : 0.0;
  out.positive_semidefinite.pass = out.positive_semidefinite.residual >= -1e-10 * scale;
  std::size_t kernel = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) <= 1e-9 * scale) ++kernel;
  out.kernel_dimension.residual = static_cast<double>(kernel);
  out.kernel_dimension.pass = kernel == components;
  return out;
}

struct DiagnosticsReport {
  std::size_t n = 0;
  std::optional<double> gamma_min;  // absent without 2-simplices
  bool graph_type = false;
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  InteriorCounts counts;
  DistinctiveResult distinctive;
  ShiftInvarianceCertificate certificate;
  std::optional<SandwichBounds> sandwich;  // unit-weight connected complexes only
  Lemma2Audit lemma2;
  /// <y, L_{X^1} y> / <x, L_X x> on single triangles, y the first differences of x.
  std::vector<double> difference_ratio_samples;
};

/// Ratio <y, L_{X^1} y> / <x, L_X x> for one triangle with random x, where
/// y = (x3 - x2, x1 - x3, x2 - x1).
inline double difference_ratio(double w12, double w13, double w23, const Eigen::Vector3d& x) {
  const Eigen::Matrix3d lx = two_simplex_closed_form(w12, w13, w23);
  Eigen::Matrix3d l1;
  l1 << w12 + w13, -w12, -w13, -w12, w12 + w23, -w23, -w13, -w23, w13 + w23;
  const Eigen::Vector3d y(x(2) - x(1), x(0) - x(2), x(1) - x(0));
  return y.dot(l1 * y) / x.dot(lx * x);
}

inline DiagnosticsReport diagnose(const SimplicialComplex& x, std::uint64_t seed = 7,
                                  std::size_t ratio_samples = 8) {
  detail::require_two_complex(x, "diagnose");
  DiagnosticsReport r;
  r.n = x.size();
  for (const auto& t : x.triangles()) {
    const double g = shape_constant(x.edges().at({t[0], t[1]}), x.edges().at({t[0], t[2]}),
                                    x.edges().at({t[1], t[2]}));
    r.gamma_min = r.gamma_min ? std::min(*r.gamma_min, g) : g;
  }
  const GeneralizedLaplacian lx = complex_laplacian(x);
  r.graph_type = is_graph_type(lx, 1e-12 * std::max(1.0, lx.matrix.cwiseAbs().maxCoeff()));
  std::tie(r.k_min, r.k_max) = edge_triangle_range(x);
  r.counts = interior_counts(x);
  r.distinctive = distinctive_check(x);
  r.certificate = shift_invariance_certificate(x);
  bool unit = true;
  for (const auto& [key, w] : x.edges()) unit = unit && w == 1.0;
  if (unit && x.size() >= 2 && connected_components(x.graph()).size() == 1) r.sandwich = sandwich_bounds(x);
  r.lemma2 = lemma2_audit(lx.matrix, connected_components(x.graph()).size());

  Rng rng(derive_seed(seed, "difference-ratio"));
  const auto tris = x.triangles();
  for (std::size_t i = 0; i < ratio_samples && !tris.empty(); ++i) {
    const auto& t = tris[i % tris.size()];
    Eigen::Vector3d v;
    for (int k = 0; k < 3; ++k) v(k) = standard_normal(rng);
    r.difference_ratio_samples.push_back(difference_ratio(x.edges().at({t[0], t[1]}), x.edges().at({t[0], t[2]}),
                                                          x.edges().at({t[1], t[2]}), v));
  }
  return r;
}

}  // namespace simplexsp
