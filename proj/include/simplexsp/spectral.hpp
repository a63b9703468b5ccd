#pragma once

// Fourier analysis with respect to a symmetric shift operator: dense
// eigendecomposition, transform, bandpass, convolution, sampling and
// polynomial filters. Frequency indices in the public API are 1-based.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simplexsp/complex.hpp"
#include "simplexsp/error.hpp"
#include "simplexsp/laplacian.hpp"

namespace simplexsp {

using Signal = Eigen::VectorXd;
using IndexSet = std::vector<std::size_t>;  // 1-based frequency indices

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalue i
  /// Half-open column ranges [first, last) of numerically repeated eigenvalues.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> tie_blocks;

  Eigen::Index size() const { return eigenvalues.size(); }
  bool has_ties() const { return !tie_blocks.empty(); }
  /// Frequency i (1-based).
  auto basis(std::size_t i) const { return eigenvectors.col(static_cast<Eigen::Index>(i - 1)); }
};

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kTieTolerance = 1e-9;

namespace detail {

inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

inline void check_dims(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got)
    throw ValidationError(std::string(what) + ": dimension mismatch (" + std::to_string(expected) +
                          " vs " + std::to_string(got) + ")");
}

inline void check_band(const IndexSet& band, Eigen::Index n) {
  for (std::size_t i : band)
    if (i < 1 || static_cast<Eigen::Index>(i) > n)
      throw ValidationError("frequency index " + std::to_string(i) + " outside [1, " + std::to_string(n) + "]");
}

}  // namespace detail

/// Full symmetric eigendecomposition with deterministic signs. Inside a block
/// of repeated eigenvalues the basis is re-orthonormalized, sign-fixed and
/// sorted lexicographically (descending).
inline Spectrum eigendecompose(const Eigen::MatrixXd& l) {
  if (l.rows() != l.cols()) throw ValidationError("eigendecompose: matrix is not square");
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
    throw ValidationError("eigendecompose: matrix is not symmetric");

  Spectrum s;
  if (l.rows() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (l + l.transpose()));
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecompose: eigensolver did not converge");
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();

  const Eigen::Index n = s.eigenvalues.size();
  const double gap = kTieTolerance * std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index first = 0; first < n;) {
    Eigen::Index last = first + 1;
    while (last < n && s.eigenvalues(last) - s.eigenvalues(last - 1) <= gap) ++last;
    if (last - first > 1) {
      s.tie_blocks.emplace_back(first, last);
      auto block = s.eigenvectors.middleCols(first, last - first);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, last - first);
      for (Eigen::Index c = 0; c < q.cols(); ++c) detail::fix_sign(q.col(c));
      std::vector<Eigen::Index> order(static_cast<std::size_t>(q.cols()));
      for (Eigen::Index c = 0; c < q.cols(); ++c) order[static_cast<std::size_t>(c)] = c;
      std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::lexicographical_compare(q.col(b).begin(), q.col(b).end(), q.col(a).begin(),
                                            q.col(a).end());
      });
      for (std::size_t c = 0; c < order.size(); ++c)
        block.col(static_cast<Eigen::Index>(c)) = q.col(order[c]);
    } else {
      detail::fix_sign(s.eigenvectors.col(first));
    }
    first = last;
  }
  return s;
}

inline Spectrum eigendecompose(const GeneralizedLaplacian& l) { return eigendecompose(l.matrix); }

inline Eigen::VectorXd gft(const Spectrum& s, const Signal& x) {
  detail::check_dims(s.size(), x.size(), "gft");
  return s.eigenvectors.transpose() * x;
}

inline Signal igft(const Spectrum& s, const Eigen::VectorXd& xhat) {
  detail::check_dims(s.size(), xhat.size(), "igft");
  return s.eigenvectors * xhat;
}

inline Signal bandpass(const Spectrum& s, const IndexSet& band, const Signal& x) {
  detail::check_dims(s.size(), x.size(), "bandpass");
  detail::check_band(band, s.size());
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(s.size());
  for (std::size_t i : band) mask(static_cast<Eigen::Index>(i - 1)) = 1.0;
  return igft(s, gft(s, x).cwiseProduct(mask));
}

/// Spectral convolution: coefficients of z and x multiply pointwise.
inline Signal convolve(const Spectrum& s, const Signal& z, const Signal& x) {
  detail::check_dims(s.size(), z.size(), "convolve");
  detail::check_dims(s.size(), x.size(), "convolve");
  return igft(s, gft(s, z).cwiseProduct(gft(s, x)));
}

/// Contiguous 1-based band [lo, hi].
inline IndexSet band_range(std::size_t lo, std::size_t hi) {
  IndexSet b;
  for (std::size_t i = lo; i <= hi; ++i) b.push_back(i);
  return b;
}

struct Reconstruction {
  Signal signal;
  double condition_number = 0.0;
};

inline constexpr double kMaxSamplingCondition = 1e12;

/// Recovers the band-limited signal that matches samples on sample_vertices.
inline Reconstruction downsample_reconstruct(const Spectrum& s, const IndexSet& band,
                                             const std::vector<Index>& sample_vertices,
                                             const Eigen::VectorXd& samples) {
  detail::check_band(band, s.size());
  if (sample_vertices.size() != band.size())
    throw ValidationError("downsample_reconstruct: need exactly |B| sample vertices");
  detail::check_dims(static_cast<Eigen::Index>(sample_vertices.size()), samples.size(),
                     "downsample_reconstruct");
  const auto k = static_cast<Eigen::Index>(band.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const Index v = sample_vertices[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(v) >= s.size()) throw ValidationError("sample vertex out of range");
    for (Eigen::Index c = 0; c < k; ++c)
      sub(r, c) = s.eigenvectors(static_cast<Eigen::Index>(v),
                                 static_cast<Eigen::Index>(band[static_cast<std::size_t>(c)] - 1));
  }
  Reconstruction out;
  if (k == 0) {
    out.signal = Signal::Zero(s.size());
    out.condition_number = 1.0;
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smin = sv(k - 1);
  out.condition_number = smin > 0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(out.condition_number < kMaxSamplingCondition) || !(smin * kMaxSamplingCondition > 1.0))
    throw NumericalError("these vertices cannot determine the band (sampling submatrix condition " +
                         std::to_string(out.condition_number) + ", smallest singular value " +
                         std::to_string(smin) + ")");
  const Eigen::VectorXd coeffs = svd.solve(samples);
  out.signal = Signal::Zero(s.size());
  for (Eigen::Index c = 0; c < k; ++c)
    out.signal += coeffs(c) * s.eigenvectors.col(static_cast<Eigen::Index>(band[static_cast<std::size_t>(c)] - 1));
  return out;
}

/// Greedy volume-maximizing choice of |B| sample vertices: each step takes
/// the row whose component orthogonal to the rows already chosen is longest
/// (ties to the smaller vertex). Returned sorted.
inline std::vector<Index> select_sample_vertices(const Spectrum& s, const IndexSet& band) {
  detail::check_band(band, s.size());
  const Eigen::Index n = s.size();
  const auto k = static_cast<Eigen::Index>(band.size());
  Eigen::MatrixXd rows(n, k);
  for (Eigen::Index c = 0; c < k; ++c)
    rows.col(c) = s.eigenvectors.col(static_cast<Eigen::Index>(band[static_cast<std::size_t>(c)] - 1));

  std::vector<Index> chosen;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index step = 0; step < k; ++step) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      const double norm = rows.row(v).squaredNorm();
      if (norm > best_norm * (1.0 + 1e-12) + 1e-300) {
        best_norm = norm;
        best = v;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    chosen.push_back(static_cast<Index>(best));
    const double len = std::sqrt(best_norm);
    if (len <= 0.0) continue;
    const Eigen::RowVectorXd q = rows.row(best) / len;
    for (Eigen::Index v = 0; v < n; ++v)
      if (!used[static_cast<std::size_t>(v)]) rows.row(v) -= rows.row(v).dot(q) * q;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

/// sum_j coeffs[j-1] L^j x, evaluated by Horner's rule on vectors.
inline Signal poly_filter(const Eigen::MatrixXd& l, std::span<const double> coeffs, const Signal& x) {
  detail::check_dims(l.rows(), x.size(), "poly_filter");
  if (coeffs.empty()) throw ValidationError("poly_filter: need at least one coefficient");
  Signal acc = Signal::Zero(x.size());
  for (std::size_t j = coeffs.size(); j-- > 0;) acc = l * (acc + coeffs[j] * x);
  return acc;
}

/// ||AB - BA||_F / (||A||_F ||B||_F); zero when either operator vanishes.
inline double commutator_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  detail::check_dims(a.rows(), b.rows(), "commutator_norm");
  detail::check_dims(a.cols(), b.cols(), "commutator_norm");
  const double denom = a.norm() * b.norm();
  if (denom == 0.0) return 0.0;
  return (a * b - b * a).norm() / denom;
}

struct FilterFit {
  std::size_t interval = 0;  // i: operator t L_i + (1 - t) L_{i+1}
  double t = 1.0;
  std::vector<double> coeffs;  // a_1..a_b
  double residual = 0.0;       // squared error
};

inline constexpr double kFilterRidge = 1e-10;

namespace detail {

/// Ridge least squares min ||A a - y||^2 + eps ||a||^2, solved through a QR
/// of the stacked system [A; sqrt(eps) I] rather than forming A'A.
inline Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double eps) {
  const Eigen::Index m = a.rows();
  const Eigen::Index k = a.cols();
  Eigen::MatrixXd stacked(m + k, k);
  stacked.topRows(m) = a;
  stacked.bottomRows(k) = std::sqrt(eps) * Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + k);
  rhs.head(m) = y;
  return stacked.colPivHouseholderQr().solve(rhs);
}

inline FilterFit fit_single(const Eigen::MatrixXd& l, const Signal& x1, const Signal& x2, std::size_t degree) {
  const auto k = static_cast<Eigen::Index>(degree);
  Eigen::MatrixXd features(x1.size(), k);
  Signal v = x1;
  for (Eigen::Index j = 0; j < k; ++j) {
    v = l * v;
    features.col(j) = v;
  }
  const Eigen::VectorXd a = ridge_solve(features, x2, kFilterRidge);
  FilterFit fit;
  fit.coeffs.assign(a.data(), a.data() + a.size());
  fit.residual = (features * a - x2).squaredNorm();
  return fit;
}

}  // namespace detail

/// Fits x2 ~ sum_{j=1..degree} a_j L_{i,t}^j x1 over the interpolated
/// operators L_{i,t} = t L_i + (1 - t) L_{i+1}, scanning t on a uniform grid
/// of t_grid points and solving for the coefficients exactly. With fewer
/// than two operators the single operator is fitted.
inline FilterFit fit_continuous_filter(std::span<const Eigen::MatrixXd> laplacians, const Signal& x1,
                                       const Signal& x2, std::size_t degree, std::size_t t_grid = 21) {
  if (laplacians.empty()) throw ValidationError("fit_continuous_filter: no operators");
  if (degree < 1) throw ValidationError("fit_continuous_filter: degree bound must be >= 1");
  if (t_grid < 2) throw ValidationError("fit_continuous_filter: t grid needs at least 2 points");
  detail::check_dims(laplacians.front().rows(), x1.size(), "fit_continuous_filter");
  detail::check_dims(x1.size(), x2.size(), "fit_continuous_filter");

  if (laplacians.size() < 2) {
    FilterFit fit = detail::fit_single(laplacians.front(), x1, x2, degree);
    fit.interval = 0;
    fit.t = 1.0;
    return fit;
  }
  FilterFit best;
  bool have = false;
  for (std::size_t i = 0; i + 1 < laplacians.size(); ++i) {
    // t runs from 1 down to 0 so the pure L_i operator is tried first.
    for (std::size_t g = 0; g < t_grid; ++g) {
      const double t = 1.0 - static_cast<double>(g) / static_cast<double>(t_grid - 1);
      const Eigen::MatrixXd l = t * laplacians[i] + (1.0 - t) * laplacians[i + 1];
      FilterFit fit = detail::fit_single(l, x1, x2, degree);
      if (!have || fit.residual < best.residual) {
        fit.interval = i;
        fit.t = t;
        best = std::move(fit);
        have = true;
      }
    }
  }
  return best;
}

}  // namespace simplexsp
