#pragma once

// Seeded desk-scale harnesses for the compression, anomaly and label
// correction experiments. Every trial draws its randomness from
// derive_seed(config.seed, purpose, trial), so serial and threaded runs
// produce identical tables.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "simplexsp/complex.hpp"
#include "simplexsp/laplacian.hpp"
#include "simplexsp/parallel.hpp"
#include "simplexsp/rng.hpp"
#include "simplexsp/spectral.hpp"
#include "simplexsp/structure_learning.hpp"
#include "simplexsp/synthetic.hpp"
#include "simplexsp/tasks.hpp"

namespace simplexsp {

/// Size of the synthetic worlds the harnesses generate.
struct SyntheticScale {
  std::size_t n = 100;
  std::size_t knn = 5;      // neighbours for point-cloud graphs
  std::size_t signals = 20; // per set (compression)
  double truth_lo = 0.1;    // hidden scale drawn uniformly from this quantile range
  double truth_hi = 0.9;
};

// ---------------------------------------------------------------------------
// Compression

struct CompressionTrial {
  std::size_t selected = 0;
  std::size_t truth_triangles = 0;
  double level0_error = 0.0;
  double selected_error = 0.0;
  std::vector<double> selection_residuals;  // per level, on S1
  std::vector<double> errors;               // per level, on S2
};

/// One run of the protocol on a given graph and hidden complex: S1 and S2
/// come from the first r1 and r2 of the hidden complex's spectrum, the
/// family is learned from the graph alone and scored on S2.
inline CompressionTrial compression_trial(const WeightedGraph& g, const SimplicialComplex& truth,
                                          const ExperimentConfig& cfg, std::size_t signal_count,
                                          std::uint64_t seed) {
  const Spectrum ts = eigendecompose(complex_laplacian(truth));
  const Eigen::MatrixXd s1 = generate_bandlimited_set(ts, cfg.r1, signal_count, derive_seed(seed, "s1"));
  const Eigen::MatrixXd s2 = generate_bandlimited_set(ts, cfg.r2, signal_count, derive_seed(seed, "s2"));

  FamilyOptions opt;
  opt.p = cfg.p;
  opt.bands = cfg.bands;
  opt.seed = derive_seed(seed, "family");
  LaplacianFamily fam = build_family(g, opt);
  fam.spectra = family_spectra(fam);

  CompressionTrial out;
  const ModelSelection sel = select_model(fam, s1, cfg.r1);
  out.selected = sel.index;
  out.selection_residuals = sel.errors;
  out.truth_triangles = truth.triangles().size();
  for (const auto& s : fam.spectra) out.errors.push_back(compression_error(s, s2, cfg.r2));
  out.level0_error = out.errors.front();
  out.selected_error = out.errors[out.selected];
  return out;
}

/// cfg.trials trials on euclidean kNN graphs of random planar points; the
/// hidden complex fills every closed triple up to a random size quantile.
inline std::vector<CompressionTrial> compression_experiment(const ExperimentConfig& cfg,
                                                            const SyntheticScale& scale = {}) {
  cfg.validate();
  std::vector<CompressionTrial> out(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t t) {
    const auto pts = synthetic::random_points(scale.n, 2, derive_seed(cfg.seed, "points", t));
    const WeightedGraph g = knn_graph(pts, scale.knn, KnnWeight::euclidean);
    Rng rng(derive_seed(cfg.seed, "scale", t));
    const double q = scale.truth_lo + (scale.truth_hi - scale.truth_lo) * uniform01(rng);
    out[t] = compression_trial(g, synthetic::threshold_complex(g, q), cfg, scale.signals,
                               derive_seed(cfg.seed, "trial", t));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Anomaly detection

struct AnomalySweep {
  std::vector<double> magnitudes;
  std::size_t trials = 0;
  std::size_t levels = 0;
  std::vector<std::vector<std::size_t>> level_hits;  // [level][magnitude]
  std::vector<std::size_t> s1, s2, s3, s4;           // hits per magnitude
  std::size_t s3_level = 0;

  double rate(const std::vector<std::size_t>& hits, std::size_t m) const {
    return trials ? static_cast<double>(hits[m]) / static_cast<double>(trials) : 0.0;
  }
};

/// Weather-style protocol: three smooth baseline fields and a fourth field
/// perturbed at one random vertex by each magnitude in turn. S2 takes, per
/// magnitude, the level with the most detections; S3 the level with the most
/// detections overall. Both use ground truth and are reported, not deployed.
inline AnomalySweep anomaly_experiment(const ExperimentConfig& cfg, const std::vector<double>& magnitudes,
                                       const SyntheticScale& scale = {}) {
  cfg.validate();
  const std::size_t mags = magnitudes.size();
  const std::size_t levels = cfg.p + 1;
  // hits[t][level * mags + m]
  std::vector<std::vector<char>> hits(cfg.trials);
  std::vector<std::vector<char>> quorum(cfg.trials);

  parallel_for(cfg.trials, [&](std::size_t t) {
    const auto pts = synthetic::random_points(scale.n, 2, derive_seed(cfg.seed, "points", t));
    const WeightedGraph g = knn_graph(pts, scale.knn, KnnWeight::euclidean);
    Rng rng(derive_seed(cfg.seed, "scale", t));
    const double q = scale.truth_lo + (scale.truth_hi - scale.truth_lo) * uniform01(rng);
    const Spectrum ts = eigendecompose(complex_laplacian(synthetic::threshold_complex(g, q)));
    const Eigen::MatrixXd fields = synthetic::smooth_fields(ts, 0.1, 4, 60.0, 10.0, 1.0, derive_seed(cfg.seed, "fields", t));

    FamilyOptions opt;
    opt.p = cfg.p;
    opt.bands = cfg.bands;
    opt.seed = derive_seed(cfg.seed, "family", t);
    const std::vector<Spectrum> spectra = family_spectra(build_family(g, opt));
    const Index v = uniform_below(rng, scale.n);

    hits[t].assign(spectra.size() * mags, 0);
    quorum[t].assign(mags, 0);
    for (std::size_t m = 0; m < mags; ++m) {
      const Signal test = perturb_node(fields.col(3), v, magnitudes[m], derive_seed(cfg.seed, "sign", t));
      const AnomalyVerdict verdict =
          detect_anomaly(spectra, fields.leftCols(3), test, cfg.r, cfg.epsilon, Strategy::S4);
      for (std::size_t l = 0; l < spectra.size(); ++l) hits[t][l * mags + m] = verdict.per_level[l].flagged;
      quorum[t][m] = verdict.flagged;
    }
  });

  AnomalySweep out;
  out.magnitudes = magnitudes;
  out.trials = cfg.trials;
  out.levels = levels;
  out.level_hits.assign(levels, std::vector<std::size_t>(mags, 0));
  out.s4.assign(mags, 0);
  for (std::size_t t = 0; t < cfg.trials; ++t)
    for (std::size_t m = 0; m < mags; ++m) {
      for (std::size_t l = 0; l < levels; ++l) out.level_hits[l][m] += static_cast<std::size_t>(hits[t][l * mags + m]);
      out.s4[m] += static_cast<std::size_t>(quorum[t][m]);
    }
  out.s1 = out.level_hits.front();
  out.s2.assign(mags, 0);
  for (std::size_t m = 0; m < mags; ++m)
    for (std::size_t l = 0; l < levels; ++l) out.s2[m] = std::max(out.s2[m], out.level_hits[l][m]);
  std::size_t best = 0;
  for (std::size_t l = 0; l < levels; ++l) {
    std::size_t total = 0;
    for (std::size_t m = 0; m < mags; ++m) total += out.level_hits[l][m];
    if (l == 0 || total > best) {
      best = total;
      out.s3_level = l;
    }
  }
  out.s3 = out.level_hits[out.s3_level];
  return out;
}

// ---------------------------------------------------------------------------
// Label correction

struct DenoiseSweep {
  std::vector<double> snrs;
  std::size_t trials = 0;
  std::size_t levels = 0;
  std::vector<std::vector<double>> mean_errors;    // [snr][level]
  std::vector<std::vector<double>> best_fraction;  // [snr][level], ties share credit
  std::vector<std::vector<std::size_t>> improved;  // [snr][level]: trials beating the noisy input
  std::vector<std::vector<std::size_t>> improved_rounded;  // same, against the rounded noisy input
  std::vector<double> mean_noisy_errors;           // [snr]
  std::vector<double> mean_rounded_errors;         // [snr]
};

/// Two-cluster graph with cluster-id labels; noise_fraction of the labels get
/// Gaussian noise at each SNR and every level of the family denoises them.
inline DenoiseSweep denoise_experiment(const ExperimentConfig& cfg, const std::vector<double>& snrs,
                                       const SyntheticScale& scale = {}, std::size_t bridges = 5) {
  cfg.validate();
  const std::size_t levels = cfg.p + 1;
  const std::size_t ns = snrs.size();
  struct Trial {
    std::vector<std::size_t> errors;  // [snr * levels + level]
    std::vector<std::size_t> noisy, rounded;
  };
  std::vector<Trial> trials(cfg.trials);

  parallel_for(cfg.trials, [&](std::size_t t) {
    const auto lg = synthetic::two_cluster_graph(scale.n, scale.knn, bridges, derive_seed(cfg.seed, "graph", t));
    FamilyOptions opt;
    opt.p = cfg.p;
    opt.bands = cfg.bands;
    opt.seed = derive_seed(cfg.seed, "family", t);
    const std::vector<Spectrum> spectra = family_spectra(build_family(lg.graph, opt));
    Trial& out = trials[t];
    out.errors.assign(ns * levels, 0);
    for (std::size_t k = 0; k < ns; ++k) {
      const Signal noisy = inject_label_noise(lg.labels, cfg.noise_fraction, snrs[k], derive_seed(cfg.seed, "noise", t * ns + k));
      out.noisy.push_back(label_errors(noisy, lg.labels));
      const Eigen::VectorXd rounded = noisy.array().round().max(1.0).min(2.0).matrix();
      out.rounded.push_back(label_errors(rounded, lg.labels));
      for (std::size_t l = 0; l < levels; ++l) {
        const std::vector<int> fixed = denoise_labels(spectra[l], noisy, cfg.r, cfg.s, 2);
        out.errors[k * levels + l] = label_errors(fixed, lg.labels);
      }
    }
  });

  DenoiseSweep out;
  out.snrs = snrs;
  out.trials = cfg.trials;
  out.levels = levels;
  out.mean_errors.assign(ns, std::vector<double>(levels, 0.0));
  out.best_fraction.assign(ns, std::vector<double>(levels, 0.0));
  out.improved.assign(ns, std::vector<std::size_t>(levels, 0));
  out.improved_rounded.assign(ns, std::vector<std::size_t>(levels, 0));
  out.mean_noisy_errors.assign(ns, 0.0);
  out.mean_rounded_errors.assign(ns, 0.0);
  const double inv = cfg.trials ? 1.0 / static_cast<double>(cfg.trials) : 0.0;
  for (const Trial& tr : trials)
    for (std::size_t k = 0; k < ns; ++k) {
      out.mean_noisy_errors[k] += static_cast<double>(tr.noisy[k]) * inv;
      out.mean_rounded_errors[k] += static_cast<double>(tr.rounded[k]) * inv;
      std::size_t best = std::numeric_limits<std::size_t>::max(), ties = 0;
      for (std::size_t l = 0; l < levels; ++l) {
        const std::size_t e = tr.errors[k * levels + l];
        out.mean_errors[k][l] += static_cast<double>(e) * inv;
        out.improved[k][l] += e < tr.noisy[k] ? 1 : 0;
        out.improved_rounded[k][l] += e < tr.rounded[k] ? 1 : 0;
        if (e < best) {
          best = e;
          ties = 1;
        } else if (e == best) {
          ++ties;
        }
      }
      for (std::size_t l = 0; l < levels; ++l)
        if (tr.errors[k * levels + l] == best) out.best_fraction[k][l] += inv / static_cast<double>(ties);
    }
  return out;
}

}  // namespace simplexsp
