#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "simplexsp/complex.hpp"
#include "simplexsp/diagnostics.hpp"
#include "simplexsp/error.hpp"
#include "simplexsp/experiments.hpp"
#include "simplexsp/io.hpp"
#include "simplexsp/laplacian.hpp"
#include "simplexsp/spectral.hpp"
#include "simplexsp/structure_learning.hpp"
#include "simplexsp/tasks.hpp"

namespace fs = std::filesystem;
using namespace simplexsp;
using io::Json;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  bool invert_similarity = false;
  std::string manifest;
};

// Everything an experiment config file may set.
struct Settings {
  ExperimentConfig cfg;
  SyntheticScale scale;
  std::vector<double> magnitudes{10, 20, 30, 40, 50};
  std::vector<double> snrs{2, 1, 0, -1, -2};
  Json resolved = Json::object();
};

template <class T>
T json_get(const Json& j, const std::string& key, const std::string& path) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(path + ": config key '" + key + "' has the wrong type");
  }
}

Settings load_settings(const std::string& path, std::size_t default_p, const Common& common) {
  Settings s;
  s.cfg.p = default_p;
  if (!path.empty()) {
    const Json j = io::parse_json(io::read_file(path), path);
    if (!j.is_object()) throw ValidationError(path + ": config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "r1") s.cfg.r1 = json_get<double>(j, key, path);
      else if (key == "r2") s.cfg.r2 = json_get<double>(j, key, path);
      else if (key == "r") s.cfg.r = json_get<double>(j, key, path);
      else if (key == "epsilon") s.cfg.epsilon = json_get<double>(j, key, path);
      else if (key == "s") s.cfg.s = json_get<double>(j, key, path);
      else if (key == "p") s.cfg.p = json_get<std::size_t>(j, key, path);
      else if (key == "bands") s.cfg.bands = json_get<std::size_t>(j, key, path);
      else if (key == "snr_db") s.cfg.snr_db = json_get<double>(j, key, path);
      else if (key == "noise_fraction") s.cfg.noise_fraction = json_get<double>(j, key, path);
      else if (key == "seed") s.cfg.seed = json_get<std::uint64_t>(j, key, path);
      else if (key == "trials") s.cfg.trials = json_get<std::size_t>(j, key, path);
      else if (key == "n") s.scale.n = json_get<std::size_t>(j, key, path);
      else if (key == "knn") s.scale.knn = json_get<std::size_t>(j, key, path);
      else if (key == "signals") s.scale.signals = json_get<std::size_t>(j, key, path);
      else if (key == "magnitudes") s.magnitudes = json_get<std::vector<double>>(j, key, path);
      else if (key == "snrs") s.snrs = json_get<std::vector<double>>(j, key, path);
      else throw ValidationError(path + ": unknown config key '" + key + "'");
    }
  }
  if (common.seed) s.cfg.seed = *common.seed;
  s.cfg.validate();
  if (s.scale.n < 4) throw ValidationError("config: n must be >= 4");
  if (s.scale.knn < 1 || s.scale.knn >= s.scale.n) throw ValidationError("config: knn must lie in [1, n)");
  if (s.scale.signals < 1) throw ValidationError("config: signals must be >= 1");

  Json& r = s.resolved;
  r["r1"] = s.cfg.r1;
  r["r2"] = s.cfg.r2;
  r["r"] = s.cfg.r;
  r["epsilon"] = s.cfg.epsilon;
  r["s"] = s.cfg.s;
  r["p"] = s.cfg.p;
  r["bands"] = s.cfg.bands;
  r["snr_db"] = s.cfg.snr_db;
  r["noise_fraction"] = s.cfg.noise_fraction;
  r["seed"] = s.cfg.seed;
  r["trials"] = s.cfg.trials;
  r["n"] = s.scale.n;
  r["knn"] = s.scale.knn;
  r["signals"] = s.scale.signals;
  r["magnitudes"] = s.magnitudes;
  r["snrs"] = s.snrs;
  return s;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const auto v = io::to_double(text.substr(start, comma - start));
    if (!v) throw ValidationError(std::string(what) + ": cannot parse '" + text + "' as a comma separated list of numbers");
    out.push_back(*v);
    if (comma == text.size()) break;
    start = comma + 1;
  }
  return out;
}

std::pair<std::size_t, std::size_t> parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("--band expects lo:hi");
  const auto lo = io::to_id(text.substr(0, colon));
  const auto hi = io::to_id(text.substr(colon + 1));
  if (!lo || !hi || *lo < 1 || *hi < *lo) throw ValidationError("--band expects 1 <= lo <= hi, got '" + text + "'");
  return {static_cast<std::size_t>(*lo), static_cast<std::size_t>(*hi)};
}

FamilyOptions family_options(std::size_t p, std::size_t bands, std::uint64_t seed, const std::string& mode) {
  if (p < 1) throw ValidationError("--p must be >= 1");
  if (bands < 1) throw ValidationError("--bands must be >= 1");
  FamilyOptions opt;
  opt.p = p;
  opt.bands = bands;
  opt.seed = seed;
  if (mode == "closed") opt.mode = CandidateMode::closed;
  else if (mode == "all") opt.mode = CandidateMode::all;
  else throw ValidationError("--mode must be 'closed' or 'all'");
  return opt;
}

std::string manifest_path(const Common& c, const std::string& out, bool out_is_dir) {
  if (!c.manifest.empty()) return c.manifest;
  return out_is_dir ? (fs::path(out) / "manifest.json").string() : out + ".manifest.json";
}

void emit(io::RunManifest& m, const std::string& path, const std::string& content) {
  io::write_file(path, content);
  m.outputs.push_back(path);
}

void finish(io::RunManifest& m, const std::string& path) {
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
  io::write_file(path, m.to_json().dump(2) + "\n");
}

std::string level_header(std::size_t levels, const char* first) {
  std::string h = first;
  for (std::size_t l = 0; l < levels; ++l) h += ",L_X" + std::to_string(l);
  return h + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal processing on weighted simplicial complexes"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed_value = 7;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_value, "Root seed for all randomness");
    sub->add_flag("--invert-similarity", common.invert_similarity, "Treat edge weights as similarities (w -> 1/w)");
    sub->add_option("--manifest", common.manifest, "Run manifest path");
  };

  std::string complex_path, laplacian_path, out_path, format = "auto", vectors_path, signals_path, band, poly,
              graph_path, mode = "closed", config_path, sample, magnitudes, snrs, x1_path, x2_path;
  std::size_t p = 20, bands = 20, degree = 3, t_grid = 21;
  double r1 = 0.3;

  auto* lap = app.add_subcommand("laplacian", "Generalized Laplacian of a complex");
  lap->add_option("--complex", complex_path, "Complex (JSON) or edge list (CSV)")->required();
  lap->add_option("--out", out_path, "Output matrix (CSV, or JSON envelope)")->required();
  lap->add_option("--format", format, "csv | json | auto (by extension)");
  add_common(lap);

  auto* spec = app.add_subcommand("spectrum", "Eigendecomposition of a Laplacian");
  auto* spec_l = spec->add_option("--laplacian", laplacian_path, "Matrix CSV or JSON envelope");
  auto* spec_c = spec->add_option("--complex", complex_path, "Complex to build the Laplacian from");
  spec_l->excludes(spec_c);
  spec->add_option("--out", out_path, "Eigenvalue table (CSV)")->required();
  spec->add_option("--vectors", vectors_path, "Eigenvector matrix (CSV, column i = frequency i)");
  add_common(spec);

  auto* filt = app.add_subcommand("filter", "Bandpass or polynomial filtering of signals");
  auto* filt_l = filt->add_option("--laplacian", laplacian_path, "Matrix CSV or JSON envelope");
  auto* filt_c = filt->add_option("--complex", complex_path, "Complex to build the Laplacian from");
  filt_l->excludes(filt_c);
  filt->add_option("--signals", signals_path, "Signal CSV")->required();
  auto* filt_b = filt->add_option("--band", band, "Frequencies lo:hi (1-based, inclusive)");
  auto* filt_p = filt->add_option("--poly", poly, "Coefficients a1,a2,... of a1 L + a2 L^2 + ...");
  filt_b->excludes(filt_p);
  filt->add_option("--sample", sample, "Vertex ids kept as samples; the band is reconstructed from them");
  filt->add_option("--out", out_path, "Filtered signals (CSV)")->required();
  add_common(filt);

  auto* learn = app.add_subcommand("learn", "Learn a family of 2-complexes from a graph");
  learn->add_option("--graph", graph_path, "Graph (edge CSV or JSON)")->required();
  learn->add_option("--signals", signals_path, "Signals for model selection (CSV)");
  learn->add_option("--p", p, "Number of batches");
  learn->add_option("--bands", bands, "Filtration bands");
  learn->add_option("--r1", r1, "Band fraction for model selection");
  learn->add_option("--mode", mode, "closed | all");
  learn->add_option("--out", out_path, "Output directory")->required();
  add_common(learn);

  auto* comp = app.add_subcommand("compress", "Compression experiment");
  comp->add_option("--config", config_path, "Experiment config (JSON)");
  comp->add_option("--graph", graph_path, "Graph to learn from (with --signals)");
  comp->add_option("--signals", signals_path, "Signals to compress (with --graph)");
  comp->add_option("--out", out_path, "Output directory")->required();
  add_common(comp);

  auto* det = app.add_subcommand("detect", "Anomaly detection sweep");
  det->add_option("--config", config_path, "Experiment config (JSON)");
  det->add_option("--magnitudes", magnitudes, "Perturbation magnitudes, comma separated");
  det->add_option("--out", out_path, "Output directory")->required();
  add_common(det);

  auto* den = app.add_subcommand("denoise", "Noisy label correction sweep");
  den->add_option("--config", config_path, "Experiment config (JSON)");
  den->add_option("--snrs", snrs, "SNR values in dB, comma separated");
  den->add_option("--out", out_path, "Output directory")->required();
  add_common(den);

  auto* diag = app.add_subcommand("diagnose", "Structural and spectral diagnostics of a 2-complex");
  diag->add_option("--complex", complex_path, "Complex (JSON) or edge list (CSV)")->required();
  diag->add_option("--out", out_path, "Report (JSON)")->required();
  add_common(diag);

  auto* fit = app.add_subcommand("fit-filter", "Fit x2 ~ sum_j a_j L^j x1 over the learned family");
  fit->add_option("--graph", graph_path, "Graph (edge CSV or JSON)")->required();
  fit->add_option("--x1", x1_path, "Input signal (CSV, first signal column used)")->required();
  fit->add_option("--x2", x2_path, "Target signal (CSV, first signal column used)")->required();
  fit->add_option("--degree", degree, "Polynomial degree b");
  fit->add_option("--p", p, "Number of batches");
  fit->add_option("--bands", bands, "Filtration bands");
  fit->add_option("--t-grid", t_grid, "Grid points in t");
  fit->add_option("--out", out_path, "Fit result (JSON)")->required();
  add_common(fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  if (sub->count("--seed")) common.seed = seed_value;

  io::RunManifest m;
  m.command = cmd;
  m.seed = seed_value;

  try {
    if (cmd == "laplacian") {
      m.add_input(complex_path);
      const SimplicialComplex x = io::load_complex(complex_path, common.invert_similarity);
      const GeneralizedLaplacian l = complex_laplacian(x);
      if (l.negative_star_weights) m.warnings.push_back("negative star weights: triangle inequality violated, PSD not guaranteed");
      const bool json = format == "json" || (format == "auto" && io::has_extension(out_path, ".json"));
      if (format != "auto" && format != "csv" && format != "json") throw ValidationError("--format must be csv, json or auto");
      emit(m, out_path, json ? io::matrix_envelope(l, x.vertices()).dump(2) + "\n" : io::matrix_csv(l.matrix));
      m.config = Json{{"format", json ? "json" : "csv"}, {"invert_similarity", common.invert_similarity}};
      finish(m, manifest_path(common, out_path, false));

    } else if (cmd == "spectrum") {
      if (laplacian_path.empty() && complex_path.empty()) throw ValidationError("spectrum: give --laplacian or --complex");
      Eigen::MatrixXd l;
      if (!laplacian_path.empty()) {
        m.add_input(laplacian_path);
        l = io::load_matrix(laplacian_path);
      } else {
        m.add_input(complex_path);
        l = complex_laplacian(io::load_complex(complex_path, common.invert_similarity)).matrix;
      }
      const Spectrum s = eigendecompose(l);
      std::vector<int> tie(static_cast<std::size_t>(s.size()), -1);
      for (std::size_t b = 0; b < s.tie_blocks.size(); ++b)
        for (Eigen::Index i = s.tie_blocks[b].first; i < s.tie_blocks[b].second; ++i) tie[static_cast<std::size_t>(i)] = static_cast<int>(b);
      std::string table = "index,eigenvalue,tie_block\n";
      for (Eigen::Index i = 0; i < s.size(); ++i)
        table += std::to_string(i + 1) + "," + io::format_double(s.eigenvalues(i)) + "," +
                 (tie[static_cast<std::size_t>(i)] < 0 ? std::string() : std::to_string(tie[static_cast<std::size_t>(i)])) + "\n";
      emit(m, out_path, table);
      if (!vectors_path.empty()) emit(m, vectors_path, io::matrix_csv(s.eigenvectors));
      if (s.has_ties()) m.warnings.push_back("repeated eigenvalues: eigenvectors inside tie blocks are a canonical but arbitrary basis");
      finish(m, manifest_path(common, out_path, false));

    } else if (cmd == "filter") {
      if (laplacian_path.empty() && complex_path.empty()) throw ValidationError("filter: give --laplacian or --complex");
      if (band.empty() == poly.empty()) throw ValidationError("filter: give exactly one of --band or --poly");
      Eigen::MatrixXd l;
      std::vector<VertexId> ids;
      if (!laplacian_path.empty()) {
        m.add_input(laplacian_path);
        l = io::load_matrix(laplacian_path);
        ids.resize(static_cast<std::size_t>(l.rows()));
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<VertexId>(i);
      } else {
        m.add_input(complex_path);
        const SimplicialComplex x = io::load_complex(complex_path, common.invert_similarity);
        l = complex_laplacian(x).matrix;
        ids = x.vertices();
      }
      m.add_input(signals_path);
      const Eigen::MatrixXd sig = io::load_signals(signals_path, ids);
      Eigen::MatrixXd out(sig.rows(), sig.cols());
      if (!band.empty()) {
        const auto [lo, hi] = parse_band(band);
        const Spectrum s = eigendecompose(l);
        const IndexSet b = band_range(lo, hi);
        for (const auto& [first, last] : s.tie_blocks) {
          const auto a = static_cast<std::size_t>(first) + 1, z = static_cast<std::size_t>(last);
          if ((lo > a && lo <= z) || (hi >= a && hi < z))
            m.warnings.push_back("band " + band + " splits the tie block of frequencies " + std::to_string(a) + ".." + std::to_string(z));
        }
        if (sample.empty()) {
          for (Eigen::Index c = 0; c < sig.cols(); ++c) out.col(c) = bandpass(s, b, sig.col(c));
          m.config = Json{{"band", band}};
        } else {
          std::vector<Index> rows;
          for (double v : parse_list(sample, "--sample")) {
            const auto id = static_cast<VertexId>(v);
            const auto it = std::lower_bound(ids.begin(), ids.end(), id);
            if (static_cast<double>(id) != v || it == ids.end() || *it != id)
              throw ValidationError("--sample: unknown vertex id " + io::format_double(v));
            rows.push_back(static_cast<Index>(it - ids.begin()));
          }
          for (Eigen::Index c = 0; c < sig.cols(); ++c) {
            Eigen::VectorXd values(static_cast<Eigen::Index>(rows.size()));
            for (std::size_t i = 0; i < rows.size(); ++i)
              values(static_cast<Eigen::Index>(i)) = sig(static_cast<Eigen::Index>(rows[i]), c);
            out.col(c) = downsample_reconstruct(s, b, rows, values).signal;
          }
          m.config = Json{{"band", band}, {"sample", sample}};
        }
      } else {
        if (!sample.empty()) throw ValidationError("filter: --sample needs --band");
        const std::vector<double> coeffs = parse_list(poly, "--poly");
        for (Eigen::Index c = 0; c < sig.cols(); ++c) out.col(c) = poly_filter(l, coeffs, sig.col(c));
        m.config = Json{{"poly", coeffs}};
      }
      emit(m, out_path, io::signals_csv(out, ids));
      finish(m, manifest_path(common, out_path, false));

    } else if (cmd == "learn") {
      m.add_input(graph_path);
      const WeightedGraph g = io::load_graph(graph_path, common.invert_similarity);
      const FamilyOptions opt = family_options(p, bands, seed_value, mode);
      LaplacianFamily fam = build_family(g, opt);
      fam.spectra = family_spectra(fam);
      const fs::path dir(out_path);
      emit(m, (dir / "family.json").string(), io::family_manifest(fam, opt).dump(2) + "\n");
      for (std::size_t l = 0; l < fam.levels(); ++l) {
        char name[32];
        std::snprintf(name, sizeof name, "L_X%02zu.csv", l);
        emit(m, (dir / "laplacians" / name).string(), io::matrix_csv(fam.laplacians[l].matrix));
      }
      emit(m, (dir / "spectra.csv").string(), io::spectra_csv(fam.spectra));
      Json summary{{"levels", fam.levels()}, {"triangles", fam.queue.entries.size()}};
      if (!signals_path.empty()) {
        m.add_input(signals_path);
        const Eigen::MatrixXd sig = io::load_signals(signals_path, g.vertices());
        const ModelSelection sel = select_model(fam, sig, r1);
        std::string table = "level,residual,selected\n";
        for (std::size_t l = 0; l < sel.errors.size(); ++l)
          table += std::to_string(l) + "," + io::format_double(sel.errors[l]) + "," + (l == sel.index ? "1" : "0") + "\n";
        emit(m, (dir / "residuals.csv").string(), table);
        summary["selected"] = sel.index;
        summary["selected_residual"] = sel.errors[sel.index];
      }
      emit(m, (dir / "summary.json").string(), summary.dump(2) + "\n");
      m.config = Json{{"p", p}, {"bands", bands}, {"r1", r1}, {"mode", mode}, {"invert_similarity", common.invert_similarity}};
      finish(m, manifest_path(common, out_path, true));

    } else if (cmd == "compress") {
      if (!config_path.empty()) m.add_input(config_path);
      const Settings st = load_settings(config_path, 20, common);
      m.seed = st.cfg.seed;
      m.config = st.resolved;
      const fs::path dir(out_path);
      if (graph_path.empty() != signals_path.empty()) throw ValidationError("compress: --graph and --signals go together");
      if (!graph_path.empty()) {
        m.add_input(graph_path);
        m.add_input(signals_path);
        const WeightedGraph g = io::load_graph(graph_path, common.invert_similarity);
        const Eigen::MatrixXd sig = io::load_signals(signals_path, g.vertices());
        LaplacianFamily fam = build_family(g, family_options(st.cfg.p, st.cfg.bands, st.cfg.seed, "closed"));
        fam.spectra = family_spectra(fam);
        const ModelSelection sel = select_model(fam, sig, st.cfg.r1);
        std::string table = "level,selection_residual,compression_error\n";
        for (std::size_t l = 0; l < fam.levels(); ++l)
          table += std::to_string(l) + "," + io::format_double(sel.errors[l]) + "," +
                   io::format_double(compression_error(fam.spectra[l], sig, st.cfg.r2)) + "\n";
        emit(m, (dir / "levels.csv").string(), table);
        const double e0 = compression_error(fam.spectra[0], sig, st.cfg.r2);
        const double eb = compression_error(fam.spectra[sel.index], sig, st.cfg.r2);
        emit(m, (dir / "summary.json").string(),
             Json{{"selected", sel.index}, {"level0_error", e0}, {"selected_error", eb}, {"reduction", e0 > 0 ? 1 - eb / e0 : 0.0}}.dump(2) + "\n");
      } else {
        const auto trials = compression_experiment(st.cfg, st.scale);
        std::string per_trial = "trial,selected,truth_triangles,level0_error,selected_error\n";
        std::string per_level = level_header(st.cfg.p + 1, "trial");
        std::size_t wins = 0;
        double gain = 0.0;
        for (std::size_t t = 0; t < trials.size(); ++t) {
          const auto& tr = trials[t];
          per_trial += std::to_string(t) + "," + std::to_string(tr.selected) + "," + std::to_string(tr.truth_triangles) + "," +
                       io::format_double(tr.level0_error) + "," + io::format_double(tr.selected_error) + "\n";
          per_level += std::to_string(t);
          for (double e : tr.errors) per_level += "," + io::format_double(e);
          per_level += "\n";
          wins += tr.selected_error < tr.level0_error ? 1 : 0;
          gain += tr.level0_error > 0 ? 1 - tr.selected_error / tr.level0_error : 0.0;
        }
        emit(m, (dir / "trials.csv").string(), per_trial);
        emit(m, (dir / "errors.csv").string(), per_level);
        emit(m, (dir / "summary.json").string(),
             Json{{"trials", trials.size()}, {"wins", wins}, {"mean_reduction", trials.empty() ? 0.0 : gain / static_cast<double>(trials.size())}}.dump(2) + "\n");
      }
      finish(m, manifest_path(common, out_path, true));

    } else if (cmd == "detect") {
      if (!config_path.empty()) m.add_input(config_path);
      Settings st = load_settings(config_path, 20, common);
      if (!magnitudes.empty()) st.magnitudes = parse_list(magnitudes, "--magnitudes");
      st.resolved["magnitudes"] = st.magnitudes;
      m.seed = st.cfg.seed;
      m.config = st.resolved;
      const AnomalySweep sw = anomaly_experiment(st.cfg, st.magnitudes, st.scale);
      const fs::path dir(out_path);
      std::string rates = "magnitude,strategy,rate\n";
      const std::pair<const char*, const std::vector<std::size_t>*> strategies[] = {
          {"S1", &sw.s1}, {"S2", &sw.s2}, {"S3", &sw.s3}, {"S4", &sw.s4}};
      for (std::size_t k = 0; k < sw.magnitudes.size(); ++k)
        for (const auto& [name, hits] : strategies)
          rates += io::format_double(sw.magnitudes[k]) + "," + name + "," + io::format_double(100.0 * sw.rate(*hits, k)) + "\n";
      emit(m, (dir / "rates.csv").string(), rates);
      std::string levels = level_header(sw.levels, "magnitude");
      for (std::size_t k = 0; k < sw.magnitudes.size(); ++k) {
        levels += io::format_double(sw.magnitudes[k]);
        for (std::size_t l = 0; l < sw.levels; ++l) levels += "," + io::format_double(100.0 * sw.rate(sw.level_hits[l], k));
        levels += "\n";
      }
      emit(m, (dir / "levels.csv").string(), levels);
      emit(m, (dir / "summary.json").string(),
           Json{{"trials", sw.trials}, {"s3_level", sw.s3_level}, {"s4_quorum", s4_quorum(sw.levels)}}.dump(2) + "\n");
      finish(m, manifest_path(common, out_path, true));

    } else if (cmd == "denoise") {
      if (!config_path.empty()) m.add_input(config_path);
      Settings st = load_settings(config_path, 10, common);
      if (!snrs.empty()) st.snrs = parse_list(snrs, "--snrs");
      st.resolved["snrs"] = st.snrs;
      m.seed = st.cfg.seed;
      m.config = st.resolved;
      const DenoiseSweep sw = denoise_experiment(st.cfg, st.snrs, st.scale);
      const fs::path dir(out_path);
      std::string errors = level_header(sw.levels, "snr,noisy,rounded_noisy");
      std::string best = level_header(sw.levels, "snr");
      for (std::size_t k = 0; k < sw.snrs.size(); ++k) {
        errors += io::format_double(sw.snrs[k]) + "," + io::format_double(sw.mean_noisy_errors[k]) + "," +
                  io::format_double(sw.mean_rounded_errors[k]);
        best += io::format_double(sw.snrs[k]);
        for (std::size_t l = 0; l < sw.levels; ++l) {
          errors += "," + io::format_double(sw.mean_errors[k][l]);
          best += "," + io::format_double(sw.best_fraction[k][l]);
        }
        errors += "\n";
        best += "\n";
      }
      emit(m, (dir / "errors.csv").string(), errors);
      emit(m, (dir / "best_level.csv").string(), best);
      Json rows = Json::array();
      for (std::size_t k = 0; k < sw.snrs.size(); ++k) rows.push_back(Json{{"snr", sw.snrs[k]}, {"best_fraction", sw.best_fraction[k]}});
      emit(m, (dir / "summary.json").string(), Json{{"trials", sw.trials}, {"rows", rows}}.dump(2) + "\n");
      finish(m, manifest_path(common, out_path, true));

    } else if (cmd == "diagnose") {
      m.add_input(complex_path);
      const SimplicialComplex x = io::load_complex(complex_path, common.invert_similarity);
      const DiagnosticsReport r = diagnose(x, seed_value);
      emit(m, out_path, io::diagnostics_json(r, x.vertices()).dump(2) + "\n");
      finish(m, manifest_path(common, out_path, false));

    } else if (cmd == "fit-filter") {
      m.add_input(graph_path);
      m.add_input(x1_path);
      m.add_input(x2_path);
      const WeightedGraph g = io::load_graph(graph_path, common.invert_similarity);
      const Eigen::MatrixXd x1 = io::load_signals(x1_path, g.vertices());
      const Eigen::MatrixXd x2 = io::load_signals(x2_path, g.vertices());
      if (degree < 1) throw ValidationError("--degree must be >= 1");
      const LaplacianFamily fam = build_family(g, family_options(p, bands, seed_value, "closed"));
      const FilterFit f = fit_continuous_filter(fam, x1.col(0), x2.col(0), degree, t_grid);
      emit(m, out_path,
           Json{{"interval", f.interval}, {"t", f.t}, {"coefficients", f.coeffs}, {"residual", f.residual}}.dump(2) + "\n");
      m.config = Json{{"degree", degree}, {"p", p}, {"bands", bands}, {"t_grid", t_grid}};
      finish(m, manifest_path(common, out_path, false));
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
