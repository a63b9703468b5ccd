#pragma once

// File formats: edge-list CSV, JSON complexes, point clouds, signal and
// matrix CSV, JSON matrix envelopes, family manifests and run manifests.

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "simplexsp/complex.hpp"
#include "simplexsp/diagnostics.hpp"
#include "simplexsp/error.hpp"
#include "simplexsp/laplacian.hpp"
#include "simplexsp/rng.hpp"
#include "simplexsp/spectral.hpp"
#include "simplexsp/structure_learning.hpp"

namespace simplexsp::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";

/// A validation error pinned to a position in an input file (1-based).
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& path, std::size_t line, std::size_t column, const std::string& what)
      : ValidationError(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
  if (!out) throw ValidationError("write failed for " + path);
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Shortest text that round-trips the double.
inline std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// ---------------------------------------------------------------------------
// CSV

struct CsvField {
  std::string text;
  std::size_t column;  // 1-based character column of the field start
};

struct CsvRow {
  std::size_t line;
  std::vector<CsvField> fields;
};

/// Comma separated rows; blank lines and lines starting with '#' skipped,
/// fields trimmed.
inline std::vector<CsvRow> read_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t line = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const auto first = raw.find_first_not_of(" \t");
    if (first != std::string_view::npos && raw[first] != '#') {
      CsvRow row{line, {}};
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = std::min(raw.find(',', start), raw.size());
        std::string_view f = raw.substr(start, comma - start);
        std::size_t lead = 0;
        while (lead < f.size() && std::isspace(static_cast<unsigned char>(f[lead]))) ++lead;
        f.remove_prefix(lead);
        while (!f.empty() && std::isspace(static_cast<unsigned char>(f.back()))) f.remove_suffix(1);
        row.fields.push_back({std::string(f), start + lead + 1});
        if (comma >= raw.size()) break;
        start = comma + 1;
      }
      rows.push_back(std::move(row));
    }
    if (end >= text.size()) break;
    pos = end + 1;
  }
  return rows;
}

inline std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* b = s.data();
  if (*b == '+') ++b;
  const auto r = std::from_chars(b, s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<VertexId> to_id(const std::string& s) {
  VertexId v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline bool numeric_row(const CsvRow& row) {
  return std::all_of(row.fields.begin(), row.fields.end(), [](const CsvField& f) { return to_double(f.text).has_value(); });
}

inline double field_double(const std::string& path, const CsvRow& row, std::size_t i) {
  const auto v = to_double(row.fields[i].text);
  if (!v) throw ParseError(path, row.line, row.fields[i].column, "expected a number, got '" + row.fields[i].text + "'");
  return *v;
}

inline VertexId field_id(const std::string& path, const CsvRow& row, std::size_t i) {
  const auto v = to_id(row.fields[i].text);
  if (!v) throw ParseError(path, row.line, row.fields[i].column, "expected an integer vertex id, got '" + row.fields[i].text + "'");
  return *v;
}

/// Edge list `u,v[,w]` with an optional header row. With invert_similarity
/// each weight w becomes 1/w.
inline SimplicialComplex parse_edge_csv(std::string_view text, const std::string& path = "<edges>",
                                        bool invert_similarity = false) {
  auto rows = read_csv(text);
  if (!rows.empty() && !numeric_row(rows.front())) rows.erase(rows.begin());
  std::vector<EdgeSpec> edges;
  for (const auto& row : rows) {
    if (row.fields.size() < 2 || row.fields.size() > 3)
      throw ParseError(path, row.line, 1, "expected 'u,v' or 'u,v,w', got " + std::to_string(row.fields.size()) + " fields");
    EdgeSpec e{field_id(path, row, 0), field_id(path, row, 1), std::nullopt};
    if (row.fields.size() == 3) {
      double w = field_double(path, row, 2);
      if (!(w > 0) || !std::isfinite(w))
        throw ParseError(path, row.line, row.fields[2].column, "edge weight must be positive and finite");
      e.weight = invert_similarity ? 1.0 / w : w;
    }
    if (e.u == e.v) throw ParseError(path, row.line, row.fields[0].column, "self-loop at vertex " + std::to_string(e.u));
    edges.push_back(e);
  }
  try {
    return from_edge_list(edges);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

/// Point cloud: one point per row, all rows the same dimension.
inline std::vector<std::vector<double>> parse_points_csv(std::string_view text, const std::string& path = "<points>") {
  auto rows = read_csv(text);
  if (!rows.empty() && !numeric_row(rows.front())) rows.erase(rows.begin());
  std::vector<std::vector<double>> pts;
  for (const auto& row : rows) {
    if (!pts.empty() && row.fields.size() != pts.front().size())
      throw ParseError(path, row.line, 1, "ragged point row: expected " + std::to_string(pts.front().size()) + " coordinates");
    std::vector<double> p;
    for (std::size_t i = 0; i < row.fields.size(); ++i) p.push_back(field_double(path, row, i));
    pts.push_back(std::move(p));
  }
  if (pts.empty()) throw ValidationError(path + ": no points");
  return pts;
}

/// Signals: one row per vertex, one column per signal. A non-numeric first
/// row is a header; when its first cell is `vertex`, `id` or `node` the first
/// column carries vertex ids, which are matched against `vertices`.
/// Otherwise rows follow the sorted vertex order.
inline Eigen::MatrixXd parse_signal_csv(std::string_view text, const std::vector<VertexId>& vertices,
                                        const std::string& path = "<signals>") {
  auto rows = read_csv(text);
  bool id_column = false;
  if (!rows.empty() && !numeric_row(rows.front())) {
    std::string first = rows.front().fields.front().text;
    std::transform(first.begin(), first.end(), first.begin(), [](unsigned char c) { return std::tolower(c); });
    id_column = first == "vertex" || first == "id" || first == "node";
    rows.erase(rows.begin());
  }
  if (rows.empty()) throw ValidationError(path + ": empty signal set");
  const std::size_t width = rows.front().fields.size();
  const std::size_t cols = width - (id_column ? 1 : 0);
  if (cols == 0) throw ParseError(path, rows.front().line, 1, "no signal columns");
  const auto n = static_cast<Eigen::Index>(vertices.size());
  if (rows.size() != vertices.size())
    throw ValidationError(path + ": " + std::to_string(rows.size()) + " signal rows for " +
                          std::to_string(vertices.size()) + " vertices");
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(cols));
  std::vector<char> seen(vertices.size(), 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != width)
      throw ParseError(path, row.line, 1, "ragged signal row: expected " + std::to_string(width) + " fields, got " +
                                              std::to_string(row.fields.size()));
    Eigen::Index target = static_cast<Eigen::Index>(r);
    if (id_column) {
      const VertexId id = field_id(path, row, 0);
      const auto it = std::lower_bound(vertices.begin(), vertices.end(), id);
      if (it == vertices.end() || *it != id)
        throw ParseError(path, row.line, row.fields[0].column, "unknown vertex id " + std::to_string(id));
      target = it - vertices.begin();
      if (seen[static_cast<std::size_t>(target)]++)
        throw ParseError(path, row.line, row.fields[0].column, "duplicate vertex id " + std::to_string(id));
    }
    for (std::size_t c = 0; c < cols; ++c)
      out(target, static_cast<Eigen::Index>(c)) = field_double(path, row, c + (id_column ? 1 : 0));
  }
  return out;
}

/// Dense matrix, one row per line, no header.
inline Eigen::MatrixXd parse_matrix_csv(std::string_view text, const std::string& path = "<matrix>") {
  const auto rows = read_csv(text);
  if (rows.empty()) throw ValidationError(path + ": empty matrix");
  const std::size_t width = rows.front().fields.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].fields.size() != width)
      throw ParseError(path, rows[r].line, 1, "ragged matrix row: expected " + std::to_string(width) + " fields");
    for (std::size_t c = 0; c < width; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = field_double(path, rows[r], c);
  }
  return m;
}

// ---------------------------------------------------------------------------
// JSON

inline Json parse_json(std::string_view text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(path, line, col, "invalid JSON: " + msg);
  }
}

namespace detail {

inline VertexId json_id(const Json& v, const std::string& path, const std::string& where) {
  if (!v.is_number_integer()) throw ValidationError(path + ": " + where + ": vertex ids must be integers");
  return v.get<VertexId>();
}

}  // namespace detail

/// {"vertices": [...], "edges": [[u, v] | [u, v, w], ...], "simplices": [[...], ...]}.
/// Vertices are optional (edges and simplices imply them).
inline SimplicialComplex complex_from_json(const Json& j, const std::string& path = "<complex>",
                                           bool invert_similarity = false) {
  if (!j.is_object()) throw ValidationError(path + ": complex must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "vertices" && key != "edges" && key != "simplices")
      throw ValidationError(path + ": unknown key '" + key + "'");
  std::vector<VertexId> ids;
  if (j.contains("vertices")) {
    if (!j["vertices"].is_array()) throw ValidationError(path + ": 'vertices' must be an array");
    for (const auto& v : j["vertices"]) ids.push_back(detail::json_id(v, path, "vertices"));
  }
  std::vector<EdgeSpec> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw ValidationError(path + ": 'edges' must be an array");
    std::size_t i = 0;
    for (const auto& e : j["edges"]) {
      const std::string where = "edges[" + std::to_string(i++) + "]";
      if (!e.is_array() || e.size() < 2 || e.size() > 3)
        throw ValidationError(path + ": " + where + ": expected [u, v] or [u, v, w]");
      EdgeSpec s{detail::json_id(e[0], path, where), detail::json_id(e[1], path, where), std::nullopt};
      if (e.size() == 3) {
        if (!e[2].is_number()) throw ValidationError(path + ": " + where + ": weight must be a number");
        const double w = e[2].get<double>();
        if (!(w > 0) || !std::isfinite(w)) throw ValidationError(path + ": " + where + ": weight must be positive and finite");
        s.weight = invert_similarity ? 1.0 / w : w;
      }
      edges.push_back(s);
    }
  }
  std::vector<std::vector<VertexId>> raw;
  if (j.contains("simplices")) {
    if (!j["simplices"].is_array()) throw ValidationError(path + ": 'simplices' must be an array");
    std::size_t i = 0;
    for (const auto& s : j["simplices"]) {
      const std::string where = "simplices[" + std::to_string(i++) + "]";
      if (!s.is_array()) throw ValidationError(path + ": " + where + ": expected an array of vertex ids");
      std::vector<VertexId> t;
      for (const auto& v : s) t.push_back(detail::json_id(v, path, where));
      for (VertexId v : t) ids.push_back(v);
      raw.push_back(std::move(t));
    }
  }
  try {
    const SimplicialComplex base = from_edge_list(edges, ids);
    std::vector<Simplex> simplices;
    for (const auto& t : raw) {
      Simplex s;
      for (VertexId v : t) s.push_back(*base.graph().index_of(v));
      if (s.size() == 2) {
        if (!base.graph().has_edge(s[0], s[1]))
          throw ValidationError("face closure violated: 1-simplex " + simplexsp::detail::id_pair(t[0], t[1]) +
                                " is not listed as an edge");
        continue;
      }
      if (s.size() < 2) continue;
      simplices.push_back(std::move(s));
    }
    return SimplicialComplex(base.graph(), std::move(simplices));
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline Json complex_to_json(const SimplicialComplex& x) {
  const auto& ids = x.vertices();
  Json j;
  j["vertices"] = ids;
  Json edges = Json::array();
  for (const auto& [key, w] : x.edges()) edges.push_back(Json::array({ids[key.first], ids[key.second], w}));
  j["edges"] = std::move(edges);
  Json simplices = Json::array();
  for (const auto& s : maximal_simplices(x)) {
    if (s.size() < 3) continue;
    Json t = Json::array();
    for (Index v : s) t.push_back(ids[v]);
    simplices.push_back(std::move(t));
  }
  j["simplices"] = std::move(simplices);
  return j;
}

inline bool has_extension(const std::string& path, std::string_view ext) {
  std::string e = std::filesystem::path(path).extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

/// JSON complex for *.json, edge-list CSV otherwise.
inline SimplicialComplex load_complex(const std::string& path, bool invert_similarity = false) {
  const std::string text = read_file(path);
  if (has_extension(path, ".json")) return complex_from_json(parse_json(text, path), path, invert_similarity);
  return parse_edge_csv(text, path, invert_similarity);
}

inline WeightedGraph load_graph(const std::string& path, bool invert_similarity = false) {
  return load_complex(path, invert_similarity).graph();
}

inline Eigen::MatrixXd load_signals(const std::string& path, const std::vector<VertexId>& vertices) {
  return parse_signal_csv(read_file(path), vertices, path);
}

// ---------------------------------------------------------------------------
// Matrices

inline std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

/// {"n", "vertices", "rows", "provenance"}; provenance lists the maximal
/// simplices (as vertex ids) that contributed blocks.
inline Json matrix_envelope(const GeneralizedLaplacian& l, const std::vector<VertexId>& ids) {
  Json j;
  j["n"] = l.size();
  j["vertices"] = ids;
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < l.matrix.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < l.matrix.cols(); ++c) row.push_back(l.matrix(r, c));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  Json prov = Json::array();
  for (const auto& s : l.provenance) {
    Json t = Json::array();
    for (Index v : s) t.push_back(ids[v]);
    prov.push_back(std::move(t));
  }
  j["provenance"] = std::move(prov);
  j["negative_star_weights"] = l.negative_star_weights;
  return j;
}

/// Square matrix from a JSON envelope (*.json) or a dense CSV.
inline Eigen::MatrixXd load_matrix(const std::string& path) {
  const std::string text = read_file(path);
  if (!has_extension(path, ".json")) return parse_matrix_csv(text, path);
  const Json j = parse_json(text, path);
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
    throw ValidationError(path + ": matrix envelope needs a 'rows' array");
  const auto& rows = j["rows"];
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw ValidationError(path + ": empty matrix");
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m.cols())
      throw ValidationError(path + ": rows[" + std::to_string(r) + "] is ragged");
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ValidationError(path + ": rows[" + std::to_string(r) + "] holds a non-number");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

/// Signals with a `vertex,s1,s2,...` header.
inline std::string signals_csv(const Eigen::MatrixXd& s, const std::vector<VertexId>& ids) {
  std::string out = "vertex";
  for (Eigen::Index c = 0; c < s.cols(); ++c) out += ",s" + std::to_string(c + 1);
  out += '\n';
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    out += std::to_string(ids[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < s.cols(); ++c) out += "," + format_double(s(r, c));
    out += '\n';
  }
  return out;
}

inline std::string edge_csv(const WeightedGraph& g) {
  std::string out = "u,v,w\n";
  const auto& ids = g.vertices();
  for (const auto& [key, w] : g.edges())
    out += std::to_string(ids[key.first]) + "," + std::to_string(ids[key.second]) + "," + format_double(w) + "\n";
  return out;
}

/// One row per level, sorted eigenvalues across: the spectrum drift table.
inline std::string spectra_csv(const std::vector<Spectrum>& spectra) {
  std::string out = "level";
  const Eigen::Index n = spectra.empty() ? 0 : spectra.front().size();
  for (Eigen::Index i = 1; i <= n; ++i) out += ",lambda" + std::to_string(i);
  out += '\n';
  for (std::size_t l = 0; l < spectra.size(); ++l) {
    out += std::to_string(l);
    for (Eigen::Index i = 0; i < n; ++i) out += "," + format_double(spectra[l].eigenvalues(i));
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifests

inline std::uint64_t matrix_digest(const Eigen::MatrixXd& m) { return fnv1a(matrix_csv(m)); }

inline const char* to_string(CandidateMode m) { return m == CandidateMode::closed ? "closed" : "all"; }

/// Everything that identifies a learned family; no timing, so identical
/// inputs give identical bytes.
inline Json family_manifest(const LaplacianFamily& fam, const FamilyOptions& opt) {
  const auto& ids = fam.complexes.front().vertices();
  auto tri = [&](const Triangle& t) { return Json::array({ids[t[0]], ids[t[1]], ids[t[2]]}); };
  Json j;
  j["n"] = ids.size();
  j["p"] = opt.p;
  j["bands"] = opt.bands;
  j["seed"] = opt.seed;
  j["mode"] = to_string(opt.mode);
  Json bands = Json::array();
  for (const auto& [lo, hi] : fam.queue.bands) bands.push_back(Json::array({lo, hi}));
  j["band_thresholds"] = std::move(bands);
  Json queue = Json::array();
  for (const auto& t : fam.queue.entries) {
    Json e = tri(t);
    e.push_back(fam.queue.band_of.at(t));
    queue.push_back(std::move(e));
  }
  j["queue"] = std::move(queue);
  Json levels = Json::array();
  for (std::size_t l = 0; l < fam.levels(); ++l) {
    Json lv;
    lv["level"] = l;
    lv["triangles"] = fam.complexes[l].triangles().size();
    lv["added"] = l == 0 ? 0 : fam.batches[l - 1].size();
    lv["trace"] = fam.laplacians[l].matrix.trace();
    lv["laplacian_fnv1a64"] = hex64(matrix_digest(fam.laplacians[l].matrix));
    levels.push_back(std::move(lv));
  }
  j["levels"] = std::move(levels);
  return j;
}

inline Json to_json(const InteriorCounts& c) { return Json{{"m1", c.m1}, {"m2", c.m2}, {"m3", c.m3}, {"m4", c.m4}}; }

/// Flat report of all diagnostics fields.
inline Json diagnostics_json(const DiagnosticsReport& r, const std::vector<VertexId>& ids) {
  Json j;
  j["n"] = r.n;
  j["gamma_min"] = r.gamma_min ? Json(*r.gamma_min) : Json(nullptr);
  j["graph_type"] = r.graph_type;
  j["k_min"] = r.k_min;
  j["k_max"] = r.k_max;
  j["m1"] = r.counts.m1;
  j["m2"] = r.counts.m2;
  j["m3"] = r.counts.m3;
  j["m4"] = r.counts.m4;
  j["distinctive"] = to_string(r.distinctive.direction);
  j["trivially_distinctive"] = r.distinctive.trivially_distinctive;
  j["distinctive_witness"] = r.distinctive.witness
                                 ? Json::array({ids[r.distinctive.witness->first], ids[r.distinctive.witness->second]})
                                 : Json(nullptr);
  j["distinctive_witness_value"] = r.distinctive.witness_value;
  j["prop1_no_direct_edge"] = r.certificate.prop1.no_direct_edge;
  j["prop1_single_attachment"] = r.certificate.prop1.single_attachment;
  j["prop1_edge_in_one_triangle"] = r.certificate.prop1.edge_in_one_triangle;
  j["connected"] = r.certificate.connected;
  j["common_eigen_bound"] = r.certificate.common_same_eigen_bound;
  j["theorem_certificate"] = r.certificate.theorem;
  j["literal_condition"] = r.certificate.literal_condition;
  j["commutator"] = r.certificate.commutator;
  if (r.sandwich) {
    j["sandwich_alpha"] = r.sandwich->alpha;
    j["sandwich_beta"] = r.sandwich->beta;
    j["sandwich_claimed_lower"] = r.sandwich->claimed_lower;
    j["sandwich_claimed_upper"] = r.sandwich->claimed_upper;
  } else {
    j["sandwich_alpha"] = nullptr;
    j["sandwich_beta"] = nullptr;
    j["sandwich_claimed_lower"] = nullptr;
    j["sandwich_claimed_upper"] = nullptr;
  }
  j["audit_symmetric"] = r.lemma2.symmetric.pass;
  j["audit_symmetry_residual"] = r.lemma2.symmetric.residual;
  j["audit_psd"] = r.lemma2.positive_semidefinite.pass;
  j["audit_min_eigenvalue"] = r.lemma2.positive_semidefinite.residual;
  j["audit_zero_row_sums"] = r.lemma2.zero_row_sums.pass;
  j["audit_row_sum_residual"] = r.lemma2.zero_row_sums.residual;
  j["audit_kernel_dimension"] = r.lemma2.kernel_dimension.pass;
  j["kernel_dimension"] = static_cast<std::size_t>(r.lemma2.kernel_dimension.residual);
  j["expected_kernel_dimension"] = r.lemma2.expected_kernel;
  j["difference_ratio_samples"] = r.difference_ratio_samples;
  return j;
}

/// Provenance record written once per CLI run.
struct RunManifest {
  std::string command;
  Json config = Json::object();
  std::vector<std::pair<std::string, std::string>> inputs;  // path, fnv1a64 digest
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void add_input(const std::string& path) { inputs.emplace_back(path, hex64(fnv1a(read_file(path)))); }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["tool_version"] = kVersion;
    j["seed"] = seed;
    j["config"] = config;
    Json in = Json::array();
    for (const auto& [path, digest] : inputs) in.push_back(Json{{"path", path}, {"fnv1a64", digest}});
    j["inputs"] = std::move(in);
    j["outputs"] = outputs;
    j["warnings"] = warnings;
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    j["timing_ms"] = ms;
    return j;
  }
};

}  // namespace simplexsp::io
