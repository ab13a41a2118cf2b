#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cxmat.hpp"
#include "epsweep.hpp"
#include "lattice.hpp"
#include "moments.hpp"
#include "reduction.hpp"
#include "dfrft.hpp"

namespace simplexlat {

inline constexpr const char* kSchema = "simplexlat/1";

using json = nlohmann::ordered_json;

// --- scalar formatting ------------------------------------------------------

inline std::string format_double(double x) {
    if (x == 0.0) x = 0.0;  // drop negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// "a+bi" / "a-bi" label form.
inline std::string format_complex(Complex z) {
    double re = z.real(), im = z.imag();
    if (re == 0.0) re = 0.0;
    if (im == 0.0) im = 0.0;
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", re, im);
    return buf;
}

inline std::string format_exponents(const ExponentVector& ev) {
    std::string s;
    for (std::size_t i = 0; i < ev.counts.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(ev.counts[i]);
    }
    return s;
}

// --- JSON helpers -----------------------------------------------------------

inline json complex_to_json(Complex z) {
    return json::array({z.real() == 0.0 ? 0.0 : z.real(), z.imag() == 0.0 ? 0.0 : z.imag()});
}

inline json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json vector_to_json(std::span<const Complex> v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(complex_to_json(z));
    return out;
}

inline json exponents_to_json(const ExponentVector& ev) { return json(ev.counts); }

namespace detail {

inline double json_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(path, "non-finite value");
    return v;
}

/// Entries are [re, im] pairs; a bare number is read as a real value. NaN and
/// Inf arrive as strings ("NaN", "Infinity") or out-of-range literals.
inline Complex json_complex(const json& j, const std::string& path) {
    if (j.is_number()) return {json_number(j, path), 0.0};
    if (j.is_string()) throw ParseError(path, "non-finite or non-numeric value '" + j.get<std::string>() + "'");
    if (!j.is_array() || j.size() != 2) throw ParseError(path, "expected [re, im] pair");
    return {json_number(j[0], path + "[0]"), json_number(j[1], path + "[1]")};
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // message already carries "at line L, column C"
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    } catch (const json::exception& e) {
        throw ParseError("", std::string("unreadable JSON: ") + e.what());
    }
}

inline void check_schema(const json& doc) {
    if (!doc.is_object()) return;
    auto it = doc.find("schema");
    if (it != doc.end() && (!it->is_string() || it->get<std::string>() != kSchema)) {
        throw ParseError("schema", std::string("unsupported schema, expected '") + kSchema + "'");
    }
}

}  // namespace detail

inline CMatrix matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw ParseError(path + "[0]", "expected a non-empty row");
    const std::size_t cols = j[0].size();
    CMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array()) throw ParseError(rp, "expected a row array");
        if (j[r].size() != cols) {
            throw ParseError(rp, "row has " + std::to_string(j[r].size()) + " entries, expected " +
                                     std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = detail::json_complex(j[r][c], rp + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

inline CVector vector_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
    CVector v;
    v.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        v.push_back(detail::json_complex(j[k], path + "[" + std::to_string(k) + "]"));
    }
    return v;
}

/// {"labels": [...], "matrix": [[[re, im], ...], ...]}; "labels" may be omitted.
inline ModeSystem parse_m1_json(const std::string& text) {
    const json doc = detail::parse_text(text);
    if (!doc.is_object()) throw ParseError("", "expected a JSON object");
    detail::check_schema(doc);
    CMatrix m1 = matrix_from_json(detail::require(doc, "matrix", ""), "matrix");
    if (!m1.square()) {
        throw ParseError("matrix", "not square: " + std::to_string(m1.rows()) + "x" +
                                       std::to_string(m1.cols()));
    }
    std::vector<std::string> labels;
    if (auto it = doc.find("labels"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("labels", "expected an array of strings");
        for (std::size_t k = 0; k < it->size(); ++k) {
            if (!(*it)[k].is_string()) throw ParseError("labels[" + std::to_string(k) + "]", "expected a string");
            labels.push_back((*it)[k].get<std::string>());
        }
        if (labels.size() != m1.rows()) {
            throw ParseError("labels", std::to_string(labels.size()) + " labels for a " +
                                           std::to_string(m1.rows()) + "x" + std::to_string(m1.rows()) +
                                           " matrix");
        }
    } else {
        labels = ModeSystem::default_labels(m1.rows());
    }
    return ModeSystem(std::move(m1), std::move(labels));
}

inline std::string mode_system_to_json(const ModeSystem& sys) {
    json doc;
    doc["schema"] = kSchema;
    doc["labels"] = sys.labels();
    doc["matrix"] = matrix_to_json(sys.m1());
    return doc.dump(2) + "\n";
}

// --- reduced systems --------------------------------------------------------

inline std::string reduced_to_json(const ReducedSystem& red, const std::vector<std::string>& labels = {}) {
    json doc;
    doc["schema"] = kSchema;
    doc["kind"] = "reduced_system";
    doc["order"] = red.order;
    doc["dim"] = red.dim;
    doc["mode"] = to_string(red.mode);
    if (!labels.empty()) doc["labels"] = labels;
    json classes = json::array();
    for (const auto& c : red.classes) {
        classes.push_back({{"exponents", exponents_to_json(c.exponents)}, {"degeneracy", c.size}});
    }
    doc["classes"] = std::move(classes);
    doc["meff"] = matrix_to_json(red.meff);
    doc["t"] = matrix_to_json(red.t);
    doc["d"] = vector_to_json(red.d);
    return doc.dump(2) + "\n";
}

inline ReducedSystem reduced_from_json(const std::string& text) {
    const json doc = detail::parse_text(text);
    detail::check_schema(doc);
    const json& kind = detail::require(doc, "kind", "");
    if (kind != "reduced_system") throw ParseError("kind", "expected 'reduced_system'");
    ReducedSystem red;
    red.order = detail::require(doc, "order", "").get<std::size_t>();
    red.dim = detail::require(doc, "dim", "").get<std::size_t>();
    red.mode = parse_reduction_mode(detail::require(doc, "mode", "").get<std::string>());
    red.classes = enumerate_classes(red.dim, red.order);
    const json& classes = detail::require(doc, "classes", "");
    if (!classes.is_array() || classes.size() != red.classes.size()) {
        throw ParseError("classes", "expected " + std::to_string(red.classes.size()) + " classes");
    }
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const std::string p = "classes[" + std::to_string(k) + "]";
        const auto counts = detail::require(classes[k], "exponents", p).get<std::vector<std::uint32_t>>();
        if (counts != red.classes[k].exponents.counts) throw ParseError(p + ".exponents", "class order mismatch");
    }
    red.meff = matrix_from_json(detail::require(doc, "meff", ""), "meff");
    red.t = matrix_from_json(detail::require(doc, "t", ""), "t");
    red.d = vector_from_json(detail::require(doc, "d", ""), "d");
    const std::size_t s = red.classes.size();
    if (red.meff.rows() != s || red.meff.cols() != s || red.t.rows() != s || red.t.cols() != s ||
        red.d.size() != s) {
        throw ParseError("meff", "dimensions do not match the class count " + std::to_string(s));
    }
    return red;
}

// --- lattices ---------------------------------------------------------------

inline std::string export_json(const LatticeGraph& g) {
    json doc;
    doc["schema"] = kSchema;
    doc["kind"] = "lattice";
    doc["order"] = g.order;
    doc["dim"] = g.dim;
    doc["source"] = to_string(g.source);
    json sites = json::array();
    for (const auto& s : g.sites) {
        sites.push_back({{"exponents", exponents_to_json(s.exponents)},
                         {"potential", complex_to_json(s.potential)},
                         {"position", s.position}});
    }
    doc["sites"] = std::move(sites);
    json edges = json::array();
    for (const auto& e : g.edges) {
        edges.push_back({{"from", e.from}, {"to", e.to}, {"weight", complex_to_json(e.weight)}});
    }
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

inline LatticeGraph lattice_from_json(const std::string& text) {
    const json doc = detail::parse_text(text);
    detail::check_schema(doc);
    if (detail::require(doc, "kind", "") != "lattice") throw ParseError("kind", "expected 'lattice'");
    LatticeGraph g;
    g.order = detail::require(doc, "order", "").get<std::size_t>();
    g.dim = detail::require(doc, "dim", "").get<std::size_t>();
    const auto source = detail::require(doc, "source", "").get<std::string>();
    if (source == "reduced") g.source = LatticeSource::reduced;
    else if (source == "hamiltonian") g.source = LatticeSource::hamiltonian;
    else throw ParseError("source", "unknown source '" + source + "'");
    const json& sites = detail::require(doc, "sites", "");
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const std::string p = "sites[" + std::to_string(k) + "]";
        LatticeSite s;
        s.exponents.counts = detail::require(sites[k], "exponents", p).get<std::vector<std::uint32_t>>();
        s.potential = detail::json_complex(detail::require(sites[k], "potential", p), p + ".potential");
        s.position = detail::require(sites[k], "position", p).get<std::vector<double>>();
        g.sites.push_back(std::move(s));
    }
    const json& edges = detail::require(doc, "edges", "");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string p = "edges[" + std::to_string(k) + "]";
        DirectedEdge e;
        e.from = detail::require(edges[k], "from", p).get<std::size_t>();
        e.to = detail::require(edges[k], "to", p).get<std::size_t>();
        e.weight = detail::json_complex(detail::require(edges[k], "weight", p), p + ".weight");
        if (e.from >= g.sites.size() || e.to >= g.sites.size() || e.from == e.to) {
            throw ParseError(p, "invalid endpoints");
        }
        g.edges.push_back(e);
    }
    return g;
}

/// GraphViz digraph; complex weights as "a+bi" labels, barycentric pos hints.
inline std::string export_dot(const LatticeGraph& g) {
    std::ostringstream os;
    os << "digraph simplex_lattice {\n";
    os << "  graph [order=" << g.order << ", source=\"" << to_string(g.source) << "\"];\n";
    os << "  node [shape=circle];\n";
    for (std::size_t i = 0; i < g.sites.size(); ++i) {
        const auto& s = g.sites[i];
        std::vector<double> p = s.position;
        while (p.size() < 2) p.push_back(0.0);
        os << "  n" << i << " [label=\"(" << format_exponents(s.exponents) << ")\\n"
           << format_complex(s.potential) << "\", pos=\"";
        for (std::size_t k = 0; k < p.size(); ++k) os << (k ? "," : "") << format_double(p[k]);
        os << "!\"];\n";
    }
    for (const auto& e : g.edges) {
        os << "  n" << e.from << " -> n" << e.to << " [label=\"" << format_complex(e.weight) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

// --- CSV --------------------------------------------------------------------

inline constexpr const char* kSpectrumCsvHeader = "index,re,im,class_exponents,degeneracy";
inline constexpr const char* kSweepCsvHeader = "epsilon,track_id,re,im";

/// One row per permutation class: its eigenvalue d_k.
inline std::string export_spectrum_csv(const ReducedSystem& red) {
    std::ostringstream os;
    os << kSpectrumCsvHeader << "\n";
    for (std::size_t k = 0; k < red.classes.size(); ++k) {
        os << k << ',' << format_double(red.d[k].real()) << ',' << format_double(red.d[k].imag()) << ','
           << format_exponents(red.classes[k].exponents) << ',' << red.classes[k].size << "\n";
    }
    return os.str();
}

/// One row per multi-index of the full tensor spectrum.
inline std::string export_tensor_spectrum_csv(const TensorEigensystem& ts) {
    std::ostringstream os;
    os << kSpectrumCsvHeader << "\n";
    for (std::size_t k = 0; k < ts.entries.size(); ++k) {
        const auto& e = ts.entries[k];
        const auto ev = multiindex_to_exponents(e.index, ts.dim);
        os << k << ',' << format_double(e.eigenvalue.real()) << ',' << format_double(e.eigenvalue.imag())
           << ',' << format_exponents(ev) << ',' << degeneracy(ev) << "\n";
    }
    return os.str();
}

inline std::string export_sweep_csv(const SweepResult& r) {
    std::ostringstream os;
    os << kSweepCsvHeader << "\n";
    for (std::size_t e = 0; e < r.epsilons.size(); ++e)
        for (std::size_t t = 0; t < r.matched_tracks.size(); ++t) {
            const Complex z = r.matched_tracks[t][e];
            os << format_double(r.epsilons[e]) << ',' << t << ',' << format_double(z.real()) << ','
               << format_double(z.imag()) << "\n";
        }
    return os.str();
}

// --- signals ----------------------------------------------------------------

/// Accepts a bare array of [re, im] pairs or {"samples": [...]}.
inline Signal signal_from_json(const std::string& text) {
    const json doc = detail::parse_text(text);
    if (doc.is_array()) return Signal{vector_from_json(doc, "")};
    detail::check_schema(doc);
    return Signal{vector_from_json(detail::require(doc, "samples", ""), "samples")};
}

inline std::string signal_to_json(const Signal& s, bool non_unitary = false) {
    json doc;
    doc["schema"] = kSchema;
    doc["kind"] = "signal";
    doc["samples"] = vector_to_json(s.samples);
    if (non_unitary) doc["non_unitary"] = true;
    return doc.dump(2) + "\n";
}

inline std::string matrix_document(const CMatrix& m, const std::vector<ExponentVector>& sites) {
    json doc;
    doc["schema"] = kSchema;
    doc["kind"] = "matrix";
    json s = json::array();
    for (const auto& ev : sites) s.push_back(exponents_to_json(ev));
    doc["sites"] = std::move(s);
    doc["matrix"] = matrix_to_json(m);
    return doc.dump(2) + "\n";
}

}  // namespace simplexlat
