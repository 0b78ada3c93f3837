#include "fracocycle/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracocycle::io {

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + "/" + key, "missing required field");
    return *it;
}

double as_number(const json& v, const std::string& path)
{
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
    return d;
}

int as_int(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto i = v.get<long long>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
        throw ConfigError(path, "integer out of range");
    return static_cast<int>(i);
}

std::string as_string(const json& v, const std::string& path)
{
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

geom::Point2 as_point(const json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [x, y]");
    return {as_number(v[0], path + "/0"), as_number(v[1], path + "/1")};
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& path)
{
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(path + "/" + key, "unknown field");
    }
}

std::string svg_number(double v)
{
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string svg_subpaths(const chain::Chain1& c)
{
    std::string d;
    for (const auto& loop : chain::cycle_decomposition(c)) {
        const auto pts = chain::loop_points(c, loop);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            d += (i == 0 ? "M" : " L");
            d += svg_number(pts[i].x) + " " + svg_number(pts[i].y);
        }
        d += " Z ";
    }
    if (!d.empty()) d.pop_back();
    return d;
}

json number_or_null(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return v;
}

json complex_pair(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

StructureConfig parse_structure_config(const json& doc, const std::string& path)
{
    if (!doc.is_object()) throw ConfigError(path, "expected an object");
    reject_unknown(doc, {"name", "polygon", "maps", "depth_limit"}, path);
    StructureConfig cfg;
    if (doc.contains("name")) cfg.name = as_string(doc["name"], path + "/name");

    const json& poly = require(doc, "polygon", path);
    if (!poly.is_array() || poly.size() < 3)
        throw ConfigError(path + "/polygon", "expected at least three [x, y] vertices");
    for (std::size_t i = 0; i < poly.size(); ++i)
        cfg.polygon.push_back(as_point(poly[i], path + "/polygon/" + std::to_string(i)));

    const json& maps = require(doc, "maps", path);
    if (!maps.is_array()) throw ConfigError(path + "/maps", "expected an array");
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const std::string mp = path + "/maps/" + std::to_string(i);
        const json& m = maps[i];
        if (!m.is_object()) throw ConfigError(mp, "expected an object");
        reject_unknown(m, {"scale", "rotation_deg", "reflect", "translation"}, mp);
        structure::MapSpec spec;
        spec.scale = as_number(require(m, "scale", mp), mp + "/scale");
        if (m.contains("rotation_deg"))
            spec.rotation = as_number(m["rotation_deg"], mp + "/rotation_deg") * std::numbers::pi / 180.0;
        if (m.contains("reflect")) {
            if (!m["reflect"].is_boolean()) throw ConfigError(mp + "/reflect", "expected a boolean");
            spec.reflect = m["reflect"].get<bool>();
        }
        if (m.contains("translation")) spec.translation = as_point(m["translation"], mp + "/translation");
        cfg.maps.push_back(spec);
    }
    if (doc.contains("depth_limit")) {
        const int d = as_int(doc["depth_limit"], path + "/depth_limit");
        if (d < 0) throw ConfigError(path + "/depth_limit", "must be non-negative");
        cfg.depth_limit = d;
    }
    return cfg;
}

RunConfig parse_run_config(const json& doc)
{
    if (!doc.is_object()) throw ConfigError("", "expected an object");
    RunConfig rc;
    if (!doc.contains("structure") && !doc.contains("preset")) {
        rc.structure = parse_structure_config(doc);
        return rc;
    }
    reject_unknown(doc,
                   {"preset", "structure", "f", "g", "h", "alpha", "levels", "level", "depth", "format",
                    "out", "seed", "depth_limit"},
                   "");
    if (doc.contains("preset") && doc.contains("structure"))
        throw ConfigError("/structure", "give either a preset or a structure, not both");
    if (doc.contains("preset")) rc.preset = as_string(doc["preset"], "/preset");
    if (doc.contains("structure")) rc.structure = parse_structure_config(doc["structure"], "/structure");
    for (const char* key : {"f", "g", "h"}) {
        if (!doc.contains(key)) continue;
        auto value = as_string(doc[key], std::string("/") + key);
        (key[0] == 'f' ? rc.f : key[0] == 'g' ? rc.g : rc.h) = std::move(value);
    }
    if (doc.contains("alpha")) rc.alpha = as_number(doc["alpha"], "/alpha");
    if (doc.contains("levels")) rc.levels = as_int(doc["levels"], "/levels");
    if (doc.contains("level")) rc.level = as_int(doc["level"], "/level");
    if (doc.contains("depth")) rc.depth = as_int(doc["depth"], "/depth");
    if (doc.contains("format")) rc.format = as_string(doc["format"], "/format");
    if (doc.contains("out")) rc.out = as_string(doc["out"], "/out");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw ConfigError("/seed", "expected a non-negative integer");
        rc.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("depth_limit")) {
        const int d = as_int(doc["depth_limit"], "/depth_limit");
        if (d < 0) throw ConfigError("/depth_limit", "must be non-negative");
        rc.depth_limit = d;
    }
    return rc;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON in '") + path + "': " + e.what());
    }
}

namespace {

geom::ConvexPolygon base_polygon(const StructureConfig& cfg, const std::string& path = "/polygon")
{
    try {
        return geom::ConvexPolygon(cfg.polygon);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

}  // namespace

structure::Diagnosis diagnose(const StructureConfig& cfg)
{
    return structure::diagnose(base_polygon(cfg), cfg.maps);
}

structure::Diagnosis diagnose(const structure::CellularStructure& cs)
{
    std::vector<structure::MapSpec> specs;
    for (const auto& m : cs.maps()) specs.push_back({m.scale(), m.rotation(), m.reflect(), m.translation()});
    return structure::diagnose(cs.base(), specs);
}

presets::Preset build(const StructureConfig& cfg)
{
    auto cs = structure::validate(base_polygon(cfg), std::span<const structure::MapSpec>(cfg.maps), cfg.name);
    if (cfg.depth_limit) cs = cs.with_depth_limit(*cfg.depth_limit);
    return {cfg.name, {cs}};
}

// ---------------------------------------------------------------------------

json chain_to_json(const chain::Chain1& c)
{
    json out = json::array();
    for (const auto& t : c.terms()) {
        const auto p = c.point(t.segment.tail), q = c.point(t.segment.head);
        out.push_back({{"tail", {p.x, p.y}}, {"head", {q.x, q.y}}, {"coeff", t.coeff}});
    }
    return out;
}

chain::Chain1 chain_from_json(const json& terms, double snap_eps)
{
    if (!terms.is_array()) throw ConfigError("", "expected an array of chain terms");
    std::vector<std::tuple<geom::Point2, geom::Point2, long>> segs;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string p = "/" + std::to_string(i);
        const json& t = terms[i];
        if (!t.is_object()) throw ConfigError(p, "expected an object");
        const auto tail = as_point(require(t, "tail", p), p + "/tail");
        const auto head = as_point(require(t, "head", p), p + "/head");
        const json& k = require(t, "coeff", p);
        if (!k.is_number_integer()) throw ConfigError(p + "/coeff", "expected an integer");
        segs.emplace_back(tail, head, k.get<long>());
    }
    return chain::Chain1::from_points(segs, snap_eps);
}

chain::ChainLevelSet merged_levels(const presets::Preset& p, int n)
{
    if (p.components.empty()) throw std::invalid_argument("preset without components");
    chain::ChainLevelSet merged = chain::chain_levels(p.components.front(), n);
    for (std::size_t i = 1; i < p.components.size(); ++i) {
        const auto next = chain::chain_levels(p.components[i], n);
        merged.b = merged.b + next.b;
        merged.o = merged.o + next.o;
        merged.inner = merged.inner + next.inner;
    }
    return merged;
}

json chains_document(const chain::ChainLevelSet& levels, const std::string& name, double snap_eps)
{
    return {{"structure", name},
            {"level", levels.level},
            {"snap_eps", snap_eps},
            {"b", chain_to_json(levels.b)},
            {"o", chain_to_json(levels.o)},
            {"I", chain_to_json(levels.inner)}};
}

std::string chains_svg(const chain::ChainLevelSet& levels, const std::vector<geom::ConvexPolygon>& bases)
{
    double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (const auto& b : bases)
        for (const auto& v : b.vertices()) {
            xmin = std::min(xmin, v.x), xmax = std::max(xmax, v.x);
            ymin = std::min(ymin, v.y), ymax = std::max(ymax, v.y);
        }
    const double w = xmax - xmin, h = ymax - ymin;
    const double stroke = 0.006 * std::max(w, h) * std::pow(0.8, levels.level);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << svg_number(xmin) << " " << svg_number(ymin)
       << " " << svg_number(w) << " " << svg_number(h) << "\">\n";
    // flip y so the picture is upright: y -> ymin + ymax - y
    os << "<g transform=\"matrix(1 0 0 -1 0 " << svg_number(ymin + ymax) << ")\" fill=\"none\" "
       << "stroke-linejoin=\"round\" stroke-width=\"" << svg_number(stroke) << "\">\n";
    const std::pair<const char*, const chain::Chain1*> layers[] = {
        {"b", &levels.b}, {"o", &levels.o}, {"I", &levels.inner}};
    const char* colours[] = {"#888888", "#1f4fd8", "#d62728"};
    for (std::size_t i = 0; i < 3; ++i) {
        os << "<g id=\"" << layers[i].first << "\" stroke=\"" << colours[i] << "\">";
        const std::string d = svg_subpaths(*layers[i].second);
        if (!d.empty()) os << "<path d=\"" << d << "\"/>";
        os << "</g>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

// ---------------------------------------------------------------------------

std::string format_number(double v)
{
    if (!std::isfinite(v)) return "";
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_csv(const cochain::ConvergenceReport& r)
{
    const std::string cert = r.certified ? "true" : "false";
    std::string out = "n,re_phi,im_phi,diff,ratio,certified\n";
    for (std::size_t i = 0; i < r.phi.size(); ++i) {
        out += std::to_string(r.levels[i]) + "," + format_number(r.phi[i].real()) + "," +
               format_number(r.phi[i].imag()) + "," + format_number(r.diffs[i]) + "," +
               format_number(r.ratios[i]) + "," + cert + "\n";
    }
    const double rho = r.method == cochain::Extrapolation::None ? std::numeric_limits<double>::quiet_NaN()
                                                                : std::abs(r.rho_used);
    out += "limit," + format_number(r.phi_limit.real()) + "," + format_number(r.phi_limit.imag()) + "," +
           format_number(r.err_bound) + "," + format_number(rho) + "," + cert + "\n";
    return out;
}

json report_json(const cochain::ConvergenceReport& r)
{
    json levels = json::array();
    for (std::size_t i = 0; i < r.phi.size(); ++i)
        levels.push_back({{"n", r.levels[i]},
                          {"phi", complex_pair(r.phi[i])},
                          {"diff", number_or_null(r.diffs[i])},
                          {"ratio", number_or_null(r.ratios[i])}});
    return {{"levels", levels},
            {"alpha", r.alpha},
            {"dimension", r.dimension},
            {"certified", r.certified},
            {"rho_theory", r.rho_theory},
            {"rho_observed", number_or_null(r.rho_observed)},
            {"rho_fitted", number_or_null(r.rho_fitted)},
            {"extrapolation", cochain::to_string(r.method)},
            {"rho_used", complex_pair(r.rho_used)},
            {"phi_limit", complex_pair(r.phi_limit)},
            {"err_bound", number_or_null(r.err_bound)}};
}

std::string hochschild_csv(const cochain::HochschildSeries& s)
{
    std::string out = "n,re_b,im_b,abs_b,ratio\n";
    for (std::size_t i = 0; i < s.values.size(); ++i)
        out += std::to_string(s.levels[i]) + "," + format_number(s.values[i].real()) + "," +
               format_number(s.values[i].imag()) + "," + format_number(std::abs(s.values[i])) + "," +
               format_number(s.ratios[i]) + "\n";
    return out;
}

json hochschild_json(const cochain::HochschildSeries& s)
{
    json levels = json::array();
    for (std::size_t i = 0; i < s.values.size(); ++i)
        levels.push_back({{"n", s.levels[i]}, {"b", complex_pair(s.values[i])}, {"ratio", number_or_null(s.ratios[i])}});
    return {{"levels", levels}, {"rho_theory", s.rho_theory}};
}

}  // namespace fracocycle::io
