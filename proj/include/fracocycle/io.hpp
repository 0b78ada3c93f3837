#pragma once

#include "fracocycle/chain.hpp"
#include "fracocycle/cochain.hpp"
#include "fracocycle/presets.hpp"
#include "fracocycle/structure.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracocycle::io {

using nlohmann::json;

/// Malformed configuration; `path` is a JSON pointer into the document.
class ConfigError : public Error {
public:
    ConfigError(const std::string& path, const std::string& message)
        : Error((path.empty() ? std::string("/") : path) + ": " + message), path(path) {}
    std::string path;
};

/// Structure document:
///   { "name": text, "polygon": [[x, y], ...] (counterclockwise),
///     "maps": [{ "scale": r, "rotation_deg": deg, "reflect": bool, "translation": [x, y] }, ...],
///     "depth_limit": int (optional) }
struct StructureConfig {
    std::string name = "custom";
    std::vector<geom::Point2> polygon;
    std::vector<structure::MapSpec> maps;
    std::optional<int> depth_limit;
};

StructureConfig parse_structure_config(const json& doc, const std::string& path = "");

/// Run document: a structure (inline under "structure", or "preset": name)
/// plus optional "f", "g", "h", "alpha", "levels", "level", "depth",
/// "format", "out", "seed", "depth_limit".
struct RunConfig {
    std::optional<std::string> preset;
    std::optional<StructureConfig> structure;
    std::optional<std::string> f, g, h;
    std::optional<double> alpha;
    std::optional<int> levels;
    std::optional<int> level;
    std::optional<int> depth;
    std::optional<std::string> format;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> depth_limit;
};

/// Accepts either a run document or a bare structure document.
RunConfig parse_run_config(const json& doc);

/// Reads and parses a JSON file; ConfigError on I/O or syntax problems.
json read_json_file(const std::string& path);

/// Per-condition diagnosis; ConfigError when the polygon itself is malformed.
structure::Diagnosis diagnose(const StructureConfig& cfg);
/// Diagnosis of an already built structure (presets).
structure::Diagnosis diagnose(const structure::CellularStructure& cs);

/// Validates into a one-component preset. Throws ValidationError or ConfigError.
presets::Preset build(const StructureConfig& cfg);

// ---------------------------------------------------------------------------
// Chains

/// [{ "tail": [x, y], "head": [x, y], "coeff": k }, ...] in canonical order.
json chain_to_json(const chain::Chain1& c);
chain::Chain1 chain_from_json(const json& terms, double snap_eps);

/// The chain level set of every component merged into one (components share a grid).
chain::ChainLevelSet merged_levels(const presets::Preset& p, int n);

json chains_document(const chain::ChainLevelSet& levels, const std::string& name, double snap_eps);

/// Three groups "b" (gray), "o" (blue), "I" (red), one closed subpath per loop.
std::string chains_svg(const chain::ChainLevelSet& levels,
                       const std::vector<geom::ConvexPolygon>& bases);

// ---------------------------------------------------------------------------
// Reports

/// Shortest round-trip decimal text ("%.17g"-equivalent); empty for NaN or infinity.
std::string format_number(double v);

/// Columns n, re_phi, im_phi, diff, ratio, certified; a final "limit" row
/// carries the extrapolated value, err_bound under diff and |rho| under ratio.
std::string report_csv(const cochain::ConvergenceReport& r);
json report_json(const cochain::ConvergenceReport& r);

/// Columns n, re_b, im_b, abs_b, ratio.
std::string hochschild_csv(const cochain::HochschildSeries& s);
json hochschild_json(const cochain::HochschildSeries& s);

}  // namespace fracocycle::io
