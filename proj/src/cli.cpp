#include "fracocycle/cli.hpp"

#include "fracocycle/expr.hpp"
#include "fracocycle/io.hpp"
#include "fracocycle/young.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace fracocycle::cli {

namespace {

constexpr const char* grammar_help = R"(Expressions:
  variables x, y, z = x + i y; constants pi, i; operators + - * / and ^ with an
  integer exponent; functions sin cos exp abs re im conj and
  weier(alpha, lambda, K, arg) = sum_{k=0..K} lambda^(-alpha k) cos(lambda^k arg).
  Values are complex throughout.)";

struct Options {
    std::string preset;
    std::string config;
    std::string f, g, h;
    double alpha = 0.0;
    double beta = 0.0;
    int levels = -1;
    int level = -1;
    int depth = -1;
    int depth_limit = -1;
    std::string format;
    std::string out;
    std::uint64_t seed = 0;
    double tol = 1e-10;
};

/// Settings after merging the config file, the environment and the flags.
struct Resolved {
    presets::Preset structure;
    io::RunConfig rc;
};

io::RunConfig load_config(const Options& o)
{
    if (o.config.empty()) return {};
    return io::parse_run_config(io::read_json_file(o.config));
}

int env_depth_limit()
{
    const char* v = std::getenv("FRAC_DEPTH_LIMIT");
    if (!v || !*v) return -1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 0 || n > 64)
        throw io::ConfigError("", std::string("FRAC_DEPTH_LIMIT must be an integer in [0, 64], got '") + v + "'");
    return static_cast<int>(n);
}

presets::Preset resolve_structure(const Options& o, const io::RunConfig& rc)
{
    presets::Preset p;
    std::string preset = o.preset;
    if (preset.empty() && rc.preset) preset = *rc.preset;
    if (!preset.empty()) {
        if (rc.structure && o.preset.empty())
            throw io::ConfigError("/structure", "give either a preset or a structure, not both");
        try {
            p = presets::load_preset(preset);
        } catch (const std::invalid_argument& e) {
            throw io::ConfigError("/preset", e.what());
        }
    } else if (rc.structure) {
        p = io::build(*rc.structure);
    } else {
        throw io::ConfigError("", "no structure given (use --preset or --config)");
    }

    int limit = rc.depth_limit.value_or(-1);
    if (const int env = env_depth_limit(); env >= 0) limit = env;
    if (o.depth_limit >= 0) limit = o.depth_limit;
    if (limit >= 0)
        for (auto& c : p.components) c = c.with_depth_limit(limit);
    return p;
}

Resolved resolve(const Options& o)
{
    io::RunConfig rc = load_config(o);
    return {resolve_structure(o, rc), rc};
}

std::string pick(const std::string& flag, const std::optional<std::string>& cfg, const std::string& fallback)
{
    if (!flag.empty()) return flag;
    return cfg.value_or(fallback);
}

int pick(int flag, const std::optional<int>& cfg, int fallback)
{
    if (flag >= 0) return flag;
    return cfg.value_or(fallback);
}

std::optional<double> alpha_override(double flag, const std::optional<double>& cfg)
{
    if (flag > 0.0) return flag;
    return cfg;
}

cochain::ScalarField field(const std::string& text, std::optional<double> alpha)
{
    return expr::to_field(expr::parse(text), alpha);
}

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw io::ConfigError("", "cannot write '" + path + "'");
    file << text;
    if (!file) throw io::ConfigError("", "failed writing '" + path + "'");
}

std::vector<cochain::LevelSequence> sequences(const presets::Preset& p, int levels)
{
    std::vector<cochain::LevelSequence> out;
    for (const auto& c : p.components) out.emplace_back(c, levels);
    return out;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out)
{
    const io::RunConfig rc = load_config(o);
    std::vector<std::pair<std::string, structure::Diagnosis>> results;
    if (!o.preset.empty() || rc.preset) {
        const auto p = resolve_structure(o, rc);
        for (const auto& c : p.components) results.emplace_back(c.name(), io::diagnose(c));
    } else if (rc.structure) {
        results.emplace_back(rc.structure->name, io::diagnose(*rc.structure));
    } else {
        throw io::ConfigError("", "no structure given (use --preset or --config)");
    }

    bool ok = true;
    for (const auto& [name, d] : results) {
        out << "structure " << name << "\n";
        auto line = [&](const char* label, const std::optional<structure::ValidationFailure>& f, bool geometric) {
            out << "  " << label << ": ";
            if (f)
                out << "FAIL " << f->message << "\n";
            else if (geometric && d.skipped_geometry)
                out << "SKIP\n";
            else
                out << "PASS\n";
        };
        line("map count", d.map_count, false);
        line("contraction", d.contraction, false);
        line("containment", d.containment, true);
        line("condition (a) boundary covered", d.condition_a, true);
        line("condition (b) disjoint interiors", d.condition_b, true);
        ok = ok && d.ok();
    }
    return ok ? Success : ValidationFailed;
}

int cmd_dim(const Options& o, std::ostream& out)
{
    const auto r = resolve(o);
    double dim = 0.0;
    for (const auto& c : r.structure.components) {
        const auto ratios = c.ratios();
        dim = std::max(dim, structure::moran_dimension(ratios));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10f", dim);
    out << buf << "\n";
    return Success;
}

int cmd_chains(const Options& o, std::ostream& out)
{
    const auto r = resolve(o);
    const int level = pick(o.level, r.rc.level, 2);
    const std::string format = pick(o.format, r.rc.format, "json");
    const auto levels = io::merged_levels(r.structure, level);
    std::string text;
    if (format == "json") {
        text = io::chains_document(levels, r.structure.name, r.structure.components.front().snap_eps()).dump(1) + "\n";
    } else if (format == "svg") {
        std::vector<geom::ConvexPolygon> bases;
        for (const auto& c : r.structure.components) bases.push_back(c.base());
        text = io::chains_svg(levels, bases);
    } else {
        throw io::ConfigError("/format", "chains format must be json or svg");
    }
    emit(text, pick(o.out, r.rc.out, ""), out);
    return Success;
}

int cmd_cocycle(const Options& o, std::ostream& out)
{
    const auto r = resolve(o);
    const auto alpha = alpha_override(o.alpha, r.rc.alpha);
    const std::string f_text = pick(o.f, r.rc.f, "x"), g_text = pick(o.g, r.rc.g, "y");
    const auto f = field(f_text, alpha), g = field(g_text, alpha);
    const int levels = pick(o.levels, r.rc.levels, 8);
    const std::string format = pick(o.format, r.rc.format, "csv");
    if (format != "csv" && format != "json") throw io::ConfigError("/format", "cocycle format must be csv or json");

    const auto seqs = sequences(r.structure, levels);
    const auto report = cochain::phi_limit(std::span<const cochain::LevelSequence>(seqs), f, g);
    std::string text;
    if (format == "csv") {
        text = io::report_csv(report);
    } else {
        auto doc = io::report_json(report);
        doc["structure"] = r.structure.name;
        doc["f"] = f_text;
        doc["g"] = g_text;
        text = doc.dump(1) + "\n";
    }
    emit(text, pick(o.out, r.rc.out, ""), out);
    return Success;
}

int cmd_hochschild(const Options& o, std::ostream& out)
{
    const auto r = resolve(o);
    const auto alpha = alpha_override(o.alpha, r.rc.alpha);
    const std::string ft = pick(o.f, r.rc.f, "x"), gt = pick(o.g, r.rc.g, "y"), ht = pick(o.h, r.rc.h, "x*y");
    const int levels = pick(o.levels, r.rc.levels, 8);
    const std::string format = pick(o.format, r.rc.format, "csv");
    if (format != "csv" && format != "json") throw io::ConfigError("/format", "hochschild format must be csv or json");

    const auto seqs = sequences(r.structure, levels);
    const auto series = cochain::hochschild_series(std::span<const cochain::LevelSequence>(seqs), field(ft, alpha),
                                                   field(gt, alpha), field(ht, alpha));
    std::string text;
    if (format == "csv") {
        text = io::hochschild_csv(series);
    } else {
        auto doc = io::hochschild_json(series);
        doc["structure"] = r.structure.name;
        doc["f"] = ft;
        doc["g"] = gt;
        doc["h"] = ht;
        text = doc.dump(1) + "\n";
    }
    emit(text, pick(o.out, r.rc.out, ""), out);
    return Success;
}

young::Path1D path_of(const std::string& text, double alpha_flag)
{
    const expr::Expr e = expr::parse(text);
    return {[e](double t) { return e.eval({t, 0.0}); }, alpha_flag > 0.0 ? alpha_flag : e.declared_alpha()};
}

int cmd_young(const Options& o, std::ostream& out)
{
    const io::RunConfig rc = load_config(o);
    const auto f = path_of(pick(o.f, rc.f, "x"), o.alpha);
    const auto g = path_of(pick(o.g, rc.g, "x"), o.beta);
    const auto result = young::young_integral(f, g, o.tol);
    std::string text = "integral " + io::format_number(result.value.real()) + " " +
                       io::format_number(result.value.imag()) + "\n";
    text += "last_diff " + io::format_number(result.last_diff) + "\n";
    text += "cells " + std::to_string(result.cells) + "\n";
    if (f.alpha + g.alpha > 1.0)
        text += "young_loeve_bound " + io::format_number(young::young_loeve_bound(f, g, f.alpha, g.alpha, 1000)) + "\n";
    else
        text += "young_loeve_bound undefined (alpha + beta <= 1)\n";
    emit(text, pick(o.out, rc.out, ""), out);
    return Success;
}

int cmd_boundary_integral(const Options& o, std::ostream& out)
{
    const auto r = resolve(o);
    const auto alpha = alpha_override(o.alpha, r.rc.alpha);
    const auto f = field(pick(o.f, r.rc.f, "x"), alpha), g = field(pick(o.g, r.rc.g, "y"), alpha);
    const int depth = pick(o.depth, r.rc.depth, 12);
    std::complex<double> sum = 0.0;
    for (const auto& c : r.structure.components) {
        const auto loop = young::closed_boundary(c.base());
        sum += young::polyline_stieltjes(f, g, loop, depth);
    }
    const std::string text = "integral " + io::format_number(sum.real()) + " " + io::format_number(sum.imag()) + "\n";
    emit(text, pick(o.out, r.rc.out, ""), out);
    return Success;
}

void structure_flags(CLI::App* sub, Options& o)
{
    sub->add_option("--preset", o.preset, "Built-in structure: gasket, pinwheel, square4, infinite-gasket, carpet, gasket-wedge");
    sub->add_option("--config", o.config, "JSON structure or run configuration");
    sub->add_option("--depth-limit", o.depth_limit, "Override the level cap (also FRAC_DEPTH_LIMIT)");
}

void output_flags(CLI::App* sub, Options& o)
{
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_option("--format", o.format, "Output format");
}

void field_flags(CLI::App* sub, Options& o, bool with_h)
{
    sub->add_option("--f", o.f, "Expression for f");
    sub->add_option("--g", o.g, "Expression for g");
    if (with_h) sub->add_option("--h", o.h, "Expression for h");
    sub->add_option("--alpha", o.alpha, "Hoelder exponent override for all fields")->check(CLI::Range(1e-9, 1.0));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app("Boundary chains and cyclic cocycles of cellular self-similar sets", "fracocycle");
    app.footer(grammar_help);
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate", "Check a structure and print one line per condition");
    structure_flags(validate, o);

    auto* dim = app.add_subcommand("dim", "Similarity dimension from the contraction ratios");
    structure_flags(dim, o);

    auto* chains = app.add_subcommand("chains", "Emit the b, o and I chains of one level as JSON or SVG");
    structure_flags(chains, o);
    output_flags(chains, o);
    chains->add_option("--level", o.level, "Level (default 2)")->check(CLI::NonNegativeNumber);

    auto* cocycle = app.add_subcommand("cocycle", "phi_n(f, g) table with limit and error bound");
    structure_flags(cocycle, o);
    output_flags(cocycle, o);
    field_flags(cocycle, o, false);
    cocycle->add_option("--levels", o.levels, "Highest level (default 8)")->check(CLI::NonNegativeNumber);
    cocycle->add_option("--seed", o.seed, "Random seed (reserved for sampling)");

    auto* hochschild = app.add_subcommand("hochschild", "b phi_n(f, g, h) table with decay ratios");
    hochschild->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
    structure_flags(hochschild, o);
    output_flags(hochschild, o);
    field_flags(hochschild, o, true);
    hochschild->add_option("--levels", o.levels, "Highest level (default 8)")->check(CLI::NonNegativeNumber);

    auto* young_cmd = app.add_subcommand("young", "Young integral of f dg over [0, 1]; fields use x as the parameter");
    young_cmd->add_option("--config", o.config, "JSON run configuration");
    young_cmd->add_option("--f", o.f, "Integrand (default x)");
    young_cmd->add_option("--g", o.g, "Integrator (default x)");
    young_cmd->add_option("--alpha", o.alpha, "Hoelder exponent of f")->check(CLI::Range(1e-9, 1.0));
    young_cmd->add_option("--beta", o.beta, "Hoelder exponent of g")->check(CLI::Range(1e-9, 1.0));
    young_cmd->add_option("--tol", o.tol, "Stop when successive dyadic sums differ by less")->check(CLI::PositiveNumber);
    young_cmd->add_option("--out", o.out, "Output file (default stdout)");

    auto* boundary = app.add_subcommand("boundary-integral", "Line integral of f dg around the base boundary");
    structure_flags(boundary, o);
    boundary->add_option("--f", o.f, "Expression for f (default x)");
    boundary->add_option("--g", o.g, "Expression for g (default y)");
    boundary->add_option("--alpha", o.alpha, "Hoelder exponent override")->check(CLI::Range(1e-9, 1.0));
    boundary->add_option("--depth", o.depth, "Each edge is cut into 2^depth pieces (default 12)")->check(CLI::Range(0, 24));
    boundary->add_option("--out", o.out, "Output file (default stdout)");

    std::vector<const char*> argv{"fracocycle"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return Success;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return Success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return ConfigInvalid;
    }

    try {
        if (*validate) return cmd_validate(o, out);
        if (*dim) return cmd_dim(o, out);
        if (*chains) return cmd_chains(o, out);
        if (*cocycle) return cmd_cocycle(o, out);
        if (*hochschild) return cmd_hochschild(o, out);
        if (*young_cmd) return cmd_young(o, out);
        if (*boundary) return cmd_boundary_integral(o, out);
    } catch (const structure::ValidationError& e) {
        err << "validation failed (" << structure::to_string(e.failure.condition) << "): " << e.what() << "\n";
        return ValidationFailed;
    } catch (const chain::CoefficientAnomaly& e) {
        err << "invalid structure: " << e.what() << "\n";
        return ValidationFailed;
    } catch (const geom::SnapConflict& e) {
        err << "invalid structure: " << e.what() << "\n";
        return ValidationFailed;
    } catch (const structure::DepthLimitError& e) {
        err << "depth limit: " << e.what() << "\n";
        return ResourceLimit;
    } catch (const young::NoConvergence& e) {
        err << "no convergence: " << e.what() << "\n";
        return ResourceLimit;
    } catch (const io::ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return ConfigInvalid;
    } catch (const expr::ParseError& e) {
        err << "expression error: " << e.what() << "\n";
        return ConfigInvalid;
    } catch (const expr::EvalError& e) {
        err << "evaluation error: " << e.what() << "\n";
        return ConfigInvalid;
    } catch (const young::DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return ConfigInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return Failure;
    }
    return Failure;
}

}  // namespace fracocycle::cli
