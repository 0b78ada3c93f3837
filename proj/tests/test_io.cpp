#include <doctest.h>

#include "fracocycle/io.hpp"
#include "fracocycle/presets.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

using namespace fracocycle;
using namespace fracocycle::io;

namespace {

json square_doc()
{
    return json::parse(R"({
        "name": "sq",
        "polygon": [[0,0],[1,0],[1,1],[0,1]],
        "maps": [
            {"scale": 0.5, "translation": [0, 0]},
            {"scale": 0.5, "translation": [0.5, 0]},
            {"scale": 0.5, "translation": [0, 0.5]},
            {"scale": 0.5, "rotation_deg": 0, "reflect": false, "translation": [0.5, 0.5]}
        ],
        "depth_limit": 5
    })");
}

std::string error_path(const json& doc)
{
    try {
        parse_structure_config(doc);
    } catch (const ConfigError& e) {
        return e.path;
    }
    return "<none>";
}

int count(const std::string& s, const std::string& what)
{
    int n = 0;
    for (std::size_t p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("structure documents parse and build")
{
    const StructureConfig cfg = parse_structure_config(square_doc());
    CHECK(cfg.name == "sq");
    CHECK(cfg.polygon.size() == 4);
    CHECK(cfg.maps.size() == 4);
    CHECK(cfg.depth_limit == 5);
    CHECK(diagnose(cfg).ok());
    const auto p = build(cfg);
    REQUIRE(p.components.size() == 1);
    CHECK(p.components[0].depth_limit() == 5);

    json rot = square_doc();
    rot["maps"][0]["rotation_deg"] = 90;
    CHECK(parse_structure_config(rot).maps[0].rotation == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("schema errors point at the offending field")
{
    json d = square_doc();
    d["maps"][2]["scale"] = "half";
    CHECK(error_path(d) == "/maps/2/scale");

    d = square_doc();
    d["maps"][1].erase("scale");
    CHECK(error_path(d) == "/maps/1/scale");

    d = square_doc();
    d["polygon"][3] = json::array({1});
    CHECK(error_path(d) == "/polygon/3");

    d = square_doc();
    d["colour"] = "red";
    CHECK(error_path(d) == "/colour");

    d = square_doc();
    d["maps"][0]["reflect"] = 1;
    CHECK(error_path(d) == "/maps/0/reflect");

    d = square_doc();
    d.erase("maps");
    CHECK(error_path(d) == "/maps");

    d = square_doc();
    d["depth_limit"] = -1;
    CHECK(error_path(d) == "/depth_limit");

    // a clockwise polygon is a config problem, not a structure failure
    d = square_doc();
    d["polygon"] = json::parse("[[0,0],[0,1],[1,1],[1,0]]");
    try {
        diagnose(parse_structure_config(d));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.path == "/polygon");
    }
}

TEST_CASE("run documents")
{
    const RunConfig rc = parse_run_config(json::parse(
        R"j({"preset": "gasket", "f": "x", "g": "sin(y)", "levels": 6, "format": "json", "seed": 42})j"));
    CHECK(rc.preset == "gasket");
    CHECK(rc.g == "sin(y)");
    CHECK(rc.levels == 6);
    CHECK(rc.seed == 42u);
    CHECK_FALSE(rc.h.has_value());

    const RunConfig bare = parse_run_config(square_doc());
    REQUIRE(bare.structure.has_value());
    CHECK(bare.structure->name == "sq");

    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"preset": "gasket", "levels": "many"})")), ConfigError);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"preset": "gasket", "bogus": 1})")), ConfigError);
    CHECK_THROWS_AS(parse_run_config(json::parse("[1, 2]")), ConfigError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), ConfigError);
}

TEST_CASE("chain JSON round-trips")
{
    for (const auto& name : {"gasket", "pinwheel"}) {
        const auto p = presets::load_preset(name);
        const auto& cs = p.components[0];
        const auto s = chain::chain_levels(cs, 3);
        const json doc = chains_document(s, name, cs.snap_eps());
        CHECK(doc["level"] == 3);
        for (const char* key : {"b", "o", "I"}) {
            const chain::Chain1 back = chain_from_json(json::parse(doc[key].dump()), cs.snap_eps());
            const chain::Chain1& orig = key[0] == 'b' ? s.b : key[0] == 'o' ? s.o : s.inner;
            CHECK(back == orig);
        }
    }
    CHECK_THROWS_AS(chain_from_json(json::parse(R"([{"tail": [0,0], "head": [1,0]}])"), 1e-9), ConfigError);
}

TEST_CASE("SVG layers")
{
    const auto g = presets::gasket();
    const auto s = chain::chain_levels(g, 2);
    const std::string svg = chains_svg(s, {g.base()});
    CHECK(count(svg, "<g id=") == 3);
    const auto i_start = svg.find("<g id=\"I\"");
    REQUIRE(i_start != std::string::npos);
    const std::string i_group = svg.substr(i_start, svg.find("</g>", i_start) - i_start);
    CHECK(count(i_group, "Z") == 4);
    CHECK(count(i_group, "M") == 4);
    CHECK(svg.find("-0 ") == std::string::npos);
    CHECK(svg.find("viewBox=\"0 0 1 0.866025\"") != std::string::npos);

    const auto sq = presets::square4();
    const std::string empty = chains_svg(chain::chain_levels(sq, 3), {sq.base()});
    CHECK(empty.find("<g id=\"I\" stroke=\"#d62728\"></g>") != std::string::npos);
    // identical inputs, identical bytes
    CHECK(chains_svg(s, {g.base()}) == svg);
}

TEST_CASE("report CSV")
{
    const auto r = cochain::phi_limit(presets::gasket(), cochain::coordinate_x(), cochain::coordinate_y(), 4);
    const std::string csv = report_csv(r);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,re_phi,im_phi,diff,ratio,certified");
    std::getline(in, line);
    CHECK(line == "0,0,0,,,true");
    std::getline(in, line);
    CHECK(line.rfind("1,-0.21650635094610", 0) == 0);
    int rows = 3;
    std::string last;
    while (std::getline(in, line)) {
        ++rows;
        last = line;
    }
    CHECK(rows == 1 + 5 + 1);
    CHECK(last.rfind("limit,", 0) == 0);

    CHECK(format_number(std::nan("")) == "");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.10000000000000001");

    const json j = report_json(r);
    CHECK(j["levels"].size() == 5);
    CHECK(j["levels"][0]["diff"].is_null());
    CHECK(j["extrapolation"] == "aitken");
}
