#include <doctest.h>

#include "fracocycle/cli.hpp"
#include "fracocycle/io.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace fracocycle;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content)
{
    const fs::path p = fs::temp_directory_path() / ("fracocycle-test-" + name);
    std::ofstream(p) << content;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out(1);
    for (char c : line) {
        if (c == sep) out.emplace_back();
        else out.back() += c;
    }
    return out;
}

/// Sets an environment variable for the lifetime of the object.
struct EnvGuard {
    explicit EnvGuard(const char* value) { setenv("FRAC_DEPTH_LIMIT", value, 1); }
    ~EnvGuard() { unsetenv("FRAC_DEPTH_LIMIT"); }
};

}  // namespace

TEST_CASE("validate presets")
{
    for (const char* name : {"gasket", "pinwheel", "square4", "infinite-gasket", "gasket-wedge", "carpet"}) {
        CAPTURE(name);
        const Run r = run({"validate", "--preset", name});
        CHECK(r.code == cli::Success);
        CHECK(r.out.find("FAIL") == std::string::npos);
        CHECK(r.out.find("condition (a) boundary covered: PASS") != std::string::npos);
    }
    CHECK(run({"validate", "--preset", "nope"}).code == cli::ConfigInvalid);
}

TEST_CASE("validate a broken configuration")
{
    const auto bad = temp_file("three.json", R"({"name": "three",
        "polygon": [[0,0],[1,0],[1,1],[0,1]],
        "maps": [{"scale": 0.5, "translation": [0,0]}, {"scale": 0.5, "translation": [0.5,0]},
                 {"scale": 0.5, "translation": [0,0.5]}]})");
    const Run r = run({"validate", "--config", bad.string()});
    CHECK(r.code == cli::ValidationFailed);
    CHECK(r.out.find("condition (a) boundary covered: FAIL") != std::string::npos);
    CHECK(r.out.find("(1, 0.5) -> (1, 1)") != std::string::npos);

    const auto malformed = temp_file("malformed.json", "{\"polygon\": [[0,0],");
    CHECK(run({"validate", "--config", malformed.string()}).code == cli::ConfigInvalid);

    const auto schema = temp_file("schema.json", R"({"polygon": [[0,0],[1,0],[0,1]], "maps": [{"scale": "x"}]})");
    const Run s = run({"validate", "--config", schema.string()});
    CHECK(s.code == cli::ConfigInvalid);
    CHECK(s.err.find("/maps/0/scale") != std::string::npos);
}

TEST_CASE("dim")
{
    CHECK(run({"dim", "--preset", "gasket"}).out == "1.5849625007\n");
    CHECK(run({"dim", "--preset", "pinwheel"}).out == "1.7227062323\n");
    CHECK(run({"dim", "--preset", "square4"}).out == "2.0000000000\n");
}

TEST_CASE("cocycle CSV for the gasket")
{
    const Run r = run({"cocycle", "--preset", "gasket", "--f", "x", "--g", "y", "--levels", "10"});
    REQUIRE(r.code == cli::Success);
    std::istringstream in(r.out);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) rows.push_back(split(line, ','));
    REQUIRE(rows.size() == 1 + 11 + 1);
    CHECK(rows[2][0] == "1");
    CHECK(std::abs(std::stod(rows[2][1]) + 0.2165064) < 1e-7);
    CHECK(std::abs(std::stod(rows[2][1]) + std::sqrt(3.0) / 8) < 1e-9);
    CHECK(rows.back()[0] == "limit");
    CHECK(std::abs(std::stod(rows.back()[1]) + std::sqrt(3.0) / 2) < 1e-6);

    // f = g gives zero everywhere
    const Run same = run({"cocycle", "--preset", "gasket", "--f", "sin(x)", "--g", "sin(x)", "--levels", "4"});
    std::istringstream s(same.out);
    std::getline(s, line);
    for (int n = 0; n <= 4; ++n) {
        std::getline(s, line);
        const auto cols = split(line, ',');
        CHECK(cols[1] == "0");
        CHECK(cols[2] == "0");
    }
}

TEST_CASE("cocycle threshold flag and JSON output")
{
    const Run r = run({"cocycle", "--preset", "gasket", "--f", "weier(0.7,2,24,x+y)", "--g", "weier(0.7,2,24,x+y)",
                       "--levels", "4", "--format", "json"});
    REQUIRE(r.code == cli::Success);
    const auto doc = io::json::parse(r.out);
    CHECK(doc["certified"] == false);
    CHECK(doc["alpha"] == 0.7);
    CHECK(doc["err_bound"].is_null());
}

TEST_CASE("output files are deterministic")
{
    const fs::path a = fs::temp_directory_path() / "fracocycle-test-a.csv";
    const fs::path b = fs::temp_directory_path() / "fracocycle-test-b.csv";
    for (const auto& p : {a, b})
        REQUIRE(run({"cocycle", "--preset", "pinwheel", "--f", "x*y", "--g", "exp(x)", "--levels", "4",
                     "--seed", "3", "--out", p.string()})
                    .code == cli::Success);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("chains command")
{
    const Run svg = run({"chains", "--preset", "gasket", "--level", "2", "--format", "svg"});
    REQUIRE(svg.code == cli::Success);
    const auto i = svg.out.find("<g id=\"I\"");
    REQUIRE(i != std::string::npos);
    const std::string group = svg.out.substr(i, svg.out.find("</g>", i) - i);
    int closes = 0;
    for (char c : group) closes += c == 'Z';
    CHECK(closes == 4);

    const Run json_out = run({"chains", "--preset", "square4", "--level", "3"});
    REQUIRE(json_out.code == cli::Success);
    const auto doc = io::json::parse(json_out.out);
    CHECK(doc["I"].empty());
    CHECK(doc["o"].size() == 32);

    CHECK(run({"chains", "--preset", "gasket", "--format", "png"}).code == cli::ConfigInvalid);
}

TEST_CASE("depth limits map to exit code 4")
{
    CHECK(run({"chains", "--preset", "gasket", "--level", "13"}).code == cli::ResourceLimit);
    CHECK(run({"cocycle", "--preset", "gasket", "--levels", "4", "--depth-limit", "3"}).code == cli::ResourceLimit);
    {
        EnvGuard env("2");
        CHECK(run({"chains", "--preset", "gasket", "--level", "3"}).code == cli::ResourceLimit);
        // the flag beats the environment
        CHECK(run({"chains", "--preset", "gasket", "--level", "3", "--depth-limit", "3"}).code == cli::Success);
    }
    {
        EnvGuard env("lots");
        CHECK(run({"dim", "--preset", "gasket"}).code == cli::ConfigInvalid);
    }
    const auto cfg = temp_file("limited.json", R"({"preset": "gasket", "depth_limit": 1, "level": 2})");
    CHECK(run({"chains", "--config", cfg.string()}).code == cli::ResourceLimit);
}

TEST_CASE("hochschild command")
{
    const Run r = run({"hochschild", "--preset", "gasket", "--f", "1", "--g", "x", "--h", "y", "--levels", "3"});
    REQUIRE(r.code == cli::Success);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,re_b,im_b,abs_b,ratio");
    while (std::getline(in, line)) CHECK(split(line, ',')[3] == "0");
}

TEST_CASE("young and boundary-integral commands")
{
    const Run y = run({"young", "--f", "x", "--g", "x"});
    REQUIRE(y.code == cli::Success);
    CHECK(y.out.rfind("integral 0.5 0\n", 0) == 0);

    const Run rough = run({"young", "--f", "x", "--g", "weier(0.3,2,5,x)", "--alpha", "0.3", "--beta", "0.3"});
    CHECK(rough.out.find("undefined") != std::string::npos);

    const Run b = run({"boundary-integral", "--preset", "gasket", "--f", "x", "--g", "y"});
    REQUIRE(b.code == cli::Success);
    const auto cols = split(b.out.substr(0, b.out.size() - 1), ' ');
    REQUIRE(cols.size() == 3);
    CHECK(std::abs(std::stod(cols[1]) - std::sqrt(3.0) / 4) < 1e-6);

    // -2 x boundary integral agrees with the cocycle limit
    const Run c = run({"cocycle", "--preset", "gasket", "--f", "x", "--g", "y", "--levels", "10", "--format", "json"});
    const auto doc = io::json::parse(c.out);
    CHECK(std::abs(doc["phi_limit"][0].get<double>() + 2 * std::stod(cols[1])) <
          doc["err_bound"].get<double>() + 1e-6);
}

TEST_CASE("usage errors")
{
    CHECK(run({}).code == cli::ConfigInvalid);
    CHECK(run({"frobnicate"}).code == cli::ConfigInvalid);
    CHECK(run({"cocycle", "--preset", "gasket", "--f", "x +"}).code == cli::ConfigInvalid);
    CHECK(run({"cocycle", "--preset", "gasket", "--f", "1/(x-x)", "--levels", "1"}).code == cli::ConfigInvalid);
    CHECK(run({"young", "--g", "sin(1e7*x)", "--tol", "1e-15"}).code == cli::ResourceLimit);
    CHECK(run({"--help"}).code == cli::Success);
}
