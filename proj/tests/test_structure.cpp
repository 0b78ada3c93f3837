#include <doctest.h>

#include "fracocycle/presets.hpp"
#include "fracocycle/structure.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace fracocycle;
using namespace fracocycle::structure;

namespace {

ConvexPolygon unit_square() { return ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

std::vector<MapSpec> quarter_maps(int count)
{
    const Point2 shifts[] = {{0, 0}, {0.5, 0}, {0, 0.5}, {0.5, 0.5}};
    std::vector<MapSpec> out;
    for (int i = 0; i < count; ++i) out.push_back({0.5, 0.0, false, shifts[i]});
    return out;
}

}  // namespace

TEST_CASE("presets validate and carry the expected similarity dimensions")
{
    for (const auto& name : presets::preset_names()) {
        CAPTURE(name);
        const auto p = presets::load_preset(name);
        REQUIRE_FALSE(p.components.empty());
        for (const auto& cs : p.components) {
            const auto ratios = cs.ratios();
            const double dim = moran_dimension(ratios);
            CHECK(std::abs(dim - oracle::moran_root(ratios)) < 1e-10);
            CHECK(std::abs(contraction_sum(ratios, dim) - 1.0) < 1e-11);
        }
    }
    CHECK(std::abs(moran_dimension(presets::gasket().ratios()) - std::log2(3.0)) < 1e-10);
    CHECK(std::abs(moran_dimension(presets::pinwheel().ratios()) - std::log(4.0) / std::log(std::sqrt(5.0))) <
          1e-10);
    CHECK(std::abs(moran_dimension(presets::square4().ratios()) - 2.0) < 1e-10);
    CHECK_THROWS_AS(presets::load_preset("koch"), std::invalid_argument);
}

TEST_CASE("square with three quarter maps fails condition A with the uncovered stretch")
{
    const auto maps = quarter_maps(3);
    const Diagnosis d = diagnose(unit_square(), maps);
    CHECK_FALSE(d.ok());
    REQUIRE(d.condition_a.has_value());
    REQUIRE(d.condition_a->uncovered.has_value());
    // the missing top-right quarter leaves [0.5,1]x{1} and {1}x[0.5,1] uncovered
    const auto [a, b] = *d.condition_a->uncovered;
    const bool right_edge = std::abs(a.x - 1) < 1e-9 && std::abs(b.x - 1) < 1e-9 &&
                            std::abs(std::abs(b.y - a.y) - 0.5) < 1e-9;
    const bool top_edge = std::abs(a.y - 1) < 1e-9 && std::abs(b.y - 1) < 1e-9 &&
                          std::abs(std::abs(b.x - a.x) - 0.5) < 1e-9;
    CHECK((right_edge || top_edge));
    CHECK_FALSE(d.condition_b.has_value());

    try {
        validate(unit_square(), std::span<const MapSpec>(maps), "three");
        FAIL("validate accepted an incomplete tiling");
    } catch (const ValidationError& e) {
        CHECK(e.failure.condition == Condition::ConditionA);
    }
}

TEST_CASE("overlapping images fail condition B")
{
    auto maps = quarter_maps(4);
    maps[1].translation = {0.25, 0.0};
    const Diagnosis d = diagnose(unit_square(), maps);
    REQUIRE(d.condition_b.has_value());
    CHECK(d.condition_b->first == 0);
    CHECK(d.condition_b->second == 1);
    CHECK(d.condition_b->overlap_area == doctest::Approx(0.125));
}

TEST_CASE("map count, contraction and containment")
{
    CHECK(diagnose(unit_square(), quarter_maps(1)).map_count.has_value());

    auto maps = quarter_maps(4);
    maps[2].scale = 1.5;
    const Diagnosis d = diagnose(unit_square(), maps);
    REQUIRE(d.contraction.has_value());
    CHECK(d.contraction->first == 2);
    CHECK(d.skipped_geometry);

    maps = quarter_maps(4);
    maps[3].translation = {0.75, 0.5};
    const Diagnosis e = diagnose(unit_square(), maps);
    REQUIRE(e.containment.has_value());
    CHECK(e.containment->first == 3);
}

TEST_CASE("iterate enumerates words in lexicographic order")
{
    const auto g = presets::gasket();
    const CellList l2 = iterate(g, 2);
    REQUIRE(l2.cells.size() == 9);
    for (std::size_t i = 0; i < l2.cells.size(); ++i) {
        CHECK(l2.cells[i].word.size() == 2);
        CHECK(l2.cells[i].word[0] == static_cast<int>(i / 3));
        CHECK(l2.cells[i].word[1] == static_cast<int>(i % 3));
        CHECK(l2.cells[i].polygon.area() == doctest::Approx(g.base().area() / 16));
    }
    // F_w = F_{w0} o F_{w1}
    const Point2 p = g.base().vertex(1);
    const Point2 expect = g.maps()[1](g.maps()[2](p));
    CHECK(geom::distance(l2.cells[5].polygon.vertex(1), expect) < 1e-15);
    CHECK(iterate(g, 0).cells.size() == 1);
}

TEST_CASE("depth limit")
{
    const auto g = presets::gasket();
    CHECK(g.depth_limit() == 12);
    CHECK_THROWS_AS(iterate(g, 13), DepthLimitError);
    const auto small = g.with_depth_limit(3);
    CHECK(small.depth_limit() == 3);
    try {
        iterate(small, 4);
        FAIL("expected DepthLimitError");
    } catch (const DepthLimitError& e) {
        CHECK(e.requested == 4);
        CHECK(e.limit == 3);
    }
    CHECK(default_count_limit(8) == 8);
    CHECK(default_count_limit(9) == 7);
    // a coarse snap grid caps the level through the edge-length rule
    CHECK(g.with_snap_eps(1e-4).depth_limit() < 12);
}

TEST_CASE("structure constants")
{
    const auto k = structure_constants(presets::gasket());
    CHECK(k.diameter == doctest::Approx(1.0));
    CHECK(k.subdivision_bound == 2);
    CHECK(k.a_priori_bound >= k.subdivision_bound);
    const auto s = structure_constants(presets::square4());
    CHECK(s.subdivision_bound == 2);
}

TEST_CASE("moran_dimension against the oracle on random ratio sets")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 0.7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> r(2 + trial % 6);
        for (double& v : r) v = u(rng);
        CHECK(std::abs(moran_dimension(r) - oracle::moran_root(r)) < 1e-10);
    }
    CHECK_THROWS_AS(moran_dimension(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(moran_dimension(std::vector<double>{0.5, 1.0}), std::invalid_argument);
}
