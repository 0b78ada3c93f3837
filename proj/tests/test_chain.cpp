#include <doctest.h>

#include "fracocycle/chain.hpp"
#include "fracocycle/presets.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace fracocycle;
using namespace fracocycle::chain;

TEST_CASE("cell boundary is a counterclockwise cycle enclosing the cell")
{
    const ConvexPolygon tri({{0, 0}, {1, 0}, {0, 1}});
    const Chain1 c = cell_boundary(tri);
    CHECK(c.size() == 3);
    CHECK(is_cycle(c));
    CHECK(c.shoelace_area() == doctest::Approx(0.5));
    CHECK(c.length() == doctest::Approx(2 + std::sqrt(2.0)));
    for (const auto& t : c.terms()) CHECK(t.segment.tail < t.segment.head);
}

TEST_CASE("shared edges cancel in a sum of adjacent cells")
{
    const ConvexPolygon a({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const ConvexPolygon b({{1, 0}, {2, 0}, {2, 1}, {1, 1}});
    const Chain1 s = cell_boundary(a, 1e-9) + cell_boundary(b, 1e-9);
    CHECK(s.size() == 6);
    CHECK(s.length() == doctest::Approx(6.0));
    CHECK(is_cycle(s));
    const Chain1 zero = s - s;
    CHECK(zero.empty());
}

TEST_CASE("a T-junction is refined before cancellation")
{
    // the big square's right edge is shared with two half-height squares
    const ConvexPolygon big({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    const ConvexPolygon lo({{2, 0}, {3, 0}, {3, 1}, {2, 1}});
    const ConvexPolygon hi({{2, 1}, {3, 1}, {3, 2}, {2, 2}});
    structure::CellList cells;
    cells.cells.push_back({{0}, big});
    cells.cells.push_back({{1}, lo});
    cells.cells.push_back({{2}, hi});
    const Chain1 b = summed_boundary(cells, 1e-9);
    CHECK(b.length() == doctest::Approx(8.0 + 2.0));
    CHECK(is_cycle(b));
}

TEST_CASE("coefficient anomaly on overlapping cells")
{
    const ConvexPolygon a({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    structure::CellList cells;
    cells.cells.push_back({{0}, a});
    cells.cells.push_back({{1}, a});
    CHECK_THROWS_AS(boundary_chain_b(cells, 1e-9), CoefficientAnomaly);
}

TEST_CASE("chain algebra laws")
{
    const Chain1 a = Chain1::from_points({{{0, 0}, {1, 0}, 1}, {{1, 0}, {1, 1}, 2}}, 1e-9);
    const Chain1 b = Chain1::from_points({{{1, 1}, {1, 0}, 1}, {{0, 0}, {0.5, 0}, 3}}, 1e-9);
    const Chain1 c = Chain1::from_points({{{0, 0}, {0, 1}, -1}}, 1e-9);
    CHECK((a + b) == (b + a));
    CHECK(((a + b) + c) == (a + (b + c)));
    CHECK((a - a).empty());
    CHECK(scale(a, 0).empty());
    CHECK(scale(scale(a, 2), 3) == scale(a, 6));
    // a + b: [0,.5] gets 4, [.5,1] gets 1, the vertical edge keeps 1
    const Chain1 s = a + b;
    CHECK(s.size() == 3);
    long total = 0;
    for (const auto& t : s.terms()) total += std::abs(t.coeff);
    CHECK(total == 6);
}

TEST_CASE("boundary0 of an open path touches only its ends")
{
    const Chain1 path = Chain1::from_points({{{0, 0}, {1, 0}, 1}, {{1, 0}, {1, 1}, 1}}, 1e-9);
    const auto d = boundary0(path);
    CHECK_FALSE(is_cycle(path));
    long sum = 0;
    int nonzero = 0;
    for (const auto& [k, v] : d) {
        sum += v;
        if (v != 0) ++nonzero;
    }
    CHECK(sum == 0);
    CHECK(nonzero == 2);
}

TEST_CASE("gasket chains: lengths, cycles and lacuna areas")
{
    const auto g = presets::gasket();
    for (int n = 0; n <= 6; ++n) {
        CAPTURE(n);
        const ChainLevelSet s = chain_levels(g, n);
        CHECK(std::abs(s.b.length() / (3 * std::pow(1.5, n)) - 1) < 1e-9);
        CHECK(std::abs(s.o.length() / 3.0 - 1) < 1e-9);
        CHECK(is_cycle(s.b));
        CHECK(is_cycle(s.o));
        CHECK(is_cycle(s.inner));
        CHECK((s.o + s.inner) == s.b);

        const auto loops = cycle_decomposition(s.inner);
        const auto holes = oracle::gasket_holes(n);
        REQUIRE(loops.size() == holes.size());
        // every lacuna loop is clockwise; areas match the recursive oracle
        std::vector<double> got, want;
        for (const auto& l : loops) {
            const double a = loop_signed_area(s.inner, l);
            CHECK(a < 0);
            got.push_back(-a);
        }
        for (const auto& h : holes) want.push_back(oracle::shoelace(h));
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-13);
    }
}

TEST_CASE("square4 has no lacunae")
{
    const auto sq = presets::square4();
    for (int n = 0; n <= 4; ++n) {
        const ChainLevelSet s = chain_levels(sq, n);
        CHECK(s.inner.empty());
        CHECK(s.b == s.o);
        CHECK(s.o.length() == doctest::Approx(4.0));
    }
}

TEST_CASE("every preset yields cycles")
{
    for (const auto& name : presets::preset_names()) {
        CAPTURE(name);
        for (const auto& cs : presets::load_preset(name).components) {
            const ChainLevelSet s = chain_levels(cs, 2);
            CHECK(is_cycle(s.b));
            CHECK(is_cycle(s.o));
            CHECK(is_cycle(s.inner));
            CHECK(s.o.length() == doctest::Approx(cs.base().perimeter()));
        }
    }
}

TEST_CASE("loop points close up")
{
    const auto s = chain_levels(presets::gasket(), 1);
    const auto loops = cycle_decomposition(s.inner);
    REQUIRE(loops.size() == 1);
    const auto pts = loop_points(s.inner, loops[0]);
    CHECK(pts.size() >= 3);
    CHECK(std::abs(loop_signed_area(s.inner, loops[0]) + std::sqrt(3.0) / 16) < 1e-15);
}
