#include "fracocycle/presets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracocycle::presets {

using geom::ConvexPolygon;
using geom::Point2;
using geom::Similitude;

namespace {

const double sqrt3 = std::sqrt(3.0);

ConvexPolygon unit_square(Point2 origin)
{
    return ConvexPolygon({origin, origin + Point2{1, 0}, origin + Point2{1, 1}, origin + Point2{0, 1}});
}

std::vector<Similitude> square_grid(Point2 origin, int k, bool skip_center)
{
    std::vector<Similitude> maps;
    const double r = 1.0 / k;
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
            if (skip_center && i == k / 2 && j == k / 2) continue;
            const Point2 corner = origin + Point2{i * r, j * r};
            // p -> r p + (corner - r origin)
            maps.emplace_back(r, 0.0, false, corner - r * origin);
        }
    return maps;
}

std::vector<Similitude> gasket_corners()
{
    return {Similitude(0.5, 0.0, false, {0.0, 0.0}), Similitude(0.5, 0.0, false, {0.5, 0.0}),
            Similitude(0.5, 0.0, false, {0.25, sqrt3 / 4.0})};
}

ConvexPolygon gasket_triangle() { return ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {0.5, sqrt3 / 2.0}}); }

}  // namespace

CellularStructure gasket()
{
    return structure::validate(gasket_triangle(), std::span<const Similitude>(gasket_corners()), "gasket");
}

CellularStructure square4()
{
    const auto maps = square_grid({0, 0}, 2, false);
    return structure::validate(unit_square({0, 0}), std::span<const Similitude>(maps), "square4");
}

CellularStructure carpet()
{
    const auto maps = square_grid({0, 0}, 3, true);
    return structure::validate(unit_square({0, 0}), std::span<const Similitude>(maps), "carpet");
}

CellularStructure pinwheel()
{
    const Point2 A{0, 0}, B{2, 0}, C{0, 1};
    // foot of the altitude from A onto BC: D = B + (4/5)(C - B)
    const Point2 D = B + 0.8 * (C - B);
    const Point2 P = geom::midpoint(A, B);
    const Point2 Q = geom::midpoint(B, D);
    const Point2 R = geom::midpoint(A, D);
    const std::array<Point2, 3> from{A, B, C};
    const std::vector<Similitude> maps{
        Similitude::from_triangles(from, {D, A, C}),
        Similitude::from_triangles(from, {R, P, A}),
        Similitude::from_triangles(from, {Q, B, P}),
        Similitude::from_triangles(from, {D, Q, R}),
    };
    return structure::validate(ConvexPolygon({A, B, C}), std::span<const Similitude>(maps), "pinwheel");
}

CellularStructure infinite_gasket()
{
    auto maps = gasket_corners();
    const Point2 G{0.5, sqrt3 / 6.0};
    // p -> G - (p - G)/3
    maps.emplace_back(1.0 / 3.0, std::numbers::pi, false, (4.0 / 3.0) * G);
    return structure::validate(gasket_triangle(), std::span<const Similitude>(maps), "infinite-gasket");
}

std::vector<std::string> preset_names()
{
    return {"gasket", "pinwheel", "square4", "infinite-gasket", "carpet", "gasket-wedge"};
}

Preset load_preset(const std::string& name)
{
    if (name == "gasket") return {name, {gasket()}};
    if (name == "pinwheel") return {name, {pinwheel()}};
    if (name == "square4") return {name, {square4()}};
    if (name == "infinite-gasket") return {name, {infinite_gasket()}};
    if (name == "carpet") return {name, {carpet()}};
    if (name == "gasket-wedge") {
        // gasket on [0,1] and a carpet on [1,2]x[0,1], touching at (1,0)
        const auto shifted = square_grid({1, 0}, 3, true);
        const auto right = structure::validate(unit_square({1, 0}), std::span<const Similitude>(shifted),
                                               "gasket-wedge/carpet");
        const double eps = 1e-9 * std::sqrt(5.0);  // diameter of the union
        return {name, {gasket().with_snap_eps(eps), right.with_snap_eps(eps)}};
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace fracocycle::presets
