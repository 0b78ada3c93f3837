#include "fracocycle/structure.hpp"

#include "fracocycle/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracocycle::structure {

namespace {

std::string fmt_point(Point2 p)
{
    std::ostringstream os;
    os.precision(10);
    os << "(" << p.x << ", " << p.y << ")";
    return os.str();
}

// Uncovered stretches of the edge [a, b] after removing the pieces of `support`
// lying on it.
std::optional<std::pair<Point2, Point2>> first_gap(const chain::Chain1& support, Point2 a,
                                                   Point2 b, double tol)
{
    const Point2 d = b - a;
    const double len = geom::norm(d);
    const Point2 u = (1.0 / len) * d;
    std::vector<std::pair<double, double>> covered;
    for (const auto& t : support.terms()) {
        const Point2 p = support.point(t.segment.tail);
        const Point2 q = support.point(t.segment.head);
        if (geom::distance_to_segment(p, a, b) > tol || geom::distance_to_segment(q, a, b) > tol)
            continue;
        double s0 = geom::dot(p - a, u), s1 = geom::dot(q - a, u);
        if (s0 > s1) std::swap(s0, s1);
        covered.emplace_back(s0, s1);
    }
    std::sort(covered.begin(), covered.end());
    double reach = 0.0;
    for (const auto& [s0, s1] : covered) {
        if (s0 > reach + tol) return std::make_pair(a + reach * u, a + s0 * u);
        reach = std::max(reach, s1);
    }
    if (reach < len - tol) return std::make_pair(a + reach * u, b);
    return std::nullopt;
}

}  // namespace

std::string to_string(Condition c)
{
    switch (c) {
    case Condition::TooFewMaps: return "TooFewMaps";
    case Condition::NonContractive: return "NonContractive";
    case Condition::Containment: return "Containment";
    case Condition::ConditionA: return "ConditionA";
    case Condition::ConditionB: return "ConditionB";
    }
    return "Unknown";
}

bool Diagnosis::ok() const { return first_failure() == nullptr; }

const ValidationFailure* Diagnosis::first_failure() const
{
    for (const auto* f : {&map_count, &contraction, &containment, &condition_a, &condition_b})
        if (f->has_value()) return &f->value();
    return nullptr;
}

Diagnosis diagnose(const ConvexPolygon& base, std::span<const MapSpec> specs)
{
    Diagnosis d;
    if (specs.size() < 2)
        d.map_count = ValidationFailure{Condition::TooFewMaps,
                                        "need at least 2 maps, got " +
                                            std::to_string(specs.size())};

    std::vector<Similitude> maps;
    for (std::size_t j = 0; j < specs.size(); ++j) {
        const MapSpec& s = specs[j];
        if (!(s.scale > 0.0 && s.scale < 1.0) || !std::isfinite(s.rotation) ||
            !geom::is_finite(s.translation)) {
            ValidationFailure f{Condition::NonContractive,
                                "map " + std::to_string(j) + " has scale outside (0, 1)"};
            f.first = static_cast<int>(j);
            d.contraction = f;
            break;
        }
        maps.emplace_back(s.scale, s.rotation, s.reflect, s.translation);
    }
    if (d.map_count || d.contraction) {
        d.skipped_geometry = true;
        return d;
    }

    const double tol = 1e-9 * base.diameter();
    std::vector<ConvexPolygon> images;
    for (const auto& m : maps) images.push_back(geom::map_polygon(m, base));

    for (std::size_t j = 0; j < images.size() && !d.containment; ++j) {
        for (const auto& v : images[j].vertices()) {
            if (!geom::point_in_polygon(base, v, tol)) {
                ValidationFailure f{Condition::Containment,
                                    "image of map " + std::to_string(j) +
                                        " leaves the base at " + fmt_point(v)};
                f.first = static_cast<int>(j);
                d.containment = f;
                break;
            }
        }
    }

    const double area_tol = 1e-9 * base.area();
    for (std::size_t i = 0; i < images.size() && !d.condition_b; ++i) {
        for (std::size_t j = i + 1; j < images.size(); ++j) {
            const double overlap = geom::polygon_intersection_area(images[i], images[j]);
            if (overlap > area_tol) {
                ValidationFailure f{Condition::ConditionB,
                                    "interiors of cells " + std::to_string(i) + " and " +
                                        std::to_string(j) + " overlap (area " +
                                        std::to_string(overlap) + ")"};
                f.first = static_cast<int>(i);
                f.second = static_cast<int>(j);
                f.overlap_area = overlap;
                d.condition_b = f;
                break;
            }
        }
    }

    try {
        const CellList level1 = iterate_unchecked(base, maps, 1);
        const chain::Chain1 support = chain::summed_boundary(level1, tol);
        for (std::size_t i = 0; i < base.size(); ++i) {
            const Point2 a = base.vertex(i), b = base.vertex(i + 1);
            if (auto gap = first_gap(support, a, b, 10.0 * tol)) {
                ValidationFailure f{Condition::ConditionA,
                                    "base boundary stretch " + fmt_point(gap->first) + " -> " +
                                        fmt_point(gap->second) +
                                        " is not on the level-1 boundary"};
                f.uncovered = gap;
                d.condition_a = f;
                break;
            }
        }
    } catch (const Error& e) {
        d.condition_a = ValidationFailure{Condition::ConditionA,
                                          std::string("level-1 boundary not computable: ") +
                                              e.what()};
    }
    return d;
}

// ---------------------------------------------------------------------------

CellularStructure::CellularStructure(ConvexPolygon base, std::vector<Similitude> maps,
                                     std::string name)
    : base_(std::move(base)), maps_(std::move(maps)), name_(std::move(name)),
      snap_eps_(1e-9 * base_.diameter()), count_limit_(default_count_limit(maps_.size()))
{
}

std::vector<double> CellularStructure::ratios() const
{
    std::vector<double> r;
    r.reserve(maps_.size());
    for (const auto& m : maps_) r.push_back(m.scale());
    return r;
}

int CellularStructure::snap_limit() const
{
    double r_min = 1.0;
    for (const auto& m : maps_) r_min = std::min(r_min, m.scale());
    // shortest level-n edge must stay >= 1e3 x snap resolution
    const double ratio = 1e3 * snap_eps_ / base_.min_edge();
    if (ratio >= 1.0) return 0;
    return static_cast<int>(std::floor(std::log(ratio) / std::log(r_min) + 1e-12));
}

int CellularStructure::depth_limit() const { return std::min(count_limit_, snap_limit()); }

CellularStructure CellularStructure::with_depth_limit(int limit) const
{
    if (limit < 0) throw std::invalid_argument("depth limit must be non-negative");
    CellularStructure out = *this;
    out.count_limit_ = limit;
    return out;
}

CellularStructure CellularStructure::with_snap_eps(double eps) const
{
    if (!(eps > 0.0)) throw std::invalid_argument("snap resolution must be positive");
    CellularStructure out = *this;
    out.snap_eps_ = eps;
    return out;
}

int default_count_limit(std::size_t map_count)
{
    if (map_count <= 4) return 12;
    const double budget = 12.0 * std::log(4.0);
    return static_cast<int>(std::floor(budget / std::log(static_cast<double>(map_count)) + 1e-12));
}

CellularStructure validate(const ConvexPolygon& base, std::span<const Similitude> maps,
                           std::string name)
{
    std::vector<MapSpec> specs;
    for (const auto& m : maps)
        specs.push_back({m.scale(), m.rotation(), m.reflect(), m.translation()});
    Diagnosis d = diagnose(base, specs);
    if (const ValidationFailure* f = d.first_failure()) throw ValidationError(*f);
    return CellularStructure(base, std::vector<Similitude>(maps.begin(), maps.end()),
                             std::move(name));
}

CellularStructure validate(const ConvexPolygon& base, std::span<const MapSpec> specs,
                           std::string name)
{
    Diagnosis d = diagnose(base, specs);
    if (const ValidationFailure* f = d.first_failure()) throw ValidationError(*f);
    std::vector<Similitude> maps;
    for (const auto& s : specs) maps.emplace_back(s.scale, s.rotation, s.reflect, s.translation);
    return CellularStructure(base, std::move(maps), std::move(name));
}

// ---------------------------------------------------------------------------

CellList iterate_unchecked(const ConvexPolygon& base, std::span<const Similitude> maps, int n)
{
    if (n < 0) throw std::invalid_argument("level must be non-negative");
    CellList list;
    list.level = 0;
    list.cells.push_back({{}, base});
    for (int level = 1; level <= n; ++level) {
        CellList next;
        next.level = level;
        next.cells.reserve(list.cells.size() * maps.size());
        for (std::size_t j = 0; j < maps.size(); ++j) {
            for (const Cell& c : list.cells) {
                std::vector<int> word;
                word.reserve(c.word.size() + 1);
                word.push_back(static_cast<int>(j));
                word.insert(word.end(), c.word.begin(), c.word.end());
                next.cells.push_back({std::move(word), geom::map_polygon(maps[j], c.polygon)});
            }
        }
        list = std::move(next);
    }
    return list;
}

CellList iterate(const CellularStructure& cs, int n)
{
    if (n < 0) throw std::invalid_argument("level must be non-negative");
    const int limit = cs.depth_limit();
    if (n > limit)
        throw DepthLimitError("level " + std::to_string(n) + " exceeds the depth limit " +
                                  std::to_string(limit) + " of '" + cs.name() + "'",
                              n, limit);
    return iterate_unchecked(cs.base(), cs.maps(), n);
}

double contraction_sum(std::span<const double> ratios, double s)
{
    double sum = 0.0;
    for (double r : ratios) sum += std::pow(r, s);
    return sum;
}

double moran_dimension(std::span<const double> ratios)
{
    if (ratios.empty()) throw std::invalid_argument("moran_dimension: no ratios");
    double r_max = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("moran_dimension: ratio outside (0, 1)");
        r_max = std::max(r_max, r);
    }
    double lo = 0.0;
    double hi = std::log(static_cast<double>(ratios.size())) / std::log(1.0 / r_max) + 64.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (contraction_sum(ratios, mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

int subdivision_count(const CellularStructure& cs, int n)
{
    const chain::Chain1 coarse = chain::boundary_chain_b(iterate(cs, n), cs.snap_eps());
    const chain::Chain1 fine = chain::boundary_chain_b(iterate(cs, n + 1), cs.snap_eps());
    const double tol = 10.0 * cs.snap_eps();
    int best = 0;
    for (const auto& sigma : coarse.terms()) {
        const Point2 a = coarse.point(sigma.segment.tail);
        const Point2 b = coarse.point(sigma.segment.head);
        int count = 0;
        for (const auto& tau : fine.terms()) {
            const Point2 p = fine.point(tau.segment.tail);
            const Point2 q = fine.point(tau.segment.head);
            if (geom::distance_to_segment(p, a, b) <= tol && geom::distance_to_segment(q, a, b) <= tol)
                ++count;
        }
        best = std::max(best, count);
    }
    return best;
}

StructureConstants structure_constants(const CellularStructure& cs)
{
    StructureConstants k;
    k.diameter = cs.base().diameter();
    k.subdivision_bound = subdivision_count(cs, 1);
    k.a_priori_bound = static_cast<int>(cs.maps().size());
    k.ratios = cs.ratios();
    return k;
}

}  // namespace fracocycle::structure
