#include "fracocycle/geom.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace fracocycle::geom {

double norm(Point2 a) { return std::hypot(a.x, a.y); }

double distance(Point2 a, Point2 b) { return norm(b - a); }

Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

double distance_to_segment(Point2 p, Point2 a, Point2 b)
{
    const Point2 d = b - a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return distance(p, a + t * d);
}

bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// ---------------------------------------------------------------------------

std::size_t SnapKeyHash::operator()(const SnapKey& k) const noexcept
{
    auto h = static_cast<std::uint64_t>(k.qx) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(k.qy) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
}

SnapKey snap(Point2 p, double eps)
{
    return {std::llround(p.x / eps), std::llround(p.y / eps)};
}

Point2 unsnap(SnapKey k, double eps)
{
    return {static_cast<double>(k.qx) * eps, static_cast<double>(k.qy) * eps};
}

void VertexTable::insert(SnapKey k, Point2 p)
{
    auto [it, inserted] = points_.try_emplace(k, p);
    if (!inserted && p < it->second) it->second = p;
}

Point2 VertexTable::at(SnapKey k) const
{
    auto it = points_.find(k);
    if (it == points_.end()) throw Error("vertex table: unknown snap key");
    return it->second;
}

void VertexTable::merge(const VertexTable& other)
{
    for (const auto& [k, p] : other.points_) insert(k, p);
}

SnapRegistry::SnapRegistry(double eps) : eps_(eps)
{
    if (!(eps > 0.0)) throw std::invalid_argument("snap resolution must be positive");
}

SnapKey SnapRegistry::intern(Point2 p)
{
    if (!is_finite(p)) throw Error("cannot snap a non-finite point");
    const SnapKey k = snap(p, eps_);
    if (table_.contains(k) && distance(table_.at(k), p) <= eps_) {
        table_.insert(k, p);
        return k;
    }
    bool found = false;
    SnapKey match{};
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
            const SnapKey n{k.qx + dx, k.qy + dy};
            if (n == k || !table_.contains(n)) continue;
            if (distance(table_.at(n), p) > eps_) continue;
            if (found && n != match)
                throw SnapConflict("point is within snap resolution of two distinct vertices",
                                   match, n);
            found = true;
            match = n;
        }
    }
    const SnapKey out = found ? match : k;
    table_.insert(out, p);
    return out;
}

// ---------------------------------------------------------------------------

Similitude::Similitude(double scale, double rotation, bool reflect, Point2 translation)
    : scale_(scale), rotation_(rotation), reflect_(reflect), translation_(translation)
{
    if (!(scale > 0.0 && scale < 1.0))
        throw std::invalid_argument("similitude scale must lie in (0, 1)");
    if (!std::isfinite(rotation) || !is_finite(translation))
        throw std::invalid_argument("similitude parameters must be finite");
    re_ = scale * std::cos(rotation);
    im_ = scale * std::sin(rotation);
}

Similitude Similitude::from_triangles(const std::array<Point2, 3>& from,
                                      const std::array<Point2, 3>& to)
{
    using C = std::complex<double>;
    auto z = [](Point2 p) { return C(p.x, p.y); };
    const C a0 = z(from[0]), a1 = z(from[1]), a2 = z(from[2]);
    const C b0 = z(to[0]), b1 = z(to[1]), b2 = z(to[2]);
    const double size = std::abs(b1 - b0) + std::abs(b2 - b0);

    for (bool reflect : {false, true}) {
        auto m = [reflect](C c) { return reflect ? std::conj(c) : c; };
        const C a = (b1 - b0) / m(a1 - a0);
        const C predicted = a * m(a2 - a0) + b0;
        if (std::abs(predicted - b2) <= 1e-9 * size) {
            const C t = b0 - a * m(a0);
            return Similitude(std::abs(a), std::arg(a), reflect, {t.real(), t.imag()});
        }
    }
    throw std::invalid_argument("triangles are not similar");
}

Point2 Similitude::operator()(Point2 p) const
{
    const double py = reflect_ ? -p.y : p.y;
    return {re_ * p.x - im_ * py + translation_.x, im_ * p.x + re_ * py + translation_.y};
}

Point2 apply(const Similitude& s, Point2 p) { return s(p); }

Similitude compose(const Similitude& outer, const Similitude& inner)
{
    const double rotation = outer.reflect() ? outer.rotation() - inner.rotation()
                                            : outer.rotation() + inner.rotation();
    return Similitude(outer.scale() * inner.scale(), rotation,
                      outer.reflect() != inner.reflect(), outer(inner.translation()));
}

// ---------------------------------------------------------------------------

double signed_area(std::span<const Point2> ring)
{
    double twice = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point2 a = ring[i];
        const Point2 b = ring[(i + 1) % ring.size()];
        twice += cross(a, b);
    }
    return 0.5 * twice;
}

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices) : vertices_(std::move(vertices))
{
    const std::size_t n = vertices_.size();
    if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    for (const auto& v : vertices_)
        if (!is_finite(v)) throw std::invalid_argument("polygon vertex is not finite");

    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 e1 = vertex(i + 1) - vertex(i);
        const Point2 e2 = vertex(i + 2) - vertex(i + 1);
        const double c = cross(e1, e2);
        if (!(c > 1e-12 * norm(e1) * norm(e2)))
            throw std::invalid_argument(
                "polygon must be strictly convex and counterclockwise (vertex " +
                std::to_string((i + 1) % n) + ")");
        turning += std::atan2(c, dot(e1, e2));
    }
    if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6)
        throw std::invalid_argument("polygon winds more than once");
    if (!(signed_area(vertices_) > 0.0))
        throw std::invalid_argument("polygon must have positive area");
}

double ConvexPolygon::area() const { return signed_area(vertices_); }

double ConvexPolygon::perimeter() const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i) sum += distance(vertex(i), vertex(i + 1));
    return sum;
}

double ConvexPolygon::diameter() const
{
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            best = std::max(best, distance(vertices_[i], vertices_[j]));
    return best;
}

double ConvexPolygon::min_edge() const
{
    double best = distance(vertex(0), vertex(1));
    for (std::size_t i = 1; i < size(); ++i)
        best = std::min(best, distance(vertex(i), vertex(i + 1)));
    return best;
}

Point2 ConvexPolygon::centroid() const
{
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const Point2 a = vertex(i), b = vertex(i + 1);
        const double w = cross(a, b);
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    const double a6 = 6.0 * area();
    return {cx / a6, cy / a6};
}

ConvexPolygon map_polygon(const Similitude& s, const ConvexPolygon& p)
{
    std::vector<Point2> out;
    out.reserve(p.size());
    for (const auto& v : p.vertices()) out.push_back(s(v));
    if (s.reflect()) std::reverse(out.begin(), out.end());
    return ConvexPolygon(std::move(out));
}

double polygon_intersection_area(const ConvexPolygon& p, const ConvexPolygon& q)
{
    // Sutherland-Hodgman: clip p against each (counterclockwise) edge of q.
    std::vector<Point2> poly = p.vertices();
    for (std::size_t i = 0; i < q.size() && !poly.empty(); ++i) {
        const Point2 a = q.vertex(i);
        const Point2 e = q.vertex(i + 1) - a;
        auto side = [&](Point2 v) { return cross(e, v - a); };
        std::vector<Point2> next;
        for (std::size_t j = 0; j < poly.size(); ++j) {
            const Point2 cur = poly[j];
            const Point2 nxt = poly[(j + 1) % poly.size()];
            const double sc = side(cur), sn = side(nxt);
            if (sc >= 0.0) next.push_back(cur);
            if ((sc >= 0.0) != (sn >= 0.0)) {
                const double t = sc / (sc - sn);
                next.push_back(cur + t * (nxt - cur));
            }
        }
        poly = std::move(next);
    }
    if (poly.size() < 3) return 0.0;
    return std::max(0.0, signed_area(poly));
}

bool point_on_polygon_boundary(const ConvexPolygon& poly, Point2 p, double tol)
{
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (distance_to_segment(p, poly.vertex(i), poly.vertex(i + 1)) <= tol) return true;
    return false;
}

bool point_in_polygon(const ConvexPolygon& poly, Point2 p, double tol)
{
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2 a = poly.vertex(i);
        const Point2 e = poly.vertex(i + 1) - a;
        if (cross(e, p - a) / norm(e) < -tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kDirectionTol = 1e-9;

struct SegmentLine {
    std::size_t index;
    double theta;  // canonical direction angle in (-pi/2, pi/2]
    Point2 unit;
    Point2 mid;
};

}  // namespace

std::vector<WeightedSegment> refine_collinear(std::span<const WeightedSegment> segments,
                                              const VertexTable& vertices, double eps)
{
    std::vector<SegmentLine> lines;
    lines.reserve(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const Point2 p = vertices.at(segments[i].segment.tail);
        const Point2 q = vertices.at(segments[i].segment.head);
        const Point2 d = q - p;
        const double len = norm(d);
        if (!(len > 0.0) || segments[i].segment.tail == segments[i].segment.head)
            throw Error("refine_collinear: degenerate segment");
        Point2 u = (1.0 / len) * d;
        if (u.x < 0.0 || (u.x == 0.0 && u.y < 0.0)) u = -1.0 * u;
        lines.push_back({i, std::atan2(u.y, u.x), u, midpoint(p, q)});
    }
    std::sort(lines.begin(), lines.end(), [](const SegmentLine& a, const SegmentLine& b) {
        return a.theta < b.theta || (a.theta == b.theta && a.index < b.index);
    });

    // Direction clusters, as [begin, end) ranges into `lines`.
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i == 0 || lines[i].theta - lines[i - 1].theta > kDirectionTol) clusters.emplace_back();
        clusters.back().push_back(i);
    }
    if (clusters.size() > 1) {
        const double wrap_gap =
            lines[clusters.front().front()].theta + std::numbers::pi -
            lines[clusters.back().back()].theta;
        if (wrap_gap <= kDirectionTol) {
            auto& first = clusters.front();
            first.insert(first.end(), clusters.back().begin(), clusters.back().end());
            clusters.pop_back();
        }
    }

    std::vector<WeightedSegment> out;
    out.reserve(segments.size());

    for (const auto& cluster : clusters) {
        const Point2 u = lines[cluster.front()].unit;
        std::vector<std::pair<double, std::size_t>> by_offset;
        by_offset.reserve(cluster.size());
        for (std::size_t li : cluster) by_offset.emplace_back(cross(u, lines[li].mid), li);
        std::sort(by_offset.begin(), by_offset.end());

        std::size_t start = 0;
        while (start < by_offset.size()) {
            std::size_t stop = start + 1;
            while (stop < by_offset.size() &&
                   by_offset[stop].first - by_offset[stop - 1].first <= eps)
                ++stop;

            // One supporting line: order its vertices along u.
            std::vector<std::pair<double, SnapKey>> keys;
            for (std::size_t k = start; k < stop; ++k) {
                const auto& seg = segments[lines[by_offset[k].second].index].segment;
                keys.emplace_back(dot(u, vertices.at(seg.tail)), seg.tail);
                keys.emplace_back(dot(u, vertices.at(seg.head)), seg.head);
            }
            std::sort(keys.begin(), keys.end());
            // a key always projects to the same value, so duplicates are adjacent
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            for (std::size_t k = 1; k < keys.size(); ++k)
                if (keys[k].first - keys[k - 1].first <= eps)
                    throw SnapConflict("distinct vertices within snap resolution on one line",
                                       keys[k - 1].second, keys[k].second);

            auto position = [&](SnapKey key) {
                for (std::size_t k = 0; k < keys.size(); ++k)
                    if (keys[k].second == key) return k;
                throw Error("refine_collinear: vertex missing from line");
            };
            std::unordered_map<SnapKey, std::size_t, SnapKeyHash> pos;
            if (keys.size() > 16) {
                for (std::size_t k = 0; k < keys.size(); ++k) pos.emplace(keys[k].second, k);
            }
            auto index_of = [&](SnapKey key) {
                if (pos.empty()) return position(key);
                return pos.at(key);
            };

            for (std::size_t k = start; k < stop; ++k) {
                const WeightedSegment& ws = segments[lines[by_offset[k].second].index];
                const std::size_t a = index_of(ws.segment.tail);
                const std::size_t b = index_of(ws.segment.head);
                if (a < b) {
                    for (std::size_t m = a; m < b; ++m)
                        out.push_back({{keys[m].second, keys[m + 1].second}, ws.coeff});
                } else {
                    for (std::size_t m = a; m > b; --m)
                        out.push_back({{keys[m].second, keys[m - 1].second}, ws.coeff});
                }
            }
            start = stop;
        }
    }
    return out;
}

}  // namespace fracocycle::geom
