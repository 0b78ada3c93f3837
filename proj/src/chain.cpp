#include "fracocycle/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace fracocycle::chain {

namespace {

std::vector<Term> canonicalize(std::vector<WeightedSegment> pieces)
{
    for (auto& p : pieces) {
        if (p.segment.head < p.segment.tail) {
            p.segment = p.segment.reversed();
            p.coeff = -p.coeff;
        }
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const WeightedSegment& a, const WeightedSegment& b) { return a.segment < b.segment; });
    std::vector<Term> terms;
    for (const auto& p : pieces) {
        if (!terms.empty() && terms.back().segment == p.segment)
            terms.back().coeff += p.coeff;
        else
            terms.push_back({p.segment, p.coeff});
    }
    std::erase_if(terms, [](const Term& t) { return t.coeff == 0; });
    return terms;
}

VertexTable used_vertices(const std::vector<Term>& terms, const VertexTable& all)
{
    VertexTable used;
    for (const auto& t : terms) {
        used.insert(t.segment.tail, all.at(t.segment.tail));
        used.insert(t.segment.head, all.at(t.segment.head));
    }
    return used;
}

}  // namespace

Chain1 Chain1::from_segments(std::vector<WeightedSegment> segments, VertexTable vertices,
                             double snap_eps)
{
    std::erase_if(segments, [](const WeightedSegment& s) { return s.coeff == 0; });
    auto refined = geom::refine_collinear(segments, vertices, snap_eps);
    Chain1 c(snap_eps);
    c.terms_ = canonicalize(std::move(refined));
    c.vertices_ = used_vertices(c.terms_, vertices);
    return c;
}

Chain1 Chain1::from_canonical(std::vector<Term> terms, VertexTable vertices, double snap_eps)
{
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].coeff == 0 || !(terms[i].segment.tail < terms[i].segment.head) ||
            (i > 0 && !(terms[i - 1].segment < terms[i].segment)))
            throw std::invalid_argument("Chain1::from_canonical: terms are not canonical");
    }
    Chain1 c(snap_eps);
    c.vertices_ = used_vertices(terms, vertices);
    c.terms_ = std::move(terms);
    return c;
}

Chain1 Chain1::from_points(const std::vector<std::tuple<Point2, Point2, long>>& segments,
                           double snap_eps)
{
    geom::SnapRegistry reg(snap_eps);
    std::vector<WeightedSegment> ws;
    ws.reserve(segments.size());
    for (const auto& [tail, head, coeff] : segments) {
        const SnapKey t = reg.intern(tail);
        const SnapKey h = reg.intern(head);
        if (t == h) throw Error("Chain1::from_points: degenerate segment");
        ws.push_back({{t, h}, coeff});
    }
    return from_segments(std::move(ws), reg.release(), snap_eps);
}

double Chain1::length() const
{
    double sum = 0.0;
    for (const auto& t : terms_)
        sum += static_cast<double>(std::labs(t.coeff)) *
               geom::distance(point(t.segment.tail), point(t.segment.head));
    return sum;
}

double Chain1::shoelace_area() const
{
    double sum = 0.0;
    for (const auto& t : terms_)
        sum += static_cast<double>(t.coeff) * geom::cross(point(t.segment.tail), point(t.segment.head));
    return 0.5 * sum;
}

bool operator==(const Chain1& a, const Chain1& b)
{
    if (a.eps_ != b.eps_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].segment != b.terms_[i].segment || a.terms_[i].coeff != b.terms_[i].coeff)
            return false;
    return true;
}

Chain1 add(const Chain1& a, const Chain1& b)
{
    if (a.snap_eps() != b.snap_eps())
        throw std::invalid_argument("cannot add chains on different snap grids");

    // Re-key b against a's vertices so that a shared vertex that rounded into a
    // neighbouring grid cell still resolves to one key.
    geom::SnapRegistry reg(a.snap_eps());
    for (const auto& [k, p] : a.vertices()) reg.adopt(k, p);
    std::unordered_map<SnapKey, SnapKey, geom::SnapKeyHash> rekey;
    for (const auto& [k, p] : b.vertices()) rekey.emplace(k, reg.intern(p));

    std::vector<WeightedSegment> ws;
    ws.reserve(a.size() + b.size());
    for (const auto& t : a.terms()) ws.push_back({t.segment, t.coeff});
    for (const auto& t : b.terms())
        ws.push_back({{rekey.at(t.segment.tail), rekey.at(t.segment.head)}, t.coeff});
    return Chain1::from_segments(std::move(ws), reg.release(), a.snap_eps());
}

Chain1 scale(const Chain1& a, long k)
{
    if (k == 0) return Chain1(a.snap_eps());
    std::vector<Term> terms = a.terms();
    for (auto& t : terms) t.coeff *= k;
    return Chain1::from_canonical(std::move(terms), a.vertices(), a.snap_eps());
}

Chain1 cell_boundary(const ConvexPolygon& p, double snap_eps)
{
    geom::SnapRegistry reg(snap_eps);
    std::vector<SnapKey> keys;
    for (const auto& v : p.vertices()) keys.push_back(reg.intern(v));
    std::vector<WeightedSegment> ws;
    for (std::size_t i = 0; i < keys.size(); ++i)
        ws.push_back({{keys[i], keys[(i + 1) % keys.size()]}, 1});
    return Chain1::from_segments(std::move(ws), reg.release(), snap_eps);
}

Chain1 cell_boundary(const ConvexPolygon& p) { return cell_boundary(p, 1e-9 * p.diameter()); }

Chain1 summed_boundary(const structure::CellList& cells, double snap_eps)
{
    geom::SnapRegistry reg(snap_eps);
    std::vector<WeightedSegment> ws;
    std::vector<SnapKey> keys;
    for (const auto& cell : cells.cells) {
        keys.clear();
        for (const auto& v : cell.polygon.vertices()) keys.push_back(reg.intern(v));
        for (std::size_t i = 0; i < keys.size(); ++i)
            ws.push_back({{keys[i], keys[(i + 1) % keys.size()]}, 1});
    }
    return Chain1::from_segments(std::move(ws), reg.release(), snap_eps);
}

Chain1 boundary_chain_b(const structure::CellList& cells, double snap_eps)
{
    Chain1 b = summed_boundary(cells, snap_eps);
    for (const auto& t : b.terms()) {
        if (t.coeff != 1 && t.coeff != -1)
            throw CoefficientAnomaly("boundary chain has coefficient " + std::to_string(t.coeff) +
                                         " (overlapping cells or tolerance failure)",
                                     b.point(t.segment.tail), b.point(t.segment.head), t.coeff);
    }
    return b;
}

std::pair<Chain1, Chain1> split_outer_inner(const Chain1& b, const ConvexPolygon& base)
{
    const double tol = b.snap_eps();
    std::vector<Term> outer, inner;
    for (const auto& t : b.terms()) {
        const Point2 p = b.point(t.segment.tail);
        const Point2 q = b.point(t.segment.head);
        const bool on_boundary = geom::point_on_polygon_boundary(base, p, tol) &&
                                 geom::point_on_polygon_boundary(base, q, tol) &&
                                 geom::point_on_polygon_boundary(base, geom::midpoint(p, q), tol);
        (on_boundary ? outer : inner).push_back(t);
    }
    return {Chain1::from_canonical(std::move(outer), b.vertices(), b.snap_eps()),
            Chain1::from_canonical(std::move(inner), b.vertices(), b.snap_eps())};
}

std::map<SnapKey, long> boundary0(const Chain1& c)
{
    std::map<SnapKey, long> out;
    for (const auto& t : c.terms()) {
        out[t.segment.head] += t.coeff;
        out[t.segment.tail] -= t.coeff;
    }
    return out;
}

bool is_cycle(const Chain1& c)
{
    for (const auto& [k, v] : boundary0(c))
        if (v != 0) return false;
    return true;
}

std::vector<Loop> cycle_decomposition(const Chain1& c)
{
    for (const auto& t : c.terms())
        if (t.coeff != 1 && t.coeff != -1)
            throw NotACycle("cycle decomposition needs coefficients +-1");
    if (!is_cycle(c)) throw NotACycle("chain has non-zero boundary");

    std::vector<OrientedSegment> edges;
    edges.reserve(c.size());
    for (const auto& t : c.terms())
        edges.push_back(t.coeff > 0 ? t.segment : t.segment.reversed());

    std::unordered_map<SnapKey, std::vector<std::size_t>, geom::SnapKeyHash> outgoing;
    for (std::size_t i = 0; i < edges.size(); ++i) outgoing[edges[i].tail].push_back(i);

    auto direction = [&](const OrientedSegment& e) { return c.point(e.head) - c.point(e.tail); };
    auto turn = [](Point2 in, Point2 out) { return std::atan2(geom::cross(in, out), geom::dot(in, out)); };

    std::vector<bool> used(edges.size(), false);
    std::vector<Loop> loops;
    for (std::size_t start = 0; start < edges.size(); ++start) {
        if (used[start]) continue;
        Loop loop;
        std::size_t cur = start;
        used[cur] = true;
        loop.segments.push_back(edges[cur]);
        while (true) {
            const SnapKey v = edges[cur].head;
            const Point2 in = direction(edges[cur]);
            // candidate == edges.size() encodes "close the loop"
            std::size_t best = std::numeric_limits<std::size_t>::max();
            double best_turn = std::numeric_limits<double>::infinity();
            if (v == edges[start].tail) {
                best = edges.size();
                best_turn = turn(in, direction(edges[start]));
            }
            for (std::size_t e : outgoing[v]) {
                if (used[e]) continue;
                const double a = turn(in, direction(edges[e]));
                if (a < best_turn) {
                    best_turn = a;
                    best = e;
                }
            }
            if (best == edges.size()) break;
            if (best == std::numeric_limits<std::size_t>::max())
                throw NotACycle("walk got stuck at an open vertex");
            used[best] = true;
            loop.segments.push_back(edges[best]);
            cur = best;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector<Point2> loop_points(const Chain1& c, const Loop& loop)
{
    std::vector<Point2> pts;
    pts.reserve(loop.segments.size() + 1);
    for (const auto& s : loop.segments) pts.push_back(c.point(s.tail));
    if (!loop.segments.empty()) pts.push_back(c.point(loop.segments.back().head));
    return pts;
}

double loop_signed_area(const Chain1& c, const Loop& loop)
{
    std::vector<Point2> pts;
    for (const auto& s : loop.segments) pts.push_back(c.point(s.tail));
    return geom::signed_area(pts);
}

ChainLevelSet chain_levels(const structure::CellularStructure& cs,
                           const structure::CellList& cells)
{
    Chain1 b = boundary_chain_b(cells, cs.snap_eps());
    auto [o, inner] = split_outer_inner(b, cs.base());
    return {cells.level, std::move(b), std::move(o), std::move(inner)};
}

ChainLevelSet chain_levels(const structure::CellularStructure& cs, int n)
{
    return chain_levels(cs, structure::iterate(cs, n));
}

}  // namespace fracocycle::chain
