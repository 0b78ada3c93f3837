#pragma once

#include "fracocycle/geom.hpp"
#include "fracocycle/structure.hpp"

#include <map>
#include <tuple>
#include <utility>
#include <vector>

namespace fracocycle::chain {

using geom::ConvexPolygon;
using geom::OrientedSegment;
using geom::Point2;
using geom::SnapKey;
using geom::VertexTable;
using geom::WeightedSegment;

/// A summed boundary has a coefficient other than +-1.
class CoefficientAnomaly : public Error {
public:
    CoefficientAnomaly(const std::string& what, Point2 tail, Point2 head, long coeff)
        : Error(what), tail(tail), head(head), coeff(coeff) {}
    Point2 tail;
    Point2 head;
    long coeff;
};

class NotACycle : public Error {
public:
    using Error::Error;
};

struct Term {
    OrientedSegment segment;  // tail < head
    long coeff = 0;           // never zero
};

/// Integer 1-chain of oriented segments in fully refined canonical form:
/// every segment is stored tail < head by snap key with the orientation folded
/// into the sign, no two terms overlap along a common line, and terms are
/// sorted by segment.
class Chain1 {
public:
    explicit Chain1(double snap_eps) : eps_(snap_eps) {}

    /// Refines, canonicalizes and cancels. Every key must be present in `vertices`.
    static Chain1 from_segments(std::vector<WeightedSegment> segments, VertexTable vertices,
                                double snap_eps);
    /// Wraps terms that are already sorted, canonical, refined and non-zero.
    static Chain1 from_canonical(std::vector<Term> terms, VertexTable vertices, double snap_eps);
    /// Snaps raw coordinates (tail, head, coeff) into a chain.
    static Chain1 from_points(const std::vector<std::tuple<Point2, Point2, long>>& segments,
                              double snap_eps);

    const std::vector<Term>& terms() const { return terms_; }
    const VertexTable& vertices() const { return vertices_; }
    Point2 point(SnapKey k) const { return vertices_.at(k); }
    double snap_eps() const { return eps_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Sum of |coeff| x segment length.
    double length() const;
    /// Sum of coeff x cross(tail, head) / 2: the enclosed signed area for a cycle.
    double shoelace_area() const;

    friend bool operator==(const Chain1& a, const Chain1& b);

private:
    double eps_;
    std::vector<Term> terms_;
    VertexTable vertices_;
};

Chain1 add(const Chain1& a, const Chain1& b);
Chain1 scale(const Chain1& a, long k);
inline Chain1 operator+(const Chain1& a, const Chain1& b) { return add(a, b); }
inline Chain1 operator-(const Chain1& a, const Chain1& b) { return add(a, scale(b, -1)); }

/// Counterclockwise boundary of one cell, one +1 term per edge.
Chain1 cell_boundary(const ConvexPolygon& p, double snap_eps);
Chain1 cell_boundary(const ConvexPolygon& p);

/// Sum of cell boundaries with signed cancellation, without the +-1 check.
Chain1 summed_boundary(const structure::CellList& cells, double snap_eps);

/// b_n: the summed boundary of all level-n cells. Throws CoefficientAnomaly.
Chain1 boundary_chain_b(const structure::CellList& cells, double snap_eps);

/// Splits b into the part lying on the base boundary (o) and the rest (inner).
std::pair<Chain1, Chain1> split_outer_inner(const Chain1& b, const ConvexPolygon& base);

/// Signed vertex boundary: head +coeff, tail -coeff. Every touched vertex is
/// present, including those that sum to zero.
std::map<SnapKey, long> boundary0(const Chain1& c);
bool is_cycle(const Chain1& c);

struct Loop {
    std::vector<OrientedSegment> segments;  // traversal order, head of one = tail of next
};

/// Edge-disjoint closed loops. At a vertex with several unused continuations
/// the one with the smallest signed turning angle (the rightmost turn) wins.
std::vector<Loop> cycle_decomposition(const Chain1& c);

std::vector<Point2> loop_points(const Chain1& c, const Loop& loop);
double loop_signed_area(const Chain1& c, const Loop& loop);

struct ChainLevelSet {
    int level = 0;
    Chain1 b;
    Chain1 o;
    Chain1 inner;
};

ChainLevelSet chain_levels(const structure::CellularStructure& cs, int n);
ChainLevelSet chain_levels(const structure::CellularStructure& cs,
                           const structure::CellList& cells);

}  // namespace fracocycle::chain
