#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace fracocycle {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace geom {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend constexpr bool operator==(const Point2&, const Point2&) = default;
    // lexicographic (x, then y)
    friend constexpr auto operator<=>(const Point2&, const Point2&) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 a);
double distance(Point2 a, Point2 b);
Point2 midpoint(Point2 a, Point2 b);
/// Distance from p to the closed segment [a, b].
double distance_to_segment(Point2 p, Point2 a, Point2 b);
bool is_finite(Point2 p);

// ---------------------------------------------------------------------------
// Snapping

/// Quantized vertex identity on a grid of spacing eps.
struct SnapKey {
    std::int64_t qx = 0;
    std::int64_t qy = 0;

    friend constexpr bool operator==(const SnapKey&, const SnapKey&) = default;
    friend constexpr auto operator<=>(const SnapKey&, const SnapKey&) = default;
};

struct SnapKeyHash {
    std::size_t operator()(const SnapKey& k) const noexcept;
};

SnapKey snap(Point2 p, double eps);
Point2 unsnap(SnapKey k, double eps);

/// Raised when a vertex cannot be assigned an unambiguous snap key.
class SnapConflict : public Error {
public:
    SnapConflict(const std::string& what, SnapKey a, SnapKey b)
        : Error(what), first(a), second(b) {}
    SnapKey first;
    SnapKey second;
};

/// Representative coordinates per snap key. When several points share a key the
/// lexicographically smallest one is kept, so the table does not depend on
/// insertion order.
class VertexTable {
public:
    void insert(SnapKey k, Point2 p);
    bool contains(SnapKey k) const { return points_.count(k) != 0; }
    Point2 at(SnapKey k) const;
    void merge(const VertexTable& other);
    std::size_t size() const { return points_.size(); }

    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

private:
    std::unordered_map<SnapKey, Point2, SnapKeyHash> points_;
};

/// Assigns snap keys to points, reusing the key of an already interned vertex
/// within eps even when rounding would put the new point in a neighbouring cell.
class SnapRegistry {
public:
    explicit SnapRegistry(double eps);

    SnapKey intern(Point2 p);
    /// Registers an existing key verbatim (seeding from another table).
    void adopt(SnapKey k, Point2 p) { table_.insert(k, p); }
    double eps() const { return eps_; }
    const VertexTable& table() const { return table_; }
    VertexTable release() { return std::move(table_); }

private:
    double eps_;
    VertexTable table_;
};

// ---------------------------------------------------------------------------
// Similitudes

/// Planar similitude p -> r R(theta) (reflect ? conj(p) : p) + t with 0 < r < 1.
class Similitude {
public:
    Similitude(double scale, double rotation, bool reflect, Point2 translation);

    /// The unique similitude taking triangle `from` onto `to` vertex by vertex.
    /// Throws std::invalid_argument when the triangles are not similar.
    static Similitude from_triangles(const std::array<Point2, 3>& from,
                                     const std::array<Point2, 3>& to);

    double scale() const { return scale_; }
    double rotation() const { return rotation_; }
    bool reflect() const { return reflect_; }
    Point2 translation() const { return translation_; }

    Point2 operator()(Point2 p) const;

private:
    double scale_;
    double rotation_;
    bool reflect_;
    Point2 translation_;
    double re_;  // r cos(theta)
    double im_;  // r sin(theta)
};

Point2 apply(const Similitude& s, Point2 p);
/// outer o inner
Similitude compose(const Similitude& outer, const Similitude& inner);

// ---------------------------------------------------------------------------
// Convex polygons

/// Shoelace signed area, positive for counterclockwise order.
double signed_area(std::span<const Point2> ring);

class ConvexPolygon {
public:
    /// Vertices must be strictly convex and counterclockwise; throws
    /// std::invalid_argument otherwise.
    explicit ConvexPolygon(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    Point2 vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

    double area() const;
    double perimeter() const;
    double diameter() const;
    double min_edge() const;
    Point2 centroid() const;

private:
    std::vector<Point2> vertices_;
};

/// Image of P under s; reflected images are re-ordered to stay counterclockwise.
ConvexPolygon map_polygon(const Similitude& s, const ConvexPolygon& p);

double polygon_intersection_area(const ConvexPolygon& p, const ConvexPolygon& q);

bool point_on_polygon_boundary(const ConvexPolygon& poly, Point2 p, double tol);

/// Closed containment with tolerance.
bool point_in_polygon(const ConvexPolygon& poly, Point2 p, double tol);

// ---------------------------------------------------------------------------
// Segments and collinear refinement

struct OrientedSegment {
    SnapKey tail;
    SnapKey head;

    OrientedSegment reversed() const { return {head, tail}; }
    friend constexpr bool operator==(const OrientedSegment&, const OrientedSegment&) = default;
    friend constexpr auto operator<=>(const OrientedSegment&, const OrientedSegment&) = default;
};

struct WeightedSegment {
    OrientedSegment segment;
    long coeff = 0;
};

/// Groups segments by supporting line and splits every member at all endpoints
/// of the group lying strictly inside it. Coefficients are carried unchanged
/// onto the pieces; nothing is merged or cancelled here.
///
/// Lines agree when the unit directions differ by at most 1e-9 in cross
/// product and the offsets by at most eps. Throws SnapConflict when two
/// distinct keys on a line lie within eps of each other.
std::vector<WeightedSegment> refine_collinear(std::span<const WeightedSegment> segments,
                                              const VertexTable& vertices, double eps);

}  // namespace geom
}  // namespace fracocycle
