#pragma once

#include "fracocycle/geom.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracocycle::structure {

using geom::ConvexPolygon;
using geom::Point2;
using geom::Similitude;

/// Requested level exceeds what memory or snap resolution allows.
class DepthLimitError : public Error {
public:
    DepthLimitError(const std::string& what, int requested, int limit)
        : Error(what), requested(requested), limit(limit) {}
    int requested;
    int limit;
};

enum class Condition { TooFewMaps, NonContractive, Containment, ConditionA, ConditionB };

std::string to_string(Condition c);

struct ValidationFailure {
    Condition condition;
    std::string message;
    // ConditionA: an uncovered stretch of the base boundary.
    std::optional<std::pair<Point2, Point2>> uncovered = std::nullopt;
    // ConditionB: the offending pair and its overlap area. Containment: map index in `first`.
    int first = -1;
    int second = -1;
    double overlap_area = 0.0;
};

class ValidationError : public Error {
public:
    explicit ValidationError(ValidationFailure f) : Error(f.message), failure(std::move(f)) {}
    ValidationFailure failure;
};

/// Per-condition outcome, used for reporting. Empty optional means the check passed;
/// checks that could not run because an earlier one failed are marked skipped.
struct Diagnosis {
    std::optional<ValidationFailure> map_count;
    std::optional<ValidationFailure> contraction;
    std::optional<ValidationFailure> containment;
    std::optional<ValidationFailure> condition_a;
    std::optional<ValidationFailure> condition_b;
    bool skipped_geometry = false;

    bool ok() const;
    const ValidationFailure* first_failure() const;
};

/// Raw map parameters as they come from a config file, before the (0, 1)
/// scale invariant is enforced.
struct MapSpec {
    double scale = 0.5;
    double rotation = 0.0;  // radians
    bool reflect = false;
    Point2 translation;
};

Diagnosis diagnose(const ConvexPolygon& base, std::span<const MapSpec> maps);

/// A validated cellular self-similar structure: a convex base cell and the
/// similitudes that tile it with disjoint interiors while keeping its boundary.
class CellularStructure {
public:
    const ConvexPolygon& base() const { return base_; }
    const std::vector<Similitude>& maps() const { return maps_; }
    const std::string& name() const { return name_; }
    std::vector<double> ratios() const;

    /// 1e-9 x diameter of the base, unless overridden for composites that must
    /// share one vertex grid.
    double snap_eps() const { return snap_eps_; }
    /// Largest admissible level: min of the cell-count cap and the snap cap.
    int depth_limit() const;
    int count_limit() const { return count_limit_; }
    int snap_limit() const;

    CellularStructure with_depth_limit(int limit) const;
    CellularStructure with_snap_eps(double eps) const;

    friend CellularStructure validate(const ConvexPolygon&, std::span<const Similitude>,
                                      std::string);
    friend CellularStructure validate(const ConvexPolygon&, std::span<const MapSpec>,
                                      std::string);

private:
    CellularStructure(ConvexPolygon base, std::vector<Similitude> maps, std::string name);

    ConvexPolygon base_;
    std::vector<Similitude> maps_;
    std::string name_;
    double snap_eps_;
    int count_limit_;
};

/// Throws ValidationError naming the first failing condition.
CellularStructure validate(const ConvexPolygon& base, std::span<const Similitude> maps,
                           std::string name = "structure");
CellularStructure validate(const ConvexPolygon& base, std::span<const MapSpec> maps,
                           std::string name = "structure");

/// Default cell-count cap: 12 levels for up to four maps, otherwise the deepest
/// level with no more cells than 4^12.
int default_count_limit(std::size_t map_count);

struct Cell {
    std::vector<int> word;
    ConvexPolygon polygon;
};

struct CellList {
    int level = 0;
    std::vector<Cell> cells;
};

/// Level-n cells F_w(base) in lexicographic word order. Throws DepthLimitError.
CellList iterate(const CellularStructure& cs, int n);

/// Level-n cells for an unvalidated map list (used while validating).
CellList iterate_unchecked(const ConvexPolygon& base, std::span<const Similitude> maps, int n);

/// Root s of sum_j r_j^s = 1 by bisection, to 1e-12 absolute.
double moran_dimension(std::span<const double> ratios);

double contraction_sum(std::span<const double> ratios, double s);

struct StructureConstants {
    double diameter = 0.0;
    /// Empirical edge-subdivision bound between levels 1 and 2.
    int subdivision_bound = 0;
    /// Bound from the cell count, always >= subdivision_bound.
    int a_priori_bound = 0;
    std::vector<double> ratios;
};

StructureConstants structure_constants(const CellularStructure& cs);

/// Largest number of level-(n+1) boundary pieces inside one level-n boundary piece.
int subdivision_count(const CellularStructure& cs, int n);

}  // namespace fracocycle::structure
