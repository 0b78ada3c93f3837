#pragma once

#include "fracocycle/cochain.hpp"
#include "fracocycle/geom.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fracocycle::young {

using Complex = std::complex<double>;

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, Complex last, double diff)
        : Error(what), last(last), diff(diff) {}
    Complex last;
    double diff;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Tagged partition of [0, 1].
class Partition {
public:
    /// points: 0 = x_0 < ... < x_n = 1; tags[i] in [x_i, x_{i+1}].
    /// Throws std::invalid_argument on violation.
    Partition(std::vector<double> points, std::vector<double> tags);

    static Partition uniform(int cells, double tag_position);  // 0 left, 0.5 midpoint, 1 right
    /// Random points and uniformly random tags.
    static Partition random(int cells, std::mt19937_64& rng);

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& tags() const { return tags_; }
    std::size_t cells() const { return tags_.size(); }
    double mesh() const;

private:
    std::vector<double> points_;
    std::vector<double> tags_;
};

/// A complex path on [0, 1] with its declared Hoelder exponent.
struct Path1D {
    std::function<Complex(double)> eval;
    double alpha = 1.0;

    Complex operator()(double t) const { return eval(t); }
};

Path1D identity_path();

/// sum f(xi_i) (g(x_{i+1}) - g(x_i)). With f == 1 the sum telescopes exactly
/// to g(1) - g(0).
Complex stieltjes_sum(const Path1D& f, const Path1D& g, const Partition& chi);

struct IntegralResult {
    Complex value;
    double last_diff = 0.0;
    int cells = 0;
};

/// Midpoint sums on dyadic partitions, doubled until successive sums differ
/// by less than tol. Throws NoConvergence past 2^20 cells.
IntegralResult young_integral(const Path1D& f, const Path1D& g, double tol);

/// Lower bound on the 1/alpha-variation (sum |df|^(1/alpha))^alpha over
/// partitions drawn from an n_grid uniform grid with mesh <= delta, maximized
/// exactly over that family by dynamic programming.
double p_variation(const Path1D& f, double alpha, double delta, int n_grid);

/// Riemann zeta for s > 1: 10^5 direct terms plus Euler-Maclaurin tail.
double zeta(double s);

/// (1 + zeta(alpha + beta)) V_alpha(f) V_beta(g). Throws DomainError when
/// alpha + beta <= 1.
double young_loeve_bound(const Path1D& f, const Path1D& g, double alpha, double beta, int n_grid);

enum class Tag { Left, Midpoint };

/// Line integral of f dg along a polyline: each segment cut into 2^depth
/// affine pieces, sum of f(tag) (g(head) - g(tail)). Closed polylines repeat
/// the first point. Midpoint tags make the sum second order and exactly odd
/// under reversal; left tags are the plain first-order sum.
Complex polyline_stieltjes(const cochain::ScalarField& f, const cochain::ScalarField& g,
                           std::span<const geom::Point2> polyline, int depth,
                           Tag tag = Tag::Midpoint);

/// Closed counterclockwise boundary of a polygon (first point repeated).
std::vector<geom::Point2> closed_boundary(const geom::ConvexPolygon& p);

}  // namespace fracocycle::young
