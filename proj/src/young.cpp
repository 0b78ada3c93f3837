#include "fracocycle/young.hpp"

#include "fracocycle/exact_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracocycle::young {

namespace {

/// Accumulates a*(c - d) for complex values as the exact a*c - a*d.
struct ComplexAccumulator {
    ExactSum re, im;

    void add_diff_product(Complex a, Complex c, Complex d)
    {
        add_product(a, c, 1.0);
        add_product(a, d, -1.0);
    }

    void add_product(Complex a, Complex b, double sign)
    {
        re.add_product(sign * a.real(), b.real());
        re.add_product(-sign * a.imag(), b.imag());
        im.add_product(sign * a.real(), b.imag());
        im.add_product(sign * a.imag(), b.real());
    }

    Complex value() const { return {re.value(), im.value()}; }
};

}  // namespace

Partition::Partition(std::vector<double> points, std::vector<double> tags)
    : points_(std::move(points)), tags_(std::move(tags))
{
    if (points_.size() < 2 || points_.front() != 0.0 || points_.back() != 1.0)
        throw std::invalid_argument("partition must run from 0 to 1");
    if (tags_.size() != points_.size() - 1)
        throw std::invalid_argument("partition needs one tag per cell");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        if (!(points_[i] < points_[i + 1]))
            throw std::invalid_argument("partition points must increase strictly");
        if (!(tags_[i] >= points_[i] && tags_[i] <= points_[i + 1]))
            throw std::invalid_argument("tag outside its cell");
    }
}

Partition Partition::uniform(int cells, double tag_position)
{
    if (cells < 1) throw std::invalid_argument("partition needs at least one cell");
    std::vector<double> pts(static_cast<std::size_t>(cells) + 1), tags(static_cast<std::size_t>(cells));
    for (int i = 0; i <= cells; ++i) pts[static_cast<std::size_t>(i)] = static_cast<double>(i) / cells;
    for (int i = 0; i < cells; ++i) {
        const double a = pts[static_cast<std::size_t>(i)], b = pts[static_cast<std::size_t>(i) + 1];
        tags[static_cast<std::size_t>(i)] = std::clamp(a + tag_position * (b - a), a, b);
    }
    return Partition(std::move(pts), std::move(tags));
}

Partition Partition::random(int cells, std::mt19937_64& rng)
{
    if (cells < 1) throw std::invalid_argument("partition needs at least one cell");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> pts{0.0, 1.0};
    while (pts.size() < static_cast<std::size_t>(cells) + 1) {
        const double t = u(rng);
        if (t > 0.0 && std::find(pts.begin(), pts.end(), t) == pts.end()) pts.push_back(t);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> tags;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        tags.push_back(std::clamp(pts[i] + u(rng) * (pts[i + 1] - pts[i]), pts[i], pts[i + 1]));
    return Partition(std::move(pts), std::move(tags));
}

double Partition::mesh() const
{
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) m = std::max(m, points_[i + 1] - points_[i]);
    return m;
}

Path1D identity_path()
{
    return {[](double t) { return Complex(t, 0.0); }, 1.0};
}

Complex stieltjes_sum(const Path1D& f, const Path1D& g, const Partition& chi)
{
    const auto& x = chi.points();
    const auto& xi = chi.tags();
    ComplexAccumulator acc;
    Complex g_prev = g(x[0]);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const Complex g_next = g(x[i + 1]);
        acc.add_diff_product(f(xi[i]), g_next, g_prev);
        g_prev = g_next;
    }
    return acc.value();
}

IntegralResult young_integral(const Path1D& f, const Path1D& g, double tol)
{
    constexpr int max_power = 20;
    Complex prev = stieltjes_sum(f, g, Partition::uniform(1, 0.5));
    double diff = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= max_power; ++k) {
        const int cells = 1 << k;
        const Complex cur = stieltjes_sum(f, g, Partition::uniform(cells, 0.5));
        diff = std::abs(cur - prev);
        if (diff < tol) return {cur, diff, cells};
        prev = cur;
    }
    throw NoConvergence("dyadic midpoint sums did not settle below tolerance within 2^20 cells", prev,
                        diff);
}

double p_variation(const Path1D& f, double alpha, double delta, int n_grid)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("p_variation: alpha must lie in (0, 1]");
    if (!(delta > 0.0)) throw std::invalid_argument("p_variation: delta must be positive");
    if (n_grid < 1) throw std::invalid_argument("p_variation: n_grid must be positive");
    const double p = 1.0 / alpha;
    const auto n = static_cast<std::size_t>(n_grid);
    // largest admissible step in grid units
    const std::size_t w = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(delta * n_grid + 1e-9)));
    std::vector<Complex> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = f(static_cast<double>(i) / n_grid);
    std::vector<double> best(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        double b = -1.0;
        for (std::size_t i = (j > w ? j - w : 0); i < j; ++i) b = std::max(b, best[i] + std::pow(std::abs(v[j] - v[i]), p));
        best[j] = b;
    }
    return std::pow(best[n], alpha);
}

double zeta(double s)
{
    if (!(s > 1.0)) throw DomainError("zeta is only defined here for s > 1");
    constexpr int N = 100000;
    ExactSum sum;
    for (int k = N; k >= 1; --k) sum.add(std::pow(static_cast<double>(k), -s));
    const double n = N;
    // Euler-Maclaurin for sum_{k > N} k^-s
    const double tail = std::pow(n, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(n, -s) +
                        s * std::pow(n, -s - 1.0) / 12.0 -
                        s * (s + 1.0) * (s + 2.0) * std::pow(n, -s - 3.0) / 720.0;
    sum.add(tail);
    return sum.value();
}

double young_loeve_bound(const Path1D& f, const Path1D& g, double alpha, double beta, int n_grid)
{
    if (!(alpha + beta > 1.0))
        throw DomainError("Young-Loeve bound needs alpha + beta > 1, got " + std::to_string(alpha + beta));
    return (1.0 + zeta(alpha + beta)) * p_variation(f, alpha, 1.0, n_grid) * p_variation(g, beta, 1.0, n_grid);
}

Complex polyline_stieltjes(const cochain::ScalarField& f, const cochain::ScalarField& g,
                           std::span<const geom::Point2> polyline, int depth, Tag tag)
{
    if (depth < 0 || depth > 30) throw std::invalid_argument("polyline_stieltjes: depth out of range");
    const long pieces = 1L << depth;
    ComplexAccumulator acc;
    for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
        const geom::Point2 a = polyline[s], b = polyline[s + 1];
        const geom::Point2 d = b - a;
        geom::Point2 tail = a;
        Complex g_tail = g(tail);
        for (long k = 1; k <= pieces; ++k) {
            const geom::Point2 head = (k == pieces) ? b : a + (static_cast<double>(k) / pieces) * d;
            const Complex g_head = g(head);
            const geom::Point2 at = tag == Tag::Left ? tail : geom::midpoint(tail, head);
            acc.add_diff_product(f(at), g_head, g_tail);
            tail = head;
            g_tail = g_head;
        }
    }
    return acc.value();
}

std::vector<geom::Point2> closed_boundary(const geom::ConvexPolygon& p)
{
    std::vector<geom::Point2> pts = p.vertices();
    pts.push_back(pts.front());
    return pts;
}

}  // namespace fracocycle::young
