#include <doctest.h>

#include "fracocycle/cochain.hpp"
#include "fracocycle/exact_sum.hpp"
#include "fracocycle/expr.hpp"
#include "fracocycle/presets.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace fracocycle;
using namespace fracocycle::cochain;

namespace {

ScalarField field(const char* text) { return expr::to_field(expr::parse(text)); }

bool same_bits(Complex a, Complex b) { return a.real() == b.real() && a.imag() == b.imag(); }

}  // namespace

TEST_CASE("exact sum is order independent and correctly rounded")
{
    ExactSum a, b;
    const double xs[] = {1e100, 1.0, -1e100, 1e-20, 3.0, -2.5e-17};
    for (double x : xs) a.add(x);
    for (int i = 5; i >= 0; --i) b.add(xs[i]);
    CHECK(a.value() == b.value());
    CHECK(a.value() == 4.0);

    ExactSum p;
    p.add_product(0.1, 0.1);
    p.add(-0.1 * 0.1);
    // the rounding error of 0.1*0.1 survives
    CHECK(p.value() == std::fma(0.1, 0.1, -(0.1 * 0.1)));
    CHECK(ExactSum().value() == 0.0);
}

TEST_CASE("omega is antisymmetric bit for bit")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    const ScalarField f = field("sin(3*x) + y^2 + i*x*y");
    const ScalarField g = field("exp(x - y) - z*z");
    const ScalarField one = constant_field(1.0);
    for (int k = 0; k < 200; ++k) {
        const Point2 t{u(rng), u(rng)}, h{u(rng), u(rng)};
        CHECK(same_bits(omega(f, g, t, h), -omega(g, f, t, h)));
        // on a single segment omega(1, g) is dg; it vanishes only summed over a cycle
        CHECK(same_bits(omega(one, g, t, h), g(h) - g(t)));
        CHECK(same_bits(omega(f, f, t, h), Complex(0.0, 0.0)));
        // omega = f u dg - g u df
        const Complex via_cup = cup(f, delta(g))(t, h) - cup(g, delta(f))(t, h);
        CHECK(std::abs(omega(f, g, t, h) - via_cup) < 1e-12);
        CHECK(same_bits(cup(delta(f), g)(t, h), mul(delta0(f, t, h), g(h))));
    }
}

TEST_CASE("gasket phi_n(x, y) equals minus twice the lacuna area")
{
    const auto g = presets::gasket();
    const ScalarField x = coordinate_x(), y = coordinate_y();
    CHECK(std::abs(phi_n(g, x, y, 1).real() + std::sqrt(3.0) / 8) < 1e-15);
    CHECK(std::abs(phi_n(g, x, y, 2).real() + 7 * std::sqrt(3.0) / 32) < 1e-15);
    for (int n = 0; n <= 7; ++n) {
        const Complex v = phi_n(g, x, y, n);
        CHECK(v.imag() == 0.0);
        CHECK(std::abs(v.real() - oracle::gasket_phi_xy(n)) < 1e-13);
    }
}

TEST_CASE("phi_n is bilinear and alternating")
{
    const auto g = presets::gasket();
    const ScalarField f = field("sin(x) + y^2");
    const ScalarField h = field("exp(x*y)");
    const ScalarField k = field("x^3 - y");
    const Complex a(0.5, -2.0);
    const ScalarField af_plus_k = linear_combination(a, f, k);
    const Complex lhs = phi_n(g, af_plus_k, h, 4);
    const Complex rhs = a * phi_n(g, f, h, 4) + phi_n(g, k, h, 4);
    CHECK(std::abs(lhs - rhs) < 1e-13);
    CHECK(same_bits(phi_n(g, f, f, 5), Complex(0.0, 0.0)));
    CHECK(same_bits(phi_n(g, constant_field(3.0), h, 5), Complex(0.0, 0.0)));
}

TEST_CASE("cyclic check holds bitwise for random pairs")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3, 3);
    const auto pw = presets::pinwheel();
    for (int k = 0; k < 10; ++k) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const ScalarField f({[=](Point2 p) { return Complex(std::sin(a * p.x + b * p.y), c * p.x); }}, 1.0);
        const ScalarField g({[=](Point2 p) { return Complex(std::exp(c * p.y) - a * p.x * p.x, 0.0); }}, 1.0);
        CHECK(cyclic_check(pw, f, g, 3));
    }
}

TEST_CASE("report extrapolates a geometric sequence exactly")
{
    std::vector<Complex> seq;
    const Complex L(1.5, -0.25), C(0.3, 0.1);
    for (int n = 0; n <= 8; ++n) seq.push_back(L + C * std::pow(0.6, n));
    const auto r = make_report(seq, 0.75, 1.58, 1.0);
    CHECK(r.certified);
    CHECK(r.method == Extrapolation::Aitken);
    CHECK(std::abs(r.phi_limit - L) < 1e-12);
    CHECK(std::abs(r.rho_used - Complex(0.6, 0.0)) < 1e-9);
    CHECK(r.rho_fitted == doctest::Approx(0.6));
    // err_bound uses max(rho_theory, observed) = 0.75
    CHECK(r.err_bound == doctest::Approx(std::abs(seq[8] - seq[7]) * 3.0));
    CHECK(std::isnan(r.diffs[0]));
    CHECK(std::isnan(r.ratios[1]));

    const auto u = make_report(seq, 0.75, 1.58, 0.7);
    CHECK_FALSE(u.certified);
    CHECK(std::isinf(u.err_bound));
}

TEST_CASE("report falls back to the theory ratio on irregular sequences")
{
    const std::vector<Complex> seq{0.0, 1.0, 1.5, 1.6, 1.9};
    const auto r = make_report(seq, 0.5, 1.0, 1.0);
    CHECK(r.method == Extrapolation::Theory);
    CHECK(r.phi_limit.real() == doctest::Approx(1.9 + 0.3));
    const auto u = make_report(seq, 0.5, 2.5, 1.0);
    CHECK(u.method == Extrapolation::None);
    CHECK(u.phi_limit.real() == 1.9);
    CHECK(make_report({Complex(2.0)}, 0.5, 1.0, 1.0).method == Extrapolation::None);
}

TEST_CASE("gasket phi(x, y) converges to -sqrt(3)/2")
{
    const auto r = phi_limit(presets::gasket(), coordinate_x(), coordinate_y(), 10);
    CHECK(std::abs(r.phi_limit.real() + std::sqrt(3.0) / 2) < 1e-6);
    CHECK(r.rho_theory == doctest::Approx(0.75));
    CHECK(r.dimension == doctest::Approx(std::log2(3.0)));
    for (int n = 2; n <= 10; ++n) CHECK(r.ratios[static_cast<std::size_t>(n)] == doctest::Approx(0.75));
}

TEST_CASE("Weierstrass pair below the threshold is flagged uncertified")
{
    const ScalarField w = field("weier(0.7, 2, 24, x + y)");
    CHECK(w.alpha() == 0.7);
    const auto r = phi_limit(presets::gasket(), w, w, 5);
    CHECK_FALSE(r.certified);
    for (const auto& v : r.phi) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("Hochschild coboundary")
{
    const auto g = presets::gasket();
    const ScalarField one = constant_field(1.0);
    const ScalarField a = field("sin(x) + y"), b = field("exp(y) * x");
    for (int n = 1; n <= 5; ++n) CHECK(same_bits(hochschild_b(g, one, a, b, n), Complex(0.0, 0.0)));

    // b phi_n reduces to the sum of k df dg dh over I_n, computed here directly
    const ScalarField x = coordinate_x(), y = coordinate_y();
    const ScalarField xy = field("x*y");
    const auto s = chain::chain_levels(g, 3);
    Complex direct = 0.0;
    for (const auto& t : s.inner.terms()) {
        const Point2 p = s.inner.point(t.segment.tail), q = s.inner.point(t.segment.head);
        direct += static_cast<double>(t.coeff) * (x(q) - x(p)) * (y(q) - y(p)) * (xy(q) - xy(p));
    }
    CHECK(std::abs(hochschild_b(s.inner, x, y, xy) - direct) < 1e-15);

    LevelSequence seq(g, 8);
    const auto h = hochschild_series(seq, x, x, x);
    CHECK(h.rho_theory == doctest::Approx(0.375));
    for (int n = 4; n <= 8; ++n) {
        const double r = h.ratios[static_cast<std::size_t>(n)];
        CHECK(r > 0.33);
        CHECK(r < 0.43);
    }
}

TEST_CASE("level sequence respects the depth limit")
{
    CHECK_THROWS_AS(LevelSequence(presets::gasket().with_depth_limit(3), 4), structure::DepthLimitError);
    const LevelSequence ok(presets::gasket(), 3);
    CHECK(ok.max_level() == 3);
}

TEST_CASE("wedge values are sums of the component values")
{
    const auto w = presets::load_preset("gasket-wedge");
    REQUIRE(w.components.size() == 2);
    std::vector<LevelSequence> parts;
    for (const auto& c : w.components) parts.emplace_back(c, 3);
    const ScalarField f = field("x*y"), g = field("cos(x) + y");
    const auto total = phi_limit(parts, f, g);
    for (int n = 0; n <= 3; ++n) {
        const Complex want = phi_n(w.components[0], f, g, n) + phi_n(w.components[1], f, g, n);
        CHECK(std::abs(total.phi[static_cast<std::size_t>(n)] - want) < 1e-15);
    }
}

TEST_CASE("Hoelder estimate and enumeration independence")
{
    const auto g = presets::gasket();
    const double c = holder_estimate(coordinate_x(), g, 1.0, 3);
    CHECK(c <= 1.0 + 1e-12);
    CHECK(c >= 0.999);

    const auto linear = independence_check(g, coordinate_x(), coordinate_y(), 4, 9);
    CHECK(linear.passed());
    CHECK(linear.permuted_diff == 0.0);
    CHECK(linear.subdivided_diff < 1e-15);
    CHECK(linear.lemma_bound == doctest::Approx(4 * std::pow(0.75, 4)));

    const auto smooth = independence_check(
        g, field("sin(x) + y^2").with_holder_constant(2.5, true),
        field("exp(x*y)").with_holder_constant(3.0, true), 5, 21);
    CHECK(smooth.passed());
    CHECK(smooth.lemma_bound == doctest::Approx(4 * 2.5 * 3.0 * std::pow(0.75, 5)));
}

TEST_CASE("product fields")
{
    const auto pts = level_vertices(presets::gasket(), 2);
    CHECK(pts.size() == 15);
    const ScalarField p = product(coordinate_x(), coordinate_y(), pts);
    CHECK(p({0.5, 2.0}) == Complex(1.0, 0.0));
    REQUIRE(p.holder_constant().has_value());
    CHECK_FALSE(p.constant_is_analytic());
    // sup |y| + sup |x| over the gasket vertices
    CHECK(*p.holder_constant() == doctest::Approx(std::sqrt(3.0) / 2 + 1.0));
    CHECK_FALSE(product(coordinate_x(), coordinate_y()).holder_constant().has_value());
}
