#include "fracocycle/cochain.hpp"

#include "fracocycle/exact_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

namespace fracocycle::cochain {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double inf = std::numeric_limits<double>::infinity();

struct Values {
    Complex f;
    Complex g;
};

/// Adds k * (f_t g_h - g_t f_h), real part into re and imaginary part into im.
void accumulate(ExactSum& re, ExactSum& im, const Values& t, const Values& h, long k)
{
    const double s = k > 0 ? 1.0 : -1.0;
    for (long rep = 0; rep < std::labs(k); ++rep) {
        re.add_product(s * t.f.real(), h.g.real());
        re.add_product(-s * t.f.imag(), h.g.imag());
        re.add_product(-s * t.g.real(), h.f.real());
        re.add_product(s * t.g.imag(), h.f.imag());

        im.add_product(s * t.f.real(), h.g.imag());
        im.add_product(s * t.f.imag(), h.g.real());
        im.add_product(-s * t.g.real(), h.f.imag());
        im.add_product(-s * t.g.imag(), h.f.real());
    }
}

std::unordered_map<geom::SnapKey, Values, geom::SnapKeyHash>
evaluate_at_vertices(const chain::Chain1& c, const ScalarField& f, const ScalarField& g)
{
    std::unordered_map<geom::SnapKey, Values, geom::SnapKeyHash> vals;
    vals.reserve(c.vertices().size());
    for (const auto& [k, p] : c.vertices()) vals.emplace(k, Values{f(p), g(p)});
    return vals;
}

double min_alpha(const ScalarField& f, const ScalarField& g) { return std::min(f.alpha(), g.alpha()); }

double sum_powers(std::span<const double> ratios, double s)
{
    double sum = 0.0;
    for (double r : ratios) sum += std::pow(r, s);
    return sum;
}

std::vector<LevelSequence> single(const LevelSequence& l) { return {l}; }

}  // namespace

// ---------------------------------------------------------------------------

ScalarField::ScalarField(Evaluator f, double alpha, std::string label)
    : eval_(std::move(f)), alpha_(alpha), label_(std::move(label))
{
    if (!eval_) throw std::invalid_argument("ScalarField: empty evaluator");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("ScalarField: Hoelder exponent must lie in (0, 1]");
}

ScalarField ScalarField::with_holder_constant(double c, bool analytic) const
{
    ScalarField out = *this;
    out.constant_ = c;
    out.analytic_ = analytic;
    return out;
}

ScalarField ScalarField::with_alpha(double alpha) const
{
    ScalarField out(eval_, alpha, label_);
    return out;
}

ScalarField constant_field(Complex c)
{
    return ScalarField([c](Point2) { return c; }, 1.0, "const").with_holder_constant(0.0, true);
}

ScalarField coordinate_x()
{
    return ScalarField([](Point2 p) { return Complex(p.x, 0.0); }, 1.0, "x").with_holder_constant(1.0, true);
}

ScalarField coordinate_y()
{
    return ScalarField([](Point2 p) { return Complex(p.y, 0.0); }, 1.0, "y").with_holder_constant(1.0, true);
}

ScalarField product(const ScalarField& f, const ScalarField& g)
{
    return ScalarField([f, g](Point2 p) { return mul(f(p), g(p)); }, min_alpha(f, g),
                       "(" + f.label() + ")*(" + g.label() + ")");
}

ScalarField product(const ScalarField& f, const ScalarField& g, std::span<const Point2> sup_sample)
{
    ScalarField out = product(f, g);
    if (!f.holder_constant() || !g.holder_constant()) return out;
    double sup_f = 0.0, sup_g = 0.0;
    for (const Point2& p : sup_sample) {
        sup_f = std::max(sup_f, std::abs(f(p)));
        sup_g = std::max(sup_g, std::abs(g(p)));
    }
    return out.with_holder_constant(*f.holder_constant() * sup_g + *g.holder_constant() * sup_f, false);
}

ScalarField linear_combination(Complex a, const ScalarField& f, const ScalarField& g)
{
    return ScalarField([a, f, g](Point2 p) { return mul(a, f(p)) + g(p); }, min_alpha(f, g),
                       "lincomb");
}

// ---------------------------------------------------------------------------

Complex delta0(const ScalarField& f, Point2 tail, Point2 head) { return f(head) - f(tail); }

OneCochain delta(const ScalarField& f)
{
    return [f](Point2 t, Point2 h) { return delta0(f, t, h); };
}

OneCochain cup(const ScalarField& f, OneCochain c)
{
    return [f, c = std::move(c)](Point2 t, Point2 h) { return mul(f(t), c(t, h)); };
}

OneCochain cup(OneCochain c, const ScalarField& g)
{
    return [g, c = std::move(c)](Point2 t, Point2 h) { return mul(c(t, h), g(h)); };
}

Complex omega(const ScalarField& f, const ScalarField& g, Point2 tail, Point2 head)
{
    // f_t (g_h - g_t) - g_t (f_h - f_t) = f_t g_h - g_t f_h
    ExactSum re, im;
    accumulate(re, im, {f(tail), g(tail)}, {f(head), g(head)}, 1);
    return {re.value(), im.value()};
}

Complex evaluate_omega(const chain::Chain1& c, const ScalarField& f, const ScalarField& g)
{
    const auto vals = evaluate_at_vertices(c, f, g);
    ExactSum re, im;
    for (const auto& t : c.terms())
        accumulate(re, im, vals.at(t.segment.tail), vals.at(t.segment.head), t.coeff);
    return {re.value(), im.value()};
}

double omega_mass(const chain::Chain1& c, const ScalarField& f, const ScalarField& g)
{
    const auto vals = evaluate_at_vertices(c, f, g);
    double mass = 0.0;
    for (const auto& t : c.terms()) {
        ExactSum re, im;
        accumulate(re, im, vals.at(t.segment.tail), vals.at(t.segment.head), t.coeff);
        mass += std::abs(Complex(re.value(), im.value()));
    }
    return mass;
}

// ---------------------------------------------------------------------------

LevelSequence::LevelSequence(const structure::CellularStructure& cs, int n_max) : cs_(cs)
{
    if (n_max < 0) throw std::invalid_argument("LevelSequence: negative level");
    if (n_max > cs.depth_limit())
        throw structure::DepthLimitError("level " + std::to_string(n_max) + " exceeds the depth limit " +
                                             std::to_string(cs.depth_limit()) + " of " + cs.name(),
                                         n_max, cs.depth_limit());
    levels_.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) levels_.push_back(chain::chain_levels(cs_, n));
}

Complex phi_n(const structure::CellularStructure& cs, const ScalarField& f, const ScalarField& g, int n)
{
    return evaluate_omega(chain::chain_levels(cs, n).inner, f, g);
}

std::string to_string(Extrapolation e)
{
    switch (e) {
    case Extrapolation::None: return "none";
    case Extrapolation::Theory: return "theory";
    case Extrapolation::Aitken: return "aitken";
    }
    return "?";
}

ConvergenceReport make_report(std::vector<Complex> phi, double rho_theory, double dimension, double alpha)
{
    if (phi.empty()) throw std::invalid_argument("make_report: empty sequence");
    ConvergenceReport r;
    r.alpha = alpha;
    r.dimension = dimension;
    r.rho_theory = rho_theory;
    r.certified = 2.0 * alpha > dimension;
    const std::size_t count = phi.size();
    for (std::size_t i = 0; i < count; ++i) {
        r.levels.push_back(static_cast<int>(i));
        r.diffs.push_back(i == 0 ? nan : std::abs(phi[i] - phi[i - 1]));
        if (i >= 2 && r.diffs[i - 1] > 0.0)
            r.ratios.push_back(r.diffs[i] / r.diffs[i - 1]);
        else
            r.ratios.push_back(nan);
    }
    r.phi = std::move(phi);
    const std::size_t N = count - 1;
    r.rho_observed = r.ratios[N];
    r.phi_limit = r.phi[N];
    r.rho_used = 0.0;

    // log-linear fit of the last few differences
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (std::size_t i = (N > 5 ? N - 5 : 1); i <= N && i >= 1; ++i) {
            if (!(r.diffs[i] > 0.0) || !std::isfinite(r.diffs[i])) continue;
            const double x = static_cast<double>(i), y = std::log(r.diffs[i]);
            sx += x, sy += y, sxx += x * x, sxy += x * y;
            ++m;
        }
        const double den = m * sxx - sx * sx;
        r.rho_fitted = (m >= 2 && den != 0.0) ? std::exp((m * sxy - sx * sy) / den) : nan;
    }

    if (N == 0) {
        r.err_bound = inf;
        return r;
    }
    const Complex dN = r.phi[N] - r.phi[N - 1];
    bool aitken = false;
    if (N >= 3) {
        const Complex dP = r.phi[N - 1] - r.phi[N - 2];
        const Complex dPP = r.phi[N - 2] - r.phi[N - 3];
        if (dP != 0.0 && dPP != 0.0) {
            const Complex qN = dN / dP;
            const Complex qP = dP / dPP;
            if (std::abs(qN) < 1.0 && std::abs(qN - qP) <= 0.05 * std::abs(qN)) {
                r.method = Extrapolation::Aitken;
                r.rho_used = qN;
                r.phi_limit = r.phi[N] + dN * qN / (1.0 - qN);
                aitken = true;
            }
        }
    }
    if (!aitken && r.certified && rho_theory < 1.0) {
        r.method = Extrapolation::Theory;
        r.rho_used = rho_theory;
        r.phi_limit = r.phi[N] + dN * (rho_theory / (1.0 - rho_theory));
    }

    double rho_bound = rho_theory;
    if (std::isfinite(r.rho_observed)) rho_bound = std::max(rho_bound, r.rho_observed);
    if (r.certified && rho_bound < 1.0)
        r.err_bound = std::abs(dN) * rho_bound / (1.0 - rho_bound);
    else
        r.err_bound = inf;
    return r;
}

ConvergenceReport phi_limit(const structure::CellularStructure& cs, const ScalarField& f,
                            const ScalarField& g, int n_max)
{
    return phi_limit(LevelSequence(cs, n_max), f, g);
}

ConvergenceReport phi_limit(const LevelSequence& levels, const ScalarField& f, const ScalarField& g)
{
    const auto one = single(levels);
    return phi_limit(std::span<const LevelSequence>(one), f, g);
}

ConvergenceReport phi_limit(std::span<const LevelSequence> components, const ScalarField& f,
                            const ScalarField& g)
{
    if (components.empty()) throw std::invalid_argument("phi_limit: no components");
    const int n_max = components.front().max_level();
    const double alpha = min_alpha(f, g);
    double rho = 0.0, dim = 0.0;
    for (const auto& c : components) {
        if (c.max_level() != n_max) throw std::invalid_argument("phi_limit: components differ in depth");
        const auto ratios = c.structure().ratios();
        rho = std::max(rho, sum_powers(ratios, 2.0 * alpha));
        dim = std::max(dim, structure::moran_dimension(ratios));
    }
    std::vector<Complex> phi;
    for (int n = 0; n <= n_max; ++n) {
        Complex sum = 0.0;
        for (const auto& c : components) sum += evaluate_omega(c.at(n).inner, f, g);
        phi.push_back(sum);
    }
    return make_report(std::move(phi), rho, dim, alpha);
}

// ---------------------------------------------------------------------------

Complex hochschild_b(const chain::Chain1& inner, const ScalarField& f, const ScalarField& g,
                     const ScalarField& h)
{
    return evaluate_omega(inner, product(f, g), h) - evaluate_omega(inner, f, product(g, h)) +
           evaluate_omega(inner, product(h, f), g);
}

Complex hochschild_b(const structure::CellularStructure& cs, const ScalarField& f, const ScalarField& g,
                     const ScalarField& h, int n)
{
    return hochschild_b(chain::chain_levels(cs, n).inner, f, g, h);
}

HochschildSeries hochschild_series(const LevelSequence& levels, const ScalarField& f, const ScalarField& g,
                                   const ScalarField& h)
{
    const auto one = single(levels);
    return hochschild_series(std::span<const LevelSequence>(one), f, g, h);
}

HochschildSeries hochschild_series(std::span<const LevelSequence> components, const ScalarField& f,
                                   const ScalarField& g, const ScalarField& h)
{
    if (components.empty()) throw std::invalid_argument("hochschild_series: no components");
    HochschildSeries s;
    const double alpha = std::min({f.alpha(), g.alpha(), h.alpha()});
    for (const auto& c : components)
        s.rho_theory = std::max(s.rho_theory, sum_powers(c.structure().ratios(), 3.0 * alpha));
    const int n_max = components.front().max_level();
    for (int n = 0; n <= n_max; ++n) {
        Complex sum = 0.0;
        for (const auto& c : components) sum += hochschild_b(c.at(n).inner, f, g, h);
        s.levels.push_back(n);
        s.values.push_back(sum);
        const double prev = n > 0 ? std::abs(s.values[static_cast<std::size_t>(n) - 1]) : 0.0;
        s.ratios.push_back(prev > 0.0 ? std::abs(sum) / prev : nan);
    }
    return s;
}

bool cyclic_check(const structure::CellularStructure& cs, const ScalarField& f, const ScalarField& g, int n)
{
    const auto levels = chain::chain_levels(cs, n);
    const Complex a = evaluate_omega(levels.inner, f, g);
    const Complex b = evaluate_omega(levels.inner, g, f);
    return a.real() == -b.real() && a.imag() == -b.imag();
}

std::vector<Point2> level_vertices(const structure::CellularStructure& cs, int n)
{
    const auto cells = structure::iterate(cs, n);
    geom::SnapRegistry reg(cs.snap_eps());
    for (const auto& cell : cells.cells)
        for (const auto& v : cell.polygon.vertices()) reg.intern(v);
    std::vector<Point2> pts;
    for (const auto& [k, p] : reg.table()) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    return pts;
}

double holder_estimate(const ScalarField& f, const structure::CellularStructure& cs, double alpha,
                       int n_sample, std::uint64_t seed)
{
    const auto pts = level_vertices(cs, n_sample);
    std::vector<Complex> vals;
    vals.reserve(pts.size());
    for (const auto& p : pts) vals.push_back(f(p));

    double best = 0.0;
    auto consider = [&](std::size_t i, std::size_t j) {
        const double d = geom::distance(pts[i], pts[j]);
        if (d <= 0.0) return;
        best = std::max(best, std::abs(vals[i] - vals[j]) / std::pow(d, alpha));
    };
    const std::size_t m = pts.size();
    constexpr std::size_t max_pairs = 1'000'000;
    if (m < 2) return 0.0;
    if (m * (m - 1) / 2 <= max_pairs) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) consider(i, j);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, m - 1);
        for (std::size_t k = 0; k < max_pairs; ++k) {
            const std::size_t i = pick(rng), j = pick(rng);
            if (i != j) consider(i, j);
        }
    }
    return best;
}

IndependenceResult independence_check(const structure::CellularStructure& cs, const ScalarField& f,
                                      const ScalarField& g, int n, std::uint64_t seed)
{
    IndependenceResult r;
    auto cells = structure::iterate(cs, n);
    const auto canonical = chain::chain_levels(cs, cells);
    r.canonical = evaluate_omega(canonical.inner, f, g);

    std::mt19937_64 rng(seed);
    std::shuffle(cells.cells.begin(), cells.cells.end(), rng);
    const auto shuffled = chain::chain_levels(cs, cells);
    r.permuted = evaluate_omega(shuffled.inner, f, g);
    r.permuted_diff = std::abs(r.permuted - r.canonical);
    r.permuted_tol = 1e-12 * std::max(1.0, omega_mass(canonical.inner, f, g));
    r.permuted_ok = r.permuted_diff <= r.permuted_tol;

    ExactSum re, im;
    const auto& in = canonical.inner;
    for (const auto& t : in.terms()) {
        const Point2 a = in.point(t.segment.tail), b = in.point(t.segment.head);
        const Point2 m = geom::midpoint(a, b);
        const Values va{f(a), g(a)}, vm{f(m), g(m)}, vb{f(b), g(b)};
        accumulate(re, im, va, vm, t.coeff);
        accumulate(re, im, vm, vb, t.coeff);
    }
    r.subdivided = {re.value(), im.value()};
    r.subdivided_diff = std::abs(r.subdivided - r.canonical);

    const double alpha = min_alpha(f, g);
    if (f.holder_constant() && g.holder_constant()) {
        r.lemma_bound = 4.0 * *f.holder_constant() * *g.holder_constant() *
                        std::pow(cs.base().diameter(), 2.0 * alpha) *
                        std::pow(sum_powers(cs.ratios(), 2.0 * alpha), n);
    } else {
        r.lemma_bound = nan;
    }
    r.subdivided_tol = 1e-9 * std::abs(r.canonical) + 1e-12;
    if (std::isfinite(r.lemma_bound)) r.subdivided_tol += r.lemma_bound;
    r.subdivided_ok = r.subdivided_diff <= r.subdivided_tol;
    return r;
}

}  // namespace fracocycle::cochain
