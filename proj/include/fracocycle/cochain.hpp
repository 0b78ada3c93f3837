#pragma once

#include "fracocycle/chain.hpp"
#include "fracocycle/structure.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracocycle::cochain {

using Complex = std::complex<double>;
using geom::Point2;

/// Componentwise complex product, written out so that mul(a, b) and mul(b, a)
/// agree bit for bit and mul(1, b) == b.
inline Complex mul(Complex a, Complex b)
{
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

/// Complex-valued function on the plane carrying its Hoelder exponent and,
/// when known, its Hoelder constant.
class ScalarField {
public:
    using Evaluator = std::function<Complex(Point2)>;

    ScalarField(Evaluator f, double alpha, std::string label = "");

    Complex operator()(Point2 p) const { return eval_(p); }
    double alpha() const { return alpha_; }
    const std::string& label() const { return label_; }

    std::optional<double> holder_constant() const { return constant_; }
    /// True when the constant is exact, false when it was estimated from samples.
    bool constant_is_analytic() const { return analytic_; }

    ScalarField with_holder_constant(double c, bool analytic) const;
    ScalarField with_alpha(double alpha) const;

private:
    Evaluator eval_;
    double alpha_;
    std::string label_;
    std::optional<double> constant_;
    bool analytic_ = false;
};

ScalarField constant_field(Complex c);
ScalarField coordinate_x();
ScalarField coordinate_y();

/// Pointwise product; exponent is the smaller one, constant left unknown.
ScalarField product(const ScalarField& f, const ScalarField& g);
/// Pointwise product with constant c_f sup|g| + c_g sup|f|, sups taken over
/// `sup_sample` (flagged as an estimate).
ScalarField product(const ScalarField& f, const ScalarField& g, std::span<const Point2> sup_sample);
/// a f + g
ScalarField linear_combination(Complex a, const ScalarField& f, const ScalarField& g);

// ---------------------------------------------------------------------------
// Alexander-Spanier degree 0/1 calculus on a single oriented segment.

using OneCochain = std::function<Complex(Point2, Point2)>;

Complex delta0(const ScalarField& f, Point2 tail, Point2 head);
OneCochain delta(const ScalarField& f);
/// (f u c)(x0, x1) = f(x0) c(x0, x1)
OneCochain cup(const ScalarField& f, OneCochain c);
/// (c u g)(x0, x1) = c(x0, x1) g(x1)
OneCochain cup(OneCochain c, const ScalarField& g);

/// (f u dg - g u df) on [tail, head], i.e. f(t)(g(h)-g(t)) - g(t)(f(h)-f(t)),
/// evaluated exactly and rounded once.
Complex omega(const ScalarField& f, const ScalarField& g, Point2 tail, Point2 head);

/// omega(f, g) summed over the terms of a chain with their coefficients, exactly.
Complex evaluate_omega(const chain::Chain1& c, const ScalarField& f, const ScalarField& g);

/// Sum of |coeff x omega| over the terms; the natural magnitude of evaluate_omega.
double omega_mass(const chain::Chain1& c, const ScalarField& f, const ScalarField& g);

// ---------------------------------------------------------------------------

/// Chain level sets 0..n_max of one structure, built once and reused.
class LevelSequence {
public:
    LevelSequence(const structure::CellularStructure& cs, int n_max);

    const structure::CellularStructure& structure() const { return cs_; }
    int max_level() const { return static_cast<int>(levels_.size()) - 1; }
    const chain::ChainLevelSet& at(int n) const { return levels_.at(static_cast<std::size_t>(n)); }

private:
    structure::CellularStructure cs_;
    std::vector<chain::ChainLevelSet> levels_;
};

/// phi_n(f, g) = omega(f, g)(I_n). Throws DepthLimitError.
Complex phi_n(const structure::CellularStructure& cs, const ScalarField& f, const ScalarField& g,
              int n);

enum class Extrapolation { None, Theory, Aitken };

std::string to_string(Extrapolation e);

struct ConvergenceReport {
    std::vector<int> levels;
    std::vector<Complex> phi;
    std::vector<double> diffs;   // |phi_n - phi_{n-1}|; NaN at n = 0
    std::vector<double> ratios;  // diffs_n / diffs_{n-1}; NaN when undefined
    double alpha = 1.0;
    double dimension = 0.0;
    double rho_theory = 0.0;    // sum_j r_j^(2 alpha)
    double rho_observed = 0.0;  // last ratio (NaN when undefined)
    double rho_fitted = 0.0;    // exp of least-squares slope of log diffs over the last levels
    Extrapolation method = Extrapolation::None;
    Complex rho_used;           // ratio used for the geometric tail
    Complex phi_limit;
    double err_bound = 0.0;     // infinite when uncertified
    bool certified = false;
};

/// Builds the report from a phi sequence. The tail is extrapolated with the
/// observed (complex) ratio when the last two agree within 5%, otherwise with
/// rho_theory; err_bound = |d_N| rho/(1-rho) with rho = max(rho_theory,
/// last observed ratio).
ConvergenceReport make_report(std::vector<Complex> phi, double rho_theory, double dimension,
                              double alpha);

ConvergenceReport phi_limit(const structure::CellularStructure& cs, const ScalarField& f,
                            const ScalarField& g, int n_max);
ConvergenceReport phi_limit(const LevelSequence& levels, const ScalarField& f,
                            const ScalarField& g);
/// Element-wise sum over components (wedge sums).
ConvergenceReport phi_limit(std::span<const LevelSequence> components, const ScalarField& f,
                            const ScalarField& g);

/// b phi_n(f, g, h) = phi_n(fg, h) - phi_n(f, gh) + phi_n(hf, g).
Complex hochschild_b(const chain::Chain1& inner, const ScalarField& f, const ScalarField& g,
                     const ScalarField& h);
Complex hochschild_b(const structure::CellularStructure& cs, const ScalarField& f,
                     const ScalarField& g, const ScalarField& h, int n);

struct HochschildSeries {
    std::vector<int> levels;
    std::vector<Complex> values;
    std::vector<double> ratios;  // |b_n| / |b_{n-1}|
    double rho_theory = 0.0;     // sum_j r_j^(3 alpha)
};

HochschildSeries hochschild_series(const LevelSequence& levels, const ScalarField& f,
                                   const ScalarField& g, const ScalarField& h);
HochschildSeries hochschild_series(std::span<const LevelSequence> components,
                                   const ScalarField& f, const ScalarField& g,
                                   const ScalarField& h);

/// phi_n(f, g) == -phi_n(g, f) bit for bit.
bool cyclic_check(const structure::CellularStructure& cs, const ScalarField& f,
                  const ScalarField& g, int n);

/// Lower bound on the Hoelder constant: max |f(p)-f(q)| / d(p,q)^alpha over
/// level-n_sample vertex pairs (all pairs, or 10^6 seeded random pairs).
double holder_estimate(const ScalarField& f, const structure::CellularStructure& cs, double alpha,
                       int n_sample, std::uint64_t seed = 0);

struct IndependenceResult {
    Complex canonical;
    Complex permuted;
    Complex subdivided;
    double permuted_diff = 0.0;
    double permuted_tol = 0.0;
    double subdivided_diff = 0.0;
    double subdivided_tol = 0.0;
    /// 4 c_f c_g d^(2 alpha) (sum r^(2 alpha))^n, NaN when a constant is unknown.
    double lemma_bound = 0.0;
    bool permuted_ok = false;
    bool subdivided_ok = false;
    bool passed() const { return permuted_ok && subdivided_ok; }
};

/// Recomputes phi_n from a shuffled cell enumeration and from I_n with every
/// segment split at its midpoint.
IndependenceResult independence_check(const structure::CellularStructure& cs,
                                      const ScalarField& f, const ScalarField& g, int n,
                                      std::uint64_t seed);

/// Distinct vertices of the level-n cells.
std::vector<Point2> level_vertices(const structure::CellularStructure& cs, int n);

}  // namespace fracocycle::cochain
