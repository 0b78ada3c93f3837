#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fracocycle {

/// Exact floating-point accumulator (Shewchuk's non-overlapping partials, as
/// in Python's math.fsum). value() is the correctly rounded exact sum, so the
/// result does not depend on insertion order and negating every input negates
/// the result bit for bit.
class ExactSum {
public:
    void add(double x)
    {
        std::size_t i = 0;
        for (double y : partials_) {
            if (std::abs(x) < std::abs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) partials_[i++] = lo;
            x = hi;
        }
        partials_.resize(i);
        partials_.push_back(x);
    }

    /// Adds a*b exactly (TwoProduct via fma).
    void add_product(double a, double b)
    {
        if (a == 0.0 || b == 0.0) return;
        const double p = a * b;
        const double e = std::fma(a, b, -p);
        add(p);
        if (e != 0.0) add(e);
    }

    double value() const
    {
        if (partials_.empty()) return 0.0;
        std::size_t n = partials_.size();
        double hi = partials_[--n];
        double lo = 0.0;
        while (n > 0) {
            const double x = hi;
            const double y = partials_[--n];
            hi = x + y;
            const double yr = hi - x;
            lo = y - yr;
            if (lo != 0.0) break;
        }
        // half-way case: make rounding respect the remaining partials
        if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
            const double y = lo * 2.0;
            const double x = hi + y;
            const double yr = x - hi;
            if (y == yr) hi = x;
        }
        return hi;
    }

private:
    std::vector<double> partials_;
};

}  // namespace fracocycle
