// Independent oracles used by the test suites. Everything here recomputes
// quantities from first principles (factorials, naive double loops,
// adaptive quadrature, exhaustive grids) without touching the library's
// computation paths.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

inline double pmf(int m, int k, double p) {
    const double coeff = factorial(m) / (factorial(k) * factorial(m - k));
    return coeff * std::pow(p, k) * std::pow(1.0 - p, m - k);
}

inline double cdf(int m, int k, double p) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
        acc += pmf(m, j, p);
    }
    return acc;
}

// Adaptive Simpson on [a, b] to the given absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    struct Impl {
        const std::function<double(double)>& f;
        double run(double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) const {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth > 40 || std::abs(left + right - whole) <= 15.0 * tol) {
                return left + right + (left + right - whole) / 15.0;
            }
            return run(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
                   run(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
        }
    };
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Impl{f}.run(a, b, fa, fm, fb, whole, tol, 0);
}

// The weighted CvM loss written exactly as defined: both sums explicit.
inline double cvm_naive(int m, const std::vector<int>& x, const std::vector<double>& d,
                        double p) {
    double total = 0.0;
    for (int k = 0; k <= m; ++k) {
        double inner = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            inner += d[i] * ((x[i] <= k ? 1.0 : 0.0) - cdf(m, k, p));
        }
        total += inner * inner;
    }
    return total;
}

// Exhaustive minimizer over an inclusive uniform grid; returns the best
// grid point and value.
struct GridMin {
    double argmin;
    double value;
};

inline GridMin grid_minimum(const std::function<double(double)>& f, double lo, double hi,
                            int points) {
    GridMin best{lo, f(lo)};
    for (int i = 1; i < points; ++i) {
        const double x = lo + (hi - lo) * i / (points - 1);
        const double v = f(x);
        if (v < best.value) {
            best = {x, v};
        }
    }
    return best;
}

} // namespace oracle
