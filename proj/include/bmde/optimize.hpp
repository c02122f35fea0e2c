#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace bmde {

struct ScalarMinimum {
    double argmin;
    double value;
};

/// Thrown when the objective returns NaN or infinity; carries the abscissa.
class NonFiniteObjectiveError : public std::runtime_error {
public:
    explicit NonFiniteObjectiveError(double x)
        : std::runtime_error("objective is non-finite at x = " + std::to_string(x)),
          abscissa_(x) {}

    double abscissa() const { return abscissa_; }

private:
    double abscissa_;
};

/// Bounded scalar minimization: a 201-point scan locates the best bracket,
/// golden-section refinement shrinks it below tol. Ties go to the smaller
/// argument (a constant objective returns lo). Deterministic.
template <class F>
ScalarMinimum minimize_scalar(F&& objective, double lo, double hi, double tol) {
    if (!(lo < hi)) {
        throw std::invalid_argument("minimize_scalar: need lo < hi");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("minimize_scalar: need tol > 0");
    }

    double best_x = lo;
    double best_f = std::numeric_limits<double>::infinity();
    auto eval = [&](double x) {
        const double f = objective(x);
        if (!std::isfinite(f)) {
            throw NonFiniteObjectiveError(x);
        }
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        return f;
    };

    constexpr int kGridPoints = 201;
    const double step = (hi - lo) / (kGridPoints - 1);
    int best_index = 0;
    double best_grid_f = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGridPoints; ++i) {
        const double x = (i == kGridPoints - 1) ? hi : lo + i * step;
        const double f = eval(x);
        if (f < best_grid_f) {
            best_grid_f = f;
            best_index = i;
        }
    }

    double a = (best_index == 0) ? lo : lo + (best_index - 1) * step;
    double b = (best_index == kGridPoints - 1) ? hi : lo + (best_index + 1) * step;

    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = eval(x2);
        }
    }
    return {best_x, best_f};
}

} // namespace bmde
