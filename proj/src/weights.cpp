#include "bmde/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bmde {

WeightVector::WeightVector(std::vector<double> d) : d_(std::move(d)) {
    if (d_.empty()) {
        throw std::invalid_argument("weight vector must be non-empty");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    double max_sq = 0.0;
    for (double v : d_) {
        sum += v;
        const double sq = v * v;
        sum_sq += sq;
        if (sq > max_sq) {
            max_sq = sq;
        }
    }
    if (!(std::abs(sum_sq - 1.0) <= 1e-10)) {
        throw std::invalid_argument("squared weights must sum to 1 (got " +
                                    std::to_string(sum_sq) + ")");
    }
    sum_ = sum;
    max_squared_ = max_sq;
}

WeightVector WeightVector::uniform(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("weight vector must be non-empty");
    }
    return WeightVector(std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n))));
}

} // namespace bmde
