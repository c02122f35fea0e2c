#pragma once

#include <cstddef>
#include <vector>

namespace bmde {

/// The weight sequence d_1..d_n of the weighted empirical process. The
/// squared weights must sum to 1 (within 1e-10); the uniform choice
/// d_i = 1/sqrt(n) makes sum() == sqrt(n), the usual normalizing rate.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> d);

    static WeightVector uniform(std::size_t n);

    std::size_t size() const { return d_.size(); }
    double operator[](std::size_t i) const { return d_[i]; }
    const std::vector<double>& values() const { return d_; }

    /// Sum of the weights, n * d_bar.
    double sum() const { return sum_; }

    /// max_i d_i^2, reported for diagnostics (it should vanish as n grows).
    double max_squared() const { return max_squared_; }

private:
    std::vector<double> d_;
    double sum_;
    double max_squared_;
};

} // namespace bmde
