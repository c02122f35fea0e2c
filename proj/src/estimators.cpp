#include "bmde/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bmde/optimize.hpp"

namespace bmde {

namespace {

void check_open_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("p must lie in (0, 1), got " + std::to_string(p));
    }
}

void check_disparity(const DisparityParams& params) {
    if (!(params.c1 > 0.0 && params.c1 < params.c2)) {
        throw std::invalid_argument("disparity knots require 0 < c1 < c2");
    }
}

// Weighted ecdf numerators, prefix[k] = sum_i d_i I(X_i <= k), built once
// per sample so each loss evaluation is O(m).
std::vector<double> weighted_prefix(const Sample& sample, const WeightVector& weights) {
    if (weights.size() != sample.size()) {
        throw std::invalid_argument("weight count (" + std::to_string(weights.size()) +
                                    ") does not match sample size (" +
                                    std::to_string(sample.size()) + ")");
    }
    const int m = sample.model().trials();
    std::vector<double> prefix(m + 1, 0.0);
    const auto& obs = sample.observations();
    for (std::size_t i = 0; i < obs.size(); ++i) {
        prefix[obs[i]] += weights[i];
    }
    for (int k = 1; k <= m; ++k) {
        prefix[k] += prefix[k - 1];
    }
    return prefix;
}

double cvm_from_prefix(const BinomialModel& model, const std::vector<double>& prefix,
                       double weight_sum, double p) {
    const int m = model.trials();
    const double odds = p / (1.0 - p);
    double f = std::pow(1.0 - p, m);
    double cdf = f;
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
        const double term = prefix[k] - weight_sum * cdf;
        acc += term * term;
        f *= static_cast<double>(m - k) / static_cast<double>(k + 1) * odds;
        cdf += f;
    }
    return acc;
}

EstimateResult clamped_minimum(Estimator method, double argmin, double value, double tol) {
    EstimateResult result;
    result.p_hat = argmin;
    result.method = method;
    result.objective = value;
    result.converged = true;
    result.at_boundary = argmin <= kProbabilityClamp + tol ||
                         argmin >= 1.0 - kProbabilityClamp - tol;
    return result;
}

} // namespace

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::MD: return "md";
        case Estimator::ML: return "ml";
        case Estimator::E: return "e";
    }
    return "?";
}

Sample::Sample(BinomialModel model, std::vector<int> observations)
    : model_(model), obs_(std::move(observations)) {
    if (obs_.empty()) {
        throw std::invalid_argument("sample must be non-empty");
    }
    for (std::size_t i = 0; i < obs_.size(); ++i) {
        if (obs_[i] < 0 || obs_[i] > model_.trials()) {
            throw std::domain_error("observation " + std::to_string(i) + " = " +
                                    std::to_string(obs_[i]) + " outside the support {0..." +
                                    std::to_string(model_.trials()) + "}");
        }
    }
}

std::vector<int> Sample::counts() const {
    std::vector<int> c(model_.trials() + 1, 0);
    for (int x : obs_) {
        ++c[x];
    }
    return c;
}

double Sample::mean() const {
    return std::accumulate(obs_.begin(), obs_.end(), 0.0) / static_cast<double>(obs_.size());
}

CvmObjective::CvmObjective(const Sample& sample, const WeightVector& weights)
    : model_(sample.model()),
      prefix_(weighted_prefix(sample, weights)),
      weight_sum_(weights.sum()) {}

double CvmObjective::operator()(double p) const {
    check_open_probability(p);
    return cvm_from_prefix(model_, prefix_, weight_sum_, p);
}

double cvm_distance(const Sample& sample, const WeightVector& weights, double p) {
    return CvmObjective(sample, weights)(p);
}

EstimateResult estimate_md(const Sample& sample, const WeightVector& weights, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("tol must be positive");
    }
    const CvmObjective loss(sample, weights);
    const ScalarMinimum min =
        minimize_scalar(loss, kProbabilityClamp, 1.0 - kProbabilityClamp, tol);
    return clamped_minimum(Estimator::MD, min.argmin, min.value, tol);
}

EstimateResult estimate_ml(const Sample& sample) {
    const double raw = sample.mean() / sample.model().trials();
    EstimateResult result;
    result.method = Estimator::ML;
    result.objective = 0.0;
    result.converged = true;
    result.p_hat = std::clamp(raw, kProbabilityClamp, 1.0 - kProbabilityClamp);
    result.at_boundary = result.p_hat != raw;
    return result;
}

double rho(double x, const DisparityParams& params) {
    check_disparity(params);
    if (!(x >= 0.0)) {
        throw std::domain_error("rho is defined for x >= 0, got " + std::to_string(x));
    }
    if (x < params.c1) {
        return (std::log(params.c1) + 1.0) * x - params.c1;
    }
    if (x > params.c2) {
        return (std::log(params.c2) + 1.0) * x - params.c2;
    }
    return x > 0.0 ? x * std::log(x) : 0.0;
}

namespace {

// Disparity written per branch as a function of (f_n, f) directly; this is
// rho(f_n/f) * f without forming the ratio, so cells where f underflows
// stay finite.
double disparity_from_counts(const BinomialModel& model, const std::vector<double>& empirical,
                             double p, const DisparityParams& params) {
    const std::vector<double> pmf = model.pmf_table(p);
    const double log_c1 = std::log(params.c1);
    const double log_c2 = std::log(params.c2);
    double acc = 0.0;
    for (int k = 0; k <= model.trials(); ++k) {
        const double fn = empirical[k];
        const double f = pmf[k];
        if (fn == 0.0 && f == 0.0) {
            continue;
        }
        const double ratio = fn / f;
        if (ratio < params.c1) {
            acc += (log_c1 + 1.0) * fn - params.c1 * f;
        } else if (ratio <= params.c2) {
            acc += fn * std::log(ratio);
        } else {
            acc += (log_c2 + 1.0) * fn - params.c2 * f;
        }
    }
    return acc;
}

std::vector<double> empirical_pmf(const Sample& sample) {
    const std::vector<int> counts = sample.counts();
    std::vector<double> fn(counts.size());
    const double n = static_cast<double>(sample.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        fn[k] = counts[k] / n;
    }
    return fn;
}

} // namespace

double likelihood_disparity(const Sample& sample, double p, const DisparityParams& params) {
    check_open_probability(p);
    check_disparity(params);
    return disparity_from_counts(sample.model(), empirical_pmf(sample), p, params);
}

EstimateResult estimate_e(const Sample& sample, const DisparityParams& params, double tol) {
    check_disparity(params);
    if (!(tol > 0.0)) {
        throw std::invalid_argument("tol must be positive");
    }
    const std::vector<double> fn = empirical_pmf(sample);
    const BinomialModel& model = sample.model();
    const auto disparity = [&](double p) {
        return disparity_from_counts(model, fn, p, params);
    };
    const ScalarMinimum min =
        minimize_scalar(disparity, kProbabilityClamp, 1.0 - kProbabilityClamp, tol);
    return clamped_minimum(Estimator::E, min.argmin, min.value, tol);
}

} // namespace bmde
