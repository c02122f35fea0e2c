#pragma once

#include <vector>

#include "bmde/binomial.hpp"
#include "bmde/weights.hpp"

namespace bmde {

/// Estimation keeps hats inside [kProbabilityClamp, 1 - kProbabilityClamp];
/// all-success / all-failure samples land on the clamp with a flag instead
/// of failing.
constexpr double kProbabilityClamp = 1e-6;

enum class Estimator { MD, ML, E };

const char* estimator_name(Estimator e);

/// An i.i.d. binomial sample; every observation must lie in {0..m}.
class Sample {
public:
    Sample(BinomialModel model, std::vector<int> observations);

    const BinomialModel& model() const { return model_; }
    const std::vector<int>& observations() const { return obs_; }
    std::size_t size() const { return obs_.size(); }

    /// Histogram over {0..m}.
    std::vector<int> counts() const;
    double mean() const;

private:
    BinomialModel model_;
    std::vector<int> obs_;
};

struct EstimateResult {
    double p_hat = 0.0;
    Estimator method = Estimator::MD;
    double objective = 0.0;   // final loss / disparity; 0 for ML
    bool converged = false;
    bool at_boundary = false;
};

/// Knots of the rho truncation; requires 0 < c1 < c2.
struct DisparityParams {
    double c1 = 0.5;
    double c2 = 2.0;
};

/// Squared distance between the d-weighted empirical cdf and F(.;p),
/// summed over the support (the k = m summand is identically zero).
double cvm_distance(const Sample& sample, const WeightVector& weights, double p);

/// The same loss bound to one (sample, weights) pair: the weighted ecdf is
/// prefix-summed once so each evaluation costs O(m). Value-semantic and
/// immutable, safe to share across threads.
class CvmObjective {
public:
    CvmObjective(const Sample& sample, const WeightVector& weights);

    double operator()(double p) const;

    /// sum_i d_i I(X_i <= k) for k = 0..m.
    const std::vector<double>& weighted_ecdf_prefix() const { return prefix_; }

private:
    BinomialModel model_;
    std::vector<double> prefix_;
    double weight_sum_;
};

/// Minimum-distance estimate: global minimizer of cvm_distance over the
/// clamped interval, located by a 201-point scan plus golden-section
/// refinement to tol in the argument.
EstimateResult estimate_md(const Sample& sample, const WeightVector& weights,
                           double tol = 1e-9);

/// Maximum-likelihood estimate mean(X)/m, clamped with a boundary flag.
EstimateResult estimate_ml(const Sample& sample);

/// Truncated x*log(x): linear with matching slope below c1 and above c2,
/// continuously differentiable at both knots. rho(0) = -c1.
double rho(double x, const DisparityParams& params);

/// H(p, f_n) = sum_k rho(f_n(k)/f(k;p)) f(k;p) over the support.
double likelihood_disparity(const Sample& sample, double p, const DisparityParams& params);

/// Minimizer of the likelihood disparity. With c1 -> 0 and c2 -> inf the
/// disparity is the Kullback-Leibler divergence and the estimate coincides
/// with ML.
EstimateResult estimate_e(const Sample& sample, const DisparityParams& params = {},
                          double tol = 1e-9);

} // namespace bmde
