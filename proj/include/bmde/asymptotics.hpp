#pragma once

#include <vector>

#include "bmde/binomial.hpp"
#include "bmde/estimators.hpp"

namespace bmde {

struct AsymptoticSummary {
    double covariance;   // C(p): variance of the score-like sum
    double gamma;        // Gamma(p) = 2 sum_k c_k(p)^2, the loss curvature limit
    double avar_md;      // asymptotic variance of sqrt(n) (p_hat_MD - p)
    double avar_ml;      // p(1-p)/m
};

/// C(p) = sum_{i,j} c_i c_j [F(i ^ j) - F(i) F(j)], the variance of
/// sum_k c_k {I(X <= k) - F(k)}.
double covariance_c(const BinomialModel& model, double p);

/// Gamma(p) = 2 sum_k c_k(p)^2.
double gamma_factor(const BinomialModel& model, double p);

/// Sandwich variance C(p) / (sum_k c_k(p)^2)^2. At m = 1 this reduces to
/// p(1-p) exactly, matching ML.
double asymptotic_variance_md(const BinomialModel& model, double p);

/// p(1-p)/m.
double asymptotic_variance_ml(const BinomialModel& model, double p);

AsymptoticSummary asymptotic_summary(const BinomialModel& model, double p);

/// Alternate normalizations of C against the curvature, retained for
/// numerical comparison; `sandwich` is the one every consumer uses (it is
/// the only one consistent with the influence function, and the only one
/// the Monte Carlo variance reproduces).
struct MdVarianceVariants {
    double sandwich;         // C / (sum c_k^2)^2
    double quarter_squared;  // C / (4 (sum c_k^2)^2)
    double quarter_linear;   // C / (4 (sum c_k)^2)
};

MdVarianceVariants md_variance_variants(const BinomialModel& model, double p);

/// 2 Gamma^{-1} sum_k c_k {I(z <= k) - F(k)}; mean-zero under the model and
/// bounded by influence_md_bound.
double influence_md(const BinomialModel& model, double p, int z);

/// z/m - p, unbounded as m grows.
double influence_ml(const BinomialModel& model, double p, int z);

/// 2 Gamma^{-1} sum_k c_k, a uniform bound on |influence_md|.
double influence_md_bound(const BinomialModel& model, double p);

struct ConfidenceInterval {
    double lo;
    double hi;
    double level;
    bool degenerate;   // the point estimate sat on the clamp boundary
};

/// Wald-type interval around the MD estimate using the plug-in variance
/// asymptotic_variance_md(m, p_hat)/n, truncated to [0, 1].
ConfidenceInterval confidence_interval(const Sample& sample, double level);

struct VariancePoint {
    double p;
    double avar_md;
    double avar_ml;
};

std::vector<VariancePoint> variance_curve(const BinomialModel& model,
                                          const std::vector<double>& p_grid);

} // namespace bmde
