#include "bmde/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bmde/normal.hpp"

namespace bmde {

namespace {

void check_open_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("p must lie in (0, 1), got " + std::to_string(p));
    }
}

std::vector<double> coefficient_table(const BinomialModel& model, double p) {
    std::vector<double> c(model.trials() + 1);
    for (int k = 0; k <= model.trials(); ++k) {
        c[k] = model.coefficient_c(k, p);
    }
    return c;
}

} // namespace

double covariance_c(const BinomialModel& model, double p) {
    check_open_probability(p);
    const std::vector<double> c = coefficient_table(model, p);
    const std::vector<double> F = model.cdf_table(p);
    const int m = model.trials();
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
        if (c[i] == 0.0) {
            continue;
        }
        for (int j = 0; j <= m; ++j) {
            acc += c[i] * c[j] * (F[std::min(i, j)] - F[i] * F[j]);
        }
    }
    return acc;
}

double gamma_factor(const BinomialModel& model, double p) {
    check_open_probability(p);
    const std::vector<double> c = coefficient_table(model, p);
    double acc = 0.0;
    for (double v : c) {
        acc += v * v;
    }
    return 2.0 * acc;
}

double asymptotic_variance_md(const BinomialModel& model, double p) {
    check_open_probability(p);
    const std::vector<double> c = coefficient_table(model, p);
    double sum_sq = 0.0;
    for (double v : c) {
        sum_sq += v * v;
    }
    return covariance_c(model, p) / (sum_sq * sum_sq);
}

double asymptotic_variance_ml(const BinomialModel& model, double p) {
    check_open_probability(p);
    return p * (1.0 - p) / model.trials();
}

AsymptoticSummary asymptotic_summary(const BinomialModel& model, double p) {
    AsymptoticSummary s;
    s.covariance = covariance_c(model, p);
    s.gamma = gamma_factor(model, p);
    const double half_gamma = 0.5 * s.gamma;   // sum of c_k^2
    s.avar_md = s.covariance / (half_gamma * half_gamma);
    s.avar_ml = asymptotic_variance_ml(model, p);
    return s;
}

MdVarianceVariants md_variance_variants(const BinomialModel& model, double p) {
    check_open_probability(p);
    const std::vector<double> c = coefficient_table(model, p);
    double sum_sq = 0.0;
    double sum = 0.0;
    for (double v : c) {
        sum_sq += v * v;
        sum += v;
    }
    const double C = covariance_c(model, p);
    MdVarianceVariants v;
    v.sandwich = C / (sum_sq * sum_sq);
    v.quarter_squared = C / (4.0 * sum_sq * sum_sq);
    v.quarter_linear = C / (4.0 * sum * sum);
    return v;
}

double influence_md(const BinomialModel& model, double p, int z) {
    check_open_probability(p);
    if (z < 0 || z > model.trials()) {
        throw std::domain_error("z = " + std::to_string(z) + " outside the support");
    }
    const std::vector<double> c = coefficient_table(model, p);
    const std::vector<double> F = model.cdf_table(p);
    double acc = 0.0;
    for (int k = 0; k <= model.trials(); ++k) {
        acc += c[k] * ((z <= k ? 1.0 : 0.0) - F[k]);
    }
    return 2.0 / gamma_factor(model, p) * acc;
}

double influence_ml(const BinomialModel& model, double p, int z) {
    check_open_probability(p);
    if (z < 0 || z > model.trials()) {
        throw std::domain_error("z = " + std::to_string(z) + " outside the support");
    }
    return static_cast<double>(z) / model.trials() - p;
}

double influence_md_bound(const BinomialModel& model, double p) {
    check_open_probability(p);
    const std::vector<double> c = coefficient_table(model, p);
    double sum = 0.0;
    for (double v : c) {
        sum += v;
    }
    return 2.0 / gamma_factor(model, p) * sum;
}

ConfidenceInterval confidence_interval(const Sample& sample, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    }
    const EstimateResult md = estimate_md(sample, WeightVector::uniform(sample.size()));
    const double avar = asymptotic_variance_md(sample.model(), md.p_hat);
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half_width = z * std::sqrt(avar / static_cast<double>(sample.size()));
    ConfidenceInterval ci;
    ci.lo = std::max(0.0, md.p_hat - half_width);
    ci.hi = std::min(1.0, md.p_hat + half_width);
    ci.level = level;
    ci.degenerate = md.at_boundary;
    return ci;
}

std::vector<VariancePoint> variance_curve(const BinomialModel& model,
                                          const std::vector<double>& p_grid) {
    std::vector<VariancePoint> rows;
    rows.reserve(p_grid.size());
    for (double p : p_grid) {
        check_open_probability(p);
        rows.push_back({p, asymptotic_variance_md(model, p),
                        asymptotic_variance_ml(model, p)});
    }
    return rows;
}

} // namespace bmde
