#include "bmde/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bmde/parallel.hpp"
#include "bmde/sampling.hpp"

namespace bmde {

const char* distribution_name(DistributionKind kind) {
    return kind == DistributionKind::Clean ? "clean" : "contaminated";
}

void ExperimentConfig::validate() const {
    if (m_values.empty()) {
        throw std::invalid_argument("config: need at least one m value");
    }
    for (int m : m_values) {
        BinomialModel model(m);   // throws on a bad trial count
        const int z = z_rule.resolve(m);
        if (z < 0 || z > m) {
            throw std::invalid_argument("config: z = " + std::to_string(z) +
                                        " outside the support of m = " + std::to_string(m));
        }
    }
    if (!(p_true > 0.0 && p_true < 1.0)) {
        throw std::invalid_argument("config: p must lie in (0, 1)");
    }
    if (n_values.empty()) {
        throw std::invalid_argument("config: need at least one n value");
    }
    for (int n : n_values) {
        if (n < 2) {
            throw std::invalid_argument("config: sample sizes must be >= 2");
        }
    }
    if (distributions.empty()) {
        throw std::invalid_argument("config: need at least one distribution");
    }
    if (!(nu >= 0.0 && nu < 1.0)) {
        throw std::invalid_argument("config: nu must lie in [0, 1)");
    }
    if (replications < 2) {
        // summaries need a variance, so one replicate can never be enough
        throw std::invalid_argument("config: replications must be >= 2");
    }
    if (estimators.empty()) {
        throw std::invalid_argument("config: need at least one estimator");
    }
    if (!(disparity.c1 > 0.0 && disparity.c1 < disparity.c2)) {
        throw std::invalid_argument("config: disparity knots require 0 < c1 < c2");
    }
}

CellSummary summarize(std::span<const double> estimates, double p_true) {
    if (estimates.size() < 2) {
        throw std::invalid_argument("summarize needs at least 2 estimates");
    }
    const double n = static_cast<double>(estimates.size());
    double mean = 0.0;
    for (double e : estimates) {
        mean += e;
    }
    mean /= n;
    double var = 0.0;
    double mse = 0.0;
    for (double e : estimates) {
        var += (e - mean) * (e - mean);
        mse += (e - p_true) * (e - p_true);
    }
    var /= n;
    mse /= n;
    CellSummary s;
    s.bias = mean - p_true;
    s.variance = var;
    s.sd = std::sqrt(var);
    s.rmse = std::sqrt(mse);
    s.replications = static_cast<int>(estimates.size());
    return s;
}

std::vector<CellSummary> run_cell(const CellSpec& spec,
                                  const std::vector<Estimator>& estimators,
                                  const DisparityParams& disparity,
                                  std::uint64_t master_seed, int replications,
                                  int threads, const SampleObserver& observer) {
    if (estimators.empty()) {
        throw std::invalid_argument("run_cell: need at least one estimator");
    }
    if (replications < 2) {
        throw std::invalid_argument("run_cell: need at least 2 replications");
    }
    const BinomialModel model(spec.m);

    struct Slot {
        std::vector<double> estimates;
        std::vector<char> boundary;
    };
    std::vector<Slot> slots(estimators.size());
    for (auto& slot : slots) {
        slot.estimates.resize(replications);
        slot.boundary.resize(replications);
    }

    const WeightVector weights = WeightVector::uniform(spec.n);
    const InverseCdfSampler clean_sampler(model, spec.p_true);

    parallel_for(replications, threads, [&](int r) {
        RngStream rng = derive_stream(master_seed, static_cast<std::uint64_t>(r));
        std::vector<int> draws(spec.n);
        if (spec.contaminated && spec.nu > 0.0) {
            for (int& value : draws) {
                if (rng.next_double() < spec.nu) {
                    value = spec.z;
                } else {
                    value = clean_sampler.draw(rng);
                }
            }
        } else {
            for (int& value : draws) {
                value = clean_sampler.draw(rng);
            }
        }
        if (observer) {
            observer(r, std::span<const int>(draws));
        }
        const Sample sample(model, std::move(draws));
        for (std::size_t e = 0; e < estimators.size(); ++e) {
            EstimateResult result;
            switch (estimators[e]) {
                case Estimator::MD:
                    result = estimate_md(sample, weights);
                    break;
                case Estimator::ML:
                    result = estimate_ml(sample);
                    break;
                case Estimator::E:
                    result = estimate_e(sample, disparity);
                    break;
            }
            slots[e].estimates[r] = result.p_hat;
            slots[e].boundary[r] = result.at_boundary ? 1 : 0;
        }
    });

    std::vector<CellSummary> summaries;
    summaries.reserve(estimators.size());
    for (std::size_t e = 0; e < estimators.size(); ++e) {
        CellSummary s = summarize(slots[e].estimates, spec.p_true);
        s.estimator = estimators[e];
        s.m = spec.m;
        s.n = spec.n;
        s.contaminated = spec.contaminated;
        for (char flag : slots[e].boundary) {
            s.boundary_count += flag;
        }
        summaries.push_back(s);
    }
    return summaries;
}

std::vector<CellSummary> run_experiment(const ExperimentConfig& config, int threads) {
    config.validate();

    auto distributions = config.distributions;
    std::sort(distributions.begin(), distributions.end());
    distributions.erase(std::unique(distributions.begin(), distributions.end()),
                        distributions.end());
    auto m_values = config.m_values;
    std::sort(m_values.begin(), m_values.end());
    m_values.erase(std::unique(m_values.begin(), m_values.end()), m_values.end());
    auto n_values = config.n_values;
    std::sort(n_values.begin(), n_values.end());
    n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());
    auto estimators = config.estimators;
    std::sort(estimators.begin(), estimators.end());
    estimators.erase(std::unique(estimators.begin(), estimators.end()), estimators.end());

    std::vector<CellSummary> rows;
    for (DistributionKind dist : distributions) {
        for (int m : m_values) {
            for (int n : n_values) {
                CellSpec spec;
                spec.m = m;
                spec.p_true = config.p_true;
                spec.n = n;
                spec.contaminated = dist == DistributionKind::Contaminated;
                spec.nu = config.nu;
                spec.z = config.z_rule.resolve(m);
                auto cell = run_cell(spec, estimators, config.disparity,
                                     config.master_seed, config.replications, threads);
                rows.insert(rows.end(), cell.begin(), cell.end());
            }
        }
    }
    return rows;
}

} // namespace bmde
