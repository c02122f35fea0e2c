#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bmde/estimators.hpp"

namespace bmde {

enum class DistributionKind { Clean, Contaminated };

const char* distribution_name(DistributionKind kind);

/// Contamination atom: the default tracks m (z = m); a fixed value pins it.
struct ZRule {
    bool at_m = true;
    int fixed = 0;

    static ZRule fixed_at(int z) { return {false, z}; }
    int resolve(int m) const { return at_m ? m : fixed; }
};

struct ExperimentConfig {
    std::vector<int> m_values{10, 20};
    double p_true = 0.3;
    std::vector<int> n_values{20, 40, 60, 80, 100};
    std::vector<DistributionKind> distributions{DistributionKind::Clean};
    double nu = 0.01;
    ZRule z_rule{};
    int replications = 10000;
    std::vector<Estimator> estimators{Estimator::MD, Estimator::ML, Estimator::E};
    DisparityParams disparity{};
    std::uint64_t master_seed = 1;

    /// Throws std::invalid_argument on any bad cell, before any work starts.
    void validate() const;
};

/// Bias / variance / sd / RMSE of one (estimator, n, model) cell. variance
/// is the mean squared deviation about the mean of the estimates, so
/// rmse^2 == bias^2 + variance holds as an identity.
struct CellSummary {
    Estimator estimator = Estimator::MD;
    int m = 0;
    int n = 0;
    bool contaminated = false;
    double bias = 0.0;
    double variance = 0.0;
    double sd = 0.0;
    double rmse = 0.0;
    int boundary_count = 0;   // clamped estimates, retained in the summary
    int replications = 0;
};

/// Requires at least two estimates.
CellSummary summarize(std::span<const double> estimates, double p_true);

struct CellSpec {
    int m;
    double p_true;
    int n;
    bool contaminated;
    double nu;   // used only when contaminated
    int z;       // used only when contaminated
};

/// Invoked once per replicate with the drawn sample; may be called from
/// worker threads concurrently.
using SampleObserver = std::function<void(int replicate, std::span<const int> sample)>;

/// Runs `replications` paired replicates: replicate r draws its sample from
/// derive_stream(master_seed, r) and every requested estimator sees that
/// same sample. Estimates accumulate in replicate order, so the result is a
/// pure function of (spec, master_seed) regardless of thread count.
std::vector<CellSummary> run_cell(const CellSpec& spec,
                                  const std::vector<Estimator>& estimators,
                                  const DisparityParams& disparity,
                                  std::uint64_t master_seed, int replications,
                                  int threads = 1, const SampleObserver& observer = {});

/// Cartesian product of (distribution x m x n) cells, rows ordered by
/// (distribution, m, n, estimator).
std::vector<CellSummary> run_experiment(const ExperimentConfig& config, int threads = 1);

} // namespace bmde
