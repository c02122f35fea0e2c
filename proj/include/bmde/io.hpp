#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmde/montecarlo.hpp"

namespace bmde {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key = value config. Grammar: one `key = value` per line; blank
/// lines and lines starting with '#' are ignored; list values are
/// comma-separated; `z` accepts an integer or the literal `m`. Unknown or
/// duplicate keys are errors.
///
/// Keys: distribution (clean|contaminated|both), m, p, n, nu, z,
/// replications, estimators (md,ml,e), c1, c2, seed.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

/// One integer per line in {0..m}; blank lines are skipped. Errors carry
/// the 1-based line number.
std::vector<int> read_observation_file(std::istream& in, int m);
std::vector<int> load_observation_file(const std::string& path, int m);

/// Shortest decimal with 17 significant digits, always '.'-separated,
/// locale-independent.
std::string format_double(double value);

/// Header `distribution,m,p_true,nu,z,n,estimator,bias,variance,sd,rmse,
/// boundary_count,reps,seed` plus one row per summary. Clean rows carry
/// nu = 0 and the z the rule would resolve to.
void write_simulation_csv(std::ostream& out, const ExperimentConfig& config,
                          std::span<const CellSummary> rows);

} // namespace bmde
