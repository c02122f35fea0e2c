// binom-mde: minimum-distance estimation of the binomial success
// probability, with ML and E baselines, asymptotic-variance / influence
// curves, and a seeded Monte Carlo experiment runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bmde/asymptotics.hpp"
#include "bmde/estimators.hpp"
#include "bmde/io.hpp"
#include "bmde/montecarlo.hpp"
#include "bmde/parallel.hpp"
#include "bmde/sampling.hpp"

namespace {

using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Owns the output stream: stdout for "-", a file otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path == "-" || path.empty()) {
            stream_ = &std::cout;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) {
                throw std::runtime_error("cannot open output file '" + path + "'");
            }
            stream_ = file_.get();
        }
    }

    std::ostream& stream() { return *stream_; }

    void finish() {
        stream_->flush();
        if (!*stream_) {
            throw std::runtime_error("error writing output");
        }
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

bmde::WeightVector load_weights(const std::string& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) {
        throw bmde::ConfigError("cannot open weights file '" + path + "'");
    }
    std::vector<double> d;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        double v = 0.0;
        if (!(ss >> v)) {
            std::string rest;
            ss.clear();
            ss >> rest;
            if (rest.empty()) {
                continue;   // blank line
            }
            throw bmde::ConfigError("weights line " + std::to_string(line_no) +
                                    ": expected a real number");
        }
        d.push_back(v);
    }
    if (d.size() != expected) {
        throw bmde::ConfigError("weights file has " + std::to_string(d.size()) +
                                " entries, sample has " + std::to_string(expected));
    }
    return bmde::WeightVector(std::move(d));
}

struct GridSpec {
    double start, stop, step;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g{};
    char sep1 = 0, sep2 = 0;
    std::istringstream ss(text);
    if (!(ss >> g.start >> sep1 >> g.stop >> sep2 >> g.step) || sep1 != ':' ||
        sep2 != ':' || !ss.eof()) {
        throw bmde::ConfigError("grid must be start:stop:step, got '" + text + "'");
    }
    if (!(g.start > 0.0 && g.stop < 1.0 && g.start <= g.stop && g.step > 0.0)) {
        throw bmde::ConfigError("grid must satisfy 0 < start <= stop < 1 and step > 0");
    }
    return g;
}

std::vector<double> expand_grid(const GridSpec& g) {
    std::vector<double> points;
    if (g.step > g.stop - g.start) {
        points.push_back(g.start);   // degenerate grid: single row at start
        return points;
    }
    const int count = static_cast<int>(std::floor((g.stop - g.start) / g.step + 1e-9)) + 1;
    points.reserve(count);
    for (int i = 0; i < count; ++i) {
        points.push_back(g.start + i * g.step);
    }
    return points;
}

int cmd_estimate(const std::string& data_path, int m, const std::string& method,
                 const std::string& weights_path, double c1, double c2, double level,
                 const std::string& out_path, const std::string& format) {
    const bmde::BinomialModel model(m);
    const std::vector<int> observations = bmde::load_observation_file(data_path, m);
    const bmde::Sample sample(model, observations);

    bmde::EstimateResult result;
    std::optional<bmde::ConfidenceInterval> ci;
    if (method == "ml") {
        result = bmde::estimate_ml(sample);
    } else if (method == "e") {
        result = bmde::estimate_e(sample, bmde::DisparityParams{c1, c2});
    } else {
        const bmde::WeightVector weights =
            weights_path.empty() ? bmde::WeightVector::uniform(sample.size())
                                 : load_weights(weights_path, sample.size());
        result = bmde::estimate_md(sample, weights);
        ci = bmde::confidence_interval(sample, level);
    }

    Output out(out_path);
    if (format == "json") {
        json report{{"method", bmde::estimator_name(result.method)},
                    {"m", m},
                    {"n", sample.size()},
                    {"p_hat", result.p_hat},
                    {"objective", result.objective},
                    {"at_boundary", result.at_boundary}};
        if (ci) {
            report["ci"] = json{{"lo", ci->lo},
                                {"hi", ci->hi},
                                {"level", ci->level},
                                {"degenerate", ci->degenerate}};
        } else {
            report["ci"] = nullptr;
        }
        out.stream() << report.dump(2) << '\n';
    } else {
        out.stream() << "method,m,n,p_hat,objective,at_boundary,ci_lo,ci_hi,ci_level\n"
                     << bmde::estimator_name(result.method) << ',' << m << ','
                     << sample.size() << ',' << bmde::format_double(result.p_hat) << ','
                     << bmde::format_double(result.objective) << ','
                     << (result.at_boundary ? 1 : 0) << ',';
        if (ci) {
            out.stream() << bmde::format_double(ci->lo) << ','
                         << bmde::format_double(ci->hi) << ','
                         << bmde::format_double(ci->level);
        } else {
            out.stream() << ",,";
        }
        out.stream() << '\n';
    }
    out.finish();
    return 0;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 int threads, const std::string& out_path, const std::string& format) {
    bmde::ExperimentConfig config = bmde::load_experiment_config(config_path);
    if (seed) {
        config.master_seed = *seed;
    }
    const std::vector<bmde::CellSummary> rows = bmde::run_experiment(config, threads);

    Output out(out_path);
    if (format == "json") {
        json array = json::array();
        for (const bmde::CellSummary& row : rows) {
            array.push_back(
                {{"distribution", bmde::distribution_name(
                                      row.contaminated ? bmde::DistributionKind::Contaminated
                                                       : bmde::DistributionKind::Clean)},
                 {"m", row.m},
                 {"p_true", config.p_true},
                 {"nu", row.contaminated ? config.nu : 0.0},
                 {"z", config.z_rule.resolve(row.m)},
                 {"n", row.n},
                 {"estimator", bmde::estimator_name(row.estimator)},
                 {"bias", row.bias},
                 {"variance", row.variance},
                 {"sd", row.sd},
                 {"rmse", row.rmse},
                 {"boundary_count", row.boundary_count},
                 {"reps", row.replications},
                 {"seed", config.master_seed}});
        }
        out.stream() << array.dump(2) << '\n';
    } else {
        bmde::write_simulation_csv(out.stream(), config, rows);
    }
    out.finish();
    return 0;
}

int cmd_variance_curve(int m, const std::string& grid_text, const std::string& out_path,
                       const std::string& format) {
    const bmde::BinomialModel model(m);
    const std::vector<double> grid = expand_grid(parse_grid(grid_text));
    const std::vector<bmde::VariancePoint> rows = bmde::variance_curve(model, grid);

    Output out(out_path);
    if (format == "json") {
        json array = json::array();
        for (const bmde::VariancePoint& row : rows) {
            array.push_back({{"p", row.p}, {"avar_md", row.avar_md}, {"avar_ml", row.avar_ml}});
        }
        out.stream() << array.dump(2) << '\n';
    } else {
        out.stream() << "p,avar_md,avar_ml\n";
        for (const bmde::VariancePoint& row : rows) {
            out.stream() << bmde::format_double(row.p) << ','
                         << bmde::format_double(row.avar_md) << ','
                         << bmde::format_double(row.avar_ml) << '\n';
        }
    }
    out.finish();
    return 0;
}

int cmd_influence(int m, double p, const std::string& out_path, const std::string& format) {
    const bmde::BinomialModel model(m);
    if (!(p > 0.0 && p < 1.0)) {
        throw bmde::ConfigError("p must lie in (0, 1)");
    }

    Output out(out_path);
    if (format == "json") {
        json array = json::array();
        for (int z = 0; z <= m; ++z) {
            array.push_back({{"z", z},
                             {"if_md", bmde::influence_md(model, p, z)},
                             {"if_ml", bmde::influence_ml(model, p, z)}});
        }
        out.stream() << array.dump(2) << '\n';
    } else {
        out.stream() << "z,if_md,if_ml\n";
        for (int z = 0; z <= m; ++z) {
            out.stream() << z << ',' << bmde::format_double(bmde::influence_md(model, p, z))
                         << ',' << bmde::format_double(bmde::influence_ml(model, p, z))
                         << '\n';
        }
    }
    out.finish();
    return 0;
}

int cmd_selftest(int threads) {
    int failures = 0;
    const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "OK   " : "FAIL ") << name;
        if (!detail.empty()) {
            std::cout << " (" << detail << ")";
        }
        std::cout << '\n';
        if (!ok) {
            ++failures;
        }
    };

    {
        double worst = 0.0;
        for (int m = 1; m <= 25; ++m) {
            const bmde::BinomialModel model(m);
            for (double p = 0.05; p < 0.96; p += 0.05) {
                for (int k = 0; k < m; ++k) {
                    worst = std::max(worst, std::abs(model.cdf_beta_integral(k, p) -
                                                     model.cdf(k, p)));
                }
            }
        }
        report("cdf beta-integral identity", worst <= 1e-10,
               "max |diff| = " + bmde::format_double(worst));
    }

    {
        bool ok = true;
        double worst_gap = 0.0;
        std::vector<double> gaps(20, 0.0);
        bmde::parallel_for(20, threads, [&](int s) {
            const int m = (s % 2 == 0) ? 10 : 20;
            const int n = (s % 4 < 2) ? 20 : 100;
            const bmde::BinomialModel model(m);
            bmde::RngStream rng = bmde::derive_stream(1337, static_cast<std::uint64_t>(s));
            const bmde::Sample sample(model, bmde::sample_binomial(model, 0.3, n, rng));
            const bmde::WeightVector weights = bmde::WeightVector::uniform(n);
            const bmde::EstimateResult md = bmde::estimate_md(sample, weights);
            constexpr int kGrid = 100001;
            const double lo = bmde::kProbabilityClamp;
            const double hi = 1.0 - bmde::kProbabilityClamp;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < kGrid; ++i) {
                const double p = lo + (hi - lo) * i / (kGrid - 1);
                best = std::min(best, bmde::cvm_distance(sample, weights, p));
            }
            gaps[s] = md.objective - best;
        });
        for (double gap : gaps) {
            worst_gap = std::max(worst_gap, gap);
            ok = ok && gap <= 1e-12;
        }
        report("minimum-distance grid dominance", ok,
               "worst objective excess = " + bmde::format_double(worst_gap));
    }

    {
        double worst = 0.0;
        for (int m = 1; m <= 25; ++m) {
            const bmde::BinomialModel model(m);
            for (double p = 0.1; p < 0.91; p += 0.1) {
                double mean = 0.0;
                for (int z = 0; z <= m; ++z) {
                    mean += model.pmf(z, p) * bmde::influence_md(model, p, z);
                }
                worst = std::max(worst, std::abs(mean));
            }
        }
        report("influence function mean-zero", worst <= 1e-10,
               "max |mean| = " + bmde::format_double(worst));
    }

    return failures == 0 ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum-distance estimation for the binomial success probability"};
    app.require_subcommand(1);

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Point estimate from a data file");
    std::string data_path, method = "md", weights_path, est_out = "-", est_format = "csv";
    int est_m = 0;
    double c1 = 0.5, c2 = 2.0, level = 0.95;
    estimate->add_option("data", data_path, "File with one observation per line")->required();
    estimate->add_option("--m", est_m, "Number of trials per observation")->required();
    estimate->add_option("--method", method, "Estimator")
        ->check(CLI::IsMember({"md", "ml", "e"}));
    estimate->add_option("--weights", weights_path, "Weight file (one d_i per line)");
    estimate->add_option("--c1", c1, "Lower disparity knot");
    estimate->add_option("--c2", c2, "Upper disparity knot");
    estimate->add_option("--level", level, "Confidence level for the MD interval")
        ->check(CLI::Range(1e-6, 1.0 - 1e-6));
    estimate->add_option("--out", est_out, "Output path ('-' = stdout)");
    estimate->add_option("--format", est_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
    std::string config_path, sim_out = "-", sim_format = "csv";
    std::optional<std::uint64_t> seed_override;
    int threads = bmde::default_thread_count();
    simulate->add_option("config", config_path, "Experiment config file")->required();
    simulate->add_option("--seed", seed_override, "Override the config master seed");
    simulate->add_option("--threads", threads, "Worker threads (output-invariant)");
    simulate->add_option("--out", sim_out, "Output path ('-' = stdout)");
    simulate->add_option("--format", sim_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // variance-curve
    auto* curve = app.add_subcommand("variance-curve",
                                     "Asymptotic variances of MD and ML on a p-grid");
    int curve_m = 0;
    std::string grid_text = "0.001:0.999:0.001", curve_out = "-", curve_format = "csv";
    curve->add_option("--m", curve_m, "Number of trials")->required();
    curve->add_option("--grid", grid_text, "Grid as start:stop:step");
    curve->add_option("--out", curve_out, "Output path ('-' = stdout)");
    curve->add_option("--format", curve_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // influence
    auto* influence = app.add_subcommand("influence",
                                         "Influence functions of MD and ML at every z");
    int inf_m = 0;
    double inf_p = 0.0;
    std::string inf_out = "-", inf_format = "csv";
    influence->add_option("--m", inf_m, "Number of trials")->required();
    influence->add_option("--p", inf_p, "Success probability")->required();
    influence->add_option("--out", inf_out, "Output path ('-' = stdout)");
    influence->add_option("--format", inf_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // selftest
    auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle checks");
    int selftest_threads = bmde::default_thread_count();
    selftest->add_option("--threads", selftest_threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*estimate) {
            return cmd_estimate(data_path, est_m, method, weights_path, c1, c2, level,
                                est_out, est_format);
        }
        if (*simulate) {
            return cmd_simulate(config_path, seed_override, threads, sim_out, sim_format);
        }
        if (*curve) {
            return cmd_variance_curve(curve_m, grid_text, curve_out, curve_format);
        }
        if (*influence) {
            return cmd_influence(inf_m, inf_p, inf_out, inf_format);
        }
        if (*selftest) {
            return cmd_selftest(selftest_threads);
        }
    } catch (const bmde::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
