#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <cstdlib>

#include "bmde/montecarlo.hpp"
#include "bmde/parallel.hpp"
#include "bmde/sampling.hpp"

using namespace bmde;

TEST_CASE("summarize") {
    SUBCASE("two-point hand oracle") {
        const std::vector<double> est{0.2, 0.4};
        const CellSummary s = summarize(est, 0.3);
        CHECK(s.bias == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(s.variance == doctest::Approx(0.01).epsilon(1e-14));
        CHECK(s.sd == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(s.rmse == doctest::Approx(0.1).epsilon(1e-14));
    }
    SUBCASE("constant sequence is all zeros") {
        const std::vector<double> est{0.3, 0.3, 0.3};
        const CellSummary s = summarize(est, 0.3);
        CHECK(s.bias == 0.0);
        CHECK(s.variance == 0.0);
        CHECK(s.sd == 0.0);
        CHECK(s.rmse == 0.0);
    }
    SUBCASE("three-point hand oracle") {
        const std::vector<double> est{0.25, 0.35, 0.45};
        const CellSummary s = summarize(est, 0.3);
        CHECK(s.bias == doctest::Approx(0.05).epsilon(1e-13));
        CHECK(s.rmse ==
              doctest::Approx(std::sqrt((0.0025 + 0.0025 + 0.0225) / 3.0)).epsilon(1e-13));
    }
    SUBCASE("needs at least two estimates") {
        const std::vector<double> est{0.3};
        CHECK_THROWS_AS(summarize(est, 0.3), std::invalid_argument);
    }
    SUBCASE("rmse^2 = bias^2 + variance") {
        std::vector<double> est;
        RngStream rng = derive_stream(1, 1);
        for (int i = 0; i < 500; ++i) {
            est.push_back(0.25 + 0.1 * rng.next_double());
        }
        const CellSummary s = summarize(est, 0.3);
        CHECK(std::abs(s.rmse * s.rmse - s.bias * s.bias - s.variance) <= 1e-12);
    }
}

TEST_CASE("run_cell basics") {
    CellSpec spec{10, 0.3, 40, false, 0.0, 10};
    const std::vector<Estimator> all{Estimator::MD, Estimator::ML, Estimator::E};

    SUBCASE("one summary per estimator, tagged") {
        const auto rows = run_cell(spec, all, DisparityParams{}, 3, 200);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].estimator == Estimator::MD);
        CHECK(rows[1].estimator == Estimator::ML);
        CHECK(rows[2].estimator == Estimator::E);
        for (const auto& row : rows) {
            CHECK(row.m == 10);
            CHECK(row.n == 40);
            CHECK_FALSE(row.contaminated);
            CHECK(row.replications == 200);
            CHECK(std::abs(row.rmse * row.rmse - row.bias * row.bias - row.variance) <= 1e-12);
        }
    }
    SUBCASE("empty estimator set is an error") {
        CHECK_THROWS_AS(run_cell(spec, {}, DisparityParams{}, 3, 100), std::invalid_argument);
    }
}

TEST_CASE("md and ml are identical at m = 1") {
    CellSpec spec{1, 0.35, 50, false, 0.0, 1};
    const auto rows =
        run_cell(spec, {Estimator::MD, Estimator::ML}, DisparityParams{}, 4, 400);
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(rows[0].bias - rows[1].bias) <= 1e-9);
    CHECK(std::abs(rows[0].rmse - rows[1].rmse) <= 1e-9);
    CHECK(std::abs(rows[0].variance - rows[1].variance) <= 1e-9);
}

TEST_CASE("paired design: every estimator sees the recorded sample") {
    CellSpec spec{10, 0.3, 25, true, 0.01, 10};
    const std::vector<Estimator> all{Estimator::MD, Estimator::ML, Estimator::E};
    const int reps = 150;

    std::vector<std::vector<int>> recorded(reps);
    const auto rows = run_cell(spec, all, DisparityParams{}, 12, reps, 1,
                               [&](int r, std::span<const int> sample) {
                                   recorded[r].assign(sample.begin(), sample.end());
                               });

    // recompute every estimate from the recorded samples and re-summarize
    const BinomialModel model(10);
    const WeightVector w = WeightVector::uniform(25);
    std::vector<std::vector<double>> estimates(3, std::vector<double>(reps));
    for (int r = 0; r < reps; ++r) {
        REQUIRE(recorded[r].size() == 25);
        const Sample sample(model, recorded[r]);
        estimates[0][r] = estimate_md(sample, w).p_hat;
        estimates[1][r] = estimate_ml(sample).p_hat;
        estimates[2][r] = estimate_e(sample, DisparityParams{}).p_hat;
    }
    for (int e = 0; e < 3; ++e) {
        const CellSummary expected = summarize(estimates[e], 0.3);
        CHECK(rows[e].bias == expected.bias);
        CHECK(rows[e].variance == expected.variance);
        CHECK(rows[e].rmse == expected.rmse);
    }
}

TEST_CASE("replicate samples match the sampling module's protocol") {
    CellSpec spec{10, 0.3, 30, true, 0.02, 10};
    std::vector<std::vector<int>> recorded(50);
    run_cell(spec, {Estimator::ML}, DisparityParams{}, 99, 50, 1,
             [&](int r, std::span<const int> sample) {
                 recorded[r].assign(sample.begin(), sample.end());
             });
    const BinomialModel model(10);
    const ContaminatedModel cm(model, 0.3, 0.02, 10);
    for (int r = 0; r < 50; ++r) {
        RngStream rng = derive_stream(99, static_cast<std::uint64_t>(r));
        CHECK(recorded[r] == sample_contaminated(cm, 30, rng));
    }
}

TEST_CASE("thread count never changes results") {
    CellSpec spec{10, 0.3, 30, true, 0.01, 10};
    const std::vector<Estimator> all{Estimator::MD, Estimator::ML, Estimator::E};
    const auto serial = run_cell(spec, all, DisparityParams{}, 21, 600, 1);
    const auto parallel = run_cell(spec, all, DisparityParams{}, 21, 600, 8);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].bias == parallel[i].bias);
        CHECK(serial[i].variance == parallel[i].variance);
        CHECK(serial[i].sd == parallel[i].sd);
        CHECK(serial[i].rmse == parallel[i].rmse);
        CHECK(serial[i].boundary_count == parallel[i].boundary_count);
    }
}

TEST_CASE("run_experiment") {
    ExperimentConfig config;
    config.m_values = {10};
    config.n_values = {20, 40};
    config.distributions = {DistributionKind::Clean, DistributionKind::Contaminated};
    config.replications = 300;
    config.master_seed = 8;

    SUBCASE("row order is distribution, m, n, estimator") {
        const auto rows = run_experiment(config, 2);
        REQUIRE(rows.size() == 2 * 2 * 3);
        int i = 0;
        for (bool contaminated : {false, true}) {
            for (int n : {20, 40}) {
                for (Estimator est : {Estimator::MD, Estimator::ML, Estimator::E}) {
                    CHECK(rows[i].contaminated == contaminated);
                    CHECK(rows[i].n == n);
                    CHECK(rows[i].estimator == est);
                    ++i;
                }
            }
        }
    }
    SUBCASE("unsorted config input yields the same deterministic order") {
        ExperimentConfig shuffled = config;
        shuffled.n_values = {40, 20};
        shuffled.estimators = {Estimator::E, Estimator::MD, Estimator::ML};
        const auto a = run_experiment(config, 2);
        const auto b = run_experiment(shuffled, 2);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].bias == b[i].bias);
            CHECK(a[i].rmse == b[i].rmse);
        }
    }
    SUBCASE("config validation fires before work") {
        ExperimentConfig bad = config;
        bad.estimators.clear();
        CHECK_THROWS_AS(run_experiment(bad, 1), std::invalid_argument);
        bad = config;
        bad.n_values = {1};
        CHECK_THROWS_AS(run_experiment(bad, 1), std::invalid_argument);
        bad = config;
        bad.nu = 1.0;
        CHECK_THROWS_AS(run_experiment(bad, 1), std::invalid_argument);
        bad = config;
        bad.z_rule = ZRule::fixed_at(11);
        CHECK_THROWS_AS(run_experiment(bad, 1), std::invalid_argument);
        bad = config;
        bad.p_true = 0.0;
        CHECK_THROWS_AS(run_experiment(bad, 1), std::invalid_argument);
    }
}

TEST_CASE("boundary estimates are retained and counted") {
    // p close to 0 with tiny samples: all-zero draws clamp ML to the boundary
    CellSpec spec{5, 0.02, 3, false, 0.0, 5};
    const auto rows = run_cell(spec, {Estimator::ML}, DisparityParams{}, 77, 500);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].boundary_count > 0);
    CHECK(rows[0].replications == 500);
    // clamped estimates still enter the summary: bias is finite and sane
    CHECK(std::isfinite(rows[0].bias));
}

TEST_CASE("thread count env var feeds the default") {
    setenv("BINOM_MDE_THREADS", "3", 1);
    CHECK(default_thread_count() == 3);
    setenv("BINOM_MDE_THREADS", "not-a-number", 1);
    CHECK(default_thread_count() >= 1);
    unsetenv("BINOM_MDE_THREADS");
    CHECK(default_thread_count() >= 1);
}

TEST_CASE("clean md rmse shrinks with n") {
    ExperimentConfig config;
    config.m_values = {10};
    config.n_values = {20, 40, 60, 80, 100};
    config.distributions = {DistributionKind::Clean};
    config.estimators = {Estimator::MD};
    config.replications = 2000;
    config.master_seed = 14;
    const auto rows = run_experiment(config, 4);
    REQUIRE(rows.size() == 5);
    int inversions = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].rmse > rows[i - 1].rmse) {
            ++inversions;
        }
    }
    CHECK(inversions <= 1);
}
