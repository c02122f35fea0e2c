#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bmde/normal.hpp"
#include "bmde/sampling.hpp"
#include "oracles.hpp"

using namespace bmde;

namespace {

// chi-square upper quantile via Wilson-Hilferty
double chi2_quantile(int df, double prob) {
    const double z = normal_quantile(prob);
    const double a = 2.0 / (9.0 * df);
    const double t = 1.0 - a + z * std::sqrt(a);
    return df * t * t * t;
}

} // namespace

TEST_CASE("stream determinism and separation") {
    SUBCASE("identical lineage reproduces the draw sequence") {
        RngStream a = derive_stream(123456789, 42);
        RngStream b = derive_stream(123456789, 42);
        for (int i = 0; i < 1000; ++i) {
            CHECK(a.next_u64() == b.next_u64());
        }
    }
    SUBCASE("adjacent stream indices diverge") {
        RngStream a = derive_stream(123456789, 0);
        RngStream b = derive_stream(123456789, 1);
        int same = 0;
        for (int i = 0; i < 1000; ++i) {
            if (a.next_u64() == b.next_u64()) {
                ++same;
            }
        }
        CHECK(same == 0);
    }
    SUBCASE("lineage is recorded") {
        const RngStream s = derive_stream(7, 9);
        CHECK(s.master_seed() == 7);
        CHECK(s.stream_index() == 9);
    }
    SUBCASE("uniform doubles live in [0, 1)") {
        RngStream rng = derive_stream(55, 0);
        for (int i = 0; i < 100000; ++i) {
            const double u = rng.next_double();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
        }
    }
}

TEST_CASE("streams consumed on different threads reproduce serial output") {
    constexpr int kStreams = 8;
    constexpr int kDraws = 5000;
    std::vector<std::vector<int>> serial(kStreams), threaded(kStreams);
    const BinomialModel model(10);
    for (int s = 0; s < kStreams; ++s) {
        RngStream rng = derive_stream(321, static_cast<std::uint64_t>(s));
        serial[s] = sample_binomial(model, 0.3, kDraws, rng);
    }
    std::vector<std::thread> workers;
    for (int s = 0; s < kStreams; ++s) {
        workers.emplace_back([&threaded, &model, s] {
            RngStream rng = derive_stream(321, static_cast<std::uint64_t>(s));
            threaded[s] = sample_binomial(model, 0.3, kDraws, rng);
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    CHECK(serial == threaded);
}

TEST_CASE("binomial sampling edge probabilities") {
    const BinomialModel model(6);
    RngStream rng = derive_stream(9, 9);
    for (int v : sample_binomial(model, 0.0, 500, rng)) {
        CHECK(v == 0);
    }
    for (int v : sample_binomial(model, 1.0, 500, rng)) {
        CHECK(v == 6);
    }
    CHECK_THROWS_AS(sample_binomial(model, 0.3, 0, rng), std::invalid_argument);
}

TEST_CASE("empirical pmf tracks the model within binomial-proportion bounds") {
    const int m = 10;
    const double p = 0.3;
    constexpr int kDraws = 1'000'000;
    const BinomialModel model(m);
    RngStream rng = derive_stream(2718, 0);
    std::vector<int> hist(m + 1, 0);
    const InverseCdfSampler sampler(model, p);
    for (int i = 0; i < kDraws; ++i) {
        ++hist[sampler.draw(rng)];
    }
    for (int k = 0; k <= m; ++k) {
        const double f = oracle::pmf(m, k, p);
        const double half_width = 3.0 * std::sqrt(f * (1.0 - f) / kDraws);
        CHECK(std::abs(hist[k] / static_cast<double>(kDraws) - f) <= half_width + 1e-9);
    }
}

TEST_CASE("inverse-cdf draws pass a chi-square goodness-of-fit sweep") {
    // Fixed seed, so this is deterministic; at the 0.999 quantile a fresh
    // seed would fail any one m with probability 1e-3.
    constexpr int kDraws = 200'000;
    for (int m = 1; m <= 25; ++m) {
        const BinomialModel model(m);
        const double p = 0.37;
        RngStream rng = derive_stream(4242, static_cast<std::uint64_t>(m));
        std::vector<int> hist(m + 1, 0);
        const InverseCdfSampler sampler(model, p);
        for (int i = 0; i < kDraws; ++i) {
            ++hist[sampler.draw(rng)];
        }
        // pool cells with expected count below 5 into their neighbor
        std::vector<double> expected;
        std::vector<double> observed;
        double exp_acc = 0.0, obs_acc = 0.0;
        for (int k = 0; k <= m; ++k) {
            exp_acc += kDraws * oracle::pmf(m, k, p);
            obs_acc += hist[k];
            if (exp_acc >= 5.0) {
                expected.push_back(exp_acc);
                observed.push_back(obs_acc);
                exp_acc = obs_acc = 0.0;
            }
        }
        if (exp_acc > 0.0 && !expected.empty()) {
            expected.back() += exp_acc;
            observed.back() += obs_acc;
        }
        double stat = 0.0;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            const double d = observed[i] - expected[i];
            stat += d * d / expected[i];
        }
        const int df = static_cast<int>(expected.size()) - 1;
        if (df >= 1) {
            CHECK(stat < chi2_quantile(df, 0.999));
        }
    }
}

TEST_CASE("contaminated cdf") {
    const BinomialModel model(10);
    SUBCASE("no contamination reduces to the clean cdf") {
        const ContaminatedModel cm(model, 0.3, 0.0, 5);
        for (int k = 0; k <= 10; ++k) {
            CHECK(contaminated_cdf(cm, k) == doctest::Approx(model.cdf(k, 0.3)).epsilon(1e-15));
        }
    }
    SUBCASE("ends at one and is monotone") {
        const ContaminatedModel cm(model, 0.3, 0.01, 10);
        double prev = 0.0;
        for (int k = 0; k <= 10; ++k) {
            const double v = contaminated_cdf(cm, k);
            CHECK(v >= prev - 1e-15);
            prev = v;
        }
        CHECK(std::abs(contaminated_cdf(cm, 10) - 1.0) <= 1e-12);
    }
    SUBCASE("direct evaluation at the published point") {
        const ContaminatedModel cm(model, 0.3, 0.01, 10);
        double p10 = 1.0;
        for (int i = 0; i < 10; ++i) {
            p10 *= 0.3;   // 0.3^10 by repeated multiplication
        }
        CHECK(contaminated_cdf(cm, 9) == doctest::Approx(0.99 * (1.0 - p10)).epsilon(1e-14));
        CHECK(contaminated_cdf(cm, 9) == doctest::Approx(0.98999415).epsilon(1e-7));
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(ContaminatedModel(model, 0.3, 1.0, 5), std::domain_error);
        CHECK_THROWS_AS(ContaminatedModel(model, 0.3, -0.1, 5), std::domain_error);
        CHECK_THROWS_AS(ContaminatedModel(model, 0.3, 0.01, 11), std::domain_error);
        const ContaminatedModel cm(model, 0.3, 0.01, 10);
        CHECK_THROWS_AS(contaminated_cdf(cm, 11), std::domain_error);
    }
}

TEST_CASE("contaminated sampling") {
    const BinomialModel model(10);
    SUBCASE("nu = 0 is bitwise-identical to the clean sampler") {
        const ContaminatedModel cm(model, 0.3, 0.0, 10);
        RngStream a = derive_stream(77, 0);
        RngStream b = derive_stream(77, 0);
        CHECK(sample_contaminated(cm, 2000, a) == sample_binomial(model, 0.3, 2000, b));
    }
    SUBCASE("nu = 0.999... behaves like the constant atom") {
        // nu must be < 1; at 0.999999 essentially every draw is the atom
        const ContaminatedModel cm(model, 0.3, 0.999999, 4);
        RngStream rng = derive_stream(78, 0);
        const auto draws = sample_contaminated(cm, 2000, rng);
        CHECK(std::count(draws.begin(), draws.end(), 4) >= 1998);
    }
    SUBCASE("atom frequency near nu + (1-nu) f(z)") {
        const ContaminatedModel cm(model, 0.3, 0.01, 10);
        constexpr int kDraws = 1'000'000;
        RngStream rng = derive_stream(515, 0);
        const auto draws = sample_contaminated(cm, kDraws, rng);
        const double f10 = oracle::pmf(10, 10, 0.3);
        const double target = 0.01 + 0.99 * f10;
        const double freq =
            std::count(draws.begin(), draws.end(), 10) / static_cast<double>(kDraws);
        CHECK(std::abs(freq - target) <= 3.0 * std::sqrt(target * (1.0 - target) / kDraws));
    }
}
