#include "bmde/binomial.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace bmde {

namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("probability must lie in [0, 1], got " + std::to_string(p));
    }
}

struct QuadratureRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n. Cached per order;
// an n-point rule integrates polynomials up to degree 2n-1 exactly.
const QuadratureRule& legendre_rule(int order) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) {
        return it->second;
    }
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    constexpr double kPi = 3.14159265358979323846;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
            double p0 = 1.0, p1 = x;
            for (int j = 1; j < order; ++j) {
                double p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[order - 1 - i] = x;
        rule.weights[order - 1 - i] = w;
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

} // namespace

BinomialModel::BinomialModel(int trials) : m_(trials) {
    if (trials < 1 || trials > kMaxTrials) {
        throw std::domain_error("trial count must lie in [1, " +
                                std::to_string(kMaxTrials) + "], got " +
                                std::to_string(trials));
    }
}

void BinomialModel::check_support(int k) const {
    if (k < 0 || k > m_) {
        throw std::domain_error("k = " + std::to_string(k) +
                                " outside the support {0..." + std::to_string(m_) + "}");
    }
}

double binomial_coefficient(int m, int k) {
    if (k < 0 || k > m) {
        return 0.0;
    }
    if (k > m - k) {
        k = m - k;
    }
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result = result * (m - k + i) / i;
    }
    return result;
}

double BinomialModel::pmf(int k, double p) const {
    check_support(k);
    check_probability(p);
    if (p == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    if (p == 1.0) {
        return k == m_ ? 1.0 : 0.0;
    }
    return binomial_coefficient(m_, k) * std::pow(p, k) * std::pow(1.0 - p, m_ - k);
}

double BinomialModel::cdf(int k, double p) const {
    check_support(k);
    check_probability(p);
    if (k == m_) {
        return 1.0;
    }
    if (p == 0.0) {
        return 1.0;
    }
    if (p == 1.0) {
        return 0.0;
    }
    // extended precision: double accumulation drifts ~2e-15 near 1 for
    // m = 25, enough to break monotonicity in p at the 1e-15 level
    const long double q = 1.0L - static_cast<long double>(p);
    const long double odds = static_cast<long double>(p) / q;
    long double f = std::pow(q, static_cast<long double>(m_));
    long double acc = f;
    for (int j = 0; j < k; ++j) {
        f *= static_cast<long double>(m_ - j) / static_cast<long double>(j + 1) * odds;
        acc += f;
    }
    const double result = static_cast<double>(acc);
    return result < 1.0 ? result : 1.0;
}

double BinomialModel::cdf_beta_integral(int k, double p) const {
    check_support(k);
    check_probability(p);
    if (k == m_) {
        return 1.0;
    }
    const double upper = 1.0 - p;
    // integrand has degree m-1, so m/2+1 nodes are exact
    const QuadratureRule& rule = legendre_rule(m_ / 2 + 2);
    const double mk = (m_ - k) * binomial_coefficient(m_, k);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double y = 0.5 * upper * (rule.nodes[i] + 1.0);
        acc += rule.weights[i] * std::pow(y, m_ - k - 1) * std::pow(1.0 - y, k);
    }
    return mk * 0.5 * upper * acc;
}

double BinomialModel::coefficient_c(int k, double p) const {
    check_support(k);
    check_probability(p);
    if (k == m_) {
        return 0.0;
    }
    const double mk = (m_ - k) * binomial_coefficient(m_, k);
    return mk * std::pow(1.0 - p, m_ - k - 1) * std::pow(p, k);
}

std::vector<double> BinomialModel::pmf_table(double p) const {
    check_probability(p);
    std::vector<double> table(m_ + 1, 0.0);
    if (p == 0.0) {
        table[0] = 1.0;
        return table;
    }
    if (p == 1.0) {
        table[m_] = 1.0;
        return table;
    }
    const double odds = p / (1.0 - p);
    double f = std::pow(1.0 - p, m_);
    table[0] = f;
    for (int j = 0; j < m_; ++j) {
        f *= static_cast<double>(m_ - j) / static_cast<double>(j + 1) * odds;
        table[j + 1] = f;
    }
    return table;
}

std::vector<double> BinomialModel::cdf_table(double p) const {
    std::vector<double> table = pmf_table(p);
    double acc = 0.0;
    double comp = 0.0;
    for (int k = 0; k <= m_; ++k) {
        const double y = table[k] - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        table[k] = acc < 1.0 ? acc : 1.0;
    }
    table[m_] = 1.0;
    return table;
}

} // namespace bmde
