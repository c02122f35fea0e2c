#pragma once

#include <vector>

namespace bmde {

/// Binomial(m, p) on the support {0, ..., m}: exact pmf/cdf, the
/// beta-integral form of the cdf, and the slope coefficients c_k(p) that
/// drive the asymptotic formulas.
///
/// Coefficients are built by iterative multiplication in double precision;
/// they are exact for m <= 25 and accurate to ~1e-13 relative beyond that.
/// Trial counts are capped at kMaxTrials = 1000: far above that, pmf terms
/// underflow and the tables degrade.
class BinomialModel {
public:
    static constexpr int kMaxTrials = 1000;

    explicit BinomialModel(int trials);

    int trials() const { return m_; }

    /// P(X = k) = C(m,k) p^k (1-p)^(m-k).
    double pmf(int k, double p) const;

    /// P(X <= k), the partial sum of the pmf. Returns exactly 1 at k = m.
    double cdf(int k, double p) const;

    /// The same cdf written as m_k * Integral_0^{1-p} y^(m-k-1) (1-y)^k dy
    /// with m_k = (m-k) C(m,k), evaluated by Gauss-Legendre quadrature of
    /// exact polynomial order. Agrees with cdf() to ~1e-12; kept as an
    /// independent validation route, not a hot path.
    double cdf_beta_integral(int k, double p) const;

    /// c_k(p) = m_k (1-p)^(m-k-1) p^k = -dF(k;p)/dp, with c_m defined as 0
    /// so sums over k = 0..m need no special case.
    double coefficient_c(int k, double p) const;

    /// pmf over the whole support, one recurrence pass.
    std::vector<double> pmf_table(double p) const;

    /// cdf over the whole support; the last entry is forced to 1.
    std::vector<double> cdf_table(double p) const;

private:
    void check_support(int k) const;
    int m_;
};

/// C(m, k) by the iterative product C(m,k) = prod_i (m-k+i)/i. Every
/// intermediate is an exact integer below 2^53 for m <= 25.
double binomial_coefficient(int m, int k);

} // namespace bmde
