#pragma once

#include <vector>

#include "bmde/binomial.hpp"
#include "bmde/rng.hpp"

namespace bmde {

/// Gross-error mixture (1-nu) Binomial(m, p) + nu * point mass at z.
struct ContaminatedModel {
    ContaminatedModel(BinomialModel base_model, double success_p, double mixture_nu,
                      int atom_z);

    BinomialModel base;
    double p;
    double nu;
    int z;
};

/// (1-nu) F(k;p) + nu I(k >= z).
double contaminated_cdf(const ContaminatedModel& cm, int k);

/// Inverse-cdf draw on a precomputed table; build once per (m, p) cell and
/// reuse.
class InverseCdfSampler {
public:
    InverseCdfSampler(const BinomialModel& model, double p);

    int draw(RngStream& rng) const;
    const std::vector<double>& table() const { return cdf_; }

private:
    std::vector<double> cdf_;
};

std::vector<int> sample_binomial(const BinomialModel& model, double p, int count,
                                 RngStream& rng);

/// Draw protocol: nu == 0 short-circuits to the clean sampler (one uniform
/// per draw, bitwise-identical to sample_binomial on the same stream); for
/// nu > 0 each draw first spends one uniform on the branch (u < nu emits z)
/// and the clean branch then consumes its own uniform.
std::vector<int> sample_contaminated(const ContaminatedModel& cm, int count,
                                     RngStream& rng);

} // namespace bmde
