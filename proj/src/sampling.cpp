#include "bmde/sampling.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bmde {

ContaminatedModel::ContaminatedModel(BinomialModel base_model, double success_p,
                                     double mixture_nu, int atom_z)
    : base(base_model), p(success_p), nu(mixture_nu), z(atom_z) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("success probability must lie in [0, 1]");
    }
    if (!(nu >= 0.0 && nu < 1.0)) {
        throw std::domain_error("contamination fraction must lie in [0, 1)");
    }
    if (z < 0 || z > base.trials()) {
        throw std::domain_error("atom z = " + std::to_string(z) + " outside the support");
    }
}

double contaminated_cdf(const ContaminatedModel& cm, int k) {
    if (k < 0 || k > cm.base.trials()) {
        throw std::domain_error("k = " + std::to_string(k) + " outside the support");
    }
    return (1.0 - cm.nu) * cm.base.cdf(k, cm.p) + (k >= cm.z ? cm.nu : 0.0);
}

InverseCdfSampler::InverseCdfSampler(const BinomialModel& model, double p)
    : cdf_(model.cdf_table(p)) {}

int InverseCdfSampler::draw(RngStream& rng) const {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) {
        return static_cast<int>(cdf_.size()) - 1;
    }
    return static_cast<int>(it - cdf_.begin());
}

std::vector<int> sample_binomial(const BinomialModel& model, double p, int count,
                                 RngStream& rng) {
    if (count < 1) {
        throw std::invalid_argument("count must be >= 1");
    }
    const InverseCdfSampler sampler(model, p);
    std::vector<int> draws(count);
    for (int& value : draws) {
        value = sampler.draw(rng);
    }
    return draws;
}

std::vector<int> sample_contaminated(const ContaminatedModel& cm, int count,
                                     RngStream& rng) {
    if (count < 1) {
        throw std::invalid_argument("count must be >= 1");
    }
    if (cm.nu == 0.0) {
        return sample_binomial(cm.base, cm.p, count, rng);
    }
    const InverseCdfSampler sampler(cm.base, cm.p);
    std::vector<int> draws(count);
    for (int& value : draws) {
        if (rng.next_double() < cm.nu) {
            value = cm.z;
        } else {
            value = sampler.draw(rng);
        }
    }
    return draws;
}

} // namespace bmde
