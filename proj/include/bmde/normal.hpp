#pragma once

namespace bmde {

/// Standard normal cdf via erfc.
double normal_cdf(double z);

/// Inverse standard normal cdf: Acklam's rational approximation polished by
/// one Halley step, good to ~1e-14. Throws std::domain_error outside (0, 1).
double normal_quantile(double prob);

} // namespace bmde
