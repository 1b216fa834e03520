#pragma once

namespace deptree {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF via erfc.
double normal_cdf(double x);

/// Standard normal quantile for p in (0, 1): Acklam's rational approximation
/// followed by one Halley step against normal_cdf. Throws ValidationError
/// outside (0, 1).
double normal_quantile(double p);

}  // namespace deptree
