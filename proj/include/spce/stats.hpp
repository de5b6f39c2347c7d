#pragma once

#include "spce/error.hpp"

#include <cstdint>
#include <vector>

namespace spce {

/// A point estimate with its standard error and the sample count behind it.
struct EstimateWithError {
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t n = 0;
};

/// Closed interval for a proportion.
struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Sample mean with stderr = sample stdev / sqrt(n), n-1 denominator.
/// A single sample (or a constant one) reports stderr 0.
/// Throws DomainError on an empty list.
EstimateWithError mean_stderr(const std::vector<double>& samples);

/// Wilson score interval for a binomial proportion. Preferred over the
/// Wald interval because rates near 0 or 1 keep honest widths.
/// Preconditions: 0 <= successes <= trials, trials >= 1, level in (0, 1);
/// violations throw DomainError. The result is always within [0, 1].
Interval binomial_ci(std::int64_t successes, std::int64_t trials, double level);

/// Two-sided normal quantile used by the Wilson interval:
/// z such that P(|N(0,1)| <= z) = level.
double normal_two_sided_quantile(double level);

/// How many standard errors the estimate sits above the bound
/// (default: the CHSH bound 2). Throws DegenerateEstimateError when the
/// estimate carries no error.
double violation_zscore(const EstimateWithError& s, double bound = 2.0);

} // namespace spce
