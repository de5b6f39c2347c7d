#include "spce/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

namespace spce {

EstimateWithError mean_stderr(const std::vector<double>& samples) {
    if (samples.empty()) {
        throw DomainError("mean_stderr: empty sample");
    }
    const auto n = static_cast<std::int64_t>(samples.size());
    double sum = 0.0;
    for (double s : samples) sum += s;
    const double mean = sum / static_cast<double>(n);
    if (n == 1) {
        return {mean, 0.0, n};
    }
    double ss = 0.0;
    for (double s : samples) {
        const double d = s - mean;
        ss += d * d;
    }
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

double normal_two_sided_quantile(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw DomainError("normal_two_sided_quantile: level must lie in (0, 1)");
    }
    static const boost::math::normal_distribution<double> unit_normal;
    return boost::math::quantile(unit_normal, 0.5 + level / 2.0);
}

Interval binomial_ci(std::int64_t successes, std::int64_t trials, double level) {
    if (trials < 1) {
        throw DomainError("binomial_ci: trials must be >= 1");
    }
    if (successes < 0 || successes > trials) {
        throw DomainError("binomial_ci: successes must lie in [0, trials]");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw DomainError("binomial_ci: level must lie in (0, 1)");
    }
    const double z = normal_two_sided_quantile(level);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // Rounding can push the algebra a hair outside [0, 1]; the interval is
    // a proportion, so clamp.
    return {std::clamp(center - half, 0.0, 1.0),
            std::clamp(center + half, 0.0, 1.0)};
}

double violation_zscore(const EstimateWithError& s, double bound) {
    if (!(s.stderr_ > 0.0)) {
        throw DegenerateEstimateError("violation_zscore: estimate has zero standard error");
    }
    return (s.value - bound) / s.stderr_;
}

} // namespace spce
