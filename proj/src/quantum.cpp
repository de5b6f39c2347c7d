#include "spce/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace spce {

AnalyzerSpec::AnalyzerSpec(Direction orientation, SmearingKind kind,
                           double epsilon, double efficiency)
    : orientation_(orientation),
      smearing_(kind, CapRegion(orientation, epsilon)),
      efficiency_(efficiency) {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw DomainError("AnalyzerSpec: efficiency must lie in [0, 1]");
    }
}

double AnalyzerSpec::shrink_factor() const {
    return smearing_.kind == SmearingKind::Delta
               ? 1.0
               : cap_mean_projection(smearing_.cap.epsilon);
}

double singlet_correlation(const Direction& a, const Direction& b) {
    ensure_unit(a, "singlet_correlation");
    ensure_unit(b, "singlet_correlation");
    return -std::clamp(a.dot(b), -1.0, 1.0);
}

double joint_detection_density(const Direction& a, const Direction& b) {
    const double s = std::sin(angle_between(a, b) / 2.0);
    return 0.5 * s * s;
}

double coincidence_probability(const SettingPair& pair) {
    const double cos_theta = std::clamp(
        pair.first.orientation().dot(pair.second.orientation()), -1.0, 1.0);
    const double kk = pair.first.shrink_factor() * pair.second.shrink_factor();
    return pair.first.efficiency() * pair.second.efficiency() *
           (1.0 - kk * cos_theta) / 4.0;
}

EstimateWithError coincidence_probability_mc(const SettingPair& pair,
                                             std::int64_t samples,
                                             RandomStream& rng) {
    const double eta = pair.first.efficiency() * pair.second.efficiency();
    double sum = 0.0, sum2 = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const Direction a = sample_direction(pair.first.smearing(), rng);
        const Direction b = sample_direction(pair.second.smearing(), rng);
        const double v = eta * joint_detection_density(a, b);
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), samples};
}

double smeared_correlation(const SettingPair& pair) {
    const double cos_theta = std::clamp(
        pair.first.orientation().dot(pair.second.orientation()), -1.0, 1.0);
    return -pair.first.efficiency() * pair.second.efficiency() *
           pair.first.shrink_factor() * pair.second.shrink_factor() * cos_theta;
}

EstimateWithError smeared_correlation_mc(const SettingPair& pair,
                                         std::int64_t samples,
                                         RandomStream& rng) {
    const double eta = pair.first.efficiency() * pair.second.efficiency();
    double sum = 0.0, sum2 = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const Direction a = sample_direction(pair.first.smearing(), rng);
        const Direction b = sample_direction(pair.second.smearing(), rng);
        const double v = eta * singlet_correlation(a, b);
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), samples};
}

double conditional_correlation(const SettingPair& pair) {
    const double cos_theta = std::clamp(
        pair.first.orientation().dot(pair.second.orientation()), -1.0, 1.0);
    return -pair.first.shrink_factor() * pair.second.shrink_factor() * cos_theta;
}

double herbert_disagreement_qm(double theta) {
    if (!(theta >= 0.0 && theta <= 3.14159265358979323846 + 1e-12)) {
        throw DomainError("herbert_disagreement_qm: theta must lie in [0, pi]");
    }
    const double s = std::sin(theta / 2.0);
    return s * s;
}

} // namespace spce
