#pragma once

#include "spce/geometry.hpp"
#include "spce/stats.hpp"

#include <cstdint>

namespace spce {

/// One arm of the experiment: macroscopic orientation, the smearing law of
/// its microscopic directions, and its detector efficiency. The smearing
/// cap is always centered on the orientation; the constructor builds it
/// that way, so the two can never drift apart.
class AnalyzerSpec {
public:
    AnalyzerSpec(Direction orientation, SmearingKind kind, double epsilon,
                 double efficiency);

    const Direction& orientation() const { return orientation_; }
    const SmearingDistribution& smearing() const { return smearing_; }
    double efficiency() const { return efficiency_; }
    double epsilon() const { return smearing_.cap.epsilon; }
    SmearingKind kind() const { return smearing_.kind; }

    /// kappa factor of this analyzer: 1 for Delta smearing, 1 - eps/2 for
    /// a uniform cap.
    double shrink_factor() const;

private:
    Direction orientation_;
    SmearingDistribution smearing_;
    double efficiency_;
};

/// A correlation experiment is a pair of analyzers.
struct SettingPair {
    AnalyzerSpec first;
    AnalyzerSpec second;
};

/// Singlet-state correlation between sharp directions: -cos(theta_ab).
double singlet_correlation(const Direction& a, const Direction& b);

/// Joint (+,+) detection density for sharp directions:
/// sin^2(theta_ab / 2) / 2. Equals (1 + singlet_correlation) / 4.
double joint_detection_density(const Direction& a, const Direction& b);

/// Coincidence probability with smearing and efficiency, closed form:
/// eta_A * eta_B * (1 - kappa_A * kappa_B * cos Theta_AB) / 4.
double coincidence_probability(const SettingPair& pair);

/// Monte Carlo evaluation of the same double integral; the general path
/// for any smearing law, and the oracle the closed form is tested against.
EstimateWithError coincidence_probability_mc(const SettingPair& pair,
                                             std::int64_t samples,
                                             RandomStream& rng);

/// Predicted correlation with smearing and efficiency, closed form:
/// -eta_A * eta_B * kappa_A * kappa_B * cos Theta_AB.
double smeared_correlation(const SettingPair& pair);

/// Monte Carlo evaluation of the smeared correlation integral.
EstimateWithError smeared_correlation_mc(const SettingPair& pair,
                                         std::int64_t samples,
                                         RandomStream& rng);

/// Correlation conditional on a coincidence: the smeared correlation with
/// the efficiency prefactor removed, -kappa_A * kappa_B * cos Theta_AB.
/// This is what coincidence counting estimates, independent of efficiency.
double conditional_correlation(const SettingPair& pair);

/// Quantum disagreement rate between the two message strings when the
/// second analyzer is rotated by theta from alignment: sin^2(theta / 2).
/// Message convention: the side-2 bit is the negated outcome, so aligned
/// analyzers produce identical strings. Throws DomainError outside [0, pi].
double herbert_disagreement_qm(double theta);

} // namespace spce
