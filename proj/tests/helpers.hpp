#pragma once

#include "spce/geometry.hpp"
#include "spce/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace test_util {

using spce::Direction;

/// Rodrigues rotation, deliberately independent of the library's own basis
/// construction so rotation-invariance tests have a second opinion.
inline Direction rotate(const Direction& v, const Direction& axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double kx = axis.x(), ky = axis.y(), kz = axis.z();
    const double vx = v.x(), vy = v.y(), vz = v.z();
    const double cross_x = ky * vz - kz * vy;
    const double cross_y = kz * vx - kx * vz;
    const double cross_z = kx * vy - ky * vx;
    const double kdotv = kx * vx + ky * vy + kz * vz;
    return Direction(vx * c + cross_x * s + kx * kdotv * (1.0 - c),
                     vy * c + cross_y * s + ky * kdotv * (1.0 - c),
                     vz * c + cross_z * s + kz * kdotv * (1.0 - c));
}

/// Uniform direction on the sphere via the inverse-CDF construction,
/// independent of spce::sample_direction.
inline Direction random_direction(spce::RandomStream& rng) {
    const double z = 1.0 - 2.0 * rng.uniform01();
    const double phi = 2.0 * std::numbers::pi * rng.uniform01();
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Direction(s * std::cos(phi), s * std::sin(phi), z);
}

inline Direction planar(double theta) {
    return Direction::from_spherical(theta, 0.0);
}

/// Two-sided Kolmogorov-Smirnov statistic against U[0, 1].
inline double ks_uniform01(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double lo = values[i] - static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n - values[i];
        d = std::max({d, lo, hi});
    }
    return d;
}

} // namespace test_util
