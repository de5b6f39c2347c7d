#pragma once

#include "spce/error.hpp"
#include "spce/random.hpp"

namespace spce {

/// Unit vector on the sphere S². Construction normalizes and rejects
/// near-zero input, so every live Direction satisfies |d| = 1 to 1e-12.
class Direction {
public:
    /// Defaults to +z.
    Direction() : x_(0.0), y_(0.0), z_(1.0) {}

    /// Normalizes (x, y, z). Throws InvalidDirectionError when |v| < 1e-9;
    /// silent normalization of a garbage vector would hide caller bugs.
    Direction(double x, double y, double z);

    /// Direction at polar angle theta (from +z) and azimuth phi, radians.
    static Direction from_spherical(double theta, double phi);

    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    double dot(const Direction& other) const {
        return x_ * other.x_ + y_ * other.y_ + z_ * other.z_;
    }

    Direction operator-() const;

    friend bool operator==(const Direction& a, const Direction& b) {
        return a.x_ == b.x_ && a.y_ == b.y_ && a.z_ == b.z_;
    }

private:
    double x_, y_, z_;
};

/// Spherical cap around an axis: the set { d : 1 - d·axis <= epsilon }.
/// epsilon = 0 is the single point {axis}; epsilon = 2 is the full sphere.
struct CapRegion {
    CapRegion(Direction axis_, double epsilon_);

    bool contains(const Direction& d) const {
        return 1.0 - d.dot(axis) <= epsilon;
    }

    Direction axis;
    double epsilon;
};

enum class SmearingKind {
    Delta,      ///< always the cap axis itself
    UniformCap, ///< uniform by surface area over the cap
};

/// Distribution of microscopic analyzer directions over a cap.
struct SmearingDistribution {
    SmearingDistribution(SmearingKind kind_, CapRegion cap_)
        : kind(kind_), cap(cap_) {}

    SmearingKind kind;
    CapRegion cap;
};

/// Throws InvalidDirectionError when d's norm deviates from 1 by more than
/// 1e-9. Directions normalize on construction, so this fires only on
/// corrupted values.
void ensure_unit(const Direction& d, const char* context);

/// Angle between two unit directions, in [0, pi]. Symmetric in its
/// arguments. The dot product is clamped to [-1, 1] before acos because
/// floating-point dots exceed the range by ulps.
double angle_between(const Direction& a, const Direction& b);

/// Draws a microscopic direction from the smearing law. The result is
/// always a member of dist.cap. For UniformCap the cosine of the polar
/// angle about the axis is uniform on [1 - epsilon, 1] and the azimuth is
/// uniform, which is uniform-by-area on the cap.
Direction sample_direction(const SmearingDistribution& dist, RandomStream& rng);

/// Mean of d·axis under uniform-by-area smearing over a cap of width
/// epsilon: kappa(epsilon) = 1 - epsilon/2. Both the coincidence density
/// and -cos(theta) are affine in cos(theta), so cap smearing enters the
/// closed forms only through this factor. Throws DomainError outside [0, 2].
double cap_mean_projection(double epsilon);

} // namespace spce
