#include "spce/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace spce {

namespace {

constexpr double kMinNorm = 1e-9;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Orthonormal basis completing n (Duff et al. branchless construction).
void orthonormal_basis(const Direction& n, double (&e1)[3], double (&e2)[3]) {
    const double sign = std::copysign(1.0, n.z());
    const double a = -1.0 / (sign + n.z());
    const double b = n.x() * n.y() * a;
    e1[0] = 1.0 + sign * n.x() * n.x() * a;
    e1[1] = sign * b;
    e1[2] = -sign * n.x();
    e2[0] = b;
    e2[1] = sign + n.y() * n.y() * a;
    e2[2] = -n.y();
}

} // namespace

Direction::Direction(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!(norm >= kMinNorm) || !std::isfinite(norm)) {
        throw InvalidDirectionError("Direction: vector norm below 1e-9 or non-finite");
    }
    x_ = x / norm;
    y_ = y / norm;
    z_ = z / norm;
}

Direction Direction::from_spherical(double theta, double phi) {
    const double st = std::sin(theta);
    return Direction(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
}

Direction Direction::operator-() const {
    Direction d;
    d.x_ = -x_;
    d.y_ = -y_;
    d.z_ = -z_;
    return d;
}

CapRegion::CapRegion(Direction axis_, double epsilon_)
    : axis(axis_), epsilon(epsilon_) {
    if (!(epsilon_ >= 0.0 && epsilon_ <= 2.0)) {
        throw DomainError("CapRegion: epsilon must lie in [0, 2]");
    }
}

void ensure_unit(const Direction& d, const char* context) {
    const double n2 = d.dot(d);
    if (!(std::abs(std::sqrt(n2) - 1.0) <= 1e-9)) {
        throw InvalidDirectionError(std::string(context) +
                                    ": argument is not a unit direction");
    }
}

double angle_between(const Direction& a, const Direction& b) {
    ensure_unit(a, "angle_between");
    ensure_unit(b, "angle_between");
    return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

Direction sample_direction(const SmearingDistribution& dist, RandomStream& rng) {
    const CapRegion& cap = dist.cap;
    if (dist.kind == SmearingKind::Delta || cap.epsilon == 0.0) {
        return cap.axis;
    }
    // cos(polar angle about the axis) uniform on (1 - eps, 1], azimuth
    // uniform: uniform by surface area on the cap.
    const double c = 1.0 - cap.epsilon * rng.uniform01();
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = kTwoPi * rng.uniform01();
    double e1[3], e2[3];
    orthonormal_basis(cap.axis, e1, e2);
    const double u = s * std::cos(phi);
    const double v = s * std::sin(phi);
    return Direction(u * e1[0] + v * e2[0] + c * cap.axis.x(),
                     u * e1[1] + v * e2[1] + c * cap.axis.y(),
                     u * e1[2] + v * e2[2] + c * cap.axis.z());
}

double cap_mean_projection(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 2.0)) {
        throw DomainError("cap_mean_projection: epsilon must lie in [0, 2]");
    }
    return 1.0 - epsilon / 2.0;
}

} // namespace spce
