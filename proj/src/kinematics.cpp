#include "opsent/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace opsent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

}  // namespace

DalitzPoint::DalitzPoint(double x1, double x2) : x1_(x1), x2_(x2) {
    if (!(x1 >= 0.0 && x1 <= 1.0)) throw ValidationError("x1 out of range");
    if (!(x2 >= 0.0 && x2 <= 1.0)) throw ValidationError("x2 out of range");
    // The derived x3 carries the rounding of 2 - x1 - x2, so its range check
    // gets an epsilon of slack.
    const double x3 = 2.0 - x1 - x2;
    if (!(x3 >= -1e-12 && x3 <= 1.0 + 1e-12))
        throw ValidationError("x3 out of range (x1 + x2 must lie in [1, 2])");
}

double DalitzPoint::x(int i) const {
    switch (i) {
        case 1: return x1_;
        case 2: return x2_;
        case 3: return x3();
        default: throw IndexError("photon index out of range 1..3");
    }
}

Orientation::Orientation(double alpha, double beta, double gamma)
    : alpha_(reduce_angle(alpha)), beta_(reduce_angle(beta)), gamma_(reduce_angle(gamma)) {}

Eigen::Matrix3d Orientation::rotation() const {
    return (Eigen::AngleAxisd(alpha_, Vec3::UnitZ()) *
            Eigen::AngleAxisd(beta_, Vec3::UnitY()) *
            Eigen::AngleAxisd(gamma_, Vec3::UnitZ()))
        .toRotationMatrix();
}

SphericalAngles angles_from_direction(const Vec3& khat) {
    const double cz = std::clamp(khat.z(), -1.0, 1.0);
    const double theta = std::acos(cz);
    double phi = 0.0;
    if (std::sin(theta) >= kPoleSinTheta) phi = std::atan2(khat.y(), khat.x());
    return {theta, phi};
}

Vec3 direction_from_angles(const SphericalAngles& a) {
    const double st = std::sin(a.theta);
    return Vec3(std::cos(a.phi) * st, std::sin(a.phi) * st, std::cos(a.theta));
}

PhotonTriple::PhotonTriple(const DalitzPoint& d, const Orientation& o,
                           const std::array<SphericalAngles, 3>& angles)
    : dalitz_(d), orientation_(o), angles_(angles) {
    Vec3 total = Vec3::Zero();
    for (int i = 0; i < 3; ++i) {
        directions_[i] = direction_from_angles(angles_[i]);
        if (std::abs(directions_[i].norm() - 1.0) > 1e-12)
            throw ValidationError("photon direction is not unit norm");
        total += d.x(i + 1) * directions_[i];
    }
    if (total.cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("photon momenta do not sum to zero");
}

double PhotonTriple::k(int i) const { return dalitz_.x(i); }

const Vec3& PhotonTriple::direction(int i) const {
    if (i < 1 || i > 3) throw IndexError("photon index out of range 1..3");
    return directions_[i - 1];
}

const SphericalAngles& PhotonTriple::angles(int i) const {
    if (i < 1 || i > 3) throw IndexError("photon index out of range 1..3");
    return angles_[i - 1];
}

DalitzPoint dalitz_sample(double u1, double u2) {
    if (!(u1 >= 0.0 && u1 <= 1.0)) throw ValidationError("u1 out of range");
    if (!(u2 >= 0.0 && u2 <= 1.0)) throw ValidationError("u2 out of range");
    double x1 = u1;
    double x2 = u2;
    // Fold the lower triangle through (1/2, 1/2); areas are preserved.
    if (x1 + x2 < 1.0) {
        x1 = 1.0 - x1;
        x2 = 1.0 - x2;
    }
    return DalitzPoint(x1, x2);
}

PhotonTriple build_event(const DalitzPoint& d, const Orientation& o) {
    const double x1 = d.x1();
    const double x2 = d.x2();
    const double x3 = d.x3();
    if (x1 < kDegenerateEnergy || x2 < kDegenerateEnergy || x3 < kDegenerateEnergy)
        throw DegenerateKinematics("photon energy below degeneracy threshold");

    const double c12 = std::clamp((x3 * x3 - x1 * x1 - x2 * x2) / (2.0 * x1 * x2), -1.0, 1.0);
    const double s12 = std::sqrt(std::max(0.0, 1.0 - c12 * c12));

    const Vec3 k1(1.0, 0.0, 0.0);
    const Vec3 k2(c12, s12, 0.0);
    const Vec3 k3 = -(x1 * k1 + x2 * k2) / x3;

    const Eigen::Matrix3d rot = o.rotation();
    std::array<SphericalAngles, 3> angles = {
        angles_from_direction(rot * k1),
        angles_from_direction(rot * k2),
        angles_from_direction(rot * k3),
    };
    return PhotonTriple(d, o, angles);
}

Vec3 plane_normal(const PhotonTriple& t) {
    const Vec3 cross = t.direction(1).cross(t.direction(2));
    const double norm = cross.norm();
    if (norm < kDegenerateCross)
        throw DegenerateKinematics("photons 1 and 2 are collinear; decay plane undefined");
    return cross / norm;
}

PolarizationVector polarization_vector(const SphericalAngles& a, int helicity) {
    if (helicity != 1 && helicity != -1) throw ValidationError("helicity must be +1 or -1");
    const double ct = std::cos(a.theta);
    const double st = std::sin(a.theta);
    const double cp = std::cos(a.phi);
    const double sp = std::sin(a.phi);
    const double lam = static_cast<double>(helicity);
    const double pref = -lam / std::numbers::sqrt2;
    const Complex i_lam(0.0, lam);
    CVec3 eps;
    eps(0) = pref * (Complex(ct * cp, 0.0) - i_lam * sp);
    eps(1) = pref * (Complex(ct * sp, 0.0) + i_lam * cp);
    eps(2) = pref * Complex(-st, 0.0);
    return PolarizationVector(eps, direction_from_angles(a), helicity);
}

PolarizationVector polarization_vector(const Vec3& khat, int helicity) {
    return polarization_vector(angles_from_direction(khat), helicity);
}

double f_factor(const PhotonTriple& t, int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3) throw IndexError("photon index out of range 1..3");
    if (i == j) throw IndexError("f_ij requires i != j");
    return std::clamp(1.0 - t.direction(i).dot(t.direction(j)), 0.0, 2.0);
}

}  // namespace opsent
