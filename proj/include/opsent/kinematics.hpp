#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

#include "opsent/errors.hpp"

namespace opsent {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Complex = std::complex<double>;

// Degeneracy thresholds. Energies below kDegenerateEnergy or a decay-plane
// cross product below kDegenerateCross are beyond what the double-precision
// angle formulas resolve.
inline constexpr double kDegenerateEnergy = 1e-9;
inline constexpr double kDegenerateCross = 1e-12;
// Phi is undefined at the poles; it is set to 0 when sin(theta) falls below
// this.
inline constexpr double kPoleSinTheta = 1e-12;

// Dimensionless photon energy fractions x_i = 2 k_i / m. Units are fixed by
// m = 2 (m_e = 1), so the photon energies equal the x_i and
// x1 + x2 + x3 = 2 with each x_i in [0, 1]. x3 is always derived.
class DalitzPoint {
public:
    DalitzPoint(double x1, double x2);

    double x1() const { return x1_; }
    double x2() const { return x2_; }
    double x3() const { return 2.0 - x1_ - x2_; }

    // 1-based accessor.
    double x(int i) const;

private:
    double x1_;
    double x2_;
};

// ZYZ Euler angles (radians) rotating the reference decay plane into the lab
// frame: R = Rz(alpha) * Ry(beta) * Rz(gamma). Angles are stored reduced to
// [0, 2*pi). The identity orientation leaves the decay plane in the lab x-y
// plane with plane normal +z.
class Orientation {
public:
    Orientation() : alpha_(0.0), beta_(0.0), gamma_(0.0) {}
    Orientation(double alpha, double beta, double gamma);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }

    Eigen::Matrix3d rotation() const;

private:
    double alpha_;
    double beta_;
    double gamma_;
};

struct SphericalAngles {
    double theta;  // polar angle from +z, [0, pi]
    double phi;    // azimuth, atan2 convention (-pi, pi]; 0 at the poles
};

// theta = arccos(k_z) with the argument clamped to [-1, 1];
// phi = atan2(k_y, k_x), forced to 0 when sin(theta) < kPoleSinTheta.
SphericalAngles angles_from_direction(const Vec3& khat);
Vec3 direction_from_angles(const SphericalAngles& a);

// Three photon momenta closing to zero. Magnitudes equal the Dalitz x_i;
// directions are stored as (theta_i, Phi_i) with the cached unit vectors
// regenerated from the angles.
class PhotonTriple {
public:
    PhotonTriple(const DalitzPoint& d, const Orientation& o,
                 const std::array<SphericalAngles, 3>& angles);

    // 1-based accessors.
    double k(int i) const;
    const Vec3& direction(int i) const;
    const SphericalAngles& angles(int i) const;

    const DalitzPoint& dalitz() const { return dalitz_; }
    const Orientation& orientation() const { return orientation_; }

private:
    DalitzPoint dalitz_;
    Orientation orientation_;
    std::array<SphericalAngles, 3> angles_;
    std::array<Vec3, 3> directions_;
};

// Circular polarization vector for one photon and helicity, with the
// (k_hat, lambda) it belongs to. Unit norm, transverse to k_hat.
class PolarizationVector {
public:
    PolarizationVector(const CVec3& components, const Vec3& khat, int helicity)
        : components_(components), khat_(khat), helicity_(helicity) {}

    const CVec3& components() const { return components_; }
    Complex operator[](int j) const { return components_(j); }  // 0-based
    const Vec3& direction() const { return khat_; }
    int helicity() const { return helicity_; }

private:
    CVec3 components_;
    Vec3 khat_;
    int helicity_;
};

// Measure-preserving map of the unit square onto the allowed Dalitz triangle
// {x1, x2 in [0,1], x1 + x2 >= 1}: points with u1 + u2 < 1 are folded through
// the center (1/2, 1/2). Total on [0,1]^2 and deterministic.
DalitzPoint dalitz_sample(double u1, double u2);

// Build the photon triple for a Dalitz point and orientation. In the
// reference orientation the decay plane is x-y (all theta_i = pi/2) and
// photon 1 points along +x; photon 2 takes the positive-y half plane. The
// pairwise opening angles follow from momentum conservation,
// cos(ij) = (x_l^2 - x_i^2 - x_j^2) / (2 x_i x_j).
PhotonTriple build_event(const DalitzPoint& d, const Orientation& o = Orientation());

// Unit normal of the decay plane, n = k1 x k2 / |k1 x k2|.
Vec3 plane_normal(const PhotonTriple& t);

// Circular polarization vector
//   eps(k, lambda) = -lambda/sqrt(2) * (cos(theta)cos(Phi) - i lambda sin(Phi),
//                                       cos(theta)sin(Phi) + i lambda cos(Phi),
//                                       -sin(theta))
// for lambda = +-1. Satisfies eps(k,-) = -conj(eps(k,+)).
PolarizationVector polarization_vector(const SphericalAngles& a, int helicity);
PolarizationVector polarization_vector(const Vec3& khat, int helicity);

// f_ij = 1 - k_i . k_j, clamped to [0, 2]. Symmetric in (i, j).
double f_factor(const PhotonTriple& t, int i, int j);

}  // namespace opsent
