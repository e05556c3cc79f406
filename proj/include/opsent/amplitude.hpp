#pragma once

#include <array>
#include <string>

#include "opsent/kinematics.hpp"

namespace opsent {

// Amplitude basis tag. Circular indexes amplitudes by helicity (+ before -),
// linear by |0>/|1> after the per-photon basis change.
enum class Basis { Circular, Linear };

inline constexpr double kZeroNormThreshold = 1e-12;

// One helicity assignment (lambda1, lambda2, lambda3), each +-1.
class HelicityTriple {
public:
    constexpr HelicityTriple(int l1, int l2, int l3) : lambdas_{l1, l2, l3} {}

    // 1-based accessor.
    constexpr int lambda(int i) const { return lambdas_[i - 1]; }

    // Lexicographic index with + < -, i.e. (+,+,+) -> 0 ... (-,-,-) -> 7.
    constexpr int index() const {
        return 4 * (lambdas_[0] < 0) + 2 * (lambdas_[1] < 0) + (lambdas_[2] < 0);
    }

    constexpr HelicityTriple flipped() const {
        return HelicityTriple(-lambdas_[0], -lambdas_[1], -lambdas_[2]);
    }

    std::string label() const;  // e.g. "++-"

    // All 8 triples in canonical (index) order.
    static const std::array<HelicityTriple, 8>& all();

    friend constexpr bool operator==(const HelicityTriple& a, const HelicityTriple& b) {
        return a.lambdas_ == b.lambdas_;
    }

private:
    std::array<int, 3> lambdas_;
};

enum class SpinProjection : int { Minus = -1, Zero = 0, Plus = +1 };

inline int spin_value(SpinProjection s) { return static_cast<int>(s); }
SpinProjection spin_projection_from_int(int s);

// 2x2x2 complex amplitude tensor, unnormalized, with the norm cached at
// construction. Index order is lexicographic in the three slots with
// + < - (circular) or 0 < 1 (linear).
class StateTensor {
public:
    StateTensor(const std::array<Complex, 8>& amplitudes, Basis basis);

    Basis basis() const { return basis_; }
    double norm() const { return norm_; }
    const std::array<Complex, 8>& amplitudes() const { return amplitudes_; }

    Complex operator[](int idx) const { return amplitudes_[idx]; }
    Complex amplitude(const HelicityTriple& h) const { return amplitudes_[h.index()]; }
    // Linear-basis accessor by bits (0 or 1 per slot).
    Complex amplitude(int b1, int b2, int b3) const {
        return amplitudes_[4 * b1 + 2 * b2 + b3];
    }

    // Unit-norm copy. Throws ZeroNormState below kZeroNormThreshold.
    StateTensor normalized() const;

private:
    std::array<Complex, 8> amplitudes_;
    Basis basis_;
    double norm_;
};

// Per-photon circular polarization vectors in the event-adapted gauge the
// amplitude kernel uses: each photon's transverse basis is rotated about its
// momentum so that every same-helicity pair dot is real negative,
// eps*_i(l) . eps*_j(l) = -f_ij / 2. The lab-fixed component formula of the
// kinematics module satisfies this only when the pair shares an azimuthal
// plane with z; the closed-form coefficient tables assume it for every
// orientation, so the gauge is resolved per event. For the reference
// orientation the gauge is an overall sign flip per photon.
PolarizationVector event_polarization_vector(const PhotonTriple& t, int photon, int helicity);

// The vector amplitude kernel
//   V = (l1-l2)(l2+l3) eps*_1 [eps*_2 . eps*_3]
//     + (l2-l3)(l3+l1) eps*_2 [eps*_3 . eps*_1]
//     + (l3-l1)(l1+l2) eps*_3 [eps*_1 . eps*_2]
// with eps*_i = conj(event_polarization_vector(t, i, lambda_i)) and bilinear
// (unconjugated) dots. Invariant under simultaneous cyclic permutation of
// the (k_i, lambda_i). For any mixed helicity triple this collapses to
// 2 f_ij eps*(k_l, lambda_l) with l the odd photon and (i, j) the aligned
// pair, where eps*(k_l, .) is the plain lab-convention vector (the gauge
// phases of the odd photon cancel).
CVec3 v_tensor(const PhotonTriple& t, const HelicityTriple& h);

// Spin-projected matrix element: -sqrt(2) V_3 for S_z = 0, +-V_1 + i V_2 for
// S_z = +-1.
Complex matrix_element(const PhotonTriple& t, SpinProjection s, const HelicityTriple& h);

// Full amplitude tensor c_h = matrix_element(t, s, h) in the circular basis.
StateTensor state_tensor(const PhotonTriple& t, SpinProjection s);

struct ClosedFormCoefficient {
    std::string label;
    HelicityTriple ket;
    Complex value;
};

// The closed-form coefficient set together with its comparison against the
// amplitudes assembled from the V kernel: one global complex factor per spin
// projection and the worst relative residual over the six entries.
struct ClosedFormComparison {
    SpinProjection s;
    std::array<ClosedFormCoefficient, 6> coefficients;
    Complex global_factor;
    double max_relative_residual;
};

// Closed forms for the six nonvanishing amplitudes.
//
// S_z = 0:   gamma0 = sin(theta3) f12 on |++-> and -gamma0 on |--+>,
//            beta0  = sin(theta2) f13 on |+-+> and -beta0  on |-+->,
//            alpha0 = sin(theta1) f23 on |-++> and -alpha0 on |+-->.
// S_z = +-1: gamma^(1) = e^{+-i Phi3} (cos(theta3) - 1) f12,
//            gamma^(2) = e^{+-i Phi3} (-cos(theta3) - 1) f12, and the beta
//            (theta2, Phi2, f13) / alpha (theta1, Phi1, f23) analogues.
//
// Ket assignment table (verified against the V kernel): for S_z = +1 the
// (1)-coefficients sit on |++->, |+-+>, |-++> and the (2)-coefficients on
// the flipped kets; for S_z = -1 the two columns swap kets.
ClosedFormComparison closed_form_coefficients(const PhotonTriple& t, SpinProjection s);

// Monte Carlo weight (1/3) sum_{S_z} sum_h |M|^2 = (2/3) sum_h |V(h)|^2.
// Symmetric under photon relabeling and invariant under orientation.
double decay_weight(const PhotonTriple& t);

// Circular-basis state with the S_z = 0 pair structure and given real pair
// coefficients: a(|-++> - |+-->) + b(|+-+> - |-+->) + c(|++-> - |--+>).
StateTensor pair_coefficient_state(double alpha, double beta, double gamma);

}  // namespace opsent
