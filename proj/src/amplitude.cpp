#include "opsent/amplitude.hpp"

#include <cmath>
#include <numbers>

namespace opsent {

namespace {

// Bilinear (unconjugated) dot of two complex 3-vectors.
Complex bdot(const CVec3& a, const CVec3& b) {
    return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

// Azimuthal gauge angles (delta_1, delta_2, delta_3) rotating each photon's
// transverse basis so that every conjugated same-helicity pair dot comes out
// real negative. With S_l = arg(eps*_i(+) . eps*_j(+)) + pi for the pair
// opposite photon l, the angles solve delta_i + delta_j - delta_l = S_l.
// A collinear pair has a vanishing dot; arg(0) = 0 fixes the leftover
// freedom deterministically.
std::array<double, 3> gauge_angles(const std::array<CVec3, 3>& eps_plus) {
    auto pair_dot = [&](int i, int j) {
        return bdot(eps_plus[i].conjugate(), eps_plus[j].conjugate());
    };
    const double s1 = std::arg(pair_dot(1, 2)) + std::numbers::pi;
    const double s2 = std::arg(pair_dot(0, 2)) + std::numbers::pi;
    const double s3 = std::arg(pair_dot(0, 1)) + std::numbers::pi;
    return {0.5 * (s2 + s3), 0.5 * (s1 + s3), 0.5 * (s1 + s2)};
}

std::array<std::array<CVec3, 2>, 3> event_polarization_basis(const PhotonTriple& t) {
    std::array<CVec3, 3> plus;
    for (int i = 0; i < 3; ++i)
        plus[i] = polarization_vector(t.angles(i + 1), +1).components();
    const std::array<double, 3> delta = gauge_angles(plus);
    std::array<std::array<CVec3, 2>, 3> out;
    for (int i = 0; i < 3; ++i) {
        const Complex phase = std::exp(Complex(0.0, delta[i]));
        out[i][0] = phase * plus[i];
        // eps(k, -) = -conj(eps(k, +)) survives the gauge rotation.
        out[i][1] = -out[i][0].conjugate();
    }
    return out;
}

}  // namespace

std::string HelicityTriple::label() const {
    std::string s;
    for (int i = 1; i <= 3; ++i) s += (lambda(i) > 0 ? '+' : '-');
    return s;
}

const std::array<HelicityTriple, 8>& HelicityTriple::all() {
    static const std::array<HelicityTriple, 8> kAll = {
        HelicityTriple(+1, +1, +1), HelicityTriple(+1, +1, -1),
        HelicityTriple(+1, -1, +1), HelicityTriple(+1, -1, -1),
        HelicityTriple(-1, +1, +1), HelicityTriple(-1, +1, -1),
        HelicityTriple(-1, -1, +1), HelicityTriple(-1, -1, -1),
    };
    return kAll;
}

SpinProjection spin_projection_from_int(int s) {
    switch (s) {
        case -1: return SpinProjection::Minus;
        case 0: return SpinProjection::Zero;
        case +1: return SpinProjection::Plus;
        default: throw ValidationError("S_z must be -1, 0 or +1");
    }
}

StateTensor::StateTensor(const std::array<Complex, 8>& amplitudes, Basis basis)
    : amplitudes_(amplitudes), basis_(basis) {
    double n2 = 0.0;
    for (const Complex& c : amplitudes_) n2 += std::norm(c);
    norm_ = std::sqrt(n2);
}

StateTensor StateTensor::normalized() const {
    if (norm_ < kZeroNormThreshold) throw ZeroNormState("state norm below zero threshold");
    std::array<Complex, 8> out = amplitudes_;
    for (Complex& c : out) c /= norm_;
    return StateTensor(out, basis_);
}

PolarizationVector event_polarization_vector(const PhotonTriple& t, int photon, int helicity) {
    if (photon < 1 || photon > 3) throw IndexError("photon index out of range 1..3");
    if (helicity != 1 && helicity != -1) throw ValidationError("helicity must be +1 or -1");
    const auto basis = event_polarization_basis(t);
    return PolarizationVector(basis[photon - 1][helicity < 0], t.direction(photon), helicity);
}

CVec3 v_tensor(const PhotonTriple& t, const HelicityTriple& h) {
    const auto basis = event_polarization_basis(t);
    const CVec3 e1 = basis[0][h.lambda(1) < 0].conjugate();
    const CVec3 e2 = basis[1][h.lambda(2) < 0].conjugate();
    const CVec3 e3 = basis[2][h.lambda(3) < 0].conjugate();
    const double l1 = h.lambda(1), l2 = h.lambda(2), l3 = h.lambda(3);
    return (l1 - l2) * (l2 + l3) * bdot(e2, e3) * e1 +
           (l2 - l3) * (l3 + l1) * bdot(e3, e1) * e2 +
           (l3 - l1) * (l1 + l2) * bdot(e1, e2) * e3;
}

Complex matrix_element(const PhotonTriple& t, SpinProjection s, const HelicityTriple& h) {
    const CVec3 v = v_tensor(t, h);
    switch (s) {
        case SpinProjection::Zero: return -std::numbers::sqrt2 * v(2);
        case SpinProjection::Plus: return v(0) + Complex(0.0, 1.0) * v(1);
        case SpinProjection::Minus: return -v(0) + Complex(0.0, 1.0) * v(1);
    }
    throw ValidationError("invalid spin projection");
}

StateTensor state_tensor(const PhotonTriple& t, SpinProjection s) {
    std::array<Complex, 8> amps;
    for (const HelicityTriple& h : HelicityTriple::all())
        amps[h.index()] = matrix_element(t, s, h);
    StateTensor out(amps, Basis::Circular);
    if (out.norm() < kZeroNormThreshold)
        throw ZeroNormState("decay state has zero norm (fully degenerate kinematics)");
    return out;
}

ClosedFormComparison closed_form_coefficients(const PhotonTriple& t, SpinProjection s) {
    const double f12 = f_factor(t, 1, 2);
    const double f13 = f_factor(t, 1, 3);
    const double f23 = f_factor(t, 2, 3);
    const double th1 = t.angles(1).theta, th2 = t.angles(2).theta, th3 = t.angles(3).theta;

    std::array<ClosedFormCoefficient, 6> coefficients = [&] {
        if (s == SpinProjection::Zero) {
            const double gamma0 = std::sin(th3) * f12;
            const double beta0 = std::sin(th2) * f13;
            const double alpha0 = std::sin(th1) * f23;
            return std::array<ClosedFormCoefficient, 6>{
                ClosedFormCoefficient{"gamma0", HelicityTriple(+1, +1, -1), Complex(gamma0, 0.0)},
                ClosedFormCoefficient{"-gamma0", HelicityTriple(-1, -1, +1),
                                      Complex(-gamma0, 0.0)},
                ClosedFormCoefficient{"beta0", HelicityTriple(+1, -1, +1), Complex(beta0, 0.0)},
                ClosedFormCoefficient{"-beta0", HelicityTriple(-1, +1, -1), Complex(-beta0, 0.0)},
                ClosedFormCoefficient{"alpha0", HelicityTriple(-1, +1, +1), Complex(alpha0, 0.0)},
                ClosedFormCoefficient{"-alpha0", HelicityTriple(+1, -1, -1),
                                      Complex(-alpha0, 0.0)},
            };
        }
        const double sgn = (s == SpinProjection::Plus) ? 1.0 : -1.0;
        const Complex ph1 = std::exp(Complex(0.0, sgn * t.angles(1).phi));
        const Complex ph2 = std::exp(Complex(0.0, sgn * t.angles(2).phi));
        const Complex ph3 = std::exp(Complex(0.0, sgn * t.angles(3).phi));
        const Complex g1 = ph3 * (std::cos(th3) - 1.0) * f12;
        const Complex g2 = ph3 * (-std::cos(th3) - 1.0) * f12;
        const Complex b1 = ph2 * (std::cos(th2) - 1.0) * f13;
        const Complex b2 = ph2 * (-std::cos(th2) - 1.0) * f13;
        // The published alpha coefficients carry cos(theta2); the V kernel
        // yields cos(theta1), matching the pattern of the other two pairs.
        const Complex a1 = ph1 * (std::cos(th1) - 1.0) * f23;
        const Complex a2 = ph1 * (-std::cos(th1) - 1.0) * f23;
        // (1)-coefficients attach to |++->, |+-+>, |-++> for S_z = +1; for
        // S_z = -1 the assignment swaps to the helicity-flipped kets.
        const bool plus = (s == SpinProjection::Plus);
        const char* tag = plus ? "+" : "-";
        auto ket = [plus](int a, int b, int c) {
            return plus ? HelicityTriple(a, b, c) : HelicityTriple(-a, -b, -c);
        };
        return std::array<ClosedFormCoefficient, 6>{
            ClosedFormCoefficient{std::string("gamma") + tag + "(1)", ket(+1, +1, -1), g1},
            ClosedFormCoefficient{std::string("gamma") + tag + "(2)", ket(-1, -1, +1), g2},
            ClosedFormCoefficient{std::string("beta") + tag + "(1)", ket(+1, -1, +1), b1},
            ClosedFormCoefficient{std::string("beta") + tag + "(2)", ket(-1, +1, -1), b2},
            ClosedFormCoefficient{std::string("alpha") + tag + "(1)", ket(-1, +1, +1), a1},
            ClosedFormCoefficient{std::string("alpha") + tag + "(2)", ket(+1, -1, -1), a2},
        };
    }();

    // Fit the single global factor from the largest closed-form entry, then
    // record the worst relative residual over all six.
    const StateTensor st = state_tensor(t, s);
    Complex global_factor(0.0, 0.0);
    double best = -1.0;
    for (const auto& c : coefficients) {
        if (std::abs(c.value) > best) {
            best = std::abs(c.value);
            global_factor = st.amplitude(c.ket) / c.value;
        }
    }
    double scale = 0.0;
    for (const auto& c : coefficients) scale = std::max(scale, std::abs(st.amplitude(c.ket)));
    double resid = 0.0;
    for (const auto& c : coefficients)
        resid = std::max(resid, std::abs(st.amplitude(c.ket) - global_factor * c.value));
    return ClosedFormComparison{s, coefficients, global_factor,
                                (scale > 0.0) ? resid / scale : resid};
}

double decay_weight(const PhotonTriple& t) {
    double sum = 0.0;
    for (const HelicityTriple& h : HelicityTriple::all()) sum += v_tensor(t, h).squaredNorm();
    return (2.0 / 3.0) * sum;
}

StateTensor pair_coefficient_state(double alpha, double beta, double gamma) {
    std::array<Complex, 8> amps{};
    amps[HelicityTriple(+1, +1, -1).index()] = Complex(gamma, 0.0);
    amps[HelicityTriple(-1, -1, +1).index()] = Complex(-gamma, 0.0);
    amps[HelicityTriple(+1, -1, +1).index()] = Complex(beta, 0.0);
    amps[HelicityTriple(-1, +1, -1).index()] = Complex(-beta, 0.0);
    amps[HelicityTriple(-1, +1, +1).index()] = Complex(alpha, 0.0);
    amps[HelicityTriple(+1, -1, -1).index()] = Complex(-alpha, 0.0);
    return StateTensor(amps, Basis::Circular);
}

}  // namespace opsent
