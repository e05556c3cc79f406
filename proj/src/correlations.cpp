#include "opsent/correlations.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace opsent {

namespace {

constexpr Complex kI(0.0, 1.0);

Eigen::Matrix2cd pauli_dot(const Vec3& a) {
    Eigen::Matrix2cd m;
    m << Complex(a.z(), 0.0), Complex(a.x(), -a.y()), Complex(a.x(), a.y()), Complex(-a.z(), 0.0);
    return m;
}

void require_unit(const Vec3& a, const char* name) {
    if (std::abs(a.norm() - 1.0) > 1e-12)
        throw ValidationError(std::string(name) + " axis is not unit norm");
}

// <psi| O1 (x) O2 |psi> / <psi|psi> on two qubits.
Complex two_qubit_expectation(const TwoQubitState& psi, const Eigen::Matrix2cd& o1,
                              const Eigen::Matrix2cd& o2) {
    const double n2 = psi.squaredNorm();
    if (n2 < kZeroNormThreshold * kZeroNormThreshold)
        throw ZeroNormState("two-qubit state has zero norm");
    TwoQubitState phi = TwoQubitState::Zero();
    for (int r1 = 0; r1 < 2; ++r1)
        for (int r2 = 0; r2 < 2; ++r2)
            for (int c1 = 0; c1 < 2; ++c1)
                for (int c2 = 0; c2 < 2; ++c2)
                    phi(2 * r1 + r2) += o1(r1, c1) * o2(r2, c2) * psi(2 * c1 + c2);
    return psi.dot(phi) / n2;  // Eigen dot conjugates the left argument
}

// Apply a 2x2 operator to one slot of an 8-amplitude qubit tensor.
std::array<Complex, 8> apply_qubit_op(const std::array<Complex, 8>& in, int slot,
                                      const Eigen::Matrix2cd& m) {
    std::array<Complex, 8> out{};
    const int stride = 4 >> slot;
    for (int idx = 0; idx < 8; ++idx) {
        const int bit = (idx / stride) % 2;
        const int base = idx - bit * stride;
        out[idx] = m(bit, 0) * in[base] + m(bit, 1) * in[base + stride];
    }
    return out;
}

double real_expectation(Complex value, const char* what) {
    if (std::abs(value.imag()) > 1e-12)
        throw Error(std::string(what) + ": imaginary residue above tolerance");
    return value.real();
}

}  // namespace

void AnalyzerSetting::validate() const {
    const std::size_t parties = axes.size();
    if (parties != 2 && parties != 3)
        throw ValidationError("analyzer setting needs one axis per party (2 or 3)");
    for (const Vec3& a : axes) require_unit(a, "analyzer");
    if (local_bases) {
        if (formalism != Formalism::Qubit2D)
            throw ValidationError("local bases only apply to the 2D formalism");
        if (local_bases->size() != parties)
            throw ValidationError("one local basis per party required");
        for (const Eigen::Matrix2cd& b : *local_bases) {
            if (((b.adjoint() * b) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12)
                throw BasisError("local basis is not orthonormal");
        }
    }
}

TwoQubitState deformed_singlet(double alpha) {
    TwoQubitState s = TwoQubitState::Zero();
    const double r = 1.0 / std::numbers::sqrt2;
    s(1) = Complex(r, 0.0);
    s(2) = -std::exp(kI * alpha) * r;
    return s;
}

TwoQubitState para_positronium_state() {
    TwoQubitState s = TwoQubitState::Zero();
    const double r = 1.0 / std::numbers::sqrt2;
    s(0) = Complex(r, 0.0);
    s(3) = Complex(-r, 0.0);
    return s;
}

double deformed_correlation_closed(double alpha, const Vec3& a, const Vec3& b) {
    require_unit(a, "a");
    require_unit(b, "b");
    const double ca = std::cos(alpha);
    const double sa = std::sin(alpha);
    return -0.25 * (ca * a.dot(b) + a.z() * b.z() * (1.0 - ca) - a.cross(b).z() * sa);
}

double two_qubit_correlation(const TwoQubitState& state, const Vec3& a, const Vec3& b) {
    require_unit(a, "a");
    require_unit(b, "b");
    const Complex v = two_qubit_expectation(state, 0.5 * pauli_dot(a), 0.5 * pauli_dot(b));
    return real_expectation(v, "two_qubit_correlation");
}

double two_qubit_correlation_pauli(const TwoQubitState& state, const Vec3& a, const Vec3& b) {
    require_unit(a, "a");
    require_unit(b, "b");
    const Complex v = two_qubit_expectation(state, pauli_dot(a), pauli_dot(b));
    return real_expectation(v, "two_qubit_correlation_pauli");
}

Eigen::Matrix3cd spin1_matrix(const Vec3& axis) {
    require_unit(axis, "spin");
    Eigen::Matrix3cd m;
    m << Complex(0, 0), -kI * axis.z(), kI * axis.y(),
         kI * axis.z(), Complex(0, 0), -kI * axis.x(),
        -kI * axis.y(), kI * axis.x(), Complex(0, 0);
    return m;
}

Spin1Eigensystem spin1_eigensystem(const Vec3& axis) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(spin1_matrix(axis));
    Spin1Eigensystem out;
    for (int i = 0; i < 3; ++i) {
        out.values[i] = solver.eigenvalues()(i);
        CVec3 v = solver.eigenvectors().col(i);
        // Phase convention: first component above threshold real positive.
        for (int j = 0; j < 3; ++j) {
            if (std::abs(v(j)) > 1e-12) {
                v *= std::conj(v(j)) / std::abs(v(j));
                break;
            }
        }
        out.vectors[i] = v;
    }
    return out;
}

double Tensor333::norm() const {
    double n2 = 0.0;
    for (const Complex& c : data_) n2 += std::norm(c);
    return std::sqrt(n2);
}

Tensor333 embed_3d(const StateTensor& s, const PhotonTriple& t) {
    if (s.basis() != Basis::Circular)
        throw BasisError("embed_3d requires a circular-basis state");
    if (s.norm() < kZeroNormThreshold) throw ZeroNormState("cannot embed a zero-norm state");
    // Kets in the same event-adapted gauge the amplitudes are written in.
    std::array<std::array<CVec3, 2>, 3> eps;
    for (int i = 0; i < 3; ++i) {
        eps[i][0] = event_polarization_vector(t, i + 1, +1).components();
        eps[i][1] = event_polarization_vector(t, i + 1, -1).components();
    }
    Tensor333 psi;
    for (const HelicityTriple& h : HelicityTriple::all()) {
        const Complex c = s.amplitude(h);
        if (c == Complex(0.0, 0.0)) continue;
        const CVec3& e1 = eps[0][h.lambda(1) < 0];
        const CVec3& e2 = eps[1][h.lambda(2) < 0];
        const CVec3& e3 = eps[2][h.lambda(3) < 0];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) psi.at(i, j, k) += c * e1(i) * e2(j) * e3(k);
    }
    return psi;
}

double correlation_3d(const Tensor333& psi, const Vec3& a, const Vec3& b, const Vec3& c) {
    const double n = psi.norm();
    if (n < kZeroNormThreshold) throw ZeroNormState("correlation_3d on zero-norm tensor");
    const Eigen::Matrix3cd sa = spin1_matrix(a);
    const Eigen::Matrix3cd sb = spin1_matrix(b);
    const Eigen::Matrix3cd sc = spin1_matrix(c);
    Complex acc(0.0, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                Complex op(0.0, 0.0);
                for (int p = 0; p < 3; ++p)
                    for (int q = 0; q < 3; ++q)
                        for (int r = 0; r < 3; ++r)
                            op += sa(i, p) * sb(j, q) * sc(k, r) * psi.at(p, q, r);
                acc += std::conj(psi.at(i, j, k)) * op;
            }
    return real_expectation(acc / (n * n), "correlation_3d");
}

double correlation_2d(const StateTensor& s, const AnalyzerSetting& setting) {
    if (setting.formalism != Formalism::Qubit2D)
        throw ValidationError("correlation_2d requires the QUBIT_2D formalism");
    if (setting.axes.size() != 3)
        throw ValidationError("correlation_2d needs three analyzer axes");
    setting.validate();

    std::array<Complex, 8> amps = s.amplitudes();
    if (setting.local_bases) {
        // Re-express the amplitudes in each party's local basis: c' = B^dag c.
        for (int slot = 0; slot < 3; ++slot) {
            const Eigen::Matrix2cd bdag = (*setting.local_bases)[slot].adjoint();
            amps = apply_qubit_op(amps, slot, bdag);
        }
    }

    double n2 = 0.0;
    for (const Complex& c : amps) n2 += std::norm(c);
    if (n2 < kZeroNormThreshold * kZeroNormThreshold)
        throw ZeroNormState("correlation_2d on zero-norm state");

    std::array<Complex, 8> phi = amps;
    for (int slot = 0; slot < 3; ++slot)
        phi = apply_qubit_op(phi, slot, pauli_dot(setting.axes[slot]));

    Complex acc(0.0, 0.0);
    for (int idx = 0; idx < 8; ++idx) acc += std::conj(amps[idx]) * phi[idx];
    return real_expectation(acc / n2, "correlation_2d");
}

double mermin_value(const Correlator3& correlator, const MerminSettings& s) {
    return correlator(s.a[0], s.b[0], s.c[1]) + correlator(s.a[0], s.b[1], s.c[0]) +
           correlator(s.a[1], s.b[0], s.c[0]) - correlator(s.a[1], s.b[1], s.c[1]);
}

double svetlichny_value(const Correlator3& correlator, const MerminSettings& s) {
    const double m = mermin_value(correlator, s);
    const double m_swapped = correlator(s.a[1], s.b[1], s.c[0]) +
                             correlator(s.a[1], s.b[0], s.c[1]) +
                             correlator(s.a[0], s.b[1], s.c[1]) -
                             correlator(s.a[0], s.b[0], s.c[0]);
    return m + m_swapped;
}

}  // namespace opsent
