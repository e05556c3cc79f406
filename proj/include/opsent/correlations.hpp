#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "opsent/amplitude.hpp"

namespace opsent {

enum class Formalism { Qubit2D, Spin13D };

// Analyzer axes for a correlation measurement: one unit 3-vector per party,
// the formalism they feed, and (2D only) an optional local basis per party.
// A local basis is a 2x2 unitary whose columns are the two kets identified
// with |0> and |1>; the default is the computational identification, i.e.
// {eps(k_i, +), eps(k_i, -)} for decay states.
struct AnalyzerSetting {
    Formalism formalism = Formalism::Qubit2D;
    std::vector<Vec3> axes;
    std::optional<std::vector<Eigen::Matrix2cd>> local_bases;

    // Throws ValidationError / BasisError on non-unit axes or non-orthonormal
    // bases.
    void validate() const;
};

// Two-qubit amplitudes in the computational basis |00>,|01>,|10>,|11>.
using TwoQubitState = Eigen::Vector4cd;

// (|01> - e^{i alpha} |10>)/sqrt(2); the standard singlet at alpha = 0.
TwoQubitState deformed_singlet(double alpha);

// Para-positronium photon pair (|++> - |-->)/sqrt(2) with + -> |0>, - -> |1>.
TwoQubitState para_positronium_state();

// Closed-form correlation of the deformed singlet with spin operators
// S = sigma/2:
//   -(1/4) [cos(alpha) (a.b) + a_z b_z (1 - cos(alpha)) - (a x b)_z sin(alpha)]
double deformed_correlation_closed(double alpha, const Vec3& a, const Vec3& b);

// Operator evaluation <psi| (a.S)(b.S) |psi> with S = sigma/2, normalized by
// <psi|psi>. The imaginary residue stays below 1e-12.
double two_qubit_correlation(const TwoQubitState& state, const Vec3& a, const Vec3& b);

// Same pair correlation with bare Pauli operators (4x the S = sigma/2 value);
// the two-party counterpart of correlation_2d.
double two_qubit_correlation_pauli(const TwoQubitState& state, const Vec3& a, const Vec3& b);

// Spin-1 generator in the adjoint representation, (S_i)_jk = -i eps_ijk,
// projected on an axis: (a.S) v = i a x v. Hermitian with eigenvalues
// {-1, 0, +1}; the 0-eigenvector is the axis itself.
Eigen::Matrix3cd spin1_matrix(const Vec3& axis);

// Eigensystem of a.S in ascending eigenvalue order {-1, 0, +1}, phases fixed
// so the first component above 1e-12 in magnitude is real positive.
struct Spin1Eigensystem {
    std::array<double, 3> values;
    std::array<CVec3, 3> vectors;
};
Spin1Eigensystem spin1_eigensystem(const Vec3& axis);

// Rank-3 tensor over C^3 x C^3 x C^3 (27 complex components).
class Tensor333 {
public:
    Tensor333() : data_{} {}

    Complex& at(int i, int j, int k) { return data_[9 * i + 3 * j + k]; }
    const Complex& at(int i, int j, int k) const { return data_[9 * i + 3 * j + k]; }
    const std::array<Complex, 27>& data() const { return data_; }

    double norm() const;

private:
    std::array<Complex, 27> data_;
};

// Embed a circular-basis state into the 3D polarization formalism:
//   sum_h c_h eps(k1, l1) (x) eps(k2, l2) (x) eps(k3, l3).
// Isometric (per-photon helicity vectors are orthonormal) and transverse in
// every slot.
Tensor333 embed_3d(const StateTensor& s, const PhotonTriple& t);

// <Psi| (a.S)(b.S)(c.S) |Psi> / <Psi|Psi> in the spin-1 formalism.
double correlation_3d(const Tensor333& psi, const Vec3& a, const Vec3& b, const Vec3& c);

// <Psi| (a.sigma)(b.sigma)(c.sigma) |Psi> / <Psi|Psi> with bare Pauli
// operators acting on the qubit labels of the state tensor, after the
// per-party local basis maps of the setting are applied.
double correlation_2d(const StateTensor& s, const AnalyzerSetting& setting);

// Two analyzer axes per party; index 0 unprimed, 1 primed.
struct MerminSettings {
    std::array<Vec3, 2> a;
    std::array<Vec3, 2> b;
    std::array<Vec3, 2> c;
};

using Correlator3 = std::function<double(const Vec3&, const Vec3&, const Vec3&)>;

// M = E(a,b,c') + E(a,b',c) + E(a',b,c) - E(a',b',c').
double mermin_value(const Correlator3& correlator, const MerminSettings& s);

// S = M + M' with the primed/unprimed roles swapped in M'.
double svetlichny_value(const Correlator3& correlator, const MerminSettings& s);

// Reference bounds for local (Mermin) and hybrid nonlocal (Svetlichny)
// models; documentation constants, never enforced.
inline constexpr double kMerminClassicalBound = 2.0;
inline constexpr double kSvetlichnyClassicalBound = 4.0;

}  // namespace opsent
