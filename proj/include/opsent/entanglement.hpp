#pragma once

#include <array>
#include <optional>
#include <string>

#include "opsent/amplitude.hpp"

namespace opsent {

enum class StateClass { Product, Biseparable, WClass, GhzClass };

// Bipartition of the three photons: the named photon against the other two.
enum class Cut { One_23 = 0, Two_13 = 1, Three_12 = 2 };

std::string to_string(StateClass c);
std::string to_string(Cut c);

struct Tolerances {
    // A cut counts as rank-1 when its second singular value (normalized
    // state) falls below this.
    double rank = 1e-9;
    // tau below this, with no rank-1 cut, classifies as W.
    double tangle = 1e-10;
    double zero_norm = kZeroNormThreshold;
};

struct EntanglementReport {
    Complex hyperdeterminant;  // evaluated on the normalized amplitudes
    double tangle;             // tau = 4 |Hdet|
    std::array<std::array<double, 2>, 3> singular_values;  // per cut, descending
    StateClass state_class;
    std::optional<Cut> cut;  // set when state_class == Biseparable
    Tolerances tolerances;
};

// Change of basis per photon, |+-> = (|0> +- i|1>)/sqrt(2). Unitary, so the
// norm is preserved; to_circular_basis is the exact inverse.
StateTensor to_linear_basis(const StateTensor& s);
StateTensor to_circular_basis(const StateTensor& s);

// Full Cayley 2x2x2 hyperdeterminant of the NORMALIZED amplitudes:
//   Hdet = c000^2 c111^2 + c001^2 c110^2 + c010^2 c101^2 + c100^2 c011^2
//        - 2 (c000 c001 c110 c111 + c000 c010 c101 c111 + c000 c100 c011 c111
//             + c001 c010 c101 c110 + c001 c100 c011 c110 + c010 c100 c011 c101)
//        + 4 (c000 c011 c101 c110 + c001 c010 c100 c111).
// |Hdet| <= 1/4 and is invariant under local unitaries; the complex value
// itself picks up det(U)^2 phases per slot, so it differs between the
// circular and linear bases.
Complex hyperdeterminant(const StateTensor& s);

// tau = 4 |Hdet|. 1 for GHZ, 0 for W and for all separable states.
double three_tangle(const StateTensor& s);

// The published S_z = 0 product formula, evaluated verbatim:
//   (-a + b - g)(a - b - g)(-a - b + g)(a + b + g).
// With coefficients normalized so the state has unit norm
// (2(a^2+b^2+g^2) = 1) this equals MINUS the Cayley hyperdeterminant of the
// corresponding state; the constant -1 is fixed by the oracle tests.
double s_z0_hdet_product(double alpha0, double beta0, double gamma0);

// Singular values of the 2x4 amplitude matrix of the normalized state for
// the chosen cut, descending; their squares sum to 1.
std::array<double, 2> bipartition_schmidt(const StateTensor& s, Cut cut);

// Decision tree: three rank-1 cuts => PRODUCT (two rank-1 cuts can only be
// rounding on a product state and map there too); exactly one => BISEPARABLE
// on that cut; none and tau < tol.tangle => W_CLASS; otherwise GHZ_CLASS.
EntanglementReport classify(const StateTensor& s, const Tolerances& tol = Tolerances());

// Reference states (linear basis tags).
StateTensor ghz_state();  // (|000> + |111>)/sqrt(2)
StateTensor w_state();    // (|001> + |010> + |100>)/sqrt(3)

}  // namespace opsent
