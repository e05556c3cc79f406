#include "opsent/entanglement.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>

namespace opsent {

namespace {

// Apply a 2x2 matrix to one slot of the 2x2x2 tensor.
std::array<Complex, 8> apply_local(const std::array<Complex, 8>& in, int slot,
                                   const Eigen::Matrix2cd& m) {
    std::array<Complex, 8> out{};
    const int stride = 4 >> slot;  // slot 0,1,2 -> stride 4,2,1
    for (int idx = 0; idx < 8; ++idx) {
        const int bit = (idx / stride) % 2;
        const int base = idx - bit * stride;
        out[idx] = m(bit, 0) * in[base] + m(bit, 1) * in[base + stride];
    }
    return out;
}

Eigen::Matrix2cd circular_to_linear_matrix() {
    // Columns are |+> and |-> expressed in the |0>,|1> basis.
    Eigen::Matrix2cd u;
    const double r = 1.0 / std::numbers::sqrt2;
    u << Complex(r, 0.0), Complex(r, 0.0), Complex(0.0, r), Complex(0.0, -r);
    return u;
}

}  // namespace

std::string to_string(StateClass c) {
    switch (c) {
        case StateClass::Product: return "PRODUCT";
        case StateClass::Biseparable: return "BISEPARABLE";
        case StateClass::WClass: return "W_CLASS";
        case StateClass::GhzClass: return "GHZ_CLASS";
    }
    return "?";
}

std::string to_string(Cut c) {
    switch (c) {
        case Cut::One_23: return "1|23";
        case Cut::Two_13: return "2|13";
        case Cut::Three_12: return "3|12";
    }
    return "?";
}

StateTensor to_linear_basis(const StateTensor& s) {
    if (s.basis() != Basis::Circular) throw BasisError("state is already in the linear basis");
    const Eigen::Matrix2cd u = circular_to_linear_matrix();
    std::array<Complex, 8> amps = s.amplitudes();
    for (int slot = 0; slot < 3; ++slot) amps = apply_local(amps, slot, u);
    return StateTensor(amps, Basis::Linear);
}

StateTensor to_circular_basis(const StateTensor& s) {
    if (s.basis() != Basis::Linear) throw BasisError("state is already in the circular basis");
    const Eigen::Matrix2cd u = circular_to_linear_matrix().adjoint();
    std::array<Complex, 8> amps = s.amplitudes();
    for (int slot = 0; slot < 3; ++slot) amps = apply_local(amps, slot, u);
    return StateTensor(amps, Basis::Circular);
}

Complex hyperdeterminant(const StateTensor& s) {
    const StateTensor n = s.normalized();
    const auto c = [&n](int b1, int b2, int b3) { return n.amplitude(b1, b2, b3); };
    const Complex c000 = c(0, 0, 0), c001 = c(0, 0, 1), c010 = c(0, 1, 0), c011 = c(0, 1, 1);
    const Complex c100 = c(1, 0, 0), c101 = c(1, 0, 1), c110 = c(1, 1, 0), c111 = c(1, 1, 1);
    return c000 * c000 * c111 * c111 + c001 * c001 * c110 * c110 +
           c010 * c010 * c101 * c101 + c100 * c100 * c011 * c011 -
           2.0 * (c000 * c001 * c110 * c111 + c000 * c010 * c101 * c111 +
                  c000 * c100 * c011 * c111 + c001 * c010 * c101 * c110 +
                  c001 * c100 * c011 * c110 + c010 * c100 * c011 * c101) +
           4.0 * (c000 * c011 * c101 * c110 + c001 * c010 * c100 * c111);
}

double three_tangle(const StateTensor& s) { return 4.0 * std::abs(hyperdeterminant(s)); }

double s_z0_hdet_product(double a, double b, double g) {
    return (-a + b - g) * (a - b - g) * (-a - b + g) * (a + b + g);
}

std::array<double, 2> bipartition_schmidt(const StateTensor& s, Cut cut) {
    const StateTensor n = s.normalized();
    const int slot = static_cast<int>(cut);
    const int stride = 4 >> slot;
    Eigen::Matrix<Complex, 2, 4> m;
    for (int idx = 0; idx < 8; ++idx) {
        const int row = (idx / stride) % 2;
        const int hi = idx / (stride * 2);
        const int lo = idx % stride;
        m(row, hi * stride + lo) = n[idx];
    }
    // Jacobi keeps the small singular value accurate to eps * ||m||, which
    // the rank-1 threshold relies on; the QR preconditioner wants rows >= cols.
    Eigen::JacobiSVD<Eigen::Matrix<Complex, 4, 2>> svd(m.adjoint());
    return {svd.singularValues()(0), svd.singularValues()(1)};
}

EntanglementReport classify(const StateTensor& s, const Tolerances& tol) {
    EntanglementReport report;
    report.tolerances = tol;
    report.hyperdeterminant = hyperdeterminant(s);
    report.tangle = 4.0 * std::abs(report.hyperdeterminant);

    int rank1_count = 0;
    std::optional<Cut> rank1_cut;
    for (int c = 0; c < 3; ++c) {
        const Cut cut = static_cast<Cut>(c);
        report.singular_values[c] = bipartition_schmidt(s, cut);
        if (report.singular_values[c][1] < tol.rank) {
            ++rank1_count;
            rank1_cut = cut;
        }
    }

    if (rank1_count >= 2) {
        report.state_class = StateClass::Product;
    } else if (rank1_count == 1) {
        report.state_class = StateClass::Biseparable;
        report.cut = rank1_cut;
    } else if (report.tangle < tol.tangle) {
        report.state_class = StateClass::WClass;
    } else {
        report.state_class = StateClass::GhzClass;
    }
    return report;
}

StateTensor ghz_state() {
    std::array<Complex, 8> amps{};
    const double r = 1.0 / std::numbers::sqrt2;
    amps[0] = Complex(r, 0.0);
    amps[7] = Complex(r, 0.0);
    return StateTensor(amps, Basis::Linear);
}

StateTensor w_state() {
    std::array<Complex, 8> amps{};
    const double r = 1.0 / std::sqrt(3.0);
    amps[1] = Complex(r, 0.0);
    amps[2] = Complex(r, 0.0);
    amps[4] = Complex(r, 0.0);
    return StateTensor(amps, Basis::Linear);
}

}  // namespace opsent
