#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "opsent/amplitude.hpp"
#include "opsent/rng.hpp"

using namespace opsent;

namespace {

constexpr double kPi = std::numbers::pi;

DalitzPoint random_interior_point(std::mt19937_64& rng, double margin = 1e-3) {
    for (;;) {
        const DalitzPoint d = dalitz_sample(uniform01(rng), uniform01(rng));
        if (d.x1() > margin && d.x2() > margin && d.x3() > margin) return d;
    }
}

Orientation random_orient(std::mt19937_64& rng) {
    return Orientation(2 * kPi * uniform01(rng), std::acos(2 * uniform01(rng) - 1),
                       2 * kPi * uniform01(rng));
}

// Photon triple with slots relabeled by the permutation perm (new slot i is
// old slot perm[i]).
PhotonTriple permuted(const PhotonTriple& t, const std::array<int, 3>& perm) {
    // x1' + x2' >= 1 can fail for some relabelings of valid events only when
    // the third photon carries more than 1; impossible here.
    const DalitzPoint d(t.k(perm[0]), t.k(perm[1]));
    return PhotonTriple(d, t.orientation(),
                        {t.angles(perm[0]), t.angles(perm[1]), t.angles(perm[2])});
}

}  // namespace

TEST_CASE("HelicityTriple enumeration") {
    CHECK(HelicityTriple::all().size() == 8);
    CHECK(HelicityTriple(+1, +1, +1).index() == 0);
    CHECK(HelicityTriple(-1, -1, -1).index() == 7);
    CHECK(HelicityTriple(+1, +1, -1).index() == 1);
    CHECK(HelicityTriple(+1, +1, -1).label() == "++-");
    int i = 0;
    for (const HelicityTriple& h : HelicityTriple::all()) CHECK(h.index() == i++);
}

TEST_CASE("v_tensor vanishes for aligned helicities") {
    std::mt19937_64 rng = task_rng(10, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const PhotonTriple t = build_event(random_interior_point(rng), random_orient(rng));
        CHECK(v_tensor(t, HelicityTriple(+1, +1, +1)).norm() == 0.0);
        CHECK(v_tensor(t, HelicityTriple(-1, -1, -1)).norm() == 0.0);
    }
}

TEST_CASE("v_tensor(+,+,-) = 2 eps*(k3,-) f12") {
    std::mt19937_64 rng = task_rng(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const PhotonTriple t = build_event(random_interior_point(rng), random_orient(rng));
        const CVec3 v = v_tensor(t, HelicityTriple(+1, +1, -1));
        const CVec3 expected =
            2.0 * f_factor(t, 1, 2) * polarization_vector(t.angles(3), -1).components().conjugate();
        CHECK((v - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("v_tensor is invariant under simultaneous photon permutations") {
    std::mt19937_64 rng = task_rng(12, 0);
    const std::array<std::array<int, 3>, 2> perms = {{{2, 3, 1}, {2, 1, 3}}};
    for (int trial = 0; trial < 100; ++trial) {
        const PhotonTriple t = build_event(random_interior_point(rng), random_orient(rng));
        for (const auto& perm : perms) {
            const PhotonTriple tp = permuted(t, perm);
            for (const HelicityTriple& h : HelicityTriple::all()) {
                const HelicityTriple hp(h.lambda(perm[0]), h.lambda(perm[1]), h.lambda(perm[2]));
                CHECK((v_tensor(t, h) - v_tensor(tp, hp)).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("v_tensor norm is rotation invariant and the vector co-rotates") {
    std::mt19937_64 rng = task_rng(13, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const DalitzPoint d = random_interior_point(rng);
        const Orientation o = random_orient(rng);
        const PhotonTriple ref = build_event(d);
        const PhotonTriple rot = build_event(d, o);
        const Eigen::Matrix3d r = o.rotation();
        for (const HelicityTriple& h : HelicityTriple::all()) {
            const CVec3 v_ref = v_tensor(ref, h);
            const CVec3 v_rot = v_tensor(rot, h);
            CHECK(std::abs(v_rot.norm() - v_ref.norm()) < 1e-12);
            // Same vector up to the per-photon convention phases.
            const CVec3 rotated = r * v_ref;
            CHECK(std::abs(std::abs(v_rot.dot(rotated)) - v_ref.squaredNorm()) < 1e-11);
        }
    }
}

TEST_CASE("matrix_element spin projections") {
    std::mt19937_64 rng = task_rng(14, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const PhotonTriple t = build_event(random_interior_point(rng), random_orient(rng));
        for (const HelicityTriple& h : HelicityTriple::all()) {
            const CVec3 v = v_tensor(t, h);
            CHECK(std::abs(matrix_element(t, SpinProjection::Zero, h) -
                           (-std::numbers::sqrt2 * v(2))) < 1e-14);
            CHECK(std::abs(matrix_element(t, SpinProjection::Plus, h) -
                           (v(0) + Complex(0, 1) * v(1))) < 1e-14);
            CHECK(std::abs(matrix_element(t, SpinProjection::Minus, h) -
                           (-v(0) + Complex(0, 1) * v(1))) < 1e-14);
            // Flipping both the spin and all helicities conjugates M.
            for (SpinProjection s : {SpinProjection::Minus, SpinProjection::Zero,
                                     SpinProjection::Plus}) {
                const SpinProjection ms = spin_projection_from_int(-spin_value(s));
                const Complex lhs = matrix_element(t, ms, h.flipped());
                const Complex rhs = std::conj(matrix_element(t, s, h));
                const double sign = (s == SpinProjection::Zero) ? -1.0 : 1.0;
                CHECK(std::abs(lhs - sign * rhs) < 1e-12);
            }
        }
        CHECK(std::abs(matrix_element(t, SpinProjection::Plus, HelicityTriple(1, 1, 1))) == 0.0);
    }
}

TEST_CASE("state_tensor: planar symmetric point") {
    const PhotonTriple t = build_event(DalitzPoint(2.0 / 3.0, 2.0 / 3.0));
    const StateTensor s = state_tensor(t, SpinProjection::Zero);
    // Amplitudes are twice the closed-form coefficients; all f = 3/2.
    CHECK(std::abs(s.amplitude(HelicityTriple(+1, +1, -1)) - Complex(3.0, 0.0)) < 1e-12);
    CHECK(std::abs(s.amplitude(HelicityTriple(-1, -1, +1)) - Complex(-3.0, 0.0)) < 1e-12);
    CHECK(std::abs(s.amplitude(HelicityTriple(+1, -1, +1)) - Complex(3.0, 0.0)) < 1e-12);
    CHECK(std::abs(s.amplitude(HelicityTriple(-1, +1, -1)) - Complex(-3.0, 0.0)) < 1e-12);
    CHECK(std::abs(s.amplitude(HelicityTriple(-1, +1, +1)) - Complex(3.0, 0.0)) < 1e-12);
    CHECK(std::abs(s.amplitude(HelicityTriple(+1, -1, -1)) - Complex(-3.0, 0.0)) < 1e-12);
    CHECK(std::abs(s.amplitude(HelicityTriple(+1, +1, +1))) == 0.0);
    CHECK(std::abs(s.amplitude(HelicityTriple(-1, -1, -1))) == 0.0);
}

TEST_CASE("state_tensor: S_z = 0 pair antisymmetry") {
    std::mt19937_64 rng = task_rng(15, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const PhotonTriple t = build_event(random_interior_point(rng), random_orient(rng));
        const StateTensor s = state_tensor(t, SpinProjection::Zero);
        CHECK(std::abs(s.amplitude(HelicityTriple(+1, +1, -1)) +
                       s.amplitude(HelicityTriple(-1, -1, +1))) < 1e-12);
        CHECK(std::abs(s.amplitude(HelicityTriple(+1, -1, +1)) +
                       s.amplitude(HelicityTriple(-1, +1, -1))) < 1e-12);
        CHECK(std::abs(s.amplitude(HelicityTriple(-1, +1, +1)) +
                       s.amplitude(HelicityTriple(+1, -1, -1))) < 1e-12);
    }
}

TEST_CASE("state_tensor: collinear pair kills its coefficient") {
    // x3 = 1 means photons 1 and 2 collinear, so f12 = 0 and the gamma pair
    // vanishes.
    const PhotonTriple t = build_event(DalitzPoint(0.5, 0.5));
    const StateTensor s = state_tensor(t, SpinProjection::Zero);
    CHECK(std::abs(s.amplitude(HelicityTriple(+1, +1, -1))) < 1e-12);
    CHECK(std::abs(s.amplitude(HelicityTriple(-1, -1, +1))) < 1e-12);
    CHECK(s.norm() > 1.0);
}

TEST_CASE("closed_form_coefficients: oracle equivalence") {
    std::mt19937_64 rng = task_rng(16, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const PhotonTriple t = build_event(random_interior_point(rng), random_orient(rng));
        for (SpinProjection s :
             {SpinProjection::Minus, SpinProjection::Zero, SpinProjection::Plus}) {
            const ClosedFormComparison c = closed_form_coefficients(t, s);
            CHECK(c.max_relative_residual < 1e-10);
            const double expected = (s == SpinProjection::Zero) ? 2.0 : std::numbers::sqrt2;
            CHECK(std::abs(c.global_factor) == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("closed_form_coefficients: planar values") {
    const PhotonTriple t = build_event(DalitzPoint(0.9, 0.7));
    const ClosedFormComparison zero = closed_form_coefficients(t, SpinProjection::Zero);
    CHECK(std::abs(zero.coefficients[0].value - Complex(f_factor(t, 1, 2), 0.0)) < 1e-13);
    CHECK(std::abs(zero.coefficients[2].value - Complex(f_factor(t, 1, 3), 0.0)) < 1e-13);
    CHECK(std::abs(zero.coefficients[4].value - Complex(f_factor(t, 2, 3), 0.0)) < 1e-13);

    // cos(theta) = 0 in the plane, so |gamma(1)| = |gamma(2)| = f12.
    const ClosedFormComparison plus = closed_form_coefficients(t, SpinProjection::Plus);
    CHECK(std::abs(plus.coefficients[0].value) == doctest::Approx(f_factor(t, 1, 2)));
    CHECK(std::abs(plus.coefficients[1].value) == doctest::Approx(f_factor(t, 1, 2)));
}

TEST_CASE("closed_form_coefficients: theta3 = 0 pole") {
    const DalitzPoint d(0.9, 0.7);
    const PhotonTriple ref = build_event(d);
    // Rotate photon 3 onto +z.
    const Orientation o(0.0, -kPi / 2, -ref.angles(3).phi);
    const PhotonTriple t = build_event(d, o);
    REQUIRE(t.angles(3).theta < 1e-12);
    const ClosedFormComparison plus = closed_form_coefficients(t, SpinProjection::Plus);
    CHECK(std::abs(plus.coefficients[0].value) < 1e-12);  // gamma+(1) ~ cos(theta3) - 1 = 0
    CHECK(plus.max_relative_residual < 1e-10);
}

TEST_CASE("S_z = +-1 planar amplitudes carry the e^{+-i Phi_i} phases") {
    std::mt19937_64 rng = task_rng(17, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const DalitzPoint d = random_interior_point(rng, 0.05);
        if (d.x1() > 0.95 || d.x2() > 0.95 || d.x3() > 0.95) continue;
        // Planar: rotations about z keep the plane normal along z.
        const Orientation o(2 * kPi * uniform01(rng), 0.0, 0.0);
        const PhotonTriple t = build_event(d, o);
        for (SpinProjection s : {SpinProjection::Minus, SpinProjection::Plus}) {
            const StateTensor st = state_tensor(t, s);
            const double sign = spin_value(s);
            // The photon whose helicity differs sets the phase.
            const std::array<std::pair<HelicityTriple, int>, 6> kets = {{
                {HelicityTriple(+1, +1, -1), 3},
                {HelicityTriple(-1, -1, +1), 3},
                {HelicityTriple(+1, -1, +1), 2},
                {HelicityTriple(-1, +1, -1), 2},
                {HelicityTriple(-1, +1, +1), 1},
                {HelicityTriple(+1, -1, -1), 1},
            }};
            Complex global(0.0, 0.0);
            for (const auto& [ket, photon] : kets) {
                const Complex amp = st.amplitude(ket);
                REQUIRE(std::abs(amp) > 1e-10);
                const Complex phase =
                    amp / (std::abs(amp) *
                           std::exp(Complex(0.0, sign * t.angles(photon).phi)));
                if (global == Complex(0.0, 0.0)) global = phase;
                CHECK(std::abs(phase - global) < 1e-10);
            }
        }
    }
}

TEST_CASE("decay_weight invariances") {
    std::mt19937_64 rng = task_rng(18, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const DalitzPoint d = random_interior_point(rng);
        const PhotonTriple t = build_event(d, random_orient(rng));
        const double w = decay_weight(t);
        CHECK(w > 0.0);

        // Any relabeling of the photons.
        for (const std::array<int, 3>& perm :
             {std::array<int, 3>{2, 3, 1}, {3, 1, 2}, {2, 1, 3}, {1, 3, 2}, {3, 2, 1}}) {
            CHECK(decay_weight(permuted(t, perm)) == doctest::Approx(w).epsilon(1e-12));
        }
        // Any orientation.
        CHECK(decay_weight(build_event(d, random_orient(rng))) ==
              doctest::Approx(w).epsilon(1e-12));
    }
}

TEST_CASE("decay_weight: planar closed form") {
    // In the plane every |V(h)|^2 reduces to 4 f^2 for its pair, so
    // w = (16/3)(f12^2 + f13^2 + f23^2).
    std::mt19937_64 rng = task_rng(19, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const PhotonTriple t = build_event(random_interior_point(rng));
        const double f12 = f_factor(t, 1, 2), f13 = f_factor(t, 1, 3), f23 = f_factor(t, 2, 3);
        const double expected = (16.0 / 3.0) * (f12 * f12 + f13 * f13 + f23 * f23);
        CHECK(decay_weight(t) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("StateTensor norm cache and zero-norm guard") {
    std::mt19937_64 rng = task_rng(20, 0);
    const PhotonTriple t = build_event(random_interior_point(rng), random_orient(rng));
    const StateTensor s = state_tensor(t, SpinProjection::Plus);
    double n2 = 0.0;
    for (const Complex& c : s.amplitudes()) n2 += std::norm(c);
    CHECK(std::abs(s.norm() - std::sqrt(n2)) <= 1e-14 * s.norm());
    CHECK(s.normalized().norm() == doctest::Approx(1.0).epsilon(1e-14));

    std::array<Complex, 8> tiny{};
    tiny[0] = Complex(1e-15, 0.0);
    CHECK_THROWS_AS(StateTensor(tiny, Basis::Circular).normalized(), ZeroNormState);
}
