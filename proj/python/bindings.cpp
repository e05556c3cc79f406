#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opsent/serialization.hpp"

namespace py = pybind11;
using namespace opsent;

namespace {

py::array_t<std::complex<double>> amplitudes_array(const StateTensor& s) {
    py::array_t<std::complex<double>> out({2, 2, 2});
    auto view = out.mutable_unchecked<3>();
    for (int i = 0; i < 8; ++i) view(i >> 2, (i >> 1) & 1, i & 1) = s[i];
    return out;
}

StateTensor state_from_array(py::array_t<std::complex<double>, py::array::c_style> arr,
                             const std::string& basis) {
    if (arr.ndim() != 3 || arr.shape(0) != 2 || arr.shape(1) != 2 || arr.shape(2) != 2)
        throw ValidationError("amplitudes must have shape (2, 2, 2)");
    auto view = arr.unchecked<3>();
    std::array<Complex, 8> amps;
    for (int i = 0; i < 8; ++i) amps[i] = view(i >> 2, (i >> 1) & 1, i & 1);
    if (basis != "circular" && basis != "linear")
        throw ValidationError("basis must be \"circular\" or \"linear\"");
    return StateTensor(amps, basis == "circular" ? Basis::Circular : Basis::Linear);
}

py::array_t<std::complex<double>> tensor333_array(const Tensor333& t) {
    py::array_t<std::complex<double>> out({3, 3, 3});
    auto view = out.mutable_unchecked<3>();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) view(i, j, k) = t.at(i, j, k);
    return out;
}

Tensor333 tensor333_from_array(py::array_t<std::complex<double>, py::array::c_style> arr) {
    if (arr.ndim() != 3 || arr.shape(0) != 3 || arr.shape(1) != 3 || arr.shape(2) != 3)
        throw ValidationError("tensor must have shape (3, 3, 3)");
    auto view = arr.unchecked<3>();
    Tensor333 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) out.at(i, j, k) = view(i, j, k);
    return out;
}

MerminSettings settings_from_dict(const py::dict& d) {
    auto get = [&](const char* key) { return d[key].cast<Vec3>().normalized(); };
    MerminSettings s;
    s.a = {get("a"), get("a_prime")};
    s.b = {get("b"), get("b_prime")};
    s.c = {get("c"), get("c_prime")};
    return s;
}

py::dict settings_to_dict(const MerminSettings& s) {
    py::dict d;
    d["a"] = s.a[0];
    d["a_prime"] = s.a[1];
    d["b"] = s.b[0];
    d["b_prime"] = s.b[1];
    d["c"] = s.c[0];
    d["c_prime"] = s.c[1];
    return d;
}

SpinProjection spin_arg(int s_z) { return spin_projection_from_int(s_z); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Entangled three-photon states from ortho-positronium decay";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DegenerateKinematics>(m, "DegenerateKinematicsError",
                                                 PyExc_ValueError);
    py::register_exception<ZeroNormState>(m, "ZeroNormStateError", PyExc_ValueError);
    py::register_exception<BasisError>(m, "BasisError", PyExc_ValueError);
    py::register_exception<NoConvergence>(m, "NoConvergenceError", PyExc_RuntimeError);
    py::register_exception<EnvelopeExceeded>(m, "EnvelopeExceededError", PyExc_RuntimeError);

    py::class_<DalitzPoint>(m, "DalitzPoint")
        .def(py::init<double, double>(), py::arg("x1"), py::arg("x2"))
        .def_property_readonly("x1", &DalitzPoint::x1)
        .def_property_readonly("x2", &DalitzPoint::x2)
        .def_property_readonly("x3", &DalitzPoint::x3)
        .def("__repr__", [](const DalitzPoint& d) {
            return "DalitzPoint(x1=" + std::to_string(d.x1()) + ", x2=" + std::to_string(d.x2()) +
                   ")";
        });

    py::class_<Orientation>(m, "Orientation")
        .def(py::init<>())
        .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("beta"),
             py::arg("gamma"))
        .def_property_readonly("alpha", &Orientation::alpha)
        .def_property_readonly("beta", &Orientation::beta)
        .def_property_readonly("gamma", &Orientation::gamma)
        .def("rotation", &Orientation::rotation);

    py::class_<PhotonTriple>(m, "PhotonTriple")
        .def("k", &PhotonTriple::k, py::arg("i"))
        .def("direction", &PhotonTriple::direction, py::arg("i"))
        .def("theta", [](const PhotonTriple& t, int i) { return t.angles(i).theta; }, py::arg("i"))
        .def("phi", [](const PhotonTriple& t, int i) { return t.angles(i).phi; }, py::arg("i"))
        .def_property_readonly("dalitz", &PhotonTriple::dalitz)
        .def_property_readonly("orientation", &PhotonTriple::orientation);

    py::class_<StateTensor>(m, "StateTensor")
        .def(py::init(&state_from_array), py::arg("amplitudes"), py::arg("basis") = "circular")
        .def_property_readonly("basis",
                               [](const StateTensor& s) {
                                   return s.basis() == Basis::Circular ? "circular" : "linear";
                               })
        .def_property_readonly("norm", &StateTensor::norm)
        .def_property_readonly("amplitudes", &amplitudes_array)
        .def("normalized", &StateTensor::normalized)
        .def("to_json", [](const StateTensor& s) { return to_json(s).dump(); });

    py::enum_<StateClass>(m, "StateClass")
        .value("PRODUCT", StateClass::Product)
        .value("BISEPARABLE", StateClass::Biseparable)
        .value("W_CLASS", StateClass::WClass)
        .value("GHZ_CLASS", StateClass::GhzClass);

    py::class_<EntanglementReport>(m, "EntanglementReport")
        .def_readonly("hyperdeterminant", &EntanglementReport::hyperdeterminant)
        .def_readonly("tangle", &EntanglementReport::tangle)
        .def_readonly("state_class", &EntanglementReport::state_class)
        .def_property_readonly("singular_values",
                               [](const EntanglementReport& r) { return r.singular_values; })
        .def_property_readonly("cut",
                               [](const EntanglementReport& r) -> py::object {
                                   if (!r.cut) return py::none();
                                   return py::str(to_string(*r.cut));
                               })
        .def_property_readonly("label", [](const EntanglementReport& r) {
            return class_label(r.state_class, r.cut);
        });

    // Kinematics.
    m.def("dalitz_sample", &dalitz_sample, py::arg("u1"), py::arg("u2"));
    m.def("build_event", &build_event, py::arg("dalitz"), py::arg("orientation") = Orientation());
    m.def("plane_normal", &plane_normal, py::arg("event"));
    m.def(
        "polarization_vector",
        [](double theta, double phi, int helicity) {
            return polarization_vector(SphericalAngles{theta, phi}, helicity).components();
        },
        py::arg("theta"), py::arg("phi"), py::arg("helicity"));
    m.def("f_factor", &f_factor, py::arg("event"), py::arg("i"), py::arg("j"));

    // Amplitudes.
    m.def(
        "v_tensor",
        [](const PhotonTriple& t, int l1, int l2, int l3) {
            return v_tensor(t, HelicityTriple(l1, l2, l3));
        },
        py::arg("event"), py::arg("l1"), py::arg("l2"), py::arg("l3"));
    m.def(
        "matrix_element",
        [](const PhotonTriple& t, int s_z, int l1, int l2, int l3) {
            return matrix_element(t, spin_arg(s_z), HelicityTriple(l1, l2, l3));
        },
        py::arg("event"), py::arg("s_z"), py::arg("l1"), py::arg("l2"), py::arg("l3"));
    m.def(
        "state_tensor",
        [](const PhotonTriple& t, int s_z) { return state_tensor(t, spin_arg(s_z)); },
        py::arg("event"), py::arg("s_z"));
    m.def(
        "closed_form_coefficients",
        [](const PhotonTriple& t, int s_z) {
            const ClosedFormComparison c = closed_form_coefficients(t, spin_arg(s_z));
            py::list coeffs;
            for (const auto& e : c.coefficients) {
                py::dict d;
                d["label"] = e.label;
                d["ket"] = e.ket.label();
                d["value"] = e.value;
                coeffs.append(d);
            }
            py::dict out;
            out["coefficients"] = coeffs;
            out["global_factor"] = c.global_factor;
            out["max_relative_residual"] = c.max_relative_residual;
            return out;
        },
        py::arg("event"), py::arg("s_z"));
    m.def("decay_weight", &decay_weight, py::arg("event"));
    m.def("pair_coefficient_state", &pair_coefficient_state, py::arg("alpha"), py::arg("beta"),
          py::arg("gamma"));

    // Entanglement.
    m.def("to_linear_basis", &to_linear_basis, py::arg("state"));
    m.def("to_circular_basis", &to_circular_basis, py::arg("state"));
    m.def("hyperdeterminant", &hyperdeterminant, py::arg("state"));
    m.def("three_tangle", &three_tangle, py::arg("state"));
    m.def("s_z0_hdet_product", &s_z0_hdet_product, py::arg("alpha0"), py::arg("beta0"),
          py::arg("gamma0"));
    m.def(
        "bipartition_schmidt",
        [](const StateTensor& s, int cut) {
            if (cut < 1 || cut > 3) throw ValidationError("cut must be 1, 2 or 3");
            return bipartition_schmidt(s, static_cast<Cut>(cut - 1));
        },
        py::arg("state"), py::arg("cut"), "Singular values for the cut photon|rest (1, 2 or 3)");
    m.def(
        "classify",
        [](const StateTensor& s, double rank_tol, double tangle_tol) {
            Tolerances tol;
            tol.rank = rank_tol;
            tol.tangle = tangle_tol;
            return classify(s, tol);
        },
        py::arg("state"), py::arg("rank_tol") = 1e-9, py::arg("tangle_tol") = 1e-10);
    m.def("ghz_state", &ghz_state);
    m.def("w_state", &w_state);

    // Correlations.
    m.def("deformed_singlet", &deformed_singlet, py::arg("alpha"));
    m.def("para_positronium_state", &para_positronium_state);
    m.def("deformed_correlation_closed", &deformed_correlation_closed, py::arg("alpha"),
          py::arg("a"), py::arg("b"));
    m.def("two_qubit_correlation", &two_qubit_correlation, py::arg("state"), py::arg("a"),
          py::arg("b"));
    m.def("spin1_matrix", &spin1_matrix, py::arg("axis"));
    m.def(
        "embed_3d",
        [](const StateTensor& s, const PhotonTriple& t) { return tensor333_array(embed_3d(s, t)); },
        py::arg("state"), py::arg("event"));
    m.def(
        "correlation_3d",
        [](py::array_t<std::complex<double>, py::array::c_style> psi, const Vec3& a, const Vec3& b,
           const Vec3& c) { return correlation_3d(tensor333_from_array(psi), a, b, c); },
        py::arg("psi"), py::arg("a"), py::arg("b"), py::arg("c"));
    m.def(
        "correlation_2d",
        [](const StateTensor& s, const Vec3& a, const Vec3& b, const Vec3& c) {
            AnalyzerSetting setting;
            setting.axes = {a.normalized(), b.normalized(), c.normalized()};
            return correlation_2d(s, setting);
        },
        py::arg("state"), py::arg("a"), py::arg("b"), py::arg("c"));
    m.def(
        "mermin_value",
        [](const StateTensor& s, const py::dict& settings) {
            Correlator3 corr = [&s](const Vec3& a, const Vec3& b, const Vec3& c) {
                AnalyzerSetting setting;
                setting.axes = {a, b, c};
                return correlation_2d(s, setting);
            };
            return mermin_value(corr, settings_from_dict(settings));
        },
        py::arg("state"), py::arg("settings"));

    // Search.
    m.def(
        "scan_dalitz",
        [](int n, int s_z, const std::string& observable, int threads) {
            ScanSpec spec;
            spec.n = n;
            spec.s_z = spin_arg(s_z);
            spec.threads = threads;
            if (observable == "tangle")
                spec.observable = Observable::Tangle;
            else if (observable == "hdet")
                spec.observable = Observable::Hdet;
            else if (observable == "class")
                spec.observable = Observable::Class;
            else if (observable == "weight")
                spec.observable = Observable::Weight;
            else
                throw ValidationError("observable must be tangle, hdet, class or weight");
            const ScanResult r = scan_dalitz(spec);
            py::list rows;
            for (const ScanRow& row : r.rows) {
                py::dict d;
                d["x1"] = row.x1;
                d["x2"] = row.x2;
                d["value"] = row.value;
                d["class"] = class_label(row.state_class, row.cut);
                d["norm"] = row.norm;
                rows.append(d);
            }
            return rows;
        },
        py::arg("n"), py::arg("s_z") = 0, py::arg("observable") = "tangle", py::arg("threads") = 1);
    m.def(
        "find_hdet_zeros",
        [](int s_z, const std::string& policy, int grid_n, int angle_grid, int threads) {
            SearchOptions options;
            options.grid_n = grid_n;
            options.angle_grid = angle_grid;
            options.threads = threads;
            QuantizationPolicy p;
            if (policy == "plane-normal")
                p = QuantizationPolicy::PlaneNormal;
            else if (policy == "fixed-z")
                p = QuantizationPolicy::FixedZ;
            else
                throw ValidationError("policy must be plane-normal or fixed-z");
            const SearchResult r = find_hdet_zeros(spin_arg(s_z), p, options);
            py::list findings;
            for (const SearchFinding& f : r.findings) {
                py::dict d;
                d["x1"] = f.point.x1();
                d["x2"] = f.point.x2();
                d["hdet_abs"] = f.hdet_abs;
                d["class"] = class_label(f.report.state_class, f.report.cut);
                d["converged"] = f.converged;
                findings.append(d);
            }
            return findings;
        },
        py::arg("s_z") = 0, py::arg("policy") = "plane-normal", py::arg("grid_n") = 51,
        py::arg("angle_grid") = 13, py::arg("threads") = 1);
    m.def(
        "optimize_settings",
        [](const StateTensor& s, const std::string& objective, int restarts, std::uint64_t seed) {
            OptimizeOptions options;
            options.restarts = restarts;
            options.seed = seed;
            BellObjective obj;
            if (objective == "mermin")
                obj = BellObjective::Mermin;
            else if (objective == "svetlichny")
                obj = BellObjective::Svetlichny;
            else
                throw ValidationError("objective must be mermin or svetlichny");
            const OptimizedSettings best = optimize_settings(s, obj, options);
            py::dict out;
            out["value"] = best.value;
            out["settings"] = settings_to_dict(best.settings);
            out["converged_restarts"] = best.converged_restarts;
            return out;
        },
        py::arg("state"), py::arg("objective") = "mermin", py::arg("restarts") = 20,
        py::arg("seed") = 0);
    m.def(
        "sample_events",
        [](long n, const std::string& weighting, std::uint64_t seed, int s_z,
           bool random_orientation) {
            SampleOptions options;
            options.seed = seed;
            options.s_z = spin_arg(s_z);
            options.random_orientation = random_orientation;
            if (weighting == "uniform")
                options.weighting = Weighting::Uniform;
            else if (weighting == "matrix-element")
                options.weighting = Weighting::MatrixElement;
            else
                throw ValidationError("weighting must be uniform or matrix-element");
            const SampleResult r = sample_events(n, options);
            py::list events;
            for (const EventRecord& e : r.events) {
                py::dict d;
                d["x1"] = e.photons.dalitz().x1();
                d["x2"] = e.photons.dalitz().x2();
                d["weight"] = e.weight;
                d["state"] = e.state;
                events.append(d);
            }
            py::dict out;
            out["events"] = events;
            out["acceptance_rate"] = r.acceptance_rate;
            out["envelope"] = r.envelope;
            return out;
        },
        py::arg("n"), py::arg("weighting") = "uniform", py::arg("seed") = 0, py::arg("s_z") = 0,
        py::arg("random_orientation") = false);

    m.attr("MERMIN_CLASSICAL_BOUND") = kMerminClassicalBound;
    m.attr("SVETLICHNY_CLASSICAL_BOUND") = kSvetlichnyClassicalBound;
}
