#include "opsent/serialization.hpp"

#include <cstdio>

namespace opsent {

namespace {

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("complex value must be [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

void require_keys(const Json& j, std::initializer_list<const char*> keys, const char* what) {
    if (!j.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys)
            if (item.key() == k) known = true;
        if (!known)
            throw ValidationError(std::string("unknown key \"") + item.key() + "\" in " + what);
    }
}

}  // namespace

Json to_json(const DalitzPoint& d) { return Json{{"x1", d.x1()}, {"x2", d.x2()}}; }

DalitzPoint dalitz_from_json(const Json& j) {
    require_keys(j, {"x1", "x2"}, "DalitzPoint");
    return DalitzPoint(j.at("x1").get<double>(), j.at("x2").get<double>());
}

Json to_json(const Orientation& o) {
    return Json{{"alpha", o.alpha()}, {"beta", o.beta()}, {"gamma", o.gamma()}};
}

Orientation orientation_from_json(const Json& j) {
    require_keys(j, {"alpha", "beta", "gamma"}, "Orientation");
    return Orientation(j.at("alpha").get<double>(), j.at("beta").get<double>(),
                       j.at("gamma").get<double>());
}

Json to_json(const StateTensor& s) {
    Json amps = Json::array();
    for (const Complex& c : s.amplitudes()) amps.push_back(complex_to_json(c));
    return Json{{"basis", s.basis() == Basis::Circular ? "circular" : "linear"},
                {"amplitudes", amps}};
}

StateTensor state_tensor_from_json(const Json& j) {
    require_keys(j, {"basis", "amplitudes"}, "StateTensor");
    const std::string basis = j.at("basis").get<std::string>();
    if (basis != "circular" && basis != "linear")
        throw ValidationError("basis must be \"circular\" or \"linear\"");
    const Json& amps = j.at("amplitudes");
    if (!amps.is_array() || amps.size() != 8)
        throw ValidationError("amplitudes must hold 8 [re, im] pairs");
    std::array<Complex, 8> out;
    for (int i = 0; i < 8; ++i) out[i] = complex_from_json(amps[i]);
    return StateTensor(out, basis == "circular" ? Basis::Circular : Basis::Linear);
}

Json to_json(const PhotonTriple& t) {
    Json k = Json::array(), theta = Json::array(), phi = Json::array();
    for (int i = 1; i <= 3; ++i) {
        k.push_back(t.k(i));
        theta.push_back(t.angles(i).theta);
        phi.push_back(t.angles(i).phi);
    }
    return Json{{"k", k},
                {"theta", theta},
                {"phi", phi},
                {"dalitz", to_json(t.dalitz())},
                {"orientation", to_json(t.orientation())}};
}

PhotonTriple photon_triple_from_json(const Json& j) {
    require_keys(j, {"k", "theta", "phi", "dalitz", "orientation"}, "PhotonTriple");
    const DalitzPoint d = dalitz_from_json(j.at("dalitz"));
    const Orientation o = orientation_from_json(j.at("orientation"));
    std::array<SphericalAngles, 3> angles;
    for (int i = 0; i < 3; ++i) {
        angles[i].theta = j.at("theta").at(i).get<double>();
        angles[i].phi = j.at("phi").at(i).get<double>();
    }
    return PhotonTriple(d, o, angles);
}

Json to_json(const EntanglementReport& r) {
    Json sv;
    for (int c = 0; c < 3; ++c)
        sv[to_string(static_cast<Cut>(c))] =
            Json::array({r.singular_values[c][0], r.singular_values[c][1]});
    Json out{{"hyperdeterminant", complex_to_json(r.hyperdeterminant)},
             {"tangle", r.tangle},
             {"singular_values", sv},
             {"class", to_string(r.state_class)},
             {"tolerances",
              Json{{"rank", r.tolerances.rank},
                   {"tangle", r.tolerances.tangle},
                   {"zero_norm", r.tolerances.zero_norm}}}};
    out["cut"] = r.cut ? Json(to_string(*r.cut)) : Json(nullptr);
    return out;
}

Json to_json(const AnalyzerSetting& s) {
    Json axes = Json::array();
    for (const Vec3& a : s.axes) axes.push_back(Json::array({a.x(), a.y(), a.z()}));
    Json out{{"formalism", s.formalism == Formalism::Qubit2D ? "qubit_2d" : "spin1_3d"},
             {"axes", axes}};
    if (s.local_bases) {
        Json bases = Json::array();
        for (const Eigen::Matrix2cd& b : *s.local_bases) {
            Json m = Json::array();
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) m.push_back(complex_to_json(b(r, c)));
            bases.push_back(m);
        }
        out["local_bases"] = bases;
    }
    return out;
}

AnalyzerSetting analyzer_setting_from_json(const Json& j) {
    require_keys(j, {"formalism", "axes", "local_bases"}, "AnalyzerSetting");
    AnalyzerSetting s;
    const std::string f = j.at("formalism").get<std::string>();
    if (f == "qubit_2d")
        s.formalism = Formalism::Qubit2D;
    else if (f == "spin1_3d")
        s.formalism = Formalism::Spin13D;
    else
        throw ValidationError("formalism must be \"qubit_2d\" or \"spin1_3d\"");
    for (const Json& a : j.at("axes"))
        s.axes.emplace_back(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>());
    if (j.contains("local_bases") && !j.at("local_bases").is_null()) {
        std::vector<Eigen::Matrix2cd> bases;
        for (const Json& b : j.at("local_bases")) {
            if (!b.is_array() || b.size() != 4)
                throw ValidationError("a local basis is 4 [re, im] entries, row-major");
            Eigen::Matrix2cd m;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) m(r, c) = complex_from_json(b[2 * r + c]);
            bases.push_back(m);
        }
        s.local_bases = std::move(bases);
    }
    s.validate();
    return s;
}

Json to_json(const ClosedFormComparison& c) {
    Json coeffs = Json::array();
    for (const ClosedFormCoefficient& e : c.coefficients)
        coeffs.push_back(Json{{"label", e.label},
                              {"ket", e.ket.label()},
                              {"value", complex_to_json(e.value)}});
    return Json{{"s_z", spin_value(c.s)},
                {"coefficients", coeffs},
                {"global_factor", complex_to_json(c.global_factor)},
                {"max_relative_residual", c.max_relative_residual}};
}

Json to_json(const MerminSettings& s) {
    auto vec = [](const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); };
    return Json{{"a", vec(s.a[0])},      {"a_prime", vec(s.a[1])}, {"b", vec(s.b[0])},
                {"b_prime", vec(s.b[1])}, {"c", vec(s.c[0])},      {"c_prime", vec(s.c[1])}};
}

Json to_json(const EventRecord& e) {
    return Json{{"photons", to_json(e.photons)}, {"state", to_json(e.state)},
                {"weight", e.weight}};
}

EventRecord event_record_from_json(const Json& j) {
    require_keys(j, {"photons", "state", "weight"}, "EventRecord");
    return EventRecord{photon_triple_from_json(j.at("photons")),
                       state_tensor_from_json(j.at("state")), j.at("weight").get<double>()};
}

Json to_json(const SearchResult& r) {
    Json findings = Json::array();
    for (const SearchFinding& f : r.findings) {
        findings.push_back(Json{{"x1", f.point.x1()},
                                {"x2", f.point.x2()},
                                {"orientation", to_json(f.orientation)},
                                {"hdet_abs", f.hdet_abs},
                                {"seed_hdet_abs", f.seed_hdet_abs},
                                {"report", to_json(f.report)},
                                {"iterations", f.iterations},
                                {"converged", f.converged},
                                {"simplex_diameter", f.simplex_diameter}});
    }
    return Json{{"policy", to_string(r.policy)},
                {"seeds", r.seeds},
                {"converged", r.converged_count},
                {"findings", findings}};
}

std::string class_label(StateClass c, const std::optional<Cut>& cut) {
    std::string label = to_string(c);
    if (c == StateClass::Biseparable && cut) label += "(" + to_string(*cut) + ")";
    return label;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::string scan_csv_header() {
    return "x1,x2,theta1,theta2,theta3,phi1,phi2,phi3,s_z,observable,value,class,norm";
}

std::string scan_csv_row(const ScanRow& row, Observable observable) {
    std::string out;
    out += format_double(row.x1) + "," + format_double(row.x2);
    for (int i = 0; i < 3; ++i) out += "," + format_double(row.theta[i]);
    for (int i = 0; i < 3; ++i) out += "," + format_double(row.phi[i]);
    out += "," + std::to_string(row.s_z);
    out += "," + to_string(observable);
    out += "," + format_double(row.value);
    out += "," + class_label(row.state_class, row.cut);
    out += "," + format_double(row.norm);
    return out;
}

}  // namespace opsent
