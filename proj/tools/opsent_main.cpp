// opsent: ortho-positronium three-photon entanglement toolkit.
//
// Subcommands: state, classify, scan, search, bell, sample. Every command is
// deterministic for a fixed --seed. Exit codes: 0 ok, 1 I/O, 2 invalid
// input/kinematics, 3 numerical failure (no convergence, envelope exceeded,
// zero-norm state).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "opsent/config.hpp"
#include "opsent/serialization.hpp"

namespace {

using namespace opsent;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
    if (!path || path->empty() || *path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw IoError("cannot open " + *path + " for writing");
    out << text;
    if (!out) throw IoError("failed writing " + *path);
}

// Per-command options shared by every subcommand; merged as
// flag > config file > default, then OPSENT_THREADS overrides the threads.
struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> format;
    std::optional<std::string> output;
    std::optional<double> tol_rank;
    std::optional<double> tol_tangle;
    std::optional<double> tol_zero_norm;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "JSON config file; flag > config > default");
    cmd->add_option("--seed", c.seed, "RNG seed (integer; default 0)");
    cmd->add_option("--threads", c.threads,
                    "worker threads (default 1; OPSENT_THREADS env overrides)");
    cmd->add_option("--format", c.format, "output format: csv, json or jsonl");
    cmd->add_option("-o,--output", c.output, "output path (default stdout)");
    cmd->add_option("--tol-rank", c.tol_rank,
                    "second singular value below this is rank-1 (default 1e-9)");
    cmd->add_option("--tol-tangle", c.tol_tangle,
                    "tangle below this classifies W (default 1e-10)");
    cmd->add_option("--tol-zero-norm", c.tol_zero_norm,
                    "norm below this is a zero state (default 1e-12)");
}

RunConfig resolve(const Common& c) {
    RunConfig rc;
    if (!c.config_path.empty()) rc = RunConfig::from_json_text(read_file(c.config_path));
    if (c.seed) rc.seed = *c.seed;
    if (c.threads) rc.threads = *c.threads;
    if (c.format) rc.format = output_format_from_string(*c.format);
    if (c.output) rc.output = *c.output;
    auto positive = [](std::optional<double> v, const char* name) {
        if (v && !(*v > 0.0))
            throw ValidationError(std::string(name) + " must be strictly positive");
    };
    positive(c.tol_rank, "--tol-rank");
    positive(c.tol_tangle, "--tol-tangle");
    positive(c.tol_zero_norm, "--tol-zero-norm");
    if (c.tol_rank) rc.tolerances.rank = *c.tol_rank;
    if (c.tol_tangle) rc.tolerances.tangle = *c.tol_tangle;
    if (c.tol_zero_norm) rc.tolerances.zero_norm = *c.tol_zero_norm;
    if (rc.threads < 1) throw ValidationError("threads must be >= 1");
    if (const char* env = std::getenv("OPSENT_THREADS")) {
        char* end = nullptr;
        const long t = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || t < 1)
            throw ValidationError("OPSENT_THREADS must be a positive integer");
        rc.threads = static_cast<int>(t);
    }
    return rc;
}

// Kinematic state selection shared by state/classify/scan/search/bell.
struct KinematicOpts {
    double x1 = 0.0, x2 = 0.0;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    int s_z = 0;
};

void add_kinematics(CLI::App* cmd, KinematicOpts& k, bool require_point) {
    auto* x1 = cmd->add_option("--x1", k.x1, "photon 1 energy fraction x1 in [0, 1]");
    auto* x2 = cmd->add_option("--x2", k.x2, "photon 2 energy fraction x2 in [0, 1]");
    if (require_point) {
        x1->required();
        x2->required();
    }
    cmd->add_option("--alpha", k.alpha, "Euler alpha (rad, ZYZ; default 0)");
    cmd->add_option("--beta", k.beta, "Euler beta (rad, ZYZ; default 0)");
    cmd->add_option("--gamma", k.gamma, "Euler gamma (rad, ZYZ; default 0)");
    cmd->add_option("--sz", k.s_z, "spin projection S_z: -1, 0 or +1 (default 0)")
        ->check(CLI::IsMember({-1, 0, 1}));
}

Vec3 parse_axis(const std::string& s, const char* name) {
    Vec3 v;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> v.x() >> c1 >> v.y() >> c2 >> v.z()) || c1 != ',' || c2 != ',')
        throw ValidationError(std::string(name) + " must be \"x,y,z\"");
    const double n = v.norm();
    if (n < 1e-12) throw ValidationError(std::string(name) + " axis has zero norm");
    return v / n;
}

// Named test states. ghz and w are three-qubit; para and singlet:<alpha>
// are two-qubit pairs.
bool is_two_qubit_name(const std::string& name) {
    return name == "para" || name.rfind("singlet:", 0) == 0 || name == "singlet";
}

StateTensor named_three_qubit_state(const std::string& name) {
    if (name == "ghz") return ghz_state();
    if (name == "w") return w_state();
    if (is_two_qubit_name(name))
        throw ValidationError("\"" + name + "\" is a two-qubit state; this command needs three photons");
    throw ValidationError("unknown state \"" + name + "\" (expected ghz, w, para, singlet:<alpha>)");
}

TwoQubitState named_two_qubit_state(const std::string& name) {
    if (name == "para") return para_positronium_state();
    if (name == "singlet") return deformed_singlet(0.0);
    if (name.rfind("singlet:", 0) == 0) {
        const std::string arg = name.substr(8);
        try {
            return deformed_singlet(std::stod(arg));
        } catch (const std::exception&) {
            throw ValidationError("cannot parse singlet deformation angle \"" + arg + "\"");
        }
    }
    throw ValidationError("\"" + name + "\" is not a two-qubit state (expected para or singlet:<alpha>)");
}

AnalyzerSetting parse_settings_arg(const std::string& arg) {
    const std::string text = (!arg.empty() && arg.front() == '{') ? arg : read_file(arg);
    try {
        return analyzer_setting_from_json(Json::parse(text));
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("analyzer settings are not valid JSON: ") + e.what());
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

int run_state(const Common& common, const KinematicOpts& kin) {
    const RunConfig rc = resolve(common);
    const PhotonTriple event = build_event(DalitzPoint(kin.x1, kin.x2),
                                           Orientation(kin.alpha, kin.beta, kin.gamma));
    const SpinProjection s = spin_projection_from_int(kin.s_z);
    const StateTensor state = state_tensor(event, s);
    Json out{{"photons", to_json(event)},
             {"state", to_json(state)},
             {"norm", state.norm()},
             {"closed_form", to_json(closed_form_coefficients(event, s))}};
    write_output(rc.output, dump(out));
    return 0;
}

int run_classify(const Common& common, const KinematicOpts& kin, const std::string& named,
                 bool have_point) {
    const RunConfig rc = resolve(common);
    std::optional<StateTensor> state;
    if (!named.empty()) {
        state = named_three_qubit_state(named);
    } else if (have_point) {
        const PhotonTriple event = build_event(DalitzPoint(kin.x1, kin.x2),
                                               Orientation(kin.alpha, kin.beta, kin.gamma));
        state = state_tensor(event, spin_projection_from_int(kin.s_z));
    } else {
        throw ValidationError("classify needs either --state or --x1/--x2");
    }
    const EntanglementReport report = classify(*state, rc.tolerances);
    Json out = to_json(report);
    out["class_label"] = class_label(report.state_class, report.cut);
    write_output(rc.output, dump(out));
    return 0;
}

Json scan_row_to_json(const ScanRow& row, Observable observable) {
    return Json{{"x1", row.x1},
                {"x2", row.x2},
                {"theta", row.theta},
                {"phi", row.phi},
                {"s_z", row.s_z},
                {"observable", to_string(observable)},
                {"value", row.value},
                {"class", class_label(row.state_class, row.cut)},
                {"norm", row.norm}};
}

int run_scan(const Common& common, const KinematicOpts& kin, int n,
             const std::string& observable, const std::string& settings_arg) {
    const RunConfig rc = resolve(common);
    ScanSpec spec;
    spec.n = n;
    spec.s_z = spin_projection_from_int(kin.s_z);
    spec.orientation = Orientation(kin.alpha, kin.beta, kin.gamma);
    spec.tolerances = rc.tolerances;
    spec.threads = rc.threads;
    if (observable == "tangle")
        spec.observable = Observable::Tangle;
    else if (observable == "hdet")
        spec.observable = Observable::Hdet;
    else if (observable == "class")
        spec.observable = Observable::Class;
    else if (observable == "weight")
        spec.observable = Observable::Weight;
    else if (observable == "correlator")
        spec.observable = Observable::Correlator;
    else
        throw ValidationError("observable must be tangle, hdet, class, weight or correlator");
    if (!settings_arg.empty()) spec.settings = parse_settings_arg(settings_arg);

    const ScanResult result = scan_dalitz(spec);

    const OutputFormat format = rc.format.value_or(OutputFormat::Csv);
    std::string text;
    if (format == OutputFormat::Csv) {
        text = scan_csv_header() + "\n";
        for (const ScanRow& row : result.rows) text += scan_csv_row(row, spec.observable) + "\n";
    } else if (format == OutputFormat::Jsonl) {
        for (const ScanRow& row : result.rows)
            text += scan_row_to_json(row, spec.observable).dump() + "\n";
    } else {
        Json rows = Json::array();
        for (const ScanRow& row : result.rows)
            rows.push_back(scan_row_to_json(row, spec.observable));
        text = dump(Json{{"rows", rows}, {"degenerate_skipped", result.degenerate_skipped}});
    }
    write_output(rc.output, text);
    std::cerr << "scan: " << result.rows.size() << " rows, " << result.degenerate_skipped
              << " degenerate points skipped\n";
    return 0;
}

int run_search(const Common& common, const KinematicOpts& kin, const std::string& policy_name,
               SearchOptions options, const std::string& superpose) {
    const RunConfig rc = resolve(common);
    options.tolerances = rc.tolerances;
    options.threads = rc.threads;
    QuantizationPolicy policy;
    if (policy_name == "plane-normal")
        policy = QuantizationPolicy::PlaneNormal;
    else if (policy_name == "fixed-z")
        policy = QuantizationPolicy::FixedZ;
    else
        throw ValidationError("policy must be plane-normal or fixed-z");
    if (!superpose.empty()) {
        std::array<Complex, 3> w;
        std::istringstream in(superpose);
        std::array<double, 6> parts{};
        char c;
        for (int i = 0; i < 6; ++i) {
            if (!(in >> parts[i])) throw ValidationError("--superpose needs 6 comma-separated numbers");
            if (i < 5 && !(in >> c)) throw ValidationError("--superpose needs 6 comma-separated numbers");
        }
        for (int i = 0; i < 3; ++i) w[i] = Complex(parts[2 * i], parts[2 * i + 1]);
        options.superposition = w;
    }

    const SearchResult result =
        find_hdet_zeros(spin_projection_from_int(kin.s_z), policy, options);
    Json out = to_json(result);
    out["s_z"] = kin.s_z;
    write_output(rc.output, dump(out));
    return 0;
}

int run_bell(const Common& common, const KinematicOpts& kin, const std::string& named,
             bool have_point, const std::string& objective, const std::string& formalism,
             int restarts, int max_iter, double simplex_tol, const std::string& axis_a,
             const std::string& axis_b) {
    const RunConfig rc = resolve(common);

    if (objective == "correlation") {
        // Two-qubit demonstration: <psi| (a.S)(b.S) |psi> with S = sigma/2.
        if (named.empty() || !is_two_qubit_name(named))
            throw ValidationError("--objective correlation needs --state para or singlet:<alpha>");
        if (axis_a.empty() || axis_b.empty())
            throw ValidationError("--objective correlation needs --a and --b axes");
        const Vec3 a = parse_axis(axis_a, "--a");
        const Vec3 b = parse_axis(axis_b, "--b");
        const double value = two_qubit_correlation(named_two_qubit_state(named), a, b);
        Json out{{"objective", "correlation"},
                 {"state", named},
                 {"a", {a.x(), a.y(), a.z()}},
                 {"b", {b.x(), b.y(), b.z()}},
                 {"spin_normalization", "sigma/2"},
                 {"value", value}};
        write_output(rc.output, dump(out));
        return 0;
    }

    BellObjective obj;
    if (objective == "mermin")
        obj = BellObjective::Mermin;
    else if (objective == "svetlichny")
        obj = BellObjective::Svetlichny;
    else
        throw ValidationError("objective must be mermin, svetlichny or correlation");

    OptimizeOptions opts;
    opts.restarts = restarts;
    opts.seed = rc.seed;
    opts.max_iterations = max_iter;
    opts.simplex_tol = simplex_tol;

    OptimizedSettings best;
    if (formalism == "2d") {
        StateTensor state = [&] {
            if (!named.empty()) return named_three_qubit_state(named);
            if (!have_point) throw ValidationError("bell needs either --state or --x1/--x2");
            const PhotonTriple event = build_event(DalitzPoint(kin.x1, kin.x2),
                                                   Orientation(kin.alpha, kin.beta, kin.gamma));
            return state_tensor(event, spin_projection_from_int(kin.s_z));
        }();
        best = optimize_settings(state, obj, opts);
    } else if (formalism == "3d") {
        if (!have_point)
            throw ValidationError("the 3D formalism needs a kinematic state (--x1/--x2)");
        const PhotonTriple event = build_event(DalitzPoint(kin.x1, kin.x2),
                                               Orientation(kin.alpha, kin.beta, kin.gamma));
        const StateTensor state = state_tensor(event, spin_projection_from_int(kin.s_z));
        best = optimize_settings(embed_3d(state, event), obj, opts);
    } else {
        throw ValidationError("formalism must be 2d or 3d");
    }

    Json out{{"objective", to_string(obj)},
             {"formalism", formalism},
             {"value", best.value},
             {"settings", to_json(best.settings)},
             {"restarts", restarts},
             {"converged_restarts", best.converged_restarts},
             {"classical_bound",
              obj == BellObjective::Mermin ? kMerminClassicalBound : kSvetlichnyClassicalBound}};
    write_output(rc.output, dump(out));
    return 0;
}

int run_sample(const Common& common, const KinematicOpts& kin, long n,
               const std::string& weighting, bool random_orient, double envelope_safety) {
    const RunConfig rc = resolve(common);
    SampleOptions opts;
    opts.seed = rc.seed;
    opts.s_z = spin_projection_from_int(kin.s_z);
    opts.random_orientation = random_orient;
    opts.envelope_safety = envelope_safety;
    if (weighting == "uniform")
        opts.weighting = Weighting::Uniform;
    else if (weighting == "matrix-element")
        opts.weighting = Weighting::MatrixElement;
    else
        throw ValidationError("weighting must be uniform or matrix-element");

    const SampleResult result = sample_events(n, opts);
    std::string text;
    for (const EventRecord& e : result.events) text += to_json(e).dump() + "\n";
    write_output(rc.output, text);
    std::cerr << Json{{"events", result.events.size()},
                      {"acceptance_rate", result.acceptance_rate},
                      {"envelope", result.envelope}}
                     .dump()
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"opsent: entangled three-photon states from ortho-positronium decay"};
    app.require_subcommand(1);

    // state
    auto* state_cmd = app.add_subcommand(
        "state", "print the decay state tensor and its closed-form coefficients");
    Common state_common;
    KinematicOpts state_kin;
    add_common(state_cmd, state_common);
    add_kinematics(state_cmd, state_kin, true);

    // classify
    auto* classify_cmd =
        app.add_subcommand("classify", "entanglement report for a decay or named state");
    Common classify_common;
    KinematicOpts classify_kin;
    std::string classify_named;
    add_common(classify_cmd, classify_common);
    add_kinematics(classify_cmd, classify_kin, false);
    classify_cmd->add_option("--state", classify_named, "named state: ghz or w");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "evaluate an observable over the Dalitz grid");
    Common scan_common;
    KinematicOpts scan_kin;
    int scan_n = 101;
    std::string scan_observable = "tangle";
    std::string scan_settings;
    add_common(scan_cmd, scan_common);
    add_kinematics(scan_cmd, scan_kin, false);
    scan_cmd->add_option("--n", scan_n, "grid resolution per Dalitz axis (default 101)");
    scan_cmd->add_option("--observable", scan_observable,
                         "tangle, hdet, class, weight or correlator (default tangle)");
    scan_cmd->add_option("--settings", scan_settings,
                         "analyzer settings JSON (inline or a file path) for correlator");

    // search
    auto* search_cmd =
        app.add_subcommand("search", "search phase space for hyperdeterminant zeros");
    Common search_common;
    KinematicOpts search_kin;
    std::string search_policy = "plane-normal";
    std::string search_superpose;
    SearchOptions search_options;
    add_common(search_cmd, search_common);
    add_kinematics(search_cmd, search_kin, false);
    search_cmd->add_option("--policy", search_policy,
                           "quantization policy: plane-normal or fixed-z (default plane-normal)");
    search_cmd->add_option("--grid", search_options.grid_n,
                           "coarse Dalitz grid per axis (default 51)");
    search_cmd->add_option("--angle-grid", search_options.angle_grid,
                           "fixed-z policy: grid per Euler angle (default 13)");
    search_cmd->add_option("--trigger", search_options.trigger,
                           "refine grid minima with |Hdet| below this (default 1e-4)");
    search_cmd->add_option("--zero-tol", search_options.zero_tol,
                           "refined |Hdet| below this counts as a zero (default 1e-9)");
    search_cmd->add_option("--max-iter", search_options.max_iterations,
                           "Nelder-Mead iteration budget per seed (default 500)");
    search_cmd->add_option("--simplex-tol", search_options.simplex_tol,
                           "Nelder-Mead simplex diameter tolerance (default 1e-10)");
    search_cmd->add_option(
        "--superpose", search_superpose,
        "coherent S_z superposition weights re,im,re,im,re,im ordered S_z=+1,0,-1");

    // bell
    auto* bell_cmd = app.add_subcommand(
        "bell", "optimize Mermin/Svetlichny settings or evaluate a pair correlation");
    Common bell_common;
    KinematicOpts bell_kin;
    std::string bell_named, bell_objective = "mermin", bell_formalism = "2d";
    std::string bell_a, bell_b;
    int bell_restarts = 20;
    int bell_max_iter = 4000;
    double bell_simplex_tol = 1e-9;
    add_common(bell_cmd, bell_common);
    add_kinematics(bell_cmd, bell_kin, false);
    bell_cmd->add_option("--state", bell_named, "named state: ghz, w, para, singlet:<alpha>");
    bell_cmd->add_option("--objective", bell_objective,
                         "mermin, svetlichny or correlation (default mermin)");
    bell_cmd->add_option("--formalism", bell_formalism, "2d or 3d (default 2d)");
    bell_cmd->add_option("--restarts", bell_restarts, "optimizer restarts (default 20)");
    bell_cmd->add_option("--max-iter", bell_max_iter,
                         "iteration budget per restart (default 4000)");
    bell_cmd->add_option("--simplex-tol", bell_simplex_tol,
                         "simplex diameter tolerance (default 1e-9)");
    bell_cmd->add_option("--a", bell_a, "analyzer axis x,y,z for --objective correlation");
    bell_cmd->add_option("--b", bell_b, "analyzer axis x,y,z for --objective correlation");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "generate decay events (JSONL)");
    Common sample_common;
    KinematicOpts sample_kin;
    long sample_n = 1000;
    std::string sample_weighting = "uniform";
    bool sample_random_orient = false;
    double sample_envelope_safety = 1.2;
    add_common(sample_cmd, sample_common);
    add_kinematics(sample_cmd, sample_kin, false);
    sample_cmd->add_option("--n", sample_n, "number of events (default 1000)");
    sample_cmd->add_option("--weighting", sample_weighting,
                           "uniform or matrix-element (default uniform)");
    sample_cmd->add_flag("--random-orientation", sample_random_orient,
                         "draw a uniform orientation per event (default: identity)");
    sample_cmd->add_option("--envelope-safety", sample_envelope_safety,
                           "rejection envelope safety factor (default 1.2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (state_cmd->parsed()) return run_state(state_common, state_kin);
        if (classify_cmd->parsed())
            return run_classify(classify_common, classify_kin, classify_named,
                                classify_cmd->count("--x1") > 0);
        if (scan_cmd->parsed())
            return run_scan(scan_common, scan_kin, scan_n, scan_observable, scan_settings);
        if (search_cmd->parsed())
            return run_search(search_common, search_kin, search_policy, search_options,
                              search_superpose);
        if (bell_cmd->parsed())
            return run_bell(bell_common, bell_kin, bell_named, bell_cmd->count("--x1") > 0,
                            bell_objective, bell_formalism, bell_restarts, bell_max_iter,
                            bell_simplex_tol, bell_a, bell_b);
        if (sample_cmd->parsed())
            return run_sample(sample_common, sample_kin, sample_n, sample_weighting,
                              sample_random_orient, sample_envelope_safety);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateKinematics& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const EnvelopeExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ZeroNormState& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
