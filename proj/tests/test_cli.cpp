#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "opsent/serialization.hpp"

using namespace opsent;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* cli_path() {
    const char* p = std::getenv("OPSENT_CLI");
    REQUIRE_MESSAGE(p != nullptr, "OPSENT_CLI must point at the opsent binary");
    return p;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path();
    const fs::path out = dir / ("opsent_test_out_" + std::to_string(++counter) + ".txt");
    const fs::path err = dir / ("opsent_test_err_" + std::to_string(counter) + ".txt");
    const std::string cmd = std::string(cli_path()) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

}  // namespace

TEST_CASE("state: symmetric point gives six equal-magnitude amplitudes") {
    const RunResult r = run_cli("state --x1 0.666666666666667 --x2 0.666666666666667 --sz 0");
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    const StateTensor s = state_tensor_from_json(j.at("state"));
    int nonzero = 0;
    double magnitude = -1.0;
    for (int i = 0; i < 8; ++i) {
        if (std::abs(s[i]) > 1e-9) {
            ++nonzero;
            if (magnitude < 0) magnitude = std::abs(s[i]);
            CHECK(std::abs(s[i]) == doctest::Approx(magnitude).epsilon(1e-9));
        }
    }
    CHECK(nonzero == 6);
    CHECK(j.at("closed_form").at("max_relative_residual").get<double>() < 1e-10);
    // Round trip through the serialization layer.
    CHECK(to_json(s) == j.at("state"));
}

TEST_CASE("state: out-of-range x1 exits 2 naming the invariant") {
    const RunResult r = run_cli("state --x1 1.2 --x2 0.5");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("x1 out of range") != std::string::npos);
}

TEST_CASE("state: S_z = +1 planar amplitudes carry the azimuthal phases") {
    const RunResult r = run_cli("state --x1 0.9 --x2 0.7 --sz 1");
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    const StateTensor s = state_tensor_from_json(j.at("state"));
    const PhotonTriple t = photon_triple_from_json(j.at("photons"));
    // Phase of the |++-> amplitude relative to the |--+> one is
    // e^{i Phi3} ... e^{i Phi3}: both carry Phi3, so their ratio is real.
    const Complex a = s.amplitude(HelicityTriple(+1, +1, -1));
    const Complex b = s.amplitude(HelicityTriple(-1, -1, +1));
    CHECK(std::abs(std::imag(a / b)) < 1e-12);
    // And the amplitude phase matches e^{i Phi3} up to a real factor.
    const Complex expected = std::exp(Complex(0.0, t.angles(3).phi));
    CHECK(std::abs(std::imag(a / expected)) < 1e-10 * std::abs(a));
}

TEST_CASE("classify: named states and errors") {
    const RunResult ghz = run_cli("classify --state ghz");
    REQUIRE(ghz.exit_code == 0);
    CHECK(Json::parse(ghz.out).at("class") == "GHZ_CLASS");

    const RunResult w = run_cli("classify --state w");
    REQUIRE(w.exit_code == 0);
    CHECK(Json::parse(w.out).at("class") == "W_CLASS");

    const RunResult para = run_cli("classify --state para");
    CHECK(para.exit_code == 2);

    const RunResult collinear = run_cli("classify --x1 0.5 --x2 0.5 --sz 0");
    REQUIRE(collinear.exit_code == 0);
    CHECK(Json::parse(collinear.out).at("class_label") == "BISEPARABLE(3|12)");

    const RunResult none = run_cli("classify");
    CHECK(none.exit_code == 2);
}

TEST_CASE("scan: CSV output with interior rows") {
    const RunResult r = run_cli("scan --n 11 --sz 0 --observable tangle");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == scan_csv_header());
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    // 11x11 grid: eliminate x=0 edges, keep the triangle incl. x_i = 1 edges.
    CHECK(rows > 30);
}

TEST_CASE("every command is byte-identical across two seeded runs") {
    const std::string commands[] = {
        "state --x1 0.7 --x2 0.8 --sz -1",
        "classify --x1 0.7 --x2 0.8 --sz 1 --alpha 0.3 --beta 0.9 --gamma -0.2",
        "scan --n 13 --sz 0 --observable hdet",
        "search --policy plane-normal --sz 0 --grid 15 --seed 9",
        "bell --state ghz --objective mermin --restarts 4 --seed 42",
        "sample --n 64 --weighting matrix-element --seed 42",
    };
    for (const std::string& cmd : commands) {
        const RunResult a = run_cli(cmd);
        const RunResult b = run_cli(cmd);
        REQUIRE(a.exit_code == 0);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("bell: GHZ Mermin optimization and pair correlation") {
    const RunResult r = run_cli("bell --state ghz --objective mermin --restarts 6 --seed 1");
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("value").get<double>() > 3.99);
    CHECK(j.at("value").get<double>() < 4.0 + 1e-9);
    CHECK(j.at("classical_bound").get<double>() == 2.0);

    const RunResult corr =
        run_cli("bell --state singlet:0 --objective correlation --a 0,0,1 --b 0,0,1");
    REQUIRE(corr.exit_code == 0);
    CHECK(Json::parse(corr.out).at("value").get<double>() == doctest::Approx(-0.25));

    const RunResult missing = run_cli("bell --state para --objective correlation --a 1,0,0");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("sample: JSONL events parse and round trip") {
    const RunResult r = run_cli("sample --n 16 --seed 3 --sz 1 --random-orientation");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int events = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++events;
        const EventRecord e = event_record_from_json(Json::parse(line));
        CHECK(e.weight > 0.0);
        // Round trip is exact.
        CHECK(to_json(e) == Json::parse(line));
    }
    CHECK(events == 16);
}

TEST_CASE("search: JSON findings with class labels") {
    const RunResult r = run_cli("search --policy plane-normal --sz 0 --grid 21");
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("policy") == "plane-normal");
    CHECK(j.at("findings").is_array());
    CHECK(!j.at("findings").empty());
    for (const Json& f : j.at("findings")) {
        CHECK(f.at("hdet_abs").get<double>() < 1e-9);
        CHECK(f.at("report").at("class") == "BISEPARABLE");
    }
}

TEST_CASE("config file and flag precedence") {
    const fs::path cfg = fs::temp_directory_path() / "opsent_cfg.json";
    {
        std::ofstream out(cfg);
        out << R"({"seed": 5, "threads": 2, "tolerances": {"rank": 1e-8}})";
    }
    const RunResult ok = run_cli("classify --state ghz --config " + cfg.string());
    CHECK(ok.exit_code == 0);
    CHECK(Json::parse(ok.out).at("tolerances").at("rank").get<double>() == 1e-8);

    // Flag beats config.
    const RunResult flag =
        run_cli("classify --state ghz --config " + cfg.string() + " --tol-rank 1e-7");
    CHECK(Json::parse(flag.out).at("tolerances").at("rank").get<double>() == 1e-7);

    // Unknown keys are rejected.
    {
        std::ofstream out(cfg);
        out << R"({"seeed": 5})";
    }
    const RunResult bad = run_cli("classify --state ghz --config " + cfg.string());
    CHECK(bad.exit_code == 2);

    // Non-positive tolerances are rejected.
    {
        std::ofstream out(cfg);
        out << R"({"tolerances": {"rank": 0.0}})";
    }
    const RunResult zero = run_cli("classify --state ghz --config " + cfg.string());
    CHECK(zero.exit_code == 2);
    fs::remove(cfg);
}

TEST_CASE("scan: jsonl and json formats parse") {
    const RunResult jsonl = run_cli("scan --n 9 --sz 0 --observable class --format jsonl");
    REQUIRE(jsonl.exit_code == 0);
    std::istringstream lines(jsonl.out);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const Json j = Json::parse(line);
        CHECK(j.at("observable") == "class");
        ++rows;
    }
    CHECK(rows > 0);

    const RunResult json = run_cli("scan --n 9 --sz 0 --format json");
    REQUIRE(json.exit_code == 0);
    const Json j = Json::parse(json.out);
    CHECK(j.at("rows").size() == static_cast<std::size_t>(rows));
    CHECK(j.at("degenerate_skipped").is_number());
}

TEST_CASE("exit codes: I/O failure is 1, numerical failure is 3") {
    const RunResult io = run_cli("scan --n 5 -o /nonexistent-dir/out.csv");
    CHECK(io.exit_code == 1);

    // An envelope below the observed maximum aborts with a diagnostic.
    const RunResult env =
        run_cli("sample --n 200 --weighting matrix-element --envelope-safety 0.5 --seed 1");
    CHECK(env.exit_code == 3);
    CHECK(env.err.find("envelope") != std::string::npos);
}

TEST_CASE("OPSENT_THREADS overrides the thread count") {
    const RunResult plain = run_cli("scan --n 13 --sz 0 --observable tangle");
    RunResult threaded;
    {
        const std::string cmd = "OPSENT_THREADS=3 " + std::string(cli_path()) +
                                " scan --n 13 --sz 0 --observable tangle";
        const fs::path out = fs::temp_directory_path() / "opsent_threads_out.txt";
        const int status = std::system((cmd + " > " + out.string() + " 2>/dev/null").c_str());
        threaded.exit_code = WEXITSTATUS(status);
        threaded.out = slurp(out);
        fs::remove(out);
    }
    REQUIRE(threaded.exit_code == 0);
    CHECK(plain.out == threaded.out);  // same bytes regardless of threads

    const RunResult bad = run_cli("echo");
    (void)bad;
    const fs::path out = fs::temp_directory_path() / "opsent_badthreads.txt";
    const int status = std::system((std::string("OPSENT_THREADS=zero ") + cli_path() +
                                    " scan --n 5 > " + out.string() + " 2>/dev/null")
                                       .c_str());
    CHECK(WEXITSTATUS(status) == 2);
    fs::remove(out);
}

TEST_CASE("classify report fields are complete") {
    const RunResult r = run_cli("classify --x1 0.85 --x2 0.7 --sz 1 --beta 0.7");
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("hyperdeterminant").is_array());
    CHECK(j.at("tangle").is_number());
    for (const char* cut : {"1|23", "2|13", "3|12"}) {
        CHECK(j.at("singular_values").at(cut).size() == 2);
        const double s0 = j.at("singular_values").at(cut).at(0).get<double>();
        const double s1 = j.at("singular_values").at(cut).at(1).get<double>();
        CHECK(s0 * s0 + s1 * s1 == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(j.at("tangle").get<double>() ==
          doctest::Approx(4.0 * std::hypot(j.at("hyperdeterminant").at(0).get<double>(),
                                           j.at("hyperdeterminant").at(1).get<double>()))
              .epsilon(1e-10));
    CHECK(j.at("tolerances").at("rank").get<double>() == 1e-9);
}

TEST_CASE("help and bad flags") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("state --help").exit_code == 0);
    CHECK(run_cli("state --x1 0.7").exit_code == 2);        // missing required --x2
    CHECK(run_cli("definitely-not-a-command").exit_code == 2);
    CHECK(run_cli("scan --observable nonsense").exit_code == 2);
    CHECK(run_cli("state --x1 0.7 --x2 0.8 --sz 3").exit_code == 2);
}
