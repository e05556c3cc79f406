#include "opsent/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "opsent/nelder_mead.hpp"
#include "opsent/rng.hpp"

namespace opsent {

namespace {

constexpr double kPenalty = 1e30;

// Deterministic parallel map: fn(i) writes only into slot i of its output,
// so the merge is by index and independent of scheduling.
template <typename F>
void parallel_for(long count, int threads, F&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || count < 2) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(std::min<long>(threads, count));
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

bool in_allowed_triangle(double x1, double x2) {
    if (x1 < kDegenerateEnergy || x1 > 1.0) return false;
    if (x2 < kDegenerateEnergy || x2 > 1.0) return false;
    const double x3 = 2.0 - x1 - x2;
    return x3 >= kDegenerateEnergy && x3 <= 1.0 + 1e-12;
}

StateTensor build_search_state(const PhotonTriple& t, SpinProjection s,
                               const std::optional<std::array<Complex, 3>>& weights) {
    if (!weights) return state_tensor(t, s);
    const std::array<SpinProjection, 3> order = {SpinProjection::Plus, SpinProjection::Zero,
                                                 SpinProjection::Minus};
    std::array<Complex, 8> amps{};
    for (int w = 0; w < 3; ++w) {
        if ((*weights)[w] == Complex(0.0, 0.0)) continue;
        const StateTensor part = state_tensor(t, order[w]);
        for (int i = 0; i < 8; ++i) amps[i] += (*weights)[w] * part[i];
    }
    StateTensor out(amps, Basis::Circular);
    if (out.norm() < kZeroNormThreshold)
        throw ZeroNormState("superposed decay state has zero norm");
    return out;
}

Orientation random_orientation(std::mt19937_64& rng) {
    const double alpha = 2.0 * std::numbers::pi * uniform01(rng);
    const double beta = std::acos(std::clamp(2.0 * uniform01(rng) - 1.0, -1.0, 1.0));
    const double gamma = 2.0 * std::numbers::pi * uniform01(rng);
    return Orientation(alpha, beta, gamma);
}

}  // namespace

std::string to_string(Observable o) {
    switch (o) {
        case Observable::Tangle: return "tangle";
        case Observable::Hdet: return "hdet";
        case Observable::Class: return "class";
        case Observable::Weight: return "weight";
        case Observable::Correlator: return "correlator";
    }
    return "?";
}

std::string to_string(QuantizationPolicy p) {
    return p == QuantizationPolicy::FixedZ ? "fixed-z" : "plane-normal";
}

std::string to_string(Weighting w) {
    return w == Weighting::Uniform ? "uniform" : "matrix-element";
}

std::string to_string(BellObjective o) {
    return o == BellObjective::Mermin ? "mermin" : "svetlichny";
}

void ScanSpec::validate() const {
    if (n < 2) throw ValidationError("scan grid resolution must be >= 2");
    if (threads < 1) throw ValidationError("thread count must be >= 1");
    if (observable == Observable::Correlator) {
        if (!settings) throw ValidationError("correlator scan requires analyzer settings");
        settings->validate();
        if (settings->axes.size() != 3)
            throw ValidationError("correlator scan needs three analyzer axes");
    }
}

ScanResult scan_dalitz(const ScanSpec& spec) {
    spec.validate();
    ScanResult result;
    result.spec = spec;

    const int n = spec.n;
    struct GridPoint {
        double x1, x2;
    };
    std::vector<GridPoint> points;
    for (int j1 = 0; j1 < n; ++j1) {
        for (int j2 = 0; j2 < n; ++j2) {
            // Integer membership test for x1 + x2 >= 1 keeps the x3 = 1 edge.
            if (j1 + j2 < n - 1) continue;
            const double x1 = static_cast<double>(j1) / (n - 1);
            const double x2 = static_cast<double>(j2) / (n - 1);
            if (!in_allowed_triangle(x1, x2)) {
                ++result.degenerate_skipped;
                continue;
            }
            points.push_back({x1, x2});
        }
    }

    std::vector<ScanRow> rows(points.size());
    parallel_for(static_cast<long>(points.size()), spec.threads, [&](long i) {
        const GridPoint& p = points[i];
        const PhotonTriple event = build_event(DalitzPoint(p.x1, p.x2), spec.orientation);
        const StateTensor state = state_tensor(event, spec.s_z);
        const EntanglementReport report = classify(state, spec.tolerances);

        ScanRow row;
        row.x1 = p.x1;
        row.x2 = p.x2;
        for (int ph = 0; ph < 3; ++ph) {
            row.theta[ph] = event.angles(ph + 1).theta;
            row.phi[ph] = event.angles(ph + 1).phi;
        }
        row.s_z = spin_value(spec.s_z);
        row.state_class = report.state_class;
        row.cut = report.cut;
        row.norm = state.norm();
        switch (spec.observable) {
            case Observable::Tangle:
                row.value = report.tangle;
                break;
            case Observable::Hdet:
                row.value = std::abs(report.hyperdeterminant);
                break;
            case Observable::Class: {
                // Factorization witness: the smallest second singular value.
                double w = report.singular_values[0][1];
                for (int c = 1; c < 3; ++c) w = std::min(w, report.singular_values[c][1]);
                row.value = w;
                break;
            }
            case Observable::Weight:
                row.value = decay_weight(event);
                break;
            case Observable::Correlator: {
                const AnalyzerSetting& setting = *spec.settings;
                if (setting.formalism == Formalism::Qubit2D) {
                    row.value = correlation_2d(state, setting);
                } else {
                    const Tensor333 psi = embed_3d(state, event);
                    row.value =
                        correlation_3d(psi, setting.axes[0], setting.axes[1], setting.axes[2]);
                }
                break;
            }
        }
        rows[i] = row;
    });

    result.rows = std::move(rows);
    return result;
}

SearchResult find_hdet_zeros(SpinProjection s_z, QuantizationPolicy policy,
                             const SearchOptions& options) {
    if (options.grid_n < 2) throw ValidationError("search grid resolution must be >= 2");
    if (options.angle_grid < 1) throw ValidationError("angle grid resolution must be >= 1");

    const bool fixed_z = (policy == QuantizationPolicy::FixedZ);
    const int dim = fixed_z ? 4 : 2;

    // Objective: |Hdet| of the normalized decay state, with a large penalty
    // outside the allowed kinematic region.
    auto objective = [&](std::span<const double> p) -> double {
        if (!in_allowed_triangle(p[0], p[1])) return kPenalty;
        const Orientation o = fixed_z ? Orientation(0.0, p[2], p[3]) : Orientation();
        try {
            const PhotonTriple event = build_event(DalitzPoint(p[0], p[1]), o);
            const StateTensor state = build_search_state(event, s_z, options.superposition);
            return std::abs(hyperdeterminant(state));
        } catch (const Error&) {
            return kPenalty;
        }
    };

    // Coarse grid.
    const int n = options.grid_n;
    const int m = fixed_z ? options.angle_grid : 1;
    std::vector<int> shape = fixed_z ? std::vector<int>{n, n, m, m} : std::vector<int>{n, n};
    auto coord = [&](const std::vector<int>& idx) {
        std::vector<double> p(dim);
        p[0] = static_cast<double>(idx[0]) / (n - 1);
        p[1] = static_cast<double>(idx[1]) / (n - 1);
        if (fixed_z) {
            p[2] = std::numbers::pi * idx[2] / std::max(1, m - 1);             // beta in [0, pi]
            p[3] = 2.0 * std::numbers::pi * idx[3] / m;                        // gamma in [0, 2pi)
        }
        return p;
    };

    long total = 1;
    for (int s : shape) total *= s;
    std::vector<double> values(total, kPenalty);
    auto flatten = [&](const std::vector<int>& idx) {
        long f = 0;
        for (std::size_t d = 0; d < idx.size(); ++d) f = f * shape[d] + idx[d];
        return f;
    };
    auto unflatten = [&](long f) {
        std::vector<int> idx(shape.size());
        for (int d = static_cast<int>(shape.size()) - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(f % shape[d]);
            f /= shape[d];
        }
        return idx;
    };

    parallel_for(total, options.threads, [&](long f) {
        const std::vector<int> idx = unflatten(f);
        if (idx[0] + idx[1] < n - 1) return;  // outside the triangle
        values[f] = objective(coord(idx));
    });

    // Local minima below the trigger (axis-aligned neighbors).
    std::vector<long> seeds;
    for (long f = 0; f < total; ++f) {
        const double v = values[f];
        if (v >= options.trigger || v >= kPenalty) continue;
        const std::vector<int> idx = unflatten(f);
        bool is_min = true;
        for (std::size_t d = 0; d < idx.size() && is_min; ++d) {
            for (int step : {-1, +1}) {
                std::vector<int> nb = idx;
                nb[d] += step;
                if (nb[d] < 0 || nb[d] >= shape[d]) continue;
                if (values[flatten(nb)] < v) {
                    is_min = false;
                    break;
                }
            }
        }
        if (is_min) seeds.push_back(f);
    }

    // Refine each seed.
    struct Refined {
        std::vector<double> p;
        double value;
        double seed_value;
        int iterations;
        bool converged;
        double diameter;
    };
    std::vector<Refined> refined(seeds.size());
    NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    nm.simplex_tol = options.simplex_tol;
    nm.initial_step = std::max(0.5 / (n - 1), 0.01);
    // A minimizer can sit exactly on a factorizing edge of the triangle; the
    // simplex stops within its tolerance of it. Snap such points onto the
    // boundary when that keeps the objective below the zero tolerance.
    auto polish = [&](std::vector<double> p, double value) {
        constexpr double kSnap = 1e-7;
        std::vector<double> snapped = p;
        if (snapped[0] > 1.0 - kSnap) snapped[0] = 1.0;
        if (snapped[1] > 1.0 - kSnap) snapped[1] = 1.0;
        if (snapped[0] + snapped[1] < 1.0 + kSnap) snapped[1] = 1.0 - snapped[0];
        if (snapped == p) return std::pair{p, value};
        const double snapped_value = objective(snapped);
        if (snapped_value < options.zero_tol && snapped_value < kPenalty)
            return std::pair{snapped, snapped_value};
        return std::pair{p, value};
    };
    parallel_for(static_cast<long>(seeds.size()), options.threads, [&](long i) {
        const std::vector<double> start = coord(unflatten(seeds[i]));
        const NelderMeadResult r = nelder_mead(objective, start, nm);
        auto [point, value] = polish(r.x, r.value);
        refined[i] =
            Refined{point, value, values[seeds[i]], r.iterations, r.converged, r.diameter};
    });

    SearchResult result;
    result.policy = policy;
    result.seeds = static_cast<int>(seeds.size());

    std::vector<SearchFinding> findings;
    for (const Refined& r : refined) {
        if (r.converged) ++result.converged_count;
        if (r.value >= options.zero_tol || r.value >= kPenalty) continue;
        const Orientation o = fixed_z ? Orientation(0.0, r.p[2], r.p[3]) : Orientation();
        try {
            const PhotonTriple event = build_event(DalitzPoint(r.p[0], r.p[1]), o);
            const StateTensor state = build_search_state(event, s_z, options.superposition);
            SearchFinding finding{DalitzPoint(r.p[0], r.p[1]),
                                  o,
                                  r.value,
                                  r.seed_value,
                                  classify(state, options.tolerances),
                                  r.iterations,
                                  r.converged,
                                  r.diameter};
            findings.push_back(std::move(finding));
        } catch (const Error&) {
            // Refinement drifted onto a degenerate boundary; drop the point.
        }
    }

    // Lexicographic order, then collapse near-duplicates (keep the smallest).
    auto key = [](const SearchFinding& f) {
        return std::array<double, 4>{f.point.x1(), f.point.x2(), f.orientation.beta(),
                                     f.orientation.gamma()};
    };
    std::stable_sort(findings.begin(), findings.end(),
                     [&](const SearchFinding& a, const SearchFinding& b) { return key(a) < key(b); });
    for (const SearchFinding& f : findings) {
        bool dup = false;
        for (const SearchFinding& kept : result.findings) {
            const auto ka = key(f);
            const auto kb = key(kept);
            double d = 0.0;
            for (int c = 0; c < 4; ++c) d = std::max(d, std::abs(ka[c] - kb[c]));
            if (d < 1e-6) {
                dup = true;
                break;
            }
        }
        if (!dup) result.findings.push_back(f);
    }
    return result;
}

namespace {

OptimizedSettings optimize_impl(const Correlator3& correlator, BellObjective objective,
                                const OptimizeOptions& options) {
    if (options.restarts < 1) throw ValidationError("restarts must be >= 1");

    auto unpack = [](std::span<const double> p, MerminSettings& s) -> bool {
        std::array<Vec3*, 6> slots = {&s.a[0], &s.a[1], &s.b[0], &s.b[1], &s.c[0], &s.c[1]};
        for (int v = 0; v < 6; ++v) {
            Vec3 raw(p[3 * v], p[3 * v + 1], p[3 * v + 2]);
            const double norm = raw.norm();
            if (norm < 1e-9) return false;
            *slots[v] = raw / norm;
        }
        return true;
    };

    auto score = [&](std::span<const double> p) -> double {
        MerminSettings s;
        if (!unpack(p, s)) return kPenalty;
        const double value = (objective == BellObjective::Mermin)
                                 ? mermin_value(correlator, s)
                                 : svetlichny_value(correlator, s);
        return -value;
    };

    NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    nm.simplex_tol = options.simplex_tol;
    nm.initial_step = 0.3;

    OptimizedSettings best;
    best.objective = objective;
    best.value = -kPenalty;
    for (int r = 0; r < options.restarts; ++r) {
        std::mt19937_64 rng = task_rng(options.seed, static_cast<std::uint64_t>(r));
        std::vector<double> x0(18);
        for (int v = 0; v < 6; ++v) {
            const Vec3 axis = random_unit_vector(rng);
            x0[3 * v] = axis.x();
            x0[3 * v + 1] = axis.y();
            x0[3 * v + 2] = axis.z();
        }
        const NelderMeadResult result = nelder_mead(score, x0, nm);
        if (result.converged) ++best.converged_restarts;
        const double value = -result.value;
        if (value > best.value) {
            best.value = value;
            MerminSettings s;
            unpack(result.x, s);
            best.settings = s;
        }
    }
    if (best.converged_restarts == 0)
        throw NoConvergence("no optimizer restart terminated within its iteration budget");
    return best;
}

}  // namespace

OptimizedSettings optimize_settings(const StateTensor& state, BellObjective objective,
                                    const OptimizeOptions& options) {
    const StateTensor s = state.normalized();
    Correlator3 correlator = [s](const Vec3& a, const Vec3& b, const Vec3& c) {
        AnalyzerSetting setting;
        setting.formalism = Formalism::Qubit2D;
        setting.axes = {a, b, c};
        return correlation_2d(s, setting);
    };
    return optimize_impl(correlator, objective, options);
}

OptimizedSettings optimize_settings(const Tensor333& psi, BellObjective objective,
                                    const OptimizeOptions& options) {
    if (psi.norm() < kZeroNormThreshold)
        throw ZeroNormState("optimize_settings on zero-norm tensor");
    Correlator3 correlator = [&psi](const Vec3& a, const Vec3& b, const Vec3& c) {
        return correlation_3d(psi, a, b, c);
    };
    return optimize_impl(correlator, objective, options);
}

SampleResult sample_events(long n, const SampleOptions& options) {
    if (n < 1) throw ValidationError("sample count must be >= 1");

    SampleResult result;
    if (options.weighting == Weighting::MatrixElement) {
        // Preliminary envelope scan over the triangle; the weight does not
        // depend on orientation.
        const int g = std::max(2, options.envelope_scan_n);
        double max_w = 0.0;
        for (int j1 = 0; j1 < g; ++j1) {
            for (int j2 = 0; j2 < g; ++j2) {
                if (j1 + j2 < g - 1) continue;
                const double x1 = static_cast<double>(j1) / (g - 1);
                const double x2 = static_cast<double>(j2) / (g - 1);
                if (!in_allowed_triangle(x1, x2)) continue;
                max_w = std::max(max_w, decay_weight(build_event(DalitzPoint(x1, x2))));
            }
        }
        result.envelope = options.envelope_safety * max_w;
    }

    long attempts = 0;
    result.events.reserve(n);
    for (long i = 0; i < n; ++i) {
        std::mt19937_64 rng = task_rng(options.seed, static_cast<std::uint64_t>(i));
        for (;;) {
            ++attempts;
            const DalitzPoint d = dalitz_sample(uniform01(rng), uniform01(rng));
            const Orientation o =
                options.random_orientation ? random_orientation(rng) : Orientation();
            std::optional<PhotonTriple> event;
            double weight;
            try {
                event.emplace(build_event(d, o));
                weight = decay_weight(*event);
            } catch (const DegenerateKinematics&) {
                continue;  // redraw on the degenerate boundary
            }
            if (options.weighting == Weighting::MatrixElement) {
                if (weight > result.envelope)
                    throw EnvelopeExceeded(
                        "decay weight " + std::to_string(weight) + " exceeds envelope " +
                        std::to_string(result.envelope) + "; rerun with a larger safety factor");
                if (uniform01(rng) * result.envelope > weight) continue;
            }
            result.events.push_back(
                EventRecord{*event, state_tensor(*event, options.s_z), weight});
            break;
        }
    }
    result.acceptance_rate = static_cast<double>(n) / static_cast<double>(attempts);
    return result;
}

}  // namespace opsent
