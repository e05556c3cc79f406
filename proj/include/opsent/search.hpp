#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "opsent/correlations.hpp"
#include "opsent/entanglement.hpp"

namespace opsent {

enum class Observable { Tangle, Hdet, Class, Weight, Correlator };

// Quantization-axis policy for the Hdet-zero search. PlaneNormal evaluates
// every candidate in the reference orientation (spin axis = decay-plane
// normal); FixedZ keeps the lab z axis and searches over orientations too.
enum class QuantizationPolicy { FixedZ, PlaneNormal };

enum class Weighting { Uniform, MatrixElement };

std::string to_string(Observable o);
std::string to_string(QuantizationPolicy p);
std::string to_string(Weighting w);

struct ScanSpec {
    int n = 101;  // grid resolution per Dalitz axis, >= 2
    SpinProjection s_z = SpinProjection::Zero;
    Orientation orientation;
    Observable observable = Observable::Tangle;
    // Required for Observable::Correlator.
    std::optional<AnalyzerSetting> settings;
    Tolerances tolerances;
    int threads = 1;

    void validate() const;
};

struct ScanRow {
    double x1, x2;
    std::array<double, 3> theta;
    std::array<double, 3> phi;
    int s_z;
    double value;
    StateClass state_class;
    std::optional<Cut> cut;
    double norm;  // unnormalized amplitude norm
};

struct ScanResult {
    ScanSpec spec;
    std::vector<ScanRow> rows;   // row-major in (x1, x2)
    long degenerate_skipped = 0;  // triangle points below the degeneracy threshold
};

// Evaluate the observable on every non-degenerate grid point of the allowed
// Dalitz triangle. Grid values are j/(n-1); points of the closed triangle
// with any x_i below the degeneracy threshold are skipped and counted, the
// x_i = 1 factorizing edges are kept. Deterministic row order.
ScanResult scan_dalitz(const ScanSpec& spec);

struct SearchOptions {
    int grid_n = 51;      // coarse Dalitz grid per axis
    int angle_grid = 13;  // FixedZ policy: grid per Euler angle (beta, gamma)
    double trigger = 1e-4;  // refine local minima with |Hdet| below this
    double zero_tol = 1e-9;  // refined |Hdet| below this counts as a zero
    int max_iterations = 500;
    double simplex_tol = 1e-10;
    // Optional coherent S_z superposition, weights ordered (S_z = +1, 0, -1).
    // When set, the searched state is the normalized weighted sum and the
    // s_z argument is ignored.
    std::optional<std::array<Complex, 3>> superposition;
    Tolerances tolerances;
    int threads = 1;
};

struct SearchFinding {
    DalitzPoint point;
    Orientation orientation;
    double hdet_abs;
    double seed_hdet_abs;  // |Hdet| at the coarse-grid seed
    EntanglementReport report;
    int iterations;
    bool converged;
    double simplex_diameter;
};

struct SearchResult {
    QuantizationPolicy policy;
    int seeds = 0;           // local minima refined
    int converged_count = 0;
    // Refined points with |Hdet| < zero_tol, deduplicated, lexicographically
    // ordered in (x1, x2, beta, gamma).
    std::vector<SearchFinding> findings;
};

// Coarse scan of |Hdet| followed by Nelder-Mead refinement from every local
// minimum below the trigger, then re-classification of each zero.
SearchResult find_hdet_zeros(SpinProjection s_z, QuantizationPolicy policy,
                             const SearchOptions& options = {});

enum class BellObjective { Mermin, Svetlichny };

std::string to_string(BellObjective o);

struct OptimizeOptions {
    int restarts = 20;
    std::uint64_t seed = 0;
    int max_iterations = 4000;
    double simplex_tol = 1e-9;
};

struct OptimizedSettings {
    MerminSettings settings;
    double value = 0.0;
    int converged_restarts = 0;
    BellObjective objective = BellObjective::Mermin;
};

// Best objective value over seeded Nelder-Mead restarts with random unit
// axes; the six axes are parameterized by raw 3-vectors renormalized at
// every evaluation. Throws NoConvergence when no restart terminates within
// its iteration budget.
OptimizedSettings optimize_settings(const StateTensor& state, BellObjective objective,
                                    const OptimizeOptions& options = {});
OptimizedSettings optimize_settings(const Tensor333& psi, BellObjective objective,
                                    const OptimizeOptions& options = {});

struct SampleOptions {
    Weighting weighting = Weighting::Uniform;
    std::uint64_t seed = 0;
    SpinProjection s_z = SpinProjection::Zero;
    bool random_orientation = false;
    // Envelope = safety factor times the max weight on a preliminary
    // envelope_scan_n^2 grid.
    double envelope_safety = 1.2;
    int envelope_scan_n = 100;
};

struct EventRecord {
    PhotonTriple photons;
    StateTensor state;
    double weight;
};

struct SampleResult {
    std::vector<EventRecord> events;
    double acceptance_rate = 1.0;
    double envelope = 0.0;
};

// Draw n events from the Dalitz triangle, uniform or importance-weighted by
// the squared matrix element (rejection sampling against the documented
// envelope). Event i consumes its own RNG stream, so the output is a pure
// function of (n, options).
SampleResult sample_events(long n, const SampleOptions& options = {});

}  // namespace opsent
