#pragma once

#include <functional>
#include <span>
#include <vector>

namespace opsent {

// Downhill simplex minimizer with the standard coefficients: reflection 1,
// expansion 2, contraction 0.5, shrink 0.5.
struct NelderMeadOptions {
    int max_iterations = 500;
    // Terminate when every vertex is within this (infinity norm) of the best.
    double simplex_tol = 1e-10;
    double initial_step = 0.05;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double diameter = 0.0;
};

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> x0, const NelderMeadOptions& options = {});

}  // namespace opsent
