#include "opsent/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace opsent {

namespace {

double vertex_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> x0, const NelderMeadOptions& options) {
    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;

    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> simplex;
    simplex.reserve(dim + 1);
    simplex.emplace_back(x0.begin(), x0.end());
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> v(x0.begin(), x0.end());
        v[i] += options.initial_step;
        simplex.push_back(std::move(v));
    }

    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    NelderMeadResult result;

    auto sort_order = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    };

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        sort_order();
        const std::size_t best = order[0];
        const std::size_t worst = order[dim];
        const std::size_t second_worst = order[dim - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= dim; ++i)
            diameter = std::max(diameter, vertex_distance(simplex[i], simplex[best]));
        result.diameter = diameter;
        if (diameter < options.simplex_tol) {
            result.converged = true;
            break;
        }

        // Centroid of all vertices but the worst.
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto along = [&](double coeff) {
            std::vector<double> p(dim);
            for (std::size_t d = 0; d < dim; ++d)
                p[d] = centroid[d] + coeff * (centroid[d] - simplex[worst][d]);
            return p;
        };

        std::vector<double> reflected = along(kReflect);
        const double fr = f(reflected);

        if (fr < values[best]) {
            std::vector<double> expanded = along(kExpand);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[worst] = std::move(expanded);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = fr;
            }
        } else if (fr < values[second_worst]) {
            simplex[worst] = std::move(reflected);
            values[worst] = fr;
        } else {
            const bool outside = fr < values[worst];
            std::vector<double> contracted(dim);
            if (outside) {
                for (std::size_t d = 0; d < dim; ++d)
                    contracted[d] = centroid[d] + kContract * (reflected[d] - centroid[d]);
            } else {
                for (std::size_t d = 0; d < dim; ++d)
                    contracted[d] = centroid[d] - kContract * (centroid[d] - simplex[worst][d]);
            }
            const double fc = f(contracted);
            if (fc < std::min(fr, values[worst])) {
                simplex[worst] = std::move(contracted);
                values[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < dim; ++d)
                        simplex[i][d] =
                            simplex[best][d] + kShrink * (simplex[i][d] - simplex[best][d]);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }

    sort_order();
    result.x = simplex[order[0]];
    result.value = values[order[0]];
    result.iterations = iter;
    return result;
}

}  // namespace opsent
