#pragma once

// Internal derivative-free minimizer used for CSS estimation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace enff::detail {

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> trace;  // best value after each iteration
    bool converged = false;
};

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5). Non-finite objective values are treated as +inf. Stops when
/// the spread of vertex values falls below `ftol` relative to the best value
/// and the simplex is smaller than `xtol` per coordinate.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, const std::vector<double>& steps, int max_iterations,
                                    double ftol = 1e-12, double xtol = 1e-10) {
    const std::size_t n = x0.size();
    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
    for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

    NelderMeadResult result;
    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);

    for (int it = 0; it < max_iterations; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];

        double size = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]));
        }
        const double spread = values[worst] - values[best];
        if (std::isfinite(spread) && spread <= ftol * std::abs(values[best]) + 1e-300 && size <= xtol) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
        }
        for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + (centroid[k] - simplex[worst][k]);
        const double reflected = eval(trial);

        if (reflected < values[best]) {
            for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + 2.0 * (centroid[k] - simplex[worst][k]);
            const double expanded = eval(trial2);
            if (expanded < reflected) {
                simplex[worst] = trial2;
                values[worst] = expanded;
            } else {
                simplex[worst] = trial;
                values[worst] = reflected;
            }
        } else if (reflected < values[second]) {
            simplex[worst] = trial;
            values[worst] = reflected;
        } else {
            const bool outside = reflected < values[worst];
            for (std::size_t k = 0; k < n; ++k) {
                trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                                    : centroid[k] + 0.5 * (simplex[worst][k] - centroid[k]);
            }
            const double contracted = eval(trial2);
            if (contracted < std::min(reflected, values[worst])) {
                simplex[worst] = trial2;
                values[worst] = contracted;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < n; ++k) {
                        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    }
                    values[i] = eval(simplex[i]);
                }
            }
        }
        result.trace.push_back(*std::min_element(values.begin(), values.end()));
    }
    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

}  // namespace enff::detail
