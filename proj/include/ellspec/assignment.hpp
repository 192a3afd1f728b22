#ifndef ELLSPEC_ASSIGNMENT_HPP
#define ELLSPEC_ASSIGNMENT_HPP

#include <cstddef>
#include <limits>
#include <vector>

namespace ellspec
{

namespace detail
{

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method, O(n^3)).
/**
 * cost[i][j] is the price of sending row i to column j. Returns col with
 * col[i] the column assigned to row i.
 */
inline std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>> &cost)
{
    const std::size_t n = cost.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials, the usual e-maxx formulation.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> col(n, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        if (p[j] != 0) {
            col[p[j] - 1] = j - 1;
        }
    }
    return col;
}

}

}

#endif
