#ifndef ELLSPEC_CONTOUR_HPP
#define ELLSPEC_CONTOUR_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "theta.hpp"

namespace ellspec
{

/// Samples of a function on the circle |z - center| = radius at equispaced angles.
/**
 * Laurent coefficients come from the trapezoidal rule,
 *
 *   c_k ~ (1/M) sum_j f(center + r e^{i t_j}) r^{-k} e^{-i k t_j},
 *
 * which is exact up to aliasing by c_{k +- M} r^{+-M}, so for a function
 * analytic in an annulus around the circle the error decays geometrically in M.
 */
struct ContourSamples
{
    cplx center;
    double radius = 0.0;
    std::vector<cplx> values;

    std::size_t size() const
    {
        return values.size();
    }

    cplx node(std::size_t j) const
    {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(values.size());
        return center + std::polar(radius, t);
    }

    cplx coefficient(int k) const
    {
        const std::size_t m = values.size();
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
            acc += values[j] * std::polar(1.0, -static_cast<double>(k) * t);
        }
        return acc / (static_cast<double>(m) * std::pow(radius, static_cast<double>(k)));
    }

    /// (1/2 pi i) times the contour integral; equals coefficient(-1).
    cplx residue() const
    {
        return coefficient(-1);
    }
};

inline constexpr std::size_t default_contour_nodes = 64;

template <class F>
ContourSamples sample_circle(F &&f, cplx center, double radius, std::size_t nodes = default_contour_nodes)
{
    ContourSamples s;
    s.center = center;
    s.radius = radius;
    s.values.resize(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        s.values[j] = f(s.node(j));
    }
    return s;
}

}

#endif
