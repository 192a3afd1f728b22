#ifndef ELLSPEC_WEIERSTRASS_SURFACE_HPP
#define ELLSPEC_WEIERSTRASS_SURFACE_HPP

// Weierstrass data built from two solutions of the d-bar problem.
//
// The second evaluator g is the holomorphic function standing for the
// conjugated spinor component, so that
//
//   x1_z = (i/2)(g^2 + psi1^2),  x2_z = (1/2)(g^2 - psi1^2),  x3_z = psi1 g
//
// are meromorphic and x^k = x^k(z0) + 2 Re int_{z0}^{z} x^k_z dz.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "contour.hpp"
#include "eigenfunction.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "punctures.hpp"

namespace ellspec
{

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

class SpinorPair
{
    public:
        SpinorPair(Eigenfunction psi1, Eigenfunction psi2)
            : m_psi1(std::move(psi1)), m_psi2(std::move(psi2))
        {
            const auto &a = m_psi1.punctures();
            const auto &b = m_psi2.punctures();
            m_compatible = a.points() == b.points() && a.lattice().e1() == b.lattice().e1()
                           && a.lattice().e2() == b.lattice().e2();
        }

        const Eigenfunction &psi1() const { return m_psi1; }
        const Eigenfunction &psi2() const { return m_psi2; }
        bool compatible() const { return m_compatible; }
        const PunctureSet &punctures() const { return m_psi1.punctures(); }
        const Lattice &lattice() const { return m_psi1.lattice(); }

        void require_compatible() const
        {
            if (!m_compatible) {
                throw Error(ErrorCode::InvalidArgument, "spinor components live on different punctured tori");
            }
        }

    private:
        Eigenfunction m_psi1;
        Eigenfunction m_psi2;
        bool m_compatible = false;
};

namespace detail
{

inline CVec3 integrands_from(cplx p1, cplx g)
{
    const cplx a = g * g;
    const cplx b = p1 * p1;
    return {cplx(0.0, 0.5) * (a + b), 0.5 * (a - b), p1 * g};
}

}

/// (x1_z, x2_z, x3_z) at z.
inline CVec3 integrands(const SpinorPair &sp, cplx z)
{
    sp.require_compatible();
    return detail::integrands_from(sp.psi1()(z), sp.psi2()(z));
}

struct PlanarEndReport
{
    std::size_t index = 0;
    int pole_order = 0;
    std::array<CVec3, 4> laurent{};  // laurent[k-1][j]: coefficient of (z - p)^{-k} in x^{j+1}_z
    CVec3 residues{};
    double leading = 0.0;            // max_j |coefficient of (z - p)^{-2}|
    double residue_ratio = 0.0;      // max_j |residue_j| / leading
    double product_ratio = 0.0;      // max over psi1^2, psi2^2, psi1 psi2 of |residue| / |order-2 coefficient|
    bool pass = false;
};

/// Laurent data of the three integrands at puncture l, from a contour of radius punctures().contour_radius().
/**
 * The pole order is the largest k <= 4 whose coefficient is significant,
 * i.e. exceeds 1e-8 max|x_z| r^k on the contour. The end is planar when that
 * order is 2 and every residue is at most 1e-6 times the leading coefficient.
 *
 * The same test is also applied to each of psi1^2, psi2^2 and psi1 psi2 against
 * its own order-2 coefficient, so that rescaling one component cannot hide the
 * residue of the other.
 */
inline PlanarEndReport check_planar_end(const SpinorPair &sp, std::size_t l,
                                        std::size_t nodes = default_contour_nodes)
{
    sp.require_compatible();
    const PunctureSet &ps = sp.punctures();
    if (l >= ps.size()) {
        throw Error(ErrorCode::InvalidArgument, "puncture index out of range");
    }
    const double r = ps.contour_radius();
    std::array<ContourSamples, 3> cs, prod;
    for (std::size_t j = 0; j < 3; ++j) {
        for (auto *c : {&cs[j], &prod[j]}) {
            c->center = ps[l];
            c->radius = r;
            c->values.resize(nodes);
        }
    }
    double fmax = 0.0;
    std::array<double, 3> pmax{};
    for (std::size_t k = 0; k < nodes; ++k) {
        const cplx z = cs[0].node(k);
        const cplx p1 = sp.psi1()(z), g = sp.psi2()(z);
        const auto v = detail::integrands_from(p1, g);
        const std::array<cplx, 3> pv{p1 * p1, g * g, p1 * g};
        for (std::size_t j = 0; j < 3; ++j) {
            cs[j].values[k] = v[j];
            fmax = std::max(fmax, std::abs(v[j]));
            prod[j].values[k] = pv[j];
            pmax[j] = std::max(pmax[j], std::abs(pv[j]));
        }
    }
    PlanarEndReport rep;
    rep.index = l;
    for (int k = 1; k <= 4; ++k) {
        double cmax = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            rep.laurent[static_cast<std::size_t>(k - 1)][j] = cs[j].coefficient(-k);
            cmax = std::max(cmax, std::abs(rep.laurent[static_cast<std::size_t>(k - 1)][j]));
        }
        if (cmax > 1e-8 * fmax * std::pow(r, k)) {
            rep.pole_order = k;
        }
    }
    rep.residues = rep.laurent[0];
    double rmax = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        rep.leading = std::max(rep.leading, std::abs(rep.laurent[1][j]));
        rmax = std::max(rmax, std::abs(rep.residues[j]));
    }
    rep.residue_ratio = rep.leading > 0.0 ? rmax / rep.leading : std::numeric_limits<double>::infinity();
    if (rmax == 0.0) {
        rep.residue_ratio = 0.0;
    }
    for (std::size_t j = 0; j < 3; ++j) {
        const cplx lead = prod[j].coefficient(-2);
        if (std::abs(lead) > 1e-8 * pmax[j] * r * r) {
            rep.product_ratio = std::max(rep.product_ratio, std::abs(prod[j].coefficient(-1)) / std::abs(lead));
        }
    }
    rep.pass = rep.pole_order == 2 && rep.residue_ratio <= 1e-6 && rep.product_ratio <= 1e-6;
    return rep;
}

struct SurfaceOptions
{
    double margin = 0.0;     // minimal distance to punctures; <= 0 selects 1e-2 min(|e1|, |e2|)
    double max_piece = 0.0;  // longest quadrature piece; <= 0 selects min(|e1|, |e2|) / 64
    unsigned threads = 1;
};

namespace detail
{

inline constexpr std::array<double, 4> gl8_nodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                                  0.9602898564975363};
inline constexpr std::array<double, 4> gl8_weights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                    0.1012285362903763};

struct ResolvedOptions
{
    double margin;
    double max_piece;
};

inline ResolvedOptions resolve(const Lattice &lat, const SurfaceOptions &o)
{
    const double m = lat.min_generator_length();
    return {o.margin > 0.0 ? o.margin : 1e-2 * m, o.max_piece > 0.0 ? o.max_piece : m / 64.0};
}

inline bool integrate_segment(const SpinorPair &sp, cplx a, cplx b, const ResolvedOptions &o, CVec3 &acc)
{
    const PunctureSet &ps = sp.punctures();
    const double len = std::abs(b - a);
    if (len == 0.0) {
        return true;
    }
    std::vector<std::pair<cplx, cplx>> stack{{a, b}};
    while (!stack.empty()) {
        const auto [u, v] = stack.back();
        stack.pop_back();
        const cplx mid = 0.5 * (u + v);
        const double h = std::abs(v - u);
        const double d = ps.distance_to_punctures(mid);
        if (d < o.margin) {
            return false;
        }
        if (h > o.max_piece || h > 0.5 * d) {
            stack.emplace_back(mid, v);
            stack.emplace_back(u, mid);
            continue;
        }
        const cplx half = 0.5 * (v - u);
        for (std::size_t k = 0; k < 4; ++k) {
            for (double s : {-1.0, 1.0}) {
                const auto f = integrands(sp, mid + s * gl8_nodes[k] * half);
                for (std::size_t j = 0; j < 3; ++j) {
                    acc[j] += gl8_weights[k] * f[j] * half;
                }
            }
        }
    }
    return true;
}

}

/// Complex integrals of the three integrands along a polyline; throws PathThroughPuncture.
inline CVec3 integrate_path(const SpinorPair &sp, const std::vector<cplx> &polyline, const SurfaceOptions &opts = {})
{
    sp.require_compatible();
    const auto o = detail::resolve(sp.lattice(), opts);
    CVec3 acc{};
    for (std::size_t k = 1; k < polyline.size(); ++k) {
        if (!detail::integrate_segment(sp, polyline[k - 1], polyline[k], o, acc)) {
            std::ostringstream os;
            os << "segment " << polyline[k - 1] << " -> " << polyline[k] << " passes within " << o.margin
               << " of a puncture";
            throw Error(ErrorCode::PathThroughPuncture, os.str());
        }
    }
    return acc;
}

/// Real displacement of the surface along a polyline.
inline Vec3 displacement(const CVec3 &integral)
{
    return {2.0 * integral[0].real(), 2.0 * integral[1].real(), 2.0 * integral[2].real()};
}

/// Translational period of the surface around the circle |z - center| = radius (trapezoidal rule).
inline Vec3 loop_period(const SpinorPair &sp, cplx center, double radius, std::size_t nodes = 256)
{
    sp.require_compatible();
    CVec3 acc{};
    for (std::size_t k = 0; k < nodes; ++k) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes);
        const cplx e = std::polar(1.0, t);
        const auto f = integrands(sp, center + radius * e);
        const cplx dz = cplx(0.0, 1.0) * radius * e * (2.0 * std::numbers::pi / static_cast<double>(nodes));
        for (std::size_t j = 0; j < 3; ++j) {
            acc[j] += f[j] * dz;
        }
    }
    return displacement(acc);
}

struct SurfaceSample
{
    enum class Route
    {
        HorizontalFirst,
        VerticalFirst,
        Dropped,
    };

    std::vector<cplx> grid;
    std::vector<Vec3> xyz;       // NaN for dropped samples
    std::vector<Route> routes;
    cplx basepoint;
    Vec3 base_xyz{};

    bool dropped(std::size_t k) const
    {
        return routes[k] == Route::Dropped;
    }
};

/// Integrates the surface from `basepoint` to every grid sample.
/**
 * Each sample is reached by an axis-parallel polyline, horizontal leg first;
 * if that route comes within the margin of a puncture the vertical-first
 * route is used. Samples closer than the margin to a puncture are dropped.
 * Throws PathThroughPuncture if the basepoint is too close to a puncture or
 * no route reaches a retained sample.
 */
inline SurfaceSample integrate_surface(const SpinorPair &sp, const std::vector<cplx> &grid, cplx basepoint,
                                       Vec3 base_xyz = {}, const SurfaceOptions &opts = {})
{
    sp.require_compatible();
    const auto o = detail::resolve(sp.lattice(), opts);
    const PunctureSet &ps = sp.punctures();
    if (ps.distance_to_punctures(basepoint) < o.margin) {
        throw Error(ErrorCode::PathThroughPuncture, "basepoint lies within the margin of a puncture");
    }
    SurfaceSample out;
    out.grid = grid;
    out.basepoint = basepoint;
    out.base_xyz = base_xyz;
    out.xyz.assign(grid.size(), Vec3{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                                     std::numeric_limits<double>::quiet_NaN()});
    out.routes.assign(grid.size(), SurfaceSample::Route::Dropped);

    parallel_for(grid.size(), opts.threads, [&](std::size_t k) {
        const cplx z = grid[k];
        if (ps.distance_to_punctures(z) < o.margin) {
            return;
        }
        const cplx corner_h(z.real(), basepoint.imag());
        const cplx corner_v(basepoint.real(), z.imag());
        CVec3 acc{};
        auto route = SurfaceSample::Route::HorizontalFirst;
        if (!(detail::integrate_segment(sp, basepoint, corner_h, o, acc)
              && detail::integrate_segment(sp, corner_h, z, o, acc))) {
            acc = CVec3{};
            route = SurfaceSample::Route::VerticalFirst;
            if (!(detail::integrate_segment(sp, basepoint, corner_v, o, acc)
                  && detail::integrate_segment(sp, corner_v, z, o, acc))) {
                std::ostringstream os;
                os << "no axis-parallel route from " << basepoint << " to " << z << " avoids the punctures";
                throw Error(ErrorCode::PathThroughPuncture, os.str());
            }
        }
        const Vec3 d = displacement(acc);
        out.xyz[k] = {base_xyz[0] + d[0], base_xyz[1] + d[1], base_xyz[2] + d[2]};
        out.routes[k] = route;
    });
    return out;
}

}

#endif
