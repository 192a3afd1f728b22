#ifndef ELLSPEC_SPECTRAL_CURVE_HPP
#define ELLSPEC_SPECTRAL_CURVE_HPP

// Spectral curve of d-bar on the punctured torus.
//
// A solution psi = sum_l a_l exp(mu z) Phi(z - p_l, alpha) has vanishing
// constant Laurent term at every puncture iff (mu I + B(alpha)) a = 0 with
//
//   B_ll = 0,   B_lm = Phi(p_l - p_m, alpha)   (row l = condition at p_l).
//
// The curve is det(mu I + B) = mu^N + q_1 mu^{N-1} + ... + q_N = 0.
//
// B = D Bg D^{-1} with D = diag(exp(zeta(alpha0) p_l)), so the characteristic
// polynomial and the sheets are computed from the gauged matrix Bg, whose
// entries stay O(1/|alpha|) instead of carrying exp(zeta(alpha) (p_l - p_m)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "baker_akhiezer.hpp"
#include "contour.hpp"
#include "eigenfunction.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "punctures.hpp"

namespace ellspec
{

struct CharPoly
{
    cplx alpha;
    std::vector<cplx> q;   // q_1 .. q_N

    double max_abs() const
    {
        double m = 0.0;
        for (const cplx &c : q) {
            m = std::max(m, std::abs(c));
        }
        return m;
    }

    cplx operator()(cplx mu) const
    {
        return detail::monic_eval(q, mu).first;
    }
};

struct SpectralPoint
{
    cplx alpha;
    cplx mu;
    CVector a;
    cplx nu1;
    cplx nu2;
    double residual = 0.0;        // |(mu I + B) a| / |a|
    Eigen::Index null_dim = 1;    // numerically detected kernel dimension
};

namespace detail
{

inline CMatrix gauged_offdiag(const PunctureSet &ps, const PhiEvaluator &ev)
{
    const auto n = static_cast<Eigen::Index>(ps.size());
    CMatrix b = CMatrix::Zero(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index m = 0; m < n; ++m) {
            if (l != m) {
                b(l, m) = ev.gauge_free(ps[static_cast<std::size_t>(l)] - ps[static_cast<std::size_t>(m)]);
            }
        }
    }
    return b;
}

inline CVector gauge_diagonal(const PunctureSet &ps, const PhiEvaluator &ev)
{
    CVector d(static_cast<Eigen::Index>(ps.size()));
    for (std::size_t l = 0; l < ps.size(); ++l) {
        d(static_cast<Eigen::Index>(l)) = std::exp(ev.zeta_alpha() * ps[l]);
    }
    return d;
}

inline double poly_scale(const CMatrix &b)
{
    return std::pow(std::max(1.0, inf_norm(b)), static_cast<double>(b.rows()));
}

}

/// B(alpha) with B_lm = Phi(p_l - p_m, alpha), zero diagonal.
inline CMatrix assemble_offdiag(const PunctureSet &ps, cplx alpha)
{
    const PhiEvaluator ev(ps.lattice(), alpha);
    const auto n = static_cast<Eigen::Index>(ps.size());
    CMatrix b = CMatrix::Zero(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index m = 0; m < n; ++m) {
            if (l != m) {
                b(l, m) = ev(ps[static_cast<std::size_t>(l)] - ps[static_cast<std::size_t>(m)]);
            }
        }
    }
    return b;
}

/// Coefficients of det(mu I + B(alpha)) by the Faddeev-LeVerrier recursion.
inline CharPoly char_poly(const PunctureSet &ps, cplx alpha)
{
    const PhiEvaluator ev(ps.lattice(), alpha);
    const CMatrix bg = detail::gauged_offdiag(ps, ev);
    return {alpha, detail::faddeev_leverrier(-bg)};
}

/// The N values mu_i(alpha), sorted lexicographically (real part, then imaginary part).
inline std::vector<cplx> sheets(const PunctureSet &ps, cplx alpha)
{
    const PhiEvaluator ev(ps.lattice(), alpha);
    const CMatrix bg = detail::gauged_offdiag(ps, ev);
    const auto q = detail::faddeev_leverrier(-bg);
    auto mu = detail::eigenvalues(-bg);
    for (auto &m : mu) {
        m = detail::newton_polish(q, m);
    }
    detail::sort_lex(mu);
    return mu;
}

struct KernelResult
{
    CVector a;
    double residual = 0.0;
    Eigen::Index null_dim = 0;
};

namespace detail
{

inline KernelResult kernel_impl(const PunctureSet &ps, const PhiEvaluator &ev, cplx mu)
{
    const CMatrix bg = gauged_offdiag(ps, ev);
    const auto n = static_cast<Eigen::Index>(ps.size());
    const double scale = std::max(1.0, inf_norm(bg));
    CMatrix ag = bg;
    ag.diagonal().array() += mu;
    const auto nd = null_direction(ag, 1e-6 * std::max(scale, std::abs(mu)));
    const CVector d = gauge_diagonal(ps, ev);
    CVector a = normalize_sup(d.cwiseProduct(nd.vector));

    // Residual against the raw system.
    CMatrix araw = CMatrix::Zero(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index m = 0; m < n; ++m) {
            araw(l, m) = (l == m) ? mu : bg(l, m) * d(l) / d(m);
        }
    }
    KernelResult out;
    out.residual = (araw * a).norm() / a.norm();
    const double raw_scale = std::max(1.0, inf_norm(araw));
    if (!(out.residual <= 1e-6 * raw_scale)) {
        std::ostringstream os;
        os << "(mu, alpha) = (" << mu << ", " << ev.alpha() << ") is off the curve: residual " << out.residual;
        throw Error(ErrorCode::NotOnCurve, os.str());
    }
    out.a = std::move(a);
    out.null_dim = std::max<Eigen::Index>(1, nd.null_dim);
    return out;
}

}

inline KernelResult kernel_vector_info(const PunctureSet &ps, cplx alpha, cplx mu)
{
    const PhiEvaluator ev(ps.lattice(), alpha);
    return detail::kernel_impl(ps, ev, mu);
}

/// Normalized a with (mu I + B(alpha)) a = 0.
inline CVector kernel_vector(const PunctureSet &ps, cplx alpha, cplx mu)
{
    return kernel_vector_info(ps, alpha, mu).a;
}

/// Logarithms (mu + zeta(alpha)) e_j - alpha eta_j of the multipliers.
inline std::pair<cplx, cplx> floquet_exponents(const Lattice &lat, cplx alpha, cplx mu)
{
    if (lat.on_lattice(alpha)) {
        throw Error(ErrorCode::AlphaOnLattice, "multipliers at alpha on the lattice are degenerate");
    }
    const cplx a0 = lat.center(alpha).z0;
    const cplx c = mu + detail::zeta_centered(lat, a0);
    return {c * lat.e1() - a0 * lat.eta1(), c * lat.e2() - a0 * lat.eta2()};
}

inline std::pair<cplx, cplx> floquet_multipliers(const Lattice &lat, cplx alpha, cplx mu)
{
    const auto [x1, x2] = floquet_exponents(lat, alpha, mu);
    return {std::exp(x1), std::exp(x2)};
}

struct AlphaMu
{
    cplx alpha;   // representative in the fundamental parallelogram
    cplx mu;
};

/// Recovers (alpha mod Lambda, mu) from a pair of Floquet multipliers.
/**
 * With X_j = Log nu_j + 2 pi i k_j the two multiplier equations are linear in
 * (c, alpha), c = mu + zeta(alpha):
 *
 *   alpha = (X_2 e1 - X_1 e2) / (s 2 pi i),   c = (X_1 + alpha eta1) / e1,
 *
 * s = orientation. Changing (k_1, k_2) moves alpha by a lattice vector and
 * leaves mu unchanged. The branch pair that places alpha in the fundamental
 * parallelogram is computed directly and its neighbours are scanned if the
 * verification fails.
 */
inline AlphaMu alpha_mu_from_multipliers(const Lattice &lat, cplx nu1, cplx nu2)
{
    if (nu1 == cplx(0.0, 0.0) || nu2 == cplx(0.0, 0.0) || !std::isfinite(std::abs(nu1))
        || !std::isfinite(std::abs(nu2))) {
        throw Error(ErrorCode::InvalidArgument, "multipliers must be finite and nonzero");
    }
    const double s = static_cast<double>(lat.orientation());
    const cplx l1 = std::log(nu1);
    const cplx l2 = std::log(nu2);
    const cplx e1 = lat.e1();
    const cplx e2 = lat.e2();
    const cplx alpha_principal = (l2 * e1 - l1 * e2) / (s * two_pi_i);
    if (lat.distance_to_lattice(alpha_principal) < 1e-8 * lat.min_generator_length()) {
        throw Error(ErrorCode::DegenerateMultipliers,
                    "multipliers are of the form (exp(beta e1), exp(beta e2)); use the degenerate ansatz");
    }
    const auto red = lat.reduce(alpha_principal);
    // alpha0 = alpha_principal - m e1 - n e2  <=>  k1 = s n, k2 = -s m.
    const long k1c = static_cast<long>(s) * red.n;
    const long k2c = -static_cast<long>(s) * red.m;
    const double tol = 1e-8;
    for (int radius = 0; radius <= 1; ++radius) {
        for (long d1 = -radius; d1 <= radius; ++d1) {
            for (long d2 = -radius; d2 <= radius; ++d2) {
                if (std::max(std::abs(d1), std::abs(d2)) != radius) {
                    continue;
                }
                const cplx x1 = l1 + two_pi_i * static_cast<double>(k1c + d1);
                const cplx x2 = l2 + two_pi_i * static_cast<double>(k2c + d2);
                const cplx alpha = (x2 * e1 - x1 * e2) / (s * two_pi_i);
                const cplx c = (x1 + alpha * lat.eta1()) / e1;
                // Evaluate zeta at the centered representative for accuracy.
                const auto cen = lat.center(alpha);
                const cplx mu = c - (detail::zeta_centered(lat, cen.z0) + cen.eta);
                const auto [y1, y2] = floquet_exponents(lat, alpha, mu);
                const bool ok1 = std::abs(std::exp(y1 - l1) - 1.0) <= tol;
                const bool ok2 = std::abs(std::exp(y2 - l2) - 1.0) <= tol;
                if (ok1 && ok2) {
                    return {lat.reduce(alpha).z0, mu};
                }
            }
        }
    }
    throw Error(ErrorCode::NoConsistentBranch, "no logarithm branch pair satisfies both multiplier equations");
}

/// Builds and validates a point of the curve from (alpha, mu).
inline SpectralPoint spectral_point(const PunctureSet &ps, cplx alpha, cplx mu)
{
    const PhiEvaluator ev(ps.lattice(), alpha);
    auto k = detail::kernel_impl(ps, ev, mu);
    SpectralPoint sp;
    sp.alpha = alpha;
    sp.mu = mu;
    sp.a = std::move(k.a);
    sp.residual = k.residual;
    sp.null_dim = k.null_dim;
    std::tie(sp.nu1, sp.nu2) = floquet_multipliers(ps.lattice(), alpha, mu);
    return sp;
}

/// psi(z) = sum_l a_l exp(mu z) Phi(z - p_l, alpha).
inline Eigenfunction build_psi(const PunctureSet &ps, const SpectralPoint &sp)
{
    return Eigenfunction::sheet(ps, sp.alpha, sp.mu, sp.a);
}

struct BoundaryCheck
{
    cplx residue;
    cplx c0;

    double ratio() const
    {
        return std::abs(c0) / std::abs(residue);
    }
};

/// Contour-extracted residue and constant Laurent term of psi at p_l.
inline BoundaryCheck verify_boundary(const PunctureSet &ps, const Eigenfunction &psi, std::size_t l,
                                     std::size_t nodes = default_contour_nodes)
{
    const auto s = sample_circle(psi, ps[l], ps.contour_radius(), nodes);
    return {s.coefficient(-1), s.coefficient(0)};
}

struct CurveSample
{
    cplx alpha;
    bool ok = false;
    std::string error;
    CharPoly poly;
    std::vector<cplx> mu;
    std::vector<CVector> kernels;
    std::vector<std::pair<cplx, cplx>> multipliers;
    std::vector<double> residuals;
};

struct SampleOptions
{
    bool kernels = true;
    unsigned threads = 1;
};

/// Per-alpha characteristic polynomial, sheets and (optionally) kernels and multipliers, in grid order.
inline std::vector<CurveSample> sample_curve(const PunctureSet &ps, const std::vector<cplx> &grid,
                                             SampleOptions opts = {})
{
    std::vector<CurveSample> out(grid.size());
    parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
        CurveSample &rec = out[i];
        rec.alpha = grid[i];
        try {
            rec.poly = char_poly(ps, grid[i]);
            rec.mu = sheets(ps, grid[i]);
            if (opts.kernels) {
                for (const cplx mu : rec.mu) {
                    const auto k = kernel_vector_info(ps, grid[i], mu);
                    rec.kernels.push_back(k.a);
                    rec.residuals.push_back(k.residual);
                    rec.multipliers.push_back(floquet_multipliers(ps.lattice(), grid[i], mu));
                }
            }
            rec.ok = true;
        } catch (const Error &e) {
            rec.ok = false;
            rec.error = to_string(e.code());
        }
    });
    return out;
}

/// Polynomial residual scale max(1, |B|_inf)^N used for the curve equation.
inline double curve_scale(const PunctureSet &ps, cplx alpha)
{
    const PhiEvaluator ev(ps.lattice(), alpha);
    return detail::poly_scale(detail::gauged_offdiag(ps, ev));
}

}

#endif
