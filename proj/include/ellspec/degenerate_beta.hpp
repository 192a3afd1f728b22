#ifndef ELLSPEC_DEGENERATE_BETA_HPP
#define ELLSPEC_DEGENERATE_BETA_HPP

// Multipliers of the form (exp(beta e1), exp(beta e2)).
//
// Ansatz psi = exp(beta z) (a0 + sum_l a_l zeta(z - p_l)) with sum_l a_l = 0.
// The vanishing constant term at p_k reads
//
//   a0 + beta a_k + sum_{l != k} a_l zeta(p_k - p_l) = 0,   k = 1..N.
//
// Subtracting the condition at a pivot puncture removes a0; with the
// constraint row this leaves an N x N system M(beta) a = 0, affine in beta,
// whose determinant has degree N - 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "eigenfunction.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "punctures.hpp"
#include "weierstrass.hpp"

namespace ellspec
{

struct BetaRoot
{
    cplx beta;
    cplx a0;
    CVector a;
    double residual = 0.0;        // max_k |condition k| / scale
    Eigen::Index null_dim = 1;
    std::size_t multiplicity = 1; // size of the root cluster this root belongs to
};

namespace detail
{

/// Z_kl = zeta(p_k - p_l) for k != l, 0 on the diagonal.
inline CMatrix zeta_differences(const PunctureSet &ps)
{
    const auto n = static_cast<Eigen::Index>(ps.size());
    CMatrix z = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
            if (k != l) {
                z(k, l) = zeta(ps.lattice(), ps[static_cast<std::size_t>(k)] - ps[static_cast<std::size_t>(l)]);
            }
        }
    }
    return z;
}

inline CMatrix beta_system_from(const CMatrix &zd, cplx beta, std::size_t pivot)
{
    const Eigen::Index n = zd.rows();
    const auto piv = static_cast<Eigen::Index>(pivot);
    CMatrix cond = zd;
    cond.diagonal().array() += beta;
    CMatrix m(n, n);
    Eigen::Index row = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k == piv) {
            continue;
        }
        m.row(row++) = cond.row(k) - cond.row(piv);
    }
    m.row(n - 1).setOnes();
    return m;
}

inline std::vector<cplx> interpolate_det(const CMatrix &zd, std::size_t pivot)
{
    const Eigen::Index n = zd.rows();
    const std::size_t count = static_cast<std::size_t>(n);
    const double radius = 1.0 + zd.cwiseAbs().maxCoeff();
    std::vector<cplx> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        const cplx node = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count));
        values[k] = beta_system_from(zd, node, pivot).partialPivLu().determinant();
    }
    // Discrete Fourier inversion on the circle: exact for degree <= n - 1.
    std::vector<cplx> coeffs(count);
    for (std::size_t j = 0; j < count; ++j) {
        cplx acc(0.0, 0.0);
        for (std::size_t k = 0; k < count; ++k) {
            acc += values[k] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(count));
        }
        coeffs[j] = acc / (static_cast<double>(count) * std::pow(radius, static_cast<double>(j)));
    }
    return coeffs;
}

}

/// M(beta): rows are (condition k) - (condition pivot) for k != pivot, last row is sum_l a_l = 0.
inline CMatrix beta_system(const PunctureSet &ps, cplx beta, std::size_t pivot = 0)
{
    if (pivot >= ps.size()) {
        throw Error(ErrorCode::InvalidArgument, "pivot index out of range");
    }
    return detail::beta_system_from(detail::zeta_differences(ps), beta, pivot);
}

/// Coefficients of det M(beta) in ascending order of powers, degree N - 1.
inline std::vector<cplx> beta_polynomial(const PunctureSet &ps, std::size_t pivot = 0)
{
    if (pivot >= ps.size()) {
        throw Error(ErrorCode::InvalidArgument, "pivot index out of range");
    }
    auto coeffs = detail::interpolate_det(detail::zeta_differences(ps), pivot);
    double cmax = 0.0;
    for (const cplx &c : coeffs) {
        cmax = std::max(cmax, std::abs(c));
    }
    if (!(std::abs(coeffs.back()) >= 1e-10 * cmax)) {
        std::ostringstream os;
        os << "leading coefficient " << std::abs(coeffs.back()) << " vanishes relative to " << cmax;
        throw Error(ErrorCode::DegenerateLeadingCoefficient, os.str());
    }
    return coeffs;
}

/// Roots of the beta polynomial with their coefficient vectors, sorted lexicographically.
inline std::vector<BetaRoot> beta_roots(const PunctureSet &ps, std::size_t pivot = 0)
{
    const std::size_t n = ps.size();
    if (n < 2) {
        return {};
    }
    const CMatrix zd = detail::zeta_differences(ps);
    const auto coeffs = beta_polynomial(ps, pivot);
    // Monic, descending: x^{N-1} + c_1 x^{N-2} + ...
    std::vector<cplx> monic(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        monic[j] = coeffs[n - 2 - j] / coeffs[n - 1];
    }
    auto roots = detail::monic_roots(monic);
    detail::sort_lex(roots);

    const double scale = std::max(1.0, zd.cwiseAbs().maxCoeff());
    std::vector<BetaRoot> out;
    out.reserve(roots.size());
    for (const cplx beta : roots) {
        const CMatrix m = detail::beta_system_from(zd, beta, pivot);
        const auto nd = detail::null_direction(m, 1e-6 * std::max(scale, std::abs(beta)));
        BetaRoot br;
        br.beta = beta;
        br.a = detail::normalize_sup(nd.vector);
        br.null_dim = std::max<Eigen::Index>(1, nd.null_dim);
        const auto piv = static_cast<Eigen::Index>(pivot);
        br.a0 = -beta * br.a(piv) - (zd.row(piv) * br.a)(0);
        // max_k |a0 + beta a_k + sum_{l != k} a_l zeta(p_k - p_l)|
        CVector cond = zd * br.a + beta * br.a;
        cond.array() += br.a0;
        br.residual = cond.cwiseAbs().maxCoeff() / std::max(scale, std::abs(beta));
        out.push_back(std::move(br));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t mult = 0;
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double d = std::abs(out[i].beta - out[j].beta);
            if (d <= 1e-6 * std::max(1.0, std::abs(out[i].beta))) {
                ++mult;
            }
        }
        out[i].multiplicity = mult;
    }
    return out;
}

/// psi(z) = exp(beta z) (a0 + sum_l a_l zeta(z - p_l)).
inline Eigenfunction build_degenerate_psi(const PunctureSet &ps, const BetaRoot &br)
{
    return Eigenfunction::degenerate(ps, br.beta, br.a0, br.a);
}

}

#endif
