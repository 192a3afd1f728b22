#ifndef ELLSPEC_BAKER_AKHIEZER_HPP
#define ELLSPEC_BAKER_AKHIEZER_HPP

// Phi(z, alpha) = sigma(alpha - z) / (sigma(alpha) sigma(z)) exp(zeta(alpha) z)
//
// Phi is Lambda-periodic in alpha and quasi-periodic in z:
//
//   Phi(z + lambda, alpha) = Phi(z, alpha) exp(zeta(alpha) lambda - eta(lambda) alpha).
//
// Evaluation reduces alpha to alpha0 (nearest-lattice-vector removed) and z to
// z0 + lambda, then returns Phi as prefactor * exp(exponent) so callers that
// need to survive large exponentials can work with the split directly.

#include <cmath>
#include <complex>
#include <sstream>

#include "contour.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "weierstrass.hpp"

namespace ellspec
{

class PhiEvaluator
{
    public:
        /// Phi(z) = prefactor * exp(exponent)
        struct Split
        {
            cplx prefactor;
            cplx exponent;
        };

        PhiEvaluator(const Lattice &lat, cplx alpha) : m_lat(lat), m_alpha(alpha)
        {
            if (lat.on_lattice(alpha)) {
                std::ostringstream os;
                os << "alpha = " << alpha << " lies on the lattice; use the degenerate (beta) ansatz";
                throw Error(ErrorCode::AlphaOnLattice, os.str());
            }
            m_alpha0 = lat.center(alpha).z0;
            m_sigma_alpha = detail::sigma_centered(lat, m_alpha0);
            m_zeta_alpha = detail::zeta_centered(lat, m_alpha0);
        }

        const Lattice &lattice() const { return m_lat; }
        cplx alpha() const { return m_alpha; }
        /// Representative of alpha used for evaluation; Phi does not depend on the choice.
        cplx alpha_reduced() const { return m_alpha0; }
        cplx sigma_alpha() const { return m_sigma_alpha; }
        /// zeta(alpha_reduced()).
        cplx zeta_alpha() const { return m_zeta_alpha; }

        Split split(cplx z) const
        {
            detail::check_pole(m_lat, z, "Phi");
            const auto c = m_lat.center(z);
            const cplx pre = sigma(m_lat, m_alpha0 - c.z0) / (m_sigma_alpha * detail::sigma_centered(m_lat, c.z0));
            return {pre, m_zeta_alpha * z - c.eta * m_alpha0};
        }

        cplx operator()(cplx z) const
        {
            const auto s = split(z);
            return s.prefactor * std::exp(s.exponent);
        }

        /// A logarithm of Phi(z) (branch unspecified).
        cplx log_value(cplx z) const
        {
            const auto s = split(z);
            return std::log(s.prefactor) + s.exponent;
        }

        /// Phi(z) exp(-zeta(alpha_reduced()) z): the factor left after a diagonal gauge.
        cplx gauge_free(cplx z) const
        {
            const auto c = m_lat.center(z);
            detail::check_pole(m_lat, z, "Phi");
            const cplx pre = sigma(m_lat, m_alpha0 - c.z0) / (m_sigma_alpha * detail::sigma_centered(m_lat, c.z0));
            return pre * std::exp(-c.eta * m_alpha0);
        }

    private:
        Lattice m_lat;
        cplx m_alpha;
        cplx m_alpha0;
        cplx m_sigma_alpha;
        cplx m_zeta_alpha;
};

inline cplx phi(const Lattice &lat, cplx z, cplx alpha)
{
    return PhiEvaluator(lat, alpha)(z);
}

/// Constant Laurent coefficient of Phi(., alpha) at z = 0, by contour averaging of Phi(z) - 1/z.
inline cplx phi_laurent_c0(const Lattice &lat, cplx alpha, double radius = 0.0,
                           std::size_t nodes = default_contour_nodes)
{
    const PhiEvaluator ev(lat, alpha);
    if (radius <= 0.0) {
        radius = 1e-2 * lat.min_generator_length() / 4.0;
    }
    const auto s = sample_circle([&](cplx z) { return ev(z) - 1.0 / z; }, cplx(0.0, 0.0), radius, nodes);
    return s.coefficient(0);
}

/// Psi_{mu, alpha}(z - z0) = exp(mu z) Phi(z - z0, alpha).
struct PsiKernel
{
    PhiEvaluator phi;
    cplx mu;
    cplx z0;

    cplx log_value(cplx z) const
    {
        return mu * z + phi.log_value(z - z0);
    }

    cplx operator()(cplx z) const
    {
        const auto s = phi.split(z - z0);
        return s.prefactor * std::exp(s.exponent + mu * z);
    }

    /// Factor gained under z -> z + e_j, predicted from the quasi-periodicity of Phi.
    cplx multiplier_exponent(cplx period, cplx eta) const
    {
        return (mu + phi.zeta_alpha()) * period - eta * phi.alpha_reduced();
    }
};

inline cplx psi_kernel_eval(const PsiKernel &k, cplx z)
{
    return k(z);
}

}

#endif
