#ifndef ELLSPEC_EIGENFUNCTION_HPP
#define ELLSPEC_EIGENFUNCTION_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <utility>

#include "baker_akhiezer.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "punctures.hpp"
#include "weierstrass.hpp"

namespace ellspec
{

/// A meromorphic Floquet solution of d-bar psi = 0 with at most simple poles at the punctures.
/**
 * Sheet:       psi(z) = sum_l a_l exp(mu z) Phi(z - p_l, alpha)
 * Degenerate:  psi(z) = exp(beta z) (a0 + sum_l a_l zeta(z - p_l)),  sum_l a_l = 0
 * Zero:        psi = 0
 */
class Eigenfunction
{
    public:
        enum class Kind
        {
            Sheet,
            Degenerate,
            Zero,
        };

        static Eigenfunction sheet(const PunctureSet &ps, cplx alpha, cplx mu, CVector a)
        {
            check_size(ps, a);
            Eigenfunction f(ps, Kind::Sheet);
            f.m_phi.emplace(ps.lattice(), alpha);
            f.m_alpha = alpha;
            f.m_exponent = mu;
            f.m_a = std::move(a);
            return f;
        }

        static Eigenfunction degenerate(const PunctureSet &ps, cplx beta, cplx a0, CVector a)
        {
            check_size(ps, a);
            Eigenfunction f(ps, Kind::Degenerate);
            f.m_exponent = beta;
            f.m_a0 = a0;
            f.m_a = std::move(a);
            return f;
        }

        static Eigenfunction zero(const PunctureSet &ps)
        {
            Eigenfunction f(ps, Kind::Zero);
            f.m_a = CVector::Zero(static_cast<Eigen::Index>(ps.size()));
            return f;
        }

        Kind kind() const { return m_kind; }
        const PunctureSet &punctures() const { return m_ps; }
        const Lattice &lattice() const { return m_ps.lattice(); }
        const CVector &coefficients() const { return m_a; }
        /// mu for sheet solutions, beta for degenerate ones.
        cplx exponent() const { return m_exponent; }
        cplx alpha() const { return m_alpha; }
        cplx a0() const { return m_a0; }

        cplx operator()(cplx z) const
        {
            if (m_kind == Kind::Zero) {
                return cplx(0.0, 0.0);
            }
            const auto &pts = m_ps.points();
            const Lattice &lat = m_ps.lattice();
            for (std::size_t l = 0; l < pts.size(); ++l) {
                if (lat.distance_to_lattice(z - pts[l]) < lat.pole_radius()) {
                    std::ostringstream os;
                    os << "evaluation at z = " << z << " hits puncture " << l;
                    throw Error(ErrorCode::PoleAtPuncture, os.str());
                }
            }
            cplx acc(0.0, 0.0);
            if (m_kind == Kind::Sheet) {
                for (std::size_t l = 0; l < pts.size(); ++l) {
                    const cplx al = m_a(static_cast<Eigen::Index>(l));
                    if (al == cplx(0.0, 0.0)) {
                        continue;
                    }
                    const auto s = m_phi->split(z - pts[l]);
                    acc += al * s.prefactor * std::exp(s.exponent + m_exponent * z);
                }
                return acc;
            }
            acc = m_a0;
            for (std::size_t l = 0; l < pts.size(); ++l) {
                acc += m_a(static_cast<Eigen::Index>(l)) * zeta(lat, z - pts[l]);
            }
            return std::exp(m_exponent * z) * acc;
        }

        /// Residue at p_l predicted by the ansatz.
        cplx predicted_residue(std::size_t l) const
        {
            if (m_kind == Kind::Zero) {
                return cplx(0.0, 0.0);
            }
            return m_a(static_cast<Eigen::Index>(l)) * std::exp(m_exponent * m_ps[l]);
        }

        /// Logarithms X_j of the Floquet multipliers nu_j = exp(X_j) predicted by the ansatz.
        std::pair<cplx, cplx> multiplier_exponents() const
        {
            const Lattice &lat = m_ps.lattice();
            if (m_kind == Kind::Sheet) {
                const cplx c = m_exponent + m_phi->zeta_alpha();
                const cplx a = m_phi->alpha_reduced();
                return {c * lat.e1() - a * lat.eta1(), c * lat.e2() - a * lat.eta2()};
            }
            return {m_exponent * lat.e1(), m_exponent * lat.e2()};
        }

    private:
        Eigenfunction(const PunctureSet &ps, Kind kind) : m_ps(ps), m_kind(kind) {}

        static void check_size(const PunctureSet &ps, const CVector &a)
        {
            if (static_cast<std::size_t>(a.size()) != ps.size()) {
                throw Error(ErrorCode::InvalidArgument, "coefficient vector length differs from the number of punctures");
            }
        }

        PunctureSet m_ps;
        Kind m_kind;
        std::optional<PhiEvaluator> m_phi;
        cplx m_alpha{0.0, 0.0};
        cplx m_exponent{0.0, 0.0};
        cplx m_a0{0.0, 0.0};
        CVector m_a;
};

}

#endif
