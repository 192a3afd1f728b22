#ifndef ELLSPEC_LATTICE_HPP
#define ELLSPEC_LATTICE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "theta.hpp"

namespace ellspec
{

inline constexpr cplx two_pi_i{0.0, 2.0 * std::numbers::pi};

/// z = z0 + m e1 + n e2 with z0 in the half-open fundamental parallelogram.
struct ReducedPoint
{
    cplx z0;
    long m = 0;
    long n = 0;
};

/// Period lattice Z e1 + Z e2 together with its quasi-periods.
/**
 * The generators passed by the caller are kept as given: eta1() and eta2()
 * are the increments of zeta along e1 and e2, so that
 *
 *   eta1 e2 - eta2 e1 = orientation() * 2 pi i,
 *
 * with orientation() = +1 when Im(e2/e1) > 0. Evaluation of sigma, zeta and
 * wp goes through a Gauss-reduced basis (w1, w2) with tau_r = w2/w1 in the
 * standard fundamental domain, where the nome satisfies |q| <= exp(-pi sqrt(3)/2).
 *
 * Immutable after construction.
 */
class Lattice
{
    public:
        /// Position of a point relative to the reduced basis, rounded to the nearest lattice vector.
        struct Centered
        {
            cplx z0;        // z - lambda, coordinates in [-1/2, 1/2]
            cplx lambda;    // m w1 + n w2
            cplx eta;       // zeta increment along lambda
            long m = 0;
            long n = 0;
        };

        static Lattice make(cplx e1, cplx e2, double tolerance = 1e-12)
        {
            if (!(tolerance > 0.0 && tolerance <= 1e-4)) {
                std::ostringstream os;
                os << "tolerance " << tolerance << " outside (0, 1e-4]";
                throw Error(ErrorCode::BadTolerance, os.str());
            }
            constexpr double eps = std::numeric_limits<double>::epsilon();
            const double cross = cross_im(e1, e2);
            if (std::abs(e1) == 0.0 || std::abs(e2) == 0.0 || !std::isfinite(cross)
                || std::abs(cross) <= 10.0 * eps * std::abs(e1) * std::abs(e2)) {
                throw Error(ErrorCode::DegenerateLattice, "generators are R-linearly dependent");
            }
            return Lattice(e1, e2, tolerance);
        }

        cplx e1() const { return m_e1; }
        cplx e2() const { return m_e2; }
        cplx eta1() const { return m_eta1; }
        cplx eta2() const { return m_eta2; }
        /// e2/e1 after orientation normalization (Im tau > 0).
        cplx tau() const { return static_cast<double>(m_orientation) * m_e2 / m_e1; }
        int orientation() const { return m_orientation; }
        double tolerance() const { return m_tol; }

        cplx w1() const { return m_w1; }
        cplx w2() const { return m_w2; }
        cplx reduced_tau() const { return m_w2 / m_w1; }
        cplx nome() const { return m_q; }
        cplx eta_w1() const { return m_eta_w1; }
        cplx eta_w2() const { return m_eta_w2; }
        cplx theta_d1_origin() const { return m_theta_d1; }

        double min_generator_length() const { return std::min(std::abs(m_e1), std::abs(m_e2)); }
        double pole_radius() const { return 1e-8 * min_generator_length(); }

        /// Quasi-period of the lattice vector m e1 + n e2.
        cplx eta_of(long m, long n) const
        {
            return static_cast<double>(m) * m_eta1 + static_cast<double>(n) * m_eta2;
        }

        ReducedPoint reduce(cplx z) const
        {
            const double det = cross_im(m_e1, m_e2);
            const double s = cross_im(z, m_e2) / det;
            const double t = cross_im(m_e1, z) / det;
            ReducedPoint r;
            r.m = static_cast<long>(std::floor(s));
            r.n = static_cast<long>(std::floor(t));
            r.z0 = z - static_cast<double>(r.m) * m_e1 - static_cast<double>(r.n) * m_e2;
            // Rounding can push a coordinate of z0 to exactly 1.
            const double s0 = cross_im(r.z0, m_e2) / det;
            const double t0 = cross_im(m_e1, r.z0) / det;
            if (s0 >= 1.0) {
                ++r.m;
                r.z0 -= m_e1;
            }
            if (t0 >= 1.0) {
                ++r.n;
                r.z0 -= m_e2;
            }
            return r;
        }

        Centered center(cplx z) const
        {
            const double det = cross_im(m_w1, m_w2);
            const double s = cross_im(z, m_w2) / det;
            const double t = cross_im(m_w1, z) / det;
            Centered c;
            c.m = std::lround(s);
            c.n = std::lround(t);
            const double md = static_cast<double>(c.m);
            const double nd = static_cast<double>(c.n);
            c.lambda = md * m_w1 + nd * m_w2;
            c.z0 = z - c.lambda;
            c.eta = md * m_eta_w1 + nd * m_eta_w2;
            return c;
        }

        double distance_to_lattice(cplx z) const
        {
            const cplx z0 = center(z).z0;
            double best = std::numeric_limits<double>::infinity();
            for (int a = -1; a <= 1; ++a) {
                for (int b = -1; b <= 1; ++b) {
                    best = std::min(best, std::abs(z0 - static_cast<double>(a) * m_w1 - static_cast<double>(b) * m_w2));
                }
            }
            return best;
        }

        bool on_lattice(cplx z) const
        {
            return distance_to_lattice(z) < pole_radius();
        }

        bool equivalent(cplx a, cplx b) const
        {
            return distance_to_lattice(a - b) <= m_tol * min_generator_length();
        }

        /// |eta1 e2 - eta2 e1 - orientation 2 pi i|
        double legendre_defect() const
        {
            return std::abs(m_eta1 * m_e2 - m_eta2 * m_e1 - static_cast<double>(m_orientation) * two_pi_i);
        }

    private:
        Lattice(cplx e1, cplx e2, double tol) : m_e1(e1), m_e2(e2), m_tol(tol)
        {
            m_orientation = cross_im(e1, e2) > 0.0 ? 1 : -1;
            cplx u = e1;
            cplx v = static_cast<double>(m_orientation) * e2;
            // Gauss reduction; (u, v) stays positively oriented.
            for (int iter = 0; iter < 1000; ++iter) {
                const double k = std::round((v / u).real());
                if (k != 0.0) {
                    v -= k * u;
                }
                if (std::abs(v) < std::abs(u) * (1.0 - 1e-14)) {
                    const cplx nu = v;
                    v = -u;
                    u = nu;
                    continue;
                }
                if (k == 0.0) {
                    break;
                }
            }
            m_w1 = u;
            m_w2 = v;
            const cplx tau_r = m_w2 / m_w1;
            m_q = std::exp(cplx(0.0, std::numbers::pi) * tau_r);
            const auto origin = detail::theta1_origin(m_q);
            m_theta_d1 = origin.d1;
            constexpr double pi2 = std::numbers::pi * std::numbers::pi;
            m_eta_w1 = -pi2 / (3.0 * m_w1) * origin.d3 / origin.d1;
            m_eta_w2 = (m_eta_w1 * m_w2 - two_pi_i) / m_w1;

            // Independent route for eta(w2): Eisenstein E2 in the basis (w2, -w1).
            const cplx eta_w2_direct = pi2 * detail::eisenstein_e2(-m_w1 / m_w2) / (3.0 * m_w2);
            const double defect_direct = std::abs(m_eta_w1 * m_w2 - eta_w2_direct * m_w1 - two_pi_i);
            if (!(defect_direct <= m_tol * 2.0 * std::numbers::pi)) {
                std::ostringstream os;
                os << "reduced-basis Legendre defect " << defect_direct << " exceeds tolerance";
                throw Error(ErrorCode::LegendreCheckFailed, os.str());
            }

            auto coords = [this](cplx z) {
                const double det = cross_im(m_w1, m_w2);
                return std::pair<double, double>{std::round(cross_im(z, m_w2) / det),
                                                 std::round(cross_im(m_w1, z) / det)};
            };
            const auto [a11, a12] = coords(m_e1);
            const auto [a21, a22] = coords(m_e2);
            m_eta1 = a11 * m_eta_w1 + a12 * m_eta_w2;
            m_eta2 = a21 * m_eta_w1 + a22 * m_eta_w2;
            if (!(legendre_defect() <= m_tol * 2.0 * std::numbers::pi)) {
                std::ostringstream os;
                os << "Legendre defect " << legendre_defect() << " exceeds tolerance";
                throw Error(ErrorCode::LegendreCheckFailed, os.str());
            }
        }

        // Im(conj(a) b)
        static double cross_im(cplx a, cplx b)
        {
            return a.real() * b.imag() - a.imag() * b.real();
        }

        cplx m_e1, m_e2;
        cplx m_eta1, m_eta2;
        double m_tol;
        int m_orientation = 1;
        cplx m_w1, m_w2;
        cplx m_q;
        cplx m_eta_w1, m_eta_w2;
        cplx m_theta_d1;
};

inline Lattice make_lattice(cplx e1, cplx e2, double tolerance = 1e-12)
{
    return Lattice::make(e1, e2, tolerance);
}

inline ReducedPoint reduce_mod_lattice(const Lattice &lat, cplx z)
{
    return lat.reduce(z);
}

/// A point of C / Lambda.
struct TorusPoint
{
    cplx z;
    Lattice lattice;

    cplx canonical() const
    {
        return lattice.reduce(z).z0;
    }

    friend bool operator==(const TorusPoint &a, const TorusPoint &b)
    {
        return a.lattice.equivalent(a.z, b.z);
    }
};

}

#endif
