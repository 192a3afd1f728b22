#ifndef ELLSPEC_WEIERSTRASS_HPP
#define ELLSPEC_WEIERSTRASS_HPP

// Weierstrass sigma, zeta and wp through theta_1 in the reduced basis:
//
//   sigma(z) = (w1/pi) exp(eta_w1 z^2 / (2 w1)) T(v) / T'(0)
//   zeta(z)  = eta_w1 z / w1 + (pi/w1) T'(v)/T(v)
//   wp(z)    = -eta_w1 / w1 - (pi/w1)^2 (T''/T - (T'/T)^2)
//
// with v = pi z / w1, after removing the nearest lattice vector lambda from z:
//
//   sigma(z0 + lambda) = eps(lambda) sigma(z0) exp(eta(lambda) (z0 + lambda/2)),
//   zeta(z0 + lambda)  = zeta(z0) + eta(lambda),
//
// eps(m w1 + n w2) = (-1)^{m + n + m n}.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "lattice.hpp"
#include "theta.hpp"

namespace ellspec
{

namespace detail
{

inline double lattice_sign(long m, long n)
{
    const long s = m + n + m * n;
    return (s % 2 == 0) ? 1.0 : -1.0;
}

inline cplx sigma_centered(const Lattice &lat, cplx z0)
{
    const cplx w1 = lat.w1();
    const cplx v = std::numbers::pi * z0 / w1;
    const auto th = theta1_triple(v, lat.nome());
    return (w1 / std::numbers::pi) * std::exp(lat.eta_w1() * z0 * z0 / (2.0 * w1)) * th.value
           / lat.theta_d1_origin();
}

inline cplx zeta_centered(const Lattice &lat, cplx z0)
{
    const cplx w1 = lat.w1();
    const cplx v = std::numbers::pi * z0 / w1;
    const auto th = theta1_triple(v, lat.nome());
    return lat.eta_w1() * z0 / w1 + (std::numbers::pi / w1) * th.d1 / th.value;
}

inline cplx wp_centered(const Lattice &lat, cplx z0)
{
    const cplx w1 = lat.w1();
    const cplx v = std::numbers::pi * z0 / w1;
    const auto th = theta1_triple(v, lat.nome());
    const cplx r1 = th.d1 / th.value;
    const cplx r2 = th.d2 / th.value;
    const cplx k = std::numbers::pi / w1;
    return -lat.eta_w1() / w1 - k * k * (r2 - r1 * r1);
}

inline void check_pole(const Lattice &lat, cplx z, const char *what)
{
    if (lat.distance_to_lattice(z) < lat.pole_radius()) {
        std::ostringstream os;
        os << what << " evaluated at z = " << z << ", within the pole-exclusion radius of the lattice";
        throw Error(ErrorCode::PoleAtLatticePoint, os.str());
    }
}

}

inline cplx sigma(const Lattice &lat, cplx z)
{
    if (z == cplx(0.0, 0.0)) {
        return cplx(0.0, 0.0);
    }
    const auto c = lat.center(z);
    const cplx s0 = detail::sigma_centered(lat, c.z0);
    if (c.m == 0 && c.n == 0) {
        return s0;
    }
    return detail::lattice_sign(c.m, c.n) * s0 * std::exp(c.eta * (c.z0 + 0.5 * c.lambda));
}

inline cplx zeta(const Lattice &lat, cplx z)
{
    detail::check_pole(lat, z, "zeta");
    const auto c = lat.center(z);
    return detail::zeta_centered(lat, c.z0) + c.eta;
}

inline cplx weierstrass_p(const Lattice &lat, cplx z)
{
    detail::check_pole(lat, z, "wp");
    return detail::wp_centered(lat, lat.center(z).z0);
}

}

#endif
