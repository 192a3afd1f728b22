#ifndef ELLSPEC_THETA_HPP
#define ELLSPEC_THETA_HPP

// Jacobi theta_1 in the nome q = exp(i pi tau), with the common factor
// q^{1/4} stripped:
//
//   T(v) = sum_{n>=0} (-1)^n q^{n(n+1)} sin((2n+1) v),   theta_1 = 2 q^{1/4} T.
//
// Every quantity built from theta_1 below is a ratio, so the stripped factor
// cancels and we never need a branch of q^{1/4}.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>

namespace ellspec
{

using cplx = std::complex<double>;

namespace detail
{

// T, T', T'' at v.
struct ThetaTriple
{
    cplx value;
    cplx d1;
    cplx d2;
};

// T'(0) and T'''(0).
struct ThetaOrigin
{
    cplx d1;
    cplx d3;
};

inline constexpr std::size_t theta_max_terms = 400;

inline ThetaTriple theta1_triple(cplx v, cplx q)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    ThetaTriple out{};
    double abs_sum = 0.0;
    cplx qpow(1.0, 0.0);   // q^{n(n+1)}
    cplx qstep = q * q;    // q^{2(n+1)}, ratio between consecutive qpow
    double sign = 1.0;
    for (std::size_t n = 0; n < theta_max_terms; ++n) {
        const double k = 2.0 * static_cast<double>(n) + 1.0;
        const cplx c = sign * qpow;
        const cplx s = std::sin(k * v);
        const cplx co = std::cos(k * v);
        const cplx t0 = c * s;
        const cplx t1 = c * k * co;
        const cplx t2 = -c * k * k * s;
        out.value += t0;
        out.d1 += t1;
        out.d2 += t2;
        const double mag = std::abs(t2);
        abs_sum += mag;
        if (n > 0 && mag <= eps * abs_sum) {
            break;
        }
        qpow *= qstep;
        qstep *= q * q;
        sign = -sign;
    }
    return out;
}

inline ThetaOrigin theta1_origin(cplx q)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    ThetaOrigin out{};
    double abs_sum = 0.0;
    cplx qpow(1.0, 0.0);
    cplx qstep = q * q;
    double sign = 1.0;
    for (std::size_t n = 0; n < theta_max_terms; ++n) {
        const double k = 2.0 * static_cast<double>(n) + 1.0;
        const cplx c = sign * qpow;
        out.d1 += c * k;
        const cplx t3 = -c * k * k * k;
        out.d3 += t3;
        abs_sum += std::abs(t3);
        if (n > 0 && std::abs(t3) <= eps * abs_sum) {
            break;
        }
        qpow *= qstep;
        qstep *= q * q;
        sign = -sign;
    }
    return out;
}

// Quasimodular Eisenstein series E2(tau) = 1 - 24 sum_n n q^{2n} / (1 - q^{2n}).
inline cplx eisenstein_e2(cplx tau)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const cplx q2 = std::exp(cplx(0.0, 2.0 * std::numbers::pi) * tau);
    cplx sum(0.0, 0.0);
    double abs_sum = 0.0;
    cplx qn = q2;
    for (std::size_t n = 1; n < 100000; ++n) {
        const cplx term = static_cast<double>(n) * qn / (1.0 - qn);
        sum += term;
        abs_sum += std::abs(term);
        if (std::abs(term) <= eps * abs_sum) {
            break;
        }
        qn *= q2;
    }
    return 1.0 - 24.0 * sum;
}

}

}

#endif
