#ifndef ELLSPEC_LINALG_HPP
#define ELLSPEC_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "theta.hpp"

namespace ellspec
{

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace detail
{

/// Coefficients c_1..c_N of det(x I - M) = x^N + c_1 x^{N-1} + ... + c_N (Faddeev-LeVerrier).
inline std::vector<cplx> faddeev_leverrier(const CMatrix &m)
{
    const Eigen::Index n = m.rows();
    std::vector<cplx> c(static_cast<std::size_t>(n));
    CMatrix mk = CMatrix::Zero(n, n);
    cplx prev(1.0, 0.0);
    for (Eigen::Index k = 1; k <= n; ++k) {
        mk = m * mk;
        mk.diagonal().array() += prev;
        const cplx ck = -(m * mk).trace() / static_cast<double>(k);
        c[static_cast<std::size_t>(k - 1)] = ck;
        prev = ck;
    }
    return c;
}

/// Value and derivative of the monic polynomial x^N + c_1 x^{N-1} + ... + c_N.
inline std::pair<cplx, cplx> monic_eval(const std::vector<cplx> &c, cplx x)
{
    cplx p(1.0, 0.0);
    cplx dp(0.0, 0.0);
    for (const cplx &ck : c) {
        dp = dp * x + p;
        p = p * x + ck;
    }
    return {p, dp};
}

/// One guarded Newton step: kept only if it lowers |p|.
inline cplx newton_polish(const std::vector<cplx> &c, cplx x)
{
    const auto [p, dp] = monic_eval(c, x);
    if (dp == cplx(0.0, 0.0) || !std::isfinite(std::abs(p / dp))) {
        return x;
    }
    const cplx y = x - p / dp;
    return std::abs(monic_eval(c, y).first) < std::abs(p) ? y : x;
}

inline std::vector<cplx> eigenvalues(const CMatrix &m)
{
    if (m.rows() == 0) {
        return {};
    }
    if (m.rows() == 1) {
        return {m(0, 0)};
    }
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    std::vector<cplx> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    }
    return out;
}

/// Roots of the monic polynomial x^N + c_1 x^{N-1} + ... + c_N from its companion matrix.
inline std::vector<cplx> monic_roots(const std::vector<cplx> &c)
{
    const auto n = static_cast<Eigen::Index>(c.size());
    if (n == 0) {
        return {};
    }
    CMatrix comp = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        comp(0, j) = -c[static_cast<std::size_t>(j)];
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        comp(i, i - 1) = 1.0;
    }
    auto roots = eigenvalues(comp);
    for (auto &r : roots) {
        r = newton_polish(c, r);
    }
    return roots;
}

inline bool lex_less(cplx a, cplx b)
{
    if (a.real() != b.real()) {
        return a.real() < b.real();
    }
    return a.imag() < b.imag();
}

inline void sort_lex(std::vector<cplx> &v)
{
    std::sort(v.begin(), v.end(), lex_less);
}

struct NullDirection
{
    CVector vector;
    double smallest = 0.0;      // smallest singular value
    double largest = 0.0;       // largest singular value
    Eigen::Index null_dim = 0;  // singular values below the threshold passed in
};

/// Right singular vector of the smallest singular value.
inline NullDirection null_direction(const CMatrix &m, double null_threshold)
{
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    const auto &s = svd.singularValues();
    const Eigen::Index n = m.cols();
    NullDirection out;
    out.vector = svd.matrixV().col(n - 1);
    out.smallest = s(n - 1);
    out.largest = s(0);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (s(i) <= null_threshold) {
            ++out.null_dim;
        }
    }
    return out;
}

/// Scale to sup-norm 1 and rotate so the first entry of modulus >= 0.5 is real positive.
inline CVector normalize_sup(CVector v)
{
    const double vmax = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    if (vmax == 0.0) {
        return v;
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= 0.5 * vmax) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = cplx(std::abs(v(i)), 0.0);
            break;
        }
    }
    return v / v.cwiseAbs().maxCoeff();
}

inline double inf_norm(const CMatrix &m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

}

}

#endif
