#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include <ellspec/ellspec.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ellspec;

namespace
{

double rel(cplx a, cplx b)
{
    return std::abs(a - b) / std::abs(b);
}

cplx horner(const std::vector<cplx> &ascending, cplx x)
{
    cplx acc(0.0, 0.0);
    for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

std::vector<cplx> betas_of(const std::vector<BetaRoot> &roots)
{
    std::vector<cplx> out;
    for (const auto &r : roots) {
        out.push_back(r.beta);
    }
    return out;
}

double multiset_distance(const std::vector<cplx> &a, const std::vector<cplx> &b)
{
    const auto col = ellspec::detail::match_nearest(a, b);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[col[i]]));
    }
    return worst;
}

void check_invariants(const PunctureSet &ps, const BetaRoot &br)
{
    const Lattice &lat = ps.lattice();
    const std::size_t n = ps.size();
    EXPECT_LE(std::abs(br.a.sum()), 1e-10 * br.a.norm());
    EXPECT_NEAR(br.a.cwiseAbs().maxCoeff(), 1.0, 1e-15);
    double scale = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            if (k != l) {
                scale = std::max(scale, std::abs(zeta(lat, ps[k] - ps[l])));
            }
        }
    }
    scale = std::max(scale, std::abs(br.beta));
    for (std::size_t k = 0; k < n; ++k) {
        cplx c = br.a0 + br.beta * br.a(static_cast<Eigen::Index>(k));
        for (std::size_t l = 0; l < n; ++l) {
            if (l != k) {
                c += br.a(static_cast<Eigen::Index>(l)) * zeta(lat, ps[k] - ps[l]);
            }
        }
        EXPECT_LE(std::abs(c), 1e-8 * scale);
    }
}

}

TEST(BetaSystem, OnePuncture)
{
    const PunctureSet ps(make_lattice(1.0, cplx(0.0, 1.0)), {cplx(0.4, 0.2)});
    for (cplx beta : {cplx(0.0, 0.0), cplx(3.0, -1.0)}) {
        const CMatrix m = beta_system(ps, beta);
        ASSERT_EQ(m.rows(), 1);
        EXPECT_EQ(m(0, 0), cplx(1.0, 0.0));
    }
    const auto poly = beta_polynomial(ps);
    ASSERT_EQ(poly.size(), 1u);
    EXPECT_LE(std::abs(poly[0] - 1.0), 1e-12);
    EXPECT_TRUE(beta_roots(ps).empty());
}

TEST(BetaSystem, AffineInBeta)
{
    gen::Rng rng(61);
    const auto lat = rng.lattice();
    const auto ps = rng.punctures(lat, 4);
    const CMatrix m0 = beta_system(ps, 0.0);
    const CMatrix m1 = beta_system(ps, 1.0);
    const cplx beta(-0.7, 2.3);
    EXPECT_LE((beta_system(ps, beta) - (m0 + beta * (m1 - m0))).norm(), 1e-12 * m0.norm());
    // At beta = 0 the condition rows hold only zeta differences.
    EXPECT_LE(rel(m0(0, 1), -zeta(lat, ps[0] - ps[1])), 1e-12);
    EXPECT_LE(rel(m0(0, 2), zeta(lat, ps[1] - ps[2]) - zeta(lat, ps[0] - ps[2])), 1e-12);
    EXPECT_EQ(m0.row(3), CVector::Ones(4).transpose());
    EXPECT_THROW((void)beta_system(ps, 0.0, 4), Error);
}

TEST(BetaPolynomial, TwoPuncturesByHand)
{
    // a1 + a2 = 0; subtracting the two conditions gives 2 beta a1 = zeta(d) + zeta(-d) = 0.
    const auto lat = make_lattice(1.0, cplx(0.2, 1.1));
    const PunctureSet ps(lat, {cplx(0.1, 0.05), cplx(0.45, 0.3)});
    const auto poly = beta_polynomial(ps);
    ASSERT_EQ(poly.size(), 2u);
    EXPECT_LE(std::abs(poly[0]), 1e-10 * std::abs(poly[1]));
    const auto roots = beta_roots(ps);
    ASSERT_EQ(roots.size(), 1u);
    EXPECT_LE(std::abs(roots[0].beta), 1e-10);
    EXPECT_LE(std::abs(roots[0].a(0) - 1.0), 1e-10);
    EXPECT_LE(std::abs(roots[0].a(1) + 1.0), 1e-10);
    EXPECT_LE(roots[0].residual, 1e-10);
    check_invariants(ps, roots[0]);
}

TEST(BetaPolynomial, ThreePuncturesAgainstLatticeSumDeterminant)
{
    const cplx e1 = 1.0, e2(0.0, 1.0);
    const auto lat = make_lattice(e1, e2);
    const std::vector<cplx> p = {cplx(0.1, 0.0), cplx(0.37, 0.12), cplx(0.61, 0.55)};
    const PunctureSet ps(lat, p);
    auto z = [&](int k, int l) { return k == l ? cplx(0.0, 0.0) : oracle::zeta_sum(e1, e2, p[k] - p[l]); };
    // Condition k as a row: beta delta_kl + z(k, l); rows (c2 - c1), (c3 - c1), (1, 1, 1).
    auto det = [&](cplx beta) {
        cplx m[3][3];
        for (int r = 0; r < 2; ++r) {
            for (int l = 0; l < 3; ++l) {
                m[r][l] = (l == r + 1 ? beta : 0.0) + z(r + 1, l) - ((l == 0 ? beta : 0.0) + z(0, l));
            }
        }
        for (int l = 0; l < 3; ++l) {
            m[2][l] = 1.0;
        }
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const auto poly = beta_polynomial(ps);
    ASSERT_EQ(poly.size(), 3u);
    for (cplx beta : {cplx(0.0, 0.0), cplx(1.0, 0.5), cplx(-2.0, 3.0), cplx(0.96, 1.65)}) {
        EXPECT_LE(std::abs(horner(poly, beta) - det(beta)), 1e-9 * std::max(1.0, std::abs(det(beta))));
    }
    const auto roots = beta_roots(ps);
    ASSERT_EQ(roots.size(), 2u);
    for (const auto &br : roots) {
        EXPECT_LE(std::abs(det(br.beta)), 1e-8 * std::abs(poly[2]) * std::max(1.0, std::norm(br.beta)));
        check_invariants(ps, br);
    }
    // Frozen values, cross-checked against the alpha -> 0 limits of the spectral curve.
    EXPECT_LE(std::abs(roots[0].beta - cplx(-0.959704, -1.64613)), 1e-5);
    EXPECT_LE(std::abs(roots[1].beta - cplx(0.959704, 1.64613)), 1e-5);
}

TEST(BetaRoots, CountInvariantsAndPivotIndependence)
{
    gen::Rng rng(62);
    for (int inst = 0; inst < 25; ++inst) {
        const auto lat = rng.lattice();
        const auto ps = rng.punctures(lat, static_cast<std::size_t>(rng.integer(2, 6)));
        const auto roots = beta_roots(ps);
        ASSERT_EQ(roots.size(), ps.size() - 1);
        for (const auto &br : roots) {
            check_invariants(ps, br);
            EXPECT_EQ(br.multiplicity, 1u);
            EXPECT_EQ(br.null_dim, 1);
        }
        const auto base = betas_of(roots);
        double scale = 1.0;
        for (const cplx b : base) {
            scale = std::max(scale, std::abs(b));
        }
        for (std::size_t pivot = 1; pivot < ps.size(); ++pivot) {
            EXPECT_LE(multiset_distance(base, betas_of(beta_roots(ps, pivot))), 1e-8 * scale);
        }
    }
}

TEST(BetaPolynomial, LeadingCoefficientIsPunctureCount)
{
    // The beta part of M is (e_k - e_pivot) rows over a row of ones, whose determinant is +-N.
    gen::Rng rng(66);
    for (int inst = 0; inst < 10; ++inst) {
        const auto lat = rng.lattice();
        const auto ps = rng.punctures(lat, static_cast<std::size_t>(rng.integer(1, 6)));
        const auto poly = beta_polynomial(ps, static_cast<std::size_t>(inst) % ps.size());
        ASSERT_EQ(poly.size(), ps.size());
        EXPECT_NEAR(std::abs(poly.back()), static_cast<double>(ps.size()), 1e-9 * static_cast<double>(ps.size()));
    }
}

TEST(DegeneratePsi, MultipliersAndResidues)
{
    gen::Rng rng(63);
    for (int inst = 0; inst < 10; ++inst) {
        const auto lat = rng.lattice();
        const auto ps = rng.punctures(lat, static_cast<std::size_t>(rng.integer(2, 5)));
        for (const auto &br : beta_roots(ps)) {
            const auto psi = build_degenerate_psi(ps, br);
            const cplx n1 = std::exp(br.beta * lat.e1());
            const cplx n2 = std::exp(br.beta * lat.e2());
            for (int k = 0; k < 4; ++k) {
                const cplx z = rng.away_from(ps);
                EXPECT_LE(rel(psi(z + lat.e1()) / psi(z), n1), 1e-9);
                EXPECT_LE(rel(psi(z + lat.e2()) / psi(z), n2), 1e-9);
            }
            for (std::size_t l = 0; l < ps.size(); ++l) {
                const auto b = verify_boundary(ps, psi, l);
                const cplx expected = br.a(static_cast<Eigen::Index>(l)) * std::exp(br.beta * ps[l]);
                if (std::abs(expected) > 1e-6) {
                    EXPECT_LE(rel(b.residue, expected), 1e-7);
                    EXPECT_LE(b.ratio(), 1e-7);
                }
            }
            EXPECT_THROW((void)psi(ps[0]), Error);
        }
    }
}

TEST(DegeneratePsi, TwoPuncturesGiveEllipticFunction)
{
    const auto lat = make_lattice(1.0, cplx(0.2, 1.1));
    const PunctureSet ps(lat, {cplx(0.1, 0.05), cplx(0.45, 0.3)});
    const auto psi = build_degenerate_psi(ps, beta_roots(ps).front());
    gen::Rng rng(64);
    for (int k = 0; k < 20; ++k) {
        const cplx z = rng.away_from(ps);
        EXPECT_LE(rel(psi(z + lat.e1()), psi(z)), 1e-9);
        EXPECT_LE(rel(psi(z - 2.0 * lat.e2()), psi(z)), 1e-9);
    }
}

TEST(DegeneratePsi, ZeroSumCoefficientsArePeriodic)
{
    gen::Rng rng(65);
    for (int inst = 0; inst < 20; ++inst) {
        const auto lat = rng.lattice();
        const auto ps = rng.punctures(lat, static_cast<std::size_t>(rng.integer(2, 6)));
        CVector a(static_cast<Eigen::Index>(ps.size()));
        for (Eigen::Index l = 0; l < a.size(); ++l) {
            a(l) = rng.box(1.0);
        }
        a.array() -= a.mean();
        const auto f = Eigenfunction::degenerate(ps, 0.0, rng.box(1.0), a);
        for (int k = 0; k < 5; ++k) {
            const cplx z = rng.away_from(ps);
            const cplx v = f(z);
            if (std::abs(v) < 1e-3) {
                continue;
            }
            ASSERT_LE(rel(f(z + lat.e1()), v), 1e-9);
            ASSERT_LE(rel(f(z + lat.e2()), v), 1e-9);
        }
    }
}
