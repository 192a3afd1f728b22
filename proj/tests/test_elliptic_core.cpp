#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include <ellspec/ellspec.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ellspec;

namespace
{

constexpr double pi = std::numbers::pi;

double rel(cplx a, cplx b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Lattice sums evaluated once by oracle::eta_sum / wp_sum / zeta_sum (box Richardson, M = 20..160).
const cplx skew_e2{0.2, 1.1};
const cplx skew_eta1{3.2657508731286886, -0.074949456218710339};
const cplx skew_eta2{0.73559457646825477, -2.7058492380084069};
const cplx skew_zeta_at{1.5141016135071239, -1.6065343999314534};   // z = 0.3 + 0.4i
const cplx skew_wp_at{-2.3044380630847252, -2.3345965528371031};    // z = 0.3 + 0.4i
const cplx rhombic_eta1{1.7182457516349408, 0.0};                   // lattice (2, 1 + 2i)
const cplx rhombic_eta2{0.85912287581273372, -1.4233469019689531};
const cplx rhombic_wp_at{2.0940275605186036, -0.48505351650802453}; // z = 0.7 + 0.1i
const cplx square_wp_half{6.8751858179818024, 0.0};

}

TEST(MakeLattice, SquareLatticeQuasiPeriods)
{
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0), 1e-12);
    EXPECT_NEAR(std::abs(lat.eta1() - pi), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(lat.eta2() - cplx(0.0, -pi)), 0.0, 1e-12);
    EXPECT_LE(std::abs(lat.eta1() * lat.e2() - lat.eta2() * lat.e1() - two_pi_i), 1e-12 * 2.0 * pi);
}

TEST(MakeLattice, QuasiPeriodsMatchLatticeSumOracle)
{
    const auto a = make_lattice(1.0, skew_e2);
    EXPECT_LE(rel(a.eta1(), skew_eta1), 1e-10);
    EXPECT_LE(rel(a.eta2(), skew_eta2), 1e-10);
    const auto b = make_lattice(2.0, cplx(1.0, 2.0));
    EXPECT_LE(std::abs(b.eta1() - rhombic_eta1), 1e-10);
    EXPECT_LE(rel(b.eta2(), rhombic_eta2), 1e-10);
}

TEST(MakeLattice, LiveOracleOnRandomLattices)
{
    gen::Rng rng(11);
    for (int k = 0; k < 3; ++k) {
        const auto lat = rng.lattice();
        EXPECT_LE(rel(lat.eta1(), oracle::eta_sum(lat.e1(), lat.e2(), lat.e1())), 1e-9);
        EXPECT_LE(rel(lat.eta2(), oracle::eta_sum(lat.e1(), lat.e2(), lat.e2())), 1e-9);
    }
}

TEST(MakeLattice, HomogeneityOfQuasiPeriods)
{
    const auto lat = make_lattice(2.0, cplx(0.0, 2.0));
    EXPECT_NEAR(std::abs(lat.eta1() - pi / 2.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(lat.eta2() - cplx(0.0, -pi / 2.0)), 0.0, 1e-12);
}

TEST(MakeLattice, NegativeOrientationKeepsUserGenerators)
{
    const auto lat = make_lattice(1.0, cplx(0.0, -1.0));
    EXPECT_EQ(lat.orientation(), -1);
    EXPECT_EQ(lat.e2(), cplx(0.0, -1.0));
    EXPECT_NEAR(std::abs(lat.eta2() - cplx(0.0, pi)), 0.0, 1e-12);
    // eta2 is still 2 zeta(e2 / 2) for the generator the caller supplied.
    EXPECT_LE(rel(lat.eta2(), 2.0 * zeta(lat, 0.5 * lat.e2())), 1e-13);
    EXPECT_LE(std::abs(lat.eta1() * lat.e2() - lat.eta2() * lat.e1() + two_pi_i), 1e-12);
}

TEST(MakeLattice, RejectsDegenerateInput)
{
    try {
        (void)make_lattice(1.0, 2.0);
        FAIL() << "expected DegenerateLattice";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateLattice);
    }
    EXPECT_THROW((void)make_lattice(0.0, cplx(0.0, 1.0)), Error);
    EXPECT_THROW((void)make_lattice(cplx(1.0, 1.0), cplx(2.0, 2.0)), Error);
}

TEST(MakeLattice, RejectsBadTolerance)
{
    for (double tol : {0.0, -1e-8, 1e-3}) {
        try {
            (void)make_lattice(1.0, cplx(0.0, 1.0), tol);
            FAIL() << "expected BadTolerance for " << tol;
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::BadTolerance);
        }
    }
    EXPECT_NO_THROW((void)make_lattice(1.0, cplx(0.0, 1.0), 1e-4));
}

TEST(MakeLattice, SkewBasisIsReducedForEvaluation)
{
    const auto lat = make_lattice(1.0, cplx(7.3, 0.05));
    EXPECT_LE(std::abs(lat.reduced_tau().real()), 0.5 + 1e-12);
    EXPECT_GE(std::abs(lat.reduced_tau()), 1.0 - 1e-12);
    EXPECT_LE(lat.legendre_defect(), 1e-10 * 2.0 * pi);
    // sigma itself overflows this far out on so thin a cell; zeta does not.
    const cplx z(0.31, 0.017);
    EXPECT_LE(std::abs(zeta(lat, z + lat.e2()) - zeta(lat, z) - lat.eta2()), 1e-9 * std::abs(lat.eta2()));
    EXPECT_LE(std::abs(zeta(lat, z - lat.e1()) - zeta(lat, z) + lat.eta1()), 1e-9 * std::abs(lat.eta1()));
}

TEST(Sigma, VanishesExactlyAtOrigin)
{
    gen::Rng rng(3);
    for (int k = 0; k < 5; ++k) {
        EXPECT_EQ(sigma(rng.lattice(), cplx(0.0, 0.0)), cplx(0.0, 0.0));
    }
}

TEST(Sigma, IsOdd)
{
    gen::Rng rng(4);
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    for (int k = 0; k < 20; ++k) {
        const cplx z = rng.box(1.5);
        EXPECT_LE(std::abs(sigma(lat, -z) + sigma(lat, z)), 1e-13 * std::max(1.0, std::abs(sigma(lat, z))));
    }
}

TEST(Sigma, QuasiPeriodicityForGeneratorsAndSums)
{
    gen::Rng rng(5);
    for (int l = 0; l < 4; ++l) {
        const auto lat = rng.lattice();
        const cplx shifts[] = {lat.e1(), lat.e2(), lat.e1() + lat.e2()};
        const cplx etas[] = {lat.eta1(), lat.eta2(), lat.eta1() + lat.eta2()};
        const double signs[] = {-1.0, -1.0, -1.0};
        for (int k = 0; k < 50; ++k) {
            const cplx z = rng.off_lattice(lat);
            for (int j = 0; j < 3; ++j) {
                const cplx lhs = sigma(lat, z + shifts[j]);
                const cplx rhs = signs[j] * sigma(lat, z) * std::exp(etas[j] * (z + 0.5 * shifts[j]));
                ASSERT_LE(rel(lhs, rhs), 1e-9) << "lattice " << l << " shift " << j << " z " << z;
            }
        }
    }
}

TEST(Sigma, IteratedShiftsUpToThree)
{
    gen::Rng rng(6);
    const auto lat = make_lattice(1.0, skew_e2);
    for (int k = 0; k < 10; ++k) {
        const cplx z = rng.off_lattice(lat);
        for (int m = -3; m <= 3; ++m) {
            for (int n = -3; n <= 3; ++n) {
                const cplx w = static_cast<double>(m) * lat.e1() + static_cast<double>(n) * lat.e2();
                const cplx eta = static_cast<double>(m) * lat.eta1() + static_cast<double>(n) * lat.eta2();
                const double sign = ((m + n + m * n) % 2 == 0) ? 1.0 : -1.0;
                const cplx rhs = sign * sigma(lat, z) * std::exp(eta * (z + 0.5 * w));
                ASSERT_LE(rel(sigma(lat, z + w), rhs), 1e-9) << m << "," << n;
            }
        }
    }
}

TEST(Sigma, Homogeneity)
{
    gen::Rng rng(7);
    const auto lat = make_lattice(1.0, skew_e2);
    for (int k = 0; k < 10; ++k) {
        const cplx c = std::polar(rng.uniform(0.3, 3.0), rng.uniform(-pi, pi));
        const auto scaled = make_lattice(c * lat.e1(), c * lat.e2());
        const cplx z = rng.off_lattice(lat);
        EXPECT_LE(rel(sigma(scaled, c * z), c * sigma(lat, z)), 1e-11);
        EXPECT_LE(rel(zeta(scaled, c * z), zeta(lat, z) / c), 1e-11);
    }
}

TEST(Zeta, QuasiPeriodicity)
{
    gen::Rng rng(8);
    for (int l = 0; l < 4; ++l) {
        const auto lat = rng.lattice();
        for (int k = 0; k < 50; ++k) {
            const cplx z = rng.off_lattice(lat);
            ASSERT_LE(std::abs(zeta(lat, z + lat.e2()) - zeta(lat, z) - lat.eta2()), 1e-9 * std::abs(lat.eta2()));
            ASSERT_LE(std::abs(zeta(lat, z + lat.e1()) - zeta(lat, z) - lat.eta1()), 1e-9 * std::abs(lat.eta1()));
        }
    }
}

TEST(Zeta, OddAndPrincipalPart)
{
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    gen::Rng rng(9);
    for (int k = 0; k < 20; ++k) {
        const cplx z = rng.off_lattice(lat);
        EXPECT_LE(std::abs(zeta(lat, -z) + zeta(lat, z)), 1e-12 * std::abs(zeta(lat, z)));
    }
    for (int k = 0; k < 8; ++k) {
        const cplx z = std::polar(1e-3, 2.0 * pi * k / 8.0);
        EXPECT_LE(std::abs(z * zeta(lat, z) - 1.0), 1e-5);
    }
}

TEST(Zeta, MatchesLatticeSumOracle)
{
    const auto lat = make_lattice(1.0, skew_e2);
    EXPECT_LE(rel(zeta(lat, cplx(0.3, 0.4)), skew_zeta_at), 1e-10);
    const auto sq = make_lattice(1.0, cplx(0.0, 1.0));
    EXPECT_LE(rel(zeta(sq, cplx(0.25, 0.25)), oracle::zeta_sum(1.0, cplx(0.0, 1.0), cplx(0.25, 0.25))), 1e-10);
}

TEST(Zeta, IsLogarithmicDerivativeOfSigma)
{
    gen::Rng rng(10);
    for (int l = 0; l < 3; ++l) {
        const auto lat = rng.lattice();
        const double h = 1e-5 * std::abs(lat.e1());
        for (int k = 0; k < 10; ++k) {
            const cplx z = rng.off_lattice(lat, 0.1);
            const cplx fd = (std::log(sigma(lat, z + h) / sigma(lat, z - h))) / (2.0 * h);
            EXPECT_LE(std::abs(fd - zeta(lat, z)), 1e-6 * std::max(1.0, std::abs(zeta(lat, z))));
        }
    }
}

TEST(Zeta, PoleExclusion)
{
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    for (cplx z : {cplx(0.0, 0.0), cplx(1.0, 1.0), cplx(-2.0, 3.0) + 1e-10}) {
        try {
            (void)zeta(lat, z);
            FAIL() << "expected PoleAtLatticePoint at " << z;
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::PoleAtLatticePoint);
        }
    }
    EXPECT_NO_THROW((void)zeta(lat, cplx(1e-6, 0.0)));
}

TEST(WeierstrassP, PeriodicEvenAndPrincipalPart)
{
    gen::Rng rng(12);
    for (int l = 0; l < 3; ++l) {
        const auto lat = rng.lattice();
        for (int k = 0; k < 20; ++k) {
            const cplx z = rng.off_lattice(lat);
            const cplx p = weierstrass_p(lat, z);
            EXPECT_LE(rel(weierstrass_p(lat, z + lat.e1()), p), 1e-9);
            EXPECT_LE(rel(weierstrass_p(lat, z - lat.e2()), p), 1e-9);
            EXPECT_LE(rel(weierstrass_p(lat, -z), p), 1e-11);
        }
    }
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    const cplx z(1e-3, 5e-4);
    EXPECT_LE(std::abs(z * z * weierstrass_p(lat, z) - 1.0), 1e-5);
}

TEST(WeierstrassP, IsMinusDerivativeOfZeta)
{
    gen::Rng rng(13);
    const auto lat = make_lattice(1.0, skew_e2);
    const double h = 1e-5;
    for (int k = 0; k < 20; ++k) {
        const cplx z = rng.off_lattice(lat, 0.1);
        const cplx fd = -(zeta(lat, z + h) - zeta(lat, z - h)) / (2.0 * h);
        EXPECT_LE(std::abs(fd - weierstrass_p(lat, z)), 1e-6 * std::max(1.0, std::abs(weierstrass_p(lat, z))));
    }
}

TEST(WeierstrassP, MatchesLatticeSumOracle)
{
    EXPECT_LE(rel(weierstrass_p(make_lattice(1.0, skew_e2), cplx(0.3, 0.4)), skew_wp_at), 1e-10);
    EXPECT_LE(rel(weierstrass_p(make_lattice(2.0, cplx(1.0, 2.0)), cplx(0.7, 0.1)), rhombic_wp_at), 1e-10);
    EXPECT_LE(rel(weierstrass_p(make_lattice(1.0, cplx(0.0, 1.0)), 0.5), square_wp_half), 1e-11);
}

TEST(ReduceModLattice, DocumentedCases)
{
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    auto r = reduce_mod_lattice(lat, cplx(0.25, 0.25));
    EXPECT_NEAR(std::abs(r.z0 - cplx(0.25, 0.25)), 0.0, 1e-15);
    EXPECT_EQ(r.m, 0);
    EXPECT_EQ(r.n, 0);
    r = reduce_mod_lattice(lat, cplx(1.25, 2.25));
    EXPECT_NEAR(std::abs(r.z0 - cplx(0.25, 0.25)), 0.0, 1e-15);
    EXPECT_EQ(r.m, 1);
    EXPECT_EQ(r.n, 2);
    r = reduce_mod_lattice(lat, cplx(-0.1, 0.0));
    EXPECT_NEAR(std::abs(r.z0 - cplx(0.9, 0.0)), 0.0, 1e-15);
    EXPECT_EQ(r.m, -1);
    EXPECT_EQ(r.n, 0);
}

TEST(ReduceModLattice, ReconstructsInputInHalfOpenCell)
{
    gen::Rng rng(14);
    for (int l = 0; l < 5; ++l) {
        const auto lat = rng.lattice();
        for (int k = 0; k < 50; ++k) {
            const cplx z = rng.box(20.0);
            const auto r = lat.reduce(z);
            const cplx back = r.z0 + static_cast<double>(r.m) * lat.e1() + static_cast<double>(r.n) * lat.e2();
            EXPECT_LE(std::abs(back - z), 1e-12 * std::max(1.0, std::abs(z)));
            // coordinates of z0 in the user basis lie in [0, 1)
            auto cross = [](cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); };
            const double det = cross(lat.e1(), lat.e2());
            const double s = cross(r.z0, lat.e2()) / det;
            const double t = cross(lat.e1(), r.z0) / det;
            EXPECT_GE(s, -1e-12);
            EXPECT_LT(s, 1.0);
            EXPECT_GE(t, -1e-12);
            EXPECT_LT(t, 1.0);
        }
    }
}

TEST(TorusPoint, EqualityModuloLattice)
{
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    const TorusPoint a{cplx(0.3, 0.4), lat};
    const TorusPoint b{cplx(2.3, -1.6), lat};
    const TorusPoint c{cplx(0.3, 0.41), lat};
    EXPECT_TRUE(a == b);
    EXPECT_FALSE(a == c);
    EXPECT_NEAR(std::abs(b.canonical() - cplx(0.3, 0.4)), 0.0, 1e-14);
}

TEST(Lattice, LegendreRelationOnRandomLattices)
{
    gen::Rng rng(15);
    for (int k = 0; k < 25; ++k) {
        const auto lat = rng.lattice();
        const cplx lhs = lat.eta1() * lat.e2() - lat.eta2() * lat.e1();
        EXPECT_LE(std::abs(lhs - static_cast<double>(lat.orientation()) * two_pi_i), 1e-10 * 2.0 * pi);
    }
}
