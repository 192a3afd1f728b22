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

double rel(cplx a, cplx b)
{
    return std::abs(a - b) / std::abs(b);
}

// Phi straight from its definition, without reducing alpha or z.
cplx phi_by_definition(const Lattice &lat, cplx z, cplx alpha)
{
    return sigma(lat, alpha - z) / (sigma(lat, alpha) * sigma(lat, z)) * std::exp(zeta(lat, alpha) * z);
}

// Distance of x from 2 pi i Z.
double mod_two_pi_i(cplx x)
{
    const double k = std::round(x.imag() / (2.0 * std::numbers::pi));
    return std::abs(x - cplx(0.0, 2.0 * std::numbers::pi * k));
}

}

TEST(Phi, SimplePoleWithUnitResidue)
{
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    for (cplx alpha : {cplx(0.3, 0.2), cplx(0.5, 0.0), cplx(-0.41, 0.77)}) {
        for (int k = 0; k < 8; ++k) {
            const cplx z = std::polar(1e-4, 2.0 * std::numbers::pi * k / 8.0 + 0.1);
            EXPECT_LE(std::abs(z * phi(lat, z, alpha) - 1.0), 1e-6);
        }
    }
}

TEST(Phi, AgreesWithDefinition)
{
    gen::Rng rng(21);
    for (int l = 0; l < 3; ++l) {
        const auto lat = rng.lattice();
        for (int k = 0; k < 20; ++k) {
            const cplx z = rng.off_lattice(lat, 0.1);
            const cplx alpha = rng.off_lattice(lat, 0.1);
            EXPECT_LE(rel(phi(lat, z, alpha), phi_by_definition(lat, z, alpha)), 1e-10);
        }
    }
}

TEST(Phi, PeriodicInAlpha)
{
    gen::Rng rng(22);
    for (int l = 0; l < 3; ++l) {
        const auto lat = rng.lattice();
        for (int k = 0; k < 50; ++k) {
            const cplx z = rng.off_lattice(lat);
            const cplx alpha = rng.off_lattice(lat);
            const cplx base = phi(lat, z, alpha);
            ASSERT_LE(rel(phi(lat, z, alpha + lat.e1()), base), 1e-9);
            ASSERT_LE(rel(phi(lat, z, alpha - lat.e2()), base), 1e-9);
            ASSERT_LE(rel(phi(lat, z, alpha + 2.0 * lat.e1() + 3.0 * lat.e2()), base), 1e-9);
        }
    }
}

TEST(Phi, QuasiPeriodicInZ)
{
    gen::Rng rng(23);
    for (int l = 0; l < 3; ++l) {
        const auto lat = rng.lattice();
        for (int k = 0; k < 50; ++k) {
            const cplx z = rng.off_lattice(lat);
            const cplx alpha = rng.off_lattice(lat);
            const cplx za = zeta(lat, alpha);
            const cplx f1 = std::exp(za * lat.e1() - lat.eta1() * alpha);
            const cplx f2 = std::exp(za * lat.e2() - lat.eta2() * alpha);
            ASSERT_LE(rel(phi(lat, z + lat.e1(), alpha), phi(lat, z, alpha) * f1), 1e-9);
            ASSERT_LE(rel(phi(lat, z + lat.e2(), alpha), phi(lat, z, alpha) * f2), 1e-9);
            // Same factor from the definition through sigma and zeta at the unreduced alpha.
            ASSERT_LE(rel(phi_by_definition(lat, z + lat.e1(), alpha), phi_by_definition(lat, z, alpha) * f1), 1e-9);
        }
    }
}

TEST(Phi, ErrorsOnLattice)
{
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    try {
        (void)phi(lat, cplx(0.2, 0.1), cplx(1.0, 1.0));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::AlphaOnLattice);
    }
    try {
        (void)phi(lat, cplx(2.0, 0.0), cplx(0.3, 0.1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::PoleAtLatticePoint);
    }
    EXPECT_THROW((void)phi_laurent_c0(lat, cplx(0.0, 0.0)), Error);
}

TEST(PhiLaurent, ConstantTermVanishesAtDocumentedPoints)
{
    const auto sq = make_lattice(1.0, cplx(0.0, 1.0));
    const auto rh = make_lattice(2.0, cplx(1.0, 2.0));
    EXPECT_LE(std::abs(phi_laurent_c0(sq, cplx(0.3, 0.2))), 1e-8);
    EXPECT_LE(std::abs(phi_laurent_c0(sq, cplx(0.5, 0.0))), 1e-8);
    EXPECT_LE(std::abs(phi_laurent_c0(rh, cplx(0.7, 0.1))), 1e-8);
}

TEST(PhiLaurent, TaylorOracleAgrees)
{
    const auto sq = make_lattice(1.0, cplx(0.0, 1.0));
    const auto rh = make_lattice(2.0, cplx(1.0, 2.0));
    const std::pair<Lattice, cplx> cases[] = {{sq, cplx(0.3, 0.2)}, {sq, cplx(0.5, 0.0)}, {rh, cplx(0.7, 0.1)}};
    for (const auto &[lat, alpha] : cases) {
        const PhiEvaluator ev(lat, alpha);
        const cplx taylor = oracle::laurent_c0_taylor([&](cplx h) { return ev(h) - 1.0 / h; }, 1e-2);
        EXPECT_LE(std::abs(taylor), 1e-8);
        EXPECT_LE(std::abs(taylor - phi_laurent_c0(lat, alpha)), 1e-8);
    }
}

TEST(PhiLaurent, RandomAlphas)
{
    gen::Rng rng(24);
    for (int l = 0; l < 2; ++l) {
        const auto lat = rng.lattice();
        for (int k = 0; k < 20; ++k) {
            EXPECT_LE(std::abs(phi_laurent_c0(lat, rng.off_lattice(lat))), 1e-8);
        }
    }
}

TEST(PsiKernel, ReducesToPhi)
{
    const auto lat = make_lattice(1.0, cplx(0.2, 1.1));
    const PsiKernel k{PhiEvaluator(lat, cplx(0.3, 0.4)), cplx(0.0, 0.0), cplx(0.0, 0.0)};
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.7, 0.3), cplx(2.1, -1.4)}) {
        EXPECT_LE(rel(psi_kernel_eval(k, z), phi(lat, z, cplx(0.3, 0.4))), 1e-14);
    }
}

TEST(PsiKernel, FloquetMultipliers)
{
    gen::Rng rng(25);
    for (int l = 0; l < 3; ++l) {
        const auto lat = rng.lattice();
        for (int k = 0; k < 50; ++k) {
            const cplx alpha = rng.off_lattice(lat);
            const cplx mu = rng.box(2.0);
            const cplx z0 = rng.in_cell(lat);
            const PsiKernel ker{PhiEvaluator(lat, alpha), mu, z0};
            cplx z = rng.in_cell(lat);
            while (lat.distance_to_lattice(z - z0) < 0.05 * lat.min_generator_length()) {
                z = rng.in_cell(lat);
            }
            const cplx x1 = (mu + zeta(lat, alpha)) * lat.e1() - alpha * lat.eta1();
            const cplx x2 = (mu + zeta(lat, alpha)) * lat.e2() - alpha * lat.eta2();
            ASSERT_LE(rel(ker(z + lat.e1()) / ker(z), std::exp(x1)), 1e-9);
            ASSERT_LE(rel(ker(z + lat.e2()) / ker(z), std::exp(x2)), 1e-9);
            ASSERT_LE(mod_two_pi_i(ker.multiplier_exponent(lat.e1(), lat.eta1()) - x1), 1e-9 * std::max(1.0, std::abs(x1)));
        }
    }
}

TEST(PsiKernel, ResidueAtPole)
{
    gen::Rng rng(26);
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    for (int k = 0; k < 10; ++k) {
        const PsiKernel ker{PhiEvaluator(lat, rng.off_lattice(lat)), rng.box(2.0), rng.in_cell(lat)};
        const auto s = sample_circle(ker, ker.z0, 1e-3);
        EXPECT_LE(std::abs(s.residue() - std::exp(ker.mu * ker.z0)), 1e-6 * std::abs(std::exp(ker.mu * ker.z0)));
    }
}

TEST(PsiKernel, LogarithmSurvivesOverflow)
{
    const auto lat = make_lattice(1.0, cplx(0.0, 1.0));
    const PsiKernel ker{PhiEvaluator(lat, cplx(0.3, 0.2)), cplx(900.0, 0.0), cplx(0.0, 0.0)};
    const cplx z(0.8, 0.35);
    EXPECT_FALSE(std::isfinite(std::abs(ker(z))));
    const cplx lz = ker.log_value(z);
    EXPECT_TRUE(std::isfinite(lz.real()));
    const cplx step = ker.log_value(z + lat.e1()) - lz;
    EXPECT_LE(mod_two_pi_i(step - ker.multiplier_exponent(lat.e1(), lat.eta1())), 1e-9 * std::abs(step));
}
