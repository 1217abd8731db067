// SPDX-License-Identifier: MIT
#include "hgforge/monodromy.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

using oracle::cmat;
using oracle::cx;
using oracle::real;

namespace
{

hgforge::exponent_set<real> sample(int m, std::uint64_t seed)
{
    return hgforge::sample_parameters<real>(m, seed, hgforge::sample_mode::real01);
}

// Number of eigenvalues of `m` within `tol` of `target`.
int multiplicity(const cmat &m, cx target, real tol)
{
    Eigen::ComplexEigenSolver<cmat> es(m);
    int n = 0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        n += std::abs(es.eigenvalues()(k) - target) < tol ? 1 : 0;
    }
    return n;
}

cx e2(cx x)
{
    return std::exp(cx(0, 2 * hgforge::pi_v<real>) * x);
}

} // namespace

TEST_CASE("local monodromies have the expected spectra and determinants", "[monodromy]")
{
    for (int m = 1; m <= 6; ++m) {
        const auto e = sample(m, 100 + static_cast<std::uint64_t>(m));
        const auto t = hgforge::build_monodromy(e);
        INFO("m=" << m);
        for (int i = 0; i < m; ++i) {
            CHECK(multiplicity(t.M0, e2(e.b[i]), 1e-9L) == 1);
            CHECK(multiplicity(t.Minf, e2(-e.c[i]), 1e-9L) == 1);
        }
        if (m > 1) {
            CHECK(multiplicity(t.M1, e2(e.a2), 1e-7L) == m - 1);
        }
        cx db(1), dc(1);
        for (int i = 0; i < m; ++i) {
            db *= e2(e.b[i]);
            dc *= e2(-e.c[i]);
        }
        CHECK(std::abs(oracle::cofactor_det(t.M0) - db) < 1e-12L);
        CHECK(std::abs(oracle::cofactor_det(t.Minf) - dc) < 1e-12L);
        CHECK(std::abs(oracle::cofactor_det(t.M1) - e2(e.a1 + real(m - 1) * e.a2)) < 1e-12L);
        CHECK(hgforge::rel_residual(cmat(t.Minf * t.M1 * t.M0), hgforge::identity<real>(e.size())) < 1e-12L);
        CHECK(hgforge::rel_residual(hgforge::m0_inverse_closed_form(e), oracle::gauss_jordan_inverse(t.M0)) < 1e-11L);
    }
}

TEST_CASE("monodromy report on complex data", "[monodromy]")
{
    for (int m = 2; m <= 5; ++m) {
        const auto e = hgforge::sample_parameters<real>(m, 7, hgforge::sample_mode::complex);
        const auto t = hgforge::build_monodromy(e);
        const auto r = hgforge::check_monodromy(e, t);
        INFO("m=" << m);
        // Complex exponents give entries up to e^{2 pi Im}; the error tracks the largest entry.
        CHECK(hgforge::product_residual(cmat(t.Minf * t.M1), t.M0, hgforge::identity<real>(e.size())) < oracle::rounding_bound(t));
        CHECK(r.eig_p < 1e-11L);
        CHECK(r.eig_q < 1e-11L);
        CHECK(r.eig_r < 1e-11L);
        CHECK(r.sum_p < 1e-11L);
        CHECK(r.sum_q < 1e-11L);
        CHECK(r.m1_rank == 1);
        CHECK(r.p_from_q < 1e-10L);
        CHECK(r.p_from_q_cauchy < 1e-10L);
        CHECK(r.pinv_q < 1e-10L);
    }
}

TEST_CASE("invariant hermitian form", "[monodromy]")
{
    for (int m = 1; m <= 5; ++m) {
        const auto e = sample(m, 110 + static_cast<std::uint64_t>(m));
        const auto mt = hgforge::build_monodromy(e);
        const auto f = hgforge::hermitian_form_trig(e, mt);
        INFO("m=" << m);
        CHECK(f.hermitian_residual < 1e-12L);
        CHECK(f.q_residual < 1e-11L);
        for (const cmat *mx : {&mt.M0, &mt.M1, &mt.Minf}) {
            // Direct check: M^H G M = G.
            CHECK(hgforge::rel_residual(cmat(mx->adjoint() * f.gram * *mx), f.gram) < 1e-10L);
        }
        CHECK(hgforge::invariant_form_dimension(mt).dimension == 1);
    }
}

TEST_CASE("definiteness follows the interlacing columns", "[monodromy]")
{
    using hgforge::positivity;
    for (int m = 1; m <= 5; ++m) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            for (auto want : {positivity::column1, positivity::column2, positivity::neither}) {
                if (want == positivity::neither && m < 2) {
                    continue;
                }
                const auto e = hgforge::construct_interlaced<real>(m, seed, want);
                INFO("m=" << m << " seed=" << seed << " want=" << hgforge::to_string(want));
                REQUIRE(hgforge::check_positivity_conditions(e) == want);
                CHECK(hgforge::hermitian_form_trig(e).sig.definite() == (want != positivity::neither));
            }
        }
    }
}

TEST_CASE("loops around zero and the connection quotient", "[monodromy]")
{
    for (int m = 1; m <= 3; ++m) {
        const auto e = hgforge::with_a2_zero(sample(m, 120 + static_cast<std::uint64_t>(m)));
        CHECK(hgforge::frobenius_loop_residual(e) < 1e-8L);
        if (m > 1) {
            CHECK(hgforge::rank1_quotient_residual(e) < 1e-8L);
        }
    }
}
