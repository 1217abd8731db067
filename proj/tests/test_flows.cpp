// SPDX-License-Identifier: MIT
#include "hgforge/flows.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using oracle::cmat;
using oracle::cx;
using oracle::real;
using cvec = hgforge::cvector<real>;

namespace
{

hgforge::exponent_set<real> sample(int m, std::uint64_t seed)
{
    return hgforge::sample_parameters<real>(m, seed, seed % 2 ? hgforge::sample_mode::complex : hgforge::sample_mode::real01);
}

} // namespace

TEST_CASE("X and Y have zero row sums and the stated off-diagonal entries", "[flows]")
{
    const auto e = sample(4, 2);
    const auto f = hgforge::build_flow_operators(e);
    const cvec one = hgforge::ones<real>(4);
    CHECK(hgforge::max_abs(cvec(f.X * one)) < 1e-15L);
    CHECK(hgforge::max_abs(cvec(f.Y * one)) < 1e-15L);
    CHECK(std::abs(f.X(0, 2) - real(1) / (e.b[2] - e.b[0])) < 1e-16L);
    CHECK(std::abs(f.Y(3, 1) - real(1) / (e.c[3] - e.c[1])) < 1e-16L);
}

TEST_CASE("EX and EY are matrix exponentials (Taylor oracle)", "[flows]")
{
    for (int m = 1; m <= 5; ++m) {
        const auto e = sample(m, 30 + static_cast<std::uint64_t>(m));
        const auto f = hgforge::build_flow_operators(e);
        std::mt19937_64 rng(static_cast<std::uint64_t>(m));
        for (int k = 0; k < 5; ++k) {
            const cx tau = oracle::random_cx(rng, -0.6, 0.6);
            CHECK(hgforge::rel_residual(hgforge::ex_matrix(e, tau), oracle::taylor_expm(cmat(f.X * tau))) < 1e-12L);
            CHECK(hgforge::rel_residual(hgforge::ey_matrix(e, tau), oracle::taylor_expm(cmat(f.Y * tau))) < 1e-12L);
        }
    }
}

TEST_CASE("one-parameter group laws", "[flows]")
{
    const auto e = sample(5, 7);
    const cx t1(0.2, -0.1), t2(-0.35, 0.25);
    CHECK(hgforge::rel_residual(cmat(hgforge::ex_matrix(e, t1) * hgforge::ex_matrix(e, t2)), hgforge::ex_matrix(e, t1 + t2)) < 1e-12L);
    CHECK(hgforge::rel_residual(cmat(hgforge::ey_matrix(e, t1) * hgforge::ey_matrix(e, t2)), hgforge::ey_matrix(e, t1 + t2)) < 1e-12L);
    CHECK(hgforge::ex_matrix(e, cx(0)) == hgforge::identity<real>(5));
    CHECK(hgforge::rel_residual(cmat(hgforge::ex_matrix(e, t1) * hgforge::ex_matrix(e, -t1)), hgforge::identity<real>(5)) < 1e-13L);
}

TEST_CASE("resonant tau is rejected", "[flows]")
{
    const auto e = sample(3, 2);
    CHECK_THROWS_AS(hgforge::ex_matrix(e, cx(e.b[1] - e.b[0])), hgforge::degenerate_error);
}

TEST_CASE("Z matrix, its closed-form inverse and the link to EX, EY", "[flows]")
{
    for (int m = 1; m <= 6; ++m) {
        const auto e = sample(m, 40 + static_cast<std::uint64_t>(m));
        const auto t = hgforge::build_residue_triple(e);
        const cx t1(0.11, 0.05), t2(-0.2, 0.13);
        const auto z = hgforge::z_matrix(e, t1);
        CHECK(hgforge::rel_residual(z.Z_inv, oracle::gauss_jordan_inverse(z.Z)) < 1e-10L);
        CHECK(hgforge::rel_residual(hgforge::z_matrix(e, cx(0)).Z, cmat(hgforge::invert(t.W) * t.V)) < 1e-11L);
        CHECK(hgforge::rel_residual(cmat(z.Z_inv * hgforge::z_matrix(e, t2).Z), hgforge::ex_matrix(e, t2 - t1)) < 1e-10L);
        CHECK(hgforge::rel_residual(cmat(z.Z * hgforge::z_matrix(e, t2).Z_inv), hgforge::ey_matrix(e, t2 - t1)) < 1e-10L);
    }
}

TEST_CASE("evolve moves the spectra linearly", "[flows]")
{
    const auto e = sample(4, 5);
    const cx t1(0.1, 0.02), t2(-0.07, 0.05);
    const auto s = hgforge::evolve(e, t1, t2);
    Eigen::ComplexEigenSolver<cmat> eb(s.B), ea(s.A);
    for (int i = 0; i < 4; ++i) {
        real best = 1;
        for (int k = 0; k < 4; ++k) {
            best = std::min(best, std::abs(eb.eigenvalues()(k) - (e.b[i] + e.k1 * t1)));
        }
        CHECK(best < 1e-10L);
    }
    int near_a1 = 0;
    for (int k = 0; k < 4; ++k) {
        near_a1 += std::abs(ea.eigenvalues()(k) - s.a1) < 1e-8L ? 1 : 0;
    }
    CHECK(near_a1 == 1);
    // Trace condition persists along the flow.
    cx tr = s.a1 + real(3) * s.a2;
    for (int i = 0; i < 4; ++i) {
        tr += s.b[i] - s.c[i];
    }
    CHECK(std::abs(tr) < 1e-15L);
}

TEST_CASE("tau products and the extended forms", "[flows]")
{
    for (int m = 1; m <= 4; ++m) {
        const auto e = sample(m, 50 + static_cast<std::uint64_t>(m));
        const cx t1(0.23, -0.1), t2(-0.12, 0.31);
        const auto p = hgforge::tau_product(e, t1, t2);
        CHECK(p.w_diag_residual < 1e-12L);
        CHECK(p.change_residual < 1e-12L);
        CHECK(p.cross_residual < 1e-12L);
        const auto x = hgforge::extended_products(e, t1, t2);
        CHECK(x.plus_residual < 1e-12L);
        CHECK(x.minus_residual < 1e-12L);
        CHECK(x.transition_plus < 1e-12L);
        CHECK(x.transition_minus < 1e-12L);
    }
    CHECK_THROWS_AS(hgforge::extended_products(sample(2, 1), cx(0.1), cx(0.1)), std::invalid_argument);
}

TEST_CASE("Jordan normalizer determinant against cofactor expansion", "[flows]")
{
    for (int m = 1; m <= 5; ++m) {
        const auto e = sample(m, 60 + static_cast<std::uint64_t>(m));
        const cx tau(0.45, 0);
        const auto j = hgforge::jordan_normalizer(e, tau);
        CHECK(hgforge::rel_residual(oracle::cofactor_det(j.G), j.det_closed) < 1e-9L * std::max(real(1), std::abs(j.det_closed)));
        CHECK(j.det_residual < 1e-10L);
        CHECK(j.conjugation_residual < 1e-9L);
    }
    CHECK_THROWS_AS(hgforge::jordan_normalizer(sample(2, 1), cx(0)), std::invalid_argument);
}

TEST_CASE("Vandermonde form of EX and EY", "[flows]")
{
    const auto e = sample(4, 8);
    const auto v = hgforge::vandermonde_check(e, cx(0.17, 0.09));
    CHECK(v.pass(1e-10L));
    const auto vd = hgforge::vandermonde(std::vector<cx>{cx(1), cx(2)}, cx(1));
    CHECK(vd(1, 0) == cx(2));
    CHECK(vd(1, 1) == cx(3));
}

TEST_CASE("site quaternions satisfy the algebra", "[flows]")
{
    const auto e = sample(3, 9);
    const auto q = hgforge::quaternion_matrices(e, cx(0.2, 0.1), cx(-0.1, 0.3));
    const cmat id = hgforge::identity<real>(6);
    CHECK(hgforge::product_residual(q.i, q.i, cmat(-id)) < 1e-13L);
    CHECK(hgforge::product_residual(q.j, q.j, cmat(-id)) < 1e-13L);
    CHECK(hgforge::product_residual(q.k, q.k, cmat(-id)) < 1e-13L);
    CHECK(hgforge::product_residual(q.i, q.j, q.k) < 1e-13L);
    for (const cmat *x : {&q.i, &q.j, &q.k}) {
        CHECK(hgforge::signed_congruence_residual(*x, q.gram, *x, q.gram) < 1e-11L);
    }
}
