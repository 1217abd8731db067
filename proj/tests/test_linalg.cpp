// SPDX-License-Identifier: MIT
#include "hgforge/linalg.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using oracle::cmat;
using oracle::cx;
using oracle::real;

TEST_CASE("rel_residual uses the max-entry norm floored at one", "[linalg]")
{
    cmat a(2, 2), b(2, 2);
    a << cx(1), cx(2), cx(3), cx(4);
    b << cx(1), cx(2), cx(3), cx(4.5);
    CHECK(hgforge::rel_residual(a, b) == Catch::Approx(0.5 / 4.5));
    cmat s = a * real(1e-3), t = b * real(1e-3);
    CHECK(hgforge::rel_residual(s, t) == Catch::Approx(0.5e-3));
    CHECK(hgforge::rel_residual(cx(2, 0), cx(1, 0)) == Catch::Approx(1.0));
}

TEST_CASE("determinant agrees with cofactor expansion", "[linalg]")
{
    for (int n = 1; n <= 6; ++n) {
        const cmat a = oracle::random_matrix(n, 100 + static_cast<std::uint64_t>(n));
        const cx ref = oracle::cofactor_det(a);
        CHECK(std::abs(hgforge::determinant(a) - ref) / std::abs(ref) < 1e-15L);
    }
    CHECK(hgforge::determinant(cmat(0, 0)) == cx(1));
}

TEST_CASE("invert agrees with Gauss-Jordan and rejects singular input", "[linalg]")
{
    for (int n = 1; n <= 6; ++n) {
        const cmat a = oracle::random_matrix(n, 200 + static_cast<std::uint64_t>(n));
        CHECK(hgforge::rel_residual(hgforge::invert(a), oracle::gauss_jordan_inverse(a)) < 1e-14L);
    }
    cmat s(2, 2);
    s << cx(1), cx(2), cx(2), cx(4);
    CHECK_THROWS_AS(hgforge::invert(s), hgforge::degenerate_error);
    CHECK_THROWS_AS(hgforge::invert(cmat(2, 3)), std::invalid_argument);
}

TEST_CASE("condition_number of a diagonal matrix", "[linalg]")
{
    const cmat d = hgforge::diag<real>({cx(1), cx(1e-3), cx(10)});
    CHECK(hgforge::condition_number(d) == Catch::Approx(1e4));
}

TEST_CASE("expm agrees with the Taylor oracle", "[linalg]")
{
    for (int n = 1; n <= 6; ++n) {
        for (real scale : {0.1L, 1.0L, 4.0L}) {
            const cmat a = oracle::random_matrix(n, 300 + static_cast<std::uint64_t>(n), scale);
            CHECK(hgforge::rel_residual(hgforge::expm(a), oracle::taylor_expm(a)) < 1e-15L);
        }
    }
    // exp of a nilpotent Jordan block is the truncated series.
    cmat j = cmat::Zero(3, 3);
    j(0, 1) = j(1, 2) = cx(1);
    cmat ref = cmat::Identity(3, 3) + j;
    ref(0, 2) = cx(0.5);
    CHECK(hgforge::rel_residual(hgforge::expm(j), ref) < 1e-18L);
}

TEST_CASE("hermitian_signature counts eigenvalue signs", "[linalg]")
{
    const cmat d = hgforge::diag<real>({cx(2), cx(-1), cx(1e-20), cx(3)});
    const cmat u = hgforge::expm(cmat(oracle::random_matrix(4, 7) - cmat(oracle::random_matrix(4, 7).adjoint())));
    const cmat g = u * d * u.adjoint();
    const auto s = hgforge::hermitian_signature(g, real(1e-12));
    CHECK(s.n_plus == 2);
    CHECK(s.n_minus == 1);
    CHECK(s.n_zero == 1);
    CHECK(!s.definite());
    CHECK(hgforge::hermitian_signature(hgforge::diag<real>({cx(1), cx(2)}), real(1e-12)).definite());
    cmat nh(2, 2);
    nh << cx(1), cx(1), cx(0), cx(1);
    CHECK_THROWS_AS(hgforge::hermitian_signature(nh, real(1e-12)), std::invalid_argument);
}

TEST_CASE("numerical_rank", "[linalg]")
{
    const hgforge::cvector<real> x = oracle::random_matrix(4, 9).col(0), y = oracle::random_matrix(4, 10).col(1);
    const cmat r1 = x * y.transpose();
    CHECK(hgforge::numerical_rank(r1, real(1e-12)) == 1);
    CHECK(hgforge::numerical_rank(oracle::random_matrix(4, 11), real(1e-12)) == 4);
    CHECK(hgforge::numerical_rank(cmat(cmat::Zero(3, 3)), real(1e-12)) == 0);
}

TEST_CASE("reduced exponentials and sin_pi", "[linalg]")
{
    const real pi = hgforge::pi_v<real>;
    for (cx x : {cx(0.3, 0.1), cx(1e6 + 0.25, -0.2), cx(-7.5, 0.0)}) {
        const cx ref = std::exp(cx(0, 2) * pi * x);
        CHECK(std::abs(hgforge::exp_2pi_i(x) - ref) / std::abs(ref) < (x.real() > 1000 ? 1e-9L : 1e-17L));
        CHECK(std::abs(hgforge::exp_pi_i(x) - std::exp(cx(0, 1) * pi * x)) / std::abs(ref) < (x.real() > 1000 ? 1e-9L : 1e-17L));
    }
    // Exact at integers, where sin(pi * x) in floating point is not.
    CHECK(hgforge::exp_2pi_i(cx(5, 0)) == cx(1, 0));
    CHECK(std::abs(hgforge::sin_pi(cx(3, 0))) == 0);
    CHECK(std::abs(hgforge::sin_pi(cx(2.5, 0)) - cx(1)) < 1e-18L);
    CHECK(std::abs(hgforge::sin_pi(cx(-0.5, 0.3)) - std::sin(pi * cx(-0.5, 0.3))) < 1e-17L);
}

TEST_CASE("compensated_sum recovers cancelled low-order bits", "[linalg]")
{
    hgforge::compensated_sum<double> s;
    s.add({1e16, 0});
    for (int k = 0; k < 1000; ++k) {
        s.add({1.0, -1.0});
    }
    s.add({-1e16, 0});
    CHECK(s.value() == std::complex<double>(1000, -1000));
}

TEST_CASE("term-scaled residuals", "[linalg]")
{
    cmat a(2, 2), b(2, 2);
    a << cx(1e6), cx(1), cx(0), cx(1);
    b << cx(1), cx(-1e6), cx(0), cx(1);
    // a b = [[1e6, -1e12 + 1], [0, 1]]: a perturbation of 1 in the (0,1)
    // entry is at rounding level relative to the terms 1e12.
    cmat r = a * b;
    r(0, 1) += cx(1);
    CHECK(hgforge::product_residual(a, b, r) == Catch::Approx(1.0 / 1e12).epsilon(1e-6));
    const cmat g = cmat::Identity(2, 2);
    CHECK(hgforge::congruence_residual(a, g, b, cmat(a.transpose() * b)) == 0);
    CHECK(hgforge::signed_congruence_residual(a, g, b, cmat(-a.transpose() * b)) == 0);
    CHECK(hgforge::product_magnitude(a, g, b) == Catch::Approx(1e12));
}

TEST_CASE("double instantiation of the kernels", "[linalg]")
{
    using dmat = hgforge::cmatrix<double>;
    dmat a(2, 2);
    a << std::complex<double>(2), std::complex<double>(1), std::complex<double>(1), std::complex<double>(3);
    CHECK(std::abs(hgforge::determinant(a) - std::complex<double>(5)) < 1e-14);
    CHECK(hgforge::rel_residual(dmat(a * hgforge::invert(a)), hgforge::identity<double>(2)) < 1e-15);
    CHECK(hgforge::rel_residual(hgforge::expm(dmat(dmat::Zero(2, 2))), hgforge::identity<double>(2)) < 1e-15);
}
