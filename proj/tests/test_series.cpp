// SPDX-License-Identifier: MIT
#include "hgforge/series.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using oracle::cx;
using oracle::real;
using cvec = hgforge::cvector<real>;
using hgforge::base_point;

namespace
{

hgforge::exponent_set<real> sample(int m, std::uint64_t seed)
{
    return hgforge::with_a2_zero(hgforge::sample_parameters<real>(m, seed, hgforge::sample_mode::real01));
}

} // namespace

TEST_CASE("pFq against elementary closed forms", "[series]")
{
    const cx z(0.35, -0.2);
    // log(1+z) = z 2F1(1,1;2;-z)
    CHECK(std::abs(z * hgforge::hyper_pfq<real>({cx(1), cx(1)}, {cx(2)}, cx(-z), 400).value - std::log(cx(real(1) + z))) < 1e-17L);
    // (1-z)^{-a} = 1F0(a;;z)
    const cx a(0.7, 0.4);
    CHECK(std::abs(hgforge::hyper_pfq<real>({a}, {}, z, 400).value - std::pow(cx(real(1) - z), -a)) < 1e-17L);
    // arcsin(x)/x = 2F1(1/2,1/2;3/2;x^2)
    const real x = 0.6L;
    CHECK(std::abs(x * hgforge::hyper_pfq<real>({cx(0.5), cx(0.5)}, {cx(1.5)}, cx(x * x), 400).value.real() - std::asin(x)) < 1e-17L);
    // 0F1(;1;-z^2/4) = J0(z) and exp
    CHECK(std::abs(hgforge::hyper_pfq<real>({}, {cx(1)}, cx(-1.21L), 100).value.real() - std::cyl_bessel_j(0.0L, 2.2L)) < 1e-17L);
    CHECK(std::abs(hgforge::hyper_pfq<real>({}, {cx(2.5)}, cx(-0.49L), 100).value.real() -
                   std::cyl_bessel_j(1.5L, 1.4L) * std::tgamma(2.5L) / std::pow(0.7L, 1.5L)) < 1e-17L);
    CHECK(std::abs(hgforge::hyper_pfq<real>({}, {}, z, 100).value - std::exp(z)) < 1e-17L);
}

TEST_CASE("pFq reports the first omitted term and rejects bad input", "[series]")
{
    const auto v = hgforge::hyper_pfq<real>({cx(1)}, {}, cx(0.5), 10);
    CHECK(std::abs(v.value.real() - (2 - std::pow(0.5L, 10) * 2)) < 1e-17L);
    CHECK(std::abs(v.next_term - std::pow(0.5L, 10)) < 1e-18L);
    // A nonpositive integer numerator terminates the series: 2F1(-2,1;1;z) = (1-z)^2.
    CHECK(std::abs(hgforge::hyper_pfq<real>({cx(-2), cx(1)}, {cx(1)}, cx(3), 10).value - cx(4)) < 1e-17L);
    CHECK_THROWS_AS(hgforge::hyper_pfq<real>({cx(1)}, {cx(-3)}, cx(0.1), 10), hgforge::degenerate_error);
    CHECK_THROWS_AS(hgforge::hyper_pfq<real>({cx(1), cx(1)}, {cx(2)}, cx(1.5), 50), std::domain_error);
}

TEST_CASE("complex gamma against the standard library", "[series]")
{
    for (real x : {0.1L, 0.5L, 1.0L, 2.7L, 6.3L, -0.4L, -2.6L}) {
        INFO("x=" << double(x));
        CHECK(std::abs(hgforge::complex_gamma(cx(x)).real() / std::tgamma(x) - 1) < 1e-14L);
    }
    CHECK(std::abs(hgforge::complex_gamma(cx(0.5)) - cx(std::sqrt(hgforge::pi_v<real>))) < 1e-15L);
    // |Gamma(iy)|^2 = pi / (y sinh(pi y))
    const real y = 1.3L;
    CHECK(std::abs(std::norm(hgforge::complex_gamma(cx(0, y))) * y * std::sinh(hgforge::pi_v<real> * y) / hgforge::pi_v<real> - 1) < 1e-14L);
    CHECK(hgforge::pochhammer(cx(2.5), 3) == cx(2.5L * 3.5L * 4.5L));
    CHECK(hgforge::pochhammer(cx(7), 0) == cx(1));
}

TEST_CASE("order one solutions are z^b (1-z)^(c-b)", "[series]")
{
    const auto e = hgforge::make_exponent_set<real>({cx(0.3L)}, {cx(0.55L)}, cx(0));
    const cx z(0.25, 0.1);
    const cx expected = std::pow(z, cx(0.3L)) * std::pow(cx(real(1) - z), cx(0.55L - 0.3L));
    const auto g = hgforge::ghge_local_basis(e, base_point::zero, 0, z, 200);
    CHECK(std::abs(g.value - expected) < 1e-16L);
    const auto t = hgforge::build_residue_triple(e);
    const auto s = hgforge::mhgs_frobenius(e, t, base_point::zero, 0, 200);
    CHECK(std::abs(s.evaluate(z)(0) - t.V(0, 0) * expected) < 1e-16L);
}

TEST_CASE("Frobenius coefficients, closed form and system residual", "[series]")
{
    for (int m = 1; m <= 5; ++m) {
        const auto e = sample(m, 80 + static_cast<std::uint64_t>(m));
        const auto t = hgforge::build_residue_triple(e);
        for (auto p : {base_point::zero, base_point::infinity}) {
            for (int i = 0; i < m; ++i) {
                INFO("m=" << m << " point=" << hgforge::to_string(p) << " i=" << i);
                const auto s = hgforge::mhgs_frobenius(e, t, p, i, 80);
                CHECK(s.closed_form_checked == 41);
                CHECK(s.closed_form_residual < 1e-10L);
                const cx z = p == base_point::zero ? cx(0.3) : cx(1 / 0.3L);
                CHECK(hgforge::mhgs_residual(s, t, z) < 1e-10L);
            }
        }
    }
}

TEST_CASE("theta-derivative of the series against a difference quotient", "[series]")
{
    const auto e = sample(3, 4);
    const auto s = hgforge::mhgs_frobenius(e, base_point::zero, 1, 100);
    const cx z(0.3, 0.1);
    const real h = 1e-6L;
    const cvec fd = (s.evaluate(z + h) - s.evaluate(z - h)) * (z / (2 * h));
    CHECK(hgforge::rel_residual(fd, s.evaluate_theta(z)) < 1e-9L);
}

TEST_CASE("components through mF(m-1) series", "[series]")
{
    for (int m = 2; m <= 4; ++m) {
        const auto e = sample(m, 90 + static_cast<std::uint64_t>(m));
        const auto t = hgforge::build_residue_triple(e);
        for (auto p : {base_point::zero, base_point::infinity}) {
            const cx z = p == base_point::zero ? cx(0.2, 0.05) : cx(5, 0.5);
            for (int i = 0; i < m; ++i) {
                const cvec v = hgforge::mhgs_frobenius(e, t, p, i, 120, 0).evaluate(z);
                for (int j = 0; j < m; ++j) {
                    INFO("m=" << m << " point=" << hgforge::to_string(p) << " i=" << i << " j=" << j);
                    CHECK(std::abs(hgforge::mhgs_component_closed_form(e, t, p, i, j, z, 120) - v(j)) / hgforge::max_abs(v) < 1e-10L);
                }
            }
        }
    }
    CHECK_THROWS_AS(hgforge::mhgs_component_closed_form(hgforge::sample_parameters<real>(2, 1), hgforge::build_residue_triple(hgforge::sample_parameters<real>(2, 1)), base_point::zero, 0, 0, cx(0.1), 10), std::invalid_argument);
}

TEST_CASE("scalar equation local basis", "[series]")
{
    const auto e = hgforge::sample_parameters<real>(3, 5);
    for (auto p : {base_point::zero, base_point::infinity}) {
        for (int j = 0; j < 3; ++j) {
            CHECK(hgforge::ghge_local_basis(e, p, j, p == base_point::zero ? cx(0.25, 0.1) : cx(4, 1), 80).residual < 1e-12L);
        }
    }
}

TEST_CASE("continuation and independence", "[series]")
{
    const auto e = sample(3, 11);
    CHECK(hgforge::continuation_check(e, std::polar(real(0.8), real(2.0))).residual < 1e-6L);
    CHECK(hgforge::continuation_check(e, std::polar(real(0.9), real(-1.0))).residual < 1e-6L);
    CHECK(hgforge::frobenius_independence(e, cx(0.3), 60) > 1e-8L);
}
