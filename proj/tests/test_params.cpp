// SPDX-License-Identifier: MIT
#include "hgforge/params.hpp"

#include <catch_amalgamated.hpp>

using hgforge::cplx;
using real = long double;
using cx = cplx<real>;

TEST_CASE("make_exponent_set solves a1 from the trace condition", "[params]")
{
    const auto e = hgforge::make_exponent_set<real>({cx(0.1), cx(0.4)}, {cx(0.3), cx(0.7)}, cx(0.25));
    CHECK(e.m == 2);
    // a1 = -(a2 + sum(b - c)) = -(0.25 + 0.5 - 1.0)
    CHECK(std::abs(e.a1 - cx(0.25)) < 1e-16L);
    CHECK(e.trace_residual() < 1e-18L);
    CHECK(e.is_real());
    CHECK(e.is_sorted_real());
}

TEST_CASE("make_exponent_set rejects malformed input", "[params]")
{
    CHECK_THROWS_AS(hgforge::make_exponent_set<real>({cx(0.1)}, {cx(0.2), cx(0.3)}, cx(0)), std::invalid_argument);
    CHECK_THROWS_AS(hgforge::make_exponent_set<real>({}, {}, cx(0)), std::invalid_argument);
}

TEST_CASE("distance_to_integer", "[params]")
{
    CHECK(hgforge::distance_to_integer(cx(2.9, 0)) == Catch::Approx(0.1).margin(1e-15));
    CHECK(hgforge::distance_to_integer(cx(-1.25, 0)) == Catch::Approx(0.25).margin(1e-15));
    CHECK(hgforge::distance_to_integer(cx(3.0, 0.4)) == Catch::Approx(0.4).margin(1e-15));
}

TEST_CASE("validate_genericity lists every near-integer difference", "[params]")
{
    auto e = hgforge::make_exponent_set<real>({cx(0.1), cx(1.1), cx(0.5)}, {cx(0.3), cx(0.5), cx(0.9)}, cx(0.2));
    const auto rep = hgforge::validate_genericity(e);
    // b0 - b1 = -1, b2 - c1 = 0.
    REQUIRE(rep.violations.size() == 2);
    CHECK(rep.violations[0].kind == "b-b");
    CHECK(rep.violations[0].i == 0);
    CHECK(rep.violations[0].j == 1);
    CHECK(rep.violations[1].kind == "b-c");
    CHECK(rep.violations[1].i == 2);
    CHECK(rep.violations[1].j == 1);
    CHECK(!rep.ok(1e-12));
    e.a1 += cx(1e-3);
    CHECK(hgforge::validate_genericity(e).trace_residual == Catch::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("sample_parameters is deterministic and generic", "[params]")
{
    for (int m = 1; m <= 6; ++m) {
        for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
            for (auto mode : {hgforge::sample_mode::real01, hgforge::sample_mode::complex}) {
                const auto a = hgforge::sample_parameters<real>(m, seed, mode);
                const auto b = hgforge::sample_parameters<real>(m, seed, mode);
                CHECK(a.b == b.b);
                CHECK(a.c == b.c);
                CHECK(a.a2 == b.a2);
                CHECK(a.m == m);
                CHECK(a.trace_residual() < 1e-15L);
                CHECK(hgforge::validate_genericity(a).violations.empty());
                CHECK(std::is_sorted(a.b.begin(), a.b.end(), [](cx x, cx y) { return x.real() < y.real(); }));
                if (mode == hgforge::sample_mode::real01) {
                    CHECK(a.is_real());
                }
                // Separation promised beyond genericity.
                for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < m; ++j) {
                        if (i != j) {
                            CHECK(hgforge::distance_to_integer(cx(a.b[i] - a.b[j])) >= 0.05L);
                        }
                        CHECK(hgforge::distance_to_integer(cx(a.a2 + a.b[i] - a.c[j])) >= 0.025L);
                    }
                }
            }
        }
    }
    CHECK(hgforge::sample_parameters<real>(3, 1).b != hgforge::sample_parameters<real>(3, 2).b);
}

TEST_CASE("sample_parameters validates its arguments", "[params]")
{
    CHECK_THROWS_AS(hgforge::sample_parameters<real>(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(hgforge::sample_parameters<real>(3, 1, hgforge::sample_mode::real01, 0.2L), std::invalid_argument);
    CHECK_THROWS_AS(hgforge::sample_parameters<real>(3, 1, hgforge::sample_mode::real01, 0.0L), std::invalid_argument);
}

TEST_CASE("positivity chains on hand-built data", "[params]")
{
    using hgforge::positivity;
    // Column 1: c1 - b1 < a2 < c2 - b1 and c2 - b2 < a2.
    const auto col1 = hgforge::make_exponent_set<real>({cx(0.1), cx(0.4)}, {cx(0.2), cx(0.5)}, cx(0.15));
    CHECK(hgforge::check_positivity_conditions(col1) == positivity::column1);
    // Column 2: a2 < c_i - b_i and c1 - b2 < a2.
    const auto col2 = hgforge::make_exponent_set<real>({cx(0.1), cx(0.3)}, {cx(0.35), cx(0.6)}, cx(0.1));
    CHECK(hgforge::check_positivity_conditions(col2) == positivity::column2);
    const auto neither = hgforge::make_exponent_set<real>({cx(0.1), cx(0.3)}, {cx(0.35), cx(0.6)}, cx(0.28));
    CHECK(hgforge::check_positivity_conditions(neither) == positivity::neither);
    CHECK(std::string(hgforge::to_string(positivity::column1)) == "Column1");
    CHECK(std::string(hgforge::to_string(positivity::neither)) == "Neither");
}

TEST_CASE("positivity requires real sorted data", "[params]")
{
    const auto e = hgforge::make_exponent_set<real>({cx(0.4), cx(0.1)}, {cx(0.2), cx(0.5)}, cx(0.15));
    CHECK_THROWS_AS(hgforge::check_positivity_conditions(e), std::invalid_argument);
    const auto z = hgforge::sample_parameters<real>(3, 4, hgforge::sample_mode::complex);
    CHECK_THROWS_AS(hgforge::check_positivity_conditions(z), std::invalid_argument);
}

TEST_CASE("construct_interlaced produces the requested pattern", "[params]")
{
    using hgforge::positivity;
    for (int m = 1; m <= 6; ++m) {
        for (auto want : {positivity::column1, positivity::column2, positivity::neither}) {
            if (want == positivity::neither && m < 2) {
                CHECK_THROWS_AS(hgforge::construct_interlaced<real>(m, 1, want), std::invalid_argument);
                continue;
            }
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                const auto e = hgforge::construct_interlaced<real>(m, seed, want);
                CHECK(hgforge::check_positivity_conditions(e) == want);
                CHECK(hgforge::validate_genericity(e).violations.empty());
                const real d = (e.a2 - e.a1).real();
                if (want == positivity::column1) {
                    CHECK(d > 0);
                } else if (want == positivity::column2) {
                    CHECK(d < 0);
                }
            }
        }
    }
}

TEST_CASE("cast preserves the data", "[params]")
{
    const auto e = hgforge::sample_parameters<real>(4, 11, hgforge::sample_mode::complex);
    const auto d = e.cast<double>();
    CHECK(d.m == 4);
    CHECK(std::abs(d.b[2] - cplx<double>(double(e.b[2].real()), double(e.b[2].imag()))) == 0.0);
    CHECK(d.trace_residual() < 1e-14);
}
