// SPDX-License-Identifier: MIT
#include "hgforge/elliptic.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using oracle::cx;
using oracle::real;
using lattice = hgforge::lattice_spec<real>;

namespace
{

lattice make(cx w2, cx w1 = cx(1))
{
    lattice l;
    l.omega1 = w1;
    l.omega2 = w2;
    return l;
}

} // namespace

TEST_CASE("1/sn on the real axis against Boost's Jacobi sn", "[elliptic]")
{
    for (real s : {0.8L, 1.3L, 2.5L}) {
        const auto l = make(cx(0, s));
        for (real x : {0.05L, 0.21L, 0.5L, 0.77L, 1.3L, -0.4L}) {
            INFO("Im omega2=" << double(s) << " x=" << double(x));
            const auto v = hgforge::inv_sn(cx(x), l);
            const real ref = oracle::inv_sn_jacobi(x, s);
            CHECK(std::abs(v.value - cx(ref)) / std::abs(ref) < 1e-13L);
            CHECK(std::abs(v.value.imag()) < 1e-15L);
        }
    }
}

TEST_CASE("1/sn in the plane against the theta-function quotient", "[elliptic]")
{
    std::mt19937_64 rng(5);
    for (cx w2 : {cx(0, 0.8), cx(1, 1.5), cx(-0.3, 0.9)}) {
        const auto l = make(w2);
        for (int k = 0; k < 10; ++k) {
            const cx z = oracle::random_cx(rng, 0.05, 0.95).real() + real(std::uniform_real_distribution<double>(0.05, 0.95)(rng)) * w2;
            INFO("omega2=" << double(w2.real()) << "+" << double(w2.imag()) << "i");
            const auto v = hgforge::inv_sn(z, l);
            const cx ref = oracle::inv_sn_theta(z, w2);
            CHECK(std::abs(v.value - ref) / std::abs(ref) < 1e-13L);
            CHECK(v.tail_bound < 1e-15L);
        }
    }
}

TEST_CASE("lattice-sum route agrees within the reported bounds", "[elliptic]")
{
    std::mt19937_64 rng(11);
    for (cx w2 : {cx(0, 0.8), cx(1, 1.5)}) {
        for (bool accel : {true, false}) {
            hgforge::acceleration_enabled().store(accel);
            const auto l = make(w2);
            const cx z = cx(0.31, 0) + real(0.37) * w2;
            const auto a = hgforge::inv_sn(z, l), b = hgforge::inv_sn_lattice(z, l);
            CHECK(std::abs(a.value - b.value) <= a.tail_bound + b.tail_bound);
            CHECK(std::abs(b.value - oracle::inv_sn_theta(z, w2)) <= b.tail_bound);
            if (accel) {
                CHECK(b.tail_bound < 1e-10L);
            }
        }
    }
    hgforge::acceleration_enabled().store(true);
    (void)rng;
}

TEST_CASE("periodicity, antiperiodicity and parity", "[elliptic]")
{
    for (cx w2 : {cx(0, 0.8), cx(1, 1.5)}) {
        const auto l = make(w2);
        const cx z(0.27, 0.19);
        const cx f = hgforge::inv_sn(z, l).value;
        CHECK(std::abs(hgforge::inv_sn(cx(z + real(1)), l).value + f) / std::abs(f) < 1e-14L);
        CHECK(std::abs(hgforge::inv_sn(cx(z + w2), l).value - f) / std::abs(f) < 1e-14L);
        CHECK(std::abs(hgforge::inv_sn(cx(-z), l).value + f) / std::abs(f) < 1e-14L);
    }
}

TEST_CASE("general omega1 rescales the argument", "[elliptic]")
{
    const cx w1(2, 0.5), ratio(0.3, 1.1);
    const auto l = make(ratio * w1, w1);
    const cx z(0.4, 0.3);
    const cx expected = oracle::inv_sn_theta(z / w1, ratio) / w1;
    CHECK(std::abs(hgforge::inv_sn(z, l).value - expected) / std::abs(expected) < 1e-13L);
}

TEST_CASE("trigonometric limit of a tall lattice", "[elliptic]")
{
    const auto l = make(cx(0, 40));
    for (cx z : {cx(0.2, 0.1), cx(0.45, -0.3), cx(-0.7, 0.05)}) {
        const cx ref = hgforge::pi_v<real> / std::sin(hgforge::pi_v<real> * z);
        CHECK(std::abs(hgforge::inv_sn(z, l).value - ref) / std::abs(ref) < 1e-16L);
    }
}

TEST_CASE("alternating partial fractions of pi/sin", "[elliptic]")
{
    const cx z(0.3, 0.2);
    const cx ref = hgforge::pi_v<real> / std::sin(hgforge::pi_v<real> * z);
    const cx fast = hgforge::csc_partial_fraction(z, 400, true);
    const cx slow = hgforge::csc_partial_fraction(z, 400, false);
    CHECK(std::abs(fast - ref) < 1e-12L);
    // Without acceleration the error is of the order of the first omitted term.
    CHECK(std::abs(slow - ref) < 2.0L / (400.0L * 400.0L));
    CHECK(std::abs(slow - ref) > std::abs(fast - ref));
    CHECK_THROWS_AS(hgforge::csc_partial_fraction(cx(3, 0), 10), hgforge::degenerate_error);
}

TEST_CASE("argument on the lattice and invalid lattices", "[elliptic]")
{
    const auto l = make(cx(0, 0.8));
    CHECK_THROWS_AS(hgforge::inv_sn(cx(1, 0.8), l), hgforge::degenerate_error);
    CHECK_THROWS_AS(hgforge::inv_sn(cx(0), l), hgforge::degenerate_error);
    CHECK_THROWS_AS(hgforge::inv_sn(cx(0.3), make(cx(0.5, 0))), std::invalid_argument);
    lattice l2 = l;
    l2.n1 = 0;
    CHECK_THROWS_AS(l2.validate(), std::invalid_argument);
}

TEST_CASE("explicit outer radius reports a matching bound", "[elliptic]")
{
    lattice l = make(cx(0, 0.8));
    l.n2 = 3;
    const cx z(0.3, 0.2);
    const auto v = hgforge::inv_sn(z, l);
    const cx ref = oracle::inv_sn_theta(z, l.omega2);
    CHECK(std::abs(v.value - ref) <= v.tail_bound);
    CHECK(v.tail_bound > 1e-12L);
}

TEST_CASE("Euler averaging of alternating partial sums", "[elliptic]")
{
    // Partial sums of log 2 = 1 - 1/2 + 1/3 - ...
    std::vector<cx> s;
    real acc = 0;
    for (int k = 1; k <= 30; ++k) {
        acc += (k % 2 ? 1.0L : -1.0L) / real(k);
        s.emplace_back(acc);
    }
    const auto [v, err] = hgforge::detail::euler_average(s);
    CHECK(std::abs(v.real() - std::log(2.0L)) < 1e-9L);
    CHECK(err < 1e-6L);
}
