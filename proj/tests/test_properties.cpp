// SPDX-License-Identifier: MIT
// Randomized invariants over seeds and orders.
#include "hgforge/cm.hpp"
#include "hgforge/fock.hpp"
#include "hgforge/monodromy.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using oracle::cmat;
using oracle::cx;
using oracle::real;

namespace
{

hgforge::sample_mode mode_of(std::uint64_t seed)
{
    return seed % 2 ? hgforge::sample_mode::complex : hgforge::sample_mode::real01;
}

} // namespace

TEST_CASE("sampled data satisfies the trace condition and genericity", "[properties]")
{
    const int m = GENERATE(1, 2, 3, 4, 5, 6);
    const std::uint64_t seed = GENERATE(range(std::uint64_t(200), std::uint64_t(210)));
    const auto e = hgforge::sample_parameters<real>(m, seed, mode_of(seed));
    CHECK(std::abs(e.trace_residual()) < 1e-15L);
    CHECK(hgforge::validate_genericity(e).ok(1e-15));
}

TEST_CASE("monodromy product is the identity", "[properties]")
{
    const int m = GENERATE(1, 2, 3, 4, 5, 6);
    const std::uint64_t seed = GENERATE(range(std::uint64_t(300), std::uint64_t(306)));
    const auto e = hgforge::sample_parameters<real>(m, seed, mode_of(seed));
    const auto t = hgforge::build_monodromy(e);
    CHECK(hgforge::product_residual(cmat(t.Minf * t.M1), t.M0, hgforge::identity<real>(e.size())) < oracle::rounding_bound(t));
}

TEST_CASE("EX is a one-parameter group", "[properties]")
{
    const int m = GENERATE(2, 3, 4, 5);
    const std::uint64_t seed = GENERATE(range(std::uint64_t(400), std::uint64_t(405)));
    const auto e = hgforge::sample_parameters<real>(m, seed, mode_of(seed));
    std::mt19937_64 rng(seed);
    const cx t1 = oracle::random_cx(rng, -0.5, 0.5), t2 = oracle::random_cx(rng, -0.5, 0.5);
    const cmat lhs = hgforge::ex_matrix(e, t1) * hgforge::ex_matrix(e, t2);
    CHECK(hgforge::rel_residual(lhs, hgforge::ex_matrix(e, cx(t1 + t2))) < 1e-11L);
    const cmat lhs_y = hgforge::ey_matrix(e, t1) * hgforge::ey_matrix(e, t2);
    CHECK(hgforge::rel_residual(lhs_y, hgforge::ey_matrix(e, cx(t1 + t2))) < 1e-11L);
}

TEST_CASE("residue form orthogonality in both bases", "[properties]")
{
    const int m = GENERATE(1, 2, 3, 4, 5, 6);
    const std::uint64_t seed = GENERATE(range(std::uint64_t(500), std::uint64_t(505)));
    const auto e = hgforge::sample_parameters<real>(m, seed, mode_of(seed));
    CHECK(hgforge::make_residue_form(e).w_residual < 1e-11L);
}

TEST_CASE("trigonometric Cauchy inverse and determinant", "[properties]")
{
    const int m = GENERATE(2, 3, 4, 5, 6);
    const std::uint64_t seed = GENERATE(range(std::uint64_t(600), std::uint64_t(605)));
    const auto e = hgforge::sample_parameters<real>(m, seed, mode_of(seed));
    const auto k = hgforge::cauchy_kind<real>::trig();
    CHECK(hgforge::cauchy_inverse_residual(k, e).residual < 1e-11L);
    CHECK(hgforge::cauchy_determinant_residual(k, e).residual < 1e-10L);
}

TEST_CASE("Wick routes agree on random words", "[properties]")
{
    const std::uint64_t seed = GENERATE(range(std::uint64_t(700), std::uint64_t(710)));
    const auto e = hgforge::sample_parameters<real>(2, seed, hgforge::sample_mode::real01);
    hgforge::lattice_spec<real> l;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> kind(0, 3), idx(0, 1), site(-1, 1);
    const int len = 2 * std::uniform_int_distribution<int>(1, 4)(rng);
    hgforge::wick_word w;
    for (int n = 0; n < len; ++n) {
        w.push_back({static_cast<hgforge::fermion_kind>(kind(rng)), idx(rng), site(rng), site(rng)});
    }
    const cx a = hgforge::wick_vev(w, e, l);
    const real s = std::max(real(1), std::abs(a));
    CHECK(std::abs(hgforge::wick_vev_recursive(w, e, l) - a) / s < 1e-12L);
    CHECK(std::abs(hgforge::wick_vev_pfaffian(w, e, l) - a) / s < 1e-11L);
}

TEST_CASE("Calogero-Moser normal form is gauge invariant", "[properties]")
{
    const int m = GENERATE(2, 3, 4);
    const std::uint64_t seed = GENERATE(range(std::uint64_t(800), std::uint64_t(805)));
    std::mt19937_64 rng(seed);
    std::vector<cx> b, p;
    for (int i = 0; i < m; ++i) {
        b.push_back(oracle::random_cx(rng, -2, 2));
        p.push_back(oracle::random_cx(rng, -1, 1));
    }
    const auto q = hgforge::cm_from_coordinates(b, p);
    const cmat g = oracle::random_matrix(m, seed) + hgforge::identity<real>(m) * real(2);
    const auto moved = hgforge::gl_action(g, q);
    CHECK(hgforge::subvariety_residual(moved) < 1e-11L);
    for (int j = 1; j <= 3; ++j) {
        cmat a = hgforge::identity<real>(m), c = hgforge::identity<real>(m);
        for (int r = 0; r < j; ++r) {
            a = a * q.X;
            c = c * moved.X;
        }
        CHECK(hgforge::rel_residual(c.trace(), a.trace()) < 1e-11L);
    }
    CHECK(hgforge::mhgs_link_check(hgforge::sample_parameters<real>(m, seed, mode_of(seed))));
}
