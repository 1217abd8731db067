// SPDX-License-Identifier: MIT
// Verification suites: per-module batteries of residual checks on sampled
// parameters, a deterministic worker pool and the JSON/text report.
#pragma once

#include "cauchy.hpp"
#include "cm.hpp"
#include "elliptic.hpp"
#include "flows.hpp"
#include "fock.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "monodromy.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "residue.hpp"
#include "series.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace hgforge
{

inline constexpr const char *version_string = "0.1.0";

inline const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names{"params", "identities", "residue", "flows",     "cauchy",
                                                "elliptic", "series",   "monodromy", "fock", "cm"};
    return names;
}

inline bool is_suite_name(const std::string &s)
{
    return s == "all" || std::find(suite_names().begin(), suite_names().end(), s) != suite_names().end();
}

struct suite_config {
    std::string suite = "all";
    int m = 3;
    int trials = 3;
    std::uint64_t seed = 1;
    std::optional<double> tol;               // replaces every nonzero default tolerance
    std::optional<cplx<double>> omega2;      // restricts elliptic checks to one lattice
    std::optional<int> trunc;                // inner lattice radius
    std::optional<cauchy_flavor> kind;       // restricts the cauchy suite
    bool accelerate = true;
    int threads = 0;                         // 0: HGFORGE_THREADS or hardware

    bool operator==(const suite_config &o) const
    {
        return suite == o.suite && m == o.m && trials == o.trials && seed == o.seed && tol == o.tol &&
               omega2 == o.omega2 && trunc == o.trunc && kind == o.kind && accelerate == o.accelerate;
    }
};

struct check_record {
    std::string id;
    std::string paper_ref; // what the check asserts, in words
    int m = 0;
    int trial = 0;
    double residual = 0;
    double tol = 0;
    bool pass = false;
    std::string note;

    bool operator==(const check_record &o) const
    {
        const bool same_residual = residual == o.residual || (std::isnan(residual) && std::isnan(o.residual));
        return id == o.id && paper_ref == o.paper_ref && m == o.m && trial == o.trial && same_residual && tol == o.tol &&
               pass == o.pass && note == o.note;
    }
};

struct report {
    std::optional<suite_config> config; // absent for a hand-built report
    std::vector<check_record> checks;
    nlohmann::json data = nlohmann::json::object(); // optional matrix dumps

    int passed() const
    {
        return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto &c) { return c.pass; }));
    }
    int failed() const
    {
        return static_cast<int>(checks.size()) - passed();
    }
    bool operator==(const report &o) const
    {
        return config == o.config && checks == o.checks && data == o.data;
    }
};

// Child seed of (seed, suite, trial) by FNV-1a and splitmix64 mixing.
inline std::uint64_t child_seed(std::uint64_t seed, const std::string &suite, int trial)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : suite) {
        h = (h ^ ch) * 1099511628211ULL;
    }
    std::uint64_t x = seed ^ h ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1));
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline int resolve_threads(int requested)
{
    if (requested > 0) {
        return requested;
    }
    if (const char *env = std::getenv("HGFORGE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail
{

using real = long double;
using cx = cplx<real>;

// Collects records for one (suite, trial). Every check body runs guarded:
// an exception becomes a failing record carrying the message.
class recorder
{
public:
    recorder(const suite_config &cfg, int m, int trial) : cfg_(cfg), m_(m), trial_(trial)
    {
    }

    template <typename F> void run(const std::string &id, const std::string &ref, double tol, F &&body)
    {
        check_record r{id, ref, m_, trial_, 0, effective(tol), false, {}};
        try {
            r.residual = static_cast<double>(body());
            r.pass = std::isfinite(r.residual) && r.residual <= r.tol;
        } catch (const std::exception &ex) {
            r.residual = std::numeric_limits<double>::quiet_NaN();
            r.note = ex.what();
        }
        out.push_back(std::move(r));
    }

    // Boolean checks: residual 0 on success, 1 on failure, tolerance 0.
    template <typename F> void flag(const std::string &id, const std::string &ref, F &&body)
    {
        check_record r{id, ref, m_, trial_, 1, 0, false, {}};
        try {
            r.pass = body();
            r.residual = r.pass ? 0 : 1;
        } catch (const std::exception &ex) {
            r.residual = std::numeric_limits<double>::quiet_NaN();
            r.note = ex.what();
        }
        out.push_back(std::move(r));
    }

    // Check against a data-dependent tolerance (e.g. a computed tail bound).
    void bounded(const std::string &id, const std::string &ref, double residual, double bound, const std::string &note = {})
    {
        check_record r{id, ref, m_, trial_, residual, bound, std::isfinite(residual) && residual <= bound, note};
        out.push_back(std::move(r));
    }

    void note_last(const std::string &n)
    {
        if (!out.empty()) {
            out.back().note = n;
        }
    }

    std::vector<check_record> out;
    nlohmann::json data = nlohmann::json::object();

private:
    double effective(double tol) const
    {
        return (cfg_.tol && tol > 0) ? *cfg_.tol : tol;
    }

    const suite_config &cfg_;
    int m_;
    int trial_;
};

// Stream for in-suite draws, decorrelated from the parameter sampler.
inline std::mt19937_64 aux_rng(std::uint64_t seed)
{
    return std::mt19937_64(seed ^ 0xd1b54a32d192ed03ULL);
}

inline cx uniform_complex(std::mt19937_64 &rng, real lo, real hi)
{
    std::uniform_real_distribution<double> u(static_cast<double>(lo), static_cast<double>(hi));
    const double re = u(rng);
    return {real(re), real(u(rng))};
}

inline std::vector<lattice_spec<real>> lattices(const suite_config &cfg)
{
    std::vector<lattice_spec<real>> ls;
    auto make = [&](cx w2) {
        lattice_spec<real> l;
        l.omega2 = w2;
        if (cfg.trunc) {
            l.n1 = *cfg.trunc;
        }
        return l;
    };
    if (cfg.omega2) {
        ls.push_back(make(cx(cfg.omega2->real(), cfg.omega2->imag())));
    } else {
        ls.push_back(make(cx(0, 0.8)));
        ls.push_back(make(cx(1, 1.5)));
    }
    return ls;
}

inline std::string lattice_tag(const lattice_spec<real> &l)
{
    std::ostringstream os;
    os << "w2=" << static_cast<double>(l.omega2.real()) << (l.omega2.imag() < 0 ? "" : "+")
       << static_cast<double>(l.omega2.imag()) << "i";
    return os.str();
}

inline std::string fmt(double x)
{
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

inline exponent_set<real> sample_for(int m, std::uint64_t seed, int trial)
{
    return sample_parameters<real>(m, seed, trial % 2 == 1 ? sample_mode::complex : sample_mode::real01);
}

inline nlohmann::json matrix_to_json(const cmatrix<real> &a)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            row.push_back(complex_to_json(a(i, j)));
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------- params
inline void suite_params(recorder &rec, int m, std::uint64_t seed, int trial)
{
    const auto mode = trial % 2 == 1 ? sample_mode::complex : sample_mode::real01;
    const auto e = sample_parameters<real>(m, seed, mode);
    rec.run("params.trace", "trace condition a1 + (m-1) a2 + sum(b - c) = 0", 1e-12, [&] { return e.trace_residual(); });
    rec.flag("params.genericity", "sampled exponents avoid integer differences",
             [&] { return validate_genericity(e).violations.empty(); });
    rec.flag("params.deterministic", "sampling is a pure function of (m, seed, mode)", [&] {
        const auto f = sample_parameters<real>(m, seed, mode);
        return f.b == e.b && f.c == e.c && f.a1 == e.a1 && f.a2 == e.a2 && f.k1 == e.k1 && f.k2 == e.k2;
    });
    rec.run("params.json_roundtrip", "parameter file round trip", 1e-15, [&] {
        const auto f = exponent_set_from_json<real>(exponent_set_to_json(e));
        real r = std::abs(f.a1 - e.a1) + std::abs(f.a2 - e.a2);
        for (int i = 0; i < m; ++i) {
            r = std::max({r, std::abs(f.b[i] - e.b[i]), std::abs(f.c[i] - e.c[i])});
        }
        return r;
    });
    for (auto want : {positivity::column1, positivity::column2, positivity::neither}) {
        if (want == positivity::neither && m < 2) {
            continue;
        }
        rec.flag(std::string("params.positivity.") + to_string(want),
                 "interlacing classification and the sign of a2 - a1", [&] {
                     const auto f = construct_interlaced<real>(m, seed + static_cast<std::uint64_t>(want), want);
                     const auto got = check_positivity_conditions(f);
                     const real d = (f.a2 - f.a1).real();
                     if (got != want) {
                         return false;
                     }
                     return want == positivity::neither || (want == positivity::column1 ? d > 0 : d < 0);
                 });
    }
}

// ---------------------------------------------------------------- identities
inline void suite_identities(recorder &rec, int m, std::uint64_t seed, int trials)
{
    const int n = std::max(20, trials);
    for (auto id : all_identities()) {
        const int mm = std::min(6, std::max(m, min_order(id)));
        rec.flag(std::string("identities.") + to_string(id), "exact rational identity at random integer points", [&] {
            return check_rational_identity(id, mm, n, seed).pass;
        });
    }
    rec.flag("identities.canary", "a corrupted identity is rejected", [&] {
        return !check_rational_identity(rational_identity::canary, std::min(6, std::max(m, 2)), n, seed).pass;
    });
}

// ---------------------------------------------------------------- residue
inline void suite_residue(recorder &rec, int m, std::uint64_t seed, int trial)
{
    const auto e = sample_for(m, seed, trial);
    const auto t = build_residue_triple(e);
    const auto f = make_residue_form(e, t);
    const cmatrix<real> id = identity<real>(e.size());
    rec.run("residue.sum", "A + B + C = 0", 1e-12, [&] { return rel_residual(cmatrix<real>(t.A + t.B), cmatrix<real>(-t.C)); });
    rec.run("residue.eig_b", "B v_i = b_i v_i", 1e-10,
            [&] { return rel_residual(cmatrix<real>(t.B * t.V), cmatrix<real>(t.V * diag(e.b))); });
    rec.run("residue.eig_c", "C w_i = -c_i w_i", 1e-10,
            [&] { return rel_residual(cmatrix<real>(t.C * t.W), cmatrix<real>(-t.W * diag(e.c))); });
    rec.run("residue.eig_a", "A u = a1 u", 1e-10, [&] { return rel_residual(cvector<real>(t.A * t.u), cvector<real>(e.a1 * t.u)); });
    rec.run("residue.a_action", "A x = a2 x - (x, u) u", 1e-9, [&] {
        std::mt19937_64 rng = aux_rng(seed);
        real r = 0;
        for (int k = 0; k < 3; ++k) {
            cvector<real> x(m);
            for (int i = 0; i < m; ++i) {
                x(i) = uniform_complex(rng, -1, 1);
            }
            const cvector<real> rhs = e.a2 * x - bilinear(f.gram, x, t.u) * t.u;
            r = std::max(r, rel_residual(cvector<real>(t.A * x), rhs));
        }
        return r;
    });
    if (m >= 2) {
        rec.flag("residue.rank_a", "A - a2 has rank one", [&] { return numerical_rank(cmatrix<real>(t.A - e.a2 * id), real(1e-9)) == 1; });
    }
    rec.flag("residue.full_rank", "B and C are invertible", [&] {
        return numerical_rank(t.B, real(1e-12)) == m && numerical_rank(t.C, real(1e-12)) == m;
    });
    rec.flag("residue.flags", "eigenvector flags in general position", [&] { return check_flag_general_position(t); });
    rec.run("residue.form_v", "v-basis Gram is diag(nu^2)", 1e-9, [&] { return rel_residual(f.gram_v, diag(f.nu2)); });
    rec.run("residue.form_w", "w-basis Gram is diag(mu^2)", 1e-9, [&] { return f.w_residual; });
    rec.run("residue.symmetric", "residue form is symmetric", 1e-12,
            [&] { return rel_residual(f.gram, cmatrix<real>(f.gram.transpose())); });
}

// ---------------------------------------------------------------- flows
inline void suite_flows(recorder &rec, int m, std::uint64_t seed, int trial)
{
    const auto e = sample_for(m, seed, trial);
    const auto t = build_residue_triple(e);
    const auto ops = build_flow_operators(e, t);
    std::mt19937_64 rng = aux_rng(seed);
    const cx t1 = uniform_complex(rng, -0.5, 0.5), t2 = uniform_complex(rng, -0.5, 0.5);
    const cvector<real> one = ones<real>(e.size());
    const cmatrix<real> id = identity<real>(e.size());
    rec.run("flows.xe", "X e = 0", 1e-10, [&] { return max_abs(cvector<real>(ops.X * one)) / std::max(real(1), max_abs(ops.X)); });
    rec.run("flows.su", "S u = 0", 1e-10, [&] {
        return max_abs(cvector<real>(ops.S * t.u)) / std::max(real(1), max_abs(ops.S) * max_abs(t.u));
    });
    rec.run("flows.ex_group", "EX(t1) EX(t2) = EX(t1 + t2)", 1e-9,
            [&] { return rel_residual(cmatrix<real>(ex_matrix(e, t1) * ex_matrix(e, t2)), ex_matrix(e, t1 + t2)); });
    rec.run("flows.ey_group", "EY(t1) EY(t2) = EY(t1 + t2)", 1e-9,
            [&] { return rel_residual(cmatrix<real>(ey_matrix(e, t1) * ey_matrix(e, t2)), ey_matrix(e, t1 + t2)); });
    rec.run("flows.ex_expm", "EX(t) equals the exponential of X t", 1e-8,
            [&] { return rel_residual(ex_matrix(e, t1), expm(cmatrix<real>(ops.X * t1))); });
    rec.run("flows.ey_expm", "EY(t) equals the exponential of Y t", 1e-8,
            [&] { return rel_residual(ey_matrix(e, t2), expm(cmatrix<real>(ops.Y * t2))); });
    rec.run("flows.ex_fixes_e", "EX(t) e = e", 1e-10, [&] { return rel_residual(cvector<real>(ex_matrix(e, t1) * one), one); });
    rec.run("flows.z_inverse", "Z Z^-1 = Id for the closed-form inverse", 1e-9, [&] {
        const auto z = z_matrix(e, t1);
        return rel_residual(cmatrix<real>(z.Z * z.Z_inv), id);
    });
    rec.run("flows.z_fixes_e", "Z e = e", 1e-9, [&] { return rel_residual(cvector<real>(z_matrix(e, t1).Z * one), one); });
    rec.run("flows.z_at_zero", "Z(0) = W^-1 V", 1e-9,
            [&] { return rel_residual(z_matrix(e, cx(0)).Z, cmatrix<real>(invert(t.W) * t.V)); });
    rec.run("flows.z_ex", "Z^-1(t1) Z(t2) = EX(t2 - t1)", 1e-9, [&] {
        return rel_residual(cmatrix<real>(z_matrix(e, t1).Z_inv * z_matrix(e, t2).Z), ex_matrix(e, t2 - t1));
    });
    rec.run("flows.z_ey", "Z(t1) Z^-1(t2) = EY(t2 - t1)", 1e-9, [&] {
        return rel_residual(cmatrix<real>(z_matrix(e, t1).Z * z_matrix(e, t2).Z_inv), ey_matrix(e, t2 - t1));
    });
    rec.run("flows.evolve_a1", "A(t1, t2) u = a1(t1, t2) u", 1e-9, [&] {
        const auto s = evolve(e, t1, t2);
        return rel_residual(cvector<real>(s.A * t.u), cvector<real>(s.a1 * t.u));
    });
    rec.run("flows.evolve_a_action", "A(t1, t2) x = a2(t1, t2) x - (x, u) u", 1e-9, [&] {
        const auto s = evolve(e, t1, t2);
        const auto tp = tau_product(e, t1, t2);
        real r = 0;
        for (int k = 0; k < m; ++k) {
            const cvector<real> x = identity<real>(e.size()).col(k);
            const cvector<real> rhs = s.a2 * x - bilinear(tp.gram, x, t.u) * t.u;
            r = std::max(r, rel_residual(cvector<real>(s.A * x), rhs));
        }
        return r;
    });
    rec.run("flows.uu", "(u, u) = a2 - a1 at (t1, t2)", 1e-9, [&] {
        const auto s = evolve(e, t1, t2);
        const cmatrix<real> g = tau_product(e, t1, t2).gram, u = t.u;
        const real mag = product_magnitude(u, g, u);
        return std::abs(bilinear(g, t.u, t.u) - (s.a2 - s.a1)) / std::max({real(1), std::abs(s.a2 - s.a1), mag});
    });
    rec.run("flows.flow_equation", "dB/dt + [B, S] - k1 = 0 by central differences", 1e-6, [&] {
        const real h = 1e-5;
        const cmatrix<real> b0 = evolve(e, t1, cx(0)).B;
        const cmatrix<real> db = (evolve(e, t1 + h, cx(0)).B - evolve(e, t1 - h, cx(0)).B) / (2 * h);
        const cmatrix<real> lhs = db + b0 * ops.S - ops.S * b0;
        const real mag = max_abs(db) + real(2) * max_abs(b0) * max_abs(ops.S);
        return max_abs(cmatrix<real>(lhs - e.k1 * id)) / std::max(real(1), mag);
    });
    rec.run("flows.tau_w_diag", "w(t2)-basis Gram is diag(mu^2(t1 + t2))", 1e-9, [&] { return tau_product(e, t1, t2).w_diag_residual; });
    rec.run("flows.tau_change", "v(t1) in the w(t2) basis", 1e-9, [&] { return tau_product(e, t1, t2).change_residual; });
    rec.run("flows.tau_cross", "cross pairing (v_i(t1), w_j(t2))", 1e-9, [&] { return tau_product(e, t1, t2).cross_residual; });
    rec.run("flows.plus_form", "(+) form Gram in the v(t2) basis", 1e-9, [&] { return extended_products(e, t1, t2).plus_residual; });
    rec.run("flows.minus_form", "(-) form Gram in the w(t2) basis", 1e-9, [&] { return extended_products(e, t1, t2).minus_residual; });
    rec.run("flows.transition_plus", "v(t1) in the v(t2) basis", 1e-9, [&] { return extended_products(e, t1, t2).transition_plus; });
    rec.run("flows.transition_minus", "w(t1) in the w(t2) basis", 1e-9, [&] { return extended_products(e, t1, t2).transition_minus; });
    const cx tj(real(0.3) + real(0.4) * real(std::uniform_real_distribution<double>(0, 1)(rng)), 0);
    rec.run("flows.jordan_det", "determinant of the Jordan normalizer", 1e-9, [&] { return jordan_normalizer(e, tj).det_residual; });
    rec.run("flows.jordan_block", "EX(t) is conjugate to one Jordan block", 1e-8,
            [&] { return jordan_normalizer(e, tj).conjugation_residual; });
    rec.run("flows.vandermonde", "EX and EY through Vandermonde matrices", 1e-8, [&] {
        const auto v = vandermonde_check(e, t1);
        return std::max(v.residual_x, v.residual_y);
    });
    rec.run("flows.quaternion_algebra", "site quaternion relations", 1e-10, [&] {
        const auto q = quaternion_matrices(e, t1, t2);
        const cmatrix<real> id2 = identity<real>(2 * e.size());
        return std::max({product_residual(q.i, q.i, cmatrix<real>(-id2)), product_residual(q.j, q.j, cmatrix<real>(-id2)),
                         product_residual(q.k, q.k, cmatrix<real>(-id2)), product_residual(q.i, q.j, q.k),
                         product_residual(q.j, q.k, q.i), product_residual(q.k, q.i, q.j)});
    });
    rec.run("flows.quaternion_gram", "quaternions preserve the block form up to sign", 1e-9, [&] {
        const auto q = quaternion_matrices(e, t1, t2);
        real r = 0;
        for (const cmatrix<real> *x : {&q.i, &q.j, &q.k}) {
            r = std::max(r, signed_congruence_residual(*x, q.gram, *x, q.gram));
        }
        return r;
    });
}

// ---------------------------------------------------------------- cauchy
inline void cauchy_battery(recorder &rec, const std::string &prefix, const cauchy_kind<real> &k, const exponent_set<real> &e,
                           double tol_inv, double tol_det, double tol_ndm, const std::string &note)
{
    const bool ell = k.flavor == cauchy_flavor::elliptic;
    real tail = 0;
    rec.run(prefix + ".inverse", "closed-form inverse of the Cauchy matrix", tol_inv, [&] {
        const auto r = cauchy_inverse_residual(k, e);
        tail = std::max(tail, r.tail_bound);
        return r.residual;
    });
    rec.note_last(note);
    rec.run(prefix + ".determinant", "closed-form Cauchy determinant", tol_det, [&] {
        const auto r = cauchy_determinant_residual(k, e);
        tail = std::max(tail, r.tail_bound);
        return r.residual;
    });
    rec.note_last(note);
    rec.run(prefix + ".ndm", "N D M is complex orthogonal", tol_ndm, [&] {
        const auto r = ndm_orthogonality(e, k);
        tail = std::max(tail, r.tail_bound);
        return r.residual;
    });
    rec.note_last(note);
    if (ell) {
        rec.run(prefix + ".tail", "relative tail bound of the sn entries", 1e-10, [&] { return tail; });
        rec.note_last(note);
    }
}

inline void suite_cauchy(recorder &rec, const suite_config &cfg, int m, std::uint64_t seed, int trial)
{
    const auto e = sample_for(m, seed, trial);
    std::mt19937_64 rng = aux_rng(seed);
    const bool all = !cfg.kind;
    if (all || *cfg.kind == cauchy_flavor::rational) {
        const cx tau = uniform_complex(rng, -0.3, 0.3);
        cauchy_battery(rec, "cauchy.rational", cauchy_kind<real>::rational(tau), e, 1e-10, 1e-9, 1e-9, {});
    }
    if (all || *cfg.kind == cauchy_flavor::trig) {
        cauchy_battery(rec, "cauchy.trig", cauchy_kind<real>::trig(), e, 1e-10, 1e-9, 1e-9, {});
    }
    if (all || *cfg.kind == cauchy_flavor::elliptic) {
        const auto ls = lattices(cfg);
        for (std::size_t li = 0; li < ls.size(); ++li) {
            const std::string prefix = "cauchy.elliptic.L" + std::to_string(li + 1);
            cauchy_battery(rec, prefix, cauchy_kind<real>::elliptic(ls[li]), e, 1e-8, 1e-9, 1e-8, lattice_tag(ls[li]));
        }
        rec.run("cauchy.trig_limit", "elliptic closed-form inverse degenerates to the trig one", 1e-6, [&] {
            lattice_spec<real> l;
            l.omega2 = cx(0, 30);
            const cmatrix<real> ell = cauchy_inverse_closed_form(cauchy_kind<real>::elliptic(l), e);
            const cmatrix<real> trig = cauchy_inverse_closed_form(cauchy_kind<real>::trig(), e);
            // D_ell -> pi D_trig, so D_ell^-1 -> D_trig^-1 / pi.
            return max_abs(cmatrix<real>(ell * pi_v<real> - trig)) / std::max(real(1), max_abs(trig));
        });
    }
}

// ---------------------------------------------------------------- elliptic
inline void suite_elliptic(recorder &rec, const suite_config &cfg, std::uint64_t seed)
{
    std::mt19937_64 rng = aux_rng(seed);
    for (const auto &l : lattices(cfg)) {
        const std::string tag = lattice_tag(l);
        // Sample points well inside a fundamental cell, away from the lattice.
        cx z;
        for (;;) {
            z = cx(real(0.1) + real(0.8) * real(std::uniform_real_distribution<double>(0, 1)(rng)), 0) +
                real(std::uniform_real_distribution<double>(0.1, 0.9)(rng)) * l.omega2;
            if (distance_to_integer_csc(z) > real(0.05)) {
                break;
            }
        }
        try {
            const auto a = inv_sn(z, l), b = inv_sn_lattice(z, l);
            rec.bounded("elliptic.two_route", "csc series and lattice sum agree within their tail bounds",
                        static_cast<double>(std::abs(a.value - b.value)),
                        static_cast<double>(std::max(a.tail_bound, b.tail_bound)), tag);
            rec.run("elliptic.tail", "csc-series tail bound", 1e-10, [&] { return a.tail_bound; });
            rec.note_last(tag);
        } catch (const std::exception &ex) {
            rec.bounded("elliptic.two_route", "csc series and lattice sum agree within their tail bounds",
                        std::numeric_limits<double>::quiet_NaN(), 0, ex.what());
        }
        rec.run("elliptic.antiperiod", "1/sn(z + omega1) = -1/sn(z)", 1e-10,
                [&] { return rel_residual(inv_sn(cx(z + l.omega1), l).value, cx(-inv_sn(z, l).value)); });
        rec.note_last(tag);
        rec.run("elliptic.period", "1/sn(z + omega2) = 1/sn(z)", 1e-10,
                [&] { return rel_residual(inv_sn(cx(z + l.omega2), l).value, inv_sn(z, l).value); });
        rec.note_last(tag);
        rec.run("elliptic.odd", "1/sn is odd", 1e-10, [&] { return rel_residual(inv_sn(cx(-z), l).value, cx(-inv_sn(z, l).value)); });
        rec.note_last(tag);
        rec.run("elliptic.pole", "z/sn(z) -> 1 at the origin", 1e-6, [&] {
            const cx s(1e-4, 0.5e-4);
            return std::abs(s * inv_sn(s, l).value - real(1));
        });
        rec.note_last(tag);
    }
    const cx w = uniform_complex(rng, 0.1, 0.4);
    rec.run("elliptic.trig_limit", "1/sn tends to pi/sin(pi z) as Im omega2 grows", 1e-12, [&] {
        lattice_spec<real> l;
        l.omega2 = cx(0, 40);
        return rel_residual(inv_sn(w, l).value, cx(pi_v<real> / sin_pi(w)));
    });
    rec.run("elliptic.csc_partial_fraction", "alternating partial fractions of pi/sin(pi z)", 1e-8, [&] {
        return rel_residual(csc_partial_fraction(w, cfg.trunc ? *cfg.trunc : 400), cx(pi_v<real> / sin_pi(w)));
    });
}

// ---------------------------------------------------------------- series
inline void suite_series(recorder &rec, int m, std::uint64_t seed)
{
    std::mt19937_64 rng = aux_rng(seed);
    const cx z = uniform_complex(rng, -0.4, 0.4);
    rec.run("series.pfq_log", "2F1(1,1;2;z) = -log(1-z)/z", 1e-12, [&] {
        const auto f = hyper_pfq<real>({cx(1), cx(1)}, {cx(2)}, z, 120);
        return rel_residual(f.value, cx(-std::log(cx(real(1) - z)) / z));
    });
    const cx a = uniform_complex(rng, 0.1, 2.0);
    rec.run("series.pfq_binomial", "1F0(a;;z) = (1-z)^-a", 1e-12, [&] {
        const auto f = hyper_pfq<real>({a}, {}, z, 120);
        return rel_residual(f.value, cx(std::pow(cx(real(1) - z), -a)));
    });
    rec.run("series.gamma_reflection", "Gamma(z) Gamma(1-z) sin(pi z) / pi = 1", 1e-10, [&] {
        const cx x = uniform_complex(rng, -2.5, 2.5);
        return std::abs(complex_gamma(x) * complex_gamma(cx(real(1) - x)) * sin_pi(x) / pi_v<real> - real(1));
    });
    rec.run("series.pochhammer", "(x)_n = Gamma(x+n)/Gamma(x)", 1e-10, [&] {
        return rel_residual(pochhammer(a, 7), cx(complex_gamma(cx(a + real(7))) / complex_gamma(a)));
    });
    const auto e0 = sample_parameters<real>(m, seed);
    const auto e = with_a2_zero(e0);
    const auto t = build_residue_triple(e);
    for (auto p : {base_point::zero, base_point::infinity}) {
        const std::string tag = to_string(p);
        rec.run("series.frobenius_" + tag, "recursion coefficients equal the closed form alpha EX(n) v", 1e-9, [&] {
            real r = 0;
            for (int i = 0; i < m; ++i) {
                r = std::max(r, mhgs_frobenius(e, t, p, i, 41).closed_form_residual);
            }
            return r;
        });
        rec.run("series.mhgs_residual_" + tag, "Frobenius series solves the system", 1e-8, [&] {
            const cx zz = p == base_point::zero ? cx(0.3) : cx(3, 0.5);
            real r = 0;
            for (int i = 0; i < m; ++i) {
                r = std::max(r, mhgs_residual(mhgs_frobenius(e, t, p, i, p == base_point::zero ? 60 : 80, 0), t, zz));
            }
            return r;
        });
        rec.run("series.component_" + tag, "components through mF(m-1) closed forms", 1e-8, [&] {
            const cx zz = p == base_point::zero ? cx(0.2, 0.05) : cx(5, 0.5);
            real r = 0;
            for (int i = 0; i < m; ++i) {
                const cvector<real> v = mhgs_frobenius(e, t, p, i, 120, 0).evaluate(zz);
                const real s = std::max(max_abs(v), std::numeric_limits<real>::min());
                for (int j = 0; j < m; ++j) {
                    r = std::max(r, std::abs(mhgs_component_closed_form(e, t, p, i, j, zz, 120) - v(j)) / s);
                }
            }
            return r;
        });
        rec.run("series.ghge_" + tag, "local basis solves the scalar equation", 1e-10, [&] {
            real r = 0;
            for (int j = 0; j < m; ++j) {
                r = std::max(r, ghge_local_basis(e0, p, j, p == base_point::zero ? cx(0.25, 0.1) : cx(4, 1), 80).residual);
            }
            return r;
        });
    }
    for (const cx z0 : {std::polar(real(0.8), real(2.0)), std::polar(real(0.9), real(-1.0)), std::polar(real(0.75), real(0.7))}) {
        continuation_result<real> c;
        rec.run("series.continuation", "continuation from 0 to infinity through the connection coefficients", 1e-6, [&] {
            c = continuation_check(e, z0);
            return c.residual;
        });
        rec.note_last("fitted constant |k| = " + fmt(static_cast<double>(std::abs(c.fitted_constant))));
    }
    rec.flag("series.independence", "Frobenius solutions at 0 are independent",
             [&] { return frobenius_independence(e, cx(0.3), 60) > real(1e-8); });
    rec.run("series.radius", "coefficient growth has radius one", 0.1, [&] {
        const auto s = mhgs_frobenius(e, t, base_point::zero, 0, 201, 0);
        const real n = s.coeffs.back().norm();
        return std::abs(std::pow(n, real(1) / real(200)) - real(1));
    });
}

// ---------------------------------------------------------------- monodromy
inline void suite_monodromy(recorder &rec, int m, std::uint64_t seed, int trial)
{
    const auto e = sample_parameters<real>(m, seed);
    const auto mt = build_monodromy(e);
    const auto r = check_monodromy(e, mt);
    rec.run("monodromy.product", "M_inf M1 M0 = Id", 1e-10, [&] { return r.product; });
    rec.run("monodromy.m0_inverse", "closed-form inverse of M0", 1e-10, [&] { return r.m0_inverse; });
    rec.run("monodromy.eig_p", "M0 p_i = e(b_i) p_i", 1e-10, [&] { return r.eig_p; });
    rec.run("monodromy.eig_q", "M_inf q_i = e(-c_i) q_i", 1e-10, [&] { return r.eig_q; });
    rec.run("monodromy.eig_r", "M1 r = e(a1) r", 1e-10, [&] { return r.eig_r; });
    rec.run("monodromy.sum_p", "sum of p_i is r", 1e-10, [&] { return r.sum_p; });
    rec.run("monodromy.sum_q", "sum of q_i is r", 1e-10, [&] { return r.sum_q; });
    rec.flag("monodromy.m1_rank", "M1 - e(a2) has rank one", [&] { return r.m1_rank == 1; });
    rec.run("monodromy.p_from_q", "P = Q K", 1e-9, [&] { return r.p_from_q; });
    rec.run("monodromy.p_from_q_cauchy", "K through the trigonometric Cauchy inverse", 1e-9, [&] { return r.p_from_q_cauchy; });
    rec.run("monodromy.pinv_q", "closed form of P^-1 Q", 1e-9, [&] { return r.pinv_q; });
    rec.run("monodromy.phase", "P^-1 Q has the predicted phases", 1e-9, [&] { return r.phase_imag; });
    const auto tf = hermitian_form_trig(e, mt);
    rec.run("monodromy.hermitian", "invariant form is hermitian", 1e-9, [&] { return tf.hermitian_residual; });
    rec.run("monodromy.q_basis", "Q-basis Gram is diag(mu^2)", 1e-9, [&] { return tf.q_residual; });
    rec.run("monodromy.invariance_0", "M0 preserves the hermitian form", 1e-9, [&] { return tf.invariance[0]; });
    rec.run("monodromy.invariance_1", "M1 preserves the hermitian form", 1e-9, [&] { return tf.invariance[1]; });
    rec.run("monodromy.invariance_inf", "M_inf preserves the hermitian form", 1e-9, [&] { return tf.invariance[2]; });
    rec.flag("monodromy.form_unique", "invariant hermitian forms span one dimension",
             [&] { return invariant_form_dimension(mt).dimension == 1; });
    for (auto want : {positivity::column1, positivity::column2, positivity::neither}) {
        if (want == positivity::neither && m < 2) {
            continue;
        }
        rec.flag(std::string("monodromy.definite.") + to_string(want), "form is definite iff an interlacing column holds", [&] {
            const auto f = construct_interlaced<real>(m, seed + 17 * static_cast<std::uint64_t>(want), want);
            return hermitian_form_trig(f).sig.definite() == (want != positivity::neither);
        });
    }
    const auto e0 = with_a2_zero(e);
    rec.run("monodromy.frobenius_loop", "continuation around 0 multiplies by e(b_i)", 1e-8, [&] { return frobenius_loop_residual(e0); });
    rec.run("monodromy.rank1_quotient", "connection coefficients and P-from-Q differ by a rank-one factor", 1e-8,
            [&] { return rank1_quotient_residual(e0); });
    if (trial == 0) {
        rec.data["exponents"] = exponent_set_to_json(e);
        rec.data["M0"] = matrix_to_json(mt.M0);
        rec.data["M1"] = matrix_to_json(mt.M1);
        rec.data["Minf"] = matrix_to_json(mt.Minf);
        rec.data["P"] = matrix_to_json(mt.P);
        rec.data["Q"] = matrix_to_json(mt.Q);
        rec.data["r"] = matrix_to_json(cmatrix<real>(mt.r));
        rec.data["gram"] = matrix_to_json(tf.gram);
    }
}

// ---------------------------------------------------------------- fock
inline void suite_fock(recorder &rec, const suite_config &cfg, int m, std::uint64_t seed)
{
    const auto e = sample_parameters<real>(m, seed);
    const auto t = build_residue_triple(e);
    std::mt19937_64 rng = aux_rng(seed);
    std::uniform_int_distribution<int> site(-1, 1);
    const fermion_kind kinds[] = {fermion_kind::f0, fermion_kind::f0_dag, fermion_kind::finf, fermion_kind::finf_dag};
    const auto ls = lattices(cfg);
    for (std::size_t li = 0; li < ls.size(); ++li) {
        const auto &l = ls[li];
        const std::string p = "fock.L" + std::to_string(li + 1);
        const std::string tag = lattice_tag(l);
        std::vector<std::pair<int, int>> sites{{0, 0}};
        while (sites.size() < 10) {
            sites.emplace_back(site(rng), site(rng));
        }
        rec.run(p + ".pairing_direct", "multiplication table equals the modified product of fermion vectors", 1e-10,
                [&] { return pairing_two_route_residual(e, l, sites); });
        rec.note_last(tag);
        rec.flag(p + ".pairing_symmetric", "pairing is symmetric", [&] {
            for (const auto &[n1, n2] : sites) {
                for (auto ka : kinds) {
                    for (auto kb : kinds) {
                        const fermion_label a{ka, 0, n1, n2}, b{kb, m - 1, n1, n2};
                        if (pairing(a, b, e, l) != pairing(b, a, e, l)) {
                            return false;
                        }
                    }
                }
            }
            return true;
        });
        rec.run(p + ".wick_routes", "matchings, recursion and Pfaffian agree", 1e-12, [&] {
            std::uniform_int_distribution<int> kd(0, 3), id(0, m - 1), sd(0, 1);
            real r = 0;
            for (int len : {2, 4, 6, 8}) {
                wick_word w;
                for (int k = 0; k < len; ++k) {
                    w.push_back({kinds[kd(rng)], id(rng), sd(rng), 0});
                }
                const cx a = wick_vev(w, e, l), b = wick_vev_recursive(w, e, l), c = wick_vev_pfaffian(w, e, l);
                const real s = std::max(real(1), std::abs(a));
                r = std::max({r, std::abs(a - b) / s, std::abs(a - c) / s});
                if (len == 2) {
                    r = std::max(r, std::abs(a - pairing(w[0], w[1], e, l)) / s);
                }
            }
            return r;
        });
        rec.flag(p + ".wick_trivial", "empty word gives 1, odd words give 0", [&] {
            const wick_word odd{{fermion_kind::f0, 0, 0, 0}, {fermion_kind::finf_dag, 0, 0, 0}, {fermion_kind::f0_dag, 0, 0, 0}};
            return wick_vev(wick_word{}, e, l) == cx(1) && wick_vev(odd, e, l) == cx(0);
        });
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const std::string ij = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                try {
                    const auto v = field_vev_elliptic(i, j, e, l);
                    rec.bounded(p + ".vev" + ij, "field VEV lattice sum equals 1/sn within the tail bounds",
                                static_cast<double>(v.gap), static_cast<double>(v.bound), tag);
                    rec.run(p + ".vev_bound" + ij, "combined tail bound of the VEV", 1e-6, [&] { return v.bound; });
                    rec.run(p + ".vev_mirror" + ij, "both orderings give the same VEV", 1e-10,
                            [&] { return rel_residual(v.vev.value, v.vev_mirror.value); });
                } catch (const std::exception &ex) {
                    rec.bounded(p + ".vev" + ij, "field VEV lattice sum equals 1/sn within the tail bounds",
                                std::numeric_limits<double>::quiet_NaN(), 0, ex.what());
                }
            }
        }
        rec.run(p + ".h_gram", "dual-basis Gram on H is diag(1/mu_ell^2)", 1e-8, [&] { return h_space_products(e, l).residual; });
        rec.note_last(tag);
        rec.run(p + ".h_prime_gram", "dual-basis Gram on H' is diag(1/nu_ell^2)", 1e-8,
                [&] { return h_space_products(e, l).residual_prime; });
        rec.note_last(tag);
        rec.run(p + ".quaternion_algebra", "quaternion relations on the field span", 1e-12,
                [&] { return quaternion_field_action(e, l, sites).algebra; });
        rec.run(p + ".quaternion_sites", "site-wise action reproduces the field action", 1e-9,
                [&] { return quaternion_field_action(e, l, sites).site_wise; });
        rec.run(p + ".quaternion_site_algebra", "quaternion relations of the site-wise matrices", 1e-10,
                [&] { return quaternion_field_action(e, l, sites).site_algebra; });
        rec.run(p + ".quaternion_gram", "site action preserves the block form up to sign", 1e-9,
                [&] { return quaternion_field_action(e, l, sites).gram_sign; });
    }
    lattice_spec<real> deg;
    deg.omega2 = cx(0, 40);
    if (cfg.trunc) {
        deg.n1 = *cfg.trunc;
    }
    rec.run("fock.vev_trig_limit", "elliptic VEV tends to pi/sin(pi x)", 1e-6, [&] {
        real r = 0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const cx x = e.a2 + e.b[i] - e.c[j];
                r = std::max(r, rel_residual(field_vev_elliptic(i, j, e, deg).vev.value, cx(pi_v<real> / sin_pi(x))));
            }
        }
        return r;
    });
    rec.run("fock.vev_trig", "trigonometric VEV equals pi/sin(pi x)", 1e-8, [&] {
        real r = 0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const cx x = e.a2 + e.b[i] - e.c[j];
                r = std::max(r, rel_residual(field_vev_trig(i, j, e), cx(pi_v<real> / sin_pi(x))));
            }
        }
        return r;
    });
    rec.run("fock.trig_lengths", "elliptic lengths tend to pi/nu_trig^2", 1e-6, [&] { return h_space_trig_limit(e, deg).length_residual; });
    rec.run("fock.trig_dual", "trigonometric dual-basis Gram is pi/mu_trig^2", 1e-6, [&] { return h_space_trig_limit(e, deg).dual_residual; });
    lattice_spec<real> rect;
    for (auto want : {positivity::column1, positivity::column2, positivity::neither}) {
        if (want == positivity::neither && m < 2) {
            continue;
        }
        rec.flag(std::string("fock.definite.") + to_string(want), "H form is definite iff an interlacing column holds", [&] {
            const auto f = construct_interlaced<real>(m, seed + 31 * static_cast<std::uint64_t>(want), want);
            return h_space_signature(f, rect).definite() == (want != positivity::neither);
        });
    }
}

// ---------------------------------------------------------------- cm
inline void suite_cm(recorder &rec, int m, std::uint64_t seed, int trial)
{
    std::mt19937_64 rng = aux_rng(seed);
    std::vector<cx> b, p;
    for (;;) {
        b.clear();
        p.clear();
        for (int i = 0; i < m; ++i) {
            b.push_back(uniform_complex(rng, -1, 1));
            p.push_back(uniform_complex(rng, -1, 1));
        }
        bool sep = true;
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                sep = sep && std::abs(b[i] - b[j]) > real(0.1);
            }
        }
        if (sep) {
            break;
        }
    }
    const auto q = cm_from_coordinates(b, p);
    cmatrix<real> g(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            g(i, j) = uniform_complex(rng, -1, 1);
        }
    }
    g += real(m) * identity<real>(static_cast<std::size_t>(m));
    const auto qg = gl_action(g, q);
    const cx tt = uniform_complex(rng, -0.5, 0.5);
    rec.run("cm.normal_form_subvariety", "normal form lies on [B, X] = v w - Id", 1e-10, [&] { return subvariety_residual(q); });
    rec.run("cm.gl_subvariety", "GL action preserves the subvariety", 1e-9, [&] { return subvariety_residual(qg); });
    rec.run("cm.moment_equivariance", "moment map is GL-equivariant", 1e-10, [&] {
        return rel_residual(moment_map(qg), cmatrix<real>(g * moment_map(q) * invert(g)));
    });
    rec.run("cm.roundtrip", "normal form recovers positions and momenta up to permutation", 1e-8,
            [&] { return permutation_match(cm_coordinates_of(cm_normal_form(qg)), cm_coordinates<real>{b, p}); });
    rec.run("cm.flow_subvariety", "flows k = 1, 2, 3 stay on the subvariety", 1e-9, [&] {
        real r = 0;
        for (int k = 1; k <= 3; ++k) {
            r = std::max(r, subvariety_residual(cm_flow(qg, k, tt)));
        }
        return r;
    });
    rec.run("cm.flow_compose", "flow times add", 1e-12, [&] {
        const cx s = uniform_complex(rng, -0.5, 0.5);
        return rel_residual(cm_flow(cm_flow(qg, 2, tt), 2, s).B, cm_flow(qg, 2, cx(tt + s)).B);
    });
    rec.run("cm.trace_invariants", "tr X^j is invariant under GL and the flows", 1e-9, [&] {
        real r = 0;
        cmatrix<real> x0 = q.X, x1 = qg.X;
        cmatrix<real> p0 = x0, p1 = x1;
        for (int j = 1; j <= m; ++j) {
            r = std::max(r, rel_residual(p1.trace(), p0.trace()));
            p0 = p0 * x0;
            p1 = p1 * x1;
        }
        const auto nf = cm_normal_form(cm_flow(qg, 2, tt));
        r = std::max(r, rel_residual(half_trace_x2(nf.X), half_trace_x2(q.X)));
        return r;
    });
    rec.run("cm.hamiltonian", "-H2 in coordinates equals tr X^2 / 2", 1e-10,
            [&] { return rel_residual(hamiltonian_h2(b, p), half_trace_x2(q.X)); });
    const auto e = sample_for(m, seed, trial);
    rec.flag("cm.link", "the triple's Calogero-Moser matrix lies on the subvariety", [&] { return mhgs_link_check(e); });
    if (m >= 2) {
        rec.flag("cm.link_canary", "a corrupted Calogero-Moser matrix is rejected", [&] {
            auto f = build_flow_operators(e);
            const cmatrix<real> bd = diag(e.b);
            f.X(0, 1) = -f.X(0, 1);
            const cmatrix<real> ee = ones<real>(e.size()) * ones<real>(e.size()).transpose();
            return max_abs(cmatrix<real>(f.X * bd - bd * f.X - ee + identity<real>(e.size()))) > real(1e-6);
        });
    }
}

struct task_output {
    std::vector<check_record> checks;
    nlohmann::json data = nlohmann::json::object();
};

inline task_output run_task(const suite_config &cfg, const std::string &suite, int trial)
{
    const std::uint64_t seed = child_seed(cfg.seed, suite, trial);
    recorder rec(cfg, cfg.m, trial);
    try {
        if (suite == "params") {
            suite_params(rec, cfg.m, seed, trial);
        } else if (suite == "identities") {
            suite_identities(rec, cfg.m, seed, cfg.trials);
        } else if (suite == "residue") {
            suite_residue(rec, cfg.m, seed, trial);
        } else if (suite == "flows") {
            suite_flows(rec, cfg.m, seed, trial);
        } else if (suite == "cauchy") {
            suite_cauchy(rec, cfg, cfg.m, seed, trial);
        } else if (suite == "elliptic") {
            suite_elliptic(rec, cfg, seed);
        } else if (suite == "series") {
            suite_series(rec, cfg.m, seed);
        } else if (suite == "monodromy") {
            suite_monodromy(rec, cfg.m, seed, trial);
        } else if (suite == "fock") {
            suite_fock(rec, cfg, cfg.m, seed);
        } else if (suite == "cm") {
            suite_cm(rec, cfg.m, seed, trial);
        }
    } catch (const std::exception &ex) {
        // Failure outside a guarded check (e.g. sampling): one failing record.
        rec.out.push_back({suite + ".setup", "suite setup", cfg.m, trial, std::numeric_limits<double>::quiet_NaN(), 0, false,
                           ex.what()});
    }
    return {std::move(rec.out), std::move(rec.data)};
}

} // namespace detail

inline void validate_config(const suite_config &cfg)
{
    if (!is_suite_name(cfg.suite)) {
        throw std::invalid_argument("unknown suite: " + cfg.suite);
    }
    if (cfg.m < 1 || cfg.m > 6) {
        throw std::invalid_argument("m must lie in [1, 6]");
    }
    if (cfg.trials < 1) {
        throw std::invalid_argument("trials must be positive");
    }
    if (cfg.tol && !(*cfg.tol > 0)) {
        throw std::invalid_argument("tol must be positive");
    }
    if (cfg.trunc && *cfg.trunc < 30) {
        throw std::invalid_argument("trunc must be at least 30");
    }
    if (cfg.omega2 && !(cfg.omega2->imag() > 0)) {
        throw std::invalid_argument("omega2 must have positive imaginary part");
    }
}

// Runs the configured suite(s). Tasks (suite, trial) run on a worker pool;
// the report is assembled in suite order and, within a suite, by
// (check id, trial), so it does not depend on the thread count.
inline report run_suite(const suite_config &cfg)
{
    validate_config(cfg);
    struct task {
        std::string suite;
        int trial;
    };
    std::vector<std::string> suites;
    if (cfg.suite == "all") {
        suites = suite_names();
    } else {
        suites.push_back(cfg.suite);
    }
    std::vector<task> tasks;
    for (const auto &s : suites) {
        const int n = s == "identities" ? 1 : cfg.trials;
        for (int t = 0; t < n; ++t) {
            tasks.push_back({s, t});
        }
    }
    const bool saved = acceleration_enabled().exchange(cfg.accelerate);
    std::vector<detail::task_output> outputs(tasks.size());
    const int nthreads = std::min<int>(resolve_threads(cfg.threads), static_cast<int>(tasks.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
            outputs[k] = detail::run_task(cfg, tasks[k].suite, tasks[k].trial);
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < nthreads; ++i) {
            pool.emplace_back(worker);
        }
    }
    acceleration_enabled().store(saved);

    report r;
    r.config = cfg;
    std::size_t k = 0;
    for (const auto &s : suites) {
        std::vector<check_record> block;
        for (; k < tasks.size() && tasks[k].suite == s; ++k) {
            block.insert(block.end(), outputs[k].checks.begin(), outputs[k].checks.end());
            if (!outputs[k].data.empty()) {
                r.data[s] = outputs[k].data;
            }
        }
        std::stable_sort(block.begin(), block.end(),
                         [](const auto &a, const auto &b) { return a.id != b.id ? a.id < b.id : a.trial < b.trial; });
        r.checks.insert(r.checks.end(), block.begin(), block.end());
    }
    return r;
}

// ---------------------------------------------------------------- report IO
inline nlohmann::ordered_json config_to_json(const suite_config &c)
{
    nlohmann::ordered_json j;
    j["version"] = version_string;
    j["suite"] = c.suite;
    j["m"] = c.m;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["tol"] = c.tol ? nlohmann::json(*c.tol) : nlohmann::json(nullptr);
    j["omega2"] = c.omega2 ? complex_to_json(*c.omega2) : nlohmann::json(nullptr);
    j["trunc"] = c.trunc ? nlohmann::json(*c.trunc) : nlohmann::json(nullptr);
    j["kind"] = c.kind ? nlohmann::json(to_string(*c.kind)) : nlohmann::json(nullptr);
    j["accelerate"] = c.accelerate;
    return j;
}

inline suite_config config_from_json(const nlohmann::json &j)
{
    suite_config c;
    c.suite = j.value("suite", c.suite);
    c.m = j.value("m", c.m);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    if (j.contains("tol") && !j["tol"].is_null()) {
        c.tol = j["tol"].get<double>();
    }
    if (j.contains("omega2") && !j["omega2"].is_null()) {
        c.omega2 = complex_from_json<double>(j["omega2"]);
    }
    if (j.contains("trunc") && !j["trunc"].is_null()) {
        c.trunc = j["trunc"].get<int>();
    }
    if (j.contains("kind") && !j["kind"].is_null()) {
        c.kind = parse_cauchy_flavor(j["kind"].get<std::string>());
    }
    c.accelerate = j.value("accelerate", true);
    return c;
}

// Keys keep insertion order. Non-finite residuals are written as null; the
// config is omitted when absent.
inline nlohmann::ordered_json report_to_json(const report &r)
{
    nlohmann::ordered_json j;
    if (r.config) {
        j["config"] = config_to_json(*r.config);
    }
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto &c : r.checks) {
        nlohmann::ordered_json k;
        k["id"] = c.id;
        k["paper_ref"] = c.paper_ref;
        k["m"] = c.m;
        k["trial"] = c.trial;
        k["residual"] = std::isfinite(c.residual) ? nlohmann::ordered_json(c.residual) : nlohmann::ordered_json(nullptr);
        k["tol"] = c.tol;
        k["pass"] = c.pass;
        if (!c.note.empty()) {
            k["note"] = c.note;
        }
        j["checks"].push_back(k);
    }
    j["summary"]["pass"] = r.passed();
    j["summary"]["fail"] = r.failed();
    if (!r.data.empty()) {
        j["data"] = r.data;
    }
    return j;
}

inline report report_from_json(const nlohmann::ordered_json &j)
{
    report r;
    if (j.contains("config")) {
        r.config = config_from_json(nlohmann::json(j["config"]));
    }
    for (const auto &k : j.at("checks")) {
        check_record c;
        c.id = k.at("id").get<std::string>();
        c.paper_ref = k.value("paper_ref", std::string());
        c.m = k.value("m", 0);
        c.trial = k.value("trial", 0);
        c.residual = k.at("residual").is_null() ? std::numeric_limits<double>::quiet_NaN() : k.at("residual").get<double>();
        c.tol = k.at("tol").get<double>();
        c.pass = k.at("pass").get<bool>();
        c.note = k.value("note", std::string());
        r.checks.push_back(std::move(c));
    }
    if (j.contains("data")) {
        r.data = nlohmann::json(j["data"]);
    }
    return r;
}

inline std::string report_to_text(const report &r)
{
    std::ostringstream os;
    os << std::left << std::setw(44) << "check" << std::right << std::setw(3) << "m" << std::setw(6) << "trial"
       << std::setw(13) << "residual" << std::setw(11) << "tol" << "  result\n";
    for (const auto &c : r.checks) {
        std::ostringstream res, tol;
        res << std::scientific << std::setprecision(3) << c.residual;
        tol << std::scientific << std::setprecision(1) << c.tol;
        os << std::left << std::setw(44) << c.id << std::right << std::setw(3) << c.m << std::setw(6) << c.trial
           << std::setw(13) << res.str() << std::setw(11) << tol.str() << "  " << (c.pass ? "pass" : "FAIL");
        if (!c.note.empty()) {
            os << "  " << c.note;
        }
        os << '\n';
    }
    os << "summary: " << r.passed() << " pass, " << r.failed() << " fail\n";
    return os.str();
}

} // namespace hgforge
