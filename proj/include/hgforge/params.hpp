// SPDX-License-Identifier: MIT
// Spectral data of a hypergeometric triple: sampling, validation and the
// interlacing test for sign-definiteness of the residue form.
#pragma once

#include "linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hgforge
{

// Eigenvalue data (m, a1, a2, b, c, k1, k2). b are the eigenvalues of B,
// -c those of C, a1 (simple) and a2 (multiplicity m-1) those of A.
template <typename T> struct exponent_set {
    int m = 0;
    cplx<T> a1, a2;
    std::vector<cplx<T>> b, c;
    cplx<T> k1{T(1)}, k2{T(1)};

    std::size_t size() const
    {
        return static_cast<std::size_t>(m);
    }

    // |a1 + (m-1) a2 + sum(b_i - c_i)|
    T trace_residual() const
    {
        cplx<T> s = a1 + T(m - 1) * a2;
        for (std::size_t i = 0; i < size(); ++i) {
            s += b[i] - c[i];
        }
        return std::abs(s);
    }

    // Re-derive a1 from the trace condition.
    void solve_a1()
    {
        cplx<T> s = T(m - 1) * a2;
        for (std::size_t i = 0; i < size(); ++i) {
            s += b[i] - c[i];
        }
        a1 = -s;
    }

    bool is_real(T tol = T(0)) const
    {
        auto ok = [tol](const cplx<T> &z) { return std::abs(z.imag()) <= tol; };
        return ok(a1) && ok(a2) && std::all_of(b.begin(), b.end(), ok) && std::all_of(c.begin(), c.end(), ok);
    }

    bool is_sorted_real() const
    {
        auto lt = [](const cplx<T> &x, const cplx<T> &y) { return x.real() < y.real(); };
        return is_real() && std::is_sorted(b.begin(), b.end(), lt) && std::is_sorted(c.begin(), c.end(), lt);
    }

    template <typename U> exponent_set<U> cast() const
    {
        auto cv = [](const cplx<T> &z) { return cplx<U>(static_cast<U>(z.real()), static_cast<U>(z.imag())); };
        exponent_set<U> r;
        r.m = m;
        r.a1 = cv(a1);
        r.a2 = cv(a2);
        r.k1 = cv(k1);
        r.k2 = cv(k2);
        for (const auto &x : b) {
            r.b.push_back(cv(x));
        }
        for (const auto &x : c) {
            r.c.push_back(cv(x));
        }
        return r;
    }
};

// Builds a set from b, c, a2 with a1 solved from the trace condition.
template <typename T>
exponent_set<T> make_exponent_set(std::vector<cplx<T>> b, std::vector<cplx<T>> c, cplx<T> a2, cplx<T> k1 = cplx<T>(1),
                                  cplx<T> k2 = cplx<T>(1))
{
    if (b.size() != c.size() || b.empty()) {
        throw std::invalid_argument("make_exponent_set: b and c must be non-empty and of equal length");
    }
    exponent_set<T> e;
    e.m = static_cast<int>(b.size());
    e.b = std::move(b);
    e.c = std::move(c);
    e.a2 = a2;
    e.k1 = k1;
    e.k2 = k2;
    e.solve_a1();
    return e;
}

enum class sample_mode { real01, complex };

// Distance from z to the nearest integer (complex: modulus of z - round(Re z)).
template <typename T> T distance_to_integer(const cplx<T> &z)
{
    return std::abs(cplx<T>(z.real() - std::round(z.real()), z.imag()));
}

struct genericity_violation {
    std::string kind; // "b-b", "c-c" or "b-c"
    int i = 0;
    int j = 0;
    double distance = 0;
};

struct validation_report {
    std::vector<genericity_violation> violations;
    double trace_residual = 0;
    bool ok(double trace_tol) const
    {
        return violations.empty() && trace_residual <= trace_tol;
    }
};

// Lists every difference b_i-b_j, c_i-c_j (i<j) and b_i-c_j within eps_int
// of an integer, plus the trace-condition residual. Never throws.
template <typename T> validation_report validate_genericity(const exponent_set<T> &e, T eps_int = T(1e-3))
{
    validation_report r;
    const int m = e.m;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const T db = distance_to_integer(e.b[i] - e.b[j]);
            if (db < eps_int) {
                r.violations.push_back({"b-b", i, j, double(db)});
            }
            const T dc = distance_to_integer(e.c[i] - e.c[j]);
            if (dc < eps_int) {
                r.violations.push_back({"c-c", i, j, double(dc)});
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const T d = distance_to_integer(e.b[i] - e.c[j]);
            if (d < eps_int) {
                r.violations.push_back({"b-c", i, j, double(d)});
            }
        }
    }
    r.trace_residual = double(e.trace_residual());
    return r;
}

// Deterministic sampler. b and c are sorted by real part; a1 comes from the
// trace condition. Beyond genericity it keeps every difference b_i - b_j and
// c_i - c_j (i != j) at least delta_sep away from the integers, and
// a2 + b_i - c_j at least delta_sep/2 away, since all weights divide by them.
template <typename T>
exponent_set<T> sample_parameters(int m, std::uint64_t seed, sample_mode mode = sample_mode::real01, T delta_sep = T(0.05),
                                  T eps_int = T(1e-3))
{
    if (m < 1) {
        throw std::invalid_argument("sample_parameters: m must be positive");
    }
    if (!(delta_sep > T(0)) || !(delta_sep < T(1) / T(2 * m))) {
        throw std::invalid_argument("sample_parameters: delta_sep must lie in (0, 1/(2m))");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto draw = [&]() {
        if (mode == sample_mode::real01) {
            return cplx<T>(T(u01(rng)), T(0));
        }
        const T re = T(u01(rng));
        return cplx<T>(re, T(u01(rng)));
    };
    auto by_real = [](const cplx<T> &x, const cplx<T> &y) { return x.real() < y.real(); };
    const int max_tries = 200000;
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<cplx<T>> b(static_cast<std::size_t>(m)), c(static_cast<std::size_t>(m));
        for (auto &x : b) {
            x = draw();
        }
        for (auto &x : c) {
            x = draw();
        }
        const cplx<T> a2 = draw();
        const cplx<T> k1(T(0.5 + u01(rng)), T(0));
        const cplx<T> k2(T(0.5 + u01(rng)), T(0));
        std::sort(b.begin(), b.end(), by_real);
        std::sort(c.begin(), c.end(), by_real);
        bool good = true;
        for (int i = 0; i < m && good; ++i) {
            for (int j = i + 1; j < m && good; ++j) {
                good = distance_to_integer(cplx<T>(b[j] - b[i])) >= delta_sep &&
                       distance_to_integer(cplx<T>(c[j] - c[i])) >= delta_sep;
            }
        }
        for (int i = 0; i < m && good; ++i) {
            for (int j = 0; j < m && good; ++j) {
                good = distance_to_integer(a2 + b[i] - c[j]) >= delta_sep / T(2);
            }
        }
        if (!good) {
            continue;
        }
        auto e = make_exponent_set<T>(b, c, a2, k1, k2);
        if (!validate_genericity(e, eps_int).violations.empty()) {
            continue;
        }
        return e;
    }
    throw std::runtime_error("sample_parameters: rejection sampling exhausted; delta_sep too large for m");
}

enum class positivity { column1, column2, neither };

inline const char *to_string(positivity p)
{
    switch (p) {
    case positivity::column1:
        return "Column1";
    case positivity::column2:
        return "Column2";
    default:
        return "Neither";
    }
}

// Interlacing chains that decide sign-definiteness of the residue form.
// Column 1: c_i - b_i < a2 for all i and a2 < c_{i+1} - b_i for i < m.
// Column 2: a2 < c_i - b_i for all i and c_{i-1} - b_i < a2 for i > 1.
template <typename T> positivity check_positivity_conditions(const exponent_set<T> &e)
{
    if (!e.is_sorted_real()) {
        throw std::invalid_argument("check_positivity_conditions: exponents must be real and sorted ascending");
    }
    const int m = e.m;
    const T a2 = e.a2.real();
    auto b = [&](int i) { return e.b[static_cast<std::size_t>(i)].real(); };
    auto c = [&](int i) { return e.c[static_cast<std::size_t>(i)].real(); };
    bool col1 = true, col2 = true;
    for (int i = 0; i < m; ++i) {
        col1 = col1 && (c(i) - b(i) < a2);
        if (i + 1 < m) {
            col1 = col1 && (a2 < c(i + 1) - b(i));
        }
        col2 = col2 && (a2 < c(i) - b(i));
        if (i > 0) {
            col2 = col2 && (c(i - 1) - b(i) < a2);
        }
    }
    if (col1) {
        return positivity::column1;
    }
    if (col2) {
        return positivity::column2;
    }
    return positivity::neither;
}

// Constructs real sorted data in [0,1) satisfying column 1, column 2 or
// neither, by interlacing 2m sorted points. Used by the definiteness tests.
template <typename T> exponent_set<T> construct_interlaced(int m, std::uint64_t seed, positivity want)
{
    if (m < 1 || (want == positivity::neither && m < 2)) {
        throw std::invalid_argument("construct_interlaced: m too small for the requested pattern");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<T> t(static_cast<std::size_t>(2 * m));
        for (auto &x : t) {
            x = T(0.02) + T(0.96) * T(u01(rng));
        }
        std::sort(t.begin(), t.end());
        bool sep = true;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            sep = sep && (t[i + 1] - t[i] > T(0.02));
        }
        if (!sep) {
            continue;
        }
        std::vector<T> x, c;
        for (int k = 0; k < 2 * m; ++k) {
            const bool even = (k % 2 == 0);
            bool to_c;
            if (want == positivity::column1) {
                to_c = even;
            } else if (want == positivity::column2) {
                to_c = !even;
            } else {
                // Pattern c c x x c x c x ...: two adjacent c break both chains.
                to_c = (k < 2) || (k >= 4 && even);
            }
            (to_c ? c : x).push_back(t[static_cast<std::size_t>(k)]);
        }
        if (x.size() != c.size()) {
            continue;
        }
        const T xmin = *std::min_element(x.begin(), x.end());
        const T a2 = xmin * T(0.1 + 0.8 * u01(rng));
        std::vector<cplx<T>> bb, cc;
        for (auto v : x) {
            bb.emplace_back(v - a2, T(0));
        }
        for (auto v : c) {
            cc.emplace_back(v, T(0));
        }
        auto e = make_exponent_set<T>(bb, cc, cplx<T>(a2, T(0)));
        if (!validate_genericity(e, T(1e-3)).violations.empty()) {
            continue;
        }
        if (check_positivity_conditions(e) != want) {
            continue;
        }
        return e;
    }
    throw std::runtime_error("construct_interlaced: failed to construct parameters");
}

} // namespace hgforge
