// SPDX-License-Identifier: MIT
// Exact-rational multi-point checker for the rational-function sum
// identities behind the closed forms. Both sides are rational functions of
// bounded degree, so equality at enough random integer points certifies the
// identity (Schwartz-Zippel).
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgforge
{

using rational = boost::multiprecision::cpp_rational;

enum class rational_identity {
    ex_group,  // EX(t1) EX(t2) = EX(t1+t2) entry sums
    jjprime_1, // partial-fraction sum over l >= 2
    g1_759,    // sum_l P(b_l) / prod_{k!=l}(b_l-b_k) = 0 for deg P <= m-2
    g1_760,    // sum_j prod_{k!=i}(b_j-c_k+t) / prod_{k!=j}(b_j-b_k) = 1
    winv_v,    // W^{-1} V = Z(0) entrywise sum
    z_ex,      // Z^{-1}(t1) Z(t2) = EX(t2-t1) row sums
    wd,        // triangular sum below the W D factorization
    frob_step, // first Frobenius step
    sum_nu2,   // sum_i nu_i^2(t) = sum_i (a2+b_i-c_i+t)
    canary     // frob_step with one sign flipped; must fail
};

inline const std::vector<rational_identity> &all_identities()
{
    static const std::vector<rational_identity> ids{
        rational_identity::ex_group, rational_identity::jjprime_1, rational_identity::g1_759,
        rational_identity::g1_760,   rational_identity::winv_v,    rational_identity::z_ex,
        rational_identity::wd,       rational_identity::frob_step, rational_identity::sum_nu2};
    return ids;
}

inline const char *to_string(rational_identity id)
{
    switch (id) {
    case rational_identity::ex_group:
        return "EX_GROUP";
    case rational_identity::jjprime_1:
        return "JJPRIME_1";
    case rational_identity::g1_759:
        return "G1_759";
    case rational_identity::g1_760:
        return "G1_760";
    case rational_identity::winv_v:
        return "WINV_V";
    case rational_identity::z_ex:
        return "Z_EX";
    case rational_identity::wd:
        return "WD";
    case rational_identity::frob_step:
        return "FROB_STEP";
    case rational_identity::sum_nu2:
        return "SUM_NU2";
    default:
        return "CANARY";
    }
}

// Smallest m the identity is meaningful for.
inline int min_order(rational_identity id)
{
    return id == rational_identity::jjprime_1 ? 2 : 1;
}

namespace detail
{

struct zero_denominator {
};

// Free variables of one trial.
struct oracle_point {
    std::vector<rational> b, c;
    rational a2, t, t1, t2;
};

inline rational qdiv(const rational &num, const rational &den)
{
    if (den == 0) {
        throw zero_denominator{};
    }
    return num / den;
}

// Product over k in [lo, hi) of f(k), skipping k == skip.
template <typename F> rational qprod(int lo, int hi, F f, int skip = -1)
{
    rational r = 1;
    for (int k = lo; k < hi; ++k) {
        if (k != skip) {
            r *= f(k);
        }
    }
    return r;
}

inline bool eval_ex_group(const oracle_point &p, int m)
{
    const auto &b = p.b;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            rational s = 0;
            for (int k = 0; k < m; ++k) {
                const rational n1 = qprod(0, m, [&](int l) { return rational(b[k] - b[l] + p.t1); }, i);
                const rational d1 = qprod(0, m, [&](int l) { return rational(b[k] - b[l]); }, k);
                const rational n2 = qprod(0, m, [&](int l) { return rational(b[j] - b[l] + p.t2); }, k);
                const rational d2 = qprod(0, m, [&](int l) { return rational(b[j] - b[l] + p.t1 + p.t2); }, i);
                s += qdiv(n1, d1) * qdiv(n2, d2);
            }
            if (s != 1) {
                return false;
            }
        }
    }
    return true;
}

inline bool eval_jjprime_1(const oracle_point &p, int m)
{
    const auto &b = p.b;
    rational s = 0;
    for (int l = 1; l < m; ++l) {
        s += qdiv(qprod(1, m, [&](int k) { return rational(b[0] - b[k] + p.t); }, l),
                  qprod(1, m, [&](int k) { return rational(b[l] - b[k]); }, l));
    }
    return s == 1;
}

inline bool eval_g1_759(const oracle_point &p, int m)
{
    for (int d = 0; d + 2 <= m; ++d) {
        rational s = 0;
        for (int l = 0; l < m; ++l) {
            s += qdiv(qprod(0, d, [&](int k) { return rational(p.b[l] - p.c[k]); }),
                      qprod(0, m, [&](int k) { return rational(p.b[l] - p.b[k]); }, l));
        }
        if (s != 0) {
            return false;
        }
    }
    return true;
}

inline bool eval_g1_760(const oracle_point &p, int m)
{
    for (int i = 0; i < m; ++i) {
        rational s = 0;
        for (int j = 0; j < m; ++j) {
            s += qdiv(qprod(0, m, [&](int k) { return rational(p.b[j] - p.c[k] + p.t); }, i),
                      qprod(0, m, [&](int k) { return rational(p.b[j] - p.b[k]); }, j));
        }
        if (s != 1) {
            return false;
        }
    }
    return true;
}

// 1-based transcription.
inline bool eval_winv_v(const oracle_point &p, int m)
{
    auto b = [&](int k) { return p.b[static_cast<std::size_t>(k - 1)]; };
    auto c = [&](int k) { return p.c[static_cast<std::size_t>(k - 1)]; };
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
            rational s = 0;
            for (int l = 1; l <= std::min(i, j); ++l) {
                const rational f1 = qdiv(qprod(1, l, [&](int k) { return rational(b(j) - b(k)); }, j),
                                         qprod(1, l + 1, [&](int k) { return rational(b(j) - c(k) + p.a2); }));
                const rational f2 = qdiv(qprod(1, l, [&](int k) { return rational(c(k) - c(i)); }),
                                         qprod(1, l + 1, [&](int k) { return rational(b(k) - c(i) + p.a2); }));
                s += f1 * (b(j) - c(i) + p.a2) * f2 * (b(l) - c(l) + p.a2);
            }
            if (s != 1) {
                return false;
            }
        }
    }
    return true;
}

inline bool eval_z_ex(const oracle_point &p, int m)
{
    const auto &b = p.b;
    const auto &c = p.c;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            rational s = 0;
            for (int l = 0; l < m; ++l) {
                rational t = 1;
                for (int k = 0; k < m; ++k) {
                    if (k != i) {
                        t *= qdiv(b[k] - c[l] + p.a2 + p.t1, b[j] - b[k] + p.t2 - p.t1);
                    }
                    if (k != l) {
                        t *= qdiv(b[j] - c[k] + p.a2 + p.t2, c[k] - c[l]);
                    }
                }
                s += t;
            }
            if (s != 1) {
                return false;
            }
        }
    }
    return true;
}

// 1-based in i and l.
inline bool eval_wd(const oracle_point &p, int m)
{
    auto b = [&](int k) { return p.b[static_cast<std::size_t>(k - 1)]; };
    auto c = [&](int k) { return p.c[static_cast<std::size_t>(k - 1)]; };
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
            rational s = 0;
            for (int l = 1; l <= i; ++l) {
                const rational f1 = qdiv(qprod(1, i + 1, [&](int k) { return rational(b(j) - c(k) + p.t); }, l),
                                         qprod(1, i, [&](int k) { return rational(b(j) - b(k) + p.t); }));
                const rational f2 = qdiv(qprod(1, i, [&](int k) { return rational(b(k) - c(l)); }),
                                         qprod(1, i + 1, [&](int k) { return rational(c(k) - c(l)); }, l));
                s += f1 * f2;
            }
            if (s != 1) {
                return false;
            }
        }
    }
    return true;
}

inline bool eval_frob_step(const oracle_point &p, int m, bool corrupt)
{
    const auto &b = p.b;
    const auto &c = p.c;
    for (int j = 0; j < m; ++j) {
        rational lead = 1;
        for (int k = 0; k < m; ++k) {
            lead *= qdiv(b[j] - c[k] + p.t, b[j] - b[k] + p.t);
        }
        rational s = 0;
        for (int i = 0; i < m; ++i) {
            s += qdiv(rational(1), b[j] - b[i] + p.t) *
                 qdiv(qprod(0, m, [&](int k) { return rational(b[i] - c[k]); }),
                      qprod(0, m, [&](int k) { return rational(b[i] - b[k]); }, i));
        }
        const rational lhs = corrupt ? rational(lead + s) : rational(lead - s);
        if (lhs != 1) {
            return false;
        }
    }
    return true;
}

inline bool eval_sum_nu2(const oracle_point &p, int m)
{
    rational lhs = 0, rhs = 0;
    for (int i = 0; i < m; ++i) {
        lhs += qdiv(qprod(0, m, [&](int k) { return rational(p.a2 + p.b[i] - p.c[k] + p.t); }),
                    qprod(0, m, [&](int k) { return rational(p.b[i] - p.b[k]); }, i));
        rhs += p.a2 + p.b[i] - p.c[i] + p.t;
    }
    return lhs == rhs;
}

inline bool eval_identity(rational_identity id, const oracle_point &p, int m)
{
    switch (id) {
    case rational_identity::ex_group:
        return eval_ex_group(p, m);
    case rational_identity::jjprime_1:
        return eval_jjprime_1(p, m);
    case rational_identity::g1_759:
        return eval_g1_759(p, m);
    case rational_identity::g1_760:
        return eval_g1_760(p, m);
    case rational_identity::winv_v:
        return eval_winv_v(p, m);
    case rational_identity::z_ex:
        return eval_z_ex(p, m);
    case rational_identity::wd:
        return eval_wd(p, m);
    case rational_identity::frob_step:
        return eval_frob_step(p, m, false);
    case rational_identity::sum_nu2:
        return eval_sum_nu2(p, m);
    default:
        return eval_frob_step(p, m, true);
    }
}

// Distinct integers in [-1e6, 1e6] for every free variable.
inline oracle_point draw_point(int m, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<std::int64_t> d(-1000000, 1000000);
    std::set<std::int64_t> used;
    auto next = [&]() {
        std::int64_t x;
        do {
            x = d(rng);
        } while (!used.insert(x).second);
        return rational(x);
    };
    oracle_point p;
    for (int i = 0; i < m; ++i) {
        p.b.push_back(next());
        p.c.push_back(next());
    }
    p.a2 = next();
    p.t = next();
    p.t1 = next();
    p.t2 = next();
    return p;
}

} // namespace detail

struct identity_result {
    bool pass = true;
    int trials_run = 0;
    int first_failure = -1; // trial index of the first failing point
    int resamples = 0;      // draws rejected for a zero denominator
};

// Evaluates the identity exactly at `trials` random integer points.
// Draws hitting a zero denominator are resampled (bounded).
inline identity_result check_rational_identity(rational_identity id, int m, int trials, std::uint64_t seed)
{
    if (m < min_order(id) || m > 6) {
        throw std::invalid_argument(std::string("check_rational_identity: m out of range for ") + to_string(id));
    }
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(id) + 1)));
    identity_result r;
    const int max_resamples = 100 * std::max(trials, 1);
    for (int t = 0; t < trials; ++t) {
        for (;;) {
            const auto p = detail::draw_point(m, rng);
            try {
                const bool ok = detail::eval_identity(id, p, m);
                ++r.trials_run;
                if (!ok && r.pass) {
                    r.pass = false;
                    r.first_failure = t;
                }
                break;
            } catch (const detail::zero_denominator &) {
                if (++r.resamples > max_resamples) {
                    throw std::runtime_error(std::string("check_rational_identity: resampling exhausted for ") +
                                             to_string(id));
                }
            }
        }
        if (!r.pass) {
            break;
        }
    }
    return r;
}

inline bool verify_rational_identity(rational_identity id, int m, int trials, std::uint64_t seed)
{
    return check_rational_identity(id, m, trials, seed).pass;
}

} // namespace hgforge
