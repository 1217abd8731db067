// SPDX-License-Identifier: MIT
// Power series: Pochhammer symbols, the generalized hypergeometric series,
// a complex gamma function, the local solution bases of the scalar equation
// and the Frobenius solutions of the first-order system at 0 and infinity,
// together with their closed forms and the connection between them.
#pragma once

#include "flows.hpp"
#include "linalg.hpp"
#include "params.hpp"
#include "residue.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hgforge
{

template <typename T> cplx<T> pochhammer(const cplx<T> &x, int n)
{
    if (n < 0) {
        throw std::invalid_argument("pochhammer: negative order");
    }
    cplx<T> r(1);
    for (int k = 0; k < n; ++k) {
        r *= x + T(k);
    }
    return r;
}

template <typename T> struct pfq_value {
    cplx<T> value;
    T next_term = 0; // modulus of the first omitted term
};

// sum_{n<N} prod (num_i)_n / prod (den_j)_n z^n / n!
template <typename T>
pfq_value<T> hyper_pfq(const std::vector<cplx<T>> &num, const std::vector<cplx<T>> &den, const cplx<T> &z, int n_terms)
{
    if (n_terms < 1) {
        throw std::invalid_argument("hyper_pfq: need at least one term");
    }
    if (num.size() > den.size() + 1) {
        throw std::invalid_argument("hyper_pfq: series diverges for p > q + 1");
    }
    // A nonpositive integer upper parameter makes the series a polynomial.
    const bool terminates = std::any_of(num.begin(), num.end(), [](const cplx<T> &a) {
        return a.imag() == T(0) && a.real() <= T(0) && a.real() == std::round(a.real());
    });
    if (num.size() == den.size() + 1 && std::abs(z) >= T(1) && !terminates) {
        throw std::domain_error("hyper_pfq: |z| >= 1 is outside the disc of convergence");
    }
    for (const auto &d : den) {
        if (d.imag() == T(0) && d.real() <= T(0) && d.real() == std::round(d.real())) {
            throw degenerate_error("hyper_pfq: nonpositive integer lower parameter");
        }
    }
    compensated_sum<T> acc;
    cplx<T> term(1);
    for (int n = 0; n < n_terms; ++n) {
        acc.add(term);
        cplx<T> ratio = z / T(n + 1);
        for (const auto &a : num) {
            ratio *= a + T(n);
        }
        for (const auto &d : den) {
            ratio /= d + T(n);
        }
        term *= ratio;
    }
    return {acc.value(), std::abs(term)};
}

// Lanczos approximation (g = 607/128, 15 terms) with reflection for
// Re z < 1/2.
template <typename T> cplx<T> complex_gamma(const cplx<T> &z)
{
    static const T coef[] = {T(0.99999999999999709182L),     T(57.156235665862923517L),
                             T(-59.597960355475491248L),     T(14.136097974741747174L),
                             T(-0.49191381609762019978L),    T(.33994649984811888699e-4L),
                             T(.46523628927048575665e-4L),   T(-.98374475304879564677e-4L),
                             T(.15808870322491248884e-3L),   T(-.21026444172410488319e-3L),
                             T(.21743961811521264320e-3L),   T(-.16431810653676389022e-3L),
                             T(.84418223983852743293e-4L),   T(-.26190838401581408670e-4L),
                             T(.36899182659531622704e-5L)};
    const T g = T(607) / T(128);
    if (z.imag() == T(0) && z.real() <= T(0) && z.real() == std::round(z.real())) {
        throw degenerate_error("complex_gamma: pole at a nonpositive integer");
    }
    if (z.real() < T(0.5)) {
        return pi_v<T> / (sin_pi(z) * complex_gamma(cplx<T>(T(1) - z)));
    }
    const cplx<T> zz = z - T(1);
    cplx<T> x(coef[0]);
    for (int k = 1; k < 15; ++k) {
        x += coef[k] / (zz + T(k));
    }
    const cplx<T> t = zz + g + T(0.5);
    return std::sqrt(T(2) * pi_v<T>) * std::pow(t, zz + T(0.5)) * std::exp(-t) * x;
}

enum class base_point { zero, infinity };

inline const char *to_string(base_point p)
{
    return p == base_point::zero ? "0" : "inf";
}

template <typename T> struct ghge_value {
    cplx<T> value;
    T residual = 0; // operator applied term by term, relative to term scale
};

// Local solutions of z prod(theta - c_k) f = prod(theta - b_k) f, theta = z d/dz:
// at 0, z^{b_j} F(b_j - c_k; b_j - b_k + 1 (k != j); z);
// at infinity, z^{c_j} F(b_k - c_j; c_k - c_j + 1 (k != j); 1/z).
template <typename T>
ghge_value<T> ghge_local_basis(const exponent_set<T> &e, base_point point, int j, const cplx<T> &z, int n_terms)
{
    const int m = e.m;
    if (j < 0 || j >= m) {
        throw std::out_of_range("ghge_local_basis: index out of range");
    }
    if (z.imag() == T(0) && z.real() <= T(0)) {
        throw std::domain_error("ghge_local_basis: z on the branch cut");
    }
    const T r = std::abs(z);
    if ((point == base_point::zero && !(r < T(1))) || (point == base_point::infinity && !(r > T(1)))) {
        throw std::domain_error("ghge_local_basis: z outside the disc of convergence");
    }
    const cplx<T> x = point == base_point::zero ? z : T(1) / z;
    const cplx<T> rho = point == base_point::zero ? e.b[j] : e.c[j];
    // Coefficients a_n of x^n and the term-wise operator residual. With
    // s = rho + n (at 0) or rho - n (at infinity), L z^s = P_b(s) z^s - P_c(s) z^{s+1}.
    auto pb = [&](const cplx<T> &s) {
        cplx<T> p(1);
        for (int k = 0; k < m; ++k) {
            p *= s - e.b[k];
        }
        return p;
    };
    auto pc = [&](const cplx<T> &s) {
        cplx<T> p(1);
        for (int k = 0; k < m; ++k) {
            p *= s - e.c[k];
        }
        return p;
    };
    std::vector<cplx<T>> a(static_cast<std::size_t>(n_terms));
    a[0] = cplx<T>(1);
    for (int n = 0; n + 1 < n_terms; ++n) {
        cplx<T> ratio(1);
        for (int k = 0; k < m; ++k) {
            if (point == base_point::zero) {
                ratio *= (e.b[j] - e.c[k] + T(n)) / ((k == j) ? cplx<T>(T(n + 1)) : cplx<T>(e.b[j] - e.b[k] + T(n + 1)));
            } else {
                ratio *= (e.b[k] - e.c[j] + T(n)) / ((k == j) ? cplx<T>(T(n + 1)) : cplx<T>(e.c[k] - e.c[j] + T(n + 1)));
            }
        }
        a[static_cast<std::size_t>(n + 1)] = a[static_cast<std::size_t>(n)] * ratio;
    }
    compensated_sum<T> f, lz;
    T scale(0);
    const cplx<T> zr = std::pow(z, rho);
    cplx<T> xn(1);
    for (int n = 0; n < n_terms; ++n) {
        const cplx<T> term = a[static_cast<std::size_t>(n)] * xn;
        f.add(term);
        const cplx<T> s = point == base_point::zero ? rho + T(n) : rho - T(n);
        // Apply the operator to term * z^rho.
        const cplx<T> l1 = pb(s) * term, l2 = pc(s) * term * z;
        lz.add(l1 - l2);
        scale = std::max({scale, std::abs(l1), std::abs(l2)});
        xn *= x;
    }
    ghge_value<T> v;
    v.value = zr * f.value();
    v.residual = std::abs(lz.value()) / std::max(scale, std::numeric_limits<T>::min());
    return v;
}

// alpha_{in} = prod_k (b_i-c_k)_n / (b_i-b_k+1)_n
template <typename T> cplx<T> series_alpha(const exponent_set<T> &e, int i, int n)
{
    cplx<T> r(1);
    for (int k = 0; k < e.m; ++k) {
        r *= pochhammer(cplx<T>(e.b[i] - e.c[k]), n) / pochhammer(cplx<T>(e.b[i] - e.b[k] + T(1)), n);
    }
    return r;
}

// beta_{in} = prod_k (b_k-c_i)_n / (c_k-c_i+1)_n
template <typename T> cplx<T> series_beta(const exponent_set<T> &e, int i, int n)
{
    cplx<T> r(1);
    for (int k = 0; k < e.m; ++k) {
        r *= pochhammer(cplx<T>(e.b[k] - e.c[i]), n) / pochhammer(cplx<T>(e.c[k] - e.c[i] + T(1)), n);
    }
    return r;
}

template <typename T> struct frobenius_solution {
    base_point point = base_point::zero;
    int index = 0;
    cplx<T> exponent;
    std::vector<cvector<T>> coeffs; // of z^n at 0, z^{-n} at infinity
    int order = 0;
    T closed_form_residual = 0;     // worst relative gap to the closed form
    int closed_form_checked = 0;    // number of coefficients compared

    cvector<T> evaluate(const cplx<T> &z) const
    {
        const cplx<T> x = point == base_point::zero ? z : T(1) / z;
        const Eigen::Index m = coeffs.front().size();
        std::vector<compensated_sum<T>> acc(static_cast<std::size_t>(m));
        cplx<T> xn(1);
        for (const auto &c : coeffs) {
            for (Eigen::Index r = 0; r < m; ++r) {
                acc[static_cast<std::size_t>(r)].add(c(r) * xn);
            }
            xn *= x;
        }
        cvector<T> v(m);
        const cplx<T> zr = std::pow(z, exponent);
        for (Eigen::Index r = 0; r < m; ++r) {
            v(r) = zr * acc[static_cast<std::size_t>(r)].value();
        }
        return v;
    }

    // z f'(z), differentiating the truncated series term by term.
    cvector<T> evaluate_theta(const cplx<T> &z) const
    {
        const cplx<T> x = point == base_point::zero ? z : T(1) / z;
        const Eigen::Index m = coeffs.front().size();
        std::vector<compensated_sum<T>> acc(static_cast<std::size_t>(m));
        cplx<T> xn(1);
        for (std::size_t n = 0; n < coeffs.size(); ++n) {
            const cplx<T> s = point == base_point::zero ? exponent + T(n) : exponent - T(n);
            for (Eigen::Index r = 0; r < m; ++r) {
                acc[static_cast<std::size_t>(r)].add(s * coeffs[n](r) * xn);
            }
            xn *= x;
        }
        cvector<T> v(m);
        const cplx<T> zr = std::pow(z, exponent);
        for (Eigen::Index r = 0; r < m; ++r) {
            v(r) = zr * acc[static_cast<std::size_t>(r)].value();
        }
        return v;
    }
};

template <typename T> void require_a2_zero(const exponent_set<T> &e, const char *what)
{
    if (e.a2 != cplx<T>(0)) {
        throw std::invalid_argument(std::string(what) + ": requires a2 = 0");
    }
}

// Same b, c with a2 = 0 and a1 re-derived from the trace condition.
template <typename T> exponent_set<T> with_a2_zero(exponent_set<T> e)
{
    e.a2 = cplx<T>(0);
    e.solve_a1();
    return e;
}

// Frobenius solution with coefficients from the recursion
// (B - (b_i+n)) t_n = A sum_{k<n} t_k at 0, (C + (c_i-n)) t_n = A sum_{k<n} t_k
// at infinity, cross-checked against alpha_{in} (V EX(n))_i resp.
// beta_{in} (W EY(n))_i for the first `n_check` coefficients.
template <typename T>
frobenius_solution<T> mhgs_frobenius(const exponent_set<T> &e, const residue_triple<T> &t, base_point point, int i,
                                     int n_terms, int n_check = -1)
{
    require_a2_zero(e, "mhgs_frobenius");
    const int m = e.m;
    if (i < 0 || i >= m || n_terms < 1) {
        throw std::out_of_range("mhgs_frobenius: index or order out of range");
    }
    if (n_check < 0) {
        n_check = std::min(n_terms, 41);
    }
    frobenius_solution<T> s;
    s.point = point;
    s.index = i;
    s.order = n_terms;
    s.exponent = point == base_point::zero ? e.b[i] : e.c[i];
    const cmatrix<T> id = identity<T>(e.size());
    cvector<T> acc = point == base_point::zero ? cvector<T>(t.V.col(i)) : cvector<T>(t.W.col(i));
    s.coeffs.push_back(acc);
    for (int n = 1; n < n_terms; ++n) {
        const cvector<T> rhs = t.A * acc;
        cvector<T> tn;
        if (point == base_point::zero) {
            const cmatrix<T> lhs = t.B - (e.b[i] + T(n)) * id;
            tn = lhs.template triangularView<Eigen::Upper>().solve(rhs);
        } else {
            const cmatrix<T> lhs = t.C + (e.c[i] - T(n)) * id;
            tn = lhs.template triangularView<Eigen::Lower>().solve(rhs);
        }
        s.coeffs.push_back(tn);
        acc += tn;
    }
    for (int n = 0; n < std::min(n_check, n_terms); ++n) {
        cvector<T> closed;
        if (point == base_point::zero) {
            closed = series_alpha(e, i, n) * (t.V * ex_matrix(e, cplx<T>(T(n)))).col(i);
        } else {
            closed = series_beta(e, i, n) * (t.W * ey_matrix(e, cplx<T>(T(n)))).col(i);
        }
        const T scale = std::max(max_abs(closed), std::numeric_limits<T>::min());
        s.closed_form_residual = std::max(s.closed_form_residual, T(max_abs(cvector<T>(s.coeffs[n] - closed)) / scale));
        ++s.closed_form_checked;
    }
    return s;
}

template <typename T>
frobenius_solution<T> mhgs_frobenius(const exponent_set<T> &e, base_point point, int i, int n_terms, int n_check = -1)
{
    return mhgs_frobenius(e, build_residue_triple(e), point, i, n_terms, n_check);
}

// ||z f' - (B + z/(z-1) A) f|| relative to the size of the terms; this is the
// system f' = (A/(z-1) + B/z) f with its geometric tail summed.
template <typename T>
T mhgs_residual(const frobenius_solution<T> &s, const residue_triple<T> &t, const cplx<T> &z)
{
    const cvector<T> f = s.evaluate(z);
    const cvector<T> zf = s.evaluate_theta(z);
    const cvector<T> bf = t.B * f;
    const cvector<T> af = (z / (z - T(1))) * (t.A * f);
    const T scale = std::max({max_abs(zf), max_abs(bf), max_abs(af), std::numeric_limits<T>::min()});
    return max_abs(cvector<T>(zf - bf - af)) / scale;
}

// Componentwise closed forms of the Frobenius solutions through
// mF_{m-1} series (argument z at 0, 1/z at infinity).
template <typename T>
cplx<T> mhgs_component_closed_form(const exponent_set<T> &e, const residue_triple<T> &t, base_point point, int i, int j,
                                   const cplx<T> &z, int n_terms)
{
    require_a2_zero(e, "mhgs_component_closed_form");
    const int m = e.m;
    if (i < 0 || i >= m || j < 0 || j >= m) {
        throw std::out_of_range("mhgs_component_closed_form: index out of range");
    }
    const auto &b = e.b;
    const auto &c = e.c;
    std::vector<cplx<T>> num, den;
    if (point == base_point::zero) {
        const cplx<T> zb = std::pow(z, b[i]);
        if (i >= j) {
            for (int k = 0; k < m; ++k) {
                num.push_back(k <= j ? b[i] - c[k] : b[i] - c[k] + T(1));
                if (k < j) {
                    den.push_back(b[i] - b[k]);
                } else if (k != i) {
                    den.push_back(b[i] - b[k] + T(1));
                }
            }
            return zb * t.V(j, i) * hyper_pfq(num, den, z, n_terms).value;
        }
        cplx<T> nu2(1), pre(1);
        for (int k = 0; k < m; ++k) {
            nu2 *= b[i] - c[k];
            if (k != i) {
                nu2 /= b[i] - b[k];
            }
            if (k > j) {
                pre *= b[i] - c[k] + T(1);
            }
            if (k >= j) {
                pre /= b[i] - b[k] + T(1);
            }
            num.push_back(k <= j ? b[i] - c[k] + T(1) : b[i] - c[k] + T(2));
            if (k < j && k != i) {
                den.push_back(b[i] - b[k] + T(1));
            } else if (k >= j) {
                den.push_back(b[i] - b[k] + T(2));
            }
        }
        return zb * z * (b[j] - c[j]) * nu2 * pre * hyper_pfq(num, den, z, n_terms).value;
    }
    const cplx<T> zc = std::pow(z, c[i]);
    const cplx<T> x = T(1) / z;
    if (i > j) {
        cplx<T> mu2(1), pre(1);
        for (int k = 0; k < m; ++k) {
            mu2 *= b[k] - c[i];
            if (k != i) {
                mu2 /= c[k] - c[i];
            }
            if (k < j) {
                pre *= b[k] - c[i] + T(1);
            }
            if (k <= j) {
                pre /= c[k] - c[i] + T(1);
            }
            num.push_back(k < j ? b[k] - c[i] + T(2) : b[k] - c[i] + T(1));
            if (k <= j) {
                den.push_back(c[k] - c[i] + T(2));
            } else if (k != i) {
                den.push_back(c[k] - c[i] + T(1));
            }
        }
        return zc * x * (b[j] - c[j]) * mu2 * pre * hyper_pfq(num, den, x, n_terms).value;
    }
    for (int k = 0; k < m; ++k) {
        num.push_back(k < j ? b[k] - c[i] + T(1) : b[k] - c[i]);
        if (k <= j && k != i) {
            den.push_back(c[k] - c[i] + T(1));
        } else if (k > j) {
            den.push_back(c[k] - c[i]);
        }
    }
    return zc * t.W(j, i) * hyper_pfq(num, den, x, n_terms).value;
}

// Coefficients Gamma_ij of the continuation (T_0)_j = sum_i Gamma_ij (T_inf)_i
// across the unit circle, for real generic exponents with a2 = 0:
// prod_k G(b_k-c_i) / prod_{k!=i} G(c_k-c_i) * prod_{k!=j} G(b_j-b_k) /
// prod_k G(b_j-c_k) * e^{s pi i (c_i-b_j)} mu_{i,trig}^2 / sin pi(b_j-c_i).
// The phase sign s is +1 in the lower half plane and -1 in the upper one.
template <typename T> cmatrix<T> connection_coefficients(const exponent_set<T> &e, int half_plane_sign)
{
    require_a2_zero(e, "connection_coefficients");
    if (half_plane_sign != 1 && half_plane_sign != -1) {
        throw std::invalid_argument("connection_coefficients: sign must be +1 or -1");
    }
    const int m = e.m;
    const auto &b = e.b;
    const auto &c = e.c;
    cmatrix<T> g(m, m);
    for (int i = 0; i < m; ++i) {
        cplx<T> gi(1), mu2(1);
        for (int k = 0; k < m; ++k) {
            gi *= complex_gamma(cplx<T>(b[k] - c[i]));
            mu2 *= sin_pi(cplx<T>(b[k] - c[i]));
            if (k != i) {
                gi /= complex_gamma(cplx<T>(c[k] - c[i]));
                mu2 /= sin_pi(cplx<T>(c[k] - c[i]));
            }
        }
        for (int j = 0; j < m; ++j) {
            cplx<T> gj(1);
            for (int k = 0; k < m; ++k) {
                if (k != j) {
                    gj *= complex_gamma(cplx<T>(b[j] - b[k]));
                }
                gj /= complex_gamma(cplx<T>(b[j] - c[k]));
            }
            const cplx<T> phase = exp_pi_i(cplx<T>(T(half_plane_sign) * (c[i] - b[j])));
            g(i, j) = gi * gj * phase * mu2 / sin_pi(cplx<T>(b[j] - c[i]));
        }
    }
    return g;
}

// Fixed-step RK4 for f' = (A/(z-1) + B/z) f along the segment z0 -> z1.
template <typename T>
cvector<T> integrate_mhgs(const residue_triple<T> &t, cvector<T> f, const cplx<T> &z0, const cplx<T> &z1, int steps)
{
    auto rhs = [&](const cplx<T> &z, const cvector<T> &y) -> cvector<T> {
        return (t.A / (z - T(1)) + t.B / z) * y;
    };
    const cplx<T> h = (z1 - z0) / T(steps);
    cplx<T> z = z0;
    for (int s = 0; s < steps; ++s) {
        const cvector<T> k1 = rhs(z, f);
        const cvector<T> k2 = rhs(z + h / T(2), cvector<T>(f + (h / T(2)) * k1));
        const cvector<T> k3 = rhs(z + h / T(2), cvector<T>(f + (h / T(2)) * k2));
        const cvector<T> k4 = rhs(z + h, cvector<T>(f + h * k3));
        f += (h / T(6)) * (k1 + T(2) * k2 + T(2) * k3 + k4);
        z = z0 + T(s + 1) * h;
    }
    return f;
}

template <typename T> struct continuation_result {
    T residual = 0;          // worst relative gap over the solutions j
    cplx<T> fitted_constant; // least-squares ratio lhs / rhs, worst j
};

// Continues (T_0)_j from z0 (inside the unit disc) radially to radius r_out
// with RK4 and compares with sum_i Gamma_ij (T_inf)_i there.
template <typename T>
continuation_result<T> continuation_check(const exponent_set<T> &e, const cplx<T> &z0, T r_out = T(1.6), int steps = 800)
{
    require_a2_zero(e, "continuation_check");
    if (!(std::abs(z0) < T(1)) || z0.imag() == T(0)) {
        throw std::domain_error("continuation_check: start point must be inside the disc and off the real axis");
    }
    const auto t = build_residue_triple(e);
    const cplx<T> z1 = z0 * (r_out / std::abs(z0));
    const cmatrix<T> g = connection_coefficients(e, z0.imag() < T(0) ? 1 : -1);
    // Terms needed for |z0|^N and r_out^{-N} below 1e-20.
    const int n0 = static_cast<int>(std::ceil(std::log(T(1e-20)) / std::log(std::abs(z0)))) + 20;
    const int ninf = static_cast<int>(std::ceil(std::log(T(1e-20)) / std::log(T(1) / r_out))) + 20;
    std::vector<cvector<T>> tinf;
    for (int i = 0; i < e.m; ++i) {
        tinf.push_back(mhgs_frobenius(e, t, base_point::infinity, i, ninf, 0).evaluate(z1));
    }
    continuation_result<T> r;
    for (int j = 0; j < e.m; ++j) {
        const cvector<T> lhs = integrate_mhgs(t, mhgs_frobenius(e, t, base_point::zero, j, n0, 0).evaluate(z0), z0, z1, steps);
        cvector<T> rhs = cvector<T>::Zero(e.m);
        for (int i = 0; i < e.m; ++i) {
            rhs += g(i, j) * tinf[static_cast<std::size_t>(i)];
        }
        const T res = max_abs(cvector<T>(lhs - rhs)) / std::max(max_abs(rhs), std::numeric_limits<T>::min());
        if (res >= r.residual) {
            r.residual = res;
            r.fitted_constant = rhs.dot(lhs) / rhs.squaredNorm();
        }
    }
    return r;
}

// Values of the m solutions at z (columns) and their z-derivatives (rows
// below), whose rank certifies linear independence.
template <typename T> T frobenius_independence(const exponent_set<T> &e, const cplx<T> &z, int n_terms)
{
    const auto t = build_residue_triple(e);
    cmatrix<T> f(e.m, e.m);
    for (int i = 0; i < e.m; ++i) {
        f.col(i) = mhgs_frobenius(e, t, base_point::zero, i, n_terms, 0).evaluate(z);
    }
    T scale(1);
    for (int i = 0; i < e.m; ++i) {
        scale *= std::max(f.col(i).norm(), std::numeric_limits<T>::min());
    }
    return std::abs(determinant(f)) / scale;
}

} // namespace hgforge
