// SPDX-License-Identifier: MIT
// Cauchy-type matrices D_ij = 1/K(a2 + b_i - c_j (+ tau)) for the kernels
// K(x) = x, sin(pi x) and sn(x), their closed-form inverses
// mu_i^2 nu_j^2 / K(a2 + b_j - c_i), determinants and the N D M identity.
#pragma once

#include "elliptic.hpp"
#include "linalg.hpp"
#include "params.hpp"
#include "residue.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <string>
#include <vector>

namespace hgforge
{

enum class cauchy_flavor { rational, trig, elliptic };

inline const char *to_string(cauchy_flavor f)
{
    switch (f) {
    case cauchy_flavor::rational:
        return "rational";
    case cauchy_flavor::trig:
        return "trig";
    default:
        return "elliptic";
    }
}

inline cauchy_flavor parse_cauchy_flavor(const std::string &s)
{
    if (s == "rational") {
        return cauchy_flavor::rational;
    }
    if (s == "trig") {
        return cauchy_flavor::trig;
    }
    if (s == "elliptic") {
        return cauchy_flavor::elliptic;
    }
    throw std::invalid_argument("unknown Cauchy kind: " + s);
}

template <typename T> struct cauchy_kind {
    cauchy_flavor flavor = cauchy_flavor::rational;
    cplx<T> tau{T(0)};        // rational only
    lattice_spec<T> lattice{}; // elliptic only

    static cauchy_kind rational(cplx<T> tau = cplx<T>(0))
    {
        return {cauchy_flavor::rational, tau, {}};
    }
    static cauchy_kind trig()
    {
        return {cauchy_flavor::trig, cplx<T>(0), {}};
    }
    static cauchy_kind elliptic(lattice_spec<T> l)
    {
        l.validate();
        return {cauchy_flavor::elliptic, cplx<T>(0), l};
    }
};

// The kernel K of a flavor. For the elliptic flavor it records the largest
// relative tail bound of the 1/sn values it produced.
template <typename T> class cauchy_kernel
{
public:
    explicit cauchy_kernel(const cauchy_kind<T> &k) : kind_(k)
    {
    }

    cplx<T> operator()(const cplx<T> &x) const
    {
        switch (kind_.flavor) {
        case cauchy_flavor::rational:
            return x;
        case cauchy_flavor::trig:
            return sin_pi(x);
        default: {
            const auto v = inv_sn(x, kind_.lattice);
            if (tail_) {
                *tail_ = std::max(*tail_, v.tail_bound / std::abs(v.value));
            }
            return T(1) / v.value;
        }
        }
    }

    void track_tail(T *sink)
    {
        tail_ = sink;
    }

private:
    cauchy_kind<T> kind_;
    T *tail_ = nullptr;
};

namespace detail
{
template <typename T> T kernel_scale(const cauchy_kind<T> &k)
{
    return k.flavor == cauchy_flavor::rational ? T(1e-10) : T(1e-8);
}
} // namespace detail

template <typename T> cmatrix<T> cauchy_matrix(const cauchy_kind<T> &kind, const exponent_set<T> &e, T *tail = nullptr)
{
    cauchy_kernel<T> K(kind);
    K.track_tail(tail);
    const int m = e.m;
    const cplx<T> shift = kind.flavor == cauchy_flavor::rational ? kind.tau : cplx<T>(0);
    cmatrix<T> d(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const cplx<T> k = K(e.a2 + e.b[i] - e.c[j] + shift);
            if (std::abs(k) < detail::kernel_scale(kind)) {
                throw degenerate_error("cauchy_matrix: kernel argument at a zero of the kernel");
            }
            d(i, j) = T(1) / k;
        }
    }
    return d;
}

template <typename T> struct weight_pair {
    std::vector<cplx<T>> mu2, nu2;
};

template <typename T> weight_pair<T> cauchy_weights(const cauchy_kind<T> &kind, const exponent_set<T> &e, T *tail = nullptr)
{
    cauchy_kernel<T> K(kind);
    K.track_tail(tail);
    const cplx<T> shift = kind.flavor == cauchy_flavor::rational ? kind.tau : cplx<T>(0);
    return {mu2_weights(e, shift, K), nu2_weights(e, shift, K)};
}

// (D^{-1})_ij = mu_i^2 nu_j^2 / K(a2 + b_j - c_i (+ tau)).
template <typename T>
cmatrix<T> cauchy_inverse_closed_form(const cauchy_kind<T> &kind, const exponent_set<T> &e, T *tail = nullptr)
{
    cauchy_kernel<T> K(kind);
    K.track_tail(tail);
    const auto w = cauchy_weights(kind, e, tail);
    const int m = e.m;
    const cplx<T> shift = kind.flavor == cauchy_flavor::rational ? kind.tau : cplx<T>(0);
    cmatrix<T> r(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            r(i, j) = w.mu2[i] * w.nu2[j] / K(e.a2 + e.b[j] - e.c[i] + shift);
        }
    }
    return r;
}

// det D = prod_{i<j} K(b_i-b_j) K(c_j-c_i) / prod_{i,j} K(a2+b_i-c_j (+tau)).
template <typename T> cplx<T> cauchy_determinant(const exponent_set<T> &e, const cauchy_kind<T> &kind, T *tail = nullptr)
{
    cauchy_kernel<T> K(kind);
    K.track_tail(tail);
    const int m = e.m;
    const cplx<T> shift = kind.flavor == cauchy_flavor::rational ? kind.tau : cplx<T>(0);
    cplx<T> num(1), den(1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i < j) {
                num *= K(e.b[i] - e.b[j]) * K(e.c[j] - e.c[i]);
            }
            den *= K(e.a2 + e.b[i] - e.c[j] + shift);
        }
    }
    return num / den;
}

template <typename T> struct cauchy_check {
    T residual = 0;   // relative to the magnitude of the terms where a product is formed
    T tail_bound = 0; // largest relative 1/sn tail bound (elliptic only)
};

template <typename T> cauchy_check<T> cauchy_inverse_residual(const cauchy_kind<T> &kind, const exponent_set<T> &e)
{
    cauchy_check<T> r;
    const cmatrix<T> d = cauchy_matrix(kind, e, &r.tail_bound);
    const cmatrix<T> di = cauchy_inverse_closed_form(kind, e, &r.tail_bound);
    r.residual = product_residual(d, di, identity<T>(e.size()));
    return r;
}

namespace detail
{
using hp_complex = boost::multiprecision::cpp_complex_50;

using hp_real = boost::multiprecision::cpp_bin_float_50;

// Exact widening of a working-precision value.
template <typename T> hp_complex to_hp(const cplx<T> &z)
{
    return {hp_real(z.real()), hp_real(z.imag())};
}

// det D for the rational and trig kernels in 50 digits, entries included.
// Long double LU loses about cond(D) ulps, which reaches 1e-3 relative for
// complex exponents at m >= 5, while the product formula does not.
template <typename T> cplx<T> cauchy_determinant_hp(const cauchy_kind<T> &kind, const exponent_set<T> &e)
{
    const hp_real pi = boost::math::constants::pi<hp_real>();
    const int m = e.m;
    const hp_complex shift = kind.flavor == cauchy_flavor::rational ? to_hp(kind.tau) : hp_complex(0);
    std::vector<std::vector<hp_complex>> a(static_cast<std::size_t>(m), std::vector<hp_complex>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const hp_complex x = to_hp(e.a2) + to_hp(e.b[i]) - to_hp(e.c[j]) + shift;
            a[i][j] = hp_complex(1) / (kind.flavor == cauchy_flavor::rational ? x : hp_complex(sin(x * pi)));
        }
    }
    hp_complex det(1);
    for (int k = 0; k < m; ++k) {
        int p = k;
        for (int i = k + 1; i < m; ++i) {
            if (abs(a[i][k]) > abs(a[p][k])) {
                p = i;
            }
        }
        if (p != k) {
            std::swap(a[p], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (int i = k + 1; i < m; ++i) {
            const hp_complex f = a[i][k] / a[k][k];
            for (int j = k; j < m; ++j) {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    return {static_cast<T>(det.real()), static_cast<T>(det.imag())};
}
} // namespace detail

// Closed-form det D against a 50-digit reference (rational, trig) or long
// double LU (elliptic, where the kernel exists only in working precision).
template <typename T> cauchy_check<T> cauchy_determinant_residual(const cauchy_kind<T> &kind, const exponent_set<T> &e)
{
    cauchy_check<T> r;
    const cplx<T> closed = cauchy_determinant(e, kind, &r.tail_bound);
    const cplx<T> numeric = kind.flavor == cauchy_flavor::elliptic ? determinant(cauchy_matrix(kind, e, &r.tail_bound))
                                                                   : detail::cauchy_determinant_hp(kind, e);
    r.residual = std::abs(closed - numeric) / std::abs(numeric);
    return r;
}

// ||(N D M)^t (N D M) - Id|| with principal square roots of mu^2, nu^2,
// relative to the magnitude of the terms.
template <typename T> cauchy_check<T> ndm_orthogonality(const exponent_set<T> &e, const cauchy_kind<T> &kind)
{
    cauchy_check<T> r;
    const cmatrix<T> d = cauchy_matrix(kind, e, &r.tail_bound);
    const auto w = cauchy_weights(kind, e, &r.tail_bound);
    std::vector<cplx<T>> mu(w.mu2.size()), nu(w.nu2.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        mu[i] = std::sqrt(w.mu2[i]);
        nu[i] = std::sqrt(w.nu2[i]);
    }
    const cmatrix<T> ndm = diag(nu) * d * diag(mu);
    r.residual = product_residual(cmatrix<T>(ndm.transpose()), ndm, identity<T>(e.size()));
    return r;
}

} // namespace hgforge
