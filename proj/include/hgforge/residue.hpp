// SPDX-License-Identifier: MIT
// The additive hypergeometric triple in its explicit triangular basis, the
// eigenvector bases v_i, w_i and the invariant complex symmetric form.
#pragma once

#include "linalg.hpp"
#include "params.hpp"

#include <vector>

namespace hgforge
{

template <typename T> struct identity_kernel {
    cplx<T> operator()(const cplx<T> &x) const
    {
        return x;
    }
};

// nu_i^2(tau) = prod_k K(a2+b_i-c_k+tau) / prod_{k!=i} K(b_i-b_k)
template <typename T, typename K = identity_kernel<T>>
std::vector<cplx<T>> nu2_weights(const exponent_set<T> &e, cplx<T> tau = cplx<T>(0), K kernel = K{})
{
    const std::size_t m = e.size();
    std::vector<cplx<T>> r(m);
    for (std::size_t i = 0; i < m; ++i) {
        cplx<T> num(1), den(1);
        for (std::size_t k = 0; k < m; ++k) {
            num *= kernel(e.a2 + e.b[i] - e.c[k] + tau);
            if (k != i) {
                den *= kernel(e.b[i] - e.b[k]);
            }
        }
        r[i] = num / den;
    }
    return r;
}

// mu_i^2(tau) = prod_k K(a2+b_k-c_i+tau) / prod_{k!=i} K(c_k-c_i)
template <typename T, typename K = identity_kernel<T>>
std::vector<cplx<T>> mu2_weights(const exponent_set<T> &e, cplx<T> tau = cplx<T>(0), K kernel = K{})
{
    const std::size_t m = e.size();
    std::vector<cplx<T>> r(m);
    for (std::size_t i = 0; i < m; ++i) {
        cplx<T> num(1), den(1);
        for (std::size_t k = 0; k < m; ++k) {
            num *= kernel(e.a2 + e.b[k] - e.c[i] + tau);
            if (k != i) {
                den *= kernel(e.c[k] - e.c[i]);
            }
        }
        r[i] = num / den;
    }
    return r;
}

template <typename T> struct residue_triple {
    cmatrix<T> A, B, C;
    cmatrix<T> V; // column i is v_i, eigenvector of B for b_i
    cmatrix<T> W; // column i is w_i, eigenvector of C for -c_i
    cvector<T> u; // u^i = b_i - c_i + a2, eigenvector of A for a1
};

template <typename T> void require_generic(const exponent_set<T> &e, T eps = T(1e-8))
{
    const auto rep = validate_genericity(e, eps);
    if (!rep.violations.empty()) {
        const auto &v = rep.violations.front();
        throw degenerate_error("non-generic exponents: " + v.kind + " difference (" + std::to_string(v.i) + "," +
                               std::to_string(v.j) + ") is an integer");
    }
}

template <typename T> residue_triple<T> build_residue_triple(const exponent_set<T> &e)
{
    require_generic(e);
    const int m = e.m;
    const auto &b = e.b;
    const auto &c = e.c;
    const cplx<T> a2 = e.a2;
    residue_triple<T> t;
    t.A = cmatrix<T>(m, m);
    t.B = cmatrix<T>::Zero(m, m);
    t.C = cmatrix<T>::Zero(m, m);
    t.u = cvector<T>(m);
    for (int i = 0; i < m; ++i) {
        t.u(i) = b[i] - c[i] + a2;
        for (int j = 0; j < m; ++j) {
            t.A(i, j) = (i == j) ? c[i] - b[i] : c[i] - b[i] - a2;
            if (i < j) {
                t.B(i, j) = a2 + b[i] - c[i];
            } else if (i == j) {
                t.B(i, j) = b[i];
                t.C(i, j) = -c[i];
            } else {
                t.C(i, j) = a2 + b[i] - c[i];
            }
        }
    }
    t.V = cmatrix<T>::Zero(m, m);
    t.W = cmatrix<T>::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i >= j) {
                cplx<T> num = b[j] - c[j] + a2, den(1);
                for (int k = j + 1; k < m; ++k) {
                    num *= b[i] - c[k] + a2;
                }
                for (int k = j; k < m; ++k) {
                    if (k != i) {
                        den *= b[i] - b[k];
                    }
                }
                t.V(j, i) = num / den;
            }
            if (i <= j) {
                cplx<T> num = b[j] - c[j] + a2, den(1);
                for (int k = 0; k < j; ++k) {
                    num *= b[k] - c[i] + a2;
                }
                for (int k = 0; k <= j; ++k) {
                    if (k != i) {
                        den *= c[k] - c[i];
                    }
                }
                t.W(j, i) = num / den;
            }
        }
    }
    return t;
}

template <typename T> struct residue_form {
    std::vector<cplx<T>> nu2, mu2;
    cmatrix<T> gram;   // standard basis
    cmatrix<T> gram_v; // V^t G V, diag(nu2) by construction
    cmatrix<T> gram_w; // W^t G W, diag(mu2) is the theorem
    T w_residual = 0;  // rel_residual(gram_w, diag(mu2))
};

// Gram matrix of the form that makes the v-basis orthogonal with weights
// nu2: G = V^{-t} diag(nu2) V^{-1}.
template <typename T> cmatrix<T> gram_from_basis(const cmatrix<T> &basis, const std::vector<cplx<T>> &weights)
{
    const cmatrix<T> inv = invert(basis);
    return inv.transpose() * diag(weights) * inv;
}

template <typename T> residue_form<T> make_residue_form(const exponent_set<T> &e, const residue_triple<T> &t)
{
    residue_form<T> f;
    f.nu2 = nu2_weights(e);
    f.mu2 = mu2_weights(e);
    f.gram = gram_from_basis(t.V, f.nu2);
    f.gram_v = t.V.transpose() * f.gram * t.V;
    f.gram_w = t.W.transpose() * f.gram * t.W;
    f.w_residual = rel_residual(f.gram_w, diag(f.mu2));
    return f;
}

template <typename T> residue_form<T> make_residue_form(const exponent_set<T> &e)
{
    return make_residue_form(e, build_residue_triple(e));
}

// Bilinear (x, y) = x^t G y.
template <typename T> cplx<T> bilinear(const cmatrix<T> &g, const cvector<T> &x, const cvector<T> &y)
{
    return (x.transpose() * g * y)(0, 0);
}

// Triangular supports of V (upper) and W (lower) with nonzero diagonals and
// no zero coordinate in u: the general-position combinatorics of the flags.
template <typename T> bool check_flag_general_position(const residue_triple<T> &t, T tol = T(1e-12))
{
    const Eigen::Index m = t.V.rows();
    const T scale = std::max({T(1), max_abs(t.V), max_abs(t.W), max_abs(t.u)});
    for (Eigen::Index i = 0; i < m; ++i) {
        if (std::abs(t.u(i)) <= tol * scale || std::abs(t.V(i, i)) <= tol * scale || std::abs(t.W(i, i)) <= tol * scale) {
            return false;
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            if ((j < i && std::abs(t.V(i, j)) > tol * scale) || (j > i && std::abs(t.W(i, j)) > tol * scale)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace hgforge
