// SPDX-License-Identifier: MIT
// Rational Calogero-Moser phase space: quadruples (B, X; v, w), the GL
// action, the moment map [B,X] - v w, the flows, the normal form and the
// quadratic Hamiltonian, plus the link to the Calogero-Moser matrix X of the
// hypergeometric triple.
#pragma once

#include "flows.hpp"
#include "linalg.hpp"
#include "params.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <vector>

namespace hgforge
{

template <typename T> struct cm_quadruple {
    cmatrix<T> B, X;
    cvector<T> v; // column vector
    cvector<T> w; // row vector, stored as a column

    int size() const
    {
        return static_cast<int>(B.rows());
    }
};

// [B,X] - v w.
template <typename T> cmatrix<T> moment_map(const cm_quadruple<T> &q)
{
    return q.B * q.X - q.X * q.B - q.v * q.w.transpose();
}

// ||mu(q) + Id||, zero on the subvariety.
template <typename T> T subvariety_residual(const cm_quadruple<T> &q)
{
    return max_abs(cmatrix<T>(moment_map(q) + identity<T>(static_cast<std::size_t>(q.size()))));
}

// g.(B, X; v, w) = (g B g^-1, g X g^-1; g v, w g^-1).
template <typename T> cm_quadruple<T> gl_action(const cmatrix<T> &g, const cm_quadruple<T> &q)
{
    const cmatrix<T> gi = invert(g);
    return {g * q.B * gi, g * q.X * gi, g * q.v, (q.w.transpose() * gi).transpose()};
}

// Flow k at time t: B -> B + k t X^{k-1}; X, v, w unchanged.
template <typename T> cm_quadruple<T> cm_flow(const cm_quadruple<T> &q, int k, const cplx<T> &t)
{
    if (k < 1) {
        throw std::invalid_argument("cm_flow: k must be positive");
    }
    cmatrix<T> p = identity<T>(static_cast<std::size_t>(q.size()));
    for (int r = 1; r < k; ++r) {
        p = p * q.X;
    }
    cm_quadruple<T> r = q;
    r.B += T(k) * t * p;
    return r;
}

// Normal-form quadruple from positions b and momenta p:
// B = diag(b), X_ij = 1/(b_i - b_j), X_ii = p_i, v = w = (1, ..., 1).
template <typename T> cm_quadruple<T> cm_from_coordinates(const std::vector<cplx<T>> &b, const std::vector<cplx<T>> &p)
{
    const int m = static_cast<int>(b.size());
    if (p.size() != b.size()) {
        throw std::invalid_argument("cm_from_coordinates: size mismatch");
    }
    cm_quadruple<T> q{diag(b), cmatrix<T>::Zero(m, m), ones<T>(b.size()), ones<T>(b.size())};
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i != j) {
                const cplx<T> d = b[i] - b[j];
                if (std::abs(d) < T(1e-12)) {
                    throw degenerate_error("cm_from_coordinates: coincident positions");
                }
                q.X(i, j) = T(1) / d;
            }
        }
        q.X(i, i) = p[i];
    }
    return q;
}

template <typename T> struct cm_coordinates {
    std::vector<cplx<T>> b, p;
};

// Diagonalize B (distinct eigenvalues), then rescale the eigenbasis so that
// v and w become all-ones. Output is sorted lexicographically by b.
template <typename T> cm_quadruple<T> cm_normal_form(const cm_quadruple<T> &q, T eig_gap = T(1e-6))
{
    const int m = q.size();
    Eigen::ComplexEigenSolver<cmatrix<T>> es(q.B);
    if (es.info() != Eigen::Success) {
        throw degenerate_error("cm_normal_form: eigen decomposition failed");
    }
    const cvector<T> ev = es.eigenvalues();
    const T scale = std::max(T(1), max_abs(q.B));
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (std::abs(ev(i) - ev(j)) < eig_gap * scale) {
                throw degenerate_error("cm_normal_form: repeated eigenvalues of B");
            }
        }
    }
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return ev(a).real() != ev(b).real() ? ev(a).real() < ev(b).real() : ev(a).imag() < ev(b).imag();
    });
    cmatrix<T> p(m, m);
    for (int c = 0; c < m; ++c) {
        p.col(c) = es.eigenvectors().col(order[static_cast<std::size_t>(c)]);
    }
    // In the eigenbasis: v' = P^-1 v, w' = w P. Rescale columns by v'_i so that
    // v' becomes ones; then w'_i v'_i = 1 on the subvariety.
    const cmatrix<T> pi = invert(p);
    const cvector<T> vp = pi * q.v;
    for (int c = 0; c < m; ++c) {
        if (std::abs(vp(c)) < T(1e-12)) {
            throw degenerate_error("cm_normal_form: v has a vanishing eigen-component");
        }
        p.col(c) *= vp(c);
    }
    return gl_action(invert(p), q);
}

template <typename T> cm_coordinates<T> cm_coordinates_of(const cm_quadruple<T> &nf)
{
    cm_coordinates<T> c;
    for (int i = 0; i < nf.size(); ++i) {
        c.b.push_back(nf.B(i, i));
        c.p.push_back(nf.X(i, i));
    }
    return c;
}

// -H2 = (1/2) sum p_k^2 - sum_{j<k} (x_j - x_k)^-2.
template <typename T> cplx<T> hamiltonian_h2(const std::vector<cplx<T>> &x, const std::vector<cplx<T>> &p)
{
    if (x.size() != p.size()) {
        throw std::invalid_argument("hamiltonian_h2: size mismatch");
    }
    cplx<T> h(0);
    for (std::size_t j = 0; j < x.size(); ++j) {
        h += p[j] * p[j] / T(2);
        for (std::size_t k = j + 1; k < x.size(); ++k) {
            const cplx<T> d = x[j] - x[k];
            if (std::abs(d) < T(1e-12)) {
                throw degenerate_error("hamiltonian_h2: coincident positions");
            }
            h -= T(1) / (d * d);
        }
    }
    return h;
}

// (1/2) tr X^2.
template <typename T> cplx<T> half_trace_x2(const cmatrix<T> &x)
{
    return (x * x).trace() / T(2);
}

// Match (b, p) against (b', p') up to a simultaneous permutation by greedy
// nearest position; returns the worst coordinate mismatch.
template <typename T> T permutation_match(const cm_coordinates<T> &a, const cm_coordinates<T> &b)
{
    if (a.b.size() != b.b.size()) {
        return T(INFINITY);
    }
    std::vector<bool> used(b.b.size(), false);
    T worst(0);
    for (std::size_t i = 0; i < a.b.size(); ++i) {
        std::size_t best = b.b.size();
        T dist(INFINITY);
        for (std::size_t j = 0; j < b.b.size(); ++j) {
            if (!used[j] && std::abs(a.b[i] - b.b[j]) < dist) {
                dist = std::abs(a.b[i] - b.b[j]);
                best = j;
            }
        }
        used[best] = true;
        worst = std::max({worst, dist, T(std::abs(a.p[i] - b.p[best]))});
    }
    return worst;
}

template <typename T> struct link_report {
    T commutator = 0;  // ||[X_E, B_d] - e e^t + Id||
    T subvariety = 0;  // (B_d, X_E^t; e, e) on [B,X] = v w - Id
    bool pass = false;
};

// The Calogero-Moser matrix of the triple against B_d = diag(b) and e = ones.
template <typename T> link_report<T> mhgs_link_report(const exponent_set<T> &e, T tol = T(1e-10))
{
    const auto f = build_flow_operators(e);
    const cmatrix<T> bd = diag(e.b);
    const std::size_t m = e.size();
    link_report<T> r;
    const cmatrix<T> ee = ones<T>(m) * ones<T>(m).transpose();
    r.commutator = max_abs(cmatrix<T>(f.X * bd - bd * f.X - ee + identity<T>(m)));
    const cm_quadruple<T> q{bd, f.X.transpose(), ones<T>(m), ones<T>(m)};
    r.subvariety = subvariety_residual(q);
    const T scale = std::max(T(1), max_abs(f.X) * max_abs(bd));
    r.pass = r.commutator <= tol * scale && r.subvariety <= tol * scale;
    return r;
}

template <typename T> bool mhgs_link_check(const exponent_set<T> &e, T tol = T(1e-10))
{
    return mhgs_link_report(e, tol).pass;
}

} // namespace hgforge
