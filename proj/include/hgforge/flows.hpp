// SPDX-License-Identifier: MIT
// Calogero-Moser conjugation symmetry of the triple: the matrices X, Y, S,
// the one-parameter groups EX(tau), EY(tau), the matrix Z(tau), the flows
// B(tau1), C(tau2), A(tau1,tau2) and the tau-dependent scalar products.
#pragma once

#include "linalg.hpp"
#include "params.hpp"
#include "residue.hpp"

#include <vector>

namespace hgforge
{

template <typename T> struct flow_operators {
    cmatrix<T> X, Y, S;
    cvector<T> e;
};

// X_ij = 1/(b_j - b_i), Y_ij = 1/(c_i - c_j) off the diagonal; diagonals make
// the row sums zero. S = V X V^{-1}.
template <typename T> flow_operators<T> build_flow_operators(const exponent_set<T> &e, const residue_triple<T> &t)
{
    const int m = e.m;
    flow_operators<T> f;
    f.X = cmatrix<T>::Zero(m, m);
    f.Y = cmatrix<T>::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i != j) {
                f.X(i, j) = T(1) / (e.b[j] - e.b[i]);
                f.Y(i, j) = T(1) / (e.c[i] - e.c[j]);
                f.X(i, i) -= f.X(i, j);
                f.Y(i, i) -= f.Y(i, j);
            }
        }
    }
    f.S = t.V * f.X * invert(t.V);
    f.e = ones<T>(e.size());
    return f;
}

template <typename T> flow_operators<T> build_flow_operators(const exponent_set<T> &e)
{
    return build_flow_operators(e, build_residue_triple(e));
}

// xi_i^2(tau) = prod_k (b_i-b_k+tau) / prod_{k!=i} (b_i-b_k)
template <typename T> std::vector<cplx<T>> xi2(const exponent_set<T> &e, cplx<T> tau)
{
    const std::size_t m = e.size();
    std::vector<cplx<T>> r(m);
    for (std::size_t i = 0; i < m; ++i) {
        cplx<T> num(1), den(1);
        for (std::size_t k = 0; k < m; ++k) {
            num *= e.b[i] - e.b[k] + tau;
            if (k != i) {
                den *= e.b[i] - e.b[k];
            }
        }
        r[i] = num / den;
    }
    return r;
}

// theta_i^2(tau) = prod_k (c_k-c_i+tau) / prod_{k!=i} (c_k-c_i)
template <typename T> std::vector<cplx<T>> theta2(const exponent_set<T> &e, cplx<T> tau)
{
    const std::size_t m = e.size();
    std::vector<cplx<T>> r(m);
    for (std::size_t i = 0; i < m; ++i) {
        cplx<T> num(1), den(1);
        for (std::size_t k = 0; k < m; ++k) {
            num *= e.c[k] - e.c[i] + tau;
            if (k != i) {
                den *= e.c[k] - e.c[i];
            }
        }
        r[i] = num / den;
    }
    return r;
}

namespace detail
{
template <typename T> void guard_denominator(const cplx<T> &d, T scale, const char *what, int i, int j)
{
    if (std::abs(d) < T(1e-8) * scale) {
        throw degenerate_error(std::string(what) + ": resonant denominator at pair (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
    }
}

template <typename T> T spectral_scale(const exponent_set<T> &e, const cplx<T> &tau)
{
    T s = std::max(T(1), std::abs(tau));
    for (std::size_t i = 0; i < e.size(); ++i) {
        s = std::max({s, std::abs(e.b[i]), std::abs(e.c[i])});
    }
    return s;
}
} // namespace detail

// EX(tau)_ij = xi_j^2(tau) / (b_j - b_i + tau); EX(0) = Id.
template <typename T> cmatrix<T> ex_matrix(const exponent_set<T> &e, cplx<T> tau)
{
    const int m = e.m;
    if (tau == cplx<T>(0)) {
        return identity<T>(e.size());
    }
    const auto x = xi2(e, tau);
    const T scale = detail::spectral_scale(e, tau);
    cmatrix<T> r(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const cplx<T> d = e.b[j] - e.b[i] + tau;
            detail::guard_denominator(d, scale, "ex_matrix", i, j);
            r(i, j) = x[j] / d;
        }
    }
    return r;
}

// EY(tau)_ij = theta_j^2(tau) / (c_i - c_j + tau); EY(0) = Id.
template <typename T> cmatrix<T> ey_matrix(const exponent_set<T> &e, cplx<T> tau)
{
    const int m = e.m;
    if (tau == cplx<T>(0)) {
        return identity<T>(e.size());
    }
    const auto th = theta2(e, tau);
    const T scale = detail::spectral_scale(e, tau);
    cmatrix<T> r(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const cplx<T> d = e.c[i] - e.c[j] + tau;
            detail::guard_denominator(d, scale, "ey_matrix", i, j);
            r(i, j) = th[j] / d;
        }
    }
    return r;
}

template <typename T> struct z_pair {
    cmatrix<T> Z, Z_inv;
};

// Z_ij = nu_j^2(tau)/(b_j - c_i + a2 + tau) and its closed-form inverse
// Z^{-1}_ij = mu_j^2(tau)/(b_i - c_j + a2 + tau).
template <typename T> z_pair<T> z_matrix(const exponent_set<T> &e, cplx<T> tau)
{
    const int m = e.m;
    const auto nu = nu2_weights(e, tau);
    const auto mu = mu2_weights(e, tau);
    const T scale = detail::spectral_scale(e, tau);
    z_pair<T> z{cmatrix<T>(m, m), cmatrix<T>(m, m)};
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const cplx<T> d1 = e.b[j] - e.c[i] + e.a2 + tau;
            const cplx<T> d2 = e.b[i] - e.c[j] + e.a2 + tau;
            detail::guard_denominator(d1, scale, "z_matrix", i, j);
            detail::guard_denominator(d2, scale, "z_matrix", i, j);
            z.Z(i, j) = nu[j] / d1;
            z.Z_inv(i, j) = mu[j] / d2;
        }
    }
    return z;
}

template <typename T> struct flow_state {
    cmatrix<T> B, C, A, V, W;
    cplx<T> a1, a2; // eigenvalues of A(tau1, tau2)
    std::vector<cplx<T>> b, c; // b_i + k1 tau1, c_i - k2 tau2
};

// B(tau1) = V(tau1) diag(b + k1 tau1) V(tau1)^{-1} with V(tau1) = V EX(tau1),
// C(tau2) = W(tau2) diag(-c + k2 tau2) W(tau2)^{-1} with W(tau2) = W EY(tau2),
// A = -B - C.
template <typename T> flow_state<T> evolve(const exponent_set<T> &e, cplx<T> tau1, cplx<T> tau2)
{
    const auto t = build_residue_triple(e);
    const int m = e.m;
    flow_state<T> s;
    s.V = t.V * ex_matrix(e, tau1);
    s.W = t.W * ey_matrix(e, tau2);
    s.b.resize(e.size());
    s.c.resize(e.size());
    std::vector<cplx<T>> eb(e.size()), ec(e.size());
    for (int i = 0; i < m; ++i) {
        s.b[i] = e.b[i] + e.k1 * tau1;
        s.c[i] = e.c[i] - e.k2 * tau2;
        eb[i] = s.b[i];
        ec[i] = -s.c[i];
    }
    s.B = s.V * diag(eb) * invert(s.V);
    s.C = s.W * diag(ec) * invert(s.W);
    s.A = -s.B - s.C;
    s.a1 = e.a1 + (T(1) - e.k1 - T(m)) * tau1 + (T(1) - e.k2 - T(m)) * tau2;
    s.a2 = e.a2 + (T(1) - e.k1) * tau1 + (T(1) - e.k2) * tau2;
    return s;
}

template <typename T> struct tau_product_result {
    std::vector<cplx<T>> nu2, mu2; // at tau1 + tau2
    cmatrix<T> gram;               // standard basis
    cmatrix<T> V, W;               // V(tau1), W(tau2)
    T w_diag_residual = 0;         // W(t2)^t G W(t2) vs diag(mu2)
    T change_residual = 0;         // v_i(t1) = sum_j nu_i^2/(a2+b_i-c_j+t) w_j(t2)
    T cross_residual = 0;          // (v_i, w_j) = nu_i^2 mu_j^2/(a2+b_i-c_j+t)
};

template <typename T> tau_product_result<T> tau_product(const exponent_set<T> &e, cplx<T> tau1, cplx<T> tau2)
{
    const auto t = build_residue_triple(e);
    const int m = e.m;
    const cplx<T> ts = tau1 + tau2;
    tau_product_result<T> r;
    r.nu2 = nu2_weights(e, ts);
    r.mu2 = mu2_weights(e, ts);
    r.V = t.V * ex_matrix(e, tau1);
    r.W = t.W * ey_matrix(e, tau2);
    r.gram = gram_from_basis(r.V, r.nu2);
    r.w_diag_residual = congruence_residual(r.W, r.gram, r.W, diag(r.mu2));
    cmatrix<T> coef(m, m), cross(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const cplx<T> d = e.a2 + e.b[i] - e.c[j] + ts;
            coef(j, i) = r.nu2[i] / d; // column i expresses v_i in the w basis
            cross(i, j) = r.nu2[i] * r.mu2[j] / d;
        }
    }
    r.change_residual = rel_residual(r.V, cmatrix<T>(r.W * coef));
    r.cross_residual = congruence_residual(r.V, r.gram, r.W, cross);
    return r;
}

template <typename T> struct extended_product_result {
    cmatrix<T> gram_plus, gram_minus;
    T plus_residual = 0;        // v(t2)-basis Gram of (+) vs -diag(xi^2(t2-t1))
    T minus_residual = 0;       // w(t2)-basis Gram of (-) vs -diag(theta^2(t2-t1))
    T transition_plus = 0;      // v_j(t1) = sum_i xi_j^2/(b_j-b_i+t1-t2) v_i(t2)
    T transition_minus = 0;     // w_j(t1) = sum_i theta_j^2/(c_i-c_j+t1-t2) w_i(t2)
};

template <typename T> extended_product_result<T> extended_products(const exponent_set<T> &e, cplx<T> tau1, cplx<T> tau2)
{
    if (tau1 == tau2) {
        throw std::invalid_argument("extended_products: tau1 must differ from tau2");
    }
    const auto t = build_residue_triple(e);
    const int m = e.m;
    const cplx<T> d12 = tau1 - tau2;
    const cmatrix<T> v1 = t.V * ex_matrix(e, tau1), v2 = t.V * ex_matrix(e, tau2);
    const cmatrix<T> w1 = t.W * ey_matrix(e, tau1), w2 = t.W * ey_matrix(e, tau2);
    extended_product_result<T> r;
    r.gram_plus = gram_from_basis(v1, xi2(e, d12));
    r.gram_minus = gram_from_basis(w1, theta2(e, d12));
    auto neg = [](std::vector<cplx<T>> v) {
        for (auto &x : v) {
            x = -x;
        }
        return v;
    };
    r.plus_residual = congruence_residual(v2, r.gram_plus, v2, diag(neg(xi2(e, -d12))));
    r.minus_residual = congruence_residual(w2, r.gram_minus, w2, diag(neg(theta2(e, -d12))));
    const auto x = xi2(e, d12);
    const auto th = theta2(e, d12);
    cmatrix<T> tp(m, m), tm(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            tp(i, j) = x[j] / (e.b[j] - e.b[i] + d12);
            tm(i, j) = th[j] / (e.c[i] - e.c[j] + d12);
        }
    }
    r.transition_plus = rel_residual(v1, cmatrix<T>(v2 * tp));
    r.transition_minus = rel_residual(w1, cmatrix<T>(w2 * tm));
    return r;
}

template <typename T> struct jordan_result {
    cmatrix<T> G, J;
    cplx<T> det_numeric, det_closed;
    T det_residual = 0;        // relative
    T conjugation_residual = 0; // G EX G^{-1} vs J
};

// G(tau)_ij = [sum_{n=0}^{m-i} prod_{k<n}(b_j-b_1-k tau)/(n! tau^n)] / prod_{k!=j}(b_j-b_k)
// (1-based i, j), conjugating EX(tau) into a single Jordan block.
template <typename T> jordan_result<T> jordan_normalizer(const exponent_set<T> &e, cplx<T> tau)
{
    if (tau == cplx<T>(0)) {
        throw std::invalid_argument("jordan_normalizer: tau must be nonzero");
    }
    const int m = e.m;
    jordan_result<T> r;
    r.G = cmatrix<T>(m, m);
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
            const cplx<T> bj = e.b[j - 1];
            cplx<T> sum(0), term(1);
            for (int n = 0; n <= m - i; ++n) {
                if (n > 0) {
                    term *= (bj - e.b[0] - T(n - 1) * tau) / (T(n) * tau);
                }
                sum += term;
            }
            cplx<T> den(1);
            for (int k = 1; k <= m; ++k) {
                if (k != j) {
                    den *= bj - e.b[k - 1];
                }
            }
            r.G(i - 1, j - 1) = sum / den;
        }
    }
    r.J = identity<T>(e.size());
    for (int i = 0; i + 1 < m; ++i) {
        r.J(i, i + 1) = T(1);
    }
    cplx<T> den(1);
    T fact(1);
    for (int k = 1; k < m; ++k) {
        fact *= T(k);
        den *= fact;
    }
    den *= std::pow(tau, T(m * (m - 1) / 2));
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            den *= e.b[j] - e.b[i];
        }
    }
    r.det_closed = T(1) / den;
    r.det_numeric = determinant(r.G);
    r.det_residual = std::abs(r.det_numeric - r.det_closed) / std::abs(r.det_closed);
    r.conjugation_residual = rel_residual(cmatrix<T>(r.G * ex_matrix(e, tau) * invert(r.G)), r.J);
    return r;
}

// Vnd(x, tau)_{r,j} = (x_j + tau)^r, r = 0..m-1.
template <typename T> cmatrix<T> vandermonde(const std::vector<cplx<T>> &x, cplx<T> tau)
{
    const int m = static_cast<int>(x.size());
    cmatrix<T> v(m, m);
    for (int j = 0; j < m; ++j) {
        cplx<T> p(1);
        for (int r = 0; r < m; ++r) {
            v(r, j) = p;
            p *= x[j] + tau;
        }
    }
    return v;
}

template <typename T> struct vandermonde_result {
    T residual_x = 0;
    T residual_y = 0;
    bool pass(T tol) const
    {
        return residual_x <= tol && residual_y <= tol;
    }
};

// d(b)^{-1} EX(tau) d(b) = Vnd(b,0)^{-1} Vnd(b,tau) and the same for EY with
// d(c) and the exponents -c (the eigenvalues of C).
template <typename T> vandermonde_result<T> vandermonde_check(const exponent_set<T> &e, cplx<T> tau)
{
    const int m = e.m;
    std::vector<cplx<T>> db(e.size()), dc(e.size()), negc(e.size());
    for (int i = 0; i < m; ++i) {
        db[i] = dc[i] = cplx<T>(1);
        for (int k = 0; k < m; ++k) {
            if (k != i) {
                db[i] *= e.b[i] - e.b[k];
                dc[i] *= e.c[k] - e.c[i];
            }
        }
        negc[i] = -e.c[i];
    }
    const cmatrix<T> dbm = diag(db), dcm = diag(dc);
    vandermonde_result<T> r;
    const cmatrix<T> lx = invert(dbm) * ex_matrix(e, tau) * dbm;
    const cmatrix<T> rx = invert(vandermonde(e.b, cplx<T>(0))) * vandermonde(e.b, tau);
    r.residual_x = rel_residual(lx, rx);
    const cmatrix<T> ly = invert(dcm) * ey_matrix(e, tau) * dcm;
    const cmatrix<T> ry = invert(vandermonde(negc, cplx<T>(0))) * vandermonde(negc, tau);
    r.residual_y = rel_residual(ly, ry);
    return r;
}

template <typename T> struct quaternion_blocks {
    cmatrix<T> i, j, k; // 2m x 2m on H_{t1,t2} (+) H_{t2,t1}
    cmatrix<T> gram;    // block diagonal (*,*)_{t1,t2} (+) (*,*)_{t2,t1}
};

// e^{S tau} = V EX(tau) V^{-1}.
template <typename T> cmatrix<T> exp_s(const exponent_set<T> &e, const residue_triple<T> &t, cplx<T> tau)
{
    return t.V * ex_matrix(e, tau) * invert(t.V);
}

template <typename T> quaternion_blocks<T> quaternion_matrices(const exponent_set<T> &e, cplx<T> tau1, cplx<T> tau2)
{
    const auto t = build_residue_triple(e);
    const int m = e.m;
    const cplx<T> I = imag_unit<T>();
    const cmatrix<T> e12 = exp_s(e, t, tau1 - tau2), e21 = exp_s(e, t, tau2 - tau1);
    quaternion_blocks<T> q;
    q.i = cmatrix<T>::Zero(2 * m, 2 * m);
    q.j = cmatrix<T>::Zero(2 * m, 2 * m);
    q.k = cmatrix<T>::Zero(2 * m, 2 * m);
    q.i.block(0, m, m, m) = I * e12;
    q.i.block(m, 0, m, m) = I * e21;
    q.j.block(0, m, m, m) = -e12;
    q.j.block(m, 0, m, m) = e21;
    q.k.block(0, 0, m, m) = I * identity<T>(e.size());
    q.k.block(m, m, m, m) = -I * identity<T>(e.size());
    const auto nu = nu2_weights(e, tau1 + tau2);
    q.gram = cmatrix<T>::Zero(2 * m, 2 * m);
    q.gram.block(0, 0, m, m) = gram_from_basis(cmatrix<T>(t.V * ex_matrix(e, tau1)), nu);
    q.gram.block(m, m, m, m) = gram_from_basis(cmatrix<T>(t.V * ex_matrix(e, tau2)), nu);
    return q;
}

} // namespace hgforge
