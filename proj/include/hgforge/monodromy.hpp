// SPDX-License-Identifier: MIT
// The multiplicative hypergeometric triple M0, M1, M_inf in the basis where
// M0 is upper and M_inf lower triangular, its eigenvectors p_i, q_i, r, the
// invariant hermitian form and the relation between the p and q bases.
#pragma once

#include "cauchy.hpp"
#include "linalg.hpp"
#include "params.hpp"
#include "residue.hpp"
#include "series.hpp"

#include <vector>

namespace hgforge
{

template <typename T> struct monodromy_triple {
    cmatrix<T> M0, M1, Minf;
    cmatrix<T> P; // column i is p_i, M0 p_i = e^{2 pi i b_i} p_i
    cmatrix<T> Q; // column i is q_i, M_inf q_i = e^{-2 pi i c_i} q_i
    cvector<T> r; // M1 r = e^{2 pi i a1} r
};

namespace detail
{
template <typename T> cplx<T> e2(const cplx<T> &x)
{
    return exp_2pi_i(x);
}

// sum_{k=lo}^{hi-1} (b_k - c_k)
template <typename T> cplx<T> partial_bc(const exponent_set<T> &e, int lo, int hi)
{
    cplx<T> s(0);
    for (int k = lo; k < hi; ++k) {
        s += e.b[k] - e.c[k];
    }
    return s;
}
} // namespace detail

template <typename T> monodromy_triple<T> build_monodromy(const exponent_set<T> &e)
{
    require_generic(e);
    using detail::e2;
    using detail::partial_bc;
    const int m = e.m;
    const auto &b = e.b;
    const auto &c = e.c;
    const cplx<T> a2 = e.a2;
    monodromy_triple<T> t;
    t.M0 = cmatrix<T>::Zero(m, m);
    t.M1 = cmatrix<T>(m, m);
    t.Minf = cmatrix<T>::Zero(m, m);
    t.P = cmatrix<T>::Zero(m, m);
    t.Q = cmatrix<T>::Zero(m, m);
    t.r = cvector<T>(m);
    for (int i = 0; i < m; ++i) {
        const cplx<T> gi = e2(cplx<T>(b[i] - c[i] + a2)) - T(1);
        const cplx<T> row1 = e2(cplx<T>(-(T(i) * a2 + partial_bc(e, 0, i + 1)))) * (-gi);
        for (int j = 0; j < m; ++j) {
            if (i == j) {
                t.M0(i, j) = e2(b[i]);
                t.Minf(i, j) = e2(cplx<T>(-c[i]));
            } else if (i < j) {
                t.M0(i, j) = e2(cplx<T>(T(j - i - 1) * a2 + b[j] + partial_bc(e, i + 1, j))) * gi;
            } else {
                t.Minf(i, j) = e2(cplx<T>(-(b[i] + a2))) * gi;
            }
            t.M1(i, j) = row1 + (i == j ? e2(a2) : cplx<T>(0));
        }
        t.r(i) = e2(cplx<T>(-(T(i + 1) * a2 + partial_bc(e, 0, i + 1)))) * gi;
    }
    // Eigenvectors: P upper triangular (entry (j,i) for i >= j), Q lower.
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i >= j) {
                cplx<T> num = e2(cplx<T>(e.a1 - a2 + b[i] - b[j])) * (e2(cplx<T>(b[j] - c[j] + a2)) - T(1)), den(1);
                for (int k = j + 1; k < m; ++k) {
                    num *= e2(cplx<T>(b[i] - c[k] + a2)) - T(1);
                }
                for (int k = j; k < m; ++k) {
                    if (k != i) {
                        den *= e2(cplx<T>(b[i] - b[k])) - T(1);
                    }
                }
                t.P(j, i) = num / den;
            }
            if (i <= j) {
                cplx<T> num = e2(cplx<T>(-(T(j + 1) * a2 + partial_bc(e, 0, j + 1)))) *
                              (e2(cplx<T>(b[j] - c[j] + a2)) - T(1)),
                        den(1);
                for (int k = 0; k < j; ++k) {
                    num *= e2(cplx<T>(b[k] - c[i] + a2)) - T(1);
                }
                for (int k = 0; k <= j; ++k) {
                    if (k != i) {
                        den *= e2(cplx<T>(c[k] - c[i])) - T(1);
                    }
                }
                t.Q(j, i) = num / den;
            }
        }
    }
    return t;
}

// Closed-form inverse of M0: e^{-2 pi i b_i} on the diagonal and
// e^{2 pi i (a2-c_i)} (e^{2 pi i (c_i-b_i-a2)} - 1) above it.
template <typename T> cmatrix<T> m0_inverse_closed_form(const exponent_set<T> &e)
{
    const int m = e.m;
    cmatrix<T> r = cmatrix<T>::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            r(i, j) = (i == j) ? exp_2pi_i(cplx<T>(-e.b[i]))
                               : exp_2pi_i(cplx<T>(e.a2 - e.c[i])) * (exp_2pi_i(cplx<T>(e.c[i] - e.b[i] - e.a2)) - T(1));
        }
    }
    return r;
}

template <typename T> struct sin_kernel {
    cplx<T> operator()(const cplx<T> &x) const
    {
        return sin_pi(x);
    }
};

template <typename T> struct trig_form {
    std::vector<cplx<T>> nu2, mu2;
    cmatrix<T> gram;           // standard basis, P^{-H} diag(nu2) P^{-1}
    T hermitian_residual = 0;  // ||G - G^H||
    T q_residual = 0;          // ||Q^H G Q - diag(mu2)||
    T invariance[3] = {0, 0, 0}; // ||M^H G M - G|| for M0, M1, M_inf
    signature sig;
};

template <typename T> T invariance_residual(const cmatrix<T> &g, const cmatrix<T> &mx)
{
    return rel_residual(cmatrix<T>(mx.adjoint() * g * mx), g);
}

template <typename T> trig_form<T> hermitian_form_trig(const exponent_set<T> &e, const monodromy_triple<T> &t)
{
    if (!e.is_real()) {
        throw std::invalid_argument("hermitian_form_trig: exponents must be real");
    }
    trig_form<T> f;
    f.nu2 = nu2_weights(e, cplx<T>(0), sin_kernel<T>{});
    f.mu2 = mu2_weights(e, cplx<T>(0), sin_kernel<T>{});
    const cmatrix<T> pinv = invert(t.P);
    f.gram = pinv.adjoint() * diag(f.nu2) * pinv;
    f.hermitian_residual = rel_residual(f.gram, cmatrix<T>(f.gram.adjoint()));
    f.q_residual = rel_residual(cmatrix<T>(t.Q.adjoint() * f.gram * t.Q), diag(f.mu2));
    f.invariance[0] = invariance_residual(f.gram, t.M0);
    f.invariance[1] = invariance_residual(f.gram, t.M1);
    f.invariance[2] = invariance_residual(f.gram, t.Minf);
    // The Gram scale spans many orders; signature from the P-basis, where
    // it is diagonal, is exact by Sylvester's law.
    f.sig = hermitian_signature(diag(f.nu2), T(1e-12));
    return f;
}

template <typename T> trig_form<T> hermitian_form_trig(const exponent_set<T> &e)
{
    return hermitian_form_trig(e, build_monodromy(e));
}

template <typename T> struct form_space {
    int dimension = 0;    // numerical nullity of the invariance system
    T gap = 0;            // smallest nonzero / largest singular value
    T null_singular = 0;  // largest singular value counted as zero, relative
};

// Dimension of the real space of hermitian G with M^H G M = G for all three
// matrices, by SVD of the stacked real-linear system on the m^2 real
// coordinates of a hermitian matrix.
template <typename T> form_space<T> invariant_form_dimension(const monodromy_triple<T> &t, T rel_tol = T(1e-10))
{
    const Eigen::Index m = t.M0.rows();
    const Eigen::Index n = m * m;
    // Basis of hermitian matrices: E_kk, E_kl + E_lk, i(E_kl - E_lk).
    std::vector<cmatrix<T>> basis;
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index l = k; l < m; ++l) {
            cmatrix<T> h = cmatrix<T>::Zero(m, m);
            h(k, l) = h(l, k) = cplx<T>(1);
            basis.push_back(h);
            if (l != k) {
                cmatrix<T> g = cmatrix<T>::Zero(m, m);
                g(k, l) = imag_unit<T>();
                g(l, k) = -imag_unit<T>();
                basis.push_back(g);
            }
        }
    }
    const cmatrix<T> *ms[] = {&t.M0, &t.M1, &t.Minf};
    using rmatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
    rmatrix sys(3 * 2 * n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index row = 0;
        for (const auto *mx : ms) {
            const cmatrix<T> d = mx->adjoint() * basis[static_cast<std::size_t>(col)] * (*mx) - basis[static_cast<std::size_t>(col)];
            for (Eigen::Index a = 0; a < m; ++a) {
                for (Eigen::Index b = 0; b < m; ++b) {
                    sys(row++, col) = d(a, b).real();
                    sys(row++, col) = d(a, b).imag();
                }
            }
        }
    }
    Eigen::JacobiSVD<rmatrix> svd(sys);
    const auto &sv = svd.singularValues();
    form_space<T> r;
    // Basis entries are O(1) and |M| = O(1), so the scale is floored at 1.
    const T top = std::max(T(1), sv(0));
    T smallest_nonzero = top;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= rel_tol * top) {
            ++r.dimension;
            r.null_singular = std::max(r.null_singular, sv(i) / top);
        } else {
            smallest_nonzero = std::min(smallest_nonzero, sv(i));
        }
    }
    r.gap = smallest_nonzero / top;
    return r;
}

// K with P = Q K: K_ij = e^{pi i (a1+b_j-c_i)} nu_{j,trig}^2 / sin pi(a2+b_j-c_i).
template <typename T> cmatrix<T> p_from_q(const exponent_set<T> &e)
{
    const int m = e.m;
    const auto nu2 = nu2_weights(e, cplx<T>(0), sin_kernel<T>{});
    cmatrix<T> k(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            k(i, j) = exp_pi_i(cplx<T>(e.a1 + e.b[j] - e.c[i])) * nu2[j] / sin_pi(cplx<T>(e.a2 + e.b[j] - e.c[i]));
        }
    }
    return k;
}

// P^{-1} Q = e^{-pi i a1} diag(e^{-pi i b}) D_trig diag(mu_trig^2) diag(e^{pi i c}).
template <typename T> cmatrix<T> pinv_q_closed_form(const exponent_set<T> &e)
{
    const int m = e.m;
    const auto mu2 = mu2_weights(e, cplx<T>(0), sin_kernel<T>{});
    const cmatrix<T> d = cauchy_matrix(cauchy_kind<T>::trig(), e);
    cmatrix<T> r(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            r(i, j) = exp_pi_i(cplx<T>(-e.a1 - e.b[i] + e.c[j])) * d(i, j) * mu2[j];
        }
    }
    return r;
}

// K obtained by inverting the closed form of P^{-1} Q through the
// trigonometric Cauchy identity instead of a numeric inverse.
template <typename T> cmatrix<T> p_from_q_via_cauchy(const exponent_set<T> &e)
{
    const int m = e.m;
    const auto mu2 = mu2_weights(e, cplx<T>(0), sin_kernel<T>{});
    const cmatrix<T> di = cauchy_inverse_closed_form(cauchy_kind<T>::trig(), e);
    cmatrix<T> k(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            k(i, j) = exp_pi_i(cplx<T>(e.a1 + e.b[j] - e.c[i])) * di(i, j) / mu2[i];
        }
    }
    return k;
}

template <typename T> struct monodromy_report {
    T product = 0;            // ||M_inf M1 M0 - Id||
    T m0_inverse = 0;         // ||closed form - numeric inverse||
    T eig_p = 0, eig_q = 0, eig_r = 0;
    T sum_p = 0, sum_q = 0;   // ||sum p_i - r||, ||sum q_i - r||
    int m1_rank = 0;          // rank(M1 - e^{2 pi i a2} Id)
    T p_from_q = 0;           // ||P - Q K||
    T p_from_q_cauchy = 0;    // ||K - K via trig Cauchy||
    T pinv_q = 0;             // ||P^{-1} Q - closed form||
    T phase_imag = 0;         // max |Im((P^{-1}Q)_ij e^{pi i (a1+b_i-c_j)})| relative
};

template <typename T> monodromy_report<T> check_monodromy(const exponent_set<T> &e, const monodromy_triple<T> &t)
{
    monodromy_report<T> r;
    const int m = e.m;
    const cmatrix<T> id = identity<T>(e.size());
    r.product = rel_residual(cmatrix<T>(t.Minf * t.M1 * t.M0), id);
    r.m0_inverse = rel_residual(m0_inverse_closed_form(e), invert(t.M0));
    std::vector<cplx<T>> eb(e.size()), ec(e.size());
    for (int i = 0; i < m; ++i) {
        eb[static_cast<std::size_t>(i)] = exp_2pi_i(e.b[i]);
        ec[static_cast<std::size_t>(i)] = exp_2pi_i(cplx<T>(-e.c[i]));
    }
    r.eig_p = rel_residual(cmatrix<T>(t.M0 * t.P), cmatrix<T>(t.P * diag(eb)));
    r.eig_q = rel_residual(cmatrix<T>(t.Minf * t.Q), cmatrix<T>(t.Q * diag(ec)));
    r.eig_r = rel_residual(cvector<T>(t.M1 * t.r), cvector<T>(exp_2pi_i(e.a1) * t.r));
    const cvector<T> one = ones<T>(e.size());
    r.sum_p = rel_residual(cvector<T>(t.P * one), t.r);
    r.sum_q = rel_residual(cvector<T>(t.Q * one), t.r);
    r.m1_rank = numerical_rank(cmatrix<T>(t.M1 - exp_2pi_i(e.a2) * id), T(1e-9));
    const cmatrix<T> k = p_from_q(e);
    r.p_from_q = rel_residual(t.P, cmatrix<T>(t.Q * k));
    r.p_from_q_cauchy = rel_residual(p_from_q_via_cauchy(e), k);
    const cmatrix<T> piq = invert(t.P) * t.Q;
    r.pinv_q = rel_residual(piq, pinv_q_closed_form(e));
    if (e.is_real()) {
        const T scale = std::max(T(1), max_abs(piq));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const cplx<T> v = piq(i, j) * exp_pi_i(cplx<T>(e.a1 + e.b[i] - e.c[j]));
                r.phase_imag = std::max(r.phase_imag, std::abs(v.imag()) / scale);
            }
        }
    }
    return r;
}

// The continuation coefficients divided entrywise by p_from_q must be a
// rank-one matrix r_i s_j: both carry the (i,j) dependence 1/sin pi(b_j-c_i).
// Returns max |R_ij R_00 / (R_i0 R_0j) - 1| for a2 = 0 data.
template <typename T> T rank1_quotient_residual(const exponent_set<T> &e, int half_plane_sign = 1)
{
    const cmatrix<T> g = connection_coefficients(e, half_plane_sign);
    const cmatrix<T> k = p_from_q(e);
    const cmatrix<T> q = g.cwiseQuotient(k);
    T r(0);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        for (Eigen::Index j = 0; j < q.cols(); ++j) {
            r = std::max(r, std::abs(q(i, j) * q(0, 0) / (q(i, 0) * q(0, j)) - T(1)));
        }
    }
    return r;
}

// Continues each Frobenius solution at 0 once around a closed polygon of
// radius rho about 0 and compares with e^{2 pi i b_i} times the start value:
// the branch convention z^{b_i} fixes the local monodromy to diag(e^{2 pi i b}).
template <typename T> T frobenius_loop_residual(const exponent_set<T> &e, T rho = T(0.5), int sides = 64, int steps = 32)
{
    require_a2_zero(e, "frobenius_loop_residual");
    const auto t = build_residue_triple(e);
    const cplx<T> z0 = std::polar(rho, T(1e-3));
    T worst(0);
    for (int i = 0; i < e.m; ++i) {
        const auto sol = mhgs_frobenius(e, t, base_point::zero, i, 120, 0);
        cvector<T> f = sol.evaluate(z0);
        const cvector<T> start = f;
        for (int s = 0; s < sides; ++s) {
            const cplx<T> za = z0 * std::polar(T(1), T(2) * pi_v<T> * T(s) / T(sides));
            const cplx<T> zb = z0 * std::polar(T(1), T(2) * pi_v<T> * T(s + 1) / T(sides));
            f = integrate_mhgs(t, f, za, zb, steps);
        }
        worst = std::max(worst, rel_residual(f, cvector<T>(exp_2pi_i(e.b[i]) * start)));
    }
    return worst;
}

} // namespace hgforge
