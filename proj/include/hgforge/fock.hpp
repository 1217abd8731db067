// SPDX-License-Identifier: MIT
// Free-fermion layer over the period lattice: fermion vectors in
// H(tau1,tau2) + H(tau2,tau1), the modified symmetric product, Wick's rule,
// vacuum expectation values of the fields and the forms on the space they span.
#pragma once

#include "cauchy.hpp"
#include "elliptic.hpp"
#include "flows.hpp"
#include "linalg.hpp"
#include "params.hpp"
#include "residue.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace hgforge
{

enum class fermion_kind { f0, f0_dag, finf, finf_dag };

inline const char *to_string(fermion_kind k)
{
    switch (k) {
    case fermion_kind::f0:
        return "F0";
    case fermion_kind::f0_dag:
        return "F0+";
    case fermion_kind::finf:
        return "Finf";
    default:
        return "Finf+";
    }
}

// Generator of kind `kind`, index i (0-based), at lattice site
// tau1 = n1 omega1, tau2 = n2 omega2.
struct fermion_label {
    fermion_kind kind = fermion_kind::f0;
    int index = 0;
    int n1 = 0;
    int n2 = 0;
};

using wick_word = std::vector<fermion_label>;

namespace detail
{
inline bool is_zero_kind(fermion_kind k)
{
    return k == fermion_kind::f0 || k == fermion_kind::f0_dag;
}
inline bool is_dagger(fermion_kind k)
{
    return k == fermion_kind::f0_dag || k == fermion_kind::finf_dag;
}
inline int sign_n1(int n1)
{
    return (n1 % 2 == 0) ? 1 : -1;
}
} // namespace detail

template <typename T> struct site_times {
    cplx<T> tau1, tau2;
};

template <typename T> site_times<T> site_of(const fermion_label &a, const lattice_spec<T> &l)
{
    return {T(a.n1) * l.omega1, T(a.n2) * l.omega2};
}

// (f0)_i = (v_i(tau1) + sqrt(-1) v_i(tau2)) / (sqrt 2 nu_i^2(tau1+tau2)),
// (finf)_i = (w_i(tau2) + sqrt(-1) w_i(tau1)) / (sqrt 2 mu_i^2(tau1+tau2));
// the daggers flip the sign of the second block.
template <typename T>
cvector<T> fermion_vector(const fermion_label &a, const exponent_set<T> &e, const residue_triple<T> &t,
                          const lattice_spec<T> &l)
{
    const int m = e.m;
    if (a.index < 0 || a.index >= m) {
        throw std::out_of_range("fermion_vector: index out of range");
    }
    const auto s = site_of(a, l);
    const cplx<T> I = imag_unit<T>();
    const cplx<T> ph = detail::is_dagger(a.kind) ? -I : I;
    cvector<T> v(2 * m);
    cplx<T> w;
    if (detail::is_zero_kind(a.kind)) {
        w = nu2_weights(e, s.tau1 + s.tau2)[static_cast<std::size_t>(a.index)];
        v.head(m) = (t.V * ex_matrix(e, s.tau1)).col(a.index);
        v.tail(m) = ph * (t.V * ex_matrix(e, s.tau2)).col(a.index);
    } else {
        w = mu2_weights(e, s.tau1 + s.tau2)[static_cast<std::size_t>(a.index)];
        v.head(m) = (t.W * ey_matrix(e, s.tau2)).col(a.index);
        v.tail(m) = ph * (t.W * ey_matrix(e, s.tau1)).col(a.index);
    }
    if (std::abs(w) < T(1e-14)) {
        throw degenerate_error("fermion_vector: vanishing weight");
    }
    return v / (std::sqrt(T(2)) * w);
}

// The modified product on H(tau1,tau2) + H(tau2,tau1) at one site:
// (-1)^{n1} [(g1,h1) + (g2,h2) - ((u,g1)(u,h1) + (u,g2)(u,h2)) / (tau1+tau2)],
// without the correction at tau1 + tau2 = 0.
template <typename T> class site_product
{
public:
    site_product(const exponent_set<T> &e, const residue_triple<T> &t, const lattice_spec<T> &l, int n1, int n2)
        : n1_(n1), u_(t.u)
    {
        const cplx<T> tau1 = T(n1) * l.omega1, tau2 = T(n2) * l.omega2;
        sum_ = tau1 + tau2;
        const auto nu = nu2_weights(e, sum_);
        g1_ = gram_from_basis(cmatrix<T>(t.V * ex_matrix(e, tau1)), nu);
        g2_ = gram_from_basis(cmatrix<T>(t.V * ex_matrix(e, tau2)), nu);
    }

    cplx<T> operator()(const cvector<T> &g, const cvector<T> &h) const
    {
        const Eigen::Index m = u_.size();
        const cvector<T> ga = g.head(m), gb = g.tail(m), ha = h.head(m), hb = h.tail(m);
        cplx<T> r = bilinear(g1_, ga, ha) + bilinear(g2_, gb, hb);
        if (sum_ != cplx<T>(0)) {
            r -= (bilinear(g1_, u_, ga) * bilinear(g1_, u_, ha) + bilinear(g2_, u_, gb) * bilinear(g2_, u_, hb)) / sum_;
        }
        return T(detail::sign_n1(n1_)) * r;
    }

    // Size of the terms summed in operator(), the scale of its rounding error.
    T magnitude(const cvector<T> &g, const cvector<T> &h) const
    {
        const Eigen::Index m = u_.size();
        auto mag = [](const cmatrix<T> &gr, const cvector<T> &x, const cvector<T> &y) {
            return product_magnitude<T>(cmatrix<T>(x), gr, cmatrix<T>(y));
        };
        const cvector<T> ga = g.head(m), gb = g.tail(m), ha = h.head(m), hb = h.tail(m);
        T r = mag(g1_, ga, ha) + mag(g2_, gb, hb);
        if (sum_ != cplx<T>(0)) {
            r += (mag(g1_, u_, ga) * mag(g1_, u_, ha) + mag(g2_, u_, gb) * mag(g2_, u_, hb)) / std::abs(sum_);
        }
        return r;
    }

    const cmatrix<T> &gram1() const
    {
        return g1_;
    }
    const cmatrix<T> &gram2() const
    {
        return g2_;
    }

private:
    int n1_;
    cplx<T> sum_;
    cvector<T> u_;
    cmatrix<T> g1_, g2_;
};

// Multiplication table of the generators. Pairs at different sites give 0.
template <typename T>
cplx<T> pairing(const fermion_label &a, const fermion_label &b, const exponent_set<T> &e, const lattice_spec<T> &l)
{
    if (a.n1 != b.n1 || a.n2 != b.n2) {
        return cplx<T>(0);
    }
    if (detail::is_dagger(a.kind) == detail::is_dagger(b.kind)) {
        return cplx<T>(0); // (F,F), (F+,F+) and the mixed (F0,Finf), (F0+,Finf+)
    }
    const auto s = site_of(a, l);
    const cplx<T> tau = s.tau1 + s.tau2;
    const cplx<T> corr = (tau == cplx<T>(0)) ? cplx<T>(0) : T(1) / tau;
    const T sg = T(detail::sign_n1(a.n1));
    const bool a0 = detail::is_zero_kind(a.kind), b0 = detail::is_zero_kind(b.kind);
    if (a0 && b0) {
        if (a.index != b.index) {
            return sg * (-corr);
        }
        return sg * (T(1) / nu2_weights(e, tau)[static_cast<std::size_t>(a.index)] - corr);
    }
    if (!a0 && !b0) {
        if (a.index != b.index) {
            return sg * (-corr);
        }
        return sg * (T(1) / mu2_weights(e, tau)[static_cast<std::size_t>(a.index)] - corr);
    }
    const int i = a0 ? a.index : b.index; // index of the F0-type letter
    const int j = a0 ? b.index : a.index;
    return sg * (T(1) / (e.a2 + e.b[i] - e.c[j] + tau) - corr);
}

// Same pairing evaluated from the fermion vectors and the site product.
template <typename T>
cplx<T> pairing_direct(const fermion_label &a, const fermion_label &b, const exponent_set<T> &e, const residue_triple<T> &t,
                       const lattice_spec<T> &l, T *magnitude = nullptr)
{
    if (a.n1 != b.n1 || a.n2 != b.n2) {
        if (magnitude) {
            *magnitude = 0;
        }
        return cplx<T>(0);
    }
    const site_product<T> prod(e, t, l, a.n1, a.n2);
    const cvector<T> x = fermion_vector(a, e, t, l), y = fermion_vector(b, e, t, l);
    if (magnitude) {
        *magnitude = prod.magnitude(x, y);
    }
    return prod(x, y);
}

// Worst gap between table and direct route over all generator pairs at the
// given sites, relative to the size of the terms in the direct route.
template <typename T>
T pairing_two_route_residual(const exponent_set<T> &e, const lattice_spec<T> &l, const std::vector<std::pair<int, int>> &sites)
{
    const auto t = build_residue_triple(e);
    const fermion_kind kinds[] = {fermion_kind::f0, fermion_kind::f0_dag, fermion_kind::finf, fermion_kind::finf_dag};
    T r(0);
    for (const auto &[n1, n2] : sites) {
        for (auto ka : kinds) {
            for (auto kb : kinds) {
                for (int i = 0; i < e.m; ++i) {
                    for (int j = 0; j < e.m; ++j) {
                        const fermion_label a{ka, i, n1, n2}, b{kb, j, n1, n2};
                        T mag(0);
                        const cplx<T> x = pairing(a, b, e, l), y = pairing_direct(a, b, e, t, l, &mag);
                        r = std::max(r, std::abs(x - y) / std::max({T(1), std::abs(x), mag}));
                    }
                }
            }
        }
    }
    return r;
}

// Wick's rule. Three independent evaluations: signed sum over perfect
// matchings, recursive expansion along the first letter, and a Pfaffian.
constexpr std::size_t wick_max_length = 12;

namespace detail
{
template <typename T> cmatrix<T> kernel_matrix(const wick_word &w, const exponent_set<T> &e, const lattice_spec<T> &l)
{
    const Eigen::Index n = static_cast<Eigen::Index>(w.size());
    cmatrix<T> k = cmatrix<T>::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            k(a, b) = pairing(w[static_cast<std::size_t>(a)], w[static_cast<std::size_t>(b)], e, l);
            k(b, a) = -k(a, b);
        }
    }
    return k;
}

inline void check_length(const wick_word &w)
{
    if (w.size() > wick_max_length) {
        throw std::invalid_argument("wick: word longer than the supported cap");
    }
}

inline int permutation_sign(const std::vector<int> &p)
{
    int inv = 0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        for (std::size_t b = a + 1; b < p.size(); ++b) {
            inv += p[a] > p[b] ? 1 : 0;
        }
    }
    return inv % 2 == 0 ? 1 : -1;
}

template <typename T>
void enumerate_matchings(const cmatrix<T> &k, std::vector<int> &order, std::vector<bool> &used, cplx<T> &acc)
{
    const int n = static_cast<int>(k.rows());
    int first = -1;
    for (int a = 0; a < n; ++a) {
        if (!used[static_cast<std::size_t>(a)]) {
            first = a;
            break;
        }
    }
    if (first < 0) {
        cplx<T> prod(1);
        for (std::size_t p = 0; p < order.size(); p += 2) {
            prod *= k(order[p], order[p + 1]);
        }
        acc += T(permutation_sign(order)) * prod;
        return;
    }
    used[static_cast<std::size_t>(first)] = true;
    for (int b = first + 1; b < n; ++b) {
        if (!used[static_cast<std::size_t>(b)]) {
            used[static_cast<std::size_t>(b)] = true;
            order.push_back(first);
            order.push_back(b);
            enumerate_matchings(k, order, used, acc);
            order.pop_back();
            order.pop_back();
            used[static_cast<std::size_t>(b)] = false;
        }
    }
    used[static_cast<std::size_t>(first)] = false;
}

template <typename T> cplx<T> recursive_vev(const cmatrix<T> &k, const std::vector<int> &idx)
{
    if (idx.empty()) {
        return cplx<T>(1);
    }
    if (idx.size() % 2 == 1) {
        return cplx<T>(0);
    }
    cplx<T> r(0);
    for (std::size_t p = 1; p < idx.size(); ++p) {
        std::vector<int> rest;
        for (std::size_t q = 1; q < idx.size(); ++q) {
            if (q != p) {
                rest.push_back(idx[q]);
            }
        }
        const T sign = (p % 2 == 1) ? T(1) : T(-1);
        r += sign * k(idx[0], idx[p]) * recursive_vev(k, rest);
    }
    return r;
}
} // namespace detail

// <a_1 ... a_r>: 1 for the empty word, 0 for odd r, otherwise the signed
// sum over perfect matchings of the pairing kernel.
template <typename T> cplx<T> wick_vev(const wick_word &w, const exponent_set<T> &e, const lattice_spec<T> &l)
{
    detail::check_length(w);
    if (w.empty()) {
        return cplx<T>(1);
    }
    if (w.size() % 2 == 1) {
        return cplx<T>(0);
    }
    const cmatrix<T> k = detail::kernel_matrix(w, e, l);
    std::vector<int> order;
    std::vector<bool> used(w.size(), false);
    cplx<T> acc(0);
    detail::enumerate_matchings(k, order, used, acc);
    return acc;
}

template <typename T> cplx<T> wick_vev_recursive(const wick_word &w, const exponent_set<T> &e, const lattice_spec<T> &l)
{
    detail::check_length(w);
    const cmatrix<T> k = detail::kernel_matrix(w, e, l);
    std::vector<int> idx(w.size());
    std::iota(idx.begin(), idx.end(), 0);
    return detail::recursive_vev(k, idx);
}

// Pfaffian of an antisymmetric matrix by pivoted elimination.
template <typename T> cplx<T> pfaffian(cmatrix<T> a)
{
    const Eigen::Index n = a.rows();
    if (n % 2 == 1) {
        return cplx<T>(0);
    }
    cplx<T> pf(1);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index piv = k + 1;
        for (Eigen::Index r = k + 2; r < n; ++r) {
            if (std::abs(a(k, r)) > std::abs(a(k, piv))) {
                piv = r;
            }
        }
        if (piv != k + 1) {
            a.row(k + 1).swap(a.row(piv));
            a.col(k + 1).swap(a.col(piv));
            pf = -pf;
        }
        if (a(k, k + 1) == cplx<T>(0)) {
            return cplx<T>(0);
        }
        pf *= a(k, k + 1);
        for (Eigen::Index r = k + 2; r < n; ++r) {
            const cplx<T> f = a(k, r) / a(k, k + 1);
            a.row(r) -= f * a.row(k + 1);
            a.col(r) -= f * a.col(k + 1);
        }
    }
    return pf;
}

template <typename T> cplx<T> wick_vev_pfaffian(const wick_word &w, const exponent_set<T> &e, const lattice_spec<T> &l)
{
    detail::check_length(w);
    if (w.empty()) {
        return cplx<T>(1);
    }
    return pfaffian(detail::kernel_matrix(w, e, l));
}

// Ordered lattice sum of a site function: outer n2 in the order 0, 1, -1,
// 2, -2, ...; inner n1 symmetric with +-n1 paired and the last partial sums
// Euler-averaged. The outer radius comes from the geometric tail at x.
template <typename T, typename F>
elliptic_value<T> ordered_site_sum(F term, const cplx<T> &x, const lattice_spec<T> &l)
{
    l.validate();
    const cplx<T> tau = l.ratio();
    const cplx<T> zr = x / l.omega1;
    T outer_bound(0);
    const int n2max = l.n2 > 0 ? l.n2 : detail::outer_radius(zr, tau, T(1e-18), outer_bound);
    if (l.n2 > 0) {
        const T y = T(n2max + 1) * tau.imag() - std::abs(zr.imag());
        outer_bound =
            y > T(0) ? T(8) * detail::csc_bound(y) / (T(1) - std::exp(-pi_v<T> * tau.imag())) : T(INFINITY);
    }
    const bool accelerate = acceleration_enabled().load();
    const int k_avg = 24;
    compensated_sum<T> total;
    T inner_err(0);
    for (int s = 0; s <= 2 * n2max; ++s) {
        const int n2 = (s == 0) ? 0 : ((s % 2 == 1) ? (s + 1) / 2 : -(s / 2));
        compensated_sum<T> row;
        row.add(term(0, n2));
        std::vector<cplx<T>> partial;
        for (int n1 = 1; n1 <= l.n1; ++n1) {
            row.add(term(n1, n2));
            row.add(term(-n1, n2));
            if (accelerate && n1 > l.n1 - k_avg) {
                partial.push_back(row.value());
            }
        }
        if (accelerate && partial.size() > 1) {
            const auto [v, err] = detail::euler_average(partial);
            total.add(v);
            inner_err += err;
        } else {
            total.add(row.value());
            inner_err += std::abs(term(l.n1 + 1, n2) + term(-l.n1 - 1, n2));
        }
    }
    const T eps_round =
        T(64 * (2 * n2max + 1)) * std::numeric_limits<T>::epsilon() * std::max(T(1), std::abs(total.value()));
    return {total.value(), outer_bound + inner_err + eps_round};
}

template <typename T> struct field_vev {
    elliptic_value<T> vev;       // <Finf+_j F0_i> summed over sites
    elliptic_value<T> vev_mirror; // <Finf_j F0+_i>
    elliptic_value<T> reference;  // inv_sn(a2 + b_i - c_j)
    T gap = 0;                    // |vev - reference|
    T bound = 0;                  // combined tail bounds
};

// The fields F = sum over sites of the generators (formal variables set to
// 1); the two-point VEV is the ordered site sum of the pairing table.
template <typename T> field_vev<T> field_vev_elliptic(int i, int j, const exponent_set<T> &e, const lattice_spec<T> &l)
{
    const cplx<T> x = e.a2 + e.b[i] - e.c[j];
    field_vev<T> r;
    r.vev = ordered_site_sum<T>(
        [&](int n1, int n2) {
            return pairing(fermion_label{fermion_kind::f0, i, n1, n2}, fermion_label{fermion_kind::finf_dag, j, n1, n2}, e, l);
        },
        x, l);
    r.vev_mirror = ordered_site_sum<T>(
        [&](int n1, int n2) {
            return pairing(fermion_label{fermion_kind::f0_dag, i, n1, n2}, fermion_label{fermion_kind::finf, j, n1, n2}, e, l);
        },
        x, l);
    r.reference = inv_sn(x, l);
    r.gap = std::abs(r.vev.value - r.reference.value);
    r.bound = r.vev.tail_bound + r.reference.tail_bound;
    return r;
}

// 1/x + sum_{n != 0} (-1)^n (1/(x+n) - 1/n), which tends to pi / sin(pi x).
template <typename T> cplx<T> field_vev_trig(int i, int j, const exponent_set<T> &e, int n_terms = 400)
{
    return csc_partial_fraction(cplx<T>(e.a2 + e.b[i] - e.c[j]), n_terms);
}

template <typename T> struct h_space_result {
    std::vector<cplx<T>> nu2, mu2;  // elliptic weights
    cmatrix<T> gram_f0;              // diag(1/nu2) in the F0 basis
    cmatrix<T> finf_dag_coeffs;      // columns: F_inf+ in the F0 basis (N^2 D)
    cmatrix<T> gram_finf_dag;        // Gram in the F_inf+ basis
    T residual = 0;                  // ||gram_finf_dag - diag(1/mu2)||
    cmatrix<T> gram_finf;            // H' side: diag(1/mu2) in the F_inf basis
    cmatrix<T> gram_f0_dag;          // Gram in the F0+ basis
    T residual_prime = 0;            // ||gram_f0_dag - diag(1/nu2)||
    T tail_bound = 0;
};

// Forms on H = span(F0) with F_inf+ identified through the VEV pairing
// (F0_i, F_inf+_j) = 1/sn(a2+b_i-c_j), and the mirror space H'.
template <typename T> h_space_result<T> h_space_products(const exponent_set<T> &e, const lattice_spec<T> &l)
{
    const auto kind = cauchy_kind<T>::elliptic(l);
    h_space_result<T> r;
    const cmatrix<T> d = cauchy_matrix(kind, e, &r.tail_bound);
    const auto w = cauchy_weights(kind, e, &r.tail_bound);
    r.nu2 = w.nu2;
    r.mu2 = w.mu2;
    std::vector<cplx<T>> inu(r.nu2.size()), imu(r.mu2.size());
    for (std::size_t i = 0; i < inu.size(); ++i) {
        inu[i] = T(1) / r.nu2[i];
        imu[i] = T(1) / r.mu2[i];
    }
    r.gram_f0 = diag(inu);
    r.finf_dag_coeffs = diag(r.nu2) * d;
    r.gram_finf_dag = r.finf_dag_coeffs.transpose() * r.gram_f0 * r.finf_dag_coeffs;
    r.residual = rel_residual(r.gram_finf_dag, diag(imu));
    r.gram_finf = diag(imu);
    const cmatrix<T> f0_dag_coeffs = diag(r.mu2) * d.transpose();
    r.gram_f0_dag = f0_dag_coeffs.transpose() * r.gram_finf * f0_dag_coeffs;
    r.residual_prime = rel_residual(r.gram_f0_dag, diag(inu));
    return r;
}

// The same construction with the trigonometric kernel sin(pi x)/pi, the
// Im omega2 -> infinity limit of sn. Returns ||diag(1/nu2_ell) - pi diag(1/nu2_trig)||
// for a given (degenerate) lattice, and the trig dual-basis residual.
template <typename T> struct trig_limit_result {
    T length_residual = 0; // elliptic lengths vs pi / nu_trig^2
    T dual_residual = 0;   // trig F_inf+ Gram vs pi / mu_trig^2
};

template <typename T> trig_limit_result<T> h_space_trig_limit(const exponent_set<T> &e, const lattice_spec<T> &l)
{
    trig_limit_result<T> r;
    const auto ell = h_space_products(e, l);
    const auto tk = cauchy_kind<T>::trig();
    const auto w = cauchy_weights(tk, e);
    const cmatrix<T> d = cauchy_matrix(tk, e) * pi_v<T>; // pi / sin(pi x)
    std::vector<cplx<T>> len(w.nu2.size()), lenq(w.mu2.size()), nu2s(w.nu2.size());
    for (std::size_t i = 0; i < len.size(); ++i) {
        len[i] = pi_v<T> / w.nu2[i];
        lenq[i] = pi_v<T> / w.mu2[i];
        nu2s[i] = w.nu2[i] / pi_v<T>;
    }
    r.length_residual = rel_residual(ell.gram_f0, diag(len));
    const cmatrix<T> coeffs = diag(nu2s) * d;
    r.dual_residual = rel_residual(cmatrix<T>(coeffs.transpose() * diag(len) * coeffs), diag(lenq));
    return r;
}

// Sign pattern of the H-form for real data on a rectangular lattice:
// signature of diag(1/nu_ell^2).
template <typename T> signature h_space_signature(const exponent_set<T> &e, const lattice_spec<T> &l)
{
    const auto w = cauchy_weights(cauchy_kind<T>::elliptic(l), e);
    std::vector<cplx<T>> d(w.nu2.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = cplx<T>((T(1) / w.nu2[i]).real(), T(0));
    }
    return hermitian_signature(diag(d), T(1e-12));
}

// Quaternion action on the 4m-dimensional span of the field families in
// the order (F0, F0+, Finf, Finf+):
// i: F -> -F+, F+ -> F;  j: F -> -sqrt(-1) F, F+ -> sqrt(-1) F+;
// k: F -> sqrt(-1) F+, F+ -> sqrt(-1) F.
template <typename T> struct field_action {
    cmatrix<T> i, j, k;
};

template <typename T> field_action<T> quaternion_field_matrices(int m)
{
    const cplx<T> I = imag_unit<T>();
    field_action<T> q;
    q.i = cmatrix<T>::Zero(4 * m, 4 * m);
    q.j = cmatrix<T>::Zero(4 * m, 4 * m);
    q.k = cmatrix<T>::Zero(4 * m, 4 * m);
    for (int fam = 0; fam < 2; ++fam) {
        const int f = 2 * fam * m, fd = f + m; // F and F+ blocks
        for (int a = 0; a < m; ++a) {
            // Column = image of the basis element.
            q.i(fd + a, f + a) = -1;
            q.i(f + a, fd + a) = 1;
            q.j(f + a, f + a) = -I;
            q.j(fd + a, fd + a) = I;
            q.k(fd + a, f + a) = I;
            q.k(f + a, fd + a) = I;
        }
    }
    return q;
}

template <typename T> struct action_report {
    T algebra = 0;    // worst of i^2=j^2=k^2=-1, ij=k, jk=i, ki=j
    T site_wise = 0;  // worst mismatch site-wise matrix vs field action
    T site_algebra = 0; // quaternion relations of the site-wise matrices
    T gram_sign = 0;  // worst min over s = +-1 of ||Q^t G Q - s G||, term-scaled
    int sites = 0;
};

template <typename T>
action_report<T> quaternion_field_action(const exponent_set<T> &e, const lattice_spec<T> &l,
                                         const std::vector<std::pair<int, int>> &sites)
{
    const int m = e.m;
    action_report<T> rep;
    const auto q = quaternion_field_matrices<T>(m);
    const cmatrix<T> id = identity<T>(static_cast<std::size_t>(4 * m));
    rep.algebra = std::max({rel_residual(cmatrix<T>(q.i * q.i), cmatrix<T>(-id)),
                            rel_residual(cmatrix<T>(q.j * q.j), cmatrix<T>(-id)),
                            rel_residual(cmatrix<T>(q.k * q.k), cmatrix<T>(-id)), rel_residual(cmatrix<T>(q.i * q.j), q.k),
                            rel_residual(cmatrix<T>(q.j * q.k), q.i), rel_residual(cmatrix<T>(q.k * q.i), q.j)});
    const auto t = build_residue_triple(e);
    const fermion_kind kinds[] = {fermion_kind::f0, fermion_kind::f0_dag, fermion_kind::finf, fermion_kind::finf_dag};
    for (const auto &[n1, n2] : sites) {
        const cplx<T> tau1 = T(n1) * l.omega1, tau2 = T(n2) * l.omega2;
        const auto blocks = quaternion_matrices(e, tau1, tau2);
        // Images of the 4m generators at this site, columns in field order.
        cmatrix<T> f(2 * m, 4 * m);
        for (int kk = 0; kk < 4; ++kk) {
            for (int a = 0; a < m; ++a) {
                f.col(kk * m + a) = fermion_vector(fermion_label{kinds[kk], a, n1, n2}, e, t, l);
            }
        }
        const cmatrix<T> *site_q[] = {&blocks.i, &blocks.j, &blocks.k};
        const cmatrix<T> *field_q[] = {&q.i, &q.j, &q.k};
        const cmatrix<T> id2 = identity<T>(static_cast<std::size_t>(2 * m));
        for (int s = 0; s < 3; ++s) {
            const cmatrix<T> &sq = *site_q[s];
            rep.site_wise = std::max(rep.site_wise, product_residual(sq, f, cmatrix<T>(f * (*field_q[s]))));
            rep.site_algebra = std::max(rep.site_algebra, product_residual(sq, sq, cmatrix<T>(-id2)));
            rep.gram_sign = std::max(rep.gram_sign, signed_congruence_residual(sq, blocks.gram, sq, blocks.gram));
        }
        rep.site_algebra = std::max({rep.site_algebra, product_residual(blocks.i, blocks.j, blocks.k),
                                     product_residual(blocks.j, blocks.k, blocks.i), product_residual(blocks.k, blocks.i, blocks.j)});
        ++rep.sites;
    }
    return rep;
}

} // namespace hgforge
