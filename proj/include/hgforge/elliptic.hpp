// SPDX-License-Identifier: MIT
// The elliptic kernel 1/sn with antiperiod omega1 and period omega2, through
// two independent routes: the geometrically convergent csc series and the
// conditionally convergent alternating lattice sum.
#pragma once

#include "linalg.hpp"

#include <atomic>
#include <cmath>
#include <vector>

namespace hgforge
{

// Acceleration of alternating tails can be switched off for bit-stable
// regression baselines.
inline std::atomic<bool> &acceleration_enabled()
{
    static std::atomic<bool> flag{true};
    return flag;
}

template <typename T> struct lattice_spec {
    cplx<T> omega1{T(1)};
    cplx<T> omega2{T(0), T(0.8)};
    int n1 = 400; // inner alternating radius of the lattice sum
    int n2 = 0;   // outer radius; 0 selects it from the geometric tail bound

    cplx<T> ratio() const
    {
        return omega2 / omega1;
    }
    void validate() const
    {
        if (!(ratio().imag() > T(0))) {
            throw std::invalid_argument("lattice_spec: Im(omega2/omega1) must be positive");
        }
        if (n1 < 1 || n2 < 0) {
            throw std::invalid_argument("lattice_spec: truncation radii must be positive");
        }
    }
};

template <typename T> struct elliptic_value {
    cplx<T> value;
    T tail_bound = 0;
};

namespace detail
{

// Repeated averaging of consecutive partial sums (Euler transform of the
// tail). Returns the accelerated value and the last-level change as error
// estimate.
template <typename T> std::pair<cplx<T>, T> euler_average(std::vector<cplx<T>> s)
{
    if (s.empty()) {
        return {cplx<T>(0), T(0)};
    }
    T err(0);
    while (s.size() > 1) {
        std::vector<cplx<T>> next(s.size() - 1);
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            next[i] = (s[i] + s[i + 1]) / T(2);
        }
        if (next.size() == 1) {
            err = std::abs(next[0] - s[0]);
        }
        s = std::move(next);
    }
    return {s[0], err};
}

// Bound on |pi / sin(pi w)| in terms of y = |Im w| > 0.
template <typename T> T csc_bound(T y)
{
    const T q = std::exp(-T(2) * pi_v<T> * y);
    return T(2) * pi_v<T> * std::exp(-pi_v<T> * y) / (T(1) - q);
}

// pi / sin(pi w), returning 0 when |Im w| is so large the term underflows.
template <typename T> cplx<T> pi_csc(const cplx<T> &w)
{
    if (std::abs(w.imag()) * pi_v<T> > T(700)) {
        return cplx<T>(0);
    }
    return pi_v<T> / sin_pi(w);
}

// Smallest N such that the two-sided geometric tail beyond N is below eps.
template <typename T> int outer_radius(const cplx<T> &zr, const cplx<T> &tau, T eps, T &bound)
{
    const T it = tau.imag();
    const T yz = std::abs(zr.imag());
    const T q = std::exp(-pi_v<T> * it);
    for (int n = 1; n < 100000; ++n) {
        const T y = T(n + 1) * it - yz;
        if (y <= T(0.5)) {
            continue;
        }
        const T b = T(4) * csc_bound(y) / (T(1) - q);
        if (b < eps) {
            bound = b;
            return n;
        }
    }
    throw std::runtime_error("outer_radius: lattice too degenerate for the tail bound");
}

} // namespace detail

template <typename T> T distance_to_integer_csc(const cplx<T> &z)
{
    return std::abs(cplx<T>(z.real() - std::round(z.real()), z.imag()));
}

// pi / sin(pi z) via the alternating partial fractions
// 1/z + sum_{n=1..N} (-1)^n (1/(z+n) + 1/(z-n)),
// Euler-accelerated on the last partial sums unless acceleration is off.
template <typename T> cplx<T> csc_partial_fraction(const cplx<T> &z, int n, bool accelerate = true)
{
    if (distance_to_integer_csc(z) == T(0)) {
        throw degenerate_error("csc_partial_fraction: integer argument");
    }
    const int k_avg = 24;
    accelerate = accelerate && acceleration_enabled().load();
    compensated_sum<T> acc;
    acc.add(T(1) / z);
    std::vector<cplx<T>> partial;
    for (int k = 1; k <= n; ++k) {
        const cplx<T> t = T(1) / (z + T(k)) + T(1) / (z - T(k));
        acc.add((k % 2 == 0) ? t : -t);
        if (accelerate && k > n - k_avg) {
            partial.push_back(acc.value());
        }
    }
    if (!accelerate || partial.size() < 2) {
        return acc.value();
    }
    return detail::euler_average(partial).first;
}

// 1/sn(z) = (1/omega1) sum_{n2} pi / sin(pi (z/omega1 + n2 omega2/omega1)),
// summed symmetrically with the truncation chosen from the geometric tail.
template <typename T> elliptic_value<T> inv_sn(const cplx<T> &z, const lattice_spec<T> &l)
{
    l.validate();
    const cplx<T> tau = l.ratio();
    const cplx<T> zr = z / l.omega1;
    // Distance to the lattice in units of omega1.
    {
        const T k = std::round(zr.imag() / tau.imag());
        const cplx<T> w = zr - k * tau;
        if (distance_to_integer_csc(w) < T(1e-6)) {
            throw degenerate_error("inv_sn: argument on or near the lattice");
        }
    }
    T bound(0);
    const int n2 = l.n2 > 0 ? l.n2 : detail::outer_radius(zr, tau, T(1e-18), bound);
    if (l.n2 > 0) {
        const T y = T(n2 + 1) * tau.imag() - std::abs(zr.imag());
        bound = y > T(0) ? T(4) * detail::csc_bound(y) / (T(1) - std::exp(-pi_v<T> * tau.imag())) : T(INFINITY);
    }
    compensated_sum<T> acc;
    acc.add(detail::pi_csc(zr));
    for (int n = 1; n <= n2; ++n) {
        acc.add(detail::pi_csc(cplx<T>(zr + T(n) * tau)));
        acc.add(detail::pi_csc(cplx<T>(zr - T(n) * tau)));
    }
    const T eps_round = T(64) * std::numeric_limits<T>::epsilon() * std::max(T(1), std::abs(acc.value()));
    return {acc.value() / l.omega1, (bound + eps_round) / std::abs(l.omega1)};
}

// Verification route: 1/z + sum' (-1)^{n1} (1/(z+W) - 1/W), W = n1 omega1 +
// n2 omega2, inner n1 symmetric and accelerated, outer n2 symmetric.
template <typename T> elliptic_value<T> inv_sn_lattice(const cplx<T> &z, const lattice_spec<T> &l)
{
    l.validate();
    const cplx<T> tau = l.ratio();
    const cplx<T> zr = z / l.omega1;
    T outer_bound(0);
    const int n2max = l.n2 > 0 ? l.n2 : detail::outer_radius(zr, tau, T(1e-18), outer_bound);
    if (l.n2 > 0) {
        const T y = T(n2max + 1) * tau.imag() - std::abs(zr.imag());
        outer_bound =
            y > T(0) ? T(8) * detail::csc_bound(y) / (T(1) - std::exp(-pi_v<T> * tau.imag())) : T(INFINITY);
    }
    const bool accelerate = acceleration_enabled().load();
    const int k_avg = 24;
    const int n1max = l.n1;
    compensated_sum<T> total;
    T inner_err(0);
    for (int s = 0; s <= 2 * n2max; ++s) {
        // Symmetric outer order: 0, 1, -1, 2, -2, ...
        const int n2 = (s == 0) ? 0 : ((s % 2 == 1) ? (s + 1) / 2 : -(s / 2));
        const cplx<T> w = T(n2) * tau;
        const cplx<T> x = zr + w;
        compensated_sum<T> row;
        row.add(T(1) / x);
        if (n2 != 0) {
            row.add(-T(1) / w);
        }
        std::vector<cplx<T>> partial;
        for (int n1 = 1; n1 <= n1max; ++n1) {
            cplx<T> t = T(1) / (x + T(n1)) + T(1) / (x - T(n1)) - T(1) / (w + T(n1)) - T(1) / (w - T(n1));
            row.add((n1 % 2 == 0) ? t : -t);
            if (accelerate && n1 > n1max - k_avg) {
                partial.push_back(row.value());
            }
        }
        if (accelerate && partial.size() > 1) {
            const auto [v, err] = detail::euler_average(partial);
            total.add(v);
            inner_err += err;
        } else {
            total.add(row.value());
            // Alternating tail with terms O(1/n^2): bounded by the first omitted term.
            const cplx<T> t = T(1) / (x + T(n1max + 1)) + T(1) / (x - T(n1max + 1)) - T(1) / (w + T(n1max + 1)) -
                              T(1) / (w - T(n1max + 1));
            inner_err += std::abs(t);
        }
    }
    const T eps_round = T(64 * (2 * n2max + 1)) * std::numeric_limits<T>::epsilon() * std::max(T(1), std::abs(total.value()));
    return {total.value() / l.omega1, (outer_bound + inner_err + eps_round) / std::abs(l.omega1)};
}

} // namespace hgforge
