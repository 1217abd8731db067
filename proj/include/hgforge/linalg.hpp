// SPDX-License-Identifier: MIT
// Dense complex matrix plumbing shared by every module: types, inversion,
// determinants, residual norms, hermitian signatures and a Pade matrix
// exponential used only as an independent cross-check.
//
// Residual convention used everywhere: rel_residual(L, R) is the largest
// absolute entry of L - R divided by max(1, largest absolute entry of R).
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgforge
{

template <typename T> using cplx = std::complex<T>;
template <typename T> using cmatrix = Eigen::Matrix<cplx<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T> using cvector = Eigen::Matrix<cplx<T>, Eigen::Dynamic, 1>;

// Raised when the spectral data sit on (or numerically near) a resonance:
// an integer difference, a kernel zero or a singular matrix.
class degenerate_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

template <typename T> constexpr T pi_v = std::numbers::pi_v<T>;

template <typename T> cplx<T> imag_unit()
{
    return cplx<T>(T(0), T(1));
}

template <typename T> cmatrix<T> identity(std::size_t m)
{
    return cmatrix<T>::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
}

template <typename T> cvector<T> ones(std::size_t m)
{
    return cvector<T>::Ones(static_cast<Eigen::Index>(m));
}

template <typename T> cmatrix<T> diag(const std::vector<cplx<T>> &d)
{
    cmatrix<T> r = cmatrix<T>::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
        r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    }
    return r;
}

// Largest absolute entry.
template <typename Derived> auto max_abs(const Eigen::MatrixBase<Derived> &m)
{
    using T = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    T r(0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            using std::abs;
            r = std::max(r, static_cast<T>(abs(m(i, j))));
        }
    }
    return r;
}

template <typename D1, typename D2> auto rel_residual(const Eigen::MatrixBase<D1> &lhs, const Eigen::MatrixBase<D2> &rhs)
{
    using T = typename Eigen::NumTraits<typename D1::Scalar>::Real;
    const T scale = std::max(T(1), static_cast<T>(max_abs(rhs)));
    return static_cast<T>(max_abs(lhs - rhs)) / scale;
}

template <typename T> T rel_residual(const cplx<T> &lhs, const cplx<T> &rhs)
{
    return std::abs(lhs - rhs) / std::max(T(1), std::abs(rhs));
}

// Largest entry of |a|^t |g| |b|: the size of the terms summed when forming
// a^t g b, hence the scale of its rounding error.
template <typename T> T product_magnitude(const cmatrix<T> &a, const cmatrix<T> &g, const cmatrix<T> &b)
{
    return max_abs((a.cwiseAbs().transpose() * g.cwiseAbs() * b.cwiseAbs()).eval());
}

// ||a b - r|| relative to the magnitude of the terms in a b.
template <typename T> T product_residual(const cmatrix<T> &a, const cmatrix<T> &b, const cmatrix<T> &r)
{
    const T mag = max_abs((a.cwiseAbs() * b.cwiseAbs()).eval());
    return max_abs(cmatrix<T>(a * b - r)) / std::max({T(1), max_abs(r), mag});
}

// ||a^t g b - r|| relative to the magnitude of the terms in a^t g b.
template <typename T> T congruence_residual(const cmatrix<T> &a, const cmatrix<T> &g, const cmatrix<T> &b, const cmatrix<T> &r)
{
    const cmatrix<T> p = a.transpose() * g * b;
    return max_abs(cmatrix<T>(p - r)) / std::max({T(1), max_abs(r), product_magnitude(a, g, b)});
}

// ||a^t g b - s r|| for the better sign s = +-1, relative to the magnitude
// of the terms in a^t g b.
template <typename T> T signed_congruence_residual(const cmatrix<T> &a, const cmatrix<T> &g, const cmatrix<T> &b, const cmatrix<T> &r)
{
    const cmatrix<T> p = a.transpose() * g * b;
    const T d = std::min(max_abs(cmatrix<T>(p - r)), max_abs(cmatrix<T>(p + r)));
    return d / std::max({T(1), max_abs(r), product_magnitude(a, g, b)});
}

// Inverse through partial-pivot LU. Throws when the reciprocal condition
// estimate is below a few ulps.
template <typename T> cmatrix<T> invert(const cmatrix<T> &m)
{
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("invert: matrix is not square");
    }
    if (m.rows() == 0) {
        return m;
    }
    Eigen::PartialPivLU<cmatrix<T>> lu(m);
    const T rc = lu.rcond();
    if (!(rc > T(16) * std::numeric_limits<T>::epsilon())) {
        throw degenerate_error("invert: matrix is singular to working precision (rcond=" + std::to_string(double(rc)) + ")");
    }
    return lu.inverse();
}

template <typename T> cplx<T> determinant(const cmatrix<T> &m)
{
    if (m.rows() == 0) {
        return cplx<T>(1);
    }
    return Eigen::PartialPivLU<cmatrix<T>>(m).determinant();
}

// 1-norm condition number estimate based on an explicit inverse.
template <typename T> T condition_number(const cmatrix<T> &m)
{
    auto norm1 = [](const cmatrix<T> &a) {
        T r(0);
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            T s(0);
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                s += std::abs(a(i, j));
            }
            r = std::max(r, s);
        }
        return r;
    };
    return norm1(m) * norm1(invert(m));
}

struct signature {
    int n_plus = 0;
    int n_minus = 0;
    int n_zero = 0;
    bool operator==(const signature &) const = default;
    bool definite() const
    {
        return n_zero == 0 && (n_plus == 0 || n_minus == 0);
    }
};

// Eigenvalue sign counts of a hermitian matrix. Eigenvalues within +-tol
// (relative to the largest eigenvalue magnitude, floored at 1) count as zero.
template <typename T> signature hermitian_signature(const cmatrix<T> &g, T tol)
{
    if (g.rows() != g.cols()) {
        throw std::invalid_argument("hermitian_signature: matrix is not square");
    }
    if (rel_residual(g, cmatrix<T>(g.adjoint())) > tol) {
        throw std::invalid_argument("hermitian_signature: matrix is not hermitian within tolerance");
    }
    const cmatrix<T> h = (g + g.adjoint()) / T(2);
    Eigen::SelfAdjointEigenSolver<cmatrix<T>> es(h, Eigen::EigenvaluesOnly);
    const auto &ev = es.eigenvalues();
    T scale(1);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        scale = std::max(scale, std::abs(ev(i)));
    }
    signature s;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > tol * scale) {
            ++s.n_plus;
        } else if (ev(i) < -tol * scale) {
            ++s.n_minus;
        } else {
            ++s.n_zero;
        }
    }
    return s;
}

// Numerical rank by singular values relative to the largest one.
template <typename T> int numerical_rank(const cmatrix<T> &m, T rel_tol)
{
    Eigen::JacobiSVD<cmatrix<T>> svd(m);
    const auto &sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == T(0)) {
        return 0;
    }
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > rel_tol * sv(0)) {
            ++r;
        }
    }
    return r;
}

// e^{2 pi i x} with the real part of x reduced modulo 1 first, so exponents
// near an integer do not pick up 2 pi drift.
template <typename T> cplx<T> exp_2pi_i(const cplx<T> &x)
{
    const T r = x.real() - std::round(x.real());
    return std::polar(std::exp(-T(2) * pi_v<T> * x.imag()), T(2) * pi_v<T> * r);
}

// e^{pi i x}, reducing the real part modulo 2.
template <typename T> cplx<T> exp_pi_i(const cplx<T> &x)
{
    const T r = x.real() - T(2) * std::round(x.real() / T(2));
    return std::polar(std::exp(-pi_v<T> * x.imag()), pi_v<T> * r);
}

// sin(pi z) with the real part reduced to [-1/2, 1/2] first.
template <typename T> cplx<T> sin_pi(const cplx<T> &z)
{
    const T n = std::round(z.real());
    const cplx<T> r(z.real() - n, z.imag());
    const cplx<T> s = std::sin(pi_v<T> * r);
    return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

// Neumaier-compensated complex accumulator.
template <typename T> class compensated_sum
{
public:
    void add(const cplx<T> &x)
    {
        add_real(re_, cre_, x.real());
        add_real(im_, cim_, x.imag());
    }
    cplx<T> value() const
    {
        return cplx<T>(re_ + cre_, im_ + cim_);
    }

private:
    static void add_real(T &s, T &c, T x)
    {
        const T t = s + x;
        if (std::abs(s) >= std::abs(x)) {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    T re_{0}, im_{0}, cre_{0}, cim_{0};
};

// Matrix exponential by scaling and squaring with the degree-13 Pade
// approximant. Used only to cross-check closed forms.
template <typename T> cmatrix<T> expm(const cmatrix<T> &a)
{
    static const T b[] = {T(64764752532480000.0L), T(32382376266240000.0L), T(7771770303897600.0L),
                          T(1187353796428800.0L),  T(129060195264000.0L),   T(10559470521600.0L),
                          T(670442572800.0L),      T(33522128640.0L),       T(1323241920.0L),
                          T(40840800.0L),          T(960960.0L),            T(16380.0L),
                          T(182.0L),               T(1.0L)};
    const Eigen::Index n = a.rows();
    T norm1(0);
    for (Eigen::Index j = 0; j < n; ++j) {
        T s(0);
        for (Eigen::Index i = 0; i < n; ++i) {
            s += std::abs(a(i, j));
        }
        norm1 = std::max(norm1, s);
    }
    const T theta13 = T(5.371920351148152L);
    int s = 0;
    if (norm1 > theta13) {
        s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    }
    // Extra halvings buy accuracy for the long double instantiation.
    s += 2;
    const cmatrix<T> as = a / std::ldexp(T(1), s);
    const cmatrix<T> id = cmatrix<T>::Identity(n, n);
    const cmatrix<T> a2 = as * as, a4 = a2 * a2, a6 = a4 * a2;
    const cmatrix<T> u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const cmatrix<T> v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    cmatrix<T> r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < s; ++k) {
        r = r * r;
    }
    return r;
}

} // namespace hgforge
