// Exact-shape complex linear algebra for 2x2 and 3x3 matrices:
// arithmetic, eigendecomposition (2x2), matrix exponential, matrix powers.
// All operations are pure functions on immutable values.

#ifndef FPTSIM_SMALLMAT_HPP
#define FPTSIM_SMALLMAT_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace fptsim {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Fixed-size complex column vector.
template <std::size_t N>
struct Vec {
    std::array<Complex, N> a{};

    Complex& operator[](std::size_t i) { return a[i]; }
    const Complex& operator[](std::size_t i) const { return a[i]; }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& z : a) s += std::norm(z);
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }

    Vec normalized() const {
        Vec r = *this;
        double n = norm();
        if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
        for (auto& z : r.a) z /= n;
        return r;
    }
};

template <std::size_t N>
Vec<N> operator*(Complex s, const Vec<N>& v) {
    Vec<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = s * v[i];
    return r;
}

template <std::size_t N>
Vec<N> operator-(const Vec<N>& x, const Vec<N>& y) {
    Vec<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = x[i] - y[i];
    return r;
}

/// Row-major fixed-size complex square matrix.
template <std::size_t N>
struct SquareMat {
    std::array<Complex, N * N> a{};

    Complex& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

    static SquareMat identity() {
        SquareMat m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    bool finite() const {
        for (const auto& z : a)
            if (!is_finite(z)) return false;
        return true;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    /// Max-row-sum (infinity) norm.
    double norm_inf() const {
        double m = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < N; ++j) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }
};

using Mat2 = SquareMat<2>;
using Mat3 = SquareMat<3>;
using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <std::size_t N>
SquareMat<N> operator+(const SquareMat<N>& x, const SquareMat<N>& y) {
    SquareMat<N> r;
    for (std::size_t i = 0; i < N * N; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

template <std::size_t N>
SquareMat<N> operator-(const SquareMat<N>& x, const SquareMat<N>& y) {
    SquareMat<N> r;
    for (std::size_t i = 0; i < N * N; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

template <std::size_t N>
SquareMat<N> operator*(Complex s, const SquareMat<N>& m) {
    SquareMat<N> r;
    for (std::size_t i = 0; i < N * N; ++i) r.a[i] = s * m.a[i];
    return r;
}

template <std::size_t N>
SquareMat<N> operator*(const SquareMat<N>& x, const SquareMat<N>& y) {
    SquareMat<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            const Complex xik = x(i, k);
            for (std::size_t j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

template <std::size_t N>
Vec<N> operator*(const SquareMat<N>& m, const Vec<N>& v) {
    Vec<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r[i] += m(i, j) * v[j];
    return r;
}

inline Complex det(const Mat2& m) {
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

inline Complex det(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
         - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
         + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline Mat2 inverse(const Mat2& m) {
    Complex d = det(m);
    if (std::abs(d) == 0.0) throw std::invalid_argument("singular 2x2 matrix");
    Mat2 r;
    r(0, 0) = m(1, 1) / d;
    r(0, 1) = -m(0, 1) / d;
    r(1, 0) = -m(1, 0) / d;
    r(1, 1) = m(0, 0) / d;
    return r;
}

/// Eigenvalue with its unit-norm eigenvector.
struct EigenPair {
    Complex value;
    Vec2 vector;
};

struct Eig2Result {
    EigenPair first;   // dominant (largest modulus)
    EigenPair second;
    bool degenerate = false;  // characteristic discriminant vanished: defective or scalar
};

namespace detail {

// Eigenvector of (m - lambda I): take the more robust of the two null-space
// candidate rows.
inline Vec2 eigvec2(const Mat2& m, Complex lambda) {
    const Complex a = m(0, 0) - lambda, b = m(0, 1);
    const Complex c = m(1, 0), d = m(1, 1) - lambda;
    Vec2 v1{{b, -a}};
    Vec2 v2{{d, -c}};
    Vec2 v = (v1.norm_sq() >= v2.norm_sq()) ? v1 : v2;
    if (v.norm_sq() == 0.0) {
        // scalar multiple of identity: any direction is an eigenvector
        return Vec2{{1.0, 0.0}};
    }
    return v.normalized();
}

inline bool eig_order_before(Complex x, Complex y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
}

}  // namespace detail

/// Eigendecomposition of a 2x2 matrix from its characteristic polynomial
/// lambda^2 - tr*lambda + det. Dominant eigenvalue first; ties broken by
/// descending real then descending imaginary part. A vanishing characteristic
/// discriminant (within 1e-14 of the matrix scale) sets the degenerate flag
/// and both pairs share one eigenvector.
inline Eig2Result eig2(const Mat2& m) {
    if (!m.finite()) throw std::invalid_argument("eig2: non-finite entries");
    const Complex tr = m.trace();
    const Complex dt = det(m);
    const Complex disc = tr * tr - 4.0 * dt;
    const double scale = std::max(1.0, std::norm(tr) + 4.0 * std::abs(dt));

    Eig2Result r;
    if (std::abs(disc) <= 1e-14 * scale) {
        const Complex lambda = 0.5 * tr;
        const Vec2 v = detail::eigvec2(m, lambda);
        r.first = {lambda, v};
        r.second = {lambda, v};
        r.degenerate = true;
        return r;
    }
    const Complex sq = std::sqrt(disc);
    // root of larger magnitude first, its sibling via the product identity
    Complex l1 = 0.5 * (tr + sq);
    Complex l2 = 0.5 * (tr - sq);
    if (std::abs(l1) >= std::abs(l2)) {
        if (l1 != 0.0) l2 = dt / l1;
    } else if (l2 != 0.0) {
        l1 = dt / l2;
    }
    if (!detail::eig_order_before(l1, l2)) std::swap(l1, l2);
    r.first = {l1, detail::eigvec2(m, l1)};
    r.second = {l2, detail::eigvec2(m, l2)};
    return r;
}

/// exp(-i*m*t) by scaling-and-squaring with a truncated Taylor series,
/// relative tolerance 1e-12 or better.
template <std::size_t N>
SquareMat<N> expm(const SquareMat<N>& m, double t) {
    if (!m.finite() || !std::isfinite(t)) throw std::invalid_argument("expm: non-finite input");
    if (t < 0.0) throw std::invalid_argument("expm: negative time");
    SquareMat<N> A = Complex(0.0, -t) * m;
    const double nrm = A.norm_inf();
    int s = 0;
    if (nrm > 0.5) {
        s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
        A = Complex(std::ldexp(1.0, -s), 0.0) * A;
    }
    SquareMat<N> result = SquareMat<N>::identity();
    SquareMat<N> term = SquareMat<N>::identity();
    for (int k = 1; k <= 40; ++k) {
        term = Complex(1.0 / k, 0.0) * (term * A);
        result = result + term;
        if (term.norm_inf() <= 1e-16 * result.norm_inf()) break;
    }
    for (int k = 0; k < s; ++k) result = result * result;
    return result;
}

/// m^n. Exact repeated product for n <= 64; eigendecomposition power for
/// larger n when non-degenerate; binary exponentiation otherwise.
inline Mat2 matpow(const Mat2& m, std::uint64_t n) {
    if (!m.finite()) throw std::invalid_argument("matpow: non-finite entries");
    if (n == 0) return Mat2::identity();
    if (n == 1) return m;
    if (n <= 64) {
        Mat2 r = m;
        for (std::uint64_t k = 1; k < n; ++k) r = r * m;
        return r;
    }
    const Eig2Result e = eig2(m);
    if (!e.degenerate) {
        Mat2 v;
        v(0, 0) = e.first.vector[0];
        v(1, 0) = e.first.vector[1];
        v(0, 1) = e.second.vector[0];
        v(1, 1) = e.second.vector[1];
        const Complex cond = det(v);
        if (std::abs(cond) > 1e-8) {
            Mat2 d;
            d(0, 0) = std::pow(e.first.value, static_cast<double>(n));
            d(1, 1) = std::pow(e.second.value, static_cast<double>(n));
            return v * d * inverse(v);
        }
        // nearly defective: fall through to binary exponentiation
    }
    Mat2 result = Mat2::identity();
    Mat2 base = m;
    std::uint64_t k = n;
    while (k > 0) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

}  // namespace fptsim

#endif  // FPTSIM_SMALLMAT_HPP
