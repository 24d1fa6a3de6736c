#pragma once

#include "precision.hpp"

#include <ostream>
#include <string>

namespace spps {

// Complex number over any Real scalar.  std::complex only guarantees the
// built-in floating types, so the solver carries its own minimal template.
template <class Real>
struct Cplx {
    Real re{};
    Real im{};

    Cplx() = default;
    Cplx(const Real& r) : re(r) {}  // NOLINT: implicit by design
    Cplx(const Real& r, const Real& i) : re(r), im(i) {}

    Cplx& operator+=(const Cplx& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Cplx& operator-=(const Cplx& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Cplx& operator*=(const Cplx& o) {
        const Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Cplx& operator/=(const Cplx& o);
};

template <class Real>
Cplx<Real> operator+(Cplx<Real> a, const Cplx<Real>& b) { return a += b; }
template <class Real>
Cplx<Real> operator-(Cplx<Real> a, const Cplx<Real>& b) { return a -= b; }
template <class Real>
Cplx<Real> operator*(Cplx<Real> a, const Cplx<Real>& b) { return a *= b; }
template <class Real>
Cplx<Real> operator-(const Cplx<Real>& a) { return {-a.re, -a.im}; }
template <class Real>
bool operator==(const Cplx<Real>& a, const Cplx<Real>& b) { return a.re == b.re && a.im == b.im; }
template <class Real>
bool operator!=(const Cplx<Real>& a, const Cplx<Real>& b) { return !(a == b); }

// mixed scalar forms so expressions like 2 * z and z / h read naturally
template <class Real>
Cplx<Real> operator+(const Real& a, Cplx<Real> b) { return Cplx<Real>(a) + b; }
template <class Real>
Cplx<Real> operator-(const Real& a, const Cplx<Real>& b) { return Cplx<Real>(a) - b; }
template <class Real>
Cplx<Real> operator*(const Real& a, Cplx<Real> b) { return {a * b.re, a * b.im}; }
template <class Real>
Cplx<Real> operator*(const Cplx<Real>& b, const Real& a) { return {a * b.re, a * b.im}; }
template <class Real>
Cplx<Real> operator/(const Cplx<Real>& a, const Real& s) { return {a.re / s, a.im / s}; }
template <class Real>
Cplx<Real> operator*(int a, const Cplx<Real>& b) { return {Real(a) * b.re, Real(a) * b.im}; }

template <class Real>
Real norm(const Cplx<Real>& z) {
    return z.re * z.re + z.im * z.im;
}

template <class Real>
Cplx<Real> conj(const Cplx<Real>& z) {
    return {z.re, -z.im};
}

// hypot-style magnitude: avoids overflow for wide-exponent-range operands
template <class Real>
Real abs(const Cplx<Real>& z) {
    using std::abs;
    using std::sqrt;
    Real ar = abs(z.re), ai = abs(z.im);
    if (ar == 0) return ai;
    if (ai == 0) return ar;
    if (ar < ai) {
        const Real q = ar / ai;
        return ai * sqrt(1 + q * q);
    }
    const Real q = ai / ar;
    return ar * sqrt(1 + q * q);
}

template <class Real>
Real arg(const Cplx<Real>& z) {
    using std::atan2;
    return atan2(z.im, z.re);
}

template <class Real>
Cplx<Real>& Cplx<Real>::operator/=(const Cplx<Real>& o) {
    using std::abs;
    // Smith's algorithm: stable for wide dynamic range
    Real ar = abs(o.re), ai = abs(o.im);
    if (ar >= ai) {
        const Real q = o.im / o.re;
        const Real d = o.re + o.im * q;
        const Real r = (re + im * q) / d;
        im = (im - re * q) / d;
        re = r;
    } else {
        const Real q = o.re / o.im;
        const Real d = o.re * q + o.im;
        const Real r = (re * q + im) / d;
        im = (im * q - re) / d;
        re = r;
    }
    return *this;
}

template <class Real>
Cplx<Real> operator/(Cplx<Real> a, const Cplx<Real>& b) { return a /= b; }
template <class Real>
Cplx<Real> operator/(const Real& a, const Cplx<Real>& b) { return Cplx<Real>(a) / b; }

template <class Real>
Cplx<Real> exp(const Cplx<Real>& z) {
    using std::cos;
    using std::exp;
    using std::sin;
    const Real m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

template <class Real>
Cplx<Real> log(const Cplx<Real>& z) {
    using std::log;
    return {log(abs(z)), arg(z)};
}

template <class Real>
Cplx<Real> sqrt(const Cplx<Real>& z) {
    using std::sqrt;
    const Real m = abs(z);
    if (m == 0) return {Real(0), Real(0)};
    // principal branch via half-angle identities
    const Real t = sqrt((m + z.re) / 2);
    if (t != 0) {
        return {t, z.im / (2 * t)};
    }
    const Real s = sqrt((m - z.re) / 2);
    return {Real(0), z.im >= 0 ? s : -s};
}

template <class Real>
Cplx<Real> sin(const Cplx<Real>& z) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}

template <class Real>
Cplx<Real> cos(const Cplx<Real>& z) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    return {cos(z.re) * cosh(z.im), -sin(z.re) * sinh(z.im)};
}

template <class Real>
Cplx<Real> sinh(const Cplx<Real>& z) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    return {sinh(z.re) * cos(z.im), cosh(z.re) * sin(z.im)};
}

template <class Real>
Cplx<Real> cosh(const Cplx<Real>& z) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    return {cosh(z.re) * cos(z.im), sinh(z.re) * sin(z.im)};
}

template <class Real>
Cplx<Real> tan(const Cplx<Real>& z) {
    return sin(z) / cos(z);
}

template <class Real>
Cplx<Real> tanh(const Cplx<Real>& z) {
    return sinh(z) / cosh(z);
}

// z^n by binary powering, n >= 0
template <class Real>
Cplx<Real> powi(Cplx<Real> z, long n) {
    Cplx<Real> acc{Real(1), Real(0)};
    for (; n > 0; n >>= 1) {
        if (n & 1) acc *= z;
        z *= z;
    }
    return acc;
}

template <class Real>
std::ostream& operator<<(std::ostream& os, const Cplx<Real>& z) {
    return os << "(" << z.re << (z.im < 0 ? "" : "+") << z.im << "i)";
}

}  // namespace spps
