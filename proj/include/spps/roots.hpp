#pragma once

#include "complex.hpp"
#include "error.hpp"
#include "precision.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace spps {

// Polynomials are coefficient vectors, coeffs[m] multiplying z^m.

template <class Real>
Cplx<Real> poly_eval(const std::vector<Cplx<Real>>& a, const Cplx<Real>& z) {
    Cplx<Real> acc{};
    for (std::size_t m = a.size(); m-- > 0;) acc = acc * z + a[m];
    return acc;
}

template <class Real>
Cplx<Real> poly_dval(const std::vector<Cplx<Real>>& a, const Cplx<Real>& z) {
    Cplx<Real> acc{};
    for (std::size_t m = a.size(); m-- > 1;) acc = acc * z + Real(static_cast<long>(m)) * a[m];
    return acc;
}

// Evaluation together with its rounding-noise scale eps * sum |a_m| |z|^m:
// a residual below the noise is indistinguishable from an exact root.
template <class Real>
struct PolyEval {
    Cplx<Real> value;
    Real noise;
};

template <class Real>
PolyEval<Real> poly_eval_noise(const std::vector<Cplx<Real>>& a, const Cplx<Real>& z) {
    Cplx<Real> acc{};
    Real mag{};
    const Real az = abs(z);
    for (std::size_t m = a.size(); m-- > 0;) {
        acc = acc * z + a[m];
        mag = mag * az + abs(a[m]);
    }
    return {acc, mag * real_eps<Real>()};
}

template <class Real>
std::vector<Cplx<Real>> poly_mul(const std::vector<Cplx<Real>>& a,
                                 const std::vector<Cplx<Real>>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Cplx<Real>> out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Coefficients of p(z + c) from those of p(z).
template <class Real>
std::vector<Cplx<Real>> taylor_shift(std::vector<Cplx<Real>> a, const Cplx<Real>& c) {
    if (a.size() < 2) return a;
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        for (std::size_t j = a.size() - 1; j-- > i;) a[j] += c * a[j + 1];
    return a;
}

template <class Real>
struct RootSet {
    std::vector<Cplx<Real>> roots;  // sorted by real part, then imaginary part
    std::vector<bool> converged;    // residual at or below the evaluation noise
    int sweeps = 0;
};

namespace detail {

// Bini-style starting points: radii from the upper convex hull of
// (m, log|a_m|), angles spread uniformly with a fixed offset.
template <class Real>
std::vector<Cplx<Real>> aberth_start(const std::vector<Cplx<Real>>& a) {
    using std::log;
    const std::size_t n = a.size() - 1;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t m = 0; m < a.size(); ++m) {
        const Real mag = abs(a[m]);
        if (mag > 0) pts.emplace_back(double(m), static_cast<double>(log(mag)));
    }
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& [x1, y1] = hull[hull.size() - 2];
            const auto& [x2, y2] = hull[hull.size() - 1];
            if ((y2 - y1) * (p.first - x1) <= (p.second - y1) * (x2 - x1))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    std::vector<double> radii;
    radii.reserve(n);
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        const double e = std::clamp(-(hull[i + 1].second - hull[i].second) /
                                        (hull[i + 1].first - hull[i].first),
                                    -600.0, 600.0);
        const double r = std::exp(e);
        for (double m = hull[i].first; m < hull[i + 1].first; ++m) radii.push_back(r);
    }
    while (radii.size() < n) radii.push_back(radii.empty() ? 1.0 : radii.back());
    std::vector<Cplx<Real>> zs(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double th = 6.283185307179586 * double(k) / double(n) + 0.4;
        zs[k] = Cplx<Real>{Real(radii[k] * std::cos(th)), Real(radii[k] * std::sin(th))};
    }
    return zs;
}

}  // namespace detail

// All roots by Aberth simultaneous iteration with Newton polishing.  Trailing
// exactly-zero coefficients are trimmed; exactly-zero constant terms are
// factored out as exact zero roots.  Roots that fail to push the residual
// down to the evaluation noise are returned with converged = false.
template <class Real>
RootSet<Real> aberth_roots(std::vector<Cplx<Real>> coeffs, int max_sweeps = 500) {
    using std::isfinite;
    const Cplx<Real> zero{};
    while (!coeffs.empty() && coeffs.back() == zero) coeffs.pop_back();
    if (coeffs.empty()) throw ContractViolation("characteristic polynomial is identically zero");
    for (const auto& c : coeffs)
        if (!(isfinite(c.re) && isfinite(c.im)))
            throw RootFindingError("polynomial has a non-finite coefficient");
    std::size_t nzero = 0;
    while (nzero < coeffs.size() && coeffs[nzero] == zero) ++nzero;
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(nzero));

    RootSet<Real> rs;
    rs.roots.assign(nzero, zero);
    rs.converged.assign(nzero, true);
    const std::size_t n = coeffs.size() - 1;
    if (n == 0) {
        std::sort(rs.roots.begin(), rs.roots.end(),
                  [](const Cplx<Real>& a, const Cplx<Real>& b) {
                      return a.re != b.re ? a.re < b.re : a.im < b.im;
                  });
        return rs;
    }

    std::vector<Cplx<Real>> zs = detail::aberth_start(coeffs);
    const Real eps2 = real_eps<Real>() * 100;
    for (rs.sweeps = 1; rs.sweeps <= max_sweeps; ++rs.sweeps) {
        Real moved{};
        for (std::size_t i = 0; i < n; ++i) {
            const PolyEval<Real> pe = poly_eval_noise(coeffs, zs[i]);
            if (abs(pe.value) <= pe.noise) continue;
            const Cplx<Real> dz = poly_dval(coeffs, zs[i]);
            if (dz == Cplx<Real>{}) continue;
            const Cplx<Real> ratio = pe.value / dz;
            Cplx<Real> s{};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && zs[i] != zs[j]) s += Cplx<Real>(Real(1)) / (zs[i] - zs[j]);
            const Cplx<Real> denom = Cplx<Real>(Real(1)) - ratio * s;
            const Cplx<Real> step = denom == Cplx<Real>{} ? ratio : ratio / denom;
            zs[i] -= step;
            moved = std::max(moved, abs(step) / (abs(zs[i]) + 1));
        }
        if (moved < eps2) break;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (int it = 0; it < 3; ++it) {
            const Cplx<Real> dz = poly_dval(coeffs, zs[i]);
            if (dz == Cplx<Real>{}) break;
            zs[i] -= poly_eval(coeffs, zs[i]) / dz;
        }
        if (!(isfinite(zs[i].re) && isfinite(zs[i].im)))
            throw RootFindingError("root iteration produced a non-finite value");
        const PolyEval<Real> pe = poly_eval_noise(coeffs, zs[i]);
        rs.roots.push_back(zs[i]);
        rs.converged.push_back(abs(pe.value) <= 32 * pe.noise);
    }
    std::vector<std::size_t> order(rs.roots.size());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto &za = rs.roots[a], &zb = rs.roots[b];
        return za.re != zb.re ? za.re < zb.re : za.im < zb.im;
    });
    RootSet<Real> out;
    out.sweeps = rs.sweeps;
    for (std::size_t k : order) {
        out.roots.push_back(rs.roots[k]);
        out.converged.push_back(rs.converged[k]);
    }
    return out;
}

}  // namespace spps
