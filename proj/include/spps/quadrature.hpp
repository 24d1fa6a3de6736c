#pragma once

#include "grid.hpp"

#include <boost/math/special_functions/fpclassify.hpp>

#include <cstddef>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace spps {

namespace detail {

// Integer weights (over 720) of the quartic interpolant through five
// consecutive uniform nodes, integrated over one cell.  Row c integrates over
// [x_{s+c}, x_{s+c+1}] where s is the stencil start.
inline constexpr int kQuartic[4][5] = {
    {251, 646, -264, 106, -19},
    {-19, 346, 456, -74, 11},
    {11, -74, 456, 346, -19},
    {-19, 106, -264, 646, 251},
};

}  // namespace detail

// Cumulative integral F(x_j) = int_{x_anchor}^{x_j} f, returned on the same
// grid, with F[anchor] = 0 exactly.
//
// Uniform grids use the 5-point quartic rule: each cell integrates the
// quartic through the nearest five nodes (one-sided stencils at the ends).
// Nonuniform grids and grids with fewer than five nodes use per-cell
// trapezoids.
template <class Real>
SampledFunction<Real> cumulative_integral(const SampledFunction<Real>& f, std::size_t anchor) {
    const auto& grid = *f.grid;
    const std::size_t n = f.size();
    if (anchor >= n) throw ContractViolation("anchor index outside grid");
    SampledFunction<Real> F(f.grid);

    if (!grid.uniform || n < 5) {
        Cplx<Real> acc{Real(0), Real(0)};
        for (std::size_t i = 0; i + 1 < n; ++i) {
            acc += (grid.nodes[i + 1] - grid.nodes[i]) * (f[i] + f[i + 1]) / Real(2);
            F[i + 1] = acc;
        }
    } else {
        const Real h720 = grid.h / Real(720);
        Cplx<Real> acc{Real(0), Real(0)};
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const std::size_t s = i < 2 ? 0 : (i + 2 >= n ? n - 5 : i - 2);
            const int* w = detail::kQuartic[i - s];
            Cplx<Real> cell{Real(0), Real(0)};
            for (int j = 0; j < 5; ++j) cell += Real(w[j]) * f[s + static_cast<std::size_t>(j)];
            acc += h720 * cell;
            F[i + 1] = acc;
        }
    }
    const Cplx<Real> base = F[anchor];
    for (auto& v : F.values) v -= base;
    F[anchor] = Cplx<Real>{Real(0), Real(0)};
    return F;
}

// Definite integral over the whole grid.
template <class Real>
Cplx<Real> integrate(const SampledFunction<Real>& f) {
    auto F = cumulative_integral(f, 0);
    return F.values.back();
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1], cached per (scalar, digits, order).
template <class Real>
struct GaussLegendre {
    std::vector<Real> x, w;
};

template <class Real>
const GaussLegendre<Real>& gauss_legendre(int order) {
    thread_local std::map<std::pair<int, int>, GaussLegendre<Real>> cache;
    const int digits = RealTraits<Real>::digits();
    auto it = cache.find({digits, order});
    if (it != cache.end()) return it->second;

    GaussLegendre<Real> gl;
    gl.x.resize(order);
    gl.w.resize(order);
    const Real pi = real_pi<Real>();
    const Real tol = real_eps<Real>() * 4;
    for (int k = 0; k < order; ++k) {
        using std::abs;
        using std::cos;
        // Newton from the Chebyshev-like initial guess
        Real x = cos(pi * (Real(k) + Real(3) / 4) / (Real(order) + Real(1) / 2));
        Real dp = 0;
        for (int iter = 0; iter < 200; ++iter) {
            Real p0 = 1, p1 = x;
            for (int m = 2; m <= order; ++m) {
                const Real p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / Real(m);
                p0 = p1;
                p1 = p2;
            }
            dp = Real(order) * (x * p1 - p0) / (x * x - 1);
            const Real step = p1 / dp;
            x -= step;
            if (abs(step) <= tol * (1 + abs(x))) break;
        }
        gl.x[static_cast<std::size_t>(k)] = x;
        gl.w[static_cast<std::size_t>(k)] = 2 / ((1 - x * x) * dp * dp);
    }
    return cache.emplace(std::make_pair(digits, order), std::move(gl)).first->second;
}

}  // namespace detail

// Weight w(s) = |tan(s/2)|^nu on (-pi, pi); singular at s = 0 (zero of high
// order) and |s| = pi (pole).
template <class Real>
struct TanPowerWeight {
    Real nu{};
};

namespace detail {

// integral of |tan(s/2)|^nu over [sa, sb] via the substitution t = tan(s/2):
// the integrand becomes 2 |t|^nu / (1 + t^2), smooth on any cell that avoids
// +-pi.  Per-piece Gauss-Legendre, bisected until two refinement levels agree
// to the working precision (depth cap 40).
template <class Real>
Real tan_weight_piece(const Real& ta, const Real& tb, const Real& nu, int order) {
    using std::abs;
    using std::pow;
    const auto& gl = gauss_legendre<Real>(order);
    const Real c = (ta + tb) / 2, r = (tb - ta) / 2;
    Real acc = 0;
    for (std::size_t k = 0; k < gl.x.size(); ++k) {
        const Real t = c + r * gl.x[k];
        const Real at = abs(t);
        const Real val = at == 0 ? Real(0) : Real(2) * pow(at, nu) / (1 + t * t);
        acc += gl.w[k] * val;
    }
    return acc * r;
}

template <class Real>
Real tan_weight_adaptive(const Real& ta, const Real& tb, const Real& nu, int order, const Real& tol,
                         int depth, const Real& coarse) {
    using std::abs;
    const Real mid = (ta + tb) / 2;
    const Real left = tan_weight_piece(ta, mid, nu, order);
    const Real right = tan_weight_piece(mid, tb, nu, order);
    const Real fine = left + right;
    if (depth >= 40 || abs(fine - coarse) <= tol * abs(fine)) return fine;
    return tan_weight_adaptive(ta, mid, nu, order, tol, depth + 1, left) +
           tan_weight_adaptive(mid, tb, nu, order, tol, depth + 1, right);
}

}  // namespace detail

// Integral of the weight over a single interval; used for whole cells and for
// the half-cells around interior anchor points on offset grids.
template <class Real>
Real weighted_interval_integral(const Real& sa, const Real& sb, const TanPowerWeight<Real>& weight) {
    using std::abs;
    using std::tan;
    if (!(sa < sb)) throw ContractViolation("weighted integral requires sa < sb");
    const Real pi = real_pi<Real>();
    if (sa < -pi || sb > pi) throw ContractViolation("tan-power weight lives on [-pi, pi]");
    const int order = RealTraits<Real>::digits() / 2 + 10;
    const Real tol = real_eps<Real>() * 16;
    const Real ta = tan(sa / 2), tb = tan(sb / 2);
    if (!boost::math::isfinite(ta) || !boost::math::isfinite(tb))
        return std::numeric_limits<Real>::infinity();
    const Real coarse = detail::tan_weight_piece(ta, tb, weight.nu, order);
    return detail::tan_weight_adaptive(ta, tb, weight.nu, order, tol, 0, coarse);
}

// Exact-in-the-weight cell integrals W_j = int_{cell j} |tan(s/2)|^nu ds for
// every cell of the grid.  Throws SingularCell if a cell integral is not
// finite (a pole of the weight inside or on the cell).
template <class Real>
std::vector<Real> weighted_cell_integrals(const Grid<Real>& grid, const TanPowerWeight<Real>& weight) {
    std::vector<Real> W(grid.size() > 0 ? grid.size() - 1 : 0);
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        W[j] = weighted_interval_integral(grid.nodes[j], grid.nodes[j + 1], weight);
        if (!boost::math::isfinite(W[j])) throw SingularCell("weight integral diverges", j);
    }
    return W;
}

}  // namespace spps
