#pragma once

#include "char_poly.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace spps {

// Power machinery for the periodic problem with weight w = |tan(x/2)|^nu on
// [-pi, pi], sampled on an offset grid (0 and +-pi fall between nodes).  The
// real recursion, anchored at x = 0,
//   Yt[0] = 1,
//   Yt[k](x) = -Zw[k](x)/w(x) + int_0^x Yt[k-1],  Zw[k](x) = int_0^x w Yt[k-1],
// carries the even-order powers; u(x) = sum_k mu^k Yt[k](x) with mu = i*lambda
// solves the problem, and periodicity at exact +-pi reduces to the polynomial
//   sum_k Delta_k mu^k = 0,  Delta_k = int_{-pi}^{pi} Yt[k-1],  Delta_0 = 0.
template <class Real>
struct SingularPowers {
    GridPtr<Real> grid;
    int N = 0;
    Real nu{};
    std::size_t ci = 0;                // index of the node at -h/2
    std::vector<Real> wt;              // weight at the nodes
    std::vector<std::vector<Real>> Yt; // Yt[k], k = 0..N
    std::vector<std::vector<Real>> Zw; // Zw[k], k = 1..N (Zw[0] unused)
    std::vector<Real> delta;           // Delta_k, k = 0..N
};

namespace detail {

// Quartic-interpolated value at the midpoint between nodes ci and ci + 1.
template <class Real>
Real interp_mid(const std::vector<Real>& v, std::size_t ci) {
    return (-v[ci - 1] + 9 * v[ci] + 9 * v[ci + 1] - v[ci + 2]) / 16;
}

// Real-valued counterpart of cumulative_integral on a uniform grid, anchored
// at node 0 (same 5-point quartic stencils).
template <class Real>
std::vector<Real> cumulative_quartic_real(const std::vector<Real>& f, const Real& h) {
    const std::size_t n = f.size();
    std::vector<Real> F(n, Real(0));
    const Real h720 = h / 720;
    Real acc{};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t s = i < 2 ? 0 : (i + 2 >= n ? n - 5 : i - 2);
        const int* w = kQuartic[i - s];
        Real cell{};
        for (int j = 0; j < 5; ++j) cell += Real(w[j]) * f[s + static_cast<std::size_t>(j)];
        acc += h720 * cell;
        F[i + 1] = acc;
    }
    return F;
}

// F(x_m) = int_0^{x_m} w f: per-cell trapezoids against the exact cell weights
// Wc, with the two half-cells next to 0 using the interpolated midpoint value.
template <class Real>
std::vector<Real> weighted_cumulative(const std::vector<Real>& f, const std::vector<Real>& Wc,
                                      const Real& Whalf, std::size_t ci) {
    const std::size_t M = f.size();
    std::vector<Real> F(M, Real(0));
    const Real f0 = interp_mid(f, ci);
    F[ci + 1] = Whalf * (f0 + f[ci + 1]) / 2;
    for (std::size_t j = ci + 1; j + 1 < M; ++j) F[j + 1] = F[j] + Wc[j] * (f[j] + f[j + 1]) / 2;
    F[ci] = -Whalf * (f0 + f[ci]) / 2;
    for (std::size_t j = ci; j-- > 0;) F[j] = F[j + 1] - Wc[j] * (f[j] + f[j + 1]) / 2;
    return F;
}

// F(x_m) = int_0^{x_m} f: quartic cumulative re-anchored at the interpolated
// x = 0 midpoint.
template <class Real>
std::vector<Real> plain_cumulative_mid(const std::vector<Real>& f, const Real& h,
                                       std::size_t ci) {
    std::vector<Real> F = cumulative_quartic_real(f, h);
    const Real base = interp_mid(F, ci);
    for (Real& v : F) v -= base;
    return F;
}

// int_{-pi}^{pi} f: node-range quartic cumulative plus the two half-cells at
// the ends (node value times h/2 each).
template <class Real>
Real full_integral(const std::vector<Real>& f, const Real& h) {
    const std::vector<Real> F = cumulative_quartic_real(f, h);
    return F.back() + (f.front() + f.back()) * h / 2;
}

}  // namespace detail

template <class Real>
SingularPowers<Real> build_singular_powers(GridPtr<Real> grid, const Real& nu, int N) {
    using std::abs;
    using std::pow;
    using std::tan;
    if (N < 1) throw ContractViolation("power count must be at least 1");
    if (!(nu > 0)) throw ContractViolation("weight exponent must be positive");
    const std::size_t M = grid->size();
    if (!grid->uniform || M < 8 || M % 2 != 0)
        throw ContractViolation("singular powers require a uniform offset grid, even size >= 8");
    SingularPowers<Real> sp;
    sp.grid = grid;
    sp.N = N;
    sp.nu = nu;
    sp.ci = M / 2 - 1;
    if (!(abs(grid->nodes[sp.ci] + grid->h / 2) <= (grid->b - grid->a) * real_eps<Real>() * 16))
        throw ContractViolation("offset grid must straddle zero symmetrically");

    const TanPowerWeight<Real> weight{nu};
    const std::vector<Real> Wc = weighted_cell_integrals(*grid, weight);
    const Real Whalf = weighted_interval_integral(Real(0), grid->h / 2, weight);
    sp.wt.resize(M);
    for (std::size_t j = 0; j < M; ++j) sp.wt[j] = pow(abs(tan(grid->nodes[j] / 2)), nu);

    sp.Yt.reserve(N + 1);
    sp.Zw.resize(1);
    sp.Yt.emplace_back(M, Real(1));
    sp.delta.assign(1, Real(0));
    for (int k = 1; k <= N; ++k) {
        const std::vector<Real>& prev = sp.Yt.back();
        std::vector<Real> Z = detail::weighted_cumulative(prev, Wc, Whalf, sp.ci);
        const std::vector<Real> P = detail::plain_cumulative_mid(prev, grid->h, sp.ci);
        std::vector<Real> next(M);
        for (std::size_t j = 0; j < M; ++j) next[j] = -Z[j] / sp.wt[j] + P[j];
        sp.delta.push_back(detail::full_integral(prev, grid->h));
        sp.Zw.push_back(std::move(Z));
        sp.Yt.push_back(std::move(next));
    }
    return sp;
}

// Periodicity condition as a polynomial in lambda itself: substituting
// mu = i*lambda into sum Delta_k mu^k gives coefficients Delta_k i^k.
template <class Real>
CharPoly<Real> characteristic_periodic_singular(const SingularPowers<Real>& sp) {
    CharPoly<Real> cp;
    cp.lambda0 = Cplx<Real>{};
    cp.eig_u1 = Cplx<Real>(Real(1));
    cp.eig_u2 = Cplx<Real>{};
    cp.coeffs.resize(sp.delta.size());
    for (std::size_t k = 0; k < sp.delta.size(); ++k) {
        switch (k % 4) {
            case 0: cp.coeffs[k] = Cplx<Real>{sp.delta[k], Real(0)}; break;
            case 1: cp.coeffs[k] = Cplx<Real>{Real(0), sp.delta[k]}; break;
            case 2: cp.coeffs[k] = Cplx<Real>{-sp.delta[k], Real(0)}; break;
            default: cp.coeffs[k] = Cplx<Real>{Real(0), -sp.delta[k]}; break;
        }
    }
    return cp;
}

// Solution of the periodic problem at a given lambda and its derivative:
//   u = sum_k mu^k Yt[k],  u' = (nu / sin x) (1/w) sum_{k>=1} mu^k Zw[k]
// (the derivative follows from w'/w = nu / sin x; both series in mu = i*lambda).
template <class Real>
std::pair<SampledFunction<Real>, SampledFunction<Real>> singular_solution(
    const SingularPowers<Real>& sp, const Cplx<Real>& lambda) {
    using std::sin;
    const Cplx<Real> mu{-lambda.im, lambda.re};
    const std::size_t M = sp.grid->size();
    SampledFunction<Real> u(sp.grid), du(sp.grid);
    for (std::size_t j = 0; j < M; ++j) {
        Cplx<Real> su{}, sz{};
        for (int k = sp.N; k >= 1; --k) {
            su = (su + Cplx<Real>{sp.Yt[static_cast<std::size_t>(k)][j], Real(0)}) * mu;
            sz = (sz + Cplx<Real>{sp.Zw[static_cast<std::size_t>(k)][j], Real(0)}) * mu;
        }
        u[j] = su + Cplx<Real>(Real(1));
        du[j] = sz * (sp.nu / (sin(sp.grid->nodes[j]) * sp.wt[j]));
    }
    return {std::move(u), std::move(du)};
}

// Truncation discrepancy at the right endpoint: the next series term of the
// periodicity defect, |lambda|^(N+1) |Yt[N](pi-)|.
template <class Real>
Real delta1_singular(const SingularPowers<Real>& sp, const Cplx<Real>& lambda) {
    using std::abs;
    using std::pow;
    return pow(abs(lambda), sp.N + 1) * abs(sp.Yt[static_cast<std::size_t>(sp.N)].back());
}

}  // namespace spps
