#pragma once

#include "problem.hpp"
#include "quadrature.hpp"

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace spps {

inline constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);

// Base solution u0 of (p u')' + q u = lambda0 r u together with the two
// integrand arrays of the power recursion.  u0 must not vanish on the grid;
// the one exception is a singular left endpoint (vanish_ok), where every
// integrand that would touch the infinite auxiliary values is exactly zero.
template <class Real>
struct ParticularSolution {
    SampledFunction<Real> u0, du0;
    Cplx<Real> lambda0;
    SampledFunction<Real> aux_rw;     // r * u0^2
    SampledFunction<Real> aux_pinv;   // 1 / (u0^2 p)
    SampledFunction<Real> aux_pinv1;  // 1 / (u0 p)
};

template <class Real>
ParticularSolution<Real> make_particular_solution(SampledFunction<Real> u0,
                                                  SampledFunction<Real> du0,
                                                  const Coefficients<Real>& coef,
                                                  const Cplx<Real>& lambda0,
                                                  std::size_t vanish_ok = kNoNode) {
    require_same_grid(u0, coef.p);
    require_same_grid(u0, du0);
    const Cplx<Real> zero{};
    ParticularSolution<Real> ps;
    ps.aux_rw = SampledFunction<Real>(u0.grid);
    ps.aux_pinv = SampledFunction<Real>(u0.grid);
    ps.aux_pinv1 = SampledFunction<Real>(u0.grid);
    const Cplx<Real> inf_marker{std::numeric_limits<Real>::infinity(), Real(0)};
    for (std::size_t i = 0; i < u0.size(); ++i) {
        if (u0[i] == zero) {
            if (i != vanish_ok)
                throw NonvanishingViolation("base solution vanishes at a grid node", i);
            ps.aux_rw[i] = zero;
            ps.aux_pinv[i] = inf_marker;
            ps.aux_pinv1[i] = inf_marker;
            continue;
        }
        const Cplx<Real> sq = u0[i] * u0[i];
        ps.aux_rw[i] = coef.r[i] * sq;
        ps.aux_pinv[i] = Cplx<Real>(Real(1)) / (sq * coef.p[i]);
        ps.aux_pinv1[i] = Cplx<Real>(Real(1)) / (u0[i] * coef.p[i]);
    }
    ps.u0 = std::move(u0);
    ps.du0 = std::move(du0);
    ps.lambda0 = lambda0;
    return ps;
}

// f * w where an exactly-zero f wins over a non-finite w: the recursion's
// integrands vanish identically at anchored zeros even when the auxiliary
// factor blows up there.
template <class Real>
SampledFunction<Real> annihilating_product(const SampledFunction<Real>& f,
                                           const SampledFunction<Real>& w) {
    require_same_grid(f, w);
    const Cplx<Real> zero{};
    SampledFunction<Real> out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] == zero ? zero : f[i] * w[i];
    return out;
}

// The two families of iterated integrals anchored at x0:
//   Xt[n] integrates Xt[n-1] against aux_rw when n is odd, aux_pinv when even;
//   X[n] alternates the other way.  Xt runs to order 2N, X to 2N+1.
template <class Real>
struct FormalPowers {
    int N = 0;
    std::size_t x0_index = 0;
    std::vector<SampledFunction<Real>> Xt;
    std::vector<SampledFunction<Real>> X;
};

template <class Real>
FormalPowers<Real> build_formal_powers(const ParticularSolution<Real>& ps, int N,
                                       std::size_t x0_index) {
    if (N < 1) throw ContractViolation("power count must be at least 1");
    if (x0_index >= ps.u0.size()) throw ContractViolation("anchor node outside the grid");
    FormalPowers<Real> fp;
    fp.N = N;
    fp.x0_index = x0_index;
    fp.Xt.reserve(2 * N + 1);
    fp.X.reserve(2 * N + 2);

    SampledFunction<Real> ones(ps.u0.grid);
    for (auto& v : ones.values) v = Cplx<Real>(Real(1));
    fp.Xt.push_back(ones);
    fp.X.push_back(std::move(ones));

    for (int n = 1; n <= 2 * N + 1; ++n) {
        const bool odd = n % 2 != 0;
        if (n <= 2 * N) {
            const auto& w = odd ? ps.aux_rw : ps.aux_pinv;
            fp.Xt.push_back(cumulative_integral(annihilating_product(fp.Xt.back(), w), x0_index));
        }
        const auto& w = odd ? ps.aux_pinv : ps.aux_rw;
        fp.X.push_back(cumulative_integral(annihilating_product(fp.X.back(), w), x0_index));
    }
    return fp;
}

// Remainder estimate for the truncated series: with
//   c = |lambda - lambda0| * max|r u0^2| * max|1/(p u0^2)| * (b-a)^2,
// the u1 tail is bounded by max|u0| * (cosh sqrt(c) - partial sum) and the u2
// tail by the sinh analog.  Problems with singular coefficients make c
// infinite; the bound is then reported unavailable.
template <class Real>
struct TailBound {
    Real c{};
    Real boundU1{};
    Real boundU2{};
    bool available = true;
};

template <class Real>
TailBound<Real> tail_bound(const ParticularSolution<Real>& ps, const Cplx<Real>& lambda, int N) {
    using std::isfinite;
    const auto& grid = *ps.u0.grid;
    Real max_rw{}, max_pinv{}, max_u0{};
    for (std::size_t i = 0; i < ps.u0.size(); ++i) {
        max_rw = std::max(max_rw, abs(ps.aux_rw[i]));
        max_pinv = std::max(max_pinv, abs(ps.aux_pinv[i]));
        max_u0 = std::max(max_u0, abs(ps.u0[i]));
    }
    const Real len = grid.b - grid.a;
    TailBound<Real> tb;
    tb.c = abs(lambda - ps.lambda0) * max_rw * max_pinv * len * len;
    if (!isfinite(tb.c)) {
        tb.c = std::numeric_limits<Real>::infinity();
        tb.boundU1 = tb.boundU2 = std::numeric_limits<Real>::infinity();
        tb.available = false;
        return tb;
    }
    if (tb.c == 0) return tb;

    // cosh tail: sum_{k>N} c^k/(2k)!, built up term by term
    const Real eps = real_eps<Real>();
    Real term(1);
    for (int k = 1; k <= N + 1; ++k)
        term *= tb.c / Real(2 * k - 1) / Real(2 * k);
    Real sum1 = term;
    for (int k = N + 2; k < N + 100000; ++k) {
        term *= tb.c / Real(2 * k - 1) / Real(2 * k);
        sum1 += term;
        if (term < eps * sum1) break;
    }
    // sinh tail: sum_{k>N} sqrt(c)^(2k+1)/(2k+1)!
    using std::sqrt;
    const Real rc = sqrt(tb.c);
    term = rc;
    for (int k = 1; k <= N + 1; ++k)
        term *= tb.c / Real(2 * k) / Real(2 * k + 1);
    Real sum2 = term;
    for (int k = N + 2; k < N + 100000; ++k) {
        term *= tb.c / Real(2 * k) / Real(2 * k + 1);
        sum2 += term;
        if (term < eps * sum2) break;
    }
    tb.boundU1 = max_u0 * sum1;
    tb.boundU2 = max_u0 * sum2;
    return tb;
}

}  // namespace spps
