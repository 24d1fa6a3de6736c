#pragma once

#include "solutions.hpp"

#include <cmath>

namespace spps {

// Series length for the nonvanishing-base construction: the embedded series is
// evaluated at unit spectral parameter with per-chunk constant at most 1, so
// its tail is below 1/(2n)!; pick the first n with (2n)! > 10^(digits+4).
inline int base_series_terms(int digits) {
    const double target = (digits + 4) * std::log(10.0);
    int n = 1;
    while (std::lgamma(2.0 * n + 1.0) <= target) ++n;
    return n;
}

// Nonvanishing base solution of (p u')' + q u = lambda0 r u on the whole grid.
// The equation is rewritten as (p v')' = lhat rhat v with rhat = lambda0 r - q
// and lhat = 1, whose own base solution is the constant 1; the series for that
// embedded problem yields two independent solutions v1, v2 normalized by
// v1(a) = 1, (p v1')(a) = 0 and v2(a) = 0, (p v2')(a) = 1, chained across
// chunks small enough that the unit-parameter series converges fast.  The
// returned base is u0 = v1 + i v2 (real coefficients make that nonvanishing);
// if it still nearly vanishes, deterministic complex mixes are retried.
template <class Real>
ParticularSolution<Real> build_u0_regular(const Coefficients<Real>& coef,
                                          const Cplx<Real>& lambda0 = Cplx<Real>{}) {
    const auto grid = coef.p.grid;
    const std::size_t last = grid->nodes.size() - 1;
    const int nterms = base_series_terms(RealTraits<Real>::digits());

    SampledFunction<Real> rhat(grid), qzero(grid), ones(grid), zeros(grid);
    for (std::size_t i = 0; i <= last; ++i) {
        rhat[i] = lambda0 * coef.r[i] - coef.q[i];
        ones[i] = Cplx<Real>(Real(1));
    }
    const Coefficients<Real> emb{coef.p, std::move(qzero), std::move(rhat)};
    const ParticularSolution<Real> emb_ps =
        make_particular_solution(std::move(ones), std::move(zeros), emb, Cplx<Real>{});
    const Cplx<Real> one{Real(1)};
    const auto cuts = detail::chunk_boundaries(emb_ps, one, std::size_t(0), last, Real(1));

    // Chunks carry a halo of 2 nodes per integration order so that every cell
    // influencing a chunk value integrates with the same quadrature stencil a
    // single full-grid pass would use; piecing the chunks together is then
    // stencil-exact, not just value-continuous.
    const std::size_t halo = 2 * std::size_t(2 * nterms + 1) + 4;
    SampledFunction<Real> v1(grid), dv1(grid), v2(grid), dv2(grid);
    Cplx<Real> V1{Real(1)}, W1{}, V2{}, W2{Real(1)};
    for (std::size_t ci = 0; ci + 1 < cuts.size(); ++ci) {
        const std::size_t i0 = cuts[ci], i1 = cuts[ci + 1];
        const std::size_t e0 = i0 >= halo ? i0 - halo : 0;
        const std::size_t e1 = std::min(i1 + halo, last);
        const auto sub = subgrid(grid, e0, e1);
        const Coefficients<Real> cref{slice(coef.p, sub, e0), slice(emb.q, sub, e0),
                                      slice(emb.r, sub, e0)};
        const ParticularSolution<Real> pslice = make_particular_solution(
            slice(emb_ps.u0, sub, e0), slice(emb_ps.du0, sub, e0), cref, Cplx<Real>{});
        const FormalPowers<Real> fp = build_formal_powers(pslice, nterms, i0 - e0);
        const SolutionPair<Real> sp = evaluate_solutions(fp, pslice, one);
        for (std::size_t j = i0; j <= i1; ++j) {
            v1[j] = V1 * sp.u1[j - e0] + W1 * sp.u2[j - e0];
            dv1[j] = V1 * sp.du1[j - e0] + W1 * sp.du2[j - e0];
            v2[j] = V2 * sp.u1[j - e0] + W2 * sp.u2[j - e0];
            dv2[j] = V2 * sp.du1[j - e0] + W2 * sp.du2[j - e0];
        }
        V1 = v1[i1];
        W1 = coef.p[i1] * dv1[i1];
        V2 = v2[i1];
        W2 = coef.p[i1] * dv2[i1];
    }

    std::vector<Cplx<Real>> mixes;
    mixes.push_back(Cplx<Real>{Real(0), Real(1)});
    for (auto [re, im] : retry_constants(8)) mixes.push_back(Cplx<Real>{Real(re), Real(im)});
    std::size_t bad_node = kNoNode;
    for (const Cplx<Real>& c : mixes) {
        SampledFunction<Real> U0(grid), dU0(grid);
        for (std::size_t i = 0; i <= last; ++i) {
            U0[i] = v1[i] + c * v2[i];
            dU0[i] = dv1[i] + c * dv2[i];
        }
        bad_node = detail::near_vanishing_node(U0);
        if (bad_node == kNoNode)
            return make_particular_solution(std::move(U0), std::move(dU0), coef, lambda0);
    }
    throw NonvanishingViolation("constructed base vanishes for every mixing constant", bad_node);
}

// Residual of the base solution in the integrated equation
//   p u0' (x) - p u0' (a) = integral_a^x (lambda0 r - q) u0.
// Diagnostic for regular bases; nodes where u0 vanishes exactly contribute a
// zero integrand.
template <class Real>
Real base_residual(const ParticularSolution<Real>& ps, const Coefficients<Real>& coef) {
    const auto grid = ps.u0.grid;
    SampledFunction<Real> w(grid);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = ps.lambda0 * coef.r[i] - coef.q[i];
    const SampledFunction<Real> F = cumulative_integral(annihilating_product(ps.u0, w), 0);
    Real worst{};
    const Cplx<Real> pdu0 = coef.p[0] * ps.du0[0];
    for (std::size_t i = 0; i < w.size(); ++i)
        worst = std::max(worst, abs(coef.p[i] * ps.du0[i] - pdu0 - F[i]));
    return worst;
}

}  // namespace spps
