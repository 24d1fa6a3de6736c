#pragma once

#include "formal_powers.hpp"

#include <random>
#include <sstream>
#include <utility>
#include <vector>

namespace spps {

// The two series solutions at a given spectral value and their derivatives,
// computed analytically from the odd/even powers (no numerical
// differentiation):
//   u1 = u0 * S1,          u1' = u0' * S1 + S1d / (u0 p)
//   u2 = u0 * S2,          u2' = u0' * S2 + S2d / (u0 p)
// with S1 = sum L^k Xt[2k], S1d = sum_{k>=1} L^k Xt[2k-1],
//      S2 = sum L^k X[2k+1], S2d = sum L^k X[2k], L = lambda - lambda0.
template <class Real>
struct SolutionPair {
    Cplx<Real> lambda;
    SampledFunction<Real> u1, u2, du1, du2;
};

template <class Real>
SolutionPair<Real> evaluate_solutions(const FormalPowers<Real>& fp,
                                      const ParticularSolution<Real>& ps,
                                      const Cplx<Real>& lambda) {
    const int N = fp.N;
    const Cplx<Real> L = lambda - ps.lambda0;
    const Cplx<Real> zero{};
    const std::size_t M = ps.u0.size();
    SolutionPair<Real> sp;
    sp.lambda = lambda;
    sp.u1 = SampledFunction<Real>(ps.u0.grid);
    sp.u2 = SampledFunction<Real>(ps.u0.grid);
    sp.du1 = SampledFunction<Real>(ps.u0.grid);
    sp.du2 = SampledFunction<Real>(ps.u0.grid);
    for (std::size_t j = 0; j < M; ++j) {
        Cplx<Real> s1{}, s1d{}, s2{}, s2d{};
        for (int k = N; k >= 0; --k) {
            s1 = s1 * L + fp.Xt[2 * k][j];
            s2 = s2 * L + fp.X[2 * k + 1][j];
            s2d = s2d * L + fp.X[2 * k][j];
            if (k >= 1) s1d = s1d * L + fp.Xt[2 * k - 1][j];
        }
        s1d = s1d * L;  // lowest retained order is k = 1
        sp.u1[j] = ps.u0[j] * s1;
        sp.u2[j] = ps.u0[j] * s2;
        sp.du1[j] = ps.du0[j] * s1 + (s1d == zero ? zero : ps.aux_pinv1[j] * s1d);
        sp.du2[j] = ps.du0[j] * s2 + (s2d == zero ? zero : ps.aux_pinv1[j] * s2d);
    }
    return sp;
}

// Linear combination satisfying u(x0) = A, u'(x0) = B.
template <class Real>
std::pair<Cplx<Real>, Cplx<Real>> ivp_coefficients(const ParticularSolution<Real>& ps,
                                                   const Cplx<Real>& p_at_x0,
                                                   std::size_t x0_index, const Cplx<Real>& A,
                                                   const Cplx<Real>& B) {
    const Cplx<Real> u0x = ps.u0[x0_index];
    if (u0x == Cplx<Real>{})
        throw ContractViolation("base solution vanishes at the initial node");
    const Cplx<Real> c1 = A / u0x;
    const Cplx<Real> c2 = (B - c1 * ps.du0[x0_index]) * u0x * p_at_x0;
    return {c1, c2};
}

// Deterministic complex mixing constants for the nonvanishing retries.
inline std::vector<std::pair<double, double>> retry_constants(int count) {
    std::mt19937 gen(0x53707073u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::pair<double, double>> out;
    while (static_cast<int>(out.size()) < count) {
        const double re = dist(gen), im = dist(gen);
        if (re * re + im * im < 0.01) continue;
        out.emplace_back(re, im);
    }
    return out;
}

namespace detail {

template <class Real>
std::size_t near_vanishing_node(const SampledFunction<Real>& f) {
    Real max_abs{};
    for (std::size_t i = 0; i < f.size(); ++i) max_abs = std::max(max_abs, abs(f[i]));
    const Real floor = 100 * real_eps<Real>() * max_abs;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (abs(f[i]) <= floor) return i;
    return kNoNode;
}

}  // namespace detail

// New base solution U0 = u1 + c u2 at lambda_star (c = i first, then the
// deterministic retry constants until U0 is nonvanishing).  Series built from
// the result are power series in lambda - lambda_star.
template <class Real>
ParticularSolution<Real> shift_base(const FormalPowers<Real>& fp,
                                    const ParticularSolution<Real>& ps,
                                    const Coefficients<Real>& coef,
                                    const Cplx<Real>& lambda_star) {
    const SolutionPair<Real> sp = evaluate_solutions(fp, ps, lambda_star);
    std::vector<Cplx<Real>> mixes;
    mixes.push_back(Cplx<Real>{Real(0), Real(1)});
    for (auto [re, im] : retry_constants(8)) mixes.push_back(Cplx<Real>{Real(re), Real(im)});
    std::size_t bad_node = kNoNode;
    for (const Cplx<Real>& c : mixes) {
        SampledFunction<Real> U0(ps.u0.grid), dU0(ps.u0.grid);
        for (std::size_t i = 0; i < U0.size(); ++i) {
            U0[i] = sp.u1[i] + c * sp.u2[i];
            dU0[i] = sp.du1[i] + c * sp.du2[i];
        }
        bad_node = detail::near_vanishing_node(U0);
        if (bad_node == kNoNode)
            return make_particular_solution(std::move(U0), std::move(dU0), coef, lambda_star);
    }
    throw NonvanishingViolation("shifted base vanishes for every mixing constant", bad_node);
}

template <class Real>
struct IvpOptions {
    int N = 60;
    Real tolerance = Real(1) / 100000000;  // 1e-8
    Real chunk_target = Real(1);           // used by the base-solution builder
};

namespace detail {

// Largest c for which the truncated-series tail stays below tol.
template <class Real>
Real tail_cap(int N, const Real& tol) {
    auto tail_at = [&](const Real& c) {
        Real term(1);
        for (int k = 1; k <= N + 1; ++k) term *= c / Real(2 * k - 1) / Real(2 * k);
        Real sum = term;
        for (int k = N + 2; k < N + 1000; ++k) {
            term *= c / Real(2 * k - 1) / Real(2 * k);
            sum += term;
            if (term < real_eps<Real>() * sum) break;
        }
        return sum;
    };
    Real lo(0), hi(1);
    while (tail_at(hi) < tol && hi < Real(1e30)) hi *= 2;
    for (int it = 0; it < 60; ++it) {
        const Real mid = (lo + hi) / 2;
        (tail_at(mid) < tol ? lo : hi) = mid;
    }
    return lo;
}

// Split [first, last] into chunks with per-chunk series constant
//   c = |lambda - lambda0| * max|aux_rw| * max|aux_pinv| * len^2
// below cap.  Chunks keep at least 4 cells so the quartic rule applies; a
// minimal chunk that still breaches the cap is a hard accuracy failure.
// Returns node indices of chunk boundaries (ascending, first and last included).
template <class Real>
std::vector<std::size_t> chunk_boundaries(const ParticularSolution<Real>& ps,
                                          const Cplx<Real>& lambda, std::size_t first,
                                          std::size_t last, const Real& cap) {
    const auto& nodes = ps.u0.grid->nodes;
    const Real mag = abs(lambda - ps.lambda0);
    std::vector<std::size_t> cuts{first};
    std::size_t i = first;
    while (i < last) {
        Real max_rw = abs(ps.aux_rw[i]), max_pinv = abs(ps.aux_pinv[i]);
        std::size_t j = i;
        while (j < last) {
            const Real nrw = std::max(max_rw, abs(ps.aux_rw[j + 1]));
            const Real npv = std::max(max_pinv, abs(ps.aux_pinv[j + 1]));
            const Real len = nodes[j + 1] - nodes[i];
            if (j - i >= 4 && !(mag * nrw * npv * len * len <= cap)) break;
            max_rw = nrw;
            max_pinv = npv;
            ++j;
        }
        cuts.push_back(j);
        i = j;
    }
    // keep the final chunk long enough for the quartic rule
    std::size_t n = cuts.size();
    if (n >= 3 && cuts[n - 1] - cuts[n - 2] < 4) {
        if (cuts[n - 1] - cuts[n - 3] >= 8)
            cuts[n - 2] = cuts[n - 1] - 4;
        else
            cuts.erase(cuts.begin() + static_cast<std::ptrdiff_t>(n) - 2);
    }
    for (std::size_t ci = 0; ci + 1 < cuts.size(); ++ci) {
        Real max_rw{}, max_pinv{};
        for (std::size_t k = cuts[ci]; k <= cuts[ci + 1]; ++k) {
            max_rw = std::max(max_rw, abs(ps.aux_rw[k]));
            max_pinv = std::max(max_pinv, abs(ps.aux_pinv[k]));
        }
        const Real len = nodes[cuts[ci + 1]] - nodes[cuts[ci]];
        const Real c = mag * max_rw * max_pinv * len * len;
        if (!(c <= cap)) {
            std::ostringstream os;
            os << c;
            throw AccuracyError("series constant exceeds the cap on a minimal chunk", os.str());
        }
    }
    return cuts;
}

}  // namespace detail

// Initial-value solve: u(x0) = A, u'(x0) = B at the given spectral value.
// When the truncation tail on [a, b] exceeds the tolerance, the interval is
// subdivided and (u, u') chained analytically across chunk boundaries,
// outward from x0 in both directions.  Subdivision controls the series
// truncation only; the grid itself must still resolve the solution, so a
// spectral value whose local oscillation exceeds half a radian per cell is
// rejected rather than chained into garbage.
template <class Real>
std::pair<SampledFunction<Real>, SampledFunction<Real>> solve_ivp(
    const ParticularSolution<Real>& ps, const Coefficients<Real>& coef, const Cplx<Real>& lambda,
    std::size_t x0_index, const Cplx<Real>& A, const Cplx<Real>& B, const IvpOptions<Real>& opt) {
    const auto grid = ps.u0.grid;
    const std::size_t last = grid->nodes.size() - 1;
    if (x0_index > last) throw ContractViolation("initial node outside the grid");

    {
        using std::isfinite;
        using std::sqrt;
        Real reso{};
        for (std::size_t i = 0; i <= last; ++i) {
            const Real w = abs(ps.aux_rw[i]) * abs(ps.aux_pinv[i]);
            if (isfinite(w)) reso = std::max(reso, w);
        }
        Real hmax = grid->h;
        if (!grid->uniform)
            for (std::size_t i = 0; i < last; ++i)
                hmax = std::max(hmax, grid->nodes[i + 1] - grid->nodes[i]);
        const Real rad = sqrt(abs(lambda - ps.lambda0) * reso) * hmax;
        if (!(rad <= Real(1) / 2)) {
            std::ostringstream os;
            os << rad;
            throw AccuracyError("grid too coarse to resolve the requested spectral value"
                                " (radians per cell)",
                                os.str());
        }
    }

    SampledFunction<Real> u(grid), du(grid);
    const Real cap = detail::tail_cap(opt.N, opt.tolerance);

    auto run_chunk = [&](std::size_t i0, std::size_t i1, const Cplx<Real>& A0,
                         const Cplx<Real>& B0, std::size_t anchor_local) {
        auto sub = spps::subgrid(grid, i0, i1);
        Coefficients<Real> cref{slice(coef.p, sub, i0), slice(coef.q, sub, i0),
                                slice(coef.r, sub, i0)};
        ParticularSolution<Real> pslice =
            make_particular_solution(slice(ps.u0, sub, i0), slice(ps.du0, sub, i0), cref,
                                     ps.lambda0);
        FormalPowers<Real> fp = build_formal_powers(pslice, opt.N, anchor_local);
        SolutionPair<Real> sp = evaluate_solutions(fp, pslice, lambda);
        auto [c1, c2] = ivp_coefficients(pslice, cref.p[anchor_local], anchor_local, A0, B0);
        for (std::size_t j = 0; j <= i1 - i0; ++j) {
            u[i0 + j] = c1 * sp.u1[j] + c2 * sp.u2[j];
            du[i0 + j] = c1 * sp.du1[j] + c2 * sp.du2[j];
        }
    };

    // rightward from x0
    if (x0_index < last) {
        auto cuts = detail::chunk_boundaries(ps, lambda, x0_index, last, cap);
        Cplx<Real> A0 = A, B0 = B;
        for (std::size_t ci = 0; ci + 1 < cuts.size(); ++ci) {
            run_chunk(cuts[ci], cuts[ci + 1], A0, B0, 0);
            A0 = u[cuts[ci + 1]];
            B0 = du[cuts[ci + 1]];
        }
    }
    // leftward from x0 (anchor sits at the right end of each chunk)
    if (x0_index > 0) {
        auto cuts = detail::chunk_boundaries(ps, lambda, 0, x0_index, cap);
        Cplx<Real> A0 = A, B0 = B;
        for (std::size_t ci = cuts.size() - 1; ci > 0; --ci) {
            run_chunk(cuts[ci - 1], cuts[ci], A0, B0, cuts[ci] - cuts[ci - 1]);
            A0 = u[cuts[ci - 1]];
            B0 = du[cuts[ci - 1]];
        }
    }
    u[x0_index] = A;
    du[x0_index] = B;
    return {std::move(u), std::move(du)};
}

}  // namespace spps
