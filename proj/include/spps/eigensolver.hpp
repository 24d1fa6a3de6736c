#pragma once

#include "char_poly.hpp"
#include "singular.hpp"
#include "solutions.hpp"
#include "u0_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace spps {

// A root of the characteristic polynomial with its validation diagnostics.
// movement is the displacement of the root when the last nonzero coefficient
// is dropped (one truncation order lower): roots the truncation cannot pin
// down move far and are not trusted.
template <class Real>
struct TrustedRoot {
    Cplx<Real> z;       // root in the series variable, lambda - lambda0
    Cplx<Real> lambda;
    Real residual{};    // |kappa_N(z)|
    Real movement = std::numeric_limits<Real>::infinity();
    Real tol_estimate = std::numeric_limits<Real>::infinity();
    bool converged = false;
    bool validated = false;  // movement/conditioning checks passed
    bool trusted = false;    // validated and converged
};

// Every root of cp.coeffs annotated with movement validation; sets
// cp.trust_radius to the largest trusted |z| (zero when nothing validates).
template <class Real>
std::vector<TrustedRoot<Real>> validated_roots(CharPoly<Real>& cp) {
    using std::isfinite;
    const RootSet<Real> full = aberth_roots(cp.coeffs);

    std::vector<Real> mags(cp.coeffs.size());
    for (std::size_t m = 0; m < mags.size(); ++m) mags[m] = abs(cp.coeffs[m]);
    std::size_t last = 0;
    for (std::size_t m = 0; m < mags.size(); ++m)
        if (mags[m] > 0) last = m;
    std::vector<Cplx<Real>> dropped_roots;
    if (last >= 2) {
        std::vector<Cplx<Real>> head(cp.coeffs.begin(),
                                     cp.coeffs.begin() + static_cast<std::ptrdiff_t>(last));
        dropped_roots = aberth_roots(head).roots;
    }

    std::vector<TrustedRoot<Real>> out(full.roots.size());
    const Real eta = Real(1) / 1000;
    const Real tail_cap = Real(1) / 100;
    Real trust{};
    for (std::size_t i = 0; i < full.roots.size(); ++i) {
        TrustedRoot<Real>& tr = out[i];
        tr.z = full.roots[i];
        tr.lambda = cp.lambda0 + tr.z;
        tr.converged = full.converged[i];
        const PolyEval<Real> pe = poly_eval_noise(cp.coeffs, tr.z);
        tr.residual = abs(pe.value);
        for (const Cplx<Real>& d : dropped_roots)
            tr.movement = std::min(tr.movement, abs(tr.z - d));
        const Cplx<Real> dz = poly_dval(cp.coeffs, tr.z);
        if (isfinite(tr.movement) && dz != Cplx<Real>{})
            tr.tol_estimate = tr.movement + pe.noise / abs(dz);
        // The polynomial only represents the series where its final term has
        // gone negligible; roots balanced against that term are ring
        // artifacts of the truncation, not eigenvalue estimates.
        const Real az = abs(tr.z);
        Real max_term{}, last_term{}, zpow(1);
        for (std::size_t m = 0; m < mags.size(); ++m) {
            const Real term = mags[m] * zpow;
            max_term = std::max(max_term, term);
            if (m == last) last_term = term;
            zpow *= az;
        }
        const Real bound = eta * (1 + az);
        tr.validated = last_term <= tail_cap * max_term && tr.movement <= bound &&
                       tr.tol_estimate <= bound;
        tr.trusted = tr.validated && tr.converged;
        if (tr.trusted) trust = std::max(trust, az);
    }
    cp.trust_radius = std::min(cp.trust_radius, trust);
    for (TrustedRoot<Real>& tr : out)
        if (abs(tr.z) > cp.trust_radius) tr.validated = tr.trusted = false;
    return out;
}

// Spec'd root interface: movement-validated roots inside the trust radius,
// sorted by real part, each annotated with its |kappa_N| residual.  A root
// that validates but failed to converge raises RootFindingError carrying the
// converged ones.
template <class Real>
std::vector<TrustedRoot<Real>> find_roots(CharPoly<Real>& cp, const Real& tolerance) {
    std::vector<TrustedRoot<Real>> all = validated_roots(cp);
    std::vector<TrustedRoot<Real>> kept;
    std::vector<std::pair<double, double>> partial;
    bool stuck = false;
    for (const TrustedRoot<Real>& tr : all) {
        if (!tr.validated) continue;
        if (!tr.converged) {
            stuck = true;
            continue;
        }
        Real scale{};
        Real zpow(1);
        for (const Cplx<Real>& c : cp.coeffs) {
            scale = std::max(scale, abs(c) * zpow);
            zpow *= abs(tr.z);
        }
        if (tr.residual <= tolerance * scale) kept.push_back(tr);
    }
    if (stuck) {
        for (const TrustedRoot<Real>& tr : kept)
            partial.emplace_back(static_cast<double>(tr.lambda.re),
                                 static_cast<double>(tr.lambda.im));
        throw RootFindingError("iteration left a validated root unconverged after 500 sweeps",
                               std::move(partial));
    }
    return kept;
}

// One accepted eigenvalue with its eigenfunction and diagnostics.
template <class Real>
struct Eigenpair {
    Cplx<Real> lambda;
    SampledFunction<Real> u, du;
    Real delta1{};       // |lambda| times the dropped next series term at b
    Real delta2{};       // boundary-condition residual recomputed from u, du
    Real tail = std::numeric_limits<Real>::infinity();  // series tail bound
    Real tol_estimate = std::numeric_limits<Real>::infinity();
    std::size_t index_hint = 0;  // position in the final real-part ordering
    int shift_round = 0;         // 0 = unshifted expansion
    bool trusted = true;
};

enum class ShiftMode { Auto, None, Explicit };

template <class Real>
struct EigenOptions {
    std::size_t grid_size = 2000;  // cells (uniform) or nodes (offset grid)
    int powers = 60;
    std::size_t count = 5;
    ShiftMode shift = ShiftMode::Auto;
    Cplx<Real> shift_value{};
    Real tolerance = Real(1e-8);
    int max_rounds = 12;
};

namespace detail {

// u = w1 u1 + w2 u2 and its derivative, assembled node by node from the
// powers (same Horner sums as evaluate_solutions, restricted to the needed
// combination; exact-zero sums annihilate infinite auxiliaries).
template <class Real>
std::pair<SampledFunction<Real>, SampledFunction<Real>> combined_solution(
    const FormalPowers<Real>& fp, const ParticularSolution<Real>& ps, const Cplx<Real>& lambda,
    const Cplx<Real>& w1, const Cplx<Real>& w2) {
    const Cplx<Real> L = lambda - ps.lambda0;
    const Cplx<Real> zero{};
    const bool use1 = w1 != zero, use2 = w2 != zero;
    SampledFunction<Real> u(ps.u0.grid), du(ps.u0.grid);
    for (std::size_t j = 0; j < ps.u0.size(); ++j) {
        Cplx<Real> s1{}, s1d{}, s2{}, s2d{};
        for (int k = fp.N; k >= 0; --k) {
            if (use1) {
                s1 = s1 * L + fp.Xt[2 * k][j];
                if (k >= 1) s1d = s1d * L + fp.Xt[2 * k - 1][j];
            }
            if (use2) {
                s2 = s2 * L + fp.X[2 * k + 1][j];
                s2d = s2d * L + fp.X[2 * k][j];
            }
        }
        s1d = s1d * L;
        const Cplx<Real> S = w1 * s1 + w2 * s2;
        const Cplx<Real> Sd = w1 * s1d + w2 * s2d;
        u[j] = ps.u0[j] * S;
        du[j] = ps.du0[j] * S + (Sd == zero ? zero : ps.aux_pinv1[j] * Sd);
    }
    return {std::move(u), std::move(du)};
}

// Scale to max-abs 1 with the first nonzero value rotated positive-real.
template <class Real>
Real normalize_pair(SampledFunction<Real>& u, SampledFunction<Real>& du) {
    Real m{};
    for (std::size_t j = 0; j < u.size(); ++j) m = std::max(m, abs(u[j]));
    if (m == 0) throw ContractViolation("eigenfunction is identically zero");
    Cplx<Real> phase{Real(1), Real(0)};
    for (std::size_t j = 0; j < u.size(); ++j) {
        const Real a = abs(u[j]);
        if (a > 0) {
            phase = u[j] / a;
            break;
        }
    }
    const Cplx<Real> scale = Cplx<Real>(Real(1)) / (phase * m);
    for (std::size_t j = 0; j < u.size(); ++j) {
        u[j] = u[j] * scale;
        du[j] = du[j] * scale;
    }
    return m;
}

template <class Real>
Real boundary_residual(const SturmLiouvilleProblem& prob, const Cplx<Real>& lambda,
                       const Cplx<Real>& ub, const Cplx<Real>& dub) {
    using std::cos;
    using std::sin;
    const BoundaryCondition& bc = prob.boundary;
    switch (bc.kind) {
        case BCKind::Dirichlet:
            return abs(ub);
        case BCKind::Robin: {
            const Real beta = evaluate<Real>(bc.beta, Real(0)).re;
            return abs(ub * cos(beta) + dub * sin(beta));
        }
        case BCKind::LambdaDependent: {
            const Real x{};
            Cplx<Real> phi{};
            for (std::size_t k = bc.phi.size(); k-- > 0;)
                phi = phi * lambda + evaluate<Real>(bc.phi[k], x);
            const Cplx<Real> phi1 = evaluate<Real>(bc.beta1, x) - evaluate<Real>(bc.beta1p, x) * phi;
            const Cplx<Real> phi2 = evaluate<Real>(bc.beta2, x) - evaluate<Real>(bc.beta2p, x) * phi;
            return abs(phi1 * ub - phi2 * dub);
        }
        case BCKind::PeriodicSingular:
            break;
    }
    throw ContractViolation("boundary residual undefined for this condition");
}

template <class Real>
Eigenpair<Real> finalize_pair(const SturmLiouvilleProblem& prob,
                              const ParticularSolution<Real>& ps, const FormalPowers<Real>& fp,
                              const CharPoly<Real>& cp, const TrustedRoot<Real>& root,
                              int round) {
    using std::pow;
    Eigenpair<Real> pair;
    pair.lambda = root.lambda;
    pair.tol_estimate = root.tol_estimate;
    pair.shift_round = round;
    pair.trusted = root.trusted;
    auto [u, du] = combined_solution(fp, ps, root.lambda, cp.eig_u1, cp.eig_u2);
    pair.u = std::move(u);
    pair.du = std::move(du);
    const Real m = normalize_pair(pair.u, pair.du);

    const std::size_t b = ps.u0.size() - 1;
    const Cplx<Real> zero{};
    Cplx<Real> top{};
    if (cp.eig_u1 != zero) top += cp.eig_u1 * ps.u0[b] * fp.Xt[2 * fp.N][b];
    if (cp.eig_u2 != zero) top += cp.eig_u2 * ps.u0[b] * fp.X[2 * fp.N + 1][b];
    pair.delta1 = abs(root.lambda) * pow(abs(root.z), fp.N) * abs(top) / m;
    pair.delta2 = boundary_residual(prob, root.lambda, pair.u[b], pair.du[b]);

    const TailBound<Real> tb = tail_bound(ps, root.lambda, fp.N);
    if (tb.available) {
        using std::isfinite;
        const Real t = (abs(cp.eig_u1) * tb.boundU1 + abs(cp.eig_u2) * tb.boundU2) / m;
        // An overflowed bound says nothing; keep the "no bound" marker.
        if (isfinite(t)) pair.tail = t;
    }
    return pair;
}

template <class Real>
CharPoly<Real> boundary_char_poly(const FormalPowers<Real>& fp,
                                  const ParticularSolution<Real>& ps,
                                  const Coefficients<Real>& coef,
                                  const SturmLiouvilleProblem& prob) {
    const BoundaryCondition& bc = prob.boundary;
    if (prob.left_singular && bc.kind != BCKind::Dirichlet)
        throw ContractViolation("a singular left endpoint supports Dirichlet conditions only");
    switch (bc.kind) {
        case BCKind::Dirichlet:
            return characteristic_dirichlet(fp, ps, prob.left_singular);
        case BCKind::Robin: {
            const Real alpha = evaluate<Real>(bc.alpha, Real(0)).re;
            const Real beta = evaluate<Real>(bc.beta, Real(0)).re;
            return characteristic_robin(fp, ps, coef, alpha, beta);
        }
        case BCKind::LambdaDependent:
            return characteristic_lambda_dependent(fp, ps, bc);
        case BCKind::PeriodicSingular:
            break;
    }
    throw ContractViolation("unsupported boundary condition for the regular path");
}

template <class Real>
std::vector<Eigenpair<Real>> eigen_singular(const SturmLiouvilleProblem& prob,
                                            const EigenOptions<Real>& opt) {
    using std::abs;
    const auto [a, b] = endpoints<Real>(prob);
    const Real pi = real_pi<Real>();
    if (!(abs(a + pi) <= 16 * real_eps<Real>() * pi && abs(b - pi) <= 16 * real_eps<Real>() * pi))
        throw ContractViolation("periodic-singular problems live on [-pi, pi]");
    const Cplx<Real> nu_c = evaluate<Real>(prob.weight->nu, Real(0));
    if (nu_c.im != 0 || !(nu_c.re > 0))
        throw ContractViolation("weight exponent must be a positive real number");
    GridPtr<Real> grid = make_offset_grid(-pi, pi, opt.grid_size);
    const SingularPowers<Real> sp = build_singular_powers(grid, nu_c.re, opt.powers);
    CharPoly<Real> cp = characteristic_periodic_singular(sp);
    std::vector<TrustedRoot<Real>> all = validated_roots(cp);

    const Real tiny = Real(1) / 100000000;
    const Real imag_cap = Real(1) / 1000;
    std::vector<TrustedRoot<Real>> keep, extra;
    for (const TrustedRoot<Real>& tr : all) {
        if (!(tr.lambda.re > tiny) || !(abs(tr.lambda.im) < imag_cap * (1 + abs(tr.lambda))))
            continue;
        if (tr.trusted)
            keep.push_back(tr);
        else if (tr.converged)
            extra.push_back(tr);
    }
    Real top_re = -std::numeric_limits<Real>::infinity();
    for (const TrustedRoot<Real>& tr : keep) top_re = std::max(top_re, tr.lambda.re);
    for (const TrustedRoot<Real>& tr : extra)
        if (keep.size() < opt.count && tr.lambda.re > top_re) keep.push_back(tr);
    if (keep.empty())
        throw StagnationError("no trusted eigenvalues; increase the power count or the grid");

    std::vector<Eigenpair<Real>> out;
    for (const TrustedRoot<Real>& tr : keep) {
        if (out.size() >= opt.count) break;
        Eigenpair<Real> pair;
        pair.lambda = tr.lambda;
        pair.tol_estimate = tr.tol_estimate;
        pair.trusted = tr.trusted;
        auto [u, du] = singular_solution(sp, tr.lambda);
        const Cplx<Real> origin = u[sp.ci + 1];
        if (origin == Cplx<Real>{})
            throw ContractViolation("eigenfunction vanishes at the node nearest zero");
        for (std::size_t j = 0; j < u.size(); ++j) {
            u[j] = u[j] / origin;
            du[j] = du[j] / origin;
        }
        pair.delta1 = delta1_singular(sp, tr.lambda);
        // A truncation estimate past unity means the series carries no
        // information at this spectral value; keep the row but flag it.
        if (pair.delta1 > 1) pair.trusted = false;
        // The grid is offset from the endpoints, so u(pi) - u(-pi) is
        // evaluated in the limit form: the Zw/weight terms vanish at the
        // poles, leaving the characteristic series itself.
        pair.delta2 = abs(poly_eval(cp.coeffs, tr.lambda)) / abs(origin);
        pair.u = std::move(u);
        pair.du = std::move(du);
        out.push_back(std::move(pair));
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index_hint = i;
    return out;
}

}  // namespace detail

// Shared entry plumbing: sample the problem on a uniform grid and build the
// base solution, from the analytic u0 when the problem carries one and from
// the regular builder otherwise.
template <class Real>
struct PreparedProblem {
    GridPtr<Real> grid;
    Coefficients<Real> coef;
    ParticularSolution<Real> ps;
};

template <class Real>
PreparedProblem<Real> prepare_problem(const SturmLiouvilleProblem& prob, std::size_t grid_size) {
    validate<Real>(prob);
    const auto [a, b] = endpoints<Real>(prob);
    GridPtr<Real> grid = make_uniform_grid(a, b, grid_size);
    Coefficients<Real> coef = sample_coefficients(prob, grid);
    ParticularSolution<Real> ps;
    if (prob.u0) {
        SampledFunction<Real> u0(grid), du0(grid);
        for (std::size_t j = 0; j < grid->size(); ++j) {
            u0[j] = evaluate<Real>(prob.u0, grid->nodes[j]);
            du0[j] = evaluate<Real>(prob.du0, grid->nodes[j]);
        }
        ps = make_particular_solution(std::move(u0), std::move(du0), coef, Cplx<Real>{},
                                      prob.left_singular ? 0 : kNoNode);
    } else {
        ps = build_u0_regular(coef);
    }
    return {std::move(grid), std::move(coef), std::move(ps)};
}

// Full spectral pass: build the base solution and the powers, harvest the
// movement-validated roots, and (in Auto mode) keep shifting the expansion
// center to the largest trusted eigenvalue until `count` eigenvalues are
// held.  Explicit mode performs exactly one shift to shift_value; None stays
// at lambda0 = 0.  Problems whose left endpoint is singular are solved in a
// single unshifted round (the shifted base would inherit the endpoint zero).
template <class Real>
std::vector<Eigenpair<Real>> eigen_iterate(const SturmLiouvilleProblem& prob,
                                           const EigenOptions<Real>& opt) {
    using std::abs;
    if (opt.count < 1) throw ContractViolation("eigenvalue count must be at least 1");
    if (prob.boundary.kind == BCKind::PeriodicSingular) {
        validate<Real>(prob);
        return detail::eigen_singular(prob, opt);
    }

    PreparedProblem<Real> prep = prepare_problem<Real>(prob, opt.grid_size);
    const GridPtr<Real> grid = prep.grid;
    const Coefficients<Real>& coef = prep.coef;
    ParticularSolution<Real>& ps = prep.ps;

    const bool single_round = prob.left_singular || opt.shift == ShiftMode::None;
    const int rounds_allowed = single_round ? 1 : (opt.shift == ShiftMode::Explicit ? 2 : opt.max_rounds);

    std::vector<Eigenpair<Real>> pool;
    std::vector<Real> pool_dist;  // |lambda - anchor| of the held estimate
    std::vector<TrustedRoot<Real>> last_extra;
    Cplx<Real> prev_shift{};
    const Real window_scale = Real(1) / 1000;

    FormalPowers<Real> fp;
    CharPoly<Real> cp;
    for (int round = 0; round < rounds_allowed; ++round) {
        fp = build_formal_powers(ps, opt.powers, 0);
        cp = detail::boundary_char_poly(fp, ps, coef, prob);
        std::vector<TrustedRoot<Real>> all = validated_roots(cp);
        std::vector<TrustedRoot<Real>> roots;
        last_extra.clear();
        for (const TrustedRoot<Real>& tr : all) {
            if (tr.trusted)
                roots.push_back(tr);
            else if (tr.converged)
                last_extra.push_back(tr);
        }
        if (roots.empty())
            throw StagnationError("round " + std::to_string(round) +
                                  " produced no trusted roots; increase the power count or refine the grid");

        // One-to-one nearest matching against the pool; winners get their
        // eigenfunctions built, losers are dropped without the expense.
        struct Cand {
            Real dist;
            std::size_t pool_idx, root_idx;
        };
        std::vector<Cand> cands;
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = 0; j < roots.size(); ++j) {
                const Real d = abs(pool[i].lambda - roots[j].lambda);
                if (d <= window_scale * (1 + abs(roots[j].lambda))) cands.push_back({d, i, j});
            }
        std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
            return x.dist < y.dist;
        });
        std::vector<bool> pool_used(pool.size(), false), root_used(roots.size(), false);
        std::vector<std::ptrdiff_t> match(roots.size(), -1);
        for (const Cand& cnd : cands) {
            if (pool_used[cnd.pool_idx] || root_used[cnd.root_idx]) continue;
            pool_used[cnd.pool_idx] = true;
            root_used[cnd.root_idx] = true;
            match[cnd.root_idx] = static_cast<std::ptrdiff_t>(cnd.pool_idx);
        }
        for (std::size_t j = 0; j < roots.size(); ++j) {
            const Real dist = abs(roots[j].z);
            if (match[j] >= 0) {
                // Trusted beats untrusted; between equals the estimate whose
                // expansion center is nearer wins.
                Eigenpair<Real>& held = pool[static_cast<std::size_t>(match[j])];
                Real& held_dist = pool_dist[static_cast<std::size_t>(match[j])];
                const bool replace = (roots[j].trusted && !held.trusted) ||
                                     (roots[j].trusted == held.trusted && dist < held_dist);
                if (replace) {
                    held = detail::finalize_pair(prob, ps, fp, cp, roots[j], round);
                    held_dist = dist;
                }
            } else {
                // A truncated series can split one eigenvalue into a tight
                // burst of near-identical roots; copies within the resolution
                // of an entry already held add nothing and are dropped.
                bool duplicate = false;
                for (std::size_t i = 0; i < pool.size() && !duplicate; ++i) {
                    const Real res = 100 * std::max(roots[j].tol_estimate, pool[i].tol_estimate);
                    const Real gap = abs(pool[i].lambda - roots[j].lambda);
                    duplicate = gap <= std::min(res, window_scale * (1 + abs(roots[j].lambda)));
                }
                if (duplicate) continue;
                pool.push_back(detail::finalize_pair(prob, ps, fp, cp, roots[j], round));
                pool_dist.push_back(dist);
            }
        }

        std::size_t trusted_count = 0;
        for (const Eigenpair<Real>& e : pool) trusted_count += e.trusted ? 1 : 0;
        // An explicitly requested shift always runs, even when the unshifted
        // round already met the count: the caller wants accuracy near it.
        const bool shift_pending = opt.shift == ShiftMode::Explicit && round == 0;
        if ((trusted_count >= opt.count && !shift_pending) || round + 1 >= rounds_allowed) break;

        Cplx<Real> target{};
        if (opt.shift == ShiftMode::Explicit) {
            target = opt.shift_value;
        } else {
            bool have = false;
            for (const Eigenpair<Real>& e : pool)
                if (e.trusted && (!have || e.lambda.re > target.re)) {
                    target = e.lambda;
                    have = true;
                }
        }
        if (round > 0 && abs(target - prev_shift) <= window_scale * (1 + abs(target)))
            throw StagnationError("shift target stopped advancing at " +
                                  std::to_string(static_cast<double>(target.re)) +
                                  "; increase the power count or refine the grid");
        prev_shift = target;
        ps = shift_base(fp, ps, coef, target);
    }

    // Top up a deliberate single-round run with converged-but-untrusted roots
    // strictly above the trusted range, flagged for the caller.
    std::size_t usable = 0;
    for (const Eigenpair<Real>& e : pool) usable += e.trusted ? 1 : 0;
    if (usable < opt.count && single_round) {
        Real top_re = -std::numeric_limits<Real>::infinity();
        for (const Eigenpair<Real>& e : pool)
            if (e.trusted) top_re = std::max(top_re, e.lambda.re);
        std::sort(last_extra.begin(), last_extra.end(),
                  [](const TrustedRoot<Real>& x, const TrustedRoot<Real>& y) {
                      return x.lambda.re < y.lambda.re;
                  });
        for (const TrustedRoot<Real>& tr : last_extra) {
            if (pool.size() >= opt.count) break;
            if (!(tr.lambda.re > top_re)) continue;
            if (!(abs(tr.lambda.im) < (1 + abs(tr.lambda)) / 1000)) continue;
            pool.push_back(detail::finalize_pair(prob, ps, fp, cp, tr, 0));
            pool_dist.push_back(abs(tr.z));
        }
    }

    std::sort(pool.begin(), pool.end(), [](const Eigenpair<Real>& x, const Eigenpair<Real>& y) {
        return x.lambda.re != y.lambda.re ? x.lambda.re < y.lambda.re : x.lambda.im < y.lambda.im;
    });
    if (pool.size() > opt.count) pool.resize(opt.count);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i].index_hint = i;
    return pool;
}

}  // namespace spps
