#pragma once

#include "formal_powers.hpp"
#include "problem.hpp"
#include "roots.hpp"
#include "solutions.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace spps {

// Truncated characteristic polynomial of a boundary problem: an eigenvalue
// approximation is lambda0 + z for each root z of sum coeffs[m] z^m.  The
// matching eigenfunction is eig_u1 * u1 + eig_u2 * u2 at that lambda.
// trust_radius bounds |z| for roots the truncation can vouch for; builders
// leave it infinite and the eigenvalue iteration tightens it.
template <class Real>
struct CharPoly {
    std::vector<Cplx<Real>> coeffs;
    Cplx<Real> lambda0;
    Real trust_radius = std::numeric_limits<Real>::infinity();
    Cplx<Real> eig_u1, eig_u2;
};

namespace detail {

template <class Real>
void check_left_anchor(const FormalPowers<Real>& fp) {
    if (fp.x0_index != 0)
        throw ContractViolation("boundary polynomial requires powers anchored at the left endpoint");
}

template <class Real>
std::vector<Cplx<Real>> poly_sub(std::vector<Cplx<Real>> a, const std::vector<Cplx<Real>>& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t m = 0; m < b.size(); ++m) a[m] -= b[m];
    return a;
}

}  // namespace detail

// Dirichlet condition at both endpoints: kappa(lambda) = u2(b), or u1(b) when
// the admissible family is u1 (singular left endpoint).
template <class Real>
CharPoly<Real> characteristic_dirichlet(const FormalPowers<Real>& fp,
                                        const ParticularSolution<Real>& ps,
                                        bool via_u1 = false) {
    detail::check_left_anchor(fp);
    const std::size_t b = ps.u0.size() - 1;
    CharPoly<Real> cp;
    cp.lambda0 = ps.lambda0;
    cp.eig_u1 = via_u1 ? Cplx<Real>(Real(1)) : Cplx<Real>{};
    cp.eig_u2 = via_u1 ? Cplx<Real>{} : Cplx<Real>(Real(1));
    cp.coeffs.resize(fp.N + 1);
    for (int m = 0; m <= fp.N; ++m)
        cp.coeffs[m] = ps.u0[b] * (via_u1 ? fp.Xt[2 * m][b] : fp.X[2 * m + 1][b]);
    return cp;
}

// Robin conditions cos(alpha)u(a) + sin(alpha)u'(a) = 0 and the same with
// beta at b.  alpha = 0 keeps the pure-u2 family; otherwise the eigenfunction
// is u1 + gamma u2 with gamma fixed by the left condition.
template <class Real>
CharPoly<Real> characteristic_robin(const FormalPowers<Real>& fp,
                                    const ParticularSolution<Real>& ps,
                                    const Coefficients<Real>& coef, const Real& alpha,
                                    const Real& beta) {
    using std::cos;
    using std::sin;
    detail::check_left_anchor(fp);
    const std::size_t b = ps.u0.size() - 1;
    const Cplx<Real> B = ps.u0[b] * cos(beta) + ps.du0[b] * sin(beta);
    const Cplx<Real> s = sin(beta) * ps.aux_pinv1[b];
    CharPoly<Real> cp;
    cp.lambda0 = ps.lambda0;
    cp.coeffs.resize(fp.N + 1);
    if (alpha == Real(0)) {
        cp.eig_u1 = Cplx<Real>{};
        cp.eig_u2 = Cplx<Real>(Real(1));
        for (int m = 0; m <= fp.N; ++m)
            cp.coeffs[m] = B * fp.X[2 * m + 1][b] + s * fp.X[2 * m][b];
        return cp;
    }
    const Cplx<Real> cot{cos(alpha) / sin(alpha)};
    const Cplx<Real> gamma =
        -ps.u0[0] * coef.p[0] * (ps.u0[0] * cot + ps.du0[0]);
    cp.eig_u1 = Cplx<Real>(Real(1));
    cp.eig_u2 = gamma;
    cp.coeffs[0] = B * (Cplx<Real>(Real(1)) + gamma * fp.X[1][b]) + gamma * s;
    for (int m = 1; m <= fp.N; ++m)
        cp.coeffs[m] = B * (fp.Xt[2 * m][b] + gamma * fp.X[2 * m + 1][b]) +
                       s * (fp.Xt[2 * m - 1][b] + gamma * fp.X[2 * m][b]);
    return cp;
}

// u(a) = 0 with the lambda-dependent right condition
//   beta1 u(b) - beta2 u'(b) = phi(lambda) (beta1p u(b) - beta2p u'(b)).
// kappa = (u0(b) phi1 - u0'(b) phi2) S2 - phi2 S2d / (u0(b) p(b)) with
// phi_i(lambda) = beta_i - beta_i' phi(lambda); the phi polynomial is
// re-expanded around lambda0 so the product stays a polynomial in z.
template <class Real>
CharPoly<Real> characteristic_lambda_dependent(const FormalPowers<Real>& fp,
                                               const ParticularSolution<Real>& ps,
                                               const BoundaryCondition& bc) {
    detail::check_left_anchor(fp);
    if (bc.kind != BCKind::LambdaDependent)
        throw ContractViolation("boundary condition is not lambda-dependent");
    const std::size_t b = ps.u0.size() - 1;
    const Real x{};
    const Cplx<Real> beta1 = evaluate<Real>(bc.beta1, x), beta2 = evaluate<Real>(bc.beta2, x);
    const Cplx<Real> beta1p = evaluate<Real>(bc.beta1p, x), beta2p = evaluate<Real>(bc.beta2p, x);
    std::vector<Cplx<Real>> phi;
    for (const Expr& c : bc.phi) phi.push_back(evaluate<Real>(c, x));
    phi = taylor_shift(std::move(phi), ps.lambda0);

    std::vector<Cplx<Real>> phi1{beta1}, phi2{beta2};
    phi1.resize(std::max<std::size_t>(1, phi.size()));
    phi2.resize(phi1.size());
    for (std::size_t m = 0; m < phi.size(); ++m) {
        phi1[m] -= beta1p * phi[m];
        phi2[m] -= beta2p * phi[m];
    }

    std::vector<Cplx<Real>> head(phi1.size()), tail(phi2.size());
    for (std::size_t m = 0; m < phi1.size(); ++m)
        head[m] = ps.u0[b] * phi1[m] - ps.du0[b] * phi2[m];
    for (std::size_t m = 0; m < phi2.size(); ++m) tail[m] = phi2[m] * ps.aux_pinv1[b];

    std::vector<Cplx<Real>> s_odd(fp.N + 1), s_even(fp.N + 1);
    for (int k = 0; k <= fp.N; ++k) {
        s_odd[k] = fp.X[2 * k + 1][b];
        s_even[k] = fp.X[2 * k][b];
    }
    CharPoly<Real> cp;
    cp.lambda0 = ps.lambda0;
    cp.eig_u1 = Cplx<Real>{};
    cp.eig_u2 = Cplx<Real>(Real(1));
    cp.coeffs = detail::poly_sub(poly_mul(head, s_odd), poly_mul(tail, s_even));
    return cp;
}

}  // namespace spps
