#pragma once

#include "expression.hpp"
#include "grid.hpp"

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spps {

// Boundary conditions:
//   Dirichlet          u(a) = u(b) = 0
//   Robin              cos(alpha)u(a) + sin(alpha)u'(a) = 0,  cos(beta)u(b) + sin(beta)u'(b) = 0
//   LambdaDependent    u(a) = 0,  beta1*u(b) - beta2*u'(b) = phi(lambda)*(beta1p*u(b) - beta2p*u'(b))
//   PeriodicSingular   2*pi-periodic matching across a singular weight (offset grid)
enum class BCKind { Dirichlet, Robin, LambdaDependent, PeriodicSingular };

struct BoundaryCondition {
    BCKind kind = BCKind::Dirichlet;
    Expr alpha, beta;                    // Robin endpoint angles, real in [0, pi)
    Expr beta1, beta2, beta1p, beta2p;   // lambda-dependent right-endpoint data
    std::vector<Expr> phi;               // phi(lambda) polynomial coefficients, constant first

    static BoundaryCondition dirichlet() { return {}; }

    static BoundaryCondition robin(const std::string& alpha_text, const std::string& beta_text) {
        BoundaryCondition bc;
        bc.kind = BCKind::Robin;
        bc.alpha = parse_expression(alpha_text);
        bc.beta = parse_expression(beta_text);
        return bc;
    }

    static BoundaryCondition lambda_dependent(const std::string& b1, const std::string& b2,
                                              const std::string& b1p, const std::string& b2p,
                                              const std::vector<std::string>& phi_coeffs) {
        BoundaryCondition bc;
        bc.kind = BCKind::LambdaDependent;
        bc.beta1 = parse_expression(b1);
        bc.beta2 = parse_expression(b2);
        bc.beta1p = parse_expression(b1p);
        bc.beta2p = parse_expression(b2p);
        for (const auto& c : phi_coeffs) bc.phi.push_back(parse_expression(c));
        return bc;
    }

    static BoundaryCondition periodic_singular() {
        BoundaryCondition bc;
        bc.kind = BCKind::PeriodicSingular;
        return bc;
    }
};

// Weight |tan(x/2)|^nu on [-pi, pi]: the integrating factor of the
// advection-diffusion operator, singular at 0 and +-pi.
struct SingularWeight {
    Expr nu;
};

struct SturmLiouvilleProblem {
    std::string name;
    Expr a, b;     // interval endpoints (real-valued expressions)
    Expr p, q, r;  // coefficients of (p u')' + q u = lambda r u
    BoundaryCondition boundary;
    std::optional<SingularWeight> weight;
    Expr u0, du0;               // optional analytic base solution of the lambda=0 equation
    bool left_singular = false; // left endpoint singular: admissible solutions follow u1
};

template <class Real>
std::pair<Real, Real> endpoints(const SturmLiouvilleProblem& prob) {
    if (!prob.a || !prob.b) throw ContractViolation("problem has no interval");
    const Real a = evaluate(prob.a, Real(0)).re;
    const Real b = evaluate(prob.b, Real(0)).re;
    if (!(a < b)) throw ContractViolation("interval endpoints must satisfy a < b");
    return {a, b};
}

template <class Real>
void validate(const SturmLiouvilleProblem& prob) {
    endpoints<Real>(prob);
    if (!prob.p || !prob.q || !prob.r) throw ContractViolation("problem must define p, q, r");
    const BoundaryCondition& bc = prob.boundary;
    if (bc.kind == BCKind::Robin) {
        const Real pi = real_pi<Real>();
        for (const Expr& angle : {bc.alpha, bc.beta}) {
            if (!angle) throw ContractViolation("Robin condition requires both angles");
            const Cplx<Real> v = evaluate(angle, Real(0));
            if (v.im != 0 || v.re < 0 || v.re >= pi)
                throw ContractViolation("Robin angles must be real in [0, pi)");
        }
    }
    if (bc.kind == BCKind::LambdaDependent &&
        (!bc.beta1 || !bc.beta2 || !bc.beta1p || !bc.beta2p))
        throw ContractViolation("lambda-dependent condition requires beta1, beta2, beta1p, beta2p");
    if (bc.kind == BCKind::PeriodicSingular && !prob.weight)
        throw ContractViolation("periodic-singular condition requires a singular weight");
    if (prob.left_singular && !prob.u0)
        throw ContractViolation("a singular left endpoint requires an explicit u0");
    if (prob.u0 && !prob.du0)
        throw ContractViolation("explicit u0 requires its derivative du0");
}

template <class Real>
struct Coefficients {
    SampledFunction<Real> p, q, r;
};

// Node-wise evaluation of p, q, r; singular nodes are reported with their index.
template <class Real>
Coefficients<Real> sample_coefficients(const SturmLiouvilleProblem& prob, GridPtr<Real> grid) {
    Coefficients<Real> out{SampledFunction<Real>(grid), SampledFunction<Real>(grid),
                           SampledFunction<Real>(grid)};
    struct Item {
        const Expr& e;
        SampledFunction<Real>& dst;
        const char* label;
    };
    const Item items[] = {{prob.p, out.p, "p"}, {prob.q, out.q, "q"}, {prob.r, out.r, "r"}};
    for (const Item& item : items) {
        for (std::size_t i = 0; i < grid->nodes.size(); ++i) {
            try {
                item.dst.values[i] = evaluate(item.e, grid->nodes[i]);
            } catch (const EvaluationSingularity& ex) {
                // q at a singular left endpoint never enters the recursion
                if (prob.left_singular && i == 0 && item.label[0] == 'q') {
                    item.dst.values[i] =
                        Cplx<Real>{std::numeric_limits<Real>::infinity(), Real(0)};
                    continue;
                }
                throw NonvanishingViolation(std::string("coefficient ") + item.label +
                                                " singular at node: " + ex.what(),
                                            i);
            }
        }
    }
    return out;
}

}  // namespace spps
