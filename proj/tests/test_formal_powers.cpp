#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "spps/formal_powers.hpp"
#include "spps/precision.hpp"
#include "spps/problem.hpp"
#include "spps/solutions.hpp"

using spps::Cplx;
using spps::mpreal;

namespace {

// -u'' = lambda u on [0, pi]: p = -1, q = 0, r = 1, u0 = 1.
template <class Real>
spps::ParticularSolution<Real> constant_base(std::size_t M, spps::Coefficients<Real>& coef_out) {
    spps::SturmLiouvilleProblem prob;
    prob.name = "constant";
    prob.a = spps::parse_expression("0");
    prob.b = spps::parse_expression("pi");
    prob.p = spps::parse_expression("-1");
    prob.q = spps::parse_expression("0");
    prob.r = spps::parse_expression("1");
    auto grid = spps::make_uniform_grid<Real>(Real(0), spps::real_pi<Real>(), M);
    coef_out = spps::sample_coefficients(prob, grid);
    spps::SampledFunction<Real> u0(grid), du0(grid);
    for (auto& v : u0.values) v = Cplx<Real>{Real(1)};
    return spps::make_particular_solution(std::move(u0), std::move(du0), coef_out, Cplx<Real>{});
}

}  // namespace

TEST_CASE("formal powers of the constant problem match the monomial closed form") {
    spps::PrecisionScope scope(34);
    spps::Coefficients<mpreal> coef;
    const auto ps = constant_base<mpreal>(64, coef);
    const auto& nodes = ps.u0.grid->nodes;

    for (std::size_t anchor : {std::size_t(0), std::size_t(32)}) {
        const int N = 4;
        const auto fp = spps::build_formal_powers(ps, N, anchor);
        REQUIRE(fp.Xt.size() == std::size_t(2 * N + 1));
        REQUIRE(fp.X.size() == std::size_t(2 * N + 2));
        const mpreal x0 = nodes[anchor];
        for (int n = 0; n <= 2 * N + 1; ++n) {
            mpreal fact(1);
            for (int k = 2; k <= n; ++k) fact *= k;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                using std::pow;
                const mpreal mono = n == 0 ? mpreal(1) : mpreal(pow(nodes[j] - x0, n)) / fact;
                const mpreal xt_exact = ((n / 2) % 2 ? -1 : 1) * mono;
                const mpreal x_exact = (((n + 1) / 2) % 2 ? -1 : 1) * mono;
                // quartic cells are exact through degree 4; above that the
                // h^4 quadrature error enters
                const mpreal tol =
                    n <= 5 ? mpreal("1e-30") * (1 + abs(xt_exact)) : mpreal("1e-6") * (1 + abs(xt_exact));
                if (n <= 2 * N) {
                    REQUIRE(abs(fp.Xt[n][j].re - xt_exact) <= tol);
                    REQUIRE(fp.Xt[n][j].im == 0);
                }
                REQUIRE(abs(fp.X[n][j].re - x_exact) <= tol);
            }
        }
    }
}

TEST_CASE("all powers above order zero vanish exactly at the anchor") {
    spps::PrecisionScope scope(34);
    spps::Coefficients<mpreal> coef;
    const auto ps = constant_base<mpreal>(40, coef);
    for (std::size_t anchor : {std::size_t(0), std::size_t(17), std::size_t(40)}) {
        const auto fp = spps::build_formal_powers(ps, 3, anchor);
        for (std::size_t n = 1; n < fp.Xt.size(); ++n) {
            REQUIRE(fp.Xt[n][anchor] == Cplx<mpreal>{});
        }
        for (std::size_t n = 1; n < fp.X.size(); ++n) {
            REQUIRE(fp.X[n][anchor] == Cplx<mpreal>{});
        }
    }
}

TEST_CASE("an exact zero annihilates an infinite weight") {
    auto g = spps::make_uniform_grid<double>(0.0, 1.0, 8);
    spps::SampledFunction<double> f(g), w(g);
    for (std::size_t j = 0; j < g->size(); ++j) {
        f[j] = Cplx<double>{1.0};
        w[j] = Cplx<double>{2.0};
    }
    f[3] = Cplx<double>{};
    w[3] = Cplx<double>{std::numeric_limits<double>::infinity()};
    const auto prod = spps::annihilating_product(f, w);
    REQUIRE(prod[3] == Cplx<double>{});
    REQUIRE(prod[2].re == 2.0);
}

TEST_CASE("power count and anchor are validated") {
    spps::Coefficients<double> coef;
    const auto ps = constant_base<double>(16, coef);
    REQUIRE_THROWS_AS(spps::build_formal_powers(ps, 0, 0), spps::ContractViolation);
    REQUIRE_THROWS_AS(spps::build_formal_powers(ps, 2, 99), spps::ContractViolation);
}

TEMPLATE_TEST_CASE("truncation tail bound is sound and shrinks with the order", "", double,
                   mpreal) {
    using Real = TestType;
    spps::PrecisionScope scope(34);
    spps::Coefficients<Real> coef;
    const auto ps = constant_base<Real>(2000, coef);
    const auto& nodes = ps.u0.grid->nodes;
    const Cplx<Real> lambda{Real(4)};

    Real prev = std::numeric_limits<Real>::infinity();
    for (int N : {6, 8, 10, 12}) {
        const auto tb = spps::tail_bound(ps, lambda, N);
        REQUIRE(tb.available);
        REQUIRE(abs(tb.c - 4 * spps::real_pi<Real>() * spps::real_pi<Real>()) <
                Real(1e-10));
        REQUIRE(tb.boundU1 < prev);
        prev = tb.boundU1;

        const auto fp = spps::build_formal_powers(ps, N, 0);
        const auto sol = spps::evaluate_solutions(fp, ps, lambda);
        for (std::size_t j = 0; j < nodes.size(); j += 50) {
            using std::cos;
            using std::sin;
            const Real u1_exact = cos(2 * nodes[j]);
            const Real u2_exact = -sin(2 * nodes[j]) / 2;
            REQUIRE(abs(sol.u1[j].re - u1_exact) <= tb.boundU1 + Real(1e-9));
            REQUIRE(abs(sol.u2[j].re - u2_exact) <= tb.boundU2 + Real(1e-9));
        }
    }
}
