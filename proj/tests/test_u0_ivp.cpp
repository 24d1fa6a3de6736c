#include <catch_amalgamated.hpp>

#include <cmath>

#include "spps/catalog.hpp"
#include "spps/eigensolver.hpp"
#include "spps/precision.hpp"
#include "spps/solutions.hpp"
#include "spps/u0_builder.hpp"

using spps::Cplx;
using spps::mpreal;

TEST_CASE("regular base solution satisfies the lambda = 0 equation") {
    spps::PrecisionScope scope(100);
    const auto prob = spps::paine().problem;
    const auto prep = spps::prepare_problem<mpreal>(prob, 2000);
    REQUIRE(spps::base_residual(prep.ps, prep.coef) < mpreal("1e-20"));
    for (std::size_t j = 0; j < prep.ps.u0.size(); ++j) REQUIRE(abs(prep.ps.u0[j]) > 0);
}

TEST_CASE("analytic base of the oscillatory-well problem is accepted verbatim") {
    spps::PrecisionScope scope(34);
    const auto prob = spps::coffey_evans(20).problem;
    const auto prep = spps::prepare_problem<mpreal>(prob, 2000);
    // The analytic base satisfies the integrated equation up to quadrature
    // error only; measured 1.7e-6 at this grid, decaying at fifth order.
    const mpreal res = spps::base_residual(prep.ps, prep.coef);
    REQUIRE(res < mpreal("1e-5"));
    const auto fine = spps::prepare_problem<mpreal>(prob, 4000);
    REQUIRE(spps::base_residual(fine.ps, fine.coef) < res / 16);
    // u0 = exp(10 cos 2x) sampled exactly
    const auto& nodes = prep.grid->nodes;
    for (std::size_t j = 0; j < nodes.size(); j += 97) {
        using std::cos;
        using std::exp;
        REQUIRE(abs(prep.ps.u0[j].re - exp(10 * cos(2 * nodes[j]))) <=
                mpreal("1e-30") * abs(prep.ps.u0[j].re));
    }
}

TEST_CASE("initial-value solve reproduces the sine closed form") {
    spps::PrecisionScope scope(34);
    const auto prob = spps::constant_coefficient(spps::ConstantKind::Dirichlet).problem;
    const auto prep = spps::prepare_problem<mpreal>(prob, 2000);
    spps::IvpOptions<mpreal> opt;
    opt.N = 60;
    const auto [u, du] = spps::solve_ivp(prep.ps, prep.coef, Cplx<mpreal>{mpreal(4)}, 0,
                                         Cplx<mpreal>{}, Cplx<mpreal>{mpreal(1)}, opt);
    const auto& nodes = prep.grid->nodes;
    // Quadrature-limited accuracy: measured 2e-14 at this grid.
    for (std::size_t j = 0; j < nodes.size(); j += 41) {
        using std::cos;
        using std::sin;
        REQUIRE(abs(u[j].re - sin(2 * nodes[j]) / 2) < mpreal("1e-12"));
        REQUIRE(abs(du[j].re - cos(2 * nodes[j])) < mpreal("1e-12"));
        REQUIRE(abs(u[j].im) < mpreal("1e-12"));
    }
}

TEST_CASE("chunked continuation matches the closed form when the order is small") {
    spps::PrecisionScope scope(50);
    const auto prob = spps::constant_coefficient(spps::ConstantKind::Dirichlet).problem;
    const auto prep = spps::prepare_problem<mpreal>(prob, 2000);
    spps::IvpOptions<mpreal> opt;
    opt.N = 8;  // forces subdivision: one chunk cannot meet the tolerance
    opt.tolerance = mpreal("1e-25");
    const std::size_t mid = 1000;
    const auto [u, du] =
        spps::solve_ivp(prep.ps, prep.coef, Cplx<mpreal>{mpreal(4)}, mid,
                        Cplx<mpreal>{mpreal(1)}, Cplx<mpreal>{}, opt);
    const auto& nodes = prep.grid->nodes;
    const mpreal x0 = nodes[mid];
    for (std::size_t j = 0; j < nodes.size(); j += 59) {
        using std::cos;
        REQUIRE(abs(u[j].re - cos(2 * (nodes[j] - x0))) < mpreal("1e-12"));
    }
}

TEST_CASE("lambda = 0 with base initial data returns the base itself") {
    spps::PrecisionScope scope(34);
    const auto prob = spps::paine().problem;
    const auto prep = spps::prepare_problem<mpreal>(prob, 500);
    spps::IvpOptions<mpreal> opt;
    const std::size_t x0 = 250;
    const auto [u, du] = spps::solve_ivp(prep.ps, prep.coef, Cplx<mpreal>{}, x0,
                                         prep.ps.u0[x0], prep.ps.du0[x0], opt);
    for (std::size_t j = 0; j < u.size(); j += 13) {
        REQUIRE(abs(u[j] - prep.ps.u0[j]) <= mpreal("1e-28") * (1 + abs(prep.ps.u0[j])));
        REQUIRE(abs(du[j] - prep.ps.du0[j]) <= mpreal("1e-26") * (1 + abs(prep.ps.du0[j])));
    }
}

TEMPLATE_TEST_CASE("wronskian of the series pair is constant along the interval", "", double,
                   mpreal) {
    using Real = TestType;
    spps::PrecisionScope scope(34);
    const auto prob = spps::paine().problem;
    const auto prep = spps::prepare_problem<Real>(prob, 500);
    const auto fp = spps::build_formal_powers(prep.ps, 30, 0);
    for (const Cplx<Real> lambda : {Cplx<Real>{Real(4)}, Cplx<Real>{Real(7), Real(1) / 2}}) {
        const auto sol = spps::evaluate_solutions(fp, prep.ps, lambda);
        Cplx<Real> w0;
        for (std::size_t j = 0; j < sol.u1.size(); ++j) {
            const Cplx<Real> w =
                prep.coef.p[j] * (sol.u1[j] * sol.du2[j] - sol.du1[j] * sol.u2[j]);
            if (j == 0) w0 = w;
            REQUIRE(abs(w - w0) <= Real(1e-6) * (1 + abs(w0)));
        }
    }
}

TEST_CASE("a spectral value the grid cannot resolve is rejected") {
    const auto prob = spps::constant_coefficient(spps::ConstantKind::Dirichlet).problem;
    const auto prep = spps::prepare_problem<double>(prob, 200);
    spps::IvpOptions<double> opt;
    REQUIRE_THROWS_AS(spps::solve_ivp(prep.ps, prep.coef, Cplx<double>{1e8}, 0, Cplx<double>{1.0},
                                      Cplx<double>{}, opt),
                      spps::AccuracyError);
}

TEST_CASE("base construction rejects problems with a vanishing p") {
    spps::SturmLiouvilleProblem prob;
    prob.name = "bad";
    prob.a = spps::parse_expression("-1");
    prob.b = spps::parse_expression("1");
    prob.p = spps::parse_expression("x");  // vanishes inside the interval
    prob.q = spps::parse_expression("0");
    prob.r = spps::parse_expression("1");
    REQUIRE_THROWS(spps::prepare_problem<double>(prob, 100));
}
