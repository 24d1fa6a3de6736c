#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "spps/expression.hpp"
#include "spps/precision.hpp"

using spps::Cplx;
using spps::Expr;
using spps::mpreal;
using spps::parse_expression;

namespace {

Cplx<double> ev(const std::string& src, double x = 0.0, double xi = 0.0) {
    return spps::evaluate<double>(parse_expression(src), Cplx<double>{x, xi});
}

}  // namespace

TEST_CASE("arithmetic, precedence, and associativity") {
    REQUIRE(ev("2+3*4").re == 14.0);
    REQUIRE(ev("(2+3)*4").re == 20.0);
    REQUIRE(ev("2-3-4").re == -5.0);
    REQUIRE(ev("12/3/2").re == 2.0);
    REQUIRE(ev("-x^2", 2.0).re == -4.0);
    REQUIRE(ev("2*x^3", 2.0).re == 16.0);
    REQUIRE(ev("1/(x+0.1)^2", 0.2).re == Catch::Approx(1.0 / 0.09).epsilon(1e-14));
}

TEST_CASE("functions and constants") {
    REQUIRE(ev("sin(pi/2)").re == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(ev("cos(pi)").re == Catch::Approx(-1.0).margin(1e-15));
    REQUIRE(ev("tan(pi/4)").re == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(ev("exp(log(7))").re == Catch::Approx(7.0).epsilon(1e-14));
    REQUIRE(ev("sqrt(16)").re == Catch::Approx(4.0).epsilon(1e-15));
    REQUIRE(ev("sinh(1)+cosh(1)").re == Catch::Approx(std::exp(1.0)).epsilon(1e-14));
    REQUIRE(ev("tanh(0)").re == 0.0);
    REQUIRE(ev("abs(-3)").re == 3.0);
}

TEST_CASE("complex evaluation") {
    const auto euler = ev("exp(i*pi)");
    REQUIRE(euler.re == Catch::Approx(-1.0).margin(1e-14));
    REQUIRE(std::abs(euler.im) < 1e-14);

    const auto root = ev("sqrt(-1)");
    REQUIRE(std::abs(root.re) < 1e-15);
    REQUIRE(root.im == Catch::Approx(1.0).epsilon(1e-15));

    const auto at_i = ev("x^2", 0.0, 1.0);  // x = i
    REQUIRE(at_i.re == Catch::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("singular weight shapes used by the advection problem") {
    REQUIRE(ev("abs(tan(x/2))^2", spps::real_pi<double>() / 2).re ==
            Catch::Approx(1.0).epsilon(1e-14));
    REQUIRE(ev("abs(tan(x/2))^2", -spps::real_pi<double>() / 2).re ==
            Catch::Approx(1.0).epsilon(1e-14));
    // non-integer exponent
    REQUIRE(ev("abs(tan(x/2))^(3.5)", 1.0).re ==
            Catch::Approx(std::pow(std::abs(std::tan(0.5)), 3.5)).epsilon(1e-14));
}

TEST_CASE("parse errors carry a column and reject malformed input") {
    REQUIRE_THROWS_AS(parse_expression("2+*3"), spps::ParseError);
    REQUIRE_THROWS_AS(parse_expression("sin("), spps::ParseError);
    REQUIRE_THROWS_AS(parse_expression("(1+2"), spps::ParseError);
    REQUIRE_THROWS_AS(parse_expression(""), spps::ParseError);
    REQUIRE_THROWS_AS(parse_expression("frob(2)"), spps::ParseError);
    try {
        parse_expression("1 + + 2");
        FAIL("expected a parse error");
    } catch (const spps::ParseError& e) {
        REQUIRE(std::string(e.what()).find("column") != std::string::npos);
    }
}

TEST_CASE("division by zero raises a singularity") {
    REQUIRE_THROWS_AS(ev("1/x", 0.0), spps::EvaluationSingularity);
}

TEST_CASE("printing round-trips through the parser") {
    const std::vector<std::string> sources = {
        "1/(x+0.1)^2",
        "400*sin(2*x)^2 - 40*cos(2*x)",
        "exp(10*cos(2*x))",
        "-(i*0.5)*sin(x)*abs(tan(x/2))^(2)",
        "-x",
        "x/2",
        "2^x - x^2 + sqrt(x)",
        "sin(cos(tan(x)))",
    };
    for (const auto& src : sources) {
        const Expr first = parse_expression(src);
        const std::string text = spps::to_string(first);
        const Expr second = parse_expression(text);
        for (double x : {0.3, 0.7, 1.9}) {
            const auto a = spps::evaluate<double>(first, Cplx<double>{x, 0.1});
            const auto b = spps::evaluate<double>(second, Cplx<double>{x, 0.1});
            REQUIRE(a.re == Catch::Approx(b.re).epsilon(1e-14).margin(1e-14));
            REQUIRE(a.im == Catch::Approx(b.im).epsilon(1e-14).margin(1e-14));
        }
    }
}

TEST_CASE("high-precision evaluation") {
    spps::PrecisionScope scope(50);
    const mpreal ref("0.84147098480789650665250232163029899962256306079837");  // sin 1
    const auto got = spps::evaluate<mpreal>(parse_expression("sin(x)"), Cplx<mpreal>{mpreal(1)});
    REQUIRE(abs(got.re - ref) < mpreal("1e-48"));
    REQUIRE(got.im == 0);
}
