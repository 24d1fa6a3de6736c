#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spps/complex.hpp"
#include "spps/precision.hpp"

using spps::Cplx;
using spps::mpreal;

TEST_CASE("precision scope sets and restores the working precision") {
    spps::PrecisionScope outer(34);
    const mpreal pi34 = spps::real_pi<mpreal>();
    {
        spps::PrecisionScope inner(80);
        const mpreal pi80 = spps::real_pi<mpreal>();
        // 80-digit pi differs from the 34-digit value beyond digit 34
        REQUIRE(abs(pi80 - pi34) > 0);
        REQUIRE(abs(pi80 - pi34) < mpreal("1e-33"));
        REQUIRE(spps::real_eps<mpreal>() < mpreal("1e-75"));
    }
    REQUIRE(spps::real_eps<mpreal>() > mpreal("1e-40"));
    REQUIRE(spps::real_eps<mpreal>() < mpreal("1e-30"));
}

TEST_CASE("pi and eps for the double backend") {
    REQUIRE(spps::real_pi<double>() == Catch::Approx(3.14159265358979323846).epsilon(1e-15));
    REQUIRE(spps::real_eps<double>() == std::numeric_limits<double>::epsilon());
}

TEST_CASE("pi at 50 digits matches the published digits") {
    spps::PrecisionScope scope(50);
    const mpreal ref("3.14159265358979323846264338327950288419716939937511");
    REQUIRE(abs(spps::real_pi<mpreal>() - ref) < mpreal("1e-49"));
}

TEMPLATE_TEST_CASE("complex arithmetic identities", "", double, mpreal) {
    using Real = TestType;
    spps::PrecisionScope scope(34);
    using C = Cplx<Real>;

    const C a{Real(1), Real(2)};
    const C b{Real(3), Real(4)};
    const C p = a * b;
    REQUIRE(p.re == Real(-5));
    REQUIRE(p.im == Real(10));

    REQUIRE(abs(C{Real(3), Real(4)}) == Real(5));
    REQUIRE(norm(C{Real(3), Real(4)}) == Real(25));
    const C cc = conj(a);
    REQUIRE(cc.re == Real(1));
    REQUIRE(cc.im == Real(-2));

    const C q = a / b;
    const C back = q * b;
    REQUIRE(abs(back - a) < 8 * spps::real_eps<Real>() * abs(a));

    REQUIRE(abs(arg(C{Real(0), Real(1)}) - spps::real_pi<Real>() / 2) <
            8 * spps::real_eps<Real>());
}

TEST_CASE("complex division avoids intermediate overflow") {
    using C = Cplx<double>;
    const C num{1e300, 1e300};
    const C den{2e300, 2e300};
    const C q = num / den;
    REQUIRE(q.re == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(std::abs(q.im) < 1e-15);

    const C tiny = C{1e-300, 1e-300} / C{2e-300, -2e-300};
    REQUIRE(std::isfinite(tiny.re));
    REQUIRE(std::isfinite(tiny.im));
}

TEST_CASE("multiplicativity of the modulus on random samples") {
    using C = Cplx<double>;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int it = 0; it < 200; ++it) {
        const C a{dist(rng), dist(rng)};
        const C b{dist(rng), dist(rng)};
        REQUIRE(abs(a * b) == Catch::Approx(abs(a) * abs(b)).epsilon(1e-13).margin(1e-13));
    }
}
