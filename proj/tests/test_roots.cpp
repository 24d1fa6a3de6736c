#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "spps/precision.hpp"
#include "spps/roots.hpp"

using spps::Cplx;
using spps::mpreal;

namespace {

template <class Real>
std::vector<Cplx<Real>> monic_from_roots(const std::vector<Cplx<Real>>& roots) {
    std::vector<Cplx<Real>> p{Cplx<Real>{Real(1)}};
    for (const auto& r : roots) p = spps::poly_mul(p, {Cplx<Real>{} - r, Cplx<Real>{Real(1)}});
    return p;
}

}  // namespace

TEMPLATE_TEST_CASE("horner evaluation and derivative", "", double, mpreal) {
    using Real = TestType;
    spps::PrecisionScope scope(30);
    const std::vector<Cplx<Real>> p{Cplx<Real>{Real(1)}, Cplx<Real>{Real(2)},
                                    Cplx<Real>{Real(3)}};
    const Cplx<Real> z{Real(2)};
    REQUIRE(spps::poly_eval(p, z).re == Real(17));
    REQUIRE(spps::poly_eval(p, z).im == Real(0));
    REQUIRE(spps::poly_dval(p, z).re == Real(14));
    const auto pe = spps::poly_eval_noise(p, z);
    REQUIRE(pe.value.re == Real(17));
    REQUIRE(pe.noise > Real(0));
    REQUIRE(pe.noise < Real(100) * spps::real_eps<Real>() * Real(17));
}

TEST_CASE("product of linear factors recovers integer roots") {
    spps::PrecisionScope scope(30);
    std::vector<Cplx<mpreal>> roots;
    for (int k = 1; k <= 5; ++k) roots.push_back(Cplx<mpreal>{mpreal(k)});
    const auto rs = spps::aberth_roots(monic_from_roots(roots));
    REQUIRE(rs.roots.size() == 5);
    for (int k = 1; k <= 5; ++k) {
        REQUIRE(abs(rs.roots[std::size_t(k - 1)].re - k) < mpreal("1e-12"));
        REQUIRE(abs(rs.roots[std::size_t(k - 1)].im) < mpreal("1e-12"));
        REQUIRE(rs.converged[std::size_t(k - 1)]);
    }
}

TEST_CASE("unit quadratic has conjugate imaginary roots") {
    const std::vector<Cplx<double>> p{{1.0}, {}, {1.0}};
    const auto rs = spps::aberth_roots(p);
    REQUIRE(rs.roots.size() == 2);
    // sorted by real part then imaginary part: -i before +i
    REQUIRE(std::abs(rs.roots[0].re) < 1e-14);
    REQUIRE(rs.roots[0].im == Catch::Approx(-1.0).margin(1e-14));
    REQUIRE(rs.roots[1].im == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("random separated spectrum of degree twenty") {
    spps::PrecisionScope scope(30);
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    std::vector<Cplx<mpreal>> roots;
    for (int k = 0; k < 20; ++k)
        roots.push_back(Cplx<mpreal>{mpreal(k) + mpreal(jitter(rng)), mpreal(jitter(rng))});
    std::sort(roots.begin(), roots.end(), [](const Cplx<mpreal>& a, const Cplx<mpreal>& b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    });
    const auto rs = spps::aberth_roots(monic_from_roots(roots));
    REQUIRE(rs.roots.size() == 20);
    for (std::size_t k = 0; k < 20; ++k) {
        REQUIRE(abs(rs.roots[k] - roots[k]) < mpreal("1e-8"));
        REQUIRE(rs.converged[k]);
    }
}

TEST_CASE("shifted coefficients evaluate the shifted polynomial") {
    spps::PrecisionScope scope(30);
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::vector<Cplx<mpreal>> p;
    for (int m = 0; m <= 6; ++m) p.push_back(Cplx<mpreal>{mpreal(coef(rng)), mpreal(coef(rng))});
    const Cplx<mpreal> c{mpreal(7) / 10, mpreal(-3) / 10};
    const auto shifted = spps::taylor_shift(p, c);
    REQUIRE(shifted.size() == p.size());
    for (int t = 0; t < 5; ++t) {
        const Cplx<mpreal> z{mpreal(coef(rng)), mpreal(coef(rng))};
        const auto lhs = spps::poly_eval(shifted, z);
        const auto rhs = spps::poly_eval(p, z + c);
        REQUIRE(abs(lhs - rhs) < mpreal("1e-25") * (1 + abs(rhs)));
    }
}

TEST_CASE("polynomial product of conjugate linear factors") {
    const std::vector<Cplx<double>> a{{1.0}, {1.0}};
    const std::vector<Cplx<double>> b{{1.0}, {-1.0}};
    const auto prod = spps::poly_mul(a, b);
    REQUIRE(prod.size() == 3);
    REQUIRE(prod[0].re == 1.0);
    REQUIRE(prod[1].re == 0.0);
    REQUIRE(prod[2].re == -1.0);
}

TEST_CASE("degenerate coefficient vectors") {
    // identically zero polynomial has no root set
    REQUIRE_THROWS_AS(spps::aberth_roots(std::vector<Cplx<double>>{{}, {}}),
                      spps::ContractViolation);
    // trailing zero coefficients are trimmed before factoring
    const auto rs = spps::aberth_roots(std::vector<Cplx<double>>{{-1.0}, {1.0}, {}, {}});
    REQUIRE(rs.roots.size() == 1);
    REQUIRE(rs.roots[0].re == Catch::Approx(1.0).margin(1e-14));
    // leading zeros contribute exact roots at the origin
    const auto rz = spps::aberth_roots(std::vector<Cplx<double>>{{}, {}, {1.0}, {1.0}});
    REQUIRE(rz.roots.size() == 3);
    REQUIRE(rz.roots[0].re == Catch::Approx(-1.0).margin(1e-14));
    REQUIRE(rz.roots[1].re == 0.0);
    REQUIRE(rz.roots[1].im == 0.0);
    REQUIRE(rz.roots[2].re == 0.0);
    // a non-finite coefficient is a root-finding failure, not a crash
    REQUIRE_THROWS_AS(
        spps::aberth_roots(std::vector<Cplx<double>>{
            {1.0}, {std::numeric_limits<double>::infinity()}, {1.0}}),
        spps::RootFindingError);
}
