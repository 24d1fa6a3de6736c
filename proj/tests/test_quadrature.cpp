#include <catch_amalgamated.hpp>

#include <cmath>

#include "spps/grid.hpp"
#include "spps/precision.hpp"
#include "spps/quadrature.hpp"

using spps::Cplx;
using spps::mpreal;
using spps::SampledFunction;

namespace {

template <class Real, class F>
SampledFunction<Real> sample(const spps::GridPtr<Real>& g, F f) {
    SampledFunction<Real> s(g);
    for (std::size_t j = 0; j < g->size(); ++j) s[j] = Cplx<Real>{f(g->nodes[j])};
    return s;
}

}  // namespace

TEMPLATE_TEST_CASE("cumulative integral is exact on polynomials through degree four", "", double,
                   mpreal) {
    using Real = TestType;
    spps::PrecisionScope scope(34);
    auto g = spps::make_uniform_grid<Real>(Real(0), Real(1), 40);

    for (int d = 0; d <= 4; ++d) {
        auto f = sample<Real>(g, [&](const Real& x) {
            using std::pow;
            return d == 0 ? Real(1) : Real(pow(x, d));
        });
        auto F = spps::cumulative_integral(f, 0);
        for (std::size_t j = 0; j < g->size(); ++j) {
            using std::pow;
            const Real x = g->nodes[j];
            const Real exact = (d == 0 ? x : Real(pow(x, d + 1))) / Real(d + 1);
            REQUIRE(abs(F[j].re - exact) <= 64 * spps::real_eps<Real>());
            REQUIRE(F[j].im == Real(0));
        }
    }
}

TEST_CASE("anchored antiderivative vanishes at the anchor exactly") {
    auto g = spps::make_uniform_grid<double>(0.0, 3.0, 30);
    auto f = sample<double>(g, [](double x) { return std::sin(3 * x) + 0.25; });
    for (std::size_t anchor : {std::size_t(0), std::size_t(13), std::size_t(30)}) {
        auto F = spps::cumulative_integral(f, anchor);
        REQUIRE(F[anchor].re == 0.0);
        REQUIRE(F[anchor].im == 0.0);
    }
}

TEST_CASE("fourth-order convergence on a smooth integrand") {
    const double exact = 2.0;  // integral of sin on [0, pi]
    double err[2];
    std::size_t Ms[2] = {100, 200};
    for (int k = 0; k < 2; ++k) {
        auto g = spps::make_uniform_grid<double>(0.0, spps::real_pi<double>(), Ms[k]);
        auto f = sample<double>(g, [](double x) { return std::sin(x); });
        err[k] = std::abs(spps::integrate(f).re - exact);
    }
    REQUIRE(err[0] < 1e-7);
    REQUIRE(err[1] < err[0] / 10.0);  // h^4 would give /16
}

TEST_CASE("linearity of the cumulative integral") {
    auto g = spps::make_uniform_grid<double>(-1.0, 2.0, 60);
    auto f = sample<double>(g, [](double x) { return std::exp(x); });
    auto h = sample<double>(g, [](double x) { return std::cos(4 * x); });
    const Cplx<double> alpha{2.5, -1.0}, beta{0.0, 3.0};

    SampledFunction<double> combo(g);
    for (std::size_t j = 0; j < g->size(); ++j) combo[j] = alpha * f[j] + beta * h[j];

    auto Fc = spps::cumulative_integral(combo, 7);
    auto Ff = spps::cumulative_integral(f, 7);
    auto Fh = spps::cumulative_integral(h, 7);
    for (std::size_t j = 0; j < g->size(); ++j) {
        const Cplx<double> lin = alpha * Ff[j] + beta * Fh[j];
        REQUIRE(abs(Fc[j] - lin) <= 1e-13 * (1 + abs(lin)));
    }
}

TEST_CASE("gauss-legendre nodes integrate high-degree monomials") {
    const auto& gl = spps::detail::gauss_legendre<double>(12);
    REQUIRE(gl.x.size() == 12);
    // exact for degree <= 23; check x^10 and x^22 on [-1, 1]
    for (int d : {10, 22}) {
        double acc = 0;
        for (std::size_t k = 0; k < gl.x.size(); ++k) acc += gl.w[k] * std::pow(gl.x[k], d);
        REQUIRE(acc == Catch::Approx(2.0 / (d + 1)).epsilon(1e-12));
    }
}

TEST_CASE("tan-power cell integrals match the closed form for nu = 2") {
    // antiderivative of tan(s/2)^2 is 2 tan(s/2) - s
    spps::PrecisionScope scope(34);
    const mpreal pi = spps::real_pi<mpreal>();
    auto g = spps::make_offset_grid<mpreal>(-pi, pi, 16);
    const auto W = spps::weighted_cell_integrals(*g, spps::TanPowerWeight<mpreal>{mpreal(2)});
    REQUIRE(W.size() == g->size() - 1);
    for (std::size_t j = 0; j + 1 < g->size(); ++j) {
        using std::tan;
        const mpreal sa = g->nodes[j], sb = g->nodes[j + 1];
        const mpreal exact = (2 * tan(sb / 2) - sb) - (2 * tan(sa / 2) - sa);
        REQUIRE(abs(W[j] - exact) <= mpreal("1e-28") * (1 + abs(exact)));
    }
}

TEST_CASE("integral of an odd function about the midpoint is tiny") {
    auto g = spps::make_uniform_grid<double>(-2.0, 2.0, 128);
    auto f = sample<double>(g, [](double x) { return x * std::exp(-x * x); });
    REQUIRE(std::abs(spps::integrate(f).re) < 1e-14);
}
