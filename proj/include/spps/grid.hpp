#pragma once

#include "complex.hpp"
#include "error.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace spps {

// Discretization of [a, b].  Uniform grids carry the exact cell width h; the
// quadrature falls back to per-cell trapezoids when uniform is false.
template <class Real>
struct Grid {
    Real a{};
    Real b{};
    std::vector<Real> nodes;
    bool uniform = true;
    Real h{};

    std::size_t size() const { return nodes.size(); }
};

template <class Real>
using GridPtr = std::shared_ptr<const Grid<Real>>;

// M+1 equally spaced nodes with nodes.front() == a, nodes.back() == b.
template <class Real>
std::shared_ptr<const Grid<Real>> make_uniform_grid(const Real& a, const Real& b, std::size_t M) {
    if (!(a < b)) throw ContractViolation("grid requires a < b");
    if (M < 4) throw ContractViolation("grid requires at least 4 cells");
    auto g = std::make_shared<Grid<Real>>();
    g->a = a;
    g->b = b;
    g->h = (b - a) / Real(static_cast<long>(M));
    g->nodes.resize(M + 1);
    for (std::size_t j = 0; j <= M; ++j) g->nodes[j] = a + Real(static_cast<long>(j)) * g->h;
    g->nodes.back() = b;
    return g;
}

// M nodes at a + (j + 1/2) h, h = (b-a)/M, M even: the midpoint of [a, b] and
// both endpoints fall on cell midpoints, never on nodes.  Used for problems
// whose coefficients are singular at a, (a+b)/2, and b.
template <class Real>
std::shared_ptr<const Grid<Real>> make_offset_grid(const Real& a, const Real& b, std::size_t M) {
    if (!(a < b)) throw ContractViolation("grid requires a < b");
    if (M < 8 || M % 2 != 0) throw ContractViolation("offset grid requires an even node count >= 8");
    auto g = std::make_shared<Grid<Real>>();
    g->a = a;
    g->b = b;
    g->h = (b - a) / Real(static_cast<long>(M));
    g->nodes.resize(M);
    for (std::size_t j = 0; j < M; ++j)
        g->nodes[j] = a + (Real(static_cast<long>(j)) + Real(1) / 2) * g->h;
    return g;
}

// Complex-valued function sampled on a shared grid.
template <class Real>
struct SampledFunction {
    std::shared_ptr<const Grid<Real>> grid;
    std::vector<Cplx<Real>> values;

    SampledFunction() = default;
    explicit SampledFunction(std::shared_ptr<const Grid<Real>> g)
        : grid(std::move(g)), values(grid->size()) {}
    SampledFunction(std::shared_ptr<const Grid<Real>> g, std::vector<Cplx<Real>> v)
        : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid->size())
            throw ContractViolation("sample count does not match grid size");
    }

    std::size_t size() const { return values.size(); }
    const Cplx<Real>& operator[](std::size_t j) const { return values[j]; }
    Cplx<Real>& operator[](std::size_t j) { return values[j]; }

    // piecewise-linear evaluation between nodes (diagnostic use)
    Cplx<Real> at(const Real& x) const {
        const auto& n = grid->nodes;
        if (x <= n.front()) return values.front();
        if (x >= n.back()) return values.back();
        std::size_t lo = 0, hi = n.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (n[mid] <= x ? lo : hi) = mid;
        }
        const Real t = (x - n[lo]) / (n[lo + 1] - n[lo]);
        return values[lo] + t * (values[lo + 1] - values[lo]);
    }
};

template <class Real>
void require_same_grid(const SampledFunction<Real>& f, const SampledFunction<Real>& g) {
    if (f.grid != g.grid && (f.grid->nodes != g.grid->nodes))
        throw ContractViolation("sampled functions live on different grids");
}

// Grid over nodes [i0, i1] of an existing grid (both inclusive).
template <class Real>
GridPtr<Real> subgrid(const GridPtr<Real>& g, std::size_t i0, std::size_t i1) {
    if (i0 >= i1 || i1 >= g->nodes.size()) throw ContractViolation("invalid subgrid range");
    auto s = std::make_shared<Grid<Real>>();
    s->a = g->nodes[i0];
    s->b = g->nodes[i1];
    s->uniform = g->uniform;
    s->h = g->h;
    s->nodes.assign(g->nodes.begin() + static_cast<std::ptrdiff_t>(i0),
                    g->nodes.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
    return s;
}

template <class Real>
SampledFunction<Real> slice(const SampledFunction<Real>& f, const GridPtr<Real>& sub,
                            std::size_t i0) {
    SampledFunction<Real> out(sub);
    for (std::size_t j = 0; j < out.size(); ++j) out.values[j] = f.values[i0 + j];
    return out;
}

}  // namespace spps
