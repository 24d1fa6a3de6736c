#pragma once

// Convenience umbrella: the full solver stack in one include.

#include "spps/catalog.hpp"
#include "spps/char_poly.hpp"
#include "spps/complex.hpp"
#include "spps/eigensolver.hpp"
#include "spps/error.hpp"
#include "spps/expression.hpp"
#include "spps/formal_powers.hpp"
#include "spps/grid.hpp"
#include "spps/precision.hpp"
#include "spps/problem.hpp"
#include "spps/quadrature.hpp"
#include "spps/roots.hpp"
#include "spps/singular.hpp"
#include "spps/solutions.hpp"
#include "spps/u0_builder.hpp"
