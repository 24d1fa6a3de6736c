#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spps {

// Base for all solver failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Misuse of a documented interface contract (mismatched grids, bad orders,
// invalid configuration values, ...).
struct ContractViolation : Error {
    explicit ContractViolation(const std::string& what) : Error("contract violation: " + what) {}
};

// An expression could not be parsed; carries the 0-based column.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t column)
        : Error("parse error at column " + std::to_string(column) + ": " + what), column(column) {}
    std::size_t column;
};

// An expression hit a pole or otherwise undefined point during evaluation.
struct EvaluationSingularity : Error {
    explicit EvaluationSingularity(const std::string& what) : Error("singular evaluation: " + what) {}
};

// The constructed particular solution vanished at a grid node even after the
// randomized retries.
struct NonvanishingViolation : Error {
    NonvanishingViolation(const std::string& what, std::size_t node)
        : Error("particular solution vanishes: " + what + " (node " + std::to_string(node) + ")"),
          node(node) {}
    std::size_t node;
};

// A weighted cell integral came out non-finite (weight exponent makes the
// cell divergent).
struct SingularCell : Error {
    SingularCell(const std::string& what, std::size_t cell)
        : Error("singular cell integral: " + what + " (cell " + std::to_string(cell) + ")"), cell(cell) {}
    std::size_t cell;
};

// The requested tolerance could not be met even at the maximum subdivision;
// carries the best bound achieved (as text, precision-independent).
struct AccuracyError : Error {
    AccuracyError(const std::string& what, const std::string& achieved)
        : Error("accuracy unreachable: " + what + " (achieved bound " + achieved + ")"),
          achieved(achieved) {}
    std::string achieved;
};

// Root finding did not converge to the requested residual level.  Roots that
// did converge are carried along as precision-erased (re, im) pairs.
struct RootFindingError : Error {
    explicit RootFindingError(const std::string& what,
                              std::vector<std::pair<double, double>> partial = {})
        : Error("root finding failed: " + what), partial(std::move(partial)) {}
    std::vector<std::pair<double, double>> partial;
};

// The eigenvalue iteration stopped making progress before reaching the
// requested eigenvalue count.
struct StagnationError : Error {
    explicit StagnationError(const std::string& what) : Error("stagnation: " + what) {}
};

}  // namespace spps
