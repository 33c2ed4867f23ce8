#pragma once

#include <stdexcept>
#include <string>

namespace ftspan {

// Invalid arguments, ids out of range, incompatible algorithm/graph pairs.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed text input; carries the 1-based line number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    int line;
};

// An exhaustive enumeration would exceed its configured budget.
// Raised instead of silently sampling.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// A node program broke the message-passing contract.
struct SimulationFault : std::runtime_error {
    SimulationFault(const std::string& msg, int node_id, int round_no)
        : std::runtime_error("node " + std::to_string(node_id) + ", round " +
                             std::to_string(round_no) + ": " + msg),
          node(node_id), round(round_no) {}
    int node;
    int round;
};

// Solver gave up: cut rounds exhausted, rounding attempts exhausted,
// simplex iteration limit, and similar.
struct SolveError : std::runtime_error {
    explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ftspan
