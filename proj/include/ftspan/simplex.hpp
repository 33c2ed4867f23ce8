#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ftspan {

enum class RowSense { le, ge, eq };

struct LpRow {
    std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
    RowSense sense = RowSense::le;
    double rhs = 0.0;
};

// min c^T x subject to rows, x >= 0. Upper bounds go in as rows.
struct LpProblem {
    std::vector<double> objective;
    std::vector<LpRow> rows;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int add_variable(double obj_coeff) {
        objective.push_back(obj_coeff);
        return num_vars() - 1;
    }
    void add_row(std::vector<std::pair<int, double>> terms, RowSense sense, double rhs) {
        rows.push_back(LpRow{std::move(terms), sense, rhs});
    }
};

enum class LpStatus { optimal, infeasible, iteration_limit, unbounded };

std::string to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::optimal;
    std::vector<double> x;
    double objective = 0.0;
    int iterations = 0;  // total pivots over both phases
};

// Dense two-phase tableau simplex. Pricing is most-negative-reduced-cost with
// lowest-index ties; after a long degenerate stall it falls back to Bland's
// rule, which restores the anti-cycling guarantee. Fully deterministic.
LpSolution lp_core_solve(const LpProblem& p, double eps = 1e-7, int max_iterations = 0);

} // namespace ftspan
