#include "ftspan/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "ftspan/errors.hpp"

namespace ftspan {

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::iteration_limit: return "iteration-limit";
        case LpStatus::unbounded: return "unbounded";
    }
    return "?";
}

namespace {

constexpr double kPivotTol = 1e-8;

struct Tableau {
    int m = 0;       // constraint rows
    int ncols = 0;   // variable columns (structural + slack/surplus + artificial)
    int n_struct = 0;
    int first_artificial = 0;  // columns >= this are artificial
    std::vector<double> a;     // m x (ncols + 1), last column is rhs
    std::vector<int> basis;    // basis[i] = column basic in row i
    std::vector<double> obj;   // reduced-cost row, size ncols + 1 (last = -z)

    double& at(int i, int j) { return a[static_cast<size_t>(i) * (ncols + 1) + j]; }
    double* row(int i) { return &a[static_cast<size_t>(i) * (ncols + 1)]; }
    double& rhs(int i) { return at(i, ncols); }

    void pivot(int pr, int pc) {
        double* prow = row(pr);
        double inv = 1.0 / prow[pc];
        for (int j = 0; j <= ncols; ++j) prow[j] *= inv;
        prow[pc] = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == pr) continue;
            double f = at(i, pc);
            if (std::fabs(f) < 1e-13) {
                at(i, pc) = 0.0;
                continue;
            }
            double* r = row(i);
            for (int j = 0; j <= ncols; ++j) r[j] -= f * prow[j];
            r[pc] = 0.0;
        }
        double f = obj[static_cast<size_t>(pc)];
        if (std::fabs(f) > 0) {
            for (int j = 0; j <= ncols; ++j) obj[static_cast<size_t>(j)] -= f * prow[j];
            obj[static_cast<size_t>(pc)] = 0.0;
        }
        basis[static_cast<size_t>(pr)] = pc;
    }

    // Fill the reduced-cost row for cost vector c (size ncols).
    void price(const std::vector<double>& c) {
        obj.assign(static_cast<size_t>(ncols) + 1, 0.0);
        for (int j = 0; j < ncols; ++j) obj[static_cast<size_t>(j)] = c[static_cast<size_t>(j)];
        for (int i = 0; i < m; ++i) {
            double cb = c[static_cast<size_t>(basis[static_cast<size_t>(i)])];
            if (cb == 0.0) continue;
            double* r = row(i);
            for (int j = 0; j <= ncols; ++j) obj[static_cast<size_t>(j)] -= cb * r[j];
        }
    }

    // One simplex phase; cols < col_limit may enter. Dantzig pricing with a
    // sticky switch to Bland's rule after a degenerate stall: Bland stays on
    // until the objective genuinely moves, which bounds every plateau. The
    // reduced-cost row is rebuilt periodically to shed accumulated drift.
    LpStatus iterate(const std::vector<double>& costs, int col_limit, double eps,
                     int& iterations, int max_iterations) {
        int stall = 0;
        bool bland = false;
        double last_z = obj[static_cast<size_t>(ncols)];
        const int stall_limit = 2 * (m + 16);
        int since_reprice = 0;
        while (true) {
            if (++since_reprice >= 1024) {
                price(costs);
                since_reprice = 0;
            }
            int pc = -1;
            if (bland) {
                for (int j = 0; j < col_limit; ++j)
                    if (obj[static_cast<size_t>(j)] < -eps) {
                        pc = j;
                        break;
                    }
            } else {
                double best = -eps;
                for (int j = 0; j < col_limit; ++j)
                    if (obj[static_cast<size_t>(j)] < best) {
                        best = obj[static_cast<size_t>(j)];
                        pc = j;
                    }
            }
            if (pc < 0) return LpStatus::optimal;
            int pr = -1;
            double best_ratio = 0.0;
            for (int i = 0; i < m; ++i) {
                double aij = at(i, pc);
                if (aij <= kPivotTol) continue;
                double ratio = std::max(rhs(i), 0.0) / aij;
                if (pr < 0 || ratio < best_ratio - 1e-9) {
                    pr = i;
                    best_ratio = ratio;
                } else if (ratio <= best_ratio + 1e-9) {
                    // tie: Bland mode picks the lowest basic index (the
                    // anti-cycling guarantee); otherwise the biggest pivot wins
                    bool take = bland ? basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(pr)]
                                      : aij > at(pr, pc);
                    if (take) {
                        pr = i;
                        best_ratio = std::min(best_ratio, ratio);
                    }
                }
            }
            if (pr < 0) return LpStatus::unbounded;
            pivot(pr, pc);
            if (++iterations > max_iterations) return LpStatus::iteration_limit;
            double z = obj[static_cast<size_t>(ncols)];
            double progress_tol = 1e-9 * (1.0 + std::fabs(last_z));
            if (z > last_z + progress_tol) {  // row stores -objective, so up is progress
                stall = 0;
                bland = false;
                last_z = z;
            } else if (++stall > stall_limit) {
                bland = true;
            }
        }
    }

    void drop_row(int i) {
        if (i != m - 1) {
            for (int j = 0; j <= ncols; ++j) at(i, j) = at(m - 1, j);
            basis[static_cast<size_t>(i)] = basis[static_cast<size_t>(m - 1)];
        }
        --m;
        basis.pop_back();
        a.resize(static_cast<size_t>(m) * (ncols + 1));
    }
};

} // namespace

LpSolution lp_core_solve(const LpProblem& p, double eps, int max_iterations) {
    int n = p.num_vars();
    // Normalize rows to rhs >= 0 and count extra columns.
    struct NR {
        std::vector<std::pair<int, double>> terms;
        RowSense sense;
        double rhs;
    };
    std::vector<NR> rows;
    rows.reserve(p.rows.size());
    for (const LpRow& r : p.rows) {
        NR nr{r.terms, r.sense, r.rhs};
        for (auto& [v, c] : nr.terms)
            if (v < 0 || v >= n) throw InputError("lp row references unknown variable");
        if (nr.rhs < 0) {
            for (auto& [v, c] : nr.terms) c = -c;
            nr.rhs = -nr.rhs;
            if (nr.sense == RowSense::le) nr.sense = RowSense::ge;
            else if (nr.sense == RowSense::ge) nr.sense = RowSense::le;
        }
        rows.push_back(std::move(nr));
    }

    int m = static_cast<int>(rows.size());
    int n_slack = 0, n_art = 0;
    for (const NR& r : rows) {
        if (r.sense != RowSense::eq) ++n_slack;
        if (r.sense != RowSense::le) ++n_art;
    }
    Tableau t;
    t.m = m;
    t.n_struct = n;
    t.ncols = n + n_slack + n_art;
    t.first_artificial = n + n_slack;
    t.a.assign(static_cast<size_t>(m) * (t.ncols + 1), 0.0);
    t.basis.assign(static_cast<size_t>(m), -1);

    int slack_at = n, art_at = t.first_artificial;
    for (int i = 0; i < m; ++i) {
        const NR& r = rows[static_cast<size_t>(i)];
        for (auto [v, c] : r.terms) t.at(i, v) += c;
        t.rhs(i) = r.rhs;
        if (r.sense == RowSense::le) {
            t.at(i, slack_at) = 1.0;
            t.basis[static_cast<size_t>(i)] = slack_at++;
        } else if (r.sense == RowSense::ge) {
            t.at(i, slack_at) = -1.0;
            ++slack_at;
            t.at(i, art_at) = 1.0;
            t.basis[static_cast<size_t>(i)] = art_at++;
        } else {
            t.at(i, art_at) = 1.0;
            t.basis[static_cast<size_t>(i)] = art_at++;
        }
    }

    if (max_iterations <= 0) max_iterations = 20000 + 80 * (t.m + t.ncols);
    LpSolution sol;
    sol.x.assign(static_cast<size_t>(n), 0.0);

    // Phase 1: minimize the sum of artificials.
    if (n_art > 0) {
        std::vector<double> c1(static_cast<size_t>(t.ncols), 0.0);
        for (int j = t.first_artificial; j < t.ncols; ++j) c1[static_cast<size_t>(j)] = 1.0;
        t.price(c1);
        LpStatus st = t.iterate(c1, t.ncols, eps, sol.iterations, max_iterations);
        if (st == LpStatus::iteration_limit) {
            sol.status = st;
            return sol;
        }
        double art_sum = -t.obj[static_cast<size_t>(t.ncols)];  // obj row stores -z
        if (art_sum > eps) {
            sol.status = LpStatus::infeasible;
            return sol;
        }
        // Remove artificials from the basis; redundant rows get dropped.
        for (int i = 0; i < t.m;) {
            if (t.basis[static_cast<size_t>(i)] < t.first_artificial) {
                ++i;
                continue;
            }
            int pc = -1;
            for (int j = 0; j < t.first_artificial; ++j)
                if (std::fabs(t.at(i, j)) > kPivotTol) {
                    pc = j;
                    break;
                }
            if (pc >= 0) {
                t.pivot(i, pc);
                ++i;
            } else {
                t.drop_row(i);
            }
        }
    }

    // Phase 2 with artificial columns frozen out.
    std::vector<double> c2(static_cast<size_t>(t.ncols), 0.0);
    for (int j = 0; j < n; ++j) c2[static_cast<size_t>(j)] = p.objective[static_cast<size_t>(j)];
    t.price(c2);
    LpStatus st = t.iterate(c2, t.first_artificial, eps, sol.iterations, max_iterations);
    sol.status = st;
    if (st != LpStatus::optimal) return sol;

    for (int i = 0; i < t.m; ++i) {
        int b = t.basis[static_cast<size_t>(i)];
        if (b < n) sol.x[static_cast<size_t>(b)] = t.rhs(i);
    }
    for (double& v : sol.x)
        if (std::fabs(v) < 1e-11) v = 0.0;
    sol.objective = 0.0;
    for (int j = 0; j < n; ++j) sol.objective += p.objective[static_cast<size_t>(j)] * sol.x[static_cast<size_t>(j)];
    return sol;
}

} // namespace ftspan
