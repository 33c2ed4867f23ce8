#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ftspan/errors.hpp"
#include "ftspan/graph.hpp"
#include "ftspan/simplex.hpp"
#include "ftspan/spanner.hpp"

namespace ftspan {

// Row (r+1-|W|) x_{(u,v)} + sum_{P not in W} f_P >= r+1-|W| for a path
// subset W of the demand's length-2 paths, identified by midpoints.
struct KnapsackCoverCut {
    EdgeId demand = -1;
    std::vector<VertexId> w_mids;  // sorted, |W| <= r
};

// Covering LP for minimum-cost fault-tolerant 2-spanners on a directed
// unit-length graph: capacities x_e in [0,1], flows f_P >= 0 per length-2
// path, cover rows per demand edge, knapsack-cover cuts materialized lazily.
struct LpModel {
    std::shared_ptr<const Graph> g;
    int r = 0;
    bool kc_cuts_enabled = true;

    struct Demand {
        EdgeId edge = -1;
        std::vector<Path2> paths;  // sorted by mid
        std::vector<std::pair<EdgeId, EdgeId>> path_edges;
        int f_base = -1;  // variable index of the first flow
    };
    std::vector<Demand> demands;   // ascending edge id
    std::vector<int> x_index;      // EdgeId -> variable index, -1 when dead
    std::vector<int> demand_index; // EdgeId -> demand position, -1 when dead
    LpProblem prob;
    std::vector<KnapsackCoverCut> materialized;
    std::set<std::pair<EdgeId, std::vector<VertexId>>> cut_keys;
    std::vector<EdgeId> presolve_fixed;  // demands with <= r paths force x = 1

    int num_x = 0;
    int num_f = 0;

    // Appends the cut row; false when an identical cut is already present.
    bool add_cut(const KnapsackCoverCut& cut);
};

// Flows of one demand, aligned index-for-index with its path list.
struct DemandFlows {
    EdgeId demand = -1;
    std::vector<Path2> paths;
    std::vector<double> flow;
};

struct FractionalSolution {
    std::vector<double> x;  // indexed by EdgeId of the host graph
    std::vector<DemandFlows> flows;
    double objective = 0.0;
    int cut_rounds = 0;
    int cuts_added = 0;
    int simplex_iterations = 0;
};

// Base model: capacity rows in per-path form (each edge lies on at most one
// path of a fixed demand, so the aggregate capacity sum degenerates to single
// terms), multiplicity bounds, and the W = empty cover row per demand.
LpModel build_base_lp(std::shared_ptr<const Graph> g, int r, bool kc_cuts_enabled = true);

// For every demand and every prefix size kappa <= min(r, #paths), test the
// cut whose W is the kappa paths with largest flow (ties by mid). Returns all
// cuts violated by more than eps; an empty result certifies feasibility of
// the full exponential family.
std::vector<KnapsackCoverCut> separation_oracle(const Graph& g, int r,
                                                const FractionalSolution& sol, double eps);

struct SolveLpOptions {
    double eps = 1e-7;
    int max_cut_rounds = 50;
    bool use_kc_cuts = true;
    std::vector<double>* objective_trace = nullptr;  // per cut round, for diagnostics
};

// Cut rounds ran out with violated cuts remaining; carries the last solution
// and how far it still is from feasible.
struct CutRoundsError : SolveError {
    CutRoundsError(const std::string& msg, FractionalSolution last, double violation)
        : SolveError(msg), last_solution(std::move(last)), remaining_violation(violation) {}
    FractionalSolution last_solution;
    double remaining_violation;
};

// Cutting-plane loop: solve, separate, add violated cuts, repeat.
FractionalSolution solve_lp(std::shared_ptr<const Graph> g, int r, SolveLpOptions opts = {});

// The 0/1 solution induced by a subgraph: x is the indicator, each flow is 1
// exactly when both path edges are present.
FractionalSolution integral_solution_from(const Graph& g, int r, const Spanner& h);

std::string fractional_solution_json(const Graph& g, const FractionalSolution& sol);

} // namespace ftspan
