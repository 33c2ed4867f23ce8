#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ftspan/errors.hpp"
#include "ftspan/lp_ft2.hpp"
#include "ftspan/spanner.hpp"

namespace ftspan {

// One random threshold per vertex, uniform in [0,1].
struct ThresholdAssignment {
    std::vector<double> t;
    uint64_t seed = 0;
};

ThresholdAssignment sample_thresholds(int n, uint64_t seed);

enum class AlphaMode { log_n, log_delta };

struct RoundingConfig {
    double c_alpha = 3.0;
    AlphaMode mode = AlphaMode::log_n;
    int max_attempts = 20;
    int max_resamples = 0;        // 0: defaults to 10 n^2
    double cost_cap_factor = 6.0; // accept when cost <= factor * alpha * LP*
    int diag_samples = 200;       // Monte-Carlo samples for the event-probability diagnostic
};

// alpha = c_alpha * ln n (log_n) or c_alpha * log2(max(Delta,2)) (log_delta)
double rounding_alpha(const Graph& g, const RoundingConfig& cfg);

// E' = all edges whose smaller endpoint threshold is at most alpha * x_e.
std::vector<EdgeId> round_thresholds(const Graph& g, const std::vector<double>& x, double alpha,
                                     const ThresholdAssignment& thresholds);

struct ApproxReport {
    double lp_value = 0.0;
    double alpha = 0.0;
    int attempts = 0;
    double cost = 0.0;
    double ratio = 0.0;
    uint64_t seed = 0;
    bool accepted = false;
};

struct ApproxResult {
    Spanner spanner;
    ApproxReport report;
};

struct RoundingError : SolveError {
    RoundingError(const std::string& msg, ApproxReport best)
        : SolveError(msg), best_attempt(best) {}
    ApproxReport best_attempt;  // the best rejected attempt
};

// Solve the covering LP, then retry threshold rounding until the output both
// passes the structural check and fits the cost cap. A precomputed fractional
// solution can be injected to skip the (deterministic) LP solve.
ApproxResult approx_ft2(std::shared_ptr<const Graph> g, int r, const RoundingConfig& cfg,
                        uint64_t seed, const FractionalSolution* lp = nullptr);

// --- bounded-degree variant -------------------------------------------------

// Bad events over a threshold assignment:
//   indices [0, E_live)          edge (u,v) unsatisfied: not rounded in and
//                                fewer than r+1 length-2 paths rounded in
//   indices [E_live, E_live + n) vertex u charged too much:
//                                Z_u^+ + Z_u^- > 4 alpha (sum out x + sum in x)
// where Z_u^+ counts outgoing edges (u,v) with T_v <= alpha x_(u,v) and Z_u^-
// counts incoming edges (v,u) with T_v <= alpha x_(v,u).
std::vector<int> occurring_events(const Graph& g, int r, const std::vector<double>& x,
                                  double alpha, const ThresholdAssignment& thresholds);

struct LllReport {
    double alpha = 0.0;
    int delta = 0;
    int resamples = 0;
    double cost = 0.0;
    double capacity_cost = 0.0;      // sum c_e x_e of the input capacities
    int dependency_degree = 0;       // diagnostic only
    double event_prob_estimate = 0;  // diagnostic only
    uint64_t seed = 0;
    std::vector<int> trace;          // resampled event indices, in order
};

struct LllResult {
    Spanner spanner;
    LllReport report;
    ThresholdAssignment thresholds;  // final assignment; zero events occur on it
};

// Resampling loop: draw all thresholds, then repeatedly pick the
// lowest-indexed occurring bad event and redraw exactly its variable set
// (for an edge event: the path midpoints plus both endpoints; for a vertex
// event: all in- and out-neighbors). Unit costs and max degree >= 2 required.
LllResult lll_round(std::shared_ptr<const Graph> g, int r, const std::vector<double>& x,
                    const RoundingConfig& cfg, uint64_t seed);

} // namespace ftspan
