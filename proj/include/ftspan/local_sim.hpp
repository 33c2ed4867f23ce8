#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ftspan/lp_ft2.hpp"
#include "ftspan/rounding.hpp"
#include "ftspan/spanner.hpp"

namespace ftspan {

// --- round-synchronous message-passing simulator -----------------------------
//
// Lockstep rounds over bidirectional channels (one per graph edge, direction
// ignored). In round t every active node first emits messages from its current
// state, then consumes everything addressed to it this round. Message payloads
// are opaque byte strings of unbounded size. After t rounds a node has seen
// exactly its radius-t ball.

using Payload = std::string;

struct Msg {
    VertexId from;
    Payload data;
};

class NodeProgram {
public:
    struct Env {
        VertexId id = -1;
        std::vector<VertexId> neighbors;  // alive undirected neighbors, ascending
        uint64_t seed = 0;                // per-node stream root
    };
    virtual ~NodeProgram() = default;
    // true = nothing to do, halt before round 1
    virtual bool init(const Env& env) = 0;
    virtual void send(int round, std::vector<std::pair<VertexId, Payload>>& out) = 0;
    // true = done after this round
    virtual bool receive(int round, const std::vector<Msg>& inbox) = 0;
    virtual Payload output() const = 0;
};

struct SimTrace {
    int rounds_used = 0;
    std::vector<int> messages_per_round;
    std::vector<uint64_t> bytes_per_round;
    std::vector<Payload> outputs;  // one per node (empty for absent nodes)
    std::string to_jsonl() const;  // one record per round plus a summary record
};

// Runs until every node is done or max_rounds is hit. Sending to a
// non-neighbor raises SimulationFault. Fully deterministic given the seed.
SimTrace run_simulation(const Graph& g, std::vector<std::unique_ptr<NodeProgram>>& programs,
                        int max_rounds, uint64_t seed);

// --- padded decomposition -----------------------------------------------------

struct Partition {
    // cluster id = the center's vertex id; -1 for absent vertices
    std::vector<int> cluster_of;
    struct Cluster {
        VertexId center = -1;  // may lie outside its own cluster
        std::vector<VertexId> members;
    };
    std::vector<Cluster> clusters;  // ascending center id
};

Partition partition_from_centers(const Graph& g, const std::vector<int>& center_of);

// Every vertex draws a truncated geometric radius and floods its id that many
// hops; everyone joins the smallest id it heard (its own id counts at distance
// zero, so coverage is total). Runs through the simulator; the trace lands in
// *trace when given. Members end up within r_cap hops of their center.
Partition padded_decomposition(const Graph& g, double p_geom, int r_cap, uint64_t seed,
                               SimTrace* trace = nullptr);

int default_decomposition_radius(int n);  // ceil(4 ln n), at least 1

// N(x) and x all in one cluster?
bool vertex_padded(const Graph& g, const Partition& p, VertexId x);

// max over member pairs (and member-center pairs) of hop distance in the host
int cluster_weak_diameter(const Graph& g, const Partition::Cluster& c);

// --- cluster LPs ---------------------------------------------------------------

struct ClusterLp {
    std::shared_ptr<Graph> graph;  // host id space; edges outside E(C) carry cost 0
    std::vector<EdgeId> host_edge; // cluster edge id -> host edge id
    std::vector<char> in_cluster;  // per cluster edge: both endpoints in C
};

// Subgraph seen by one cluster: E(C) keeps original costs, boundary edges cost
// 0. include_outside_edges additionally keeps edges between two neighbors of C
// (also at cost 0); they are free to satisfy and do not change the optimum.
ClusterLp build_cluster_graph(const Graph& g, const Partition& part, int cluster_index,
                              bool include_outside_edges = true);

LpModel lp_for_cluster(const Graph& g, const Partition& part, int cluster_index, int r);

// --- distributed 2-spanner approximation ---------------------------------------

struct DistFt2Options {
    int t = 0;             // LP averaging iterations; 0 = ceil(c_t ln n)
    double c_t = 4.0;
    int r_cap = 0;         // decomposition radius cap; 0 = ceil(4 ln n)
    double p_geom = 0.1;
    RoundingConfig rounding;
    double lp_eps = 1e-7;
    int lp_max_cut_rounds = 50;
};

struct DistFt2Report {
    double lp_central = 0.0;   // optimal value of the whole-graph LP
    double xtilde_cost = 0.0;  // sum of c_e * averaged capacities
    double cost = 0.0;
    double ratio = 0.0;        // cost / lp_central
    double alpha = 0.0;
    int iterations = 0;
    int rounds_used = 0;
    bool verified = false;
    int residual_violated_cuts = 0;   // separation on (xtilde, averaged flows)
    double residual_violation = 0.0;  // largest violation magnitude
    std::vector<int> clusters_per_iteration;
    uint64_t seed = 0;
};

struct DistFt2Result {
    Spanner spanner;
    SimTrace trace;
    DistFt2Report report;
    std::vector<double> xtilde;             // per host edge
    std::vector<Partition> partitions;      // per iteration
};

// t rounds of {decompose, gather each cluster at its center, solve the
// cluster LP there, flood the solution back}, then average capacities as
// min(1, 4/t * sum over co-clustered iterations) and round once with local
// thresholds. All communication runs through the simulator and is counted.
DistFt2Result distributed_ft2(std::shared_ptr<const Graph> g, int r, const DistFt2Options& opts,
                              uint64_t seed, const FractionalSolution* central_lp = nullptr);

// --- distributed conversion ----------------------------------------------------

// A distributed base spanner routine with a fixed round horizon. Each node's
// output lists the edges it selected, as vertex-id pairs.
struct DistributedBase {
    std::string name;
    int rounds = 0;
    std::function<std::unique_ptr<NodeProgram>(int k)> make;
};

// Stand-in base: flood ids floor(k/2) hops recording paths, join the smallest
// id seen, buy the path to it, and buy every edge crossing two clusters.
// Valid for odd k >= 3 on unit-length graphs; its size is measured, not
// guaranteed.
DistributedBase clustering_base_program(int k);

struct DistConvertResult {
    Spanner spanner;
    SimTrace trace;
    int rounds_per_iteration = 0;
};

// Per iteration every vertex joins the sampled fault set J with probability
// 1 - 1/r (1/2 when r = 1; never when r = 0), the base program runs on the
// survivors, and the selections accumulate.
DistConvertResult distributed_ft_convert(std::shared_ptr<const Graph> g, int k, int r,
                                         int iterations, uint64_t seed,
                                         const DistributedBase& base);

} // namespace ftspan
