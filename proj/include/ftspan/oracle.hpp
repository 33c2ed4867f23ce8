#pragma once

#include <cstdint>
#include <vector>

#include "ftspan/spanner.hpp"

namespace ftspan {

struct FtVerifyResult {
    bool ok = true;
    FaultSet witness_faults;   // meaningful when !ok
    EdgeId witness_edge = -1;  // meaningful when !ok
};

// Ground truth by exhaustive enumeration of every fault set F with |F| <= r:
// h must k-span g \ F for each of them. Refuses to run (BudgetError) when the
// number of fault sets exceeds the budget; it never samples.
FtVerifyResult verify_ft(const Graph& g, const Spanner& h, double k, int r,
                         uint64_t max_fault_sets = 1000000);

// Number of fault sets verify_ft would enumerate.
uint64_t fault_set_count(int n_alive, int r);

// Characterization check for stretch 2 on directed unit-length graphs: every
// edge is in h or has at least r+1 length-2 paths inside h. Agrees with
// verify_ft(g, h, 2, r) on every input.
FtVerifyResult verify_ft2_char(const Graph& g, const Spanner& h, int r);

struct OptimumResult {
    double cost = 0.0;
    std::vector<EdgeId> edges;
    uint64_t nodes_explored = 0;
};

// Exact minimum-cost subgraph passing verify_ft2_char, by full 2^|E|
// enumeration; witness is the lexicographically least optimum. Guarded to
// |E| <= 22 live edges.
OptimumResult brute_optimum_ft2(const Graph& g, int r);

// Same optimum value via branch and bound with combinatorial lower bounds;
// reaches instances the plain enumerator cannot (up to 64 edges). Witness is
// deterministic but not necessarily lexicographically least.
OptimumResult exact_optimum_ft2(const Graph& g, int r, uint64_t max_nodes = 400000000ULL);

} // namespace ftspan
