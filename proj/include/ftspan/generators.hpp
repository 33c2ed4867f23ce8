#pragma once

#include <cstdint>

#include "ftspan/graph.hpp"

namespace ftspan {

Graph gen_complete(int n, bool directed);
Graph gen_gnp(int n, double prob, bool directed, uint64_t seed);
Graph gen_grid(int width, int height);
Graph gen_path(int n);
// directed circulant: arcs u -> (u + j) mod n for j = 1..d
Graph gen_regular_circulant(int n, int d);
Graph gen_petersen();
// one expensive direct edge u -> v plus r cheap two-hop detours through
// w_1..w_r; the worst case for the cover relaxation without cuts
Graph gen_gap_fixture(double expensive_cost, int r);

} // namespace ftspan
