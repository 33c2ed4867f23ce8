#pragma once

#include <cstdint>
#include <vector>

#include "ftspan/spanner.hpp"

namespace ftspan {

// Parameters of the oversampling conversion: run the base algorithm
// `iterations` times, each time on the graph minus a random vertex set J
// sampled by keeping each vertex out of the run with probability
// sample_keep_prob, and take the union of the outputs.
struct ConversionConfig {
    int r = 0;
    int iterations = 1;
    double sample_keep_prob = 0.5;  // probability of joining J
    uint64_t seed = 0;
    double c_iter = 4.0;
};

// Default probability of joining J: 1 - 1/r for r >= 2, 1/2 for r = 1.
double default_sample_prob(int r);

// ceil(c_iter * r^3 * ln n), at least 1; r = 0 degenerates to a single run.
int default_iterations(int n, int r, double c_iter);

ConversionConfig make_conversion_config(int n, int r, uint64_t seed, double c_iter = 4.0);

// Per-iteration record used by size/scaling diagnostics.
struct ConversionStats {
    std::vector<int> survivors_per_iteration;  // |V \ J| per iteration
    std::vector<int> base_size_per_iteration;  // base output size per iteration
};

// The conversion itself. Each iteration derives its own rng stream as
// seed ^ iteration index, so iterations are independent and the union is
// order-insensitive; running them in parallel would give the same result.
Spanner ft_convert(std::shared_ptr<const Graph> g, int k, const ConversionConfig& cfg,
                   const BaseSpannerAlgorithm& base, ConversionStats* stats = nullptr);

// ft_convert with the greedy base and default iteration count.
Spanner ft_greedy(std::shared_ptr<const Graph> g, int k, int r, uint64_t seed,
                  double c_iter = 4.0, ConversionStats* stats = nullptr);

} // namespace ftspan
