#include "ftspan/ft_transform.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ftspan/errors.hpp"
#include "ftspan/rng.hpp"

namespace ftspan {

double default_sample_prob(int r) {
    if (r < 0) throw InputError("fault budget r must be nonnegative");
    if (r <= 1) return 0.5;
    return 1.0 - 1.0 / static_cast<double>(r);
}

int default_iterations(int n, int r, double c_iter) {
    if (r == 0) return 1;
    if (n < 2) throw InputError("need at least 2 vertices");
    if (r < 0) throw InputError("fault budget r must be nonnegative");
    // r = 1 keeps only half the vertices per iteration, so a fault set is
    // isolated with probability 1/8 and the cubic term gives no headroom;
    // a factor 4 restores the validity rate the r >= 2 counts deliver.
    double scale = (r == 1) ? 4.0 : std::pow(static_cast<double>(r), 3);
    double v = c_iter * scale * std::log(static_cast<double>(n));
    int it = static_cast<int>(std::ceil(v));
    return std::max(1, it);
}

ConversionConfig make_conversion_config(int n, int r, uint64_t seed, double c_iter) {
    ConversionConfig cfg;
    cfg.r = r;
    cfg.iterations = default_iterations(n, r, c_iter);
    cfg.sample_keep_prob = default_sample_prob(std::max(r, 1));
    cfg.seed = seed;
    cfg.c_iter = c_iter;
    return cfg;
}

Spanner ft_convert(std::shared_ptr<const Graph> g, int k, const ConversionConfig& cfg,
                   const BaseSpannerAlgorithm& base, ConversionStats* stats) {
    if (!g) throw InputError("null graph");
    if (cfg.r < 0) throw InputError("fault budget r must be nonnegative");
    if (cfg.r >= g->vertex_count() && cfg.r > 0)
        throw InputError("fault budget r must be smaller than the vertex count");
    if (cfg.iterations < 1) throw InputError("iterations must be >= 1");
    if (cfg.r >= 1 && !(cfg.sample_keep_prob > 0.0 && cfg.sample_keep_prob < 1.0))
        throw InputError("sample probability must be in (0,1) when r >= 1");

    std::set<EdgeId> union_edges;
    int iterations = (cfg.r == 0) ? 1 : cfg.iterations;
    if (stats) {
        stats->survivors_per_iteration.clear();
        stats->base_size_per_iteration.clear();
    }
    for (int it = 0; it < iterations; ++it) {
        FaultSet j;
        if (cfg.r >= 1) {
            Rng rng(cfg.seed ^ static_cast<uint64_t>(it));
            for (VertexId v = 0; v < g->vertex_count(); ++v)
                if (g->vertex_alive(v) && rng.next_bool(cfg.sample_keep_prob)) j.push_back(v);
        }
        auto sub = std::make_shared<Graph>(remove_vertices(*g, j));
        if (stats) stats->survivors_per_iteration.push_back(sub->alive_vertex_count());
        Spanner piece;
        try {
            piece = base.run(sub, k);
        } catch (const std::exception& ex) {
            throw SolveError("base algorithm '" + base.name + "' failed in iteration " +
                             std::to_string(it) + ": " + ex.what());
        }
        if (stats) stats->base_size_per_iteration.push_back(piece.size());
        union_edges.insert(piece.edge_ids.begin(), piece.edge_ids.end());
    }

    std::vector<EdgeId> ids(union_edges.begin(), union_edges.end());
    SpannerMeta meta{"ft-convert(" + base.name + ")", static_cast<double>(k), cfg.r, cfg.seed};
    return make_spanner(std::move(g), std::move(ids), std::move(meta));
}

Spanner ft_greedy(std::shared_ptr<const Graph> g, int k, int r, uint64_t seed, double c_iter,
                  ConversionStats* stats) {
    if (!g) throw InputError("null graph");
    ConversionConfig cfg = make_conversion_config(std::max(2, g->vertex_count()), r, seed, c_iter);
    Spanner s = ft_convert(std::move(g), k, cfg, greedy_base_algorithm(), stats);
    s.meta.algorithm = "ft-greedy";
    return s;
}

} // namespace ftspan
