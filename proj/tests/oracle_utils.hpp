#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library's search code: distances via Floyd-Warshall over explicit adjacency
// matrices, stretch checks straight from the definition.

#include <functional>
#include <limits>
#include <vector>

#include "ftspan/graph.hpp"
#include "ftspan/rng.hpp"

namespace refimpl {

constexpr double kInf = std::numeric_limits<double>::infinity();

// dist[u][v] over the given edge subset (all edges when mask empty), skipping
// blocked vertices.
inline std::vector<std::vector<double>> all_pairs(const ftspan::Graph& g,
                                                  const std::vector<char>& edge_mask = {},
                                                  const std::vector<char>& blocked = {}) {
    int n = g.vertex_count();
    std::vector<std::vector<double>> d(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), kInf));
    auto vertex_ok = [&](int v) {
        return g.vertex_alive(v) && (blocked.empty() || !blocked[static_cast<size_t>(v)]);
    };
    for (int v = 0; v < n; ++v)
        if (vertex_ok(v)) d[static_cast<size_t>(v)][static_cast<size_t>(v)] = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        if (!edge_mask.empty() && !edge_mask[static_cast<size_t>(e)]) continue;
        const auto& ed = g.edge(e);
        if (!vertex_ok(ed.tail) || !vertex_ok(ed.head)) continue;
        auto& cell = d[static_cast<size_t>(ed.tail)][static_cast<size_t>(ed.head)];
        cell = std::min(cell, ed.length);
        if (!g.directed()) {
            auto& rcell = d[static_cast<size_t>(ed.head)][static_cast<size_t>(ed.tail)];
            rcell = std::min(rcell, ed.length);
        }
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[static_cast<size_t>(i)][static_cast<size_t>(k)] + d[static_cast<size_t>(k)][static_cast<size_t>(j)] <
                    d[static_cast<size_t>(i)][static_cast<size_t>(j)])
                    d[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                        d[static_cast<size_t>(i)][static_cast<size_t>(k)] + d[static_cast<size_t>(k)][static_cast<size_t>(j)];
    return d;
}

// Straight-from-definition stretch check over host edges.
inline bool is_k_spanner(const ftspan::Graph& g, const std::vector<char>& edge_mask, double k) {
    auto dh = all_pairs(g, edge_mask);
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        const auto& ed = g.edge(e);
        if (dh[static_cast<size_t>(ed.tail)][static_cast<size_t>(ed.head)] > k * ed.length + 1e-9)
            return false;
    }
    return true;
}

// Definition-level fault tolerance check: every fault set of size <= r,
// every surviving host edge.
inline bool is_r_fault_tolerant_k_spanner(const ftspan::Graph& g, const std::vector<char>& edge_mask,
                                          double k, int r) {
    int n = g.vertex_count();
    std::vector<int> faults;
    std::function<bool(int, int)> rec = [&](int start, int remaining) -> bool {
        std::vector<char> blocked(static_cast<size_t>(n), 0);
        for (int v : faults) blocked[static_cast<size_t>(v)] = 1;
        auto dg = all_pairs(g, {}, blocked);
        auto dh = all_pairs(g, edge_mask, blocked);
        for (int e = 0; e < g.edge_count(); ++e) {
            if (!g.edge_alive(e)) continue;
            const auto& ed = g.edge(e);
            if (blocked[static_cast<size_t>(ed.tail)] || blocked[static_cast<size_t>(ed.head)]) continue;
            if (dh[static_cast<size_t>(ed.tail)][static_cast<size_t>(ed.head)] >
                k * dg[static_cast<size_t>(ed.tail)][static_cast<size_t>(ed.head)] + 1e-9)
                return false;
        }
        if (remaining == 0) return true;
        for (int v = start; v < n; ++v) {
            if (!g.vertex_alive(v)) continue;
            faults.push_back(v);
            if (!rec(v + 1, remaining - 1)) return false;
            faults.pop_back();
        }
        return true;
    };
    return rec(0, r);
}

// Random directed graph where each ordered pair gets an edge with the given
// probability; unit lengths and costs.
inline ftspan::Graph random_digraph(int n, double p, uint64_t seed) {
    ftspan::Rng rng(seed);
    std::vector<ftspan::Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && rng.next_bool(p)) edges.push_back({u, v, 1.0, 1.0});
    return ftspan::Graph(n, true, std::move(edges));
}

inline ftspan::Graph random_undirected(int n, double p, uint64_t seed) {
    ftspan::Rng rng(seed);
    std::vector<ftspan::Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.next_bool(p)) edges.push_back({u, v, 1.0, 1.0});
    return ftspan::Graph(n, false, std::move(edges));
}

} // namespace refimpl
