#include "ftspan/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>

#include "ftspan/errors.hpp"

namespace ftspan {

uint64_t fault_set_count(int n_alive, int r) {
    uint64_t total = 0;
    uint64_t c = 1;  // C(n, i)
    for (int i = 0; i <= std::min(r, n_alive); ++i) {
        if (i > 0) c = c * static_cast<uint64_t>(n_alive - i + 1) / static_cast<uint64_t>(i);
        total += c;
        if (total > (1ULL << 62)) return total;  // saturate, caller only compares
    }
    return total;
}

namespace {

// Visit subsets of `universe` of size exactly `size` in lexicographic order;
// stop early when the visitor returns false.
bool for_each_subset(const std::vector<VertexId>& universe, int size,
                     const std::function<bool(const FaultSet&)>& visit) {
    int n = static_cast<int>(universe.size());
    if (size > n) return true;
    std::vector<int> idx(static_cast<size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<size_t>(i)] = i;
    FaultSet f(static_cast<size_t>(size));
    while (true) {
        for (int i = 0; i < size; ++i) f[static_cast<size_t>(i)] = universe[static_cast<size_t>(idx[static_cast<size_t>(i)])];
        if (!visit(f)) return false;
        int i = size - 1;
        while (i >= 0 && idx[static_cast<size_t>(i)] == n - size + i) --i;
        if (i < 0) return true;
        ++idx[static_cast<size_t>(i)];
        for (int j = i + 1; j < size; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
}

} // namespace

FtVerifyResult verify_ft(const Graph& g, const Spanner& h, double k, int r,
                         uint64_t max_fault_sets) {
    if (k < 1) throw InputError("stretch k must be >= 1");
    if (r < 0) throw InputError("fault budget r must be nonnegative");
    if (h.host->vertex_count() != g.vertex_count() || h.host->edge_count() != g.edge_count())
        throw InputError("spanner host does not match graph");
    std::vector<VertexId> alive = g.alive_vertices();
    uint64_t count = fault_set_count(static_cast<int>(alive.size()), r);
    if (count > max_fault_sets)
        throw BudgetError("too large to enumerate: " + std::to_string(count) +
                          " fault sets exceed budget " + std::to_string(max_fault_sets));

    std::vector<char> spanner_mask = h.edge_mask();
    std::vector<char> blocked(static_cast<size_t>(g.vertex_count()), 0);
    FtVerifyResult result;
    const double slack = 1 + 1e-12;

    auto check = [&](const FaultSet& f) -> bool {
        for (VertexId v : f) blocked[static_cast<size_t>(v)] = 1;
        SearchMask in_g{nullptr, &blocked};
        SearchMask in_h{&spanner_mask, &blocked};
        // Per-tail distance caches for this fault set.
        std::vector<std::vector<double>> dg(static_cast<size_t>(g.vertex_count()));
        std::vector<std::vector<double>> dh(static_cast<size_t>(g.vertex_count()));
        bool ok = true;
        for (EdgeId e = 0; e < g.edge_count() && ok; ++e) {
            if (!g.edge_alive(e)) continue;
            const Edge& ed = g.edge(e);
            if (blocked[static_cast<size_t>(ed.tail)] || blocked[static_cast<size_t>(ed.head)]) continue;
            auto& row_g = dg[static_cast<size_t>(ed.tail)];
            if (row_g.empty()) row_g = single_source_distances(g, ed.tail, in_g);
            auto& row_h = dh[static_cast<size_t>(ed.tail)];
            if (row_h.empty()) row_h = single_source_distances(g, ed.tail, in_h);
            double need = k * row_g[static_cast<size_t>(ed.head)];
            if (row_h[static_cast<size_t>(ed.head)] > need * slack) {
                result.ok = false;
                result.witness_faults = f;
                result.witness_edge = e;
                ok = false;
            }
        }
        for (VertexId v : f) blocked[static_cast<size_t>(v)] = 0;
        return ok;
    };

    for (int size = 0; size <= std::min<int>(r, static_cast<int>(alive.size())); ++size)
        if (!for_each_subset(alive, size, check)) break;
    return result;
}

FtVerifyResult verify_ft2_char(const Graph& g, const Spanner& h, int r) {
    if (!g.directed()) throw InputError("verify_ft2_char expects a directed graph");
    if (!g.unit_lengths()) throw InputError("verify_ft2_char expects unit edge lengths");
    if (r < 0) throw InputError("fault budget r must be nonnegative");
    if (h.host->vertex_count() != g.vertex_count() || h.host->edge_count() != g.edge_count())
        throw InputError("spanner host does not match graph");
    FtVerifyResult result;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        if (h.contains(e)) continue;
        const Edge& ed = g.edge(e);
        int paths = 0;
        for (const Path2& p : length2_paths(g, ed.tail, ed.head)) {
            EdgeId e1 = *g.find_edge(p.tail, p.mid);
            EdgeId e2 = *g.find_edge(p.mid, p.head);
            if (h.contains(e1) && h.contains(e2)) ++paths;
            if (paths > r) break;
        }
        if (paths <= r) {
            result.ok = false;
            result.witness_edge = e;
            return result;
        }
    }
    return result;
}

namespace {

struct DemandTable {
    std::vector<EdgeId> live;                       // bit position -> edge id
    std::vector<int> bit_of;                        // edge id -> bit position (-1 dead)
    std::vector<double> bit_cost;                   // cost per bit
    std::vector<std::vector<uint64_t>> mid_masks;   // per demand bit: 2-edge masks
};

DemandTable build_demand_table(const Graph& g) {
    DemandTable t;
    t.bit_of.assign(static_cast<size_t>(g.edge_count()), -1);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        t.bit_of[static_cast<size_t>(e)] = static_cast<int>(t.live.size());
        t.live.push_back(e);
        t.bit_cost.push_back(g.edge(e).cost);
    }
    t.mid_masks.resize(t.live.size());
    for (size_t b = 0; b < t.live.size(); ++b) {
        const Edge& ed = g.edge(t.live[b]);
        for (const Path2& p : length2_paths(g, ed.tail, ed.head)) {
            int b1 = t.bit_of[static_cast<size_t>(*g.find_edge(p.tail, p.mid))];
            int b2 = t.bit_of[static_cast<size_t>(*g.find_edge(p.mid, p.head))];
            t.mid_masks[b].push_back((1ULL << b1) | (1ULL << b2));
        }
    }
    return t;
}

bool mask_feasible(const DemandTable& t, uint64_t s, int r) {
    for (size_t b = 0; b < t.live.size(); ++b) {
        if (s & (1ULL << b)) continue;
        int paths = 0;
        for (uint64_t m : t.mid_masks[b]) {
            if ((s & m) == m && ++paths > r) break;
        }
        if (paths <= r) return false;
    }
    return true;
}

// Lexicographic order on edge sets viewed as sorted id sequences.
bool mask_lex_less(uint64_t a, uint64_t b) {
    if (a == b) return false;
    uint64_t diff = a ^ b;
    int k = std::countr_zero(diff);
    if (a & (1ULL << k)) return (b >> k) != 0;  // a has the smaller element, unless b ended
    return (a >> k) == 0;                       // b has it; a wins only as a strict prefix
}

std::vector<EdgeId> mask_to_edges(const DemandTable& t, uint64_t s) {
    std::vector<EdgeId> out;
    for (size_t b = 0; b < t.live.size(); ++b)
        if (s & (1ULL << b)) out.push_back(t.live[b]);
    return out;
}

} // namespace

OptimumResult brute_optimum_ft2(const Graph& g, int r) {
    if (!g.directed()) throw InputError("brute_optimum_ft2 expects a directed graph");
    if (r < 0) throw InputError("fault budget r must be nonnegative");
    DemandTable t = build_demand_table(g);
    size_t m = t.live.size();
    if (m > 22)
        throw BudgetError("brute_optimum_ft2 is limited to 22 edges, got " + std::to_string(m));

    double best_cost = kInfDist;
    uint64_t best_mask = 0;
    bool have_best = false;
    uint64_t limit = 1ULL << m;
    for (uint64_t s = 0; s < limit; ++s) {
        double cost = 0;
        for (uint64_t rest = s; rest;) {
            int b = std::countr_zero(rest);
            rest &= rest - 1;
            cost += t.bit_cost[static_cast<size_t>(b)];
        }
        if (have_best) {
            if (cost > best_cost + 1e-12) continue;
            bool tie = std::fabs(cost - best_cost) <= 1e-12;
            if (tie && !mask_lex_less(s, best_mask)) continue;
        }
        if (!mask_feasible(t, s, r)) continue;
        best_cost = std::min(best_cost, cost);
        best_mask = s;
        have_best = true;
    }
    OptimumResult res;
    res.cost = have_best ? best_cost : 0.0;
    res.edges = mask_to_edges(t, best_mask);
    res.nodes_explored = limit;
    return res;
}

namespace {

// Branch and bound over edge decisions with unit-propagation style forcing
// and degree-deficit lower bounds.
struct BranchSolver {
    const DemandTable& t;
    const Graph& g;
    int r;
    uint64_t max_nodes;
    uint64_t nodes = 0;
    double best_cost = kInfDist;
    uint64_t best_mask = 0;

    // per-vertex bit masks of live in/out edges
    std::vector<uint64_t> in_mask, out_mask;

    BranchSolver(const DemandTable& table, const Graph& graph, int faults, uint64_t cap)
        : t(table), g(graph), r(faults), max_nodes(cap) {
        in_mask.assign(static_cast<size_t>(g.vertex_count()), 0);
        out_mask.assign(static_cast<size_t>(g.vertex_count()), 0);
        for (size_t b = 0; b < t.live.size(); ++b) {
            const Edge& ed = g.edge(t.live[b]);
            out_mask[static_cast<size_t>(ed.tail)] |= 1ULL << b;
            in_mask[static_cast<size_t>(ed.head)] |= 1ULL << b;
        }
    }

    double mask_cost(uint64_t s) const {
        double c = 0;
        while (s) {
            int b = std::countr_zero(s);
            s &= s - 1;
            c += t.bit_cost[static_cast<size_t>(b)];
        }
        return c;
    }

    // returns false when the (inc, exc) state is contradictory
    bool propagate(uint64_t& inc, uint64_t& exc) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t b = 0; b < t.live.size(); ++b) {
                uint64_t bit = 1ULL << b;
                if (inc & bit) continue;
                int secured = 0, available = 0;
                for (uint64_t m : t.mid_masks[b]) {
                    if (m & exc) continue;
                    ++available;
                    if ((m & inc) == m) ++secured;
                }
                if (secured >= r + 1) continue;
                if (!(exc & bit)) {
                    if (available < r + 1) {  // cannot be covered by paths alone
                        inc |= bit;
                        changed = true;
                    }
                    continue;
                }
                // edge excluded: must reach r+1 secured paths
                if (available < r + 1) return false;
                if (available == r + 1) {
                    for (uint64_t m : t.mid_masks[b]) {
                        if (m & exc) continue;
                        if ((inc & m) != m) {
                            inc |= m;
                            changed = true;
                        }
                    }
                    if (inc & exc) return false;
                }
            }
            if (inc & exc) return false;
        }
        return true;
    }

    // Lower bound on the total cost of any completion of (inc, exc).
    double lower_bound(uint64_t inc, uint64_t exc) const {
        double base = mask_cost(inc);
        double extra_in = 0, extra_out = 0;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            for (int side = 0; side < 2; ++side) {
                uint64_t all = side ? out_mask[static_cast<size_t>(v)] : in_mask[static_cast<size_t>(v)];
                if (!all) continue;
                int total = std::popcount(all);
                int req = (all & exc) ? r + 1 : std::min(total, r + 1);
                int have = std::popcount(all & inc);
                int deficit = req - have;
                if (deficit <= 0) continue;
                uint64_t undecided = all & ~inc & ~exc;
                if (std::popcount(undecided) < deficit) return kInfDist;  // infeasible branch
                // cheapest `deficit` undecided edges incident on this side
                std::array<double, 64> costs{};
                int cnt = 0;
                uint64_t u = undecided;
                while (u) {
                    int b = std::countr_zero(u);
                    u &= u - 1;
                    costs[static_cast<size_t>(cnt++)] = t.bit_cost[static_cast<size_t>(b)];
                }
                std::sort(costs.begin(), costs.begin() + cnt);
                double add = 0;
                for (int i = 0; i < deficit; ++i) add += costs[static_cast<size_t>(i)];
                (side ? extra_out : extra_in) += add;
            }
        }
        return base + std::max(extra_in, extra_out);
    }

    // -1 when every demand is satisfied; otherwise the most constrained one.
    int pick_demand(uint64_t inc, uint64_t exc) const {
        int best = -1, best_avail = 1 << 30;
        for (size_t b = 0; b < t.live.size(); ++b) {
            uint64_t bit = 1ULL << b;
            if (inc & bit) continue;
            int secured = 0, available = 0;
            for (uint64_t m : t.mid_masks[b]) {
                if (m & exc) continue;
                ++available;
                if ((m & inc) == m) ++secured;
            }
            if (secured >= r + 1) continue;
            int slack = available + ((exc & bit) ? 0 : 1);
            if (slack < best_avail) {
                best_avail = slack;
                best = static_cast<int>(b);
            }
        }
        return best;
    }

    void search(uint64_t inc, uint64_t exc) {
        if (++nodes > max_nodes)
            throw BudgetError("exact_optimum_ft2 search exceeded node budget");
        if (!propagate(inc, exc)) return;
        if (lower_bound(inc, exc) >= best_cost - 1e-12) return;
        int d = pick_demand(inc, exc);
        if (d < 0) {
            double c = mask_cost(inc);
            if (c < best_cost - 1e-12) {
                best_cost = c;
                best_mask = inc;
            }
            return;
        }
        uint64_t bit = 1ULL << d;
        if (!(exc & bit)) {
            search(inc | bit, exc);
            search(inc, exc | bit);
            return;
        }
        // demand's edge already excluded; branch on an undecided edge of its
        // lowest unsecured available midpoint
        for (uint64_t m : t.mid_masks[static_cast<size_t>(d)]) {
            if (m & exc) continue;
            uint64_t undecided = m & ~inc;
            if (!undecided) continue;
            uint64_t pick = undecided & (~undecided + 1);
            search(inc | pick, exc);
            search(inc, exc | pick);
            return;
        }
    }

    // greedy feasible solution to seed the incumbent
    uint64_t greedy_seed() const {
        uint64_t s = 0;
        for (size_t b = 0; b < t.live.size(); ++b) {
            uint64_t bit = 1ULL << b;
            if (s & bit) continue;
            int secured = 0;
            for (uint64_t m : t.mid_masks[b])
                if ((s & m) == m) ++secured;
            if (secured >= r + 1) continue;
            // compare: include the edge vs complete the cheapest midpoints
            std::vector<double> completions;
            for (uint64_t m : t.mid_masks[b]) {
                if ((s & m) == m) continue;
                completions.push_back(mask_cost(m & ~s));
            }
            std::sort(completions.begin(), completions.end());
            int need = r + 1 - secured;
            double path_cost = 0;
            bool can_path = static_cast<int>(completions.size()) >= need;
            if (can_path)
                for (int i = 0; i < need; ++i) path_cost += completions[static_cast<size_t>(i)];
            if (can_path && path_cost < t.bit_cost[b]) {
                // actually add those midpoints
                int added = 0;
                std::vector<std::pair<double, uint64_t>> opts;
                for (uint64_t m : t.mid_masks[b])
                    if ((s & m) != m) opts.push_back({mask_cost(m & ~s), m});
                std::sort(opts.begin(), opts.end(),
                          [](const auto& a, const auto& c) { return a.first < c.first; });
                for (auto& [w, m] : opts) {
                    if (added >= need) break;
                    s |= m;
                    ++added;
                }
            } else {
                s |= bit;
            }
        }
        // drop redundant edges, most expensive first
        std::vector<int> bits;
        for (size_t b = 0; b < t.live.size(); ++b)
            if (s & (1ULL << b)) bits.push_back(static_cast<int>(b));
        std::sort(bits.begin(), bits.end(), [&](int a, int c) {
            return t.bit_cost[static_cast<size_t>(a)] > t.bit_cost[static_cast<size_t>(c)];
        });
        for (int b : bits) {
            uint64_t without = s & ~(1ULL << b);
            if (mask_feasible(t, without, r)) s = without;
        }
        return s;
    }
};

} // namespace

OptimumResult exact_optimum_ft2(const Graph& g, int r, uint64_t max_nodes) {
    if (!g.directed()) throw InputError("exact_optimum_ft2 expects a directed graph");
    if (r < 0) throw InputError("fault budget r must be nonnegative");
    DemandTable t = build_demand_table(g);
    if (t.live.size() > 63)
        throw BudgetError("exact_optimum_ft2 is limited to 63 edges, got " +
                          std::to_string(t.live.size()));
    BranchSolver solver(t, g, r, max_nodes);
    uint64_t seed = solver.greedy_seed();
    solver.best_cost = solver.mask_cost(seed);
    solver.best_mask = seed;
    solver.search(0, 0);
    OptimumResult res;
    res.cost = solver.best_cost;
    res.edges = mask_to_edges(t, solver.best_mask);
    res.nodes_explored = solver.nodes;
    return res;
}

} // namespace ftspan
