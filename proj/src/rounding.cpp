#include "ftspan/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ftspan/oracle.hpp"
#include "ftspan/rng.hpp"

namespace ftspan {

ThresholdAssignment sample_thresholds(int n, uint64_t seed) {
    ThresholdAssignment t;
    t.seed = seed;
    t.t.resize(static_cast<size_t>(n));
    Rng rng(seed);
    for (double& v : t.t) v = rng.next_unit();
    return t;
}

double rounding_alpha(const Graph& g, const RoundingConfig& cfg) {
    if (cfg.mode == AlphaMode::log_n)
        return cfg.c_alpha * std::log(static_cast<double>(std::max(2, g.vertex_count())));
    return cfg.c_alpha * std::log2(static_cast<double>(std::max(2, g.max_degree())));
}

std::vector<EdgeId> round_thresholds(const Graph& g, const std::vector<double>& x, double alpha,
                                     const ThresholdAssignment& thresholds) {
    if (static_cast<int>(x.size()) != g.edge_count())
        throw InputError("capacity vector size does not match edge count");
    if (static_cast<int>(thresholds.t.size()) != g.vertex_count())
        throw InputError("threshold vector size does not match vertex count");
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        const Edge& ed = g.edge(e);
        double tmin = std::min(thresholds.t[static_cast<size_t>(ed.tail)],
                               thresholds.t[static_cast<size_t>(ed.head)]);
        if (tmin <= alpha * x[static_cast<size_t>(e)]) out.push_back(e);
    }
    return out;
}

ApproxResult approx_ft2(std::shared_ptr<const Graph> g, int r, const RoundingConfig& cfg,
                        uint64_t seed, const FractionalSolution* lp) {
    if (!g) throw InputError("null graph");
    if (r > g->vertex_count()) throw InputError("fault budget r exceeds vertex count");
    FractionalSolution local;
    if (!lp) {
        local = solve_lp(g, r);
        lp = &local;
    }
    double alpha = rounding_alpha(*g, cfg);
    double cap = cfg.cost_cap_factor * alpha * lp->objective;

    ApproxReport best;
    bool have_best = false;
    Spanner best_spanner;
    for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        ThresholdAssignment t =
            sample_thresholds(g->vertex_count(), derive_seed(seed, 0x7468, static_cast<uint64_t>(attempt)));
        std::vector<EdgeId> picked = round_thresholds(*g, lp->x, alpha, t);
        Spanner s = make_spanner(g, std::move(picked), SpannerMeta{"approx-ft2", 2.0, r, seed});
        double cost = s.total_cost();
        bool valid = verify_ft2_char(*g, s, r).ok;
        ApproxReport rep;
        rep.lp_value = lp->objective;
        rep.alpha = alpha;
        rep.attempts = attempt;
        rep.cost = cost;
        rep.ratio = lp->objective > 0 ? cost / lp->objective : 0.0;
        rep.seed = seed;
        if (valid && cost <= cap + 1e-9) {
            rep.accepted = true;
            return ApproxResult{std::move(s), rep};
        }
        if (!have_best || (valid && cost < best.cost)) {
            best = rep;
            best_spanner = std::move(s);
            have_best = true;
        }
    }
    std::ostringstream msg;
    msg << "rounding attempts exhausted after " << cfg.max_attempts << " tries (cap "
        << cap << ", best cost " << best.cost << ")";
    throw RoundingError(msg.str(), best);
}

namespace {

struct EventTable {
    std::vector<EdgeId> demand_edges;  // live edges ascending; event index space
    std::vector<std::vector<std::pair<EdgeId, EdgeId>>> path_edges;  // per demand
    std::vector<std::vector<VertexId>> resample_vars;                // per event
    int edge_events = 0;
    int vertex_events = 0;
};

EventTable build_event_table(const Graph& g) {
    EventTable t;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        t.demand_edges.push_back(e);
        const Edge& ed = g.edge(e);
        std::vector<std::pair<EdgeId, EdgeId>> pe;
        std::set<VertexId> vars;
        for (const Path2& p : length2_paths(g, ed.tail, ed.head)) {
            pe.push_back({*g.find_edge(p.tail, p.mid), *g.find_edge(p.mid, p.head)});
            vars.insert(p.mid);
        }
        // the inclusion rule for (u,v) reads both endpoint thresholds, so both
        // are resampled along with the midpoints
        vars.insert(ed.tail);
        vars.insert(ed.head);
        t.path_edges.push_back(std::move(pe));
        t.resample_vars.push_back({vars.begin(), vars.end()});
    }
    t.edge_events = static_cast<int>(t.demand_edges.size());
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        std::set<VertexId> vars;
        if (g.vertex_alive(u)) {
            for (auto [v, e] : g.out_arcs(u)) vars.insert(v);
            for (auto [v, e] : g.in_arcs(u)) vars.insert(v);
        }
        t.resample_vars.push_back({vars.begin(), vars.end()});
        ++t.vertex_events;
    }
    return t;
}

std::vector<int> occurring_from_table(const Graph& g, const EventTable& t, int r,
                                      const std::vector<double>& x, double alpha,
                                      const ThresholdAssignment& th) {
    std::vector<int> occ;
    std::vector<char> in_eprime(static_cast<size_t>(g.edge_count()), 0);
    for (EdgeId e : round_thresholds(g, x, alpha, th)) in_eprime[static_cast<size_t>(e)] = 1;
    for (int i = 0; i < t.edge_events; ++i) {
        EdgeId e = t.demand_edges[static_cast<size_t>(i)];
        if (in_eprime[static_cast<size_t>(e)]) continue;
        int paths = 0;
        for (auto [e1, e2] : t.path_edges[static_cast<size_t>(i)]) {
            if (in_eprime[static_cast<size_t>(e1)] && in_eprime[static_cast<size_t>(e2)] && ++paths > r) break;
        }
        if (paths <= r) occ.push_back(i);
    }
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        if (!g.vertex_alive(u)) continue;
        double xsum = 0.0;
        int z = 0;
        for (auto [v, e] : g.out_arcs(u)) {
            xsum += x[static_cast<size_t>(e)];
            if (th.t[static_cast<size_t>(v)] <= alpha * x[static_cast<size_t>(e)]) ++z;
        }
        for (auto [v, e] : g.in_arcs(u)) {
            xsum += x[static_cast<size_t>(e)];
            if (th.t[static_cast<size_t>(v)] <= alpha * x[static_cast<size_t>(e)]) ++z;
        }
        if (static_cast<double>(z) > 4.0 * alpha * xsum) occ.push_back(t.edge_events + u);
    }
    return occ;
}

} // namespace

std::vector<int> occurring_events(const Graph& g, int r, const std::vector<double>& x,
                                  double alpha, const ThresholdAssignment& thresholds) {
    EventTable t = build_event_table(g);
    return occurring_from_table(g, t, r, x, alpha, thresholds);
}

LllResult lll_round(std::shared_ptr<const Graph> g, int r, const std::vector<double>& x,
                    const RoundingConfig& cfg, uint64_t seed) {
    if (!g) throw InputError("null graph");
    if (!g->directed()) throw InputError("lll_round expects a directed graph");
    if (!g->unit_lengths()) throw InputError("lll_round expects unit edge lengths");
    if (!g->unit_costs()) throw InputError("lll_round expects unit edge costs");
    int delta = g->max_degree();
    if (delta < 2) throw InputError("lll_round expects maximum degree >= 2");
    if (static_cast<int>(x.size()) != g->edge_count())
        throw InputError("capacity vector size does not match edge count");

    RoundingConfig local = cfg;
    if (local.mode != AlphaMode::log_delta) local.mode = AlphaMode::log_delta;
    double alpha = rounding_alpha(*g, local);
    int n = g->vertex_count();
    int max_resamples = cfg.max_resamples > 0 ? cfg.max_resamples : 10 * n * n;

    EventTable table = build_event_table(*g);
    ThresholdAssignment th = sample_thresholds(n, derive_seed(seed, 0x6c6c6c));
    Rng resample_rng(derive_seed(seed, 0x726573));

    LllReport rep;
    rep.alpha = alpha;
    rep.delta = delta;
    rep.seed = seed;

    while (true) {
        std::vector<int> occ = occurring_from_table(*g, table, r, x, alpha, th);
        if (occ.empty()) break;
        int ev = occ.front();  // lowest index: edge events first, then vertex events
        if (rep.resamples >= max_resamples) {
            std::ostringstream msg;
            msg << "resample budget " << max_resamples << " exhausted with "
                << occ.size() << " events still occurring";
            throw SolveError(msg.str());
        }
        for (VertexId v : table.resample_vars[static_cast<size_t>(ev)])
            th.t[static_cast<size_t>(v)] = resample_rng.next_unit();
        rep.trace.push_back(ev);
        ++rep.resamples;
    }

    std::vector<EdgeId> picked = round_thresholds(*g, x, alpha, th);
    Spanner s = make_spanner(g, std::move(picked), SpannerMeta{"lll-ft2", 2.0, r, seed});
    rep.cost = s.total_cost();
    for (EdgeId e = 0; e < g->edge_count(); ++e)
        if (g->edge_alive(e)) rep.capacity_cost += g->edge(e).cost * x[static_cast<size_t>(e)];

    // dependency-graph degree and empirical event probability, reported as
    // diagnostics; nothing is asserted about them
    int d = 0;
    int total_events = table.edge_events + table.vertex_events;
    for (int i = 0; i < total_events; ++i) {
        const auto& vi = table.resample_vars[static_cast<size_t>(i)];
        if (vi.empty()) continue;
        int deg = 0;
        for (int j = 0; j < total_events; ++j) {
            if (i == j) continue;
            const auto& vj = table.resample_vars[static_cast<size_t>(j)];
            bool share = std::find_first_of(vi.begin(), vi.end(), vj.begin(), vj.end()) != vi.end();
            if (share) ++deg;
        }
        d = std::max(d, deg);
    }
    rep.dependency_degree = d;
    if (cfg.diag_samples > 0) {
        std::vector<int> hits(static_cast<size_t>(total_events), 0);
        for (int s_i = 0; s_i < cfg.diag_samples; ++s_i) {
            ThresholdAssignment sample =
                sample_thresholds(n, derive_seed(seed, 0x64696167, static_cast<uint64_t>(s_i)));
            for (int ev : occurring_from_table(*g, table, r, x, alpha, sample))
                ++hits[static_cast<size_t>(ev)];
        }
        int worst = 0;
        for (int h : hits) worst = std::max(worst, h);
        rep.event_prob_estimate = static_cast<double>(worst) / cfg.diag_samples;
    }
    return LllResult{std::move(s), std::move(rep), std::move(th)};
}

} // namespace ftspan
