// Acceptance suite: ten end-to-end criteria, one pass/fail line each.
// Run all with no arguments or a single one with --criterion N.
// Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include "ftspan/ft_transform.hpp"
#include "ftspan/generators.hpp"
#include "ftspan/local_sim.hpp"
#include "ftspan/lp_ft2.hpp"
#include "ftspan/oracle.hpp"
#include "ftspan/rng.hpp"
#include "ftspan/rounding.hpp"
#include "ftspan/spanner.hpp"

using namespace ftspan;

namespace {

std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<Graph>(std::move(g)); }

Graph random_digraph(int n, double p, uint64_t seed) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v)
            if (u != v && rng.next_bool(p)) edges.push_back({u, v, 1.0, 1.0});
    return Graph(n, true, std::move(edges));
}

Spanner subgraph_spanner(std::shared_ptr<const Graph> g, double keep, uint64_t seed) {
    Rng rng(seed);
    std::vector<EdgeId> ids;
    for (EdgeId e = 0; e < g->edge_count(); ++e)
        if (g->edge_alive(e) && rng.next_bool(keep)) ids.push_back(e);
    return make_spanner(std::move(g), std::move(ids), {"candidate", 2, 0, seed});
}

// ---- C1: characterization vs exhaustive enumeration -------------------------

bool criterion1(std::ostream& log) {
    int graphs = 1000, per_graph = 21;
    long long cases = 0, agreements = 0;
    for (int gi = 0; gi < graphs; ++gi) {
        int n = 3 + gi % 6;  // 3..8
        double p = 0.25 + 0.1 * (gi % 6);
        auto g = share(random_digraph(n, p, 10000 + static_cast<uint64_t>(gi)));
        for (int hi = 0; hi < per_graph; ++hi) {
            double keep = 0.25 + 0.05 * (hi % 14);
            Spanner h = subgraph_spanner(g, keep, static_cast<uint64_t>(gi) * 1000 + hi);
            int r = hi % 3;  // 0..2
            bool lhs = verify_ft2_char(*g, h, r).ok;
            bool rhs = verify_ft(*g, h, 2, r).ok;
            ++cases;
            if (lhs == rhs) ++agreements;
        }
    }
    log << agreements << "/" << cases << " agreements";
    return agreements == cases;
}

// ---- C2: conversion validity at the default constant ------------------------

bool criterion2(std::ostream& log) {
    std::vector<std::pair<std::string, Graph>> fixtures;
    fixtures.push_back({"K5", gen_complete(5, false)});
    fixtures.push_back({"K6", gen_complete(6, false)});
    fixtures.push_back({"petersen", gen_petersen()});
    fixtures.push_back({"gnp12", gen_gnp(12, 0.5, false, 42)});
    struct KR { int k, r; };
    bool ok = true;
    for (auto& [name, gg] : fixtures) {
        auto g = share(gg);
        for (auto [k, r] : {KR{3, 1}, KR{3, 2}, KR{5, 1}}) {
            int valid = 0, runs = 100;
            for (uint64_t seed = 0; seed < static_cast<uint64_t>(runs); ++seed) {
                Spanner s = ft_greedy(g, k, r, seed, 4.0);
                if (verify_ft(*g, s, k, r).ok) ++valid;
            }
            log << name << "(k=" << k << ",r=" << r << ")=" << valid << "% ";
            if (valid < 99) ok = false;
        }
    }
    return ok;
}

// ---- C3: conversion size scaling ---------------------------------------------

bool criterion3(std::ostream& log) {
    bool ok = true;
    for (int r : {1, 2}) {
        double lo = 1e30, hi = 0;
        for (int n : {16, 32, 64}) {
            auto g = share(gen_complete(n, false));
            double size_sum = 0;
            const int seeds = 3;
            for (uint64_t seed = 0; seed < seeds; ++seed)
                size_sum += ft_greedy(g, 3, r, seed, 4.0).size();
            double mean = size_sum / seeds;
            double denom = static_cast<double>(r) * r * std::pow(n, 1.5) * std::log(n);
            double c = mean / denom;
            log << "c(n=" << n << ",r=" << r << ")=" << c << " ";
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        log << "spread(r=" << r << ")=" << hi / lo << " ";
        if (hi / lo >= 4.0) ok = false;
    }
    return ok;
}

// ---- C4: gap fixture exactness -------------------------------------------------

bool criterion4(std::ostream& log) {
    const int r = 3;
    const double m_cost = 1000.0;
    auto g = share(gen_gap_fixture(m_cost, r));
    FractionalSolution strong = solve_lp(g, r);
    bool ok = std::fabs(strong.x[0] - 1.0) <= 1e-5 &&
              std::fabs(strong.objective - (m_cost + 2 * r)) <= 1e-5;
    SolveLpOptions weak_opts;
    weak_opts.use_kc_cuts = false;
    FractionalSolution weak = solve_lp(g, r, weak_opts);
    bool weak_ok = weak.objective <= m_cost / (r + 1) + 2 * r + 1e-5;
    log << "strong=" << strong.objective << " x_uv=" << strong.x[0]
        << " weak=" << weak.objective;
    return ok && weak_ok;
}

// ---- C5: relaxation soundness and certified feasibility ------------------------

bool criterion5(std::ostream& log) {
    std::vector<std::pair<std::string, Graph>> fixtures;
    fixtures.push_back({"edge", Graph(2, true, {{0, 1, 1, 2.5}})});
    fixtures.push_back({"two-path", Graph(3, true, {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, 1, 3}})});
    fixtures.push_back({"K3", gen_complete(3, true)});
    fixtures.push_back({"K4", gen_complete(4, true)});
    fixtures.push_back({"gap(1000,3)", gen_gap_fixture(1000, 3)});
    fixtures.push_back({"gap(10,2)", gen_gap_fixture(10, 2)});
    fixtures.push_back({"circ(6,2)", gen_regular_circulant(6, 2)});
    fixtures.push_back({"circ(7,3)", gen_regular_circulant(7, 3)});
    for (uint64_t s = 0; s < 4; ++s)
        fixtures.push_back({"gnp5-" + std::to_string(s), random_digraph(5, 0.6, 300 + s)});
    fixtures.push_back({"gnp6", random_digraph(6, 0.4, 310)});

    bool ok = true;
    int checked = 0;
    for (auto& [name, gg] : fixtures) {
        auto g = share(gg);
        if (g->alive_edge_count() > 22) continue;
        for (int r : {0, 1, 2}) {
            FractionalSolution lp = solve_lp(g, r);
            OptimumResult opt = brute_optimum_ft2(*g, r);
            if (lp.objective > opt.cost + 1e-6) {
                log << "LP above optimum on " << name << " r=" << r << " ";
                ok = false;
            }
            if (!separation_oracle(*g, r, lp, 2e-7).empty()) {
                log << "uncertified solution on " << name << " r=" << r << " ";
                ok = false;
            }
            ++checked;
        }
    }
    log << checked << " fixture/r pairs";
    return ok && checked >= 30;
}

// ---- C6: randomized rounding approximation ------------------------------------

bool criterion6(std::ostream& log) {
    bool ok = true;
    for (int n : {5, 6, 7}) {
        auto g = share(gen_complete(n, true));
        for (int r : {0, 1}) {
            FractionalSolution lp = solve_lp(g, r);
            OptimumResult opt = exact_optimum_ft2(*g, r);
            RoundingConfig cfg;
            cfg.c_alpha = 3.0;
            double alpha = rounding_alpha(*g, cfg);
            int good = 0, runs = 100;
            for (uint64_t seed = 0; seed < static_cast<uint64_t>(runs); ++seed) {
                try {
                    ApproxResult res = approx_ft2(g, r, cfg, seed, &lp);
                    bool valid = verify_ft(*g, res.spanner, 2, r).ok;
                    bool cheap = res.report.cost <= 6.0 * alpha * opt.cost + 1e-9;
                    if (valid && cheap) ++good;
                } catch (const RoundingError&) {
                }
            }
            log << "K" << n << "(r=" << r << ")=" << good << "% ";
            if (good < 95) ok = false;
        }
    }
    return ok;
}

// ---- C7: bounded-degree variant -------------------------------------------------

bool criterion7(std::ostream& log) {
    bool ok = true;
    for (int n : {12, 24}) {
        auto g = share(gen_regular_circulant(n, 3));
        FractionalSolution lp = solve_lp(g, 1);
        RoundingConfig cfg;
        cfg.c_alpha = 6.0;
        cfg.mode = AlphaMode::log_delta;
        cfg.max_resamples = 10 * n * n;
        cfg.diag_samples = 0;
        int runs = 25;
        for (uint64_t seed = 0; seed < static_cast<uint64_t>(runs); ++seed) {
            LllResult res = lll_round(g, 1, lp.x, cfg, seed);
            if (res.report.resamples > 10 * n * n) ok = false;
            if (!occurring_events(*g, 1, lp.x, res.report.alpha, res.thresholds).empty()) {
                log << "events remain (n=" << n << ",seed=" << seed << ") ";
                ok = false;
            }
            if (res.report.cost > 8 * res.report.alpha * lp.objective + 1e-9) {
                log << "cost chain broken (n=" << n << ",seed=" << seed << ") ";
                ok = false;
            }
        }
        log << "n=" << n << " lp=" << lp.objective << " ok ";
    }
    return ok;
}

// ---- C8: padded decomposition ----------------------------------------------------

bool criterion8(std::ostream& log) {
    bool ok = true;
    std::vector<std::pair<std::string, Graph>> hosts;
    hosts.push_back({"grid16", gen_grid(16, 16)});
    hosts.push_back({"gnp64", gen_gnp(64, 0.1, false, 7)});
    for (auto& [name, g] : hosts) {
        int n = g.vertex_count();
        int r_cap = default_decomposition_radius(n);
        // hop distances once; weak diameters come from the table
        std::vector<std::vector<int>> hops;
        for (VertexId v = 0; v < n; ++v) hops.push_back(undirected_hop_distances(g, v));
        double padded_total = 0;
        long long vertex_count = 0;
        int diam_violations = 0;
        const int samples = 1000;
        for (int s = 0; s < samples; ++s) {
            Partition p = padded_decomposition(g, 0.1, r_cap, 40000 + static_cast<uint64_t>(s));
            for (VertexId v = 0; v < n; ++v) {
                ++vertex_count;
                if (vertex_padded(g, p, v)) padded_total += 1;
            }
            for (const auto& c : p.clusters) {
                std::vector<VertexId> pts = c.members;
                pts.push_back(c.center);
                for (VertexId a : pts)
                    for (VertexId b : pts) {
                        int d = hops[static_cast<size_t>(a)][static_cast<size_t>(b)];
                        if (d < 0 || d > 2 * r_cap) ++diam_violations;
                    }
                // members sit within the flood radius of their center
                for (VertexId mbr : c.members)
                    if (hops[static_cast<size_t>(c.center)][static_cast<size_t>(mbr)] > r_cap)
                        ++diam_violations;
            }
        }
        double frac = padded_total / static_cast<double>(vertex_count);
        log << name << ": padded=" << frac << " diam_violations=" << diam_violations << " ";
        if (frac < 0.5 || diam_violations > 0) ok = false;
    }
    return ok;
}

// ---- C9: distributed approximation -----------------------------------------------

bool criterion9(std::ostream& log) {
    bool ok = true;
    // part 1: success rate and averaged-capacity bound over 100 seeds
    std::vector<std::pair<std::string, Graph>> hosts;
    hosts.push_back({"K6", gen_complete(6, true)});
    hosts.push_back({"gnp16", gen_gnp(16, 0.4, true, 5)});
    for (auto& [name, gg] : hosts) {
        auto g = share(gg);
        DistFt2Options opts;
        opts.t = static_cast<int>(std::ceil(4.0 * std::log(g->vertex_count())));
        FractionalSolution central = solve_lp(g, 1);
        int verified = 0, runs = 100;
        for (uint64_t seed = 0; seed < static_cast<uint64_t>(runs); ++seed) {
            DistFt2Result res = distributed_ft2(g, 1, opts, seed, &central);
            if (res.report.verified) ++verified;
            if (res.report.xtilde_cost > 4 * central.objective + 1e-9) {
                log << "capacity bound broken on " << name << " seed=" << seed << " ";
                ok = false;
            }
        }
        log << name << "=" << verified << "% ";
        if (verified < 95) ok = false;
    }
    // part 2: round scaling on sparse random digraphs (density 0.1 keeps the
    // cluster LPs desk-sized; rounds are dominated by the decomposition radii)
    double lo = 1e30, hi = 0;
    for (int n : {16, 32, 64}) {
        auto g = share(gen_gnp(n, 0.1, true, 11));
        DistFt2Options opts;
        opts.t = static_cast<int>(std::ceil(4.0 * std::log(n)));
        FractionalSolution central = solve_lp(g, 1);
        DistFt2Result res = distributed_ft2(g, 1, opts, 1, &central);
        double c = res.report.rounds_used / std::pow(std::log(n), 2.0);
        log << "rounds/ln^2(" << n << ")=" << c << " ";
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    log << "spread=" << hi / lo;
    return ok && hi / lo < 4.0;
}

// ---- C10: determinism --------------------------------------------------------------

bool criterion10(std::ostream& log) {
    bool ok = true;
    auto expect = [&](bool cond, const char* what) {
        if (!cond) {
            log << "mismatch: " << what << " ";
            ok = false;
        }
    };

    auto und = share(gen_gnp(12, 0.5, false, 3));
    expect(greedy_spanner(und, 3).edge_ids == greedy_spanner(und, 3).edge_ids, "greedy");
    expect(ft_greedy(und, 3, 1, 9).edge_ids == ft_greedy(und, 3, 1, 9).edge_ids, "ft-greedy");

    auto dir = share(gen_gnp(8, 0.5, true, 4));
    FractionalSolution lp1 = solve_lp(dir, 1);
    FractionalSolution lp2 = solve_lp(dir, 1);
    expect(fractional_solution_json(*dir, lp1) == fractional_solution_json(*dir, lp2), "lp json");

    RoundingConfig cfg;
    ApproxResult a1 = approx_ft2(dir, 1, cfg, 5, &lp1);
    ApproxResult a2 = approx_ft2(dir, 1, cfg, 5, &lp1);
    expect(a1.spanner.edge_ids == a2.spanner.edge_ids && a1.report.attempts == a2.report.attempts,
           "approx");

    auto circ = share(gen_regular_circulant(12, 3));
    FractionalSolution clp = solve_lp(circ, 1);
    RoundingConfig lll_cfg;
    lll_cfg.c_alpha = 6.0;
    LllResult l1 = lll_round(circ, 1, clp.x, lll_cfg, 6);
    LllResult l2 = lll_round(circ, 1, clp.x, lll_cfg, 6);
    expect(l1.spanner.edge_ids == l2.spanner.edge_ids && l1.report.trace == l2.report.trace, "lll");

    Graph grid = gen_grid(8, 8);
    SimTrace t1, t2;
    Partition p1 = padded_decomposition(grid, 0.1, 10, 12, &t1);
    Partition p2 = padded_decomposition(grid, 0.1, 10, 12, &t2);
    expect(p1.cluster_of == p2.cluster_of, "decomposition");
    expect(t1.to_jsonl() == t2.to_jsonl() && t1.outputs == t2.outputs, "decomposition trace");

    auto k6 = share(gen_complete(6, true));
    DistFt2Options dopts;
    dopts.t = 4;
    DistFt2Result d1 = distributed_ft2(k6, 1, dopts, 8);
    DistFt2Result d2 = distributed_ft2(k6, 1, dopts, 8);
    expect(d1.trace.to_jsonl() == d2.trace.to_jsonl(), "dist trace jsonl");
    expect(d1.trace.outputs == d2.trace.outputs, "dist node outputs");
    expect(d1.spanner.edge_ids == d2.spanner.edge_ids, "dist spanner");

    auto k5u = share(gen_complete(5, false));
    DistributedBase base = clustering_base_program(3);
    DistConvertResult c1 = distributed_ft_convert(k5u, 3, 1, 10, 2, base);
    DistConvertResult c2 = distributed_ft_convert(k5u, 3, 1, 10, 2, base);
    expect(c1.trace.to_jsonl() == c2.trace.to_jsonl() &&
               c1.spanner.edge_ids == c2.spanner.edge_ids,
           "dist conversion");

    std::ostringstream s1, s2;
    write_spanner(ft_greedy(und, 3, 1, 31), s1);
    write_spanner(ft_greedy(und, 3, 1, 31), s2);
    expect(s1.str() == s2.str(), "spanner bytes");
    return ok;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> run;
};

} // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "characterization agrees with exhaustive verification", criterion1},
        {2, "conversion validity at c_iter=4", criterion2},
        {3, "conversion size scaling on complete graphs", criterion3},
        {4, "gap-fixture LP exactness with and without cuts", criterion4},
        {5, "relaxation soundness + certified feasibility", criterion5},
        {6, "randomized rounding approximation quality", criterion6},
        {7, "bounded-degree resampling variant", criterion7},
        {8, "padded decomposition quality", criterion8},
        {9, "distributed approximation and round scaling", criterion9},
        {10, "seeded determinism", criterion10},
    };

    int only = 0;
    for (int i = 1; i + 1 < argc + 1; ++i) {
        if (i < argc && std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[i + 1]);
    }

    int failures = 0;
    for (auto& c : criteria) {
        if (only && c.id != only) continue;
        std::ostringstream detail;
        bool pass = false;
        auto t0 = std::chrono::steady_clock::now();
        try {
            pass = c.run(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << "C" << c.id << ": " << c.name << " ("
                  << detail.str() << ") [" << secs << "s]" << std::endl;
        if (!pass) ++failures;
    }
    return failures;
}
