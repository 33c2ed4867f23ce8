#include <doctest.h>

#include <memory>

#include "ftspan/errors.hpp"
#include "ftspan/generators.hpp"
#include "ftspan/oracle.hpp"
#include "ftspan/rng.hpp"
#include "oracle_utils.hpp"

using namespace ftspan;

namespace {

std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<Graph>(std::move(g)); }

Spanner full_spanner(std::shared_ptr<const Graph> g) {
    std::vector<EdgeId> all;
    for (EdgeId e = 0; e < g->edge_count(); ++e)
        if (g->edge_alive(e)) all.push_back(e);
    return make_spanner(std::move(g), std::move(all), {"full", 1, 0, 0});
}

Spanner random_subgraph(std::shared_ptr<const Graph> g, double keep, uint64_t seed) {
    Rng rng(seed);
    std::vector<EdgeId> ids;
    for (EdgeId e = 0; e < g->edge_count(); ++e)
        if (g->edge_alive(e) && rng.next_bool(keep)) ids.push_back(e);
    return make_spanner(std::move(g), std::move(ids), {"random", 2, 0, seed});
}

} // namespace

TEST_CASE("a graph spans itself under any fault budget") {
    auto g = share(refimpl::random_digraph(6, 0.5, 2));
    for (int r : {0, 1, 2})
        for (double k : {1.0, 2.0, 3.0}) CHECK(verify_ft(*g, full_spanner(g), k, r).ok);
}

TEST_CASE("missing star leaf is caught with the empty fault set") {
    auto star = share(Graph(4, false, {{0, 1, 1, 1}, {0, 2, 1, 1}, {0, 3, 1, 1}}));
    Spanner missing = make_spanner(star, {0, 1}, {"partial", 3, 0, 0});
    auto res = verify_ft(*star, missing, 3, 0);
    CHECK_FALSE(res.ok);
    CHECK(res.witness_faults.empty());
    CHECK(res.witness_edge == 2);
}

TEST_CASE("K4 minus one edge is 1-fault tolerant at stretch 2") {
    auto k4 = share(gen_complete(4, true));
    std::vector<EdgeId> ids;
    EdgeId skipped = *k4->find_edge(0, 1);
    for (EdgeId e = 0; e < k4->edge_count(); ++e)
        if (e != skipped) ids.push_back(e);
    Spanner s = make_spanner(k4, ids, {"partial", 2, 1, 0});
    CHECK(verify_ft(*k4, s, 2, 1).ok);
    CHECK(verify_ft2_char(*k4, s, 1).ok);
    // two midpoints serve the missing edge; r = 2 must fail
    CHECK_FALSE(verify_ft2_char(*k4, s, 2).ok);
}

TEST_CASE("enumeration budget is a hard error") {
    auto g = share(gen_complete(40, true));
    Spanner s = full_spanner(g);
    CHECK_THROWS_AS(verify_ft(*g, s, 2, 4, 1000), BudgetError);
    CHECK(fault_set_count(40, 4) == 1ull + 40 + 780 + 9880 + 91390);
}

TEST_CASE("characterization check on the gap fixture") {
    auto g = share(gen_gap_fixture(1000, 3));
    std::vector<EdgeId> mid_edges;
    for (EdgeId e = 1; e < g->edge_count(); ++e) mid_edges.push_back(e);
    Spanner without_uv = make_spanner(g, mid_edges, {"mid-only", 2, 3, 0});
    // r detour paths exist, so r faults still disconnect the demand
    CHECK_FALSE(verify_ft2_char(*g, without_uv, 3).ok);
    CHECK(verify_ft2_char(*g, without_uv, 2).ok);
    CHECK(verify_ft2_char(*g, full_spanner(g), 3).ok);
}

TEST_CASE("characterization agrees with exhaustive verification") {
    int cases = 0;
    for (uint64_t seed = 0; seed < 40; ++seed) {
        auto g = share(refimpl::random_digraph(3 + static_cast<int>(seed % 6), 0.45, 500 + seed));
        for (int r : {0, 1, 2}) {
            for (uint64_t s2 = 0; s2 < 6; ++s2) {
                Spanner h = random_subgraph(g, 0.55, seed * 100 + s2);
                bool lhs = verify_ft2_char(*g, h, r).ok;
                bool rhs = verify_ft(*g, h, 2, r).ok;
                CHECK(lhs == rhs);
                ++cases;
            }
        }
    }
    CHECK(cases == 40 * 3 * 6);
}

TEST_CASE("oracle result is monotone in the edge set") {
    auto g = share(refimpl::random_digraph(6, 0.5, 31));
    for (uint64_t seed = 0; seed < 10; ++seed) {
        Spanner h = random_subgraph(g, 0.5, seed);
        if (!verify_ft2_char(*g, h, 1).ok) continue;
        // add any extra edge; must stay valid
        std::vector<EdgeId> bigger = h.edge_ids;
        for (EdgeId e = 0; e < g->edge_count(); ++e) {
            if (!h.contains(e)) {
                bigger.push_back(e);
                break;
            }
        }
        CHECK(verify_ft2_char(*g, make_spanner(g, bigger, h.meta), 1).ok);
    }
}

TEST_CASE("brute optimum on trivial fixtures") {
    auto single = share(Graph(2, true, {{0, 1, 1, 7.5}}));
    OptimumResult r0 = brute_optimum_ft2(*single, 0);
    CHECK(r0.cost == doctest::Approx(7.5));
    CHECK(r0.edges == std::vector<EdgeId>{0});

    // every K3 edge has only one possible midpoint, so all 6 are forced
    OptimumResult k3 = brute_optimum_ft2(gen_complete(3, true), 1);
    CHECK(k3.cost == doctest::Approx(6.0));
    CHECK(k3.edges.size() == 6);
}

TEST_CASE("brute optimum witness is feasible and tight") {
    auto g = share(refimpl::random_digraph(5, 0.6, 77));
    for (int r : {0, 1}) {
        OptimumResult opt = brute_optimum_ft2(*g, r);
        Spanner w = make_spanner(g, opt.edges, {"opt", 2, r, 0});
        CHECK(verify_ft2_char(*g, w, r).ok);
        // dropping any unit-cost edge must break it
        for (size_t i = 0; i < opt.edges.size(); ++i) {
            std::vector<EdgeId> fewer;
            for (size_t j = 0; j < opt.edges.size(); ++j)
                if (j != i) fewer.push_back(opt.edges[j]);
            CHECK_FALSE(verify_ft2_char(*g, make_spanner(g, fewer, {"sub", 2, r, 0}), r).ok);
        }
    }
}

TEST_CASE("brute optimum ties resolve to the lexicographically least set") {
    // directed K3 at r = 0 has exactly two optima, the two 3-cycles
    // {0,3,4} = 0->1->2->0 and {1,2,5} = 0->2->1->0; the first is lex-least
    OptimumResult opt = brute_optimum_ft2(gen_complete(3, true), 0);
    CHECK(opt.cost == doctest::Approx(3.0));
    CHECK(opt.edges == std::vector<EdgeId>{0, 3, 4});
}

TEST_CASE("complete-graph optimum respects the degree lower bound") {
    OptimumResult k4 = brute_optimum_ft2(gen_complete(4, true), 1);
    CHECK(k4.cost >= 1 * 4);  // r * n
    OptimumResult k5 = brute_optimum_ft2(gen_complete(5, true), 1);
    CHECK(k5.cost >= 1 * 5);
    CHECK(k5.cost >= 2 * 5);  // (r+1) in- and out-edges per vertex
}

TEST_CASE("brute optimum size guard") {
    CHECK_THROWS_AS(brute_optimum_ft2(gen_complete(6, true), 1), BudgetError);  // 30 edges
}

TEST_CASE("branch and bound matches plain enumeration") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        int n = 4 + static_cast<int>(seed % 2);
        for (int r : {0, 1}) {
            auto g = share(refimpl::random_digraph(n, 0.8, 900 + seed));
            if (g->edge_count() > 22) continue;
            OptimumResult a = brute_optimum_ft2(*g, r);
            OptimumResult b = exact_optimum_ft2(*g, r);
            CHECK(a.cost == doctest::Approx(b.cost));
            Spanner w = make_spanner(g, b.edges, {"bb", 2, r, 0});
            CHECK(verify_ft2_char(*g, w, r).ok);
        }
    }
    OptimumResult k5a = brute_optimum_ft2(gen_complete(5, true), 1);
    OptimumResult k5b = exact_optimum_ft2(gen_complete(5, true), 1);
    CHECK(k5a.cost == doctest::Approx(k5b.cost));
}

TEST_CASE("branch and bound respects non-unit costs") {
    Graph g = gen_gap_fixture(1000, 2);
    OptimumResult a = brute_optimum_ft2(g, 2);
    OptimumResult b = exact_optimum_ft2(g, 2);
    CHECK(a.cost == doctest::Approx(b.cost));
    CHECK(a.cost == doctest::Approx(1000 + 4));  // forced edge plus the detours
}
