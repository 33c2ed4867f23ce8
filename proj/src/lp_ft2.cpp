#include "ftspan/lp_ft2.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ftspan/errors.hpp"

namespace ftspan {

bool LpModel::add_cut(const KnapsackCoverCut& cut) {
    if (cut.demand < 0 || cut.demand >= static_cast<EdgeId>(demand_index.size()) ||
        demand_index[static_cast<size_t>(cut.demand)] < 0)
        throw InputError("cut references unknown demand edge");
    if (static_cast<int>(cut.w_mids.size()) > r) throw InputError("cut has |W| > r");
    std::vector<VertexId> key = cut.w_mids;
    std::sort(key.begin(), key.end());
    if (!cut_keys.insert({cut.demand, key}).second) return false;

    const Demand& d = demands[static_cast<size_t>(demand_index[static_cast<size_t>(cut.demand)])];
    double coeff = static_cast<double>(r + 1 - static_cast<int>(key.size()));
    std::vector<std::pair<int, double>> terms;
    terms.push_back({x_index[static_cast<size_t>(cut.demand)], coeff});
    for (size_t i = 0; i < d.paths.size(); ++i) {
        if (std::binary_search(key.begin(), key.end(), d.paths[i].mid)) continue;
        terms.push_back({d.f_base + static_cast<int>(i), 1.0});
    }
    prob.add_row(std::move(terms), RowSense::ge, coeff);
    materialized.push_back(KnapsackCoverCut{cut.demand, key});
    return true;
}

LpModel build_base_lp(std::shared_ptr<const Graph> g, int r, bool kc_cuts_enabled) {
    if (!g) throw InputError("null graph");
    if (!g->directed()) throw InputError("the stretch-2 LP expects a directed graph");
    if (!g->unit_lengths()) throw InputError("the stretch-2 LP expects unit edge lengths");
    if (r < 0) throw InputError("fault budget r must be nonnegative");

    LpModel m;
    m.g = g;
    m.r = r;
    m.kc_cuts_enabled = kc_cuts_enabled;
    m.x_index.assign(static_cast<size_t>(g->edge_count()), -1);
    m.demand_index.assign(static_cast<size_t>(g->edge_count()), -1);

    for (EdgeId e = 0; e < g->edge_count(); ++e) {
        if (!g->edge_alive(e)) continue;
        m.x_index[static_cast<size_t>(e)] = m.prob.add_variable(g->edge(e).cost);
        ++m.num_x;
    }
    for (EdgeId e = 0; e < g->edge_count(); ++e) {
        if (!g->edge_alive(e)) continue;
        LpModel::Demand d;
        d.edge = e;
        d.paths = length2_paths(*g, g->edge(e).tail, g->edge(e).head);
        d.f_base = m.prob.num_vars();
        for (const Path2& p : d.paths) {
            d.path_edges.push_back({*g->find_edge(p.tail, p.mid), *g->find_edge(p.mid, p.head)});
            m.prob.add_variable(0.0);
            ++m.num_f;
        }
        m.demand_index[static_cast<size_t>(e)] = static_cast<int>(m.demands.size());
        m.demands.push_back(std::move(d));
    }

    // multiplicity: x_e <= 1
    for (EdgeId e = 0; e < g->edge_count(); ++e)
        if (m.x_index[static_cast<size_t>(e)] >= 0)
            m.prob.add_row({{m.x_index[static_cast<size_t>(e)], 1.0}}, RowSense::le, 1.0);

    // capacity rows, one per (path, path edge); for a fixed demand each edge
    // lies on at most one path, so this equals the aggregated form
    for (const LpModel::Demand& d : m.demands) {
        for (size_t i = 0; i < d.paths.size(); ++i) {
            int vf = d.f_base + static_cast<int>(i);
            int x1 = m.x_index[static_cast<size_t>(d.path_edges[i].first)];
            int x2 = m.x_index[static_cast<size_t>(d.path_edges[i].second)];
            m.prob.add_row({{vf, 1.0}, {x1, -1.0}}, RowSense::le, 0.0);
            m.prob.add_row({{vf, 1.0}, {x2, -1.0}}, RowSense::le, 0.0);
        }
    }

    // W = empty cover row per demand (always present: the base model is a
    // valid relaxation even with lazy cuts disabled)
    for (const LpModel::Demand& d : m.demands) {
        std::vector<std::pair<int, double>> terms;
        terms.push_back({m.x_index[static_cast<size_t>(d.edge)], static_cast<double>(r + 1)});
        for (size_t i = 0; i < d.paths.size(); ++i)
            terms.push_back({d.f_base + static_cast<int>(i), 1.0});
        m.prob.add_row(std::move(terms), RowSense::ge, static_cast<double>(r + 1));
        m.cut_keys.insert({d.edge, {}});
    }

    // presolve: demands with at most r paths are forced to x = 1 by the cut
    // family (take W = all paths), so fix them eagerly
    if (kc_cuts_enabled) {
        for (const LpModel::Demand& d : m.demands) {
            if (static_cast<int>(d.paths.size()) <= r) {
                m.prob.add_row({{m.x_index[static_cast<size_t>(d.edge)], 1.0}}, RowSense::ge, 1.0);
                m.presolve_fixed.push_back(d.edge);
            }
        }
    }
    return m;
}

namespace {

FractionalSolution extract_solution(const LpModel& m, const LpSolution& lp) {
    FractionalSolution sol;
    sol.x.assign(static_cast<size_t>(m.g->edge_count()), 0.0);
    for (EdgeId e = 0; e < m.g->edge_count(); ++e) {
        int xi = m.x_index[static_cast<size_t>(e)];
        if (xi >= 0) sol.x[static_cast<size_t>(e)] = std::clamp(lp.x[static_cast<size_t>(xi)], 0.0, 1.0);
    }
    for (const LpModel::Demand& d : m.demands) {
        DemandFlows df;
        df.demand = d.edge;
        df.paths = d.paths;
        for (size_t i = 0; i < d.paths.size(); ++i)
            df.flow.push_back(std::max(0.0, lp.x[static_cast<size_t>(d.f_base) + i]));
        sol.flows.push_back(std::move(df));
    }
    sol.objective = lp.objective;
    sol.simplex_iterations = lp.iterations;
    return sol;
}

} // namespace

std::vector<KnapsackCoverCut> separation_oracle(const Graph& g, int r,
                                                const FractionalSolution& sol, double eps) {
    std::vector<KnapsackCoverCut> out;
    for (const DemandFlows& df : sol.flows) {
        int np = static_cast<int>(df.paths.size());
        // order paths by flow descending, ties by mid ascending
        std::vector<int> order(static_cast<size_t>(np));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            double fa = df.flow[static_cast<size_t>(a)], fb = df.flow[static_cast<size_t>(b)];
            if (fa != fb) return fa > fb;
            return df.paths[static_cast<size_t>(a)].mid < df.paths[static_cast<size_t>(b)].mid;
        });
        double total = std::accumulate(df.flow.begin(), df.flow.end(), 0.0);
        double xv = sol.x[static_cast<size_t>(df.demand)];
        double top_sum = 0.0;
        for (int kappa = 0; kappa <= std::min(r, np); ++kappa) {
            if (kappa > 0) top_sum += df.flow[static_cast<size_t>(order[static_cast<size_t>(kappa - 1)])];
            double need = static_cast<double>(r + 1 - kappa);
            double lhs = need * xv + (total - top_sum);
            if (lhs < need - eps) {
                KnapsackCoverCut cut;
                cut.demand = df.demand;
                for (int i = 0; i < kappa; ++i)
                    cut.w_mids.push_back(df.paths[static_cast<size_t>(order[static_cast<size_t>(i)])].mid);
                std::sort(cut.w_mids.begin(), cut.w_mids.end());
                out.push_back(std::move(cut));
            }
        }
    }
    return out;
}

namespace {

double cut_violation(const FractionalSolution& sol, int r, const KnapsackCoverCut& cut) {
    const DemandFlows* df = nullptr;
    for (const DemandFlows& cand : sol.flows)
        if (cand.demand == cut.demand) {
            df = &cand;
            break;
        }
    double need = static_cast<double>(r + 1 - static_cast<int>(cut.w_mids.size()));
    double lhs = need * sol.x[static_cast<size_t>(cut.demand)];
    if (df)
        for (size_t i = 0; i < df->paths.size(); ++i)
            if (!std::binary_search(cut.w_mids.begin(), cut.w_mids.end(), df->paths[i].mid))
                lhs += df->flow[i];
    return need - lhs;
}

} // namespace

FractionalSolution solve_lp(std::shared_ptr<const Graph> g, int r, SolveLpOptions opts) {
    LpModel model = build_base_lp(g, r, opts.use_kc_cuts);
    if (opts.objective_trace) opts.objective_trace->clear();
    FractionalSolution sol;
    double last_violation = 0.0;
    for (int round = 1; round <= std::max(1, opts.max_cut_rounds); ++round) {
        LpSolution lp = lp_core_solve(model.prob, opts.eps);
        if (lp.status != LpStatus::optimal)
            throw SolveError("lp solve failed: " + to_string(lp.status));
        sol = extract_solution(model, lp);
        sol.cut_rounds = round;
        sol.cuts_added = static_cast<int>(model.materialized.size());
        if (opts.objective_trace) opts.objective_trace->push_back(sol.objective);
        if (!opts.use_kc_cuts) return sol;
        auto cuts = separation_oracle(*g, r, sol, opts.eps);
        int fresh = 0;
        last_violation = 0.0;
        for (const auto& c : cuts) {
            last_violation = std::max(last_violation, cut_violation(sol, r, c));
            if (model.add_cut(c)) ++fresh;
        }
        if (fresh == 0) return sol;
    }
    std::ostringstream msg;
    msg << "cut rounds exhausted after " << opts.max_cut_rounds
        << " rounds with violated cuts remaining (objective " << sol.objective
        << ", worst violation " << last_violation << ")";
    throw CutRoundsError(msg.str(), std::move(sol), last_violation);
}

FractionalSolution integral_solution_from(const Graph& g, int r, const Spanner& h) {
    FractionalSolution sol;
    sol.x.assign(static_cast<size_t>(g.edge_count()), 0.0);
    for (EdgeId e : h.edge_ids) sol.x[static_cast<size_t>(e)] = 1.0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        DemandFlows df;
        df.demand = e;
        df.paths = length2_paths(g, g.edge(e).tail, g.edge(e).head);
        for (const Path2& p : df.paths) {
            bool both = h.contains(*g.find_edge(p.tail, p.mid)) && h.contains(*g.find_edge(p.mid, p.head));
            df.flow.push_back(both ? 1.0 : 0.0);
        }
        sol.flows.push_back(std::move(df));
        sol.objective += sol.x[static_cast<size_t>(e)] * g.edge(e).cost;
    }
    (void)r;
    return sol;
}

std::string fractional_solution_json(const Graph& g, const FractionalSolution& sol) {
    nlohmann::json j;
    j["objective"] = sol.objective;
    j["cut_rounds"] = sol.cut_rounds;
    j["cuts_added"] = sol.cuts_added;
    nlohmann::json jx = nlohmann::json::object();
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        const Edge& ed = g.edge(e);
        jx[std::to_string(ed.tail) + ":" + std::to_string(ed.head)] = sol.x[static_cast<size_t>(e)];
    }
    j["x"] = std::move(jx);
    nlohmann::json jf = nlohmann::json::object();
    for (const DemandFlows& df : sol.flows) {
        for (size_t i = 0; i < df.paths.size(); ++i) {
            const Path2& p = df.paths[i];
            jf[std::to_string(p.tail) + ":" + std::to_string(p.mid) + ":" + std::to_string(p.head)] =
                df.flow[i];
        }
    }
    j["f"] = std::move(jf);
    return j.dump(2);
}

} // namespace ftspan
