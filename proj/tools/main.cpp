// ftspan command line: generate fixture graphs, build spanners with any of
// the implemented algorithms, verify them exhaustively, sweep experiment
// grids into CSV, and dump message-passing traces.
//
// Exit codes follow sysexits: 64 usage, 65 bad data, 70 internal failure.
// verify uses 0 = valid, 2 = invalid (witness on stdout), 3 = budget.

#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftspan/errors.hpp"
#include "ftspan/ft_transform.hpp"
#include "ftspan/generators.hpp"
#include "ftspan/local_sim.hpp"
#include "ftspan/lp_ft2.hpp"
#include "ftspan/oracle.hpp"
#include "ftspan/rounding.hpp"
#include "ftspan/spanner.hpp"

using nlohmann::json;
using namespace ftspan;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitInternal = 70;

std::string g_invocation;

std::string quote_arg(const std::string& a) {
    if (a.find_first_of(" \t\"'") == std::string::npos) return a;
    std::string out = "'";
    for (char c : a) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

std::shared_ptr<const Graph> load_graph(const std::string& path) {
    return std::make_shared<Graph>(read_graph_file(path));
}

struct GenerateArgs {
    std::string type;
    int n = 8;
    double prob = 0.5;
    int width = 4, height = 4;
    int degree = 3;
    double big_cost = 1000.0;
    int r = 1;
    bool directed = false;
    uint64_t seed = 0;
    std::string out;
};

Graph make_generated(const GenerateArgs& a) {
    if (a.type == "complete") return gen_complete(a.n, a.directed);
    if (a.type == "gnp") return gen_gnp(a.n, a.prob, a.directed, a.seed);
    if (a.type == "grid") return gen_grid(a.width, a.height);
    if (a.type == "regular") return gen_regular_circulant(a.n, a.degree);
    if (a.type == "gap_fixture") return gen_gap_fixture(a.big_cost, a.r);
    if (a.type == "path") return gen_path(a.n);
    if (a.type == "petersen") return gen_petersen();
    throw InputError("unknown generator type: " + a.type);
}

struct BuildArgs {
    std::string graph_path;
    std::string algo;
    int k = 3;
    int r = 0;
    uint64_t seed = 0;
    double c_iter = 4.0;
    double c_alpha = 0.0;  // 0: per-algorithm default
    int max_attempts = 20;
    bool no_kc_cuts = false;
    bool adaptive = false;  // ft-greedy: grow iterations until the oracle is happy
    uint64_t verify_budget = 1000000;
    int t = 0;
    int r_cap = 0;
    double p_geom = 0.1;
    int iterations = 0;
    std::string out;
    std::string metrics_path;
    std::string solution_path;
};

struct BuildOutcome {
    Spanner spanner;
    json metrics;
};

BuildOutcome run_build(const BuildArgs& a, std::shared_ptr<const Graph> g) {
    json m;
    m["algorithm"] = a.algo;
    m["seed"] = a.seed;
    BuildOutcome out{Spanner{}, {}};

    if (a.algo == "greedy") {
        out.spanner = greedy_spanner(g, a.k);
    } else if (a.algo == "ft-greedy") {
        if (a.adaptive) {
            // double the iteration count until exhaustive verification passes;
            // the same seed stream makes each run a prefix-extension of the last
            ConversionConfig cfg = make_conversion_config(
                std::max(2, g->vertex_count()), a.r, a.seed, a.c_iter);
            int target = cfg.iterations;
            int used = 0;
            for (int it = 1;; it *= 2) {
                cfg.iterations = std::min(it, target);
                out.spanner = ft_convert(g, a.k, cfg, greedy_base_algorithm());
                used = cfg.iterations;
                if (verify_ft(*g, out.spanner, a.k, a.r, a.verify_budget).ok) break;
                if (cfg.iterations >= target) break;  // cap at the default count
            }
            out.spanner.meta.algorithm = "ft-greedy";
            m["iterations_used"] = used;
            m["verified"] = verify_ft(*g, out.spanner, a.k, a.r, a.verify_budget).ok;
        } else {
            out.spanner = ft_greedy(g, a.k, a.r, a.seed, a.c_iter);
        }
    } else if (a.algo == "ft2-lp") {
        SolveLpOptions lp_opts;
        lp_opts.use_kc_cuts = !a.no_kc_cuts;
        FractionalSolution lp = solve_lp(g, a.r, lp_opts);
        if (!a.solution_path.empty()) {
            std::ofstream f(a.solution_path);
            f << fractional_solution_json(*g, lp) << "\n";
        }
        RoundingConfig cfg;
        cfg.c_alpha = a.c_alpha > 0 ? a.c_alpha : 3.0;
        cfg.max_attempts = a.max_attempts;
        ApproxResult res = approx_ft2(g, a.r, cfg, a.seed, &lp);
        out.spanner = res.spanner;
        m["lp_value"] = res.report.lp_value;
        m["alpha"] = res.report.alpha;
        m["attempts"] = res.report.attempts;
        m["ratio"] = res.report.ratio;
    } else if (a.algo == "ft2-lll") {
        FractionalSolution lp = solve_lp(g, a.r);
        if (!a.solution_path.empty()) {
            std::ofstream f(a.solution_path);
            f << fractional_solution_json(*g, lp) << "\n";
        }
        RoundingConfig cfg;
        cfg.mode = AlphaMode::log_delta;
        cfg.c_alpha = a.c_alpha > 0 ? a.c_alpha : 6.0;
        LllResult res = lll_round(g, a.r, lp.x, cfg, a.seed);
        out.spanner = res.spanner;
        m["lp_value"] = lp.objective;
        m["alpha"] = res.report.alpha;
        m["resamples"] = res.report.resamples;
        m["ratio"] = lp.objective > 0 ? res.report.cost / lp.objective : 0.0;
        m["dependency_degree"] = res.report.dependency_degree;
        m["event_prob_estimate"] = res.report.event_prob_estimate;
    } else if (a.algo == "ft2-dist") {
        DistFt2Options opts;
        opts.t = a.t;
        opts.r_cap = a.r_cap;
        opts.p_geom = a.p_geom;
        if (a.c_alpha > 0) opts.rounding.c_alpha = a.c_alpha;
        DistFt2Result res = distributed_ft2(g, a.r, opts, a.seed);
        out.spanner = res.spanner;
        m["lp_value"] = res.report.lp_central;
        m["alpha"] = res.report.alpha;
        m["ratio"] = res.report.ratio;
        m["rounds"] = res.report.rounds_used;
        m["iterations"] = res.report.iterations;
        m["xtilde_cost"] = res.report.xtilde_cost;
        m["verified"] = res.report.verified;
        m["residual_violated_cuts"] = res.report.residual_violated_cuts;
    } else if (a.algo == "ft-dist") {
        DistributedBase base = clustering_base_program(a.k);
        int iters = a.iterations > 0
                        ? a.iterations
                        : default_iterations(std::max(2, g->vertex_count()), a.r, a.c_iter);
        DistConvertResult res = distributed_ft_convert(g, a.k, a.r, iters, a.seed, base);
        out.spanner = res.spanner;
        m["rounds"] = res.trace.rounds_used;
        m["rounds_per_iteration"] = res.rounds_per_iteration;
        m["iterations"] = iters;
    } else {
        throw InputError("unknown algorithm: " + a.algo);
    }
    m["size"] = out.spanner.size();
    m["cost"] = out.spanner.total_cost();
    m["k"] = out.spanner.meta.k;
    m["r"] = out.spanner.meta.r;
    out.metrics = std::move(m);
    return out;
}

int cmd_generate(const GenerateArgs& a) {
    Graph g = make_generated(a);
    if (a.out.empty()) {
        write_graph(g, std::cout, {"invocation: " + g_invocation});
    } else {
        write_graph_file(g, a.out, {"invocation: " + g_invocation});
    }
    return 0;
}

int cmd_build(const BuildArgs& a) {
    auto g = load_graph(a.graph_path);
    BuildOutcome res = run_build(a, g);
    res.metrics["invocation"] = g_invocation;
    if (!a.out.empty())
        write_spanner_file(res.spanner, a.out, {"invocation: " + g_invocation});
    std::cout << res.metrics.dump(2) << "\n";
    if (!a.metrics_path.empty()) {
        std::ofstream f(a.metrics_path);
        f << res.metrics.dump(2) << "\n";
    }
    return 0;
}

struct VerifyArgs {
    std::string graph_path, spanner_path;
    double k = 2;
    int r = 0;
    uint64_t budget = 1000000;
    bool use_char = false;  // characterization check instead of enumeration
};

int cmd_verify(const VerifyArgs& a) {
    auto g = load_graph(a.graph_path);
    Spanner s = read_spanner_file(a.spanner_path, g);
    FtVerifyResult res;
    try {
        res = a.use_char ? verify_ft2_char(*g, s, a.r) : verify_ft(*g, s, a.k, a.r, a.budget);
    } catch (const BudgetError& e) {
        json j;
        j["error"] = "budget";
        j["message"] = e.what();
        std::cout << j.dump(2) << "\n";
        return 3;
    }
    json j;
    j["valid"] = res.ok;
    j["invocation"] = g_invocation;
    if (!res.ok) {
        j["witness"]["faults"] = res.witness_faults;
        j["witness"]["edge"] = res.witness_edge;
        if (res.witness_edge >= 0) {
            j["witness"]["tail"] = g->edge(res.witness_edge).tail;
            j["witness"]["head"] = g->edge(res.witness_edge).head;
        }
    }
    std::cout << j.dump(2) << "\n";
    return res.ok ? 0 : 2;
}

struct SweepArgs {
    std::string gen = "complete";
    std::string algo = "greedy";
    std::vector<int> ns{8};
    std::vector<int> rs{0};
    std::vector<int> ks{3};
    std::string seed_spec = "0:1";
    double prob = 0.5;
    double c_iter = 4.0;
    double c_alpha = 0.0;
    std::string out;
};

std::vector<uint64_t> parse_seeds(const std::string& spec) {
    std::vector<uint64_t> seeds;
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        uint64_t lo = std::stoull(spec.substr(0, colon));
        uint64_t hi = std::stoull(spec.substr(colon + 1));
        for (uint64_t s = lo; s < hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) seeds.push_back(std::stoull(tok));
    return seeds;
}

int cmd_sweep(const SweepArgs& a) {
    if (a.out.empty()) throw InputError("sweep needs -o FILE");
    std::set<std::string> done_keys;
    bool existing = false;
    {
        std::ifstream in(a.out);
        if (in) {
            existing = true;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
                std::stringstream ls(line);
                std::string n, r, k;
                std::getline(ls, n, ',');
                std::getline(ls, r, ',');
                std::getline(ls, k, ',');
                std::string rest, seed;
                std::vector<std::string> cols;
                while (std::getline(ls, rest, ',')) cols.push_back(rest);
                if (!cols.empty()) seed = cols.back();
                done_keys.insert(n + "/" + r + "/" + k + "/" + seed);
            }
        }
    }
    std::ofstream out(a.out, std::ios::app);
    if (!out) throw InputError("cannot open " + a.out);
    if (!existing) {
        out << "# invocation: " << g_invocation << "\n";
        out << "n,r,k,size,cost,lp,ratio,rounds,seed\n";
        out.flush();
    }
    auto seeds = parse_seeds(a.seed_spec);
    for (int n : a.ns) {
        for (int r : a.rs) {
            for (int k : a.ks) {
                for (uint64_t seed : seeds) {
                    std::string key = std::to_string(n) + "/" + std::to_string(r) + "/" +
                                      std::to_string(k) + "/" + std::to_string(seed);
                    if (done_keys.count(key)) continue;
                    GenerateArgs ga;
                    ga.type = a.gen;
                    ga.n = n;
                    ga.prob = a.prob;
                    ga.r = r;
                    ga.seed = seed;
                    ga.degree = 3;
                    ga.width = ga.height = static_cast<int>(std::lround(std::sqrt(n)));
                    bool directed_algo = a.algo.rfind("ft2", 0) == 0;
                    ga.directed = directed_algo;
                    auto g = std::make_shared<Graph>(make_generated(ga));
                    BuildArgs ba;
                    ba.algo = a.algo;
                    ba.k = k;
                    ba.r = r;
                    ba.seed = seed;
                    ba.c_iter = a.c_iter;
                    ba.c_alpha = a.c_alpha;
                    BuildOutcome res = run_build(ba, g);
                    const json& m = res.metrics;
                    out << n << "," << r << "," << k << "," << res.spanner.size() << ","
                        << format_number(res.spanner.total_cost()) << ",";
                    if (m.contains("lp_value")) out << format_number(m["lp_value"].get<double>());
                    out << ",";
                    if (m.contains("ratio")) out << format_number(m["ratio"].get<double>());
                    out << ",";
                    if (m.contains("rounds")) out << m["rounds"].get<int>();
                    out << "," << seed << "\n";
                    out.flush();
                }
            }
        }
    }
    return 0;
}

struct SimulateArgs {
    std::string graph_path;
    std::string algo = "padded";
    int r = 0;
    int k = 3;
    int t = 0;
    int r_cap = 0;
    double p_geom = 0.1;
    int iterations = 0;
    int max_rounds = 0;
    uint64_t seed = 0;
    std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
    auto g = load_graph(a.graph_path);
    SimTrace trace;
    json summary;
    if (a.algo == "padded") {
        int cap = a.r_cap > 0 ? a.r_cap : default_decomposition_radius(g->vertex_count());
        if (a.max_rounds > 0 && cap > a.max_rounds)
            throw InputError("r_cap exceeds --max-rounds");
        Partition p = padded_decomposition(*g, a.p_geom, cap, a.seed, &trace);
        summary["clusters"] = p.clusters.size();
        int padded = 0, alive = 0;
        for (VertexId v = 0; v < g->vertex_count(); ++v) {
            if (!g->vertex_alive(v)) continue;
            ++alive;
            if (vertex_padded(*g, p, v)) ++padded;
        }
        summary["padded_fraction"] = alive > 0 ? static_cast<double>(padded) / alive : 1.0;
    } else if (a.algo == "ft2-dist") {
        DistFt2Options opts;
        opts.t = a.t;
        opts.r_cap = a.r_cap;
        opts.p_geom = a.p_geom;
        DistFt2Result res = distributed_ft2(g, a.r, opts, a.seed);
        if (a.max_rounds > 0 && res.trace.rounds_used > a.max_rounds)
            throw SolveError("simulation exceeded --max-rounds");
        trace = std::move(res.trace);
        summary["verified"] = res.report.verified;
        summary["cost"] = res.report.cost;
        summary["ratio"] = res.report.ratio;
    } else if (a.algo == "ft-dist") {
        DistributedBase base = clustering_base_program(a.k);
        int iters = a.iterations > 0
                        ? a.iterations
                        : default_iterations(std::max(2, g->vertex_count()), a.r, 4.0);
        DistConvertResult res = distributed_ft_convert(g, a.k, a.r, iters, a.seed, base);
        if (a.max_rounds > 0 && res.trace.rounds_used > a.max_rounds)
            throw SolveError("simulation exceeded --max-rounds");
        trace = std::move(res.trace);
        summary["size"] = res.spanner.size();
        summary["rounds_per_iteration"] = res.rounds_per_iteration;
    } else {
        throw InputError("unknown simulate algorithm: " + a.algo);
    }
    std::string body = trace.to_jsonl();
    json inv;
    inv["invocation"] = g_invocation;
    inv["extra"] = summary;
    body += inv.dump() + "\n";
    if (a.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(a.out);
        f << body;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::ostringstream inv;
    for (int i = 0; i < argc; ++i) {
        if (i) inv << " ";
        inv << quote_arg(i == 0 ? std::string("ftspan") : std::string(argv[i]));
    }
    g_invocation = inv.str();

    CLI::App app{"fault-tolerant graph spanner toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cg = app.add_subcommand("generate", "write a fixture graph");
    cg->add_option("--type", gen.type, "complete|gnp|grid|regular|gap_fixture|path|petersen")
        ->required();
    cg->add_option("-n,--n", gen.n, "vertex count");
    cg->add_option("--prob", gen.prob, "edge probability for gnp");
    cg->add_option("--width", gen.width);
    cg->add_option("--height", gen.height);
    cg->add_option("--degree", gen.degree, "out-degree for regular circulants");
    cg->add_option("--big-cost", gen.big_cost, "direct-edge cost of the gap fixture");
    cg->add_option("-r", gen.r, "detour count of the gap fixture");
    cg->add_flag("--directed", gen.directed);
    cg->add_option("--seed", gen.seed);
    cg->add_option("-o,--out", gen.out, "output path (stdout when omitted)");

    BuildArgs build;
    auto* cb = app.add_subcommand("build", "construct a spanner");
    cb->add_option("--graph", build.graph_path)->required();
    cb->add_option("--algo", build.algo, "greedy|ft-greedy|ft2-lp|ft2-lll|ft2-dist|ft-dist")
        ->required();
    cb->add_option("-k", build.k);
    cb->add_option("-r", build.r);
    cb->add_option("--seed", build.seed);
    cb->add_option("--c-iter", build.c_iter);
    cb->add_option("--c-alpha", build.c_alpha);
    cb->add_option("--max-attempts", build.max_attempts);
    cb->add_flag("--no-kc-cuts", build.no_kc_cuts, "base covering rows only (gap demos)");
    cb->add_flag("--adaptive", build.adaptive,
                 "ft-greedy: stop early once exhaustive verification passes");
    cb->add_option("--verify-budget", build.verify_budget,
                   "fault-set budget for --adaptive verification");
    cb->add_option("--t", build.t, "averaging iterations (ft2-dist)");
    cb->add_option("--r-cap", build.r_cap, "decomposition radius cap (ft2-dist)");
    cb->add_option("--p-geom", build.p_geom);
    cb->add_option("--iterations", build.iterations, "conversion iterations (ft-dist)");
    cb->add_option("-o,--out", build.out, "spanner output path");
    cb->add_option("--metrics", build.metrics_path, "metrics JSON path");
    cb->add_option("--solution", build.solution_path, "fractional solution JSON path");

    VerifyArgs verify;
    auto* cv = app.add_subcommand("verify", "exhaustive fault-tolerance check");
    cv->add_option("--graph", verify.graph_path)->required();
    cv->add_option("--spanner", verify.spanner_path)->required();
    cv->add_option("-k", verify.k)->required();
    cv->add_option("-r", verify.r)->required();
    cv->add_option("--budget", verify.budget, "max fault sets to enumerate");
    cv->add_flag("--char", verify.use_char, "stretch-2 characterization instead of enumeration");

    SweepArgs sweep;
    auto* cs = app.add_subcommand("sweep", "run an experiment grid into CSV");
    cs->add_option("--gen", sweep.gen);
    cs->add_option("--algo", sweep.algo);
    cs->add_option("--n", sweep.ns)->delimiter(',');
    cs->add_option("--r", sweep.rs)->delimiter(',');
    cs->add_option("--k", sweep.ks)->delimiter(',');
    cs->add_option("--seeds", sweep.seed_spec, "lo:hi or comma list");
    cs->add_option("--prob", sweep.prob);
    cs->add_option("--c-iter", sweep.c_iter);
    cs->add_option("--c-alpha", sweep.c_alpha);
    cs->add_option("-o,--out", sweep.out)->required();

    SimulateArgs sim;
    auto* cm = app.add_subcommand("simulate", "emit a round-by-round trace");
    cm->add_option("--graph", sim.graph_path)->required();
    cm->add_option("--algo", sim.algo, "padded|ft2-dist|ft-dist");
    cm->add_option("-r", sim.r);
    cm->add_option("-k", sim.k);
    cm->add_option("--t", sim.t);
    cm->add_option("--r-cap", sim.r_cap);
    cm->add_option("--p-geom", sim.p_geom);
    cm->add_option("--iterations", sim.iterations);
    cm->add_option("--max-rounds", sim.max_rounds, "hard round cap");
    cm->add_option("--seed", sim.seed);
    cm->add_option("-o,--out", sim.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*cg) return cmd_generate(gen);
        if (*cb) return cmd_build(build);
        if (*cv) return cmd_verify(verify);
        if (*cs) return cmd_sweep(sweep);
        if (*cm) return cmd_simulate(sim);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitData;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return (*cg || *cs) ? kExitUsage : kExitData;
    } catch (const SolveError& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
