#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ftspan/ft_transform.hpp"
#include "ftspan/generators.hpp"
#include "ftspan/local_sim.hpp"
#include "ftspan/lp_ft2.hpp"
#include "ftspan/oracle.hpp"
#include "ftspan/rounding.hpp"
#include "ftspan/spanner.hpp"

namespace py = pybind11;
using namespace ftspan;

namespace {

std::shared_ptr<Graph> graph_from_edges(int n, bool directed,
                                        const std::vector<std::tuple<int, int, double, double>>& edges) {
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (auto& [t, h, len, cost] : edges) es.push_back({t, h, len, cost});
    return std::make_shared<Graph>(n, directed, std::move(es));
}

std::string graph_to_string(const Graph& g) {
    std::ostringstream out;
    write_graph(g, out);
    return out.str();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "fault-tolerant graph spanners: constructions, covering LP, rounding, "
              "and a round-synchronous message-passing simulator";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
    py::register_exception<SolveError>(m, "SolveError", PyExc_RuntimeError);

    py::class_<Path2>(m, "Path2")
        .def_readonly("tail", &Path2::tail)
        .def_readonly("mid", &Path2::mid)
        .def_readonly("head", &Path2::head)
        .def("__repr__", [](const Path2& p) {
            return "Path2(" + std::to_string(p.tail) + "->" + std::to_string(p.mid) + "->" +
                   std::to_string(p.head) + ")";
        });

    py::class_<Edge>(m, "Edge")
        .def_readonly("tail", &Edge::tail)
        .def_readonly("head", &Edge::head)
        .def_readonly("length", &Edge::length)
        .def_readonly("cost", &Edge::cost);

    py::class_<Graph, std::shared_ptr<Graph>>(m, "Graph")
        .def(py::init(&graph_from_edges), py::arg("n"), py::arg("directed"), py::arg("edges"))
        .def_property_readonly("n", &Graph::vertex_count)
        .def_property_readonly("directed", &Graph::directed)
        .def_property_readonly("edges", [](const Graph& g) { return g.edges(); })
        .def("edge_count", &Graph::edge_count)
        .def("alive_edge_count", &Graph::alive_edge_count)
        .def("vertex_alive", &Graph::vertex_alive)
        .def("max_degree", &Graph::max_degree)
        .def("__str__", &graph_to_string);

    m.def("read_graph", [](const std::string& path) {
        return std::make_shared<Graph>(read_graph_file(path));
    });
    m.def("write_graph", [](const Graph& g, const std::string& path) { write_graph_file(g, path); });
    m.def("shortest_path_dist", &shortest_path_dist);
    m.def("remove_vertices", [](const Graph& g, const FaultSet& f) {
        return std::make_shared<Graph>(remove_vertices(g, make_fault_set(f, g.vertex_count())));
    });
    m.def("length2_paths",
          [](const Graph& g, VertexId u, VertexId v) { return length2_paths(g, u, v); });
    m.def("directed_arcs",
          [](const Graph& g) { return std::make_shared<Graph>(directed_arcs(g)); });

    m.def("complete_graph", [](int n, bool directed) {
        return std::make_shared<Graph>(gen_complete(n, directed));
    }, py::arg("n"), py::arg("directed") = false);
    m.def("gnp_graph", [](int n, double p, bool directed, uint64_t seed) {
        return std::make_shared<Graph>(gen_gnp(n, p, directed, seed));
    }, py::arg("n"), py::arg("p"), py::arg("directed") = false, py::arg("seed") = 0);
    m.def("grid_graph", [](int w, int h) { return std::make_shared<Graph>(gen_grid(w, h)); });
    m.def("path_graph", [](int n) { return std::make_shared<Graph>(gen_path(n)); });
    m.def("petersen_graph", [] { return std::make_shared<Graph>(gen_petersen()); });
    m.def("circulant_graph", [](int n, int d) {
        return std::make_shared<Graph>(gen_regular_circulant(n, d));
    });
    m.def("gap_fixture", [](double cost, int r) {
        return std::make_shared<Graph>(gen_gap_fixture(cost, r));
    }, py::arg("expensive_cost") = 1000.0, py::arg("r") = 3);

    py::class_<SpannerMeta>(m, "SpannerMeta")
        .def_readonly("algorithm", &SpannerMeta::algorithm)
        .def_readonly("k", &SpannerMeta::k)
        .def_readonly("r", &SpannerMeta::r)
        .def_readonly("seed", &SpannerMeta::seed);

    py::class_<Spanner>(m, "Spanner")
        .def_readonly("edge_ids", &Spanner::edge_ids)
        .def_readonly("meta", &Spanner::meta)
        .def_property_readonly("host", [](const Spanner& s) { return s.host; })
        .def("size", &Spanner::size)
        .def("total_cost", &Spanner::total_cost)
        .def("contains", &Spanner::contains);

    m.def("make_spanner", [](std::shared_ptr<Graph> g, std::vector<EdgeId> ids) {
        return make_spanner(std::move(g), std::move(ids), SpannerMeta{"manual", 1, 0, 0});
    });
    m.def("greedy_spanner", [](std::shared_ptr<Graph> g, int k) { return greedy_spanner(g, k); });

    py::class_<StretchReport>(m, "StretchReport")
        .def_readonly("ok", &StretchReport::ok)
        .def_readonly("witness", &StretchReport::witness)
        .def_readonly("max_stretch", &StretchReport::max_stretch);
    m.def("verify_stretch", &verify_stretch);

    m.def("default_iterations", &default_iterations);
    m.def("ft_greedy", [](std::shared_ptr<Graph> g, int k, int r, uint64_t seed, double c_iter) {
        return ft_greedy(g, k, r, seed, c_iter);
    }, py::arg("g"), py::arg("k"), py::arg("r"), py::arg("seed") = 0, py::arg("c_iter") = 4.0);

    py::class_<FtVerifyResult>(m, "FtVerifyResult")
        .def_readonly("ok", &FtVerifyResult::ok)
        .def_readonly("witness_faults", &FtVerifyResult::witness_faults)
        .def_readonly("witness_edge", &FtVerifyResult::witness_edge)
        .def("__bool__", [](const FtVerifyResult& r) { return r.ok; });
    m.def("verify_ft", &verify_ft, py::arg("g"), py::arg("h"), py::arg("k"), py::arg("r"),
          py::arg("max_fault_sets") = 1000000);
    m.def("verify_ft2_char", &verify_ft2_char);

    py::class_<OptimumResult>(m, "OptimumResult")
        .def_readonly("cost", &OptimumResult::cost)
        .def_readonly("edges", &OptimumResult::edges);
    m.def("brute_optimum_ft2", &brute_optimum_ft2);
    m.def("exact_optimum_ft2", &exact_optimum_ft2, py::arg("g"), py::arg("r"),
          py::arg("max_nodes") = 400000000ULL);

    py::class_<DemandFlows>(m, "DemandFlows")
        .def_readonly("demand", &DemandFlows::demand)
        .def_readonly("paths", &DemandFlows::paths)
        .def_readonly("flow", &DemandFlows::flow);
    py::class_<FractionalSolution>(m, "FractionalSolution")
        .def_readonly("x", &FractionalSolution::x)
        .def_readonly("flows", &FractionalSolution::flows)
        .def_readonly("objective", &FractionalSolution::objective)
        .def_readonly("cut_rounds", &FractionalSolution::cut_rounds)
        .def_readonly("cuts_added", &FractionalSolution::cuts_added);
    m.def("solve_lp", [](std::shared_ptr<Graph> g, int r, double eps, int max_cut_rounds,
                         bool use_kc_cuts) {
        SolveLpOptions opts;
        opts.eps = eps;
        opts.max_cut_rounds = max_cut_rounds;
        opts.use_kc_cuts = use_kc_cuts;
        return solve_lp(g, r, opts);
    }, py::arg("g"), py::arg("r"), py::arg("eps") = 1e-7, py::arg("max_cut_rounds") = 50,
       py::arg("use_kc_cuts") = true);
    m.def("solution_json", [](const Graph& g, const FractionalSolution& s) {
        return fractional_solution_json(g, s);
    });

    py::class_<ApproxReport>(m, "ApproxReport")
        .def_readonly("lp_value", &ApproxReport::lp_value)
        .def_readonly("alpha", &ApproxReport::alpha)
        .def_readonly("attempts", &ApproxReport::attempts)
        .def_readonly("cost", &ApproxReport::cost)
        .def_readonly("ratio", &ApproxReport::ratio)
        .def_readonly("accepted", &ApproxReport::accepted);
    py::class_<ApproxResult>(m, "ApproxResult")
        .def_readonly("spanner", &ApproxResult::spanner)
        .def_readonly("report", &ApproxResult::report);
    m.def("approx_ft2", [](std::shared_ptr<Graph> g, int r, uint64_t seed, double c_alpha,
                           int max_attempts) {
        RoundingConfig cfg;
        cfg.c_alpha = c_alpha;
        cfg.max_attempts = max_attempts;
        return approx_ft2(g, r, cfg, seed);
    }, py::arg("g"), py::arg("r"), py::arg("seed") = 0, py::arg("c_alpha") = 3.0,
       py::arg("max_attempts") = 20);

    py::class_<LllReport>(m, "LllReport")
        .def_readonly("alpha", &LllReport::alpha)
        .def_readonly("delta", &LllReport::delta)
        .def_readonly("resamples", &LllReport::resamples)
        .def_readonly("cost", &LllReport::cost)
        .def_readonly("dependency_degree", &LllReport::dependency_degree)
        .def_readonly("event_prob_estimate", &LllReport::event_prob_estimate)
        .def_readonly("trace", &LllReport::trace);
    py::class_<LllResult>(m, "LllResult")
        .def_readonly("spanner", &LllResult::spanner)
        .def_readonly("report", &LllResult::report);
    m.def("lll_round", [](std::shared_ptr<Graph> g, int r, const std::vector<double>& x,
                          uint64_t seed, double c_alpha, int max_resamples) {
        RoundingConfig cfg;
        cfg.c_alpha = c_alpha;
        cfg.mode = AlphaMode::log_delta;
        cfg.max_resamples = max_resamples;
        return lll_round(g, r, x, cfg, seed);
    }, py::arg("g"), py::arg("r"), py::arg("x"), py::arg("seed") = 0, py::arg("c_alpha") = 6.0,
       py::arg("max_resamples") = 0);

    py::class_<Partition::Cluster>(m, "Cluster")
        .def_readonly("center", &Partition::Cluster::center)
        .def_readonly("members", &Partition::Cluster::members);
    py::class_<Partition>(m, "Partition")
        .def_readonly("cluster_of", &Partition::cluster_of)
        .def_readonly("clusters", &Partition::clusters);
    m.def("padded_decomposition", [](const Graph& g, double p_geom, int r_cap, uint64_t seed) {
        return padded_decomposition(g, p_geom, r_cap, seed);
    }, py::arg("g"), py::arg("p_geom") = 0.1, py::arg("r_cap") = 0, py::arg("seed") = 0);
    m.def("default_decomposition_radius", &default_decomposition_radius);
    m.def("vertex_padded", &vertex_padded);

    py::class_<SimTrace>(m, "SimTrace")
        .def_readonly("rounds_used", &SimTrace::rounds_used)
        .def_readonly("messages_per_round", &SimTrace::messages_per_round)
        .def("to_jsonl", &SimTrace::to_jsonl);

    py::class_<DistFt2Report>(m, "DistFt2Report")
        .def_readonly("lp_central", &DistFt2Report::lp_central)
        .def_readonly("xtilde_cost", &DistFt2Report::xtilde_cost)
        .def_readonly("cost", &DistFt2Report::cost)
        .def_readonly("ratio", &DistFt2Report::ratio)
        .def_readonly("alpha", &DistFt2Report::alpha)
        .def_readonly("iterations", &DistFt2Report::iterations)
        .def_readonly("rounds_used", &DistFt2Report::rounds_used)
        .def_readonly("verified", &DistFt2Report::verified)
        .def_readonly("residual_violated_cuts", &DistFt2Report::residual_violated_cuts);
    py::class_<DistFt2Result>(m, "DistFt2Result")
        .def_readonly("spanner", &DistFt2Result::spanner)
        .def_readonly("trace", &DistFt2Result::trace)
        .def_readonly("report", &DistFt2Result::report)
        .def_readonly("xtilde", &DistFt2Result::xtilde);
    m.def("distributed_ft2", [](std::shared_ptr<Graph> g, int r, uint64_t seed, int t, int r_cap,
                                double p_geom) {
        DistFt2Options opts;
        opts.t = t;
        opts.r_cap = r_cap;
        opts.p_geom = p_geom;
        return distributed_ft2(g, r, opts, seed);
    }, py::arg("g"), py::arg("r"), py::arg("seed") = 0, py::arg("t") = 0, py::arg("r_cap") = 0,
       py::arg("p_geom") = 0.1);

    py::class_<DistConvertResult>(m, "DistConvertResult")
        .def_readonly("spanner", &DistConvertResult::spanner)
        .def_readonly("trace", &DistConvertResult::trace)
        .def_readonly("rounds_per_iteration", &DistConvertResult::rounds_per_iteration);
    m.def("distributed_ft_convert", [](std::shared_ptr<Graph> g, int k, int r, int iterations,
                                       uint64_t seed) {
        return distributed_ft_convert(g, k, r, iterations, seed, clustering_base_program(k));
    }, py::arg("g"), py::arg("k"), py::arg("r"), py::arg("iterations"), py::arg("seed") = 0);
}
