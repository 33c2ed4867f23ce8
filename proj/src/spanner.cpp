#include "ftspan/spanner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ftspan/errors.hpp"

namespace ftspan {

bool Spanner::contains(EdgeId e) const {
    return std::binary_search(edge_ids.begin(), edge_ids.end(), e);
}

std::vector<char> Spanner::edge_mask() const {
    std::vector<char> mask(static_cast<size_t>(host->edge_count()), 0);
    for (EdgeId e : edge_ids) mask[static_cast<size_t>(e)] = 1;
    return mask;
}

double Spanner::total_cost() const {
    double c = 0;
    for (EdgeId e : edge_ids) c += host->edge(e).cost;
    return c;
}

double Spanner::total_length() const {
    double c = 0;
    for (EdgeId e : edge_ids) c += host->edge(e).length;
    return c;
}

Spanner make_spanner(std::shared_ptr<const Graph> host, std::vector<EdgeId> edge_ids,
                     SpannerMeta meta) {
    if (!host) throw InputError("spanner host must not be null");
    if (meta.k < 1) throw InputError("spanner stretch must be >= 1");
    if (meta.r < 0) throw InputError("spanner fault budget must be >= 0");
    std::sort(edge_ids.begin(), edge_ids.end());
    edge_ids.erase(std::unique(edge_ids.begin(), edge_ids.end()), edge_ids.end());
    for (EdgeId e : edge_ids)
        if (e < 0 || e >= host->edge_count())
            throw InputError("spanner edge id " + std::to_string(e) + " out of range");
    return Spanner{std::move(host), std::move(edge_ids), std::move(meta)};
}

Spanner greedy_spanner(std::shared_ptr<const Graph> g, int k) {
    if (!g) throw InputError("null graph");
    if (g->directed()) throw InputError("greedy_spanner expects an undirected graph");
    if (k < 1) throw InputError("stretch k must be >= 1");
    for (EdgeId e = 0; e < g->edge_count(); ++e)
        if (g->edge_alive(e) && g->edge(e).length <= 0)
            throw InputError("greedy_spanner expects positive edge lengths");

    std::vector<EdgeId> order;
    order.reserve(static_cast<size_t>(g->edge_count()));
    for (EdgeId e = 0; e < g->edge_count(); ++e)
        if (g->edge_alive(e)) order.push_back(e);
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
        double la = g->edge(a).length, lb = g->edge(b).length;
        return la != lb ? la < lb : a < b;
    });

    std::vector<char> selected(static_cast<size_t>(g->edge_count()), 0);
    std::vector<EdgeId> chosen;
    SearchMask mask{&selected, nullptr};
    for (EdgeId e : order) {
        const Edge& ed = g->edge(e);
        double bound = static_cast<double>(k) * ed.length;
        double d = bounded_distance(*g, ed.tail, ed.head, bound, mask);
        if (d > bound) {
            selected[static_cast<size_t>(e)] = 1;
            chosen.push_back(e);
        }
    }
    return make_spanner(std::move(g), std::move(chosen),
                        SpannerMeta{"greedy", static_cast<double>(k), 0, 0});
}

BaseSpannerAlgorithm greedy_base_algorithm() {
    return BaseSpannerAlgorithm{
        "greedy", [](std::shared_ptr<const Graph> g, int k) { return greedy_spanner(std::move(g), k); }};
}

StretchReport verify_stretch(const Graph& g, const Spanner& h, double k) {
    if (k < 1) throw InputError("stretch k must be >= 1");
    if (h.host->vertex_count() != g.vertex_count() || h.host->edge_count() != g.edge_count())
        throw InputError("spanner host does not match graph");
    StretchReport rep;
    std::vector<char> mask = h.edge_mask();
    SearchMask sm{&mask, nullptr};
    // Checking host edges suffices: every shortest path is a chain of edges.
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        const Edge& ed = g.edge(e);
        double bound = k * ed.length;
        double d = bounded_distance(g, ed.tail, ed.head, bound * (1 + 1e-12), sm);
        double stretch = ed.length > 0 ? d / ed.length : (d > 0 ? kInfDist : 1.0);
        rep.max_stretch = std::max(rep.max_stretch, stretch);
        if (d > bound * (1 + 1e-12)) {
            rep.ok = false;
            rep.witness = e;
            return rep;
        }
    }
    return rep;
}

void write_spanner(const Spanner& s, std::ostream& out,
                   const std::vector<std::string>& comment_lines) {
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    out << "# algorithm " << s.meta.algorithm << "\n";
    out << format_number(s.meta.k) << " " << s.meta.r << " " << s.meta.seed << "\n";
    for (EdgeId e : s.edge_ids) out << e << "\n";
}

void write_spanner_file(const Spanner& s, const std::string& path,
                        const std::vector<std::string>& comment_lines) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open output file: " + path);
    write_spanner(s, f, comment_lines);
}

Spanner read_spanner(std::istream& in, std::shared_ptr<const Graph> host) {
    std::string line;
    int line_no = 0;
    bool have_header = false;
    SpannerMeta meta;
    std::vector<EdgeId> ids;
    while (std::getline(in, line)) {
        ++line_no;
        auto pos = line.find('#');
        std::string body = (pos == std::string::npos) ? line : line.substr(0, pos);
        std::istringstream ls(body);
        if (!have_header) {
            double k;
            int r;
            uint64_t seed;
            if (!(ls >> k >> r >> seed)) {
                std::string probe;
                std::istringstream probe_ls(body);
                if (!(probe_ls >> probe)) continue;  // blank line
                throw ParseError("expected 'k r seed' header", line_no);
            }
            meta.k = k;
            meta.r = r;
            meta.seed = seed;
            have_header = true;
            continue;
        }
        long long id;
        if (!(ls >> id)) continue;
        if (id < 0 || id >= host->edge_count()) throw ParseError("edge id out of range", line_no);
        ids.push_back(static_cast<EdgeId>(id));
    }
    if (!have_header) throw ParseError("missing 'k r seed' header", line_no + 1);
    return make_spanner(std::move(host), std::move(ids), std::move(meta));
}

Spanner read_spanner_file(const std::string& path, std::shared_ptr<const Graph> host) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open spanner file: " + path);
    return read_spanner(f, std::move(host));
}

std::string spanner_metrics_json(const Graph& g, const Spanner& s) {
    StretchReport rep = verify_stretch(g, s, std::max(1.0, s.meta.k));
    nlohmann::json j;
    j["edge_count"] = s.size();
    j["total_cost"] = s.total_cost();
    j["max_stretch"] = (rep.max_stretch == kInfDist) ? -1.0 : rep.max_stretch;
    j["algorithm"] = s.meta.algorithm;
    j["k"] = s.meta.k;
    j["r"] = s.meta.r;
    j["seed"] = s.meta.seed;
    return j.dump(2);
}

} // namespace ftspan
