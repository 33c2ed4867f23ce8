#include "ftspan/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <queue>
#include <set>

#include "ftspan/errors.hpp"

namespace ftspan {

Graph::Graph(int n, bool directed, std::vector<Edge> edges)
    : n_(n), directed_(directed), edges_(std::move(edges)) {
    if (n_ < 0) throw InputError("vertex count must be nonnegative");
    absent_.assign(static_cast<size_t>(n_), 0);
    std::set<std::pair<VertexId, VertexId>> seen;
    for (auto& e : edges_) {
        if (e.tail < 0 || e.tail >= n_ || e.head < 0 || e.head >= n_)
            throw InputError("edge endpoint out of range");
        if (e.tail == e.head) throw InputError("self-loops are not allowed");
        if (!(e.length >= 0.0)) throw InputError("edge length must be nonnegative");
        if (!(e.cost >= 0.0)) throw InputError("edge cost must be nonnegative");
        if (!directed_ && e.tail > e.head) std::swap(e.tail, e.head);
        if (!seen.insert({e.tail, e.head}).second)
            throw InputError("duplicate edge " + std::to_string(e.tail) + "->" +
                             std::to_string(e.head));
    }
    build_index();
}

void Graph::build_index() {
    size_t n = static_cast<size_t>(n_);
    out_.assign(n, {});
    if (directed_) in_.assign(n, {});
    nbr_.assign(n, {});
    for (EdgeId id = 0; id < edge_count(); ++id) {
        const Edge& e = edges_[static_cast<size_t>(id)];
        if (!vertex_alive(e.tail) || !vertex_alive(e.head)) continue;
        out_[static_cast<size_t>(e.tail)].push_back({e.head, id});
        if (directed_) {
            in_[static_cast<size_t>(e.head)].push_back({e.tail, id});
        } else {
            out_[static_cast<size_t>(e.head)].push_back({e.tail, id});
        }
        nbr_[static_cast<size_t>(e.tail)].push_back(e.head);
        nbr_[static_cast<size_t>(e.head)].push_back(e.tail);
    }
    for (auto& a : out_) std::sort(a.begin(), a.end());
    for (auto& a : in_) std::sort(a.begin(), a.end());
    for (auto& v : nbr_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

int Graph::alive_vertex_count() const {
    int c = 0;
    for (VertexId v = 0; v < n_; ++v)
        if (vertex_alive(v)) ++c;
    return c;
}

int Graph::alive_edge_count() const {
    int c = 0;
    for (EdgeId e = 0; e < edge_count(); ++e)
        if (edge_alive(e)) ++c;
    return c;
}

std::vector<VertexId> Graph::alive_vertices() const {
    std::vector<VertexId> out;
    out.reserve(static_cast<size_t>(n_));
    for (VertexId v = 0; v < n_; ++v)
        if (vertex_alive(v)) out.push_back(v);
    return out;
}

std::optional<EdgeId> Graph::find_edge(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& arcs = out_[static_cast<size_t>(u)];
    auto it = std::lower_bound(arcs.begin(), arcs.end(), std::pair<VertexId, EdgeId>{v, 0});
    if (it != arcs.end() && it->first == v) return it->second;
    return std::nullopt;
}

bool Graph::unit_lengths() const {
    for (EdgeId e = 0; e < edge_count(); ++e)
        if (edge_alive(e) && edges_[static_cast<size_t>(e)].length != 1.0) return false;
    return true;
}

bool Graph::unit_costs() const {
    for (EdgeId e = 0; e < edge_count(); ++e)
        if (edge_alive(e) && edges_[static_cast<size_t>(e)].cost != 1.0) return false;
    return true;
}

int Graph::max_degree() const {
    int d = 0;
    for (VertexId v = 0; v < n_; ++v) {
        if (!vertex_alive(v)) continue;
        d = std::max(d, static_cast<int>(out_arcs(v).size()));
        d = std::max(d, static_cast<int>(in_arcs(v).size()));
    }
    return d;
}

void Graph::check_vertex(VertexId v) const {
    if (v < 0 || v >= n_) throw InputError("vertex id " + std::to_string(v) + " out of range");
}

FaultSet make_fault_set(std::vector<VertexId> vertices, int n) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    for (VertexId v : vertices)
        if (v < 0 || v >= n) throw InputError("fault vertex " + std::to_string(v) + " out of range");
    return vertices;
}

Graph remove_vertices(const Graph& g, const FaultSet& f) {
    Graph out;
    out.n_ = g.n_;
    out.directed_ = g.directed_;
    out.edges_ = g.edges_;  // ids preserved
    out.absent_ = g.absent_;
    for (VertexId v : f) {
        g.check_vertex(v);
        out.absent_[static_cast<size_t>(v)] = 1;
    }
    out.build_index();
    return out;
}

Graph directed_arcs(const Graph& g) {
    if (g.directed()) throw InputError("directed_arcs expects an undirected graph");
    std::vector<Edge> arcs;
    arcs.reserve(2 * g.edges().size());
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        const Edge& ed = g.edge(e);
        arcs.push_back(ed);
        arcs.push_back({ed.head, ed.tail, ed.length, ed.cost});
    }
    return Graph(g.vertex_count(), true, std::move(arcs));
}

bool SearchMask::usable_edge(const Graph& g, EdgeId e) const {
    (void)g;
    return !edge_keep || (*edge_keep)[static_cast<size_t>(e)];
}

bool SearchMask::usable_vertex(const Graph& g, VertexId v) const {
    return g.vertex_alive(v) && (!vertex_block || !(*vertex_block)[static_cast<size_t>(v)]);
}

namespace {

// Dijkstra core; stops once `target` is settled (pass -1 for full sweep).
// Distances strictly greater than `bound` are left at +inf.
std::vector<double> dijkstra(const Graph& g, VertexId src, VertexId target,
                             double bound, const SearchMask& mask) {
    g.check_vertex(src);
    std::vector<double> dist(static_cast<size_t>(g.vertex_count()), kInfDist);
    if (!mask.usable_vertex(g, src)) return dist;
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[static_cast<size_t>(src)] = 0.0;
    heap.push({0.0, src});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[static_cast<size_t>(v)]) continue;
        if (v == target) break;
        for (auto [w, e] : g.out_arcs(v)) {
            if (!mask.usable_edge(g, e) || !mask.usable_vertex(g, w)) continue;
            double nd = d + g.edge(e).length;
            if (nd > bound) continue;
            if (nd < dist[static_cast<size_t>(w)]) {
                dist[static_cast<size_t>(w)] = nd;
                heap.push({nd, w});
            }
        }
    }
    return dist;
}

} // namespace

std::vector<double> single_source_distances(const Graph& g, VertexId src,
                                            const SearchMask& mask) {
    return dijkstra(g, src, -1, kInfDist, mask);
}

double bounded_distance(const Graph& g, VertexId u, VertexId v, double bound,
                        const SearchMask& mask) {
    g.check_vertex(v);
    if (u == v) return mask.usable_vertex(g, u) ? 0.0 : kInfDist;
    auto dist = dijkstra(g, u, v, bound, mask);
    return dist[static_cast<size_t>(v)];
}

double shortest_path_dist(const Graph& g, VertexId u, VertexId v) {
    return bounded_distance(g, u, v, kInfDist);
}

std::vector<Path2> length2_paths(const Graph& g, VertexId u, VertexId v) {
    return length2_paths(g, u, v, SearchMask{});
}

std::vector<Path2> length2_paths(const Graph& g, VertexId u, VertexId v,
                                 const SearchMask& mask) {
    g.check_vertex(u);
    g.check_vertex(v);
    std::vector<Path2> out;
    if (!mask.usable_vertex(g, u) || !mask.usable_vertex(g, v)) return out;
    for (auto [z, e1] : g.out_arcs(u)) {
        if (z == v || !mask.usable_edge(g, e1) || !mask.usable_vertex(g, z)) continue;
        auto e2 = g.find_edge(z, v);
        if (e2 && mask.usable_edge(g, *e2)) out.push_back({u, z, v});
    }
    // out_arcs are sorted by neighbor, so paths come out ordered by mid.
    return out;
}

std::vector<int> undirected_hop_distances(const Graph& g, VertexId src) {
    g.check_vertex(src);
    std::vector<int> dist(static_cast<size_t>(g.vertex_count()), -1);
    if (!g.vertex_alive(src)) return dist;
    std::queue<VertexId> q;
    dist[static_cast<size_t>(src)] = 0;
    q.push(src);
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (VertexId w : g.undirected_neighbors(v)) {
            if (dist[static_cast<size_t>(w)] < 0) {
                dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
                q.push(w);
            }
        }
    }
    return dist;
}

std::string format_number(double x) {
    if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", x);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    return "0";
}

} // namespace ftspan
