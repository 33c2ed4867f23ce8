#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ftspan {

using VertexId = int;
using EdgeId = int;

constexpr double kInfDist = std::numeric_limits<double>::infinity();

struct Edge {
    VertexId tail = 0;
    VertexId head = 0;
    double length = 1.0;
    double cost = 1.0;
};

// A directed length-exactly-2 path tail -> mid -> head.
struct Path2 {
    VertexId tail = 0;
    VertexId mid = 0;
    VertexId head = 0;
    friend bool operator==(const Path2&, const Path2&) = default;
};

// Faulty vertices; kept sorted and unique.
using FaultSet = std::vector<VertexId>;

// Weighted graph with per-edge length and cost. Vertices are 0..n-1 and keep
// their ids forever: removing vertices marks them absent instead of
// re-indexing, so edge ids and fault sets stay meaningful across views.
// Immutable after construction; safe to share between threads.
class Graph {
public:
    Graph(int n, bool directed, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    bool directed() const { return directed_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[static_cast<size_t>(e)]; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    bool vertex_alive(VertexId v) const { return !absent_[static_cast<size_t>(v)]; }
    bool edge_alive(EdgeId e) const {
        const Edge& ed = edges_[static_cast<size_t>(e)];
        return vertex_alive(ed.tail) && vertex_alive(ed.head);
    }
    int alive_vertex_count() const;
    int alive_edge_count() const;
    std::vector<VertexId> alive_vertices() const;

    // Arcs leaving v (for undirected graphs: all incident edges, both ways).
    // Only alive edges appear.
    const std::vector<std::pair<VertexId, EdgeId>>& out_arcs(VertexId v) const {
        return out_[static_cast<size_t>(v)];
    }
    // Arcs entering v (undirected graphs: same as out_arcs).
    const std::vector<std::pair<VertexId, EdgeId>>& in_arcs(VertexId v) const {
        return directed_ ? in_[static_cast<size_t>(v)] : out_[static_cast<size_t>(v)];
    }

    // Undirected neighbor view (communication topology): distinct alive
    // vertices adjacent to v ignoring direction, sorted ascending.
    const std::vector<VertexId>& undirected_neighbors(VertexId v) const {
        return nbr_[static_cast<size_t>(v)];
    }

    // Edge id of u->v (directed sense; undirected: either orientation).
    std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;

    bool unit_lengths() const;
    bool unit_costs() const;
    int max_degree() const;  // max over alive vertices of max(out, in) degree

    void check_vertex(VertexId v) const;

private:
    int n_ = 0;
    bool directed_ = true;
    std::vector<Edge> edges_;
    std::vector<char> absent_;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> out_, in_;
    std::vector<std::vector<VertexId>> nbr_;

    friend Graph remove_vertices(const Graph& g, const FaultSet& f);
    Graph() = default;
    void build_index();
};

// Graph on the same id space with every edge touching f deleted and the
// vertices of f marked absent.
Graph remove_vertices(const Graph& g, const FaultSet& f);

// Explicit expansion of an undirected graph into the directed graph with two
// opposite arcs per edge (same length and cost). The stretch-2 pipeline is
// directed; this is the one sanctioned way in.
Graph directed_arcs(const Graph& g);

// Restrict searches without copying the graph.
struct SearchMask {
    const std::vector<char>* edge_keep = nullptr;       // size |edges|, 1 = usable
    const std::vector<char>* vertex_block = nullptr;    // size n, 1 = treat absent
    bool usable_edge(const Graph& g, EdgeId e) const;
    bool usable_vertex(const Graph& g, VertexId v) const;
};

// Dijkstra from src; dist[v] = +inf when unreachable or masked out.
std::vector<double> single_source_distances(const Graph& g, VertexId src,
                                            const SearchMask& mask = {});

// Distance u -> v with early exit: any value > bound is reported as +inf.
double bounded_distance(const Graph& g, VertexId u, VertexId v, double bound,
                        const SearchMask& mask = {});

// Shortest-path length u -> v; +inf if unreachable, 0 if u == v.
double shortest_path_dist(const Graph& g, VertexId u, VertexId v);

// All paths u -> mid -> v of length exactly two edges, sorted by mid.
std::vector<Path2> length2_paths(const Graph& g, VertexId u, VertexId v);
std::vector<Path2> length2_paths(const Graph& g, VertexId u, VertexId v,
                                 const SearchMask& mask);

// Hop distances (unit per edge) over the undirected view, for decomposition
// and cluster checks.
std::vector<int> undirected_hop_distances(const Graph& g, VertexId src);

// --- edge-list text I/O -----------------------------------------------------
//
// First line: "directed <n>" or "undirected <n>"; then one line per edge
// "tail head length cost". '#' starts a comment. Undirected edges are stored
// once with tail < head.

Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(const Graph& g, std::ostream& out,
                 const std::vector<std::string>& comment_lines = {});
void write_graph_file(const Graph& g, const std::string& path,
                      const std::vector<std::string>& comment_lines = {});

// Canonical number rendering shared by all text formats: integers print
// without a decimal point, everything else round-trips exactly.
std::string format_number(double x);

FaultSet make_fault_set(std::vector<VertexId> vertices, int n);

} // namespace ftspan
