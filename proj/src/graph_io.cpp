#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ftspan/errors.hpp"
#include "ftspan/graph.hpp"

namespace ftspan {

namespace {

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    std::string s = (pos == std::string::npos) ? line : line.substr(0, pos);
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    return s;
}

} // namespace

Graph read_graph(std::istream& in) {
    std::string line;
    int line_no = 0;
    bool have_header = false;
    bool directed = true;
    int n = 0;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++line_no;
        std::string body = strip_comment(line);
        if (body.empty()) continue;
        std::istringstream ls(body);
        if (!have_header) {
            std::string mode;
            ls >> mode >> n;
            if (ls.fail() || (mode != "directed" && mode != "undirected"))
                throw ParseError("expected header 'directed <n>' or 'undirected <n>'", line_no);
            if (n < 0) throw ParseError("negative vertex count", line_no);
            directed = (mode == "directed");
            have_header = true;
            continue;
        }
        long long tail, head;
        double length, cost;
        ls >> tail >> head >> length >> cost;
        if (ls.fail()) throw ParseError("expected 'tail head length cost'", line_no);
        std::string extra;
        if (ls >> extra) throw ParseError("trailing tokens after edge", line_no);
        if (tail < 0 || tail >= n || head < 0 || head >= n)
            throw ParseError("endpoint out of range", line_no);
        if (tail == head) throw ParseError("self-loop", line_no);
        if (length < 0) throw ParseError("negative length", line_no);
        if (cost < 0) throw ParseError("negative cost", line_no);
        VertexId t = static_cast<VertexId>(tail), h = static_cast<VertexId>(head);
        if (!directed && t > h) std::swap(t, h);
        for (const Edge& e : edges)
            if (e.tail == t && e.head == h) throw ParseError("duplicate edge", line_no);
        edges.push_back({t, h, length, cost});
    }
    if (!have_header) throw ParseError("empty input, missing header", line_no + 1);
    return Graph(n, directed, std::move(edges));
}

Graph read_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open graph file: " + path);
    return read_graph(f);
}

void write_graph(const Graph& g, std::ostream& out,
                 const std::vector<std::string>& comment_lines) {
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    out << (g.directed() ? "directed " : "undirected ") << g.vertex_count() << "\n";
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        const Edge& ed = g.edge(e);
        out << ed.tail << " " << ed.head << " " << format_number(ed.length) << " "
            << format_number(ed.cost) << "\n";
    }
}

void write_graph_file(const Graph& g, const std::string& path,
                      const std::vector<std::string>& comment_lines) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open output file: " + path);
    write_graph(g, f, comment_lines);
}

} // namespace ftspan
