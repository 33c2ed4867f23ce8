#include "ftspan/generators.hpp"

#include "ftspan/errors.hpp"
#include "ftspan/rng.hpp"

namespace ftspan {

Graph gen_complete(int n, bool directed) {
    if (n < 1) throw InputError("complete graph needs n >= 1");
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = directed ? 0 : u + 1; v < n; ++v)
            if (u != v) edges.push_back({u, v, 1.0, 1.0});
    return Graph(n, directed, std::move(edges));
}

Graph gen_gnp(int n, double prob, bool directed, uint64_t seed) {
    if (n < 0) throw InputError("gnp needs n >= 0");
    if (prob < 0 || prob > 1) throw InputError("gnp probability must be in [0,1]");
    Rng rng(derive_seed(seed, 0x676e70));
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = directed ? 0 : u + 1; v < n; ++v)
            if (u != v && rng.next_bool(prob)) edges.push_back({u, v, 1.0, 1.0});
    return Graph(n, directed, std::move(edges));
}

Graph gen_grid(int width, int height) {
    if (width < 1 || height < 1) throw InputError("grid needs positive dimensions");
    int n = width * height;
    auto at = [width](int x, int y) { return y * width + x; };
    std::vector<Edge> edges;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            if (x + 1 < width) edges.push_back({at(x, y), at(x + 1, y), 1.0, 1.0});
            if (y + 1 < height) edges.push_back({at(x, y), at(x, y + 1), 1.0, 1.0});
        }
    return Graph(n, false, std::move(edges));
}

Graph gen_path(int n) {
    if (n < 1) throw InputError("path needs n >= 1");
    std::vector<Edge> edges;
    for (VertexId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0, 1.0});
    return Graph(n, false, std::move(edges));
}

Graph gen_regular_circulant(int n, int d) {
    if (n < 3 || d < 1 || d >= n) throw InputError("circulant needs 1 <= d < n, n >= 3");
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (int j = 1; j <= d; ++j) edges.push_back({u, (u + j) % n, 1.0, 1.0});
    return Graph(n, true, std::move(edges));
}

Graph gen_petersen() {
    std::vector<Edge> edges;
    for (int i = 0; i < 5; ++i) {
        edges.push_back({i, (i + 1) % 5, 1.0, 1.0});          // outer cycle
        edges.push_back({i, i + 5, 1.0, 1.0});                // spoke
        edges.push_back({i + 5, 5 + (i + 2) % 5, 1.0, 1.0});  // inner pentagram
    }
    return Graph(10, false, std::move(edges));
}

Graph gen_gap_fixture(double expensive_cost, int r) {
    if (r < 1) throw InputError("gap fixture needs r >= 1");
    if (expensive_cost < 0) throw InputError("cost must be nonnegative");
    // vertex 0 = u, vertex 1 = v, vertices 2..r+1 = detour midpoints
    std::vector<Edge> edges;
    edges.push_back({0, 1, 1.0, expensive_cost});
    for (int i = 0; i < r; ++i) {
        VertexId w = 2 + i;
        edges.push_back({0, w, 1.0, 1.0});
        edges.push_back({w, 1, 1.0, 1.0});
    }
    return Graph(r + 2, true, std::move(edges));
}

} // namespace ftspan
