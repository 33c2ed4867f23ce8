#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ftspan/graph.hpp"

namespace ftspan {

struct SpannerMeta {
    std::string algorithm;
    double k = 1.0;
    int r = 0;
    uint64_t seed = 0;
};

// An edge subset of a host graph, tagged with how it was built.
struct Spanner {
    std::shared_ptr<const Graph> host;
    std::vector<EdgeId> edge_ids;  // sorted, unique
    SpannerMeta meta;

    bool contains(EdgeId e) const;
    std::vector<char> edge_mask() const;  // size = host edge count
    double total_cost() const;
    double total_length() const;
    int size() const { return static_cast<int>(edge_ids.size()); }
};

Spanner make_spanner(std::shared_ptr<const Graph> host, std::vector<EdgeId> edge_ids,
                     SpannerMeta meta);

// A pluggable k-spanner construction: must output a subgraph passing
// verify_stretch at stretch k on every input it accepts.
struct BaseSpannerAlgorithm {
    std::string name;
    std::function<Spanner(std::shared_ptr<const Graph>, int k)> run;
};

// Greedy scan in nondecreasing length (ties by edge id): keep an edge exactly
// when the current spanner distance between its endpoints exceeds k times its
// length. Undirected graphs with positive lengths only.
Spanner greedy_spanner(std::shared_ptr<const Graph> g, int k);

BaseSpannerAlgorithm greedy_base_algorithm();

struct StretchReport {
    bool ok = true;
    EdgeId witness = -1;           // a host edge whose stretch is violated
    double max_stretch = 0.0;      // max over host edges of d_spanner / length-lower-bound
};

// True iff every host edge (u,v) satisfies d_spanner(u,v) <= k * length(u,v).
StretchReport verify_stretch(const Graph& g, const Spanner& h, double k);

// --- spanner text I/O --------------------------------------------------------
//
// First non-comment line: "k r seed"; then one edge id per line. '#' comments.

void write_spanner(const Spanner& s, std::ostream& out,
                   const std::vector<std::string>& comment_lines = {});
void write_spanner_file(const Spanner& s, const std::string& path,
                        const std::vector<std::string>& comment_lines = {});
Spanner read_spanner(std::istream& in, std::shared_ptr<const Graph> host);
Spanner read_spanner_file(const std::string& path, std::shared_ptr<const Graph> host);

// JSON metrics record: edge count, total cost, max observed stretch.
std::string spanner_metrics_json(const Graph& g, const Spanner& s);

} // namespace ftspan
