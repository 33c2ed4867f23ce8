#include "ftspan/local_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ftspan/errors.hpp"
#include "ftspan/oracle.hpp"
#include "ftspan/rng.hpp"

namespace ftspan {

namespace wire {

inline void put_i32(Payload& s, int32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((static_cast<uint32_t>(v) >> (8 * i)) & 0xff));
}
inline int32_t get_i32(const Payload& s, size_t& pos) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(s[pos++])) << (8 * i);
    return static_cast<int32_t>(v);
}
inline void put_u8(Payload& s, uint8_t v) { s.push_back(static_cast<char>(v)); }
inline uint8_t get_u8(const Payload& s, size_t& pos) { return static_cast<uint8_t>(s[pos++]); }
inline void put_f64(Payload& s, double d) {
    uint64_t v = std::bit_cast<uint64_t>(d);
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline double get_f64(const Payload& s, size_t& pos) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<uint8_t>(s[pos++])) << (8 * i);
    return std::bit_cast<double>(v);
}
inline void put_str(Payload& s, const Payload& d) {
    put_i32(s, static_cast<int32_t>(d.size()));
    s.append(d);
}
inline Payload get_str(const Payload& s, size_t& pos) {
    int32_t len = get_i32(s, pos);
    Payload d = s.substr(pos, static_cast<size_t>(len));
    pos += static_cast<size_t>(len);
    return d;
}

} // namespace wire

// --- simulator ---------------------------------------------------------------

std::string SimTrace::to_jsonl() const {
    std::ostringstream out;
    for (size_t i = 0; i < messages_per_round.size(); ++i) {
        nlohmann::json j;
        j["round"] = i + 1;
        j["messages"] = messages_per_round[i];
        j["bytes"] = bytes_per_round[i];
        out << j.dump() << "\n";
    }
    nlohmann::json s;
    uint64_t total_msgs = 0, total_bytes = 0;
    for (int m : messages_per_round) total_msgs += static_cast<uint64_t>(m);
    for (uint64_t b : bytes_per_round) total_bytes += b;
    s["summary"]["rounds_used"] = rounds_used;
    s["summary"]["total_messages"] = total_msgs;
    s["summary"]["total_bytes"] = total_bytes;
    out << s.dump() << "\n";
    return out.str();
}

SimTrace run_simulation(const Graph& g, std::vector<std::unique_ptr<NodeProgram>>& programs,
                        int max_rounds, uint64_t seed) {
    int n = g.vertex_count();
    if (static_cast<int>(programs.size()) != n)
        throw InputError("run_simulation needs one program slot per vertex");
    SimTrace trace;
    trace.outputs.assign(static_cast<size_t>(n), Payload{});
    std::vector<char> active(static_cast<size_t>(n), 0);
    int remaining = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (!g.vertex_alive(v) || !programs[static_cast<size_t>(v)]) continue;
        NodeProgram::Env env{v, g.undirected_neighbors(v),
                             derive_seed(seed, 0x6e6f6465, static_cast<uint64_t>(v))};
        if (programs[static_cast<size_t>(v)]->init(env)) {
            trace.outputs[static_cast<size_t>(v)] = programs[static_cast<size_t>(v)]->output();
        } else {
            active[static_cast<size_t>(v)] = 1;
            ++remaining;
        }
    }
    std::vector<std::vector<Msg>> inbox(static_cast<size_t>(n));
    std::vector<std::pair<VertexId, Payload>> outbox;
    for (int round = 1; remaining > 0 && round <= max_rounds; ++round) {
        int msgs = 0;
        uint64_t bytes = 0;
        for (auto& q : inbox) q.clear();
        for (VertexId v = 0; v < n; ++v) {
            if (!active[static_cast<size_t>(v)]) continue;
            outbox.clear();
            programs[static_cast<size_t>(v)]->send(round, outbox);
            const auto& nb = g.undirected_neighbors(v);
            for (auto& [dest, data] : outbox) {
                if (!std::binary_search(nb.begin(), nb.end(), dest))
                    throw SimulationFault("message to non-neighbor " + std::to_string(dest), v, round);
                ++msgs;
                bytes += data.size();
                inbox[static_cast<size_t>(dest)].push_back(Msg{v, std::move(data)});
            }
        }
        trace.messages_per_round.push_back(msgs);
        trace.bytes_per_round.push_back(bytes);
        trace.rounds_used = round;
        for (VertexId v = 0; v < n; ++v) {
            if (!active[static_cast<size_t>(v)]) continue;
            if (programs[static_cast<size_t>(v)]->receive(round, inbox[static_cast<size_t>(v)])) {
                active[static_cast<size_t>(v)] = 0;
                --remaining;
                trace.outputs[static_cast<size_t>(v)] = programs[static_cast<size_t>(v)]->output();
            }
        }
    }
    return trace;
}

// --- min-id flood ------------------------------------------------------------

namespace {

// Every origin travels up to its budget many hops; nodes remember the first
// delivery of each origin (which arrives along a shortest path) and its
// sender, forming a parent pointer back toward the origin.
struct MinIdFlood {
    std::map<VertexId, int> budget;
    std::map<VertexId, VertexId> parent;
    std::vector<std::pair<VertexId, int>> fresh;

    void start(VertexId me, int radius) {
        budget.clear();
        parent.clear();
        fresh.clear();
        budget[me] = radius;
        parent[me] = me;
        fresh.push_back({me, radius});
    }

    void send(std::vector<std::pair<VertexId, Payload>>& out, const std::vector<VertexId>& nbrs) {
        Payload p;
        for (auto [o, b] : fresh)
            if (b >= 1) {
                wire::put_i32(p, o);
                wire::put_i32(p, b - 1);
            }
        fresh.clear();
        if (p.empty()) return;
        for (VertexId w : nbrs) out.push_back({w, p});
    }

    void receive(const std::vector<Msg>& inbox) {
        for (const Msg& m : inbox) {
            size_t pos = 0;
            while (pos < m.data.size()) {
                VertexId o = wire::get_i32(m.data, pos);
                int b = wire::get_i32(m.data, pos);
                if (budget.find(o) == budget.end()) {
                    budget[o] = b;
                    parent[o] = m.from;
                    fresh.push_back({o, b});
                }
            }
        }
    }

    VertexId center() const { return budget.begin()->first; }
};

class PaddedDecompProgram : public NodeProgram {
public:
    PaddedDecompProgram(double p_geom, int r_cap) : p_geom_(p_geom), r_cap_(r_cap) {}

    bool init(const Env& env) override {
        env_ = env;
        Rng rng(derive_seed(env.seed, 0x726164));
        flood_.start(env.id, rng.next_geometric(p_geom_, r_cap_));
        return false;
    }
    void send(int round, std::vector<std::pair<VertexId, Payload>>& out) override {
        (void)round;
        flood_.send(out, env_.neighbors);
    }
    bool receive(int round, const std::vector<Msg>& inbox) override {
        flood_.receive(inbox);
        return round >= r_cap_;
    }
    Payload output() const override {
        Payload p;
        wire::put_i32(p, flood_.center());
        return p;
    }

private:
    double p_geom_;
    int r_cap_;
    Env env_;
    MinIdFlood flood_;
};

} // namespace

int default_decomposition_radius(int n) {
    int r = static_cast<int>(std::ceil(4.0 * std::log(static_cast<double>(std::max(2, n)))));
    return std::max(1, r);
}

Partition partition_from_centers(const Graph& g, const std::vector<int>& center_of) {
    Partition p;
    p.cluster_of = center_of;
    std::map<int, std::vector<VertexId>> groups;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (!g.vertex_alive(v)) continue;
        if (center_of[static_cast<size_t>(v)] < 0) throw InputError("alive vertex without a cluster");
        groups[center_of[static_cast<size_t>(v)]].push_back(v);
    }
    for (auto& [center, members] : groups)
        p.clusters.push_back(Partition::Cluster{center, members});
    return p;
}

Partition padded_decomposition(const Graph& g, double p_geom, int r_cap, uint64_t seed,
                               SimTrace* trace) {
    if (!(p_geom > 0.0 && p_geom < 1.0)) throw InputError("p_geom must be in (0,1)");
    if (r_cap < 1) throw InputError("r_cap must be >= 1");
    std::vector<std::unique_ptr<NodeProgram>> programs(static_cast<size_t>(g.vertex_count()));
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (g.vertex_alive(v)) programs[static_cast<size_t>(v)] = std::make_unique<PaddedDecompProgram>(p_geom, r_cap);
    SimTrace t = run_simulation(g, programs, r_cap, seed);
    std::vector<int> center_of(static_cast<size_t>(g.vertex_count()), -1);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (!g.vertex_alive(v)) continue;
        size_t pos = 0;
        center_of[static_cast<size_t>(v)] = wire::get_i32(t.outputs[static_cast<size_t>(v)], pos);
    }
    if (trace) *trace = t;
    return partition_from_centers(g, center_of);
}

bool vertex_padded(const Graph& g, const Partition& p, VertexId x) {
    int mine = p.cluster_of[static_cast<size_t>(x)];
    for (VertexId w : g.undirected_neighbors(x))
        if (p.cluster_of[static_cast<size_t>(w)] != mine) return false;
    return true;
}

int cluster_weak_diameter(const Graph& g, const Partition::Cluster& c) {
    std::vector<VertexId> pts = c.members;
    if (std::find(pts.begin(), pts.end(), c.center) == pts.end()) pts.push_back(c.center);
    int diam = 0;
    for (VertexId v : pts) {
        std::vector<int> d = undirected_hop_distances(g, v);
        for (VertexId w : pts) {
            if (d[static_cast<size_t>(w)] < 0) return -1;  // disconnected in the host
            diam = std::max(diam, d[static_cast<size_t>(w)]);
        }
    }
    return diam;
}

// --- cluster LPs ---------------------------------------------------------------

ClusterLp build_cluster_graph(const Graph& g, const Partition& part, int cluster_index,
                              bool include_outside_edges) {
    if (cluster_index < 0 || cluster_index >= static_cast<int>(part.clusters.size()))
        throw InputError("cluster index out of range");
    const auto& cl = part.clusters[static_cast<size_t>(cluster_index)];
    std::vector<char> in_c(static_cast<size_t>(g.vertex_count()), 0);
    for (VertexId v : cl.members) in_c[static_cast<size_t>(v)] = 1;
    std::vector<char> keep(static_cast<size_t>(g.vertex_count()), 0);
    for (VertexId v : cl.members) {
        keep[static_cast<size_t>(v)] = 1;
        for (VertexId w : g.undirected_neighbors(v)) keep[static_cast<size_t>(w)] = 1;
    }
    ClusterLp out;
    std::vector<Edge> edges;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!g.edge_alive(e)) continue;
        const Edge& ed = g.edge(e);
        bool t_in = in_c[static_cast<size_t>(ed.tail)], h_in = in_c[static_cast<size_t>(ed.head)];
        if (!t_in && !h_in) {
            if (!include_outside_edges) continue;
            if (!keep[static_cast<size_t>(ed.tail)] || !keep[static_cast<size_t>(ed.head)]) continue;
        }
        Edge copy = ed;
        bool interior = t_in && h_in;
        if (!interior) copy.cost = 0.0;
        edges.push_back(copy);
        out.host_edge.push_back(e);
        out.in_cluster.push_back(interior ? 1 : 0);
    }
    out.graph = std::make_shared<Graph>(g.vertex_count(), g.directed(), std::move(edges));
    return out;
}

LpModel lp_for_cluster(const Graph& g, const Partition& part, int cluster_index, int r) {
    ClusterLp c = build_cluster_graph(g, part, cluster_index);
    return build_base_lp(c.graph, r);
}

// --- distributed 2-spanner ------------------------------------------------------

namespace {

struct DistFt2Config {
    int n = 0;
    int r = 0;
    int t = 1;
    int r_cap = 1;
    double p_geom = 0.1;
    double alpha = 1.0;
    double lp_eps = 1e-7;
    int lp_max_cut_rounds = 50;
    uint64_t algo_seed = 0;
};

class DistFt2Program : public NodeProgram {
public:
    DistFt2Program(std::shared_ptr<const DistFt2Config> cfg,
                   std::vector<std::pair<VertexId, double>> out_edges,
                   std::vector<std::pair<VertexId, double>> in_edges)
        : cfg_(std::move(cfg)), out_edges_(std::move(out_edges)), in_edges_(std::move(in_edges)) {}

    bool init(const Env& env) override {
        env_ = env;
        L_ = 3 * cfg_->r_cap + 1;
        return false;
    }

    void send(int round, std::vector<std::pair<VertexId, Payload>>& out) override {
        if (round <= cfg_->t * L_) {
            int local = (round - 1) % L_ + 1;
            int iter = (round - 1) / L_;
            int rc = cfg_->r_cap;
            if (local == 1) start_iteration(iter);
            if (local <= rc) {
                flood_.send(out, env_.neighbors);
            } else if (local == rc + 1) {
                my_center_ = flood_.center();
                Payload p;
                wire::put_i32(p, my_center_);
                for (VertexId w : env_.neighbors) out.push_back({w, p});
            } else if (local <= 2 * rc + 1) {
                if (local == rc + 2) enqueue_report();
                flush_packets(out);
            } else {
                if (local == 2 * rc + 2 && !gathered_.empty()) {
                    Payload blob = solve_cluster_lp();
                    accept_blob(env_.id, blob);
                }
                flush_blobs(out);
            }
        } else if (round == cfg_->t * L_ + 1) {
            threshold_ = Rng(derive_seed(cfg_->algo_seed, 0x5468, static_cast<uint64_t>(env_.id))).next_unit();
            compute_xtilde();
            Payload p;
            wire::put_f64(p, threshold_);
            for (VertexId w : env_.neighbors) out.push_back({w, p});
        } else {
            compute_inclusions();
            Payload p;
            for (auto& [a, b] : my_included_) {
                wire::put_i32(p, a);
                wire::put_i32(p, b);
            }
            for (VertexId w : env_.neighbors) out.push_back({w, p});
        }
    }

    bool receive(int round, const std::vector<Msg>& inbox) override {
        if (round <= cfg_->t * L_) {
            int local = (round - 1) % L_ + 1;
            int iter = (round - 1) / L_;
            int rc = cfg_->r_cap;
            if (local <= rc) {
                flood_.receive(inbox);
            } else if (local == rc + 1) {
                for (const Msg& m : inbox) {
                    size_t pos = 0;
                    nbr_center_[m.from] = wire::get_i32(m.data, pos);
                }
                cluster_history_.push_back(my_center_);
                (void)iter;
            } else if (local <= 2 * rc + 1) {
                for (const Msg& m : inbox) {
                    size_t pos = 0;
                    while (pos < m.data.size()) {
                        VertexId dest = wire::get_i32(m.data, pos);
                        Payload data = wire::get_str(m.data, pos);
                        children_[dest].insert(m.from);
                        if (dest == env_.id) gathered_.push_back(std::move(data));
                        else pending_pkts_.push_back({dest, std::move(data)});
                    }
                }
            } else {
                for (const Msg& m : inbox) {
                    size_t pos = 0;
                    while (pos < m.data.size()) {
                        VertexId cluster = wire::get_i32(m.data, pos);
                        Payload data = wire::get_str(m.data, pos);
                        accept_blob(cluster, data);
                    }
                }
            }
            return false;
        }
        if (round == cfg_->t * L_ + 1) {
            for (const Msg& m : inbox) {
                size_t pos = 0;
                nbr_threshold_[m.from] = wire::get_f64(m.data, pos);
            }
            return false;
        }
        return true;  // inclusion notifications absorbed; done
    }

    Payload output() const override {
        Payload p;
        wire::put_i32(p, cfg_->t);
        for (int c : cluster_history_) wire::put_i32(p, c);
        wire::put_f64(p, threshold_);
        wire::put_i32(p, static_cast<int32_t>(out_edges_.size()));
        for (auto& [head, cost] : out_edges_) {
            wire::put_i32(p, head);
            auto xt = xtilde_out_.find(head);
            wire::put_f64(p, xt == xtilde_out_.end() ? 0.0 : xt->second);
            wire::put_u8(p, included_out_.count(head) ? 1 : 0);
            auto it = out_data_.find(head);
            int cnt = it == out_data_.end() ? 0 : static_cast<int>(it->second.size());
            wire::put_i32(p, cnt);
            if (it != out_data_.end()) {
                for (const auto& d : it->second) {
                    wire::put_i32(p, d.iter);
                    wire::put_f64(p, d.x);
                    wire::put_i32(p, static_cast<int32_t>(d.flows.size()));
                    for (auto& [mid, fl] : d.flows) {
                        wire::put_i32(p, mid);
                        wire::put_f64(p, fl);
                    }
                }
            }
        }
        wire::put_i32(p, static_cast<int32_t>(in_edges_.size()));
        for (auto& [tail, cost] : in_edges_) {
            wire::put_i32(p, tail);
            auto xt = xtilde_in_.find(tail);
            wire::put_f64(p, xt == xtilde_in_.end() ? 0.0 : xt->second);
            wire::put_u8(p, included_in_.count(tail) ? 1 : 0);
        }
        return p;
    }

private:
    struct IterData {
        int iter = 0;
        double x = 0.0;
        std::vector<std::pair<VertexId, double>> flows;
    };

    void start_iteration(int iter) {
        iter_ = iter;
        nbr_center_.clear();
        children_.clear();
        gathered_.clear();
        pending_pkts_.clear();
        pending_blobs_.clear();
        blob_seen_.clear();
        my_center_ = env_.id;
        Rng rng(derive_seed(cfg_->algo_seed, 0x726164, static_cast<uint64_t>(iter),
                            static_cast<uint64_t>(env_.id)));
        flood_.start(env_.id, rng.next_geometric(cfg_->p_geom, cfg_->r_cap));
    }

    // member report: my id, then every incident arc with cost and the
    // other endpoint's cluster
    void enqueue_report() {
        Payload rep;
        wire::put_i32(rep, env_.id);
        wire::put_i32(rep, static_cast<int32_t>(out_edges_.size()));
        for (auto& [head, cost] : out_edges_) {
            wire::put_i32(rep, head);
            wire::put_f64(rep, cost);
            wire::put_i32(rep, center_of_neighbor(head));
        }
        wire::put_i32(rep, static_cast<int32_t>(in_edges_.size()));
        for (auto& [tail, cost] : in_edges_) {
            wire::put_i32(rep, tail);
            wire::put_f64(rep, cost);
            wire::put_i32(rep, center_of_neighbor(tail));
        }
        if (my_center_ == env_.id) gathered_.push_back(std::move(rep));
        else pending_pkts_.push_back({my_center_, std::move(rep)});
    }

    int center_of_neighbor(VertexId w) const {
        auto it = nbr_center_.find(w);
        return it == nbr_center_.end() ? -1 : it->second;
    }

    void flush_packets(std::vector<std::pair<VertexId, Payload>>& out) {
        std::map<VertexId, Payload> grouped;
        for (auto& [dest, data] : pending_pkts_) {
            auto pit = flood_.parent.find(dest);
            if (pit == flood_.parent.end()) continue;  // unreachable dest; drop
            Payload& buf = grouped[pit->second];
            wire::put_i32(buf, dest);
            wire::put_str(buf, data);
        }
        pending_pkts_.clear();
        for (auto& [w, buf] : grouped) out.push_back({w, std::move(buf)});
    }

    void accept_blob(VertexId cluster, const Payload& data) {
        if (!blob_seen_.insert(cluster).second) return;
        if (cluster == my_center_) extract_blob(data);
        pending_blobs_.push_back({cluster, data});
    }

    void flush_blobs(std::vector<std::pair<VertexId, Payload>>& out) {
        std::map<VertexId, Payload> grouped;
        for (auto& [cluster, data] : pending_blobs_) {
            auto cit = children_.find(cluster);
            if (cit == children_.end()) continue;
            for (VertexId child : cit->second) {
                Payload& buf = grouped[child];
                wire::put_i32(buf, cluster);
                wire::put_str(buf, data);
            }
        }
        pending_blobs_.clear();
        for (auto& [w, buf] : grouped) out.push_back({w, std::move(buf)});
    }

    // gathered reports -> cluster graph -> covering LP -> solution blob,
    // memoized on the member set (identical clusters across iterations are
    // common once radii are large)
    Payload solve_cluster_lp() {
        struct Rep {
            VertexId id;
            std::vector<std::tuple<VertexId, double, int>> outs, ins;
        };
        std::vector<Rep> reps;
        for (const Payload& raw : gathered_) {
            size_t pos = 0;
            Rep rp;
            rp.id = wire::get_i32(raw, pos);
            int no = wire::get_i32(raw, pos);
            for (int i = 0; i < no; ++i) {
                VertexId h = wire::get_i32(raw, pos);
                double c = wire::get_f64(raw, pos);
                int cl = wire::get_i32(raw, pos);
                rp.outs.push_back({h, c, cl});
            }
            int ni = wire::get_i32(raw, pos);
            for (int i = 0; i < ni; ++i) {
                VertexId tl = wire::get_i32(raw, pos);
                double c = wire::get_f64(raw, pos);
                int cl = wire::get_i32(raw, pos);
                rp.ins.push_back({tl, c, cl});
            }
            reps.push_back(std::move(rp));
        }
        std::sort(reps.begin(), reps.end(), [](const Rep& a, const Rep& b) { return a.id < b.id; });
        std::string key;
        for (const Rep& rp : reps) key += std::to_string(rp.id) + ",";
        auto hit = lp_cache_.find(key);
        if (hit != lp_cache_.end()) return hit->second;

        std::set<VertexId> members;
        for (const Rep& rp : reps) members.insert(rp.id);
        std::map<std::pair<VertexId, VertexId>, double> edge_cost;
        for (const Rep& rp : reps) {
            for (auto& [h, c, cl] : rp.outs)
                edge_cost[{rp.id, h}] = (members.count(h) ? c : 0.0);
            for (auto& [tl, c, cl] : rp.ins)
                edge_cost[{tl, rp.id}] = (members.count(tl) ? c : 0.0);
        }
        std::vector<Edge> edges;
        for (auto& [key2, cost] : edge_cost)
            edges.push_back({key2.first, key2.second, 1.0, cost});
        auto cg = std::make_shared<Graph>(cfg_->n, true, std::move(edges));
        SolveLpOptions opts;
        opts.eps = cfg_->lp_eps;
        opts.max_cut_rounds = cfg_->lp_max_cut_rounds;
        FractionalSolution sol;
        try {
            sol = solve_lp(cg, cfg_->r, opts);
        } catch (const std::exception& ex) {
            throw SolveError("cluster LP failed (iteration " + std::to_string(iter_) +
                             ", cluster " + std::to_string(env_.id) + "): " + ex.what());
        }

        // blob: interior edges with their x and per-midpoint flows
        Payload blob;
        std::vector<std::tuple<VertexId, VertexId, EdgeId>> interior;
        for (EdgeId e = 0; e < cg->edge_count(); ++e) {
            const Edge& ed = cg->edge(e);
            if (members.count(ed.tail) && members.count(ed.head)) interior.push_back({ed.tail, ed.head, e});
        }
        wire::put_i32(blob, static_cast<int32_t>(interior.size()));
        for (auto& [tl, hd, e] : interior) {
            wire::put_i32(blob, tl);
            wire::put_i32(blob, hd);
            wire::put_f64(blob, sol.x[static_cast<size_t>(e)]);
            const DemandFlows* df = nullptr;
            for (const DemandFlows& cand : sol.flows)
                if (cand.demand == e) {
                    df = &cand;
                    break;
                }
            int nf = df ? static_cast<int>(df->paths.size()) : 0;
            wire::put_i32(blob, nf);
            for (int i = 0; i < nf; ++i) {
                wire::put_i32(blob, df->paths[static_cast<size_t>(i)].mid);
                wire::put_f64(blob, df->flow[static_cast<size_t>(i)]);
            }
        }
        lp_cache_[key] = blob;
        return blob;
    }

    void extract_blob(const Payload& data) {
        size_t pos = 0;
        int ne = wire::get_i32(data, pos);
        for (int i = 0; i < ne; ++i) {
            VertexId tl = wire::get_i32(data, pos);
            VertexId hd = wire::get_i32(data, pos);
            double x = wire::get_f64(data, pos);
            int nf = wire::get_i32(data, pos);
            std::vector<std::pair<VertexId, double>> flows;
            for (int j = 0; j < nf; ++j) {
                VertexId mid = wire::get_i32(data, pos);
                double fl = wire::get_f64(data, pos);
                flows.push_back({mid, fl});
            }
            if (tl == env_.id) out_data_[hd].push_back(IterData{iter_, x, std::move(flows)});
            else if (hd == env_.id) in_data_[tl].push_back(IterData{iter_, x, {}});
        }
    }

    void compute_xtilde() {
        double scale = 4.0 / static_cast<double>(cfg_->t);
        for (auto& [head, cost] : out_edges_) {
            double s = 0.0;
            auto it = out_data_.find(head);
            if (it != out_data_.end())
                for (const auto& d : it->second) s += d.x;
            xtilde_out_[head] = std::min(1.0, scale * s);
        }
        for (auto& [tail, cost] : in_edges_) {
            double s = 0.0;
            auto it = in_data_.find(tail);
            if (it != in_data_.end())
                for (const auto& d : it->second) s += d.x;
            xtilde_in_[tail] = std::min(1.0, scale * s);
        }
    }

    void compute_inclusions() {
        for (auto& [head, cost] : out_edges_) {
            auto tit = nbr_threshold_.find(head);
            double t_other = tit == nbr_threshold_.end() ? 1.0 : tit->second;
            if (std::min(threshold_, t_other) <= cfg_->alpha * xtilde_out_[head]) {
                my_included_.push_back({env_.id, head});
                included_out_.insert(head);
            }
        }
        for (auto& [tail, cost] : in_edges_) {
            auto tit = nbr_threshold_.find(tail);
            double t_other = tit == nbr_threshold_.end() ? 1.0 : tit->second;
            if (std::min(threshold_, t_other) <= cfg_->alpha * xtilde_in_[tail]) {
                my_included_.push_back({tail, env_.id});
                included_in_.insert(tail);
            }
        }
    }

    std::shared_ptr<const DistFt2Config> cfg_;
    std::vector<std::pair<VertexId, double>> out_edges_, in_edges_;
    Env env_;
    int L_ = 0, iter_ = 0;
    MinIdFlood flood_;
    VertexId my_center_ = -1;
    std::map<VertexId, int> nbr_center_;
    std::map<VertexId, std::set<VertexId>> children_;
    std::vector<Payload> gathered_;
    std::vector<std::pair<VertexId, Payload>> pending_pkts_;
    std::vector<std::pair<VertexId, Payload>> pending_blobs_;
    std::set<VertexId> blob_seen_;
    std::map<std::string, Payload> lp_cache_;
    std::vector<int> cluster_history_;
    std::map<VertexId, std::vector<IterData>> out_data_, in_data_;
    std::map<VertexId, double> xtilde_out_, xtilde_in_;
    std::map<VertexId, double> nbr_threshold_;
    double threshold_ = 1.0;
    std::vector<std::pair<VertexId, VertexId>> my_included_;
    std::set<VertexId> included_out_, included_in_;
};

} // namespace

DistFt2Result distributed_ft2(std::shared_ptr<const Graph> g, int r, const DistFt2Options& opts,
                              uint64_t seed, const FractionalSolution* central_lp) {
    if (!g) throw InputError("null graph");
    if (!g->directed()) throw InputError("distributed_ft2 expects a directed graph");
    if (!g->unit_lengths()) throw InputError("distributed_ft2 expects unit edge lengths");
    if (r < 0 || r > g->vertex_count()) throw InputError("fault budget out of range");

    int n = g->vertex_count();
    auto cfg = std::make_shared<DistFt2Config>();
    cfg->n = n;
    cfg->r = r;
    cfg->t = opts.t > 0
                 ? opts.t
                 : std::max(1, static_cast<int>(std::ceil(opts.c_t * std::log(static_cast<double>(std::max(2, n))))));
    cfg->r_cap = opts.r_cap > 0 ? opts.r_cap : default_decomposition_radius(n);
    cfg->p_geom = opts.p_geom;
    cfg->alpha = rounding_alpha(*g, opts.rounding);
    cfg->lp_eps = opts.lp_eps;
    cfg->lp_max_cut_rounds = opts.lp_max_cut_rounds;
    cfg->algo_seed = derive_seed(seed, 0x64697374);

    std::vector<std::unique_ptr<NodeProgram>> programs(static_cast<size_t>(n));
    for (VertexId v = 0; v < n; ++v) {
        if (!g->vertex_alive(v)) continue;
        std::vector<std::pair<VertexId, double>> outs, ins;
        for (auto [w, e] : g->out_arcs(v)) outs.push_back({w, g->edge(e).cost});
        for (auto [w, e] : g->in_arcs(v)) ins.push_back({w, g->edge(e).cost});
        programs[static_cast<size_t>(v)] = std::make_unique<DistFt2Program>(cfg, std::move(outs), std::move(ins));
    }
    int total_rounds = cfg->t * (3 * cfg->r_cap + 1) + 2;
    SimTrace trace = run_simulation(*g, programs, total_rounds, seed);

    // ---- parse node outputs -------------------------------------------------
    struct OutEdgeData {
        double xtilde = 0.0;
        bool included = false;
        std::vector<std::tuple<int, double, std::vector<std::pair<VertexId, double>>>> iters;
    };
    std::vector<std::vector<int>> clusters_per_node(static_cast<size_t>(n));
    std::map<std::pair<VertexId, VertexId>, OutEdgeData> out_edge_data;
    std::map<std::pair<VertexId, VertexId>, std::pair<double, bool>> in_edge_data;
    for (VertexId v = 0; v < n; ++v) {
        if (!g->vertex_alive(v)) continue;
        const Payload& raw = trace.outputs[static_cast<size_t>(v)];
        size_t pos = 0;
        int t_count = wire::get_i32(raw, pos);
        auto& hist = clusters_per_node[static_cast<size_t>(v)];
        for (int i = 0; i < t_count; ++i) hist.push_back(wire::get_i32(raw, pos));
        (void)wire::get_f64(raw, pos);  // threshold (not needed centrally)
        int no = wire::get_i32(raw, pos);
        for (int i = 0; i < no; ++i) {
            VertexId head = wire::get_i32(raw, pos);
            OutEdgeData d;
            d.xtilde = wire::get_f64(raw, pos);
            d.included = wire::get_u8(raw, pos) != 0;
            int cnt = wire::get_i32(raw, pos);
            for (int j = 0; j < cnt; ++j) {
                int it = wire::get_i32(raw, pos);
                double x = wire::get_f64(raw, pos);
                int nf = wire::get_i32(raw, pos);
                std::vector<std::pair<VertexId, double>> flows;
                for (int q = 0; q < nf; ++q) {
                    VertexId mid = wire::get_i32(raw, pos);
                    double fl = wire::get_f64(raw, pos);
                    flows.push_back({mid, fl});
                }
                d.iters.push_back({it, x, std::move(flows)});
            }
            out_edge_data[{v, head}] = std::move(d);
        }
        int ni = wire::get_i32(raw, pos);
        for (int i = 0; i < ni; ++i) {
            VertexId tail = wire::get_i32(raw, pos);
            double xt = wire::get_f64(raw, pos);
            bool inc = wire::get_u8(raw, pos) != 0;
            in_edge_data[{tail, v}] = {xt, inc};
        }
    }

    DistFt2Result result;
    result.partitions.reserve(static_cast<size_t>(cfg->t));
    for (int i = 0; i < cfg->t; ++i) {
        std::vector<int> center_of(static_cast<size_t>(n), -1);
        for (VertexId v = 0; v < n; ++v)
            if (g->vertex_alive(v)) center_of[static_cast<size_t>(v)] = clusters_per_node[static_cast<size_t>(v)][static_cast<size_t>(i)];
        result.partitions.push_back(partition_from_centers(*g, center_of));
    }

    result.xtilde.assign(static_cast<size_t>(g->edge_count()), 0.0);
    std::vector<EdgeId> included;
    for (EdgeId e = 0; e < g->edge_count(); ++e) {
        if (!g->edge_alive(e)) continue;
        const Edge& ed = g->edge(e);
        auto ot = out_edge_data.find({ed.tail, ed.head});
        if (ot == out_edge_data.end()) continue;
        result.xtilde[static_cast<size_t>(e)] = ot->second.xtilde;
        auto it = in_edge_data.find({ed.tail, ed.head});
        if (it != in_edge_data.end() &&
            (std::fabs(it->second.first - ot->second.xtilde) > 1e-9 || it->second.second != ot->second.included))
            throw SolveError("endpoint disagreement on edge " + std::to_string(ed.tail) + "->" +
                             std::to_string(ed.head));
        if (ot->second.included) included.push_back(e);
    }
    result.spanner = make_spanner(g, std::move(included), SpannerMeta{"ft2-dist", 2.0, r, seed});

    DistFt2Report rep;
    rep.seed = seed;
    rep.iterations = cfg->t;
    rep.alpha = cfg->alpha;
    rep.rounds_used = trace.rounds_used;
    for (int i = 0; i < cfg->t; ++i)
        rep.clusters_per_iteration.push_back(static_cast<int>(result.partitions[static_cast<size_t>(i)].clusters.size()));

    for (EdgeId e = 0; e < g->edge_count(); ++e)
        if (g->edge_alive(e)) rep.xtilde_cost += g->edge(e).cost * result.xtilde[static_cast<size_t>(e)];

    // averaged flows over the iterations where the tail's whole neighborhood
    // shared one cluster, then a separation pass instead of assuming
    // feasibility
    FractionalSolution averaged;
    averaged.x = result.xtilde;
    for (EdgeId e = 0; e < g->edge_count(); ++e) {
        if (!g->edge_alive(e)) continue;
        const Edge& ed = g->edge(e);
        DemandFlows df;
        df.demand = e;
        df.paths = length2_paths(*g, ed.tail, ed.head);
        df.flow.assign(df.paths.size(), 0.0);
        std::vector<int> padded_iters;
        for (int i = 0; i < cfg->t; ++i) {
            const Partition& part = result.partitions[static_cast<size_t>(i)];
            int c = part.cluster_of[static_cast<size_t>(ed.tail)];
            bool all_same = true;
            for (VertexId w : g->undirected_neighbors(ed.tail))
                if (part.cluster_of[static_cast<size_t>(w)] != c) {
                    all_same = false;
                    break;
                }
            if (all_same) padded_iters.push_back(i);
        }
        if (!padded_iters.empty()) {
            const auto& iters = out_edge_data[{ed.tail, ed.head}].iters;
            for (int i : padded_iters) {
                for (const auto& [it, x, flows] : iters) {
                    if (it != i) continue;
                    for (auto& [mid, fl] : flows) {
                        for (size_t q = 0; q < df.paths.size(); ++q)
                            if (df.paths[q].mid == mid) df.flow[q] += fl;
                    }
                }
            }
            for (double& fl : df.flow) fl /= static_cast<double>(padded_iters.size());
        }
        averaged.flows.push_back(std::move(df));
    }
    auto residual = separation_oracle(*g, r, averaged, 2 * opts.lp_eps);
    rep.residual_violated_cuts = static_cast<int>(residual.size());
    for (const auto& cut : residual) {
        // recompute the violation magnitude
        const DemandFlows* df = nullptr;
        for (const DemandFlows& cand : averaged.flows)
            if (cand.demand == cut.demand) {
                df = &cand;
                break;
            }
        double need = static_cast<double>(r + 1 - static_cast<int>(cut.w_mids.size()));
        double lhs = need * averaged.x[static_cast<size_t>(cut.demand)];
        for (size_t q = 0; q < df->paths.size(); ++q)
            if (!std::binary_search(cut.w_mids.begin(), cut.w_mids.end(), df->paths[q].mid))
                lhs += df->flow[q];
        rep.residual_violation = std::max(rep.residual_violation, need - lhs);
    }

    FractionalSolution central;
    if (central_lp) {
        central = *central_lp;
    } else {
        SolveLpOptions lp_opts;
        lp_opts.eps = opts.lp_eps;
        lp_opts.max_cut_rounds = opts.lp_max_cut_rounds;
        central = solve_lp(g, r, lp_opts);
    }
    rep.lp_central = central.objective;
    rep.cost = result.spanner.total_cost();
    rep.ratio = rep.lp_central > 0 ? rep.cost / rep.lp_central : 0.0;
    rep.verified = verify_ft2_char(*g, result.spanner, r).ok;
    result.report = rep;
    result.trace = std::move(trace);
    return result;
}

// --- distributed conversion -----------------------------------------------------

namespace {

// Flood ids a fixed number of hops while recording full paths, join the
// smallest id heard, buy that path, and buy every edge between different
// clusters.
class ClusteringBaseNode : public NodeProgram {
public:
    explicit ClusteringBaseNode(int k) { radius_ = std::max(1, (k - 1) / 2); }

    bool init(const Env& env) override {
        env_ = env;
        known_[env.id] = {env.id};  // path from origin to me (just myself)
        fresh_.push_back(env.id);
        return false;
    }

    void send(int round, std::vector<std::pair<VertexId, Payload>>& out) override {
        if (round <= radius_) {
            Payload p;
            for (VertexId o : fresh_) {
                const auto& path = known_[o];
                if (static_cast<int>(path.size()) - 1 >= radius_) continue;  // budget spent
                wire::put_i32(p, o);
                wire::put_i32(p, static_cast<int32_t>(path.size()));
                for (VertexId v : path) wire::put_i32(p, v);
            }
            fresh_.clear();
            if (!p.empty())
                for (VertexId w : env_.neighbors) out.push_back({w, p});
        } else if (round == radius_ + 1) {
            center_ = known_.begin()->first;
            const auto& path = known_[center_];
            for (size_t i = 0; i + 1 < path.size(); ++i) select(path[i], path[i + 1]);
            Payload p;
            wire::put_i32(p, center_);
            for (VertexId w : env_.neighbors) out.push_back({w, p});
        } else {
            for (auto& [w, c] : nbr_center_)
                if (c != center_) select(env_.id, w);
            Payload p;  // notification round: share the full selection
            for (auto& [a, b] : selected_) {
                wire::put_i32(p, a);
                wire::put_i32(p, b);
            }
            for (VertexId w : env_.neighbors) out.push_back({w, p});
        }
    }

    bool receive(int round, const std::vector<Msg>& inbox) override {
        if (round <= radius_) {
            for (const Msg& m : inbox) {
                size_t pos = 0;
                while (pos < m.data.size()) {
                    VertexId o = wire::get_i32(m.data, pos);
                    int len = wire::get_i32(m.data, pos);
                    std::vector<VertexId> path;
                    for (int i = 0; i < len; ++i) path.push_back(wire::get_i32(m.data, pos));
                    if (known_.find(o) == known_.end()) {
                        path.push_back(env_.id);
                        known_[o] = std::move(path);
                        fresh_.push_back(o);
                    }
                }
            }
            return false;
        }
        if (round == radius_ + 1) {
            for (const Msg& m : inbox) {
                size_t pos = 0;
                nbr_center_[m.from] = wire::get_i32(m.data, pos);
            }
            return false;
        }
        return true;
    }

    Payload output() const override {
        Payload p;
        for (auto& [a, b] : selected_) {
            wire::put_i32(p, a);
            wire::put_i32(p, b);
        }
        return p;
    }

private:
    void select(VertexId a, VertexId b) {
        if (a > b) std::swap(a, b);
        selected_.insert({a, b});
    }

    int radius_ = 1;
    Env env_;
    std::map<VertexId, std::vector<VertexId>> known_;
    std::vector<VertexId> fresh_;
    VertexId center_ = -1;
    std::map<VertexId, int> nbr_center_;
    std::set<std::pair<VertexId, VertexId>> selected_;
};

class ConvertWrapperNode : public NodeProgram {
public:
    ConvertWrapperNode(const DistributedBase& base, int k, int r, int iterations)
        : base_(base), k_(k), r_(r), iterations_(iterations) {
        block_ = base_.rounds + 1;
    }

    bool init(const Env& env) override {
        env_ = env;
        return iterations_ <= 0;
    }

    void send(int round, std::vector<std::pair<VertexId, Payload>>& out) override {
        int local = (round - 1) % block_ + 1;
        int iter = (round - 1) / block_;
        if (local == 1) {
            double p_join = r_ == 0 ? 0.0 : (r_ == 1 ? 0.5 : 1.0 - 1.0 / static_cast<double>(r_));
            Rng rng(derive_seed(env_.seed, 0x4a4f494e, static_cast<uint64_t>(iter)));
            in_j_ = rng.next_bool(p_join);
            Payload p;
            wire::put_u8(p, in_j_ ? 1 : 0);
            for (VertexId w : env_.neighbors) out.push_back({w, p});
            return;
        }
        if (!in_j_ && inner_ && !inner_done_) inner_->send(local - 1, out);
    }

    bool receive(int round, const std::vector<Msg>& inbox) override {
        int local = (round - 1) % block_ + 1;
        int iter = (round - 1) / block_;
        if (local == 1) {
            live_nbrs_.clear();
            for (const Msg& m : inbox) {
                size_t pos = 0;
                if (wire::get_u8(m.data, pos) == 0) live_nbrs_.push_back(m.from);
            }
            std::sort(live_nbrs_.begin(), live_nbrs_.end());
            inner_.reset();
            inner_done_ = false;
            if (!in_j_) {
                inner_ = base_.make(k_);
                Env sub{env_.id, live_nbrs_, derive_seed(env_.seed, 0x62617365, static_cast<uint64_t>(iter))};
                if (inner_->init(sub)) {
                    collect();
                    inner_done_ = true;
                }
            }
            return false;
        }
        if (!in_j_ && inner_ && !inner_done_) {
            if (inner_->receive(local - 1, inbox)) {
                collect();
                inner_done_ = true;
            }
        }
        return local == block_ && iter == iterations_ - 1;
    }

    Payload output() const override {
        Payload p;
        for (auto& [a, b] : selected_) {
            wire::put_i32(p, a);
            wire::put_i32(p, b);
        }
        return p;
    }

private:
    void collect() {
        Payload got = inner_->output();
        size_t pos = 0;
        while (pos < got.size()) {
            VertexId a = wire::get_i32(got, pos);
            VertexId b = wire::get_i32(got, pos);
            if (a > b) std::swap(a, b);
            selected_.insert({a, b});
        }
    }

    const DistributedBase& base_;
    int k_, r_, iterations_, block_;
    Env env_;
    bool in_j_ = false;
    bool inner_done_ = false;
    std::vector<VertexId> live_nbrs_;
    std::unique_ptr<NodeProgram> inner_;
    std::set<std::pair<VertexId, VertexId>> selected_;
};

} // namespace

DistributedBase clustering_base_program(int k) {
    if (k < 3 || k % 2 == 0) throw InputError("clustering base needs odd k >= 3");
    DistributedBase base;
    base.name = "min-id-clustering";
    base.rounds = std::max(1, (k - 1) / 2) + 2;
    base.make = [](int kk) -> std::unique_ptr<NodeProgram> {
        return std::make_unique<ClusteringBaseNode>(kk);
    };
    return base;
}

DistConvertResult distributed_ft_convert(std::shared_ptr<const Graph> g, int k, int r,
                                         int iterations, uint64_t seed,
                                         const DistributedBase& base) {
    if (!g) throw InputError("null graph");
    if (g->directed()) throw InputError("distributed_ft_convert expects an undirected graph");
    if (!g->unit_lengths()) throw InputError("the clustering stand-in expects unit lengths");
    if (iterations < 1) throw InputError("iterations must be >= 1");
    if (r < 0 || (r >= g->vertex_count() && r > 0)) throw InputError("fault budget out of range");

    std::vector<std::unique_ptr<NodeProgram>> programs(static_cast<size_t>(g->vertex_count()));
    for (VertexId v = 0; v < g->vertex_count(); ++v)
        if (g->vertex_alive(v))
            programs[static_cast<size_t>(v)] = std::make_unique<ConvertWrapperNode>(base, k, r, iterations);
    int block = base.rounds + 1;
    SimTrace trace = run_simulation(*g, programs, iterations * block, seed);

    std::set<EdgeId> union_edges;
    for (VertexId v = 0; v < g->vertex_count(); ++v) {
        if (!g->vertex_alive(v)) continue;
        const Payload& raw = trace.outputs[static_cast<size_t>(v)];
        size_t pos = 0;
        while (pos < raw.size()) {
            VertexId a = wire::get_i32(raw, pos);
            VertexId b = wire::get_i32(raw, pos);
            auto e = g->find_edge(a, b);
            if (!e) throw SolveError("base program selected a non-existent edge");
            union_edges.insert(*e);
        }
    }
    DistConvertResult res;
    res.spanner = make_spanner(g, {union_edges.begin(), union_edges.end()},
                               SpannerMeta{"ft-dist(" + base.name + ")", static_cast<double>(k), r, seed});
    res.trace = std::move(trace);
    res.rounds_per_iteration = block;
    return res;
}

} // namespace ftspan
