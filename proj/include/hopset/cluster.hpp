#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hopset/costs.hpp"
#include "hopset/graph.hpp"

namespace hopset {

/// Vertex-disjoint clusters, each centered on a member vertex; the cluster id
/// is its center's vertex id. Vertices outside every cluster are inactive for
/// the phase but still conduct explorations.
struct Cluster {
    Vertex center = -1;
    std::vector<Vertex> members;
};

struct ClusterPartition {
    int phase = 0;
    std::vector<Cluster> clusters;
    std::vector<int> vertex_cluster;  // vertex -> cluster index, -1 when inactive

    static ClusterPartition singletons(int n) {
        ClusterPartition p;
        p.phase = 0;
        p.clusters.resize(static_cast<size_t>(n));
        p.vertex_cluster.resize(static_cast<size_t>(n));
        for (Vertex v = 0; v < n; ++v) {
            p.clusters[static_cast<size_t>(v)] = {v, {v}};
            p.vertex_cluster[static_cast<size_t>(v)] = v;
        }
        return p;
    }

    void rebuild_vertex_index(int n) {
        vertex_cluster.assign(static_cast<size_t>(n), -1);
        for (size_t c = 0; c < clusters.size(); ++c)
            for (Vertex v : clusters[c].members) vertex_cluster[static_cast<size_t>(v)] = static_cast<int>(c);
    }

    int cluster_count() const { return static_cast<int>(clusters.size()); }
};

/// Immutable path chain; `cum` is the weight accumulated from the chain's
/// first vertex. Shared tails keep per-step extension O(1).
struct PathNode {
    Vertex v;
    double cum;
    std::shared_ptr<const PathNode> prev;
};
using PathRef = std::shared_ptr<const PathNode>;

inline PathRef path_start(Vertex v) {
    return std::make_shared<PathNode>(PathNode{v, 0.0, nullptr});
}
inline PathRef path_extend(const PathRef& p, Vertex v, double edge_w) {
    return std::make_shared<PathNode>(PathNode{v, p->cum + edge_w, p});
}
inline double path_weight(const PathRef& p) { return p ? p->cum : 0.0; }

/// Materialize front-to-back vertex and cumulative-weight vectors.
inline void path_to_vectors(const PathRef& tail, std::vector<Vertex>& verts,
                            std::vector<double>& cum) {
    verts.clear();
    cum.clear();
    for (const PathNode* n = tail.get(); n != nullptr; n = n->prev.get()) {
        verts.push_back(n->v);
        cum.push_back(n->cum);
    }
    std::reverse(verts.begin(), verts.end());
    std::reverse(cum.begin(), cum.end());
}

/// Append `verts`/`rel_cum` (a path starting where `base` ends, relative
/// cumulative weights, first entry expected to repeat the junction vertex) to
/// the chain.
inline PathRef path_append(PathRef base, const std::vector<Vertex>& verts,
                           const std::vector<double>& rel_cum) {
    const double off = path_weight(base);
    for (size_t i = 0; i < verts.size(); ++i) {
        if (i == 0 && base && base->v == verts[0]) continue;
        base = std::make_shared<PathNode>(PathNode{verts[i], off + rel_cum[i], base});
    }
    return base;
}

/// Per-vertex path back to the center of the vertex's current cluster, as a
/// vertex list from the center to v with cumulative weights from the center.
/// Confined to edges of the exploration graph.
struct ClusterMemory {
    std::vector<std::vector<Vertex>> verts;
    std::vector<std::vector<double>> cum;

    static ClusterMemory singletons(int n) {
        ClusterMemory m;
        m.verts.resize(static_cast<size_t>(n));
        m.cum.resize(static_cast<size_t>(n));
        for (Vertex v = 0; v < n; ++v) {
            m.verts[static_cast<size_t>(v)] = {v};
            m.cum[static_cast<size_t>(v)] = {0.0};
        }
        return m;
    }
    bool empty() const { return verts.empty(); }
    double weight(Vertex v) const { return cum[static_cast<size_t>(v)].back(); }
};

struct ExploreRecord {
    int source = -1;     // originating cluster id (center vertex id)
    double dist = kInf;  // within-pulse filtered distance
    PathRef path;        // optional traversal path over the exploration graph
};

/// Sort/deduplicate a record array: order by id (distance tie-break), keep the
/// minimum-distance record per source, then order by distance with id
/// tie-break. Stable, so equal keys keep the earlier record.
inline void sort_dedup(std::vector<ExploreRecord>& m) {
    std::stable_sort(m.begin(), m.end(), [](const ExploreRecord& a, const ExploreRecord& b) {
        if (a.source != b.source) return a.source < b.source;
        return a.dist < b.dist;
    });
    size_t out = 0;
    for (size_t i = 0; i < m.size(); ++i) {
        if (out > 0 && m[out - 1].source == m[i].source) continue;
        m[out++] = m[i];
    }
    m.resize(out);
    std::stable_sort(m.begin(), m.end(), [](const ExploreRecord& a, const ExploreRecord& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.source < b.source;
    });
}

struct ExploreParams {
    double delta_hat = kInf;      // per-pulse distance threshold
    std::uint64_t hopbound = 1;   // propagation steps per pulse
    long long x = 1;              // records kept per list
    int depth = 1;                // pulses
    bool track_paths = false;
};

struct ExplorationResult {
    ExploreParams params;
    std::vector<std::vector<ExploreRecord>> m;  // per cluster, sorted, <= x records
    std::vector<std::vector<ExploreRecord>> vertex_list;  // final L(v) scratch
    std::vector<int> detected_pulse;            // first pulse with nonempty m, -1 otherwise
    std::vector<ExploreRecord> winner;          // m front at detection time (frozen)
    std::uint64_t pulses = 0;                   // nominal pulse count (= depth)
    std::uint64_t steps = 0;                    // nominal propagation steps (= depth*hopbound)
};

/// Round-synchronous multi-source exploration of the virtual cluster graph.
/// Each pulse distributes cluster knowledge to members (distance field reset,
/// carried paths kept), propagates it for `hopbound` steps through the
/// exploration graph pruned at `delta_hat`, and aggregates the x closest
/// sources per cluster. Only the configurations (x>=1, depth=1) and
/// (x=1, depth>=1) are part of the contract.
inline ExplorationResult limited_bfs(const WorkGraph& g, const ClusterPartition& p,
                                     const std::vector<int>& source_cluster_indexes,
                                     const ExploreParams& prm, CostMeter* meter = nullptr,
                                     const ClusterMemory* cluster_memory = nullptr) {
    if (prm.depth < 1 || prm.x < 1 || !(prm.delta_hat >= 0))
        throw std::invalid_argument("limited_bfs: bad parameters");
    if (prm.depth > 1 && prm.x != 1)
        throw std::invalid_argument("limited_bfs: depth>1 requires x=1");
    if (prm.track_paths && cluster_memory == nullptr)
        throw std::invalid_argument("limited_bfs: path tracking needs cluster memory");

    const size_t n = static_cast<size_t>(g.n);
    const size_t nc = p.clusters.size();
    const size_t x = static_cast<size_t>(prm.x);

    ExplorationResult res;
    res.params = prm;
    res.m.assign(nc, {});
    res.detected_pulse.assign(nc, -1);
    res.winner.assign(nc, {});

    for (int ci : source_cluster_indexes) {
        const Cluster& c = p.clusters[static_cast<size_t>(ci)];
        ExploreRecord rec;
        rec.source = c.center;
        rec.dist = 0.0;
        if (prm.track_paths) rec.path = path_start(c.center);
        res.m[static_cast<size_t>(ci)] = {rec};
        res.detected_pulse[static_cast<size_t>(ci)] = 0;
        res.winner[static_cast<size_t>(ci)] = rec;
    }

    std::vector<std::vector<ExploreRecord>> lists(n);
    std::vector<std::vector<ExploreRecord>> next(n);
    std::uint64_t work = 0;
    size_t max_buf = 1, max_agg = 1;

    auto distribute = [&]() {
        for (size_t v = 0; v < n; ++v) {
            lists[v].clear();
            int ci = p.vertex_cluster[v];
            if (ci < 0) continue;
            const auto& mc = res.m[static_cast<size_t>(ci)];
            for (size_t i = 0; i < mc.size() && i < x; ++i) {
                ExploreRecord rec = mc[i];
                rec.dist = 0.0;  // per-pulse distances restart at the cluster
                if (prm.track_paths) {
                    // extend the carried path from the center down to v
                    rec.path = path_append(rec.path, cluster_memory->verts[v], cluster_memory->cum[v]);
                }
                lists[v].push_back(std::move(rec));
                ++work;
            }
        }
    };

    auto propagate = [&]() {
        for (std::uint64_t step = 0; step < prm.hopbound; ++step) {
            bool changed = false;
            for (size_t v = 0; v < n; ++v) {
                auto& buf = next[v];
                buf = lists[v];
                for (const auto& [u, w] : g.adj[v]) {
                    for (const ExploreRecord& r : lists[static_cast<size_t>(u)]) {
                        ++work;
                        const double nd = r.dist + w;
                        if (nd > prm.delta_hat) continue;
                        ExploreRecord nr;
                        nr.source = r.source;
                        nr.dist = nd;
                        if (prm.track_paths) nr.path = path_extend(r.path, static_cast<Vertex>(v), w);
                        buf.push_back(std::move(nr));
                    }
                }
                max_buf = std::max(max_buf, buf.size());
                sort_dedup(buf);
                if (buf.size() > x) buf.resize(x);
                if (!changed) {
                    if (buf.size() != lists[v].size())
                        changed = true;
                    else
                        for (size_t i = 0; i < buf.size(); ++i)
                            if (buf[i].source != lists[v][i].source || buf[i].dist != lists[v][i].dist) {
                                changed = true;
                                break;
                            }
                }
            }
            lists.swap(next);
            if (!changed) break;  // fixpoint: identical to running all remaining steps
        }
    };

    auto aggregate = [&](int pulse) {
        for (size_t ci = 0; ci < nc; ++ci) {
            if (res.detected_pulse[ci] >= 0 && prm.depth > 1) continue;  // winner frozen
            auto& mc = res.m[ci];
            bool grew = false;
            for (Vertex v : p.clusters[ci].members) {
                for (const ExploreRecord& r : lists[static_cast<size_t>(v)]) {
                    ++work;
                    ExploreRecord nr = r;
                    if (prm.track_paths) {
                        // climb from the member back to the cluster center
                        std::vector<Vertex> up(cluster_memory->verts[static_cast<size_t>(v)].rbegin(),
                                               cluster_memory->verts[static_cast<size_t>(v)].rend());
                        const auto& cumv = cluster_memory->cum[static_cast<size_t>(v)];
                        std::vector<double> rel(cumv.size());
                        const double total = cumv.back();
                        for (size_t i = 0; i < cumv.size(); ++i)
                            rel[i] = total - cumv[cumv.size() - 1 - i];
                        nr.path = path_append(nr.path, up, rel);
                    }
                    mc.push_back(std::move(nr));
                    grew = true;
                }
            }
            if (grew) {
                max_agg = std::max(max_agg, mc.size());
                sort_dedup(mc);
                if (mc.size() > x) mc.resize(x);
            }
            if (!mc.empty() && res.detected_pulse[ci] < 0) {
                res.detected_pulse[ci] = pulse;
                res.winner[ci] = mc.front();
            }
        }
    };

    for (int pulse = 1; pulse <= prm.depth; ++pulse) {
        distribute();
        propagate();
        aggregate(pulse);
    }
    res.vertex_list = std::move(lists);
    res.pulses = static_cast<std::uint64_t>(prm.depth);
    res.steps = res.pulses * prm.hopbound;
    if (meter) {
        // nominal synchronous depth: per pulse one distribution round, hopbound
        // propagation steps each followed by a sort, and one aggregation sort
        const std::uint64_t sort_rounds = static_cast<std::uint64_t>(ceil_log2(max_buf)) + 1;
        const std::uint64_t agg_rounds = static_cast<std::uint64_t>(ceil_log2(max_agg)) + 1;
        meter->add_rounds(res.pulses * (1 + prm.hopbound * sort_rounds + agg_rounds));
        meter->add_work(work);
    }
    return res;
}

/// Popular-cluster detection: one pulse with x = deg+1 explorations from every
/// cluster. A cluster is popular when it has at least `deg` neighbors within
/// `delta_hat`; unpopular clusters learn their full neighbor table with exact
/// hop-bounded distances.
struct PopularityResult {
    std::vector<char> popular;                           // per cluster index
    std::vector<std::vector<ExploreRecord>> neighbors;   // per cluster, self excluded
    ExplorationResult raw;
};

inline PopularityResult detect_popular(const WorkGraph& g, const ClusterPartition& p,
                                       long long deg, double delta_hat, std::uint64_t hopbound,
                                       bool track_paths = false, CostMeter* meter = nullptr,
                                       const ClusterMemory* cluster_memory = nullptr) {
    const long long nc = p.cluster_count();
    ExploreParams prm;
    prm.delta_hat = delta_hat;
    prm.hopbound = hopbound;
    prm.x = std::min(deg + 1, nc);
    prm.x = std::max(prm.x, 1ll);
    prm.depth = 1;
    prm.track_paths = track_paths;
    std::vector<int> sources(static_cast<size_t>(nc));
    for (int i = 0; i < nc; ++i) sources[static_cast<size_t>(i)] = i;

    PopularityResult out;
    out.raw = limited_bfs(g, p, sources, prm, meter, cluster_memory);
    out.popular.assign(static_cast<size_t>(nc), 0);
    out.neighbors.assign(static_cast<size_t>(nc), {});
    for (int ci = 0; ci < nc; ++ci) {
        const auto& mc = out.raw.m[static_cast<size_t>(ci)];
        const bool popular =
            deg + 1 <= nc && static_cast<long long>(mc.size()) >= deg + 1;
        out.popular[static_cast<size_t>(ci)] = popular ? 1 : 0;
        if (!popular) {
            for (const ExploreRecord& r : mc)
                if (r.source != p.clusters[static_cast<size_t>(ci)].center)
                    out.neighbors[static_cast<size_t>(ci)].push_back(r);
        }
    }
    return out;
}

/// Multi-source BFS in the virtual cluster graph to the given depth (x=1).
/// A cluster's detection pulse equals its virtual-graph BFS level; the
/// reported source is frozen at first detection (min distance, then min id).
struct ClusterBfsResult {
    std::vector<int> detected_pulse;      // -1 when unreached within depth
    std::vector<int> winner_source;       // cluster id, -1 when unreached
    std::vector<ExploreRecord> winner;    // includes path when tracked
};

inline ClusterBfsResult cluster_bfs(const WorkGraph& g, const ClusterPartition& p,
                                    const std::vector<int>& source_cluster_indexes, int depth,
                                    double delta_hat, std::uint64_t hopbound,
                                    bool track_paths = false, CostMeter* meter = nullptr,
                                    const ClusterMemory* cluster_memory = nullptr) {
    ClusterBfsResult out;
    const size_t nc = p.clusters.size();
    out.detected_pulse.assign(nc, -1);
    out.winner_source.assign(nc, -1);
    out.winner.assign(nc, {});
    if (depth == 0) {
        for (int ci : source_cluster_indexes) {
            const Cluster& c = p.clusters[static_cast<size_t>(ci)];
            out.detected_pulse[static_cast<size_t>(ci)] = 0;
            out.winner_source[static_cast<size_t>(ci)] = c.center;
            ExploreRecord rec{c.center, 0.0, track_paths ? path_start(c.center) : PathRef{}};
            out.winner[static_cast<size_t>(ci)] = rec;
        }
        return out;
    }
    ExploreParams prm;
    prm.delta_hat = delta_hat;
    prm.hopbound = hopbound;
    prm.x = 1;
    prm.depth = depth;
    prm.track_paths = track_paths;
    ExplorationResult r = limited_bfs(g, p, source_cluster_indexes, prm, meter, cluster_memory);
    for (size_t ci = 0; ci < nc; ++ci) {
        out.detected_pulse[ci] = r.detected_pulse[ci];
        if (r.detected_pulse[ci] >= 0) {
            out.winner_source[ci] = r.winner[ci].source;
            out.winner[ci] = r.winner[ci];
        }
    }
    return out;
}

}  // namespace hopset
