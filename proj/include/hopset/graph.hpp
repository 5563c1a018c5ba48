#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hopset {

using Vertex = int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    double w = 0.0;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Weighted undirected graph. Vertex IDs are exactly 0..n-1, every weight is
/// strictly positive, parallel edges are collapsed to the lightest one and
/// self-loops are dropped on construction.
class Graph {
public:
    Graph() = default;

    Graph(int n, std::vector<Edge> raw_edges) : n_(n) {
        if (n < 1) throw GraphError("graph needs at least one vertex");
        for (Edge& e : raw_edges) {
            if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
                throw GraphError("vertex id out of range: (" + std::to_string(e.u) + "," +
                                 std::to_string(e.v) + ") with n=" + std::to_string(n));
            if (!(e.w > 0.0) || !std::isfinite(e.w))
                throw GraphError("edge weight must be positive and finite, got " +
                                 std::to_string(e.w));
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::erase_if(raw_edges, [](const Edge& e) { return e.u == e.v; });
        std::sort(raw_edges.begin(), raw_edges.end(), [](const Edge& a, const Edge& b) {
            if (a.u != b.u) return a.u < b.u;
            if (a.v != b.v) return a.v < b.v;
            return a.w < b.w;
        });
        edges_.reserve(raw_edges.size());
        for (const Edge& e : raw_edges) {
            if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v)
                continue;  // keep the lightest parallel edge
            edges_.push_back(e);
        }
        incident_.assign(static_cast<size_t>(n_), {});
        for (size_t i = 0; i < edges_.size(); ++i) {
            incident_[static_cast<size_t>(edges_[i].u)].push_back(static_cast<int>(i));
            incident_[static_cast<size_t>(edges_[i].v)].push_back(static_cast<int>(i));
        }
    }

    int n() const { return n_; }
    size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int id) const { return edges_[static_cast<size_t>(id)]; }
    const std::vector<int>& incident(Vertex v) const { return incident_[static_cast<size_t>(v)]; }

    double min_weight() const {
        double m = kInf;
        for (const Edge& e : edges_) m = std::min(m, e.w);
        return m;
    }
    double max_weight() const {
        double m = 0.0;
        for (const Edge& e : edges_) m = std::max(m, e.w);
        return m;
    }

    /// Copy with every weight multiplied by `factor`.
    Graph scaled(double factor) const {
        std::vector<Edge> es = edges_;
        for (Edge& e : es) e.w *= factor;
        return Graph(n_, std::move(es));
    }

private:
    int n_ = 1;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incident_;
};

/// Adjacency view used by the relaxation kernels: the base graph optionally
/// merged with an extra edge set, parallel entries collapsed to the minimum
/// weight. Neighbor lists are sorted by vertex id.
struct WorkGraph {
    int n = 0;
    std::vector<std::vector<std::pair<Vertex, double>>> adj;

    WorkGraph() = default;

    explicit WorkGraph(const Graph& g, std::span<const Edge> extra = {}) : n(g.n()) {
        std::vector<Edge> all(g.edges().begin(), g.edges().end());
        all.insert(all.end(), extra.begin(), extra.end());
        adj.assign(static_cast<size_t>(n), {});
        for (const Edge& e : all) {
            if (e.u == e.v) continue;
            adj[static_cast<size_t>(e.u)].emplace_back(e.v, e.w);
            adj[static_cast<size_t>(e.v)].emplace_back(e.u, e.w);
        }
        finalize();
    }

    void finalize() {
        for (auto& lst : adj) {
            std::sort(lst.begin(), lst.end());
            size_t out = 0;
            for (size_t i = 0; i < lst.size(); ++i) {
                if (out > 0 && lst[out - 1].first == lst[i].first) continue;  // sorted: min kept
                lst[out++] = lst[i];
            }
            lst.resize(out);
        }
    }

    size_t edge_entry_count() const {
        size_t s = 0;
        for (const auto& lst : adj) s += lst.size();
        return s;
    }
};

/// Result of a (multi-source) shortest-distance computation.
/// dist is the realized distance (kInf when unreachable), hops the edge count
/// of the realizing path, parent the predecessor (-1 for sources/unreached).
struct DistanceVector {
    std::vector<Vertex> sources;
    std::vector<double> dist;
    std::vector<std::int64_t> hops;
    std::vector<Vertex> parent;
    std::vector<double> parent_w;  // weight of the adopted edge (parent(v), v)

    bool reached(Vertex v) const { return dist[static_cast<size_t>(v)] < kInf; }
};

struct BellmanFordStats {
    std::uint64_t rounds_run = 0;       // rounds actually simulated (fixpoint cut-off)
    std::uint64_t relaxations = 0;      // edge scans performed
    bool converged = false;             // no change in the last simulated round
};

/// Hop-bounded multi-source Bellman-Ford. Computes for every vertex the
/// minimum weight of a path from any source using at most `hopbound` edges.
/// Rounds are synchronous; ties in a round are broken by smaller predecessor
/// id, and a vertex only adopts a strictly better value. Entries above `cap`
/// (when given) are pruned and reported as infinity.
inline DistanceVector bounded_bellman_ford(const WorkGraph& g, std::span<const Vertex> sources,
                                           std::uint64_t hopbound,
                                           std::optional<double> cap = std::nullopt,
                                           BellmanFordStats* stats = nullptr) {
    const size_t n = static_cast<size_t>(g.n);
    DistanceVector out;
    out.sources.assign(sources.begin(), sources.end());
    out.dist.assign(n, kInf);
    out.hops.assign(n, -1);
    out.parent.assign(n, -1);
    out.parent_w.assign(n, 0.0);
    for (Vertex s : sources) {
        if (s < 0 || s >= g.n) throw GraphError("source vertex out of range");
        out.dist[static_cast<size_t>(s)] = 0.0;
        out.hops[static_cast<size_t>(s)] = 0;
    }
    std::vector<double> prev_dist = out.dist;
    std::vector<std::int64_t> prev_hops = out.hops;
    BellmanFordStats st;
    for (std::uint64_t round = 0; round < hopbound; ++round) {
        bool changed = false;
        for (size_t v = 0; v < n; ++v) {
            double best = prev_dist[v];
            Vertex best_pred = -1;
            double best_w = 0.0;
            for (const auto& [u, w] : g.adj[v]) {
                ++st.relaxations;
                const double du = prev_dist[static_cast<size_t>(u)];
                if (du == kInf) continue;
                const double cand = du + w;
                if (cap && cand > *cap) continue;
                if (cand < best || (cand == best && best_pred != -1 && u < best_pred)) {
                    best = cand;
                    best_pred = u;
                    best_w = w;
                }
            }
            if (best_pred != -1 && best < prev_dist[v]) {
                out.dist[v] = best;
                out.parent[v] = best_pred;
                out.parent_w[v] = best_w;
                out.hops[v] = prev_hops[static_cast<size_t>(best_pred)] + 1;
                changed = true;
            }
        }
        ++st.rounds_run;
        if (!changed) {
            st.converged = true;
            break;
        }
        prev_dist = out.dist;
        prev_hops = out.hops;
    }
    if (!st.converged && hopbound > 0) {
        // ran the full budget; the state may or may not be a fixpoint
        st.converged = false;
    } else if (hopbound == 0) {
        st.converged = true;
    }
    if (cap) {
        for (size_t v = 0; v < n; ++v) {
            if (out.dist[v] > *cap) {
                out.dist[v] = kInf;
                out.hops[v] = -1;
                out.parent[v] = -1;
                out.parent_w[v] = 0.0;
            }
        }
    }
    if (stats) *stats = st;
    return out;
}

inline DistanceVector bounded_bellman_ford(const Graph& g, std::span<const Vertex> sources,
                                           std::uint64_t hopbound,
                                           std::optional<double> cap = std::nullopt) {
    return bounded_bellman_ford(WorkGraph(g), sources, hopbound, cap);
}

/// Exact single-source distances, binary-heap Dijkstra. Settle order and
/// parent ties are canonical (smaller id wins).
inline DistanceVector dijkstra(const WorkGraph& g, Vertex source,
                               std::uint64_t* relaxations = nullptr) {
    const size_t n = static_cast<size_t>(g.n);
    if (source < 0 || source >= g.n) throw GraphError("source vertex out of range");
    DistanceVector out;
    out.sources = {source};
    out.dist.assign(n, kInf);
    out.hops.assign(n, -1);
    out.parent.assign(n, -1);
    out.parent_w.assign(n, 0.0);
    out.dist[static_cast<size_t>(source)] = 0.0;
    out.hops[static_cast<size_t>(source)] = 0;

    using Item = std::pair<double, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.emplace(0.0, source);
    std::vector<char> settled(n, 0);
    std::uint64_t relax = 0;
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (settled[static_cast<size_t>(u)]) continue;
        settled[static_cast<size_t>(u)] = 1;
        for (const auto& [v, w] : g.adj[static_cast<size_t>(u)]) {
            ++relax;
            const double nd = d + w;
            auto& dv = out.dist[static_cast<size_t>(v)];
            if (nd < dv) {
                dv = nd;
                out.parent[static_cast<size_t>(v)] = u;
                out.parent_w[static_cast<size_t>(v)] = w;
                out.hops[static_cast<size_t>(v)] = out.hops[static_cast<size_t>(u)] + 1;
                pq.emplace(nd, v);
            } else if (nd == dv && out.parent[static_cast<size_t>(v)] != -1 &&
                       u < out.parent[static_cast<size_t>(v)]) {
                out.parent[static_cast<size_t>(v)] = u;
                out.parent_w[static_cast<size_t>(v)] = w;
                out.hops[static_cast<size_t>(v)] = out.hops[static_cast<size_t>(u)] + 1;
            }
        }
    }
    if (relaxations) *relaxations = relax;
    return out;
}

inline DistanceVector dijkstra(const Graph& g, Vertex source) {
    return dijkstra(WorkGraph(g), source);
}

/// Largest finite pairwise distance divided by the smallest positive one,
/// distances taken inside connected components. Errors when no two vertices
/// are mutually reachable.
inline double aspect_ratio(const Graph& g) {
    const WorkGraph wg(g);
    double max_d = 0.0;
    bool any_pair = false;
    for (Vertex s = 0; s < g.n(); ++s) {
        if (g.incident(s).empty()) continue;
        DistanceVector dv = dijkstra(wg, s);
        for (Vertex v = 0; v < g.n(); ++v) {
            if (v == s || !dv.reached(v)) continue;
            any_pair = true;
            max_d = std::max(max_d, dv.dist[static_cast<size_t>(v)]);
        }
    }
    if (!any_pair) throw GraphError("degenerate graph: no reachable vertex pair");
    const double min_d = g.min_weight();  // min positive pairwise distance
    return max_d / min_d;
}

}  // namespace hopset
