#pragma once

#include <map>
#include <string>

#include "hopset/builder.hpp"
#include "hopset/graph.hpp"
#include "hopset/layer.hpp"
#include "hopset/path_tree.hpp"

namespace hopset {

/// What a tree edge currently is, tracked through the peeling iterations.
enum class EdgeOrigin : std::uint8_t {
    none = 0,
    graph = 1,    // an edge of E
    layer = 2,    // a hopset edge; `index` selects the layer in the stack
    star = 3,     // reduced mode: node-center-to-member edge; `index` = node id
    center = 4,   // reduced mode: neighboring-node-center edge; `index` = scale slot
};

struct OriginRef {
    EdgeOrigin kind = EdgeOrigin::none;
    int index = -1;  // layer: stack position (direct) / scale slot (reduced); star: node id
    int sub = -1;    // layer: edge position (direct) / layer position (reduced); center: superedge
    int sub2 = -1;   // reduced layer: edge position
};

/// Mutable tree state while hopset edges are being replaced.
struct SptWork {
    Vertex source = -1;
    std::vector<Vertex> parent;
    std::vector<double> est;
    std::vector<double> edge_w;
    std::vector<OriginRef> origin;

    PathTree tree() const {
        PathTree t;
        t.source = source;
        t.parent = parent;
        t.est = est;
        t.edge_w = edge_w;
        return t;
    }
};

namespace detail {

struct LayerEdgeIndex {
    std::map<std::pair<Vertex, Vertex>, int> by_pair;

    static LayerEdgeIndex of(const HopsetLayer& layer) {
        LayerEdgeIndex idx;
        for (size_t i = 0; i < layer.edges.size(); ++i)
            idx.by_pair[{layer.edges[i].u, layer.edges[i].v}] = static_cast<int>(i);
        return idx;
    }
    int find(Vertex a, Vertex b) const {
        auto it = by_pair.find({std::min(a, b), std::max(a, b)});
        return it == by_pair.end() ? -1 : it->second;
    }
};

inline bool weight_matches(double candidate, double delta) {
    return candidate <= delta * (1.0 + 1e-9) + 1e-300;
}

}  // namespace detail

/// Classifier from a tree edge (u,v,w) to the structure whose weight realizes
/// it. Preference order: the graph, then the lowest admissible layer. Used
/// both for the fresh search tree and for edges introduced by memory paths.
class OriginClassifier {
public:
    OriginClassifier(const Graph& g, const std::vector<HopsetLayer>* layers) : graph_(&g) {
        if (layers) {
            layer_idx_.reserve(layers->size());
            for (const auto& l : *layers) layer_idx_.push_back(detail::LayerEdgeIndex::of(l));
            layers_ = layers;
        }
    }

    double graph_weight(Vertex a, Vertex b) const {
        const Vertex lo = std::min(a, b), hi = std::max(a, b);
        for (int ei : graph_->incident(a)) {
            const Edge& e = graph_->edge(ei);
            if (e.u == lo && e.v == hi) return e.w;
        }
        return kInf;
    }

    /// `max_layer` bounds the admissible layers (exclusive); pass
    /// layers.size() to allow all.
    OriginRef classify(Vertex a, Vertex b, double w, size_t max_layer) const {
        const double gw = graph_weight(a, b);
        if (gw < kInf && detail::weight_matches(gw, w)) return {EdgeOrigin::graph, -1, -1};
        if (layers_) {
            for (size_t li = 0; li < std::min(max_layer, layers_->size()); ++li) {
                int pos = layer_idx_[li].find(a, b);
                if (pos >= 0 &&
                    detail::weight_matches((*layers_)[li].edges[static_cast<size_t>(pos)].w, w))
                    return {EdgeOrigin::layer, static_cast<int>(li), pos};
            }
        }
        throw TreeError("no structure explains tree edge (" + std::to_string(a) + "," +
                        std::to_string(b) + ") of weight " + std::to_string(w));
    }

private:
    const Graph* graph_;
    const std::vector<HopsetLayer>* layers_ = nullptr;
    std::vector<detail::LayerEdgeIndex> layer_idx_;
};

/// Proposed relocation of one vertex, collected into the global array and
/// resolved per target by (estimate, parent) order.
struct TreeUpdate {
    Vertex target = -1;
    double est = kInf;
    Vertex parent = -1;
    double edge_w = 0.0;
    OriginRef origin;
};

inline void apply_updates(SptWork& work, std::vector<TreeUpdate>& m, CostMeter* meter = nullptr) {
    std::stable_sort(m.begin(), m.end(), [](const TreeUpdate& a, const TreeUpdate& b) {
        if (a.target != b.target) return a.target < b.target;
        if (a.est != b.est) return a.est < b.est;
        return a.parent < b.parent;
    });
    for (size_t i = 0; i < m.size(); ++i) {
        if (i > 0 && m[i].target == m[i - 1].target) continue;  // winner per target
        const TreeUpdate& u = m[i];
        if (u.est < work.est[static_cast<size_t>(u.target)]) {
            work.est[static_cast<size_t>(u.target)] = u.est;
            work.parent[static_cast<size_t>(u.target)] = u.parent;
            work.edge_w[static_cast<size_t>(u.target)] = u.edge_w;
            work.origin[static_cast<size_t>(u.target)] = u.origin;
        }
    }
    if (meter) {
        meter->add_rounds(static_cast<std::uint64_t>(ceil_log2(std::max<size_t>(m.size(), 1))) +
                          2);
        meter->add_work(m.size());
    }
}

inline void check_no_cycles(const SptWork& work, int iteration) {
    for (size_t v = 0; v < work.parent.size(); ++v) {
        if (static_cast<Vertex>(v) == work.source || work.parent[v] == -1) continue;
        if (!(work.est[static_cast<size_t>(work.parent[v])] < work.est[v]))
            throw TreeError("estimate order violated at vertex " + std::to_string(v) +
                            " in peel iteration " + std::to_string(iteration));
    }
}

/// Build the working tree from a hop-bounded search result over the graph
/// merged with extra structures; classification resolves each tree edge to
/// the structure realizing its weight.
inline SptWork tree_from_search(const DistanceVector& dv, Vertex source,
                                const OriginClassifier& cls, size_t layer_count) {
    SptWork w;
    w.source = source;
    const size_t n = dv.dist.size();
    w.parent.assign(n, -1);
    w.est.assign(n, kInf);
    w.edge_w.assign(n, 0.0);
    w.origin.assign(n, {});
    for (size_t v = 0; v < n; ++v) {
        w.est[v] = dv.dist[v];
        if (dv.parent[v] == -1) continue;
        w.parent[v] = dv.parent[v];
        w.edge_w[v] = dv.parent_w[v];
        w.origin[v] = cls.classify(dv.parent[v], static_cast<Vertex>(v), dv.parent_w[v],
                                   layer_count);
    }
    return w;
}

/// One peel iteration: every tree edge lying in `layer` (position `layer_pos`
/// in the stack) is replaced by its memory path. The vertex at the far end
/// re-hangs onto the path unconditionally; interior path vertices adopt the
/// offered estimate only when it strictly improves. New edges are classified
/// against the graph and layers below `layer_pos`.
inline size_t peel_layer(SptWork& work, const HopsetLayer& layer, size_t layer_pos,
                         const OriginClassifier& cls, CostMeter* meter = nullptr) {
    std::vector<TreeUpdate> m;
    const size_t n = work.parent.size();
    struct Rewire {
        Vertex v;
        Vertex parent;
        double w;
        OriginRef origin;
    };
    std::vector<Rewire> rewires;
    for (size_t v = 0; v < n; ++v) {
        if (work.origin[v].kind != EdgeOrigin::layer ||
            work.origin[v].index != static_cast<int>(layer_pos))
            continue;
        const HopEdge& he = layer.edges[static_cast<size_t>(work.origin[v].sub)];
        if (!he.path)
            throw TreeError("hopset edge on the tree has no memory path");
        const Vertex p = work.parent[v];
        MemoryPath mp = *he.path;
        if (mp.verts.front() != p) mp = mp.reversed();
        if (mp.verts.front() != p || mp.verts.back() != static_cast<Vertex>(v))
            throw TreeError("memory path does not connect the tree edge endpoints");
        const double base = work.est[static_cast<size_t>(p)];
        const size_t t = mp.verts.size() - 1;
        for (size_t i = 1; i < t; ++i) {
            TreeUpdate u;
            u.target = mp.verts[i];
            u.est = base + mp.cum[i];
            u.parent = mp.verts[i - 1];
            u.edge_w = mp.cum[i] - mp.cum[i - 1];
            u.origin = cls.classify(u.parent, u.target, u.edge_w, layer_pos);
            m.push_back(u);
        }
        Rewire r;
        r.v = static_cast<Vertex>(v);
        r.parent = mp.verts[t - 1];
        r.w = mp.cum[t] - mp.cum[t - 1];
        r.origin = cls.classify(r.parent, r.v, r.w, layer_pos);
        rewires.push_back(r);
    }
    for (const Rewire& r : rewires) {
        work.parent[static_cast<size_t>(r.v)] = r.parent;
        work.edge_w[static_cast<size_t>(r.v)] = r.w;
        work.origin[static_cast<size_t>(r.v)] = r.origin;
    }
    apply_updates(work, m, meter);
    return rewires.size();
}

/// Run the full peel over a layer stack, top scale first. Afterwards every
/// tree edge belongs to the graph.
inline size_t peel_all_layers(SptWork& work, const std::vector<HopsetLayer>& layers,
                              const OriginClassifier& cls, CostMeter* meter = nullptr) {
    size_t replaced = 0;
    for (size_t j = layers.size(); j-- > 0;) {
        replaced += peel_layer(work, layers[j], j, cls, meter);
        check_no_cycles(work, static_cast<int>(layers.size() - 1 - j));
        for (size_t v = 0; v < work.parent.size(); ++v)
            if (work.origin[v].kind == EdgeOrigin::layer &&
                work.origin[v].index >= static_cast<int>(j))
                throw TreeError("peeled layer still present on the tree");
    }
    return replaced;
}

struct SptResult {
    PathTree tree;           // parents and exact tree distances
    std::vector<double> est; // estimates before the exact pass (never smaller)
    CostMeter cost;
    // replacement accounting
    long long hop_edges_replaced = 0;
    long long center_edges_replaced = 0;
    long long star_type_a = 0;
    long long star_type_b = 0;
};

/// Direct-mode tree extraction: hop-bounded search in the graph merged with
/// the hopset, peel every layer top-down, then repair distances exactly.
inline SptResult extract_spt_direct(const Graph& g, const Hopset& h, Vertex source) {
    if (!h.paths_tracked)
        throw std::invalid_argument("tree extraction needs a hopset built with memory paths");
    SptResult out;
    WorkGraph merged(g, h.all_edges());
    std::vector<Vertex> src{source};
    BellmanFordStats bf;
    auto dv = bounded_bellman_ford(merged, src, h.sched.beta_hops, std::nullopt, &bf);
    out.cost.add_rounds(bf.rounds_run);
    out.cost.add_work(bf.relaxations);

    OriginClassifier cls(g, &h.layers);
    SptWork work = tree_from_search(dv, source, cls, h.layers.size());
    out.hop_edges_replaced = static_cast<long long>(peel_all_layers(work, h.layers, cls, &out.cost));
    for (size_t v = 0; v < work.parent.size(); ++v)
        if (work.parent[v] != -1 && work.origin[v].kind != EdgeOrigin::graph)
            throw TreeError("non-graph edge survived the peel at vertex " + std::to_string(v));

    out.est = work.est;
    out.tree = work.tree();
    check_tree_shape(out.tree);
    auto exact = pointer_jump(out.tree, &out.cost);
    out.tree.est = exact;
    return out;
}

}  // namespace hopset
