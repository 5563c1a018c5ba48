#pragma once

#include <map>
#include <string>

#include "hopset/reduction.hpp"
#include "hopset/spt.hpp"

namespace hopset {

namespace detail {

/// Pair-indexed lookups over the reduced hopset's structures.
struct ReducedClassifier {
    const Graph* g = nullptr;
    const ReducedHopset* rh = nullptr;
    std::map<std::pair<Vertex, Vertex>, int> star_by_pair;
    // per scale slot: center pair -> (layer pos, edge pos) candidates (ascending)
    std::vector<std::map<std::pair<Vertex, Vertex>, std::vector<std::pair<int, int>>>> hop_by_pair;
    // per scale slot: center pair -> superedge index
    std::vector<std::map<std::pair<Vertex, Vertex>, int>> super_by_pair;

    ReducedClassifier(const Graph& graph, const ReducedHopset& hopset)
        : g(&graph), rh(&hopset) {
        for (size_t i = 0; i < rh->registry.stars.size(); ++i) {
            const StarEdge& se = rh->registry.stars[i];
            star_by_pair[{std::min(se.center, se.leaf), std::max(se.center, se.leaf)}] =
                static_cast<int>(i);
        }
        hop_by_pair.resize(rh->per_scale.size());
        super_by_pair.resize(rh->per_scale.size());
        for (size_t s = 0; s < rh->per_scale.size(); ++s) {
            const auto& ps = rh->per_scale[s];
            for (size_t li = 0; li < ps.center_layers.size(); ++li)
                for (size_t e = 0; e < ps.center_layers[li].edges.size(); ++e) {
                    const HopEdge& he = ps.center_layers[li].edges[e];
                    hop_by_pair[s][{he.u, he.v}].push_back(
                        {static_cast<int>(li), static_cast<int>(e)});
                }
            const ScalePartition& sp = rh->scale_graphs[s];
            for (size_t e = 0; e < sp.superedges.size(); ++e) {
                const auto& se = sp.superedges[e];
                Vertex cu = rh->registry
                                .nodes[static_cast<size_t>(
                                    rh->registry.scale_distinct[s][static_cast<size_t>(se.x)])]
                                .center;
                Vertex cv = rh->registry
                                .nodes[static_cast<size_t>(
                                    rh->registry.scale_distinct[s][static_cast<size_t>(se.y)])]
                                .center;
                super_by_pair[s][{std::min(cu, cv), std::max(cu, cv)}] = static_cast<int>(e);
            }
        }
    }

    double graph_weight(Vertex a, Vertex b) const {
        const Vertex lo = std::min(a, b), hi = std::max(a, b);
        for (int ei : g->incident(a)) {
            const Edge& e = g->edge(ei);
            if (e.u == lo && e.v == hi) return e.w;
        }
        return kInf;
    }

    /// Fresh search-tree edges: graph, then star, then hop-edge.
    OriginRef classify_initial(Vertex a, Vertex b, double w) const {
        const double gw = graph_weight(a, b);
        if (gw < kInf && weight_matches(gw, w)) return {EdgeOrigin::graph, -1, -1, -1};
        const std::pair<Vertex, Vertex> key{std::min(a, b), std::max(a, b)};
        if (auto it = star_by_pair.find(key); it != star_by_pair.end()) {
            const StarEdge& se = rh->registry.stars[static_cast<size_t>(it->second)];
            if (weight_matches(se.w, w)) return {EdgeOrigin::star, se.node, -1, -1};
        }
        for (size_t s = 0; s < hop_by_pair.size(); ++s) {
            auto it = hop_by_pair[s].find(key);
            if (it == hop_by_pair[s].end()) continue;
            for (const auto& [li, e] : it->second) {
                const HopEdge& he =
                    rh->per_scale[s].center_layers[static_cast<size_t>(li)].edges[static_cast<size_t>(e)];
                if (weight_matches(he.w, w))
                    return {EdgeOrigin::layer, static_cast<int>(s), li, e};
            }
        }
        throw TreeError("no reduced structure explains tree edge (" + std::to_string(a) + "," +
                        std::to_string(b) + ")");
    }

    /// Memory-path edges of scale slot `s`: a superedge (the node graph's own
    /// edge) or a lower layer of the same scale slot.
    OriginRef classify_within_scale(size_t s, Vertex a, Vertex b, double w,
                                    int max_layer) const {
        const std::pair<Vertex, Vertex> key{std::min(a, b), std::max(a, b)};
        if (auto it = super_by_pair[s].find(key); it != super_by_pair[s].end()) {
            const auto& se = rh->scale_graphs[s].superedges[static_cast<size_t>(it->second)];
            if (weight_matches(se.w, w))
                return {EdgeOrigin::center, static_cast<int>(s), it->second, -1};
        }
        if (auto it = hop_by_pair[s].find(key); it != hop_by_pair[s].end()) {
            for (const auto& [li, e] : it->second) {
                if (li >= max_layer) break;
                const HopEdge& he =
                    rh->per_scale[s].center_layers[static_cast<size_t>(li)].edges[static_cast<size_t>(e)];
                if (weight_matches(he.w, w))
                    return {EdgeOrigin::layer, static_cast<int>(s), li, e};
            }
        }
        throw TreeError("memory-path edge of a node hopset matches no structure");
    }
};

}  // namespace detail

/// Tree extraction through the aspect-ratio-free hopset: hop-bounded search,
/// then three replacement steps. First the per-scale node hopset edges are
/// peeled (all scales advancing one layer per round, best estimate winning),
/// then neighboring-center edges become star-witness-star detours, and
/// finally star edges dissolve into the node spanning trees (rewiring toward
/// the center, with a node-wide repair pass and path flips for edges entering
/// a center).
inline SptResult extract_spt_reduced(const Graph& g, const ReducedHopset& rh, Vertex source,
                                     std::vector<SptWork>* step_trace = nullptr) {
    if (!rh.paths_tracked)
        throw std::invalid_argument("tree extraction needs a hopset built with memory paths");
    SptResult out;
    WorkGraph merged(g, rh.all_edges());
    std::vector<Vertex> src{source};
    BellmanFordStats bf;
    auto dv = bounded_bellman_ford(merged, src, rh.beta_hops_query, std::nullopt, &bf);
    out.cost.add_rounds(bf.rounds_run);
    out.cost.add_work(bf.relaxations);

    detail::ReducedClassifier cls(g, rh);
    const size_t n = static_cast<size_t>(g.n());
    SptWork work;
    work.source = source;
    work.parent.assign(n, -1);
    work.est = dv.dist;
    work.edge_w.assign(n, 0.0);
    work.origin.assign(n, {});
    for (size_t v = 0; v < n; ++v) {
        if (dv.parent[v] == -1) continue;
        work.parent[v] = dv.parent[v];
        work.edge_w[v] = dv.parent_w[v];
        work.origin[v] = cls.classify_initial(dv.parent[v], static_cast<Vertex>(v), dv.parent_w[v]);
    }

    struct Rewire {
        Vertex v;
        Vertex parent;
        double w;
        OriginRef origin;
    };
    auto apply_rewires = [&work](const std::vector<Rewire>& rs) {
        for (const Rewire& r : rs) {
            work.parent[static_cast<size_t>(r.v)] = r.parent;
            work.edge_w[static_cast<size_t>(r.v)] = r.w;
            work.origin[static_cast<size_t>(r.v)] = r.origin;
        }
    };

    // step 1: peel node-hopset edges, every scale advancing one layer a round
    size_t max_layers = 0;
    for (const auto& ps : rh.per_scale) max_layers = std::max(max_layers, ps.center_layers.size());
    for (size_t round = 0; round < max_layers; ++round) {
        std::vector<TreeUpdate> m;
        std::vector<Rewire> rewires;
        for (size_t v = 0; v < n; ++v) {
            if (work.origin[v].kind != EdgeOrigin::layer) continue;
            const size_t s = static_cast<size_t>(work.origin[v].index);
            const auto& layers = rh.per_scale[s].center_layers;
            const int li = static_cast<int>(layers.size()) - 1 - static_cast<int>(round);
            if (work.origin[v].sub != li) continue;
            const HopEdge& he =
                layers[static_cast<size_t>(li)].edges[static_cast<size_t>(work.origin[v].sub2)];
            if (!he.path) throw TreeError("node hopset edge lacks its memory path");
            const Vertex p = work.parent[v];
            MemoryPath mp = *he.path;
            if (mp.verts.front() != p) mp = mp.reversed();
            if (mp.verts.front() != p || mp.verts.back() != static_cast<Vertex>(v))
                throw TreeError("node memory path does not connect the tree edge endpoints");
            const double base = work.est[static_cast<size_t>(p)];
            const size_t t = mp.verts.size() - 1;
            for (size_t i = 1; i < t; ++i) {
                TreeUpdate u;
                u.target = mp.verts[i];
                u.est = base + mp.cum[i];
                u.parent = mp.verts[i - 1];
                u.edge_w = mp.cum[i] - mp.cum[i - 1];
                u.origin = cls.classify_within_scale(s, u.parent, u.target, u.edge_w, li);
                m.push_back(u);
            }
            Rewire r;
            r.v = static_cast<Vertex>(v);
            r.parent = mp.verts[t - 1];
            r.w = mp.cum[t] - mp.cum[t - 1];
            r.origin = cls.classify_within_scale(s, r.parent, r.v, r.w, li);
            rewires.push_back(r);
        }
        out.hop_edges_replaced += static_cast<long long>(rewires.size());
        apply_rewires(rewires);
        apply_updates(work, m, &out.cost);
        check_no_cycles(work, static_cast<int>(round));
    }
    for (size_t v = 0; v < n; ++v)
        if (work.origin[v].kind == EdgeOrigin::layer)
            throw TreeError("node hopset edge survived the peel rounds");
    if (step_trace) step_trace->push_back(work);

    // step 2: neighboring-center edges become star-witness-star detours
    {
        std::vector<TreeUpdate> m;
        std::vector<Rewire> rewires;
        for (size_t v = 0; v < n; ++v) {
            if (work.origin[v].kind != EdgeOrigin::center) continue;
            const size_t s = static_cast<size_t>(work.origin[v].index);
            const ScalePartition& sp = rh.scale_graphs[s];
            const auto& se = sp.superedges[static_cast<size_t>(work.origin[v].sub)];
            const Edge& witness = g.edge(se.witness);
            const int dx = rh.registry.scale_distinct[s][static_cast<size_t>(se.x)];
            const int dy = rh.registry.scale_distinct[s][static_cast<size_t>(se.y)];
            const DistinctNode& nx = rh.registry.nodes[static_cast<size_t>(dx)];
            const DistinctNode& ny = rh.registry.nodes[static_cast<size_t>(dy)];
            const Vertex p = work.parent[v];
            // witness endpoint inside each node
            const bool wu_in_x = sp.node_of[static_cast<size_t>(witness.u)] == se.x;
            const Vertex in_x = wu_in_x ? witness.u : witness.v;
            const Vertex in_y = wu_in_x ? witness.v : witness.u;

            const DistinctNode* near_node;
            const DistinctNode* far_node;
            int near_id, far_id;
            Vertex near_v, far_v;
            if (p == nx.center && static_cast<Vertex>(v) == ny.center) {
                near_node = &nx;
                far_node = &ny;
                near_id = dx;
                far_id = dy;
                near_v = in_x;
                far_v = in_y;
            } else if (p == ny.center && static_cast<Vertex>(v) == nx.center) {
                near_node = &ny;
                far_node = &nx;
                near_id = dy;
                far_id = dx;
                near_v = in_y;
                far_v = in_x;
            } else {
                throw TreeError("center edge endpoints disagree with the superedge");
            }
            const double base = work.est[static_cast<size_t>(p)];
            const double near_td = near_node->t_dist[static_cast<size_t>(
                near_node->member_pos(near_v))];
            const double far_td =
                far_node->t_dist[static_cast<size_t>(far_node->member_pos(far_v))];
            double d1 = base;
            if (near_v != p) {
                d1 = base + near_td;
                m.push_back({near_v, d1, p, near_td, {EdgeOrigin::star, near_id, -1, -1}});
            }
            const double d2 = d1 + witness.w;
            Rewire r;
            r.v = static_cast<Vertex>(v);
            if (far_v != static_cast<Vertex>(v)) {
                m.push_back({far_v, d2, near_v, witness.w, {EdgeOrigin::graph, -1, -1, -1}});
                r.parent = far_v;
                r.w = far_td;
                r.origin = {EdgeOrigin::star, far_id, -1, -1};
            } else {
                r.parent = near_v;
                r.w = witness.w;
                r.origin = {EdgeOrigin::graph, -1, -1, -1};
            }
            rewires.push_back(r);
        }
        out.center_edges_replaced += static_cast<long long>(rewires.size());
        apply_rewires(rewires);
        apply_updates(work, m, &out.cost);
        check_no_cycles(work, -2);
        for (size_t v = 0; v < n; ++v)
            if (work.origin[v].kind == EdgeOrigin::center)
                throw TreeError("neighboring-center edge survived step two");
        if (step_trace) step_trace->push_back(work);
    }

    // step 3, type A: star edges pointing away from the center rewire onto the
    // node spanning tree, then a node-wide repair pass restores consistency
    {
        std::vector<Rewire> rewires;
        for (size_t v = 0; v < n; ++v) {
            if (work.origin[v].kind != EdgeOrigin::star) continue;
            const DistinctNode& node =
                rh.registry.nodes[static_cast<size_t>(work.origin[v].index)];
            if (work.parent[v] != node.center) continue;  // type B, handled later
            const int mp = node.member_pos(static_cast<Vertex>(v));
            if (mp < 0) throw TreeError("star leaf missing from its node");
            const Vertex tp = node.t_parent[static_cast<size_t>(mp)];
            const int pp = node.member_pos(tp);
            Rewire r;
            r.v = static_cast<Vertex>(v);
            r.parent = tp;
            r.w = node.t_dist[static_cast<size_t>(mp)] - node.t_dist[static_cast<size_t>(pp)];
            r.origin = {EdgeOrigin::graph, -1, -1, -1};
            rewires.push_back(r);
        }
        out.star_type_a += static_cast<long long>(rewires.size());
        apply_rewires(rewires);

        std::vector<TreeUpdate> m;
        for (size_t u = 0; u < n; ++u) {
            for (const auto& [node_id, mp] : rh.registry.vertex_nodes[u]) {
                const DistinctNode& node = rh.registry.nodes[static_cast<size_t>(node_id)];
                if (node.center == static_cast<Vertex>(u)) continue;
                const double center_est = work.est[static_cast<size_t>(node.center)];
                if (center_est == kInf) continue;
                const double cand = center_est + node.t_dist[static_cast<size_t>(mp)];
                if (cand >= work.est[u]) continue;
                const Vertex tp = node.t_parent[static_cast<size_t>(mp)];
                const int pp = node.member_pos(tp);
                m.push_back({static_cast<Vertex>(u), cand, tp,
                             node.t_dist[static_cast<size_t>(mp)] -
                                 node.t_dist[static_cast<size_t>(pp)],
                             {EdgeOrigin::graph, -1, -1, -1}});
            }
        }
        apply_updates(work, m, &out.cost);
        check_no_cycles(work, -3);
    }

    // step 3, type B: star edges entering a center flip the spanning-tree path
    {
        std::vector<TreeUpdate> m;
        std::vector<Rewire> rewires;
        for (size_t v = 0; v < n; ++v) {
            if (work.origin[v].kind != EdgeOrigin::star) continue;
            const DistinctNode& node =
                rh.registry.nodes[static_cast<size_t>(work.origin[v].index)];
            if (node.center != static_cast<Vertex>(v))
                throw TreeError("type-A star edge survived its pass");
            const Vertex member = work.parent[v];
            // climb from the member to the center
            std::vector<Vertex> path{member};
            int guard = 0;
            while (path.back() != node.center) {
                const int mp = node.member_pos(path.back());
                if (mp < 0) throw TreeError("flip path leaves the node");
                path.push_back(node.t_parent[static_cast<size_t>(mp)]);
                if (++guard > g.n()) throw TreeError("flip path does not reach the center");
            }
            const double member_td =
                node.t_dist[static_cast<size_t>(node.member_pos(member))];
            const double base = work.est[static_cast<size_t>(member)];
            for (size_t j = 1; j < path.size(); ++j) {
                const double td_prev =
                    node.t_dist[static_cast<size_t>(node.member_pos(path[j - 1]))];
                const double td_cur = node.t_dist[static_cast<size_t>(node.member_pos(path[j]))];
                TreeUpdate u;
                u.target = path[j];
                u.est = base + (member_td - td_cur);
                u.parent = path[j - 1];
                u.edge_w = td_prev - td_cur;
                u.origin = {EdgeOrigin::graph, -1, -1, -1};
                m.push_back(u);
            }
            Rewire r;
            r.v = static_cast<Vertex>(v);
            r.parent = path[path.size() - 2];
            r.w = node.t_dist[static_cast<size_t>(node.member_pos(r.parent))];
            r.origin = {EdgeOrigin::graph, -1, -1, -1};
            rewires.push_back(r);
        }
        out.star_type_b += static_cast<long long>(rewires.size());
        apply_rewires(rewires);
        apply_updates(work, m, &out.cost);
        check_no_cycles(work, -4);
        for (size_t v = 0; v < n; ++v)
            if (work.parent[v] != -1 && work.origin[v].kind != EdgeOrigin::graph)
                throw TreeError("non-graph edge survived the reduced replacement");
        if (step_trace) step_trace->push_back(work);
    }

    out.est = work.est;
    out.tree = work.tree();
    check_tree_shape(out.tree);
    auto exact = pointer_jump(out.tree, &out.cost);
    out.tree.est = exact;
    return out;
}

}  // namespace hopset
