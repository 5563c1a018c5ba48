#pragma once

#include <map>
#include <string>

#include "hopset/builder.hpp"
#include "hopset/graph.hpp"
#include "hopset/schedule.hpp"

namespace hopset {

class ReductionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One contracted scale graph: vertices grouped into nodes by the light-edge
/// components, crossing edges collapsed to the lightest witness per node pair
/// and padded by the contraction threshold per endpoint size.
struct ScalePartition {
    int k = 0;
    double contract_threshold = 0.0;  // (eps/n) * 2^k
    double cap = 0.0;                 // 2^(k+1)
    std::vector<int> node_of;         // vertex -> node index
    std::vector<std::vector<Vertex>> node_members;  // per node, ascending ids
    std::vector<std::pair<Vertex, Vertex>> tree_edges;  // union-find spanning forest

    struct SuperEdge {
        int x = -1;              // node indexes, x < y
        int y = -1;
        double w = 0.0;          // witness weight + (|X|+|Y|) * threshold
        int witness = -1;        // index into the source graph's edge list
    };
    std::vector<SuperEdge> superedges;
};

/// Deterministic union-find keyed by edge index order.
namespace detail {
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    }
    int find(int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);  // smaller root survives: canonical
        parent[static_cast<size_t>(b)] = a;
        return true;
    }
};
}  // namespace detail

/// Contract edges below (eps/n)*2^k, drop edges above 2^(k+1), and collapse
/// the rest to the lightest crossing edge per node pair (weight ties resolved
/// by endpoint ids via the canonical edge order).
inline ScalePartition build_scale_graph(const Graph& g, double eps, int k) {
    const int n = g.n();
    ScalePartition sp;
    sp.k = k;
    sp.contract_threshold = (eps / static_cast<double>(n)) * std::ldexp(1.0, k);
    sp.cap = std::ldexp(1.0, k + 1);

    detail::UnionFind uf(n);
    for (size_t ei = 0; ei < g.edge_count(); ++ei) {
        const Edge& e = g.edge(static_cast<int>(ei));
        if (e.w < sp.contract_threshold && uf.unite(e.u, e.v))
            sp.tree_edges.push_back({e.u, e.v});
    }
    sp.node_of.assign(static_cast<size_t>(n), -1);
    for (Vertex v = 0; v < n; ++v) {
        int root = uf.find(v);
        if (sp.node_of[static_cast<size_t>(root)] < 0) {
            sp.node_of[static_cast<size_t>(root)] = static_cast<int>(sp.node_members.size());
            sp.node_members.emplace_back();
        }
        sp.node_of[static_cast<size_t>(v)] = sp.node_of[static_cast<size_t>(root)];
        sp.node_members[static_cast<size_t>(sp.node_of[static_cast<size_t>(v)])].push_back(v);
    }

    std::map<std::pair<int, int>, int> best;  // node pair -> graph edge index
    for (size_t ei = 0; ei < g.edge_count(); ++ei) {
        const Edge& e = g.edge(static_cast<int>(ei));
        if (e.w < sp.contract_threshold || e.w > sp.cap) continue;
        int x = sp.node_of[static_cast<size_t>(e.u)];
        int y = sp.node_of[static_cast<size_t>(e.v)];
        if (x == y) continue;
        if (y < x) std::swap(x, y);
        auto [it, fresh] = best.try_emplace({x, y}, static_cast<int>(ei));
        if (!fresh && g.edge(it->second).w > e.w) it->second = static_cast<int>(ei);
    }
    for (const auto& [pair, ei] : best) {
        ScalePartition::SuperEdge se;
        se.x = pair.first;
        se.y = pair.second;
        se.witness = ei;
        const double sz = static_cast<double>(sp.node_members[static_cast<size_t>(se.x)].size() +
                                              sp.node_members[static_cast<size_t>(se.y)].size());
        se.w = g.edge(ei).w + sz * sp.contract_threshold;
        sp.superedges.push_back(se);
    }
    return sp;
}

/// A node of the laminar family, registered once at its first scale. Members
/// carry their spanning-tree parent (toward the center) and tree distance.
struct DistinctNode {
    int first_scale_pos = -1;
    Vertex center = -1;
    std::vector<Vertex> members;
    std::vector<Vertex> t_parent;
    std::vector<double> t_dist;

    int member_pos(Vertex v) const {
        auto it = std::lower_bound(members.begin(), members.end(), v);
        if (it == members.end() || *it != v) return -1;
        return static_cast<int>(it - members.begin());
    }
};

struct StarEdge {
    Vertex center = -1;
    Vertex leaf = -1;
    double w = 0.0;
    int node = -1;  // distinct node id
};

struct NodeRegistry {
    std::vector<DistinctNode> nodes;
    std::vector<std::vector<int>> scale_distinct;  // per scale pos: node idx -> distinct id
    std::vector<StarEdge> stars;
    std::vector<std::vector<std::pair<int, int>>> vertex_nodes;  // v -> (node id, member pos)
};

/// Assign node centers bottom-up: a node inherits the center of its largest
/// lower-scale child (ties to the smaller center id) and emits star edges from
/// that center to every member outside the child, weighted by spanning-tree
/// distance. Nodes identical to their single child are not re-registered.
inline NodeRegistry select_centers(const Graph& g, const std::vector<ScalePartition>& scales) {
    NodeRegistry reg;
    const int n = g.n();
    reg.vertex_nodes.assign(static_cast<size_t>(n), {});
    reg.scale_distinct.resize(scales.size());
    std::vector<int> vertex_distinct(static_cast<size_t>(n), -1);  // distinct id at prev scale

    for (size_t pos = 0; pos < scales.size(); ++pos) {
        const ScalePartition& sp = scales[pos];
        // spanning forest adjacency for this scale
        std::vector<std::vector<std::pair<Vertex, double>>> forest(static_cast<size_t>(n));
        for (const auto& [a, b] : sp.tree_edges) {
            double w = kInf;
            for (int ei : g.incident(a)) {
                const Edge& e = g.edge(ei);
                if (e.u == std::min(a, b) && e.v == std::max(a, b)) w = e.w;
            }
            forest[static_cast<size_t>(a)].emplace_back(b, w);
            forest[static_cast<size_t>(b)].emplace_back(a, w);
        }
        for (auto& lst : forest) std::sort(lst.begin(), lst.end());

        reg.scale_distinct[pos].assign(sp.node_members.size(), -1);
        for (size_t ni = 0; ni < sp.node_members.size(); ++ni) {
            const auto& members = sp.node_members[ni];
            // children: distinct nodes of the previous scale inside this node
            std::map<int, long long> child_sizes;
            bool have_children = pos > 0;
            if (have_children)
                for (Vertex v : members) child_sizes[vertex_distinct[static_cast<size_t>(v)]]++;

            int inherited = -1;
            Vertex center = -1;
            std::vector<char> in_largest(members.size(), 0);
            if (have_children) {
                long long total = 0;
                int largest = -1;
                long long largest_size = -1;
                for (const auto& [child, cnt] : child_sizes) {
                    total += cnt;
                    if (static_cast<size_t>(cnt) != reg.nodes[static_cast<size_t>(child)].members.size())
                        throw ReductionError("laminar family violated: partial child overlap");
                    Vertex cc = reg.nodes[static_cast<size_t>(child)].center;
                    if (cnt > largest_size ||
                        (cnt == largest_size &&
                         cc < reg.nodes[static_cast<size_t>(largest)].center)) {
                        largest_size = cnt;
                        largest = child;
                    }
                }
                if (total != static_cast<long long>(members.size()))
                    throw ReductionError("laminar family violated: children do not cover node");
                if (largest_size == static_cast<long long>(members.size())) {
                    // identical to its single child: reuse it
                    reg.scale_distinct[pos][ni] = largest;
                    continue;
                }
                center = reg.nodes[static_cast<size_t>(largest)].center;
                inherited = largest;
                for (size_t mi = 0; mi < members.size(); ++mi)
                    if (vertex_distinct[static_cast<size_t>(members[mi])] == largest)
                        in_largest[mi] = 1;
            } else {
                center = members.front();  // base rule: minimum id
            }

            DistinctNode node;
            node.first_scale_pos = static_cast<int>(pos);
            node.center = center;
            node.members = members;
            node.t_parent.assign(members.size(), -1);
            node.t_dist.assign(members.size(), 0.0);
            // orient this scale's spanning tree at the center
            {
                std::map<Vertex, int> pos_of;
                for (size_t mi = 0; mi < members.size(); ++mi)
                    pos_of[members[mi]] = static_cast<int>(mi);
                std::vector<Vertex> stack{center};
                std::vector<char> seen(members.size(), 0);
                seen[static_cast<size_t>(pos_of[center])] = 1;
                node.t_parent[static_cast<size_t>(pos_of[center])] = center;
                while (!stack.empty()) {
                    Vertex u = stack.back();
                    stack.pop_back();
                    const int up = pos_of[u];
                    for (const auto& [to, w] : forest[static_cast<size_t>(u)]) {
                        auto it = pos_of.find(to);
                        if (it == pos_of.end())
                            throw ReductionError("spanning tree leaves the node");
                        if (seen[static_cast<size_t>(it->second)]) continue;
                        seen[static_cast<size_t>(it->second)] = 1;
                        node.t_parent[static_cast<size_t>(it->second)] = u;
                        node.t_dist[static_cast<size_t>(it->second)] =
                            node.t_dist[static_cast<size_t>(up)] + w;
                        stack.push_back(to);
                    }
                }
                for (char s : seen)
                    if (!s) throw ReductionError("spanning tree does not span the node");
            }
            const int id = static_cast<int>(reg.nodes.size());
            for (size_t mi = 0; mi < members.size(); ++mi) {
                reg.vertex_nodes[static_cast<size_t>(members[mi])].push_back(
                    {id, static_cast<int>(mi)});
                const bool skip_star =
                    members[mi] == center || (inherited >= 0 && in_largest[mi]);
                if (!skip_star)
                    reg.stars.push_back(
                        {center, members[mi], node.t_dist[static_cast<size_t>(mi)], id});
            }
            reg.nodes.push_back(std::move(node));
            reg.scale_distinct[pos][ni] = id;
        }
        for (size_t ni = 0; ni < sp.node_members.size(); ++ni)
            for (Vertex v : sp.node_members[ni])
                vertex_distinct[static_cast<size_t>(v)] = reg.scale_distinct[pos][ni];
    }
    return reg;
}

/// Scale indexes whose weight window contains at least one edge; the window
/// ((eps/n)*2^k, 2^(k+1)] matches the contraction rule.
inline std::vector<int> relevant_scales(const Graph& g, double eps, int k_low, int k_high) {
    std::vector<int> out;
    const double n = static_cast<double>(g.n());
    for (int k = k_low; k <= k_high; ++k) {
        const double lo = (eps / n) * std::ldexp(1.0, k);
        const double hi = std::ldexp(1.0, k + 1);
        for (const Edge& e : g.edges())
            if (e.w > lo && e.w <= hi) {
                out.push_back(k);
                break;
            }
    }
    return out;
}

struct ReducedOptions {
    bool track_paths = true;
    std::optional<double> raw_internal_eps;  // test hook for non-vacuous node builds
    std::uint64_t path_vertex_cap = 50'000'000;
};

struct ReducedScaleHopset {
    int k = 0;
    ParameterSchedule sched;
    std::vector<HopsetLayer> center_layers;  // node layers mapped to center vertices
};

/// The aspect-ratio-free hopset: star edges plus per-scale node hopsets mapped
/// to node centers. The public stretch target eps is served with slack eps/6
/// inside, and queries run to 6*beta+5 hops.
struct ReducedHopset {
    int n = 0;
    double eps_user = 0.0;
    double eps6 = 0.0;
    int kappa = 2;
    double rho = 0.25;
    double weight_scale = 1.0;
    double aspect = 1.0;
    double eps_internal = 0.0;
    double beta = 1.0;
    std::uint64_t beta_hops_query = 1;
    std::vector<int> scales;  // relevant scale indexes (ascending)
    std::vector<ScalePartition> scale_graphs;
    NodeRegistry registry;
    std::vector<ReducedScaleHopset> per_scale;
    CostMeter cost;
    bool paths_tracked = true;

    size_t hop_edge_count() const {
        size_t s = 0;
        for (const auto& ps : per_scale)
            for (const auto& l : ps.center_layers) s += l.edges.size();
        return s;
    }
    size_t edge_count() const { return registry.stars.size() + hop_edge_count(); }

    std::vector<Edge> all_edges() const {
        std::vector<Edge> out;
        for (const StarEdge& se : registry.stars) out.push_back({se.center, se.leaf, se.w});
        for (const auto& ps : per_scale)
            for (const auto& l : ps.center_layers)
                for (const HopEdge& e : l.edges) out.push_back({e.u, e.v, e.w});
        return out;
    }
};

inline ReducedHopset build_reduced_hopset(const Graph& g, double eps, int kappa, double rho,
                                          const ReducedOptions& opt = {}) {
    if (!(eps > 0.0) || !(eps <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
    ReducedHopset rh;
    rh.n = g.n();
    rh.eps_user = eps;
    rh.eps6 = eps / 6.0;
    rh.kappa = kappa;
    rh.rho = rho;
    rh.paths_tracked = opt.track_paths;

    // derive the uniform construction epsilon from the capped aspect ratio of
    // the contracted graphs
    ParameterSchedule probe = compute_schedule_raw(std::max(g.n(), 2), 0.5, kappa, rho, 2.0);
    const int L = std::max(probe.log_n, 1);
    const double cap_aspect =
        (1.0 + rh.eps6 / 2.0) * static_cast<double>(std::max(g.n(), 2)) / rh.eps6;
    int lam_cap = 0;
    while (std::ldexp(1.0, lam_cap) < cap_aspect) ++lam_cap;
    lam_cap = std::max(lam_cap - 1, 1);
    rh.eps_internal = opt.raw_internal_eps
                          ? *opt.raw_internal_eps
                          : rh.eps6 / (2.0 * lam_cap * 20.0 * L * (probe.ell + 1));

    if (g.edge_count() == 0) {
        rh.beta = 1.0;
        rh.beta_hops_query = 11;
        return rh;
    }

    const double wmin = g.min_weight();
    rh.weight_scale = wmin;
    const Graph gn = g.scaled(1.0 / wmin);
    rh.aspect = aspect_ratio(gn);

    ParameterSchedule beta_probe =
        compute_schedule_raw(std::max(g.n(), 2), rh.eps_internal, kappa, rho, 2.0);
    rh.beta = beta_probe.beta;
    rh.beta_hops_query = 6 * beta_probe.beta_hops + 5;

    int lambda_g = 0;
    while (std::ldexp(1.0, lambda_g) < rh.aspect) ++lambda_g;
    lambda_g -= 1;
    rh.scales = relevant_scales(gn, rh.eps6, beta_probe.k0, lambda_g);

    for (int k : rh.scales) rh.scale_graphs.push_back(build_scale_graph(gn, rh.eps6, k));
    rh.registry = select_centers(gn, rh.scale_graphs);

    BuildOptions bopt;
    bopt.track_paths = opt.track_paths;
    bopt.path_vertex_cap = opt.path_vertex_cap;
    for (size_t pos = 0; pos < rh.scale_graphs.size(); ++pos) {
        const ScalePartition& sp = rh.scale_graphs[pos];
        ReducedScaleHopset ps;
        ps.k = sp.k;
        std::vector<Edge> node_edges;
        for (const auto& se : sp.superedges) node_edges.push_back({se.x, se.y, se.w});
        Graph node_graph(static_cast<int>(sp.node_members.size()), std::move(node_edges));
        double node_aspect = 1.0;
        if (node_graph.edge_count() > 0) node_aspect = aspect_ratio(node_graph);
        ps.sched = compute_schedule_raw(std::max(node_graph.n(), 1), rh.eps_internal, kappa, rho,
                                        node_aspect);
        Hopset nh = build_hopset_with_schedule(node_graph, ps.sched, bopt);
        rh.cost.merge(nh.cost);
        // map node layers to node centers
        for (HopsetLayer& layer : nh.layers) {
            HopsetLayer mapped;
            mapped.scale = layer.scale;
            for (HopEdge& e : layer.edges) {
                HopEdge me;
                me.kind = e.kind;
                me.phase = e.phase;
                me.w = e.w;
                const Vertex cu =
                    rh.registry.nodes[static_cast<size_t>(
                        rh.registry.scale_distinct[pos][static_cast<size_t>(e.u)])].center;
                const Vertex cv =
                    rh.registry.nodes[static_cast<size_t>(
                        rh.registry.scale_distinct[pos][static_cast<size_t>(e.v)])].center;
                me.u = std::min(cu, cv);
                me.v = std::max(cu, cv);
                if (e.path) {
                    MemoryPath mp;
                    mp.cum = e.path->cum;
                    for (Vertex nodev : e.path->verts)
                        mp.verts.push_back(rh.registry.nodes[static_cast<size_t>(
                            rh.registry.scale_distinct[pos][static_cast<size_t>(nodev)])].center);
                    if (mp.verts.front() != me.u) mp = mp.reversed();
                    me.path = std::move(mp);
                }
                mapped.edges.push_back(std::move(me));
            }
            ps.center_layers.push_back(std::move(mapped));
        }
        rh.per_scale.push_back(std::move(ps));
    }

    // back to input units
    for (StarEdge& se : rh.registry.stars) se.w *= wmin;
    for (DistinctNode& node : rh.registry.nodes)
        for (double& d : node.t_dist) d *= wmin;
    for (auto& ps : rh.per_scale)
        for (auto& layer : ps.center_layers)
            for (HopEdge& e : layer.edges) {
                e.w *= wmin;
                if (e.path)
                    for (double& c : e.path->cum) c *= wmin;
            }
    for (ScalePartition& sp : rh.scale_graphs) {
        sp.contract_threshold *= wmin;
        sp.cap *= wmin;
        for (auto& se : sp.superedges) se.w *= wmin;
    }
    return rh;
}

}  // namespace hopset
