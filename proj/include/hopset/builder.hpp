#pragma once

#include <map>
#include <string>

#include "hopset/cluster.hpp"
#include "hopset/graph.hpp"
#include "hopset/layer.hpp"
#include "hopset/ruling.hpp"
#include "hopset/schedule.hpp"

namespace hopset {

class BuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhaseStats {
    int phase = 0;
    long long clusters_in = 0;      // |P_i|
    long long popular = 0;          // |W_i|
    long long ruling = 0;           // |Q_i|
    long long superclustered = 0;   // clusters absorbed into superclusters
    long long unclustered = 0;      // |U_i|
    long long supercluster_edges = 0;
    long long interconnect_edges = 0;
    long long deg = 0;
    double delta = 0.0;
    double delta_hat = 0.0;
    double radius_bound = 0.0;  // R_i
};

/// Captured only in audit mode; lets tests replay radius/partition claims.
struct PhaseSnapshot {
    ClusterPartition partition;  // P_i at phase start
    std::vector<char> popular;
    std::vector<int> u_clusters;  // indexes into partition.clusters joining U_i
};

struct ScaleBuildResult {
    HopsetLayer layer;
    std::vector<PhaseStats> phases;
    std::vector<PhaseSnapshot> snapshots;
    CostMeter cost;
};

struct BuildOptions {
    bool track_paths = false;
    bool audit = false;
    std::uint64_t path_vertex_cap = 50'000'000;  // stored memory-path budget
};

namespace detail {

inline MemoryPath memory_path_between(const PathRef& chain, Vertex from, Vertex to) {
    MemoryPath mp;
    path_to_vectors(chain, mp.verts, mp.cum);
    if (!mp.verts.empty() && mp.verts.front() == to && mp.verts.back() == from)
        mp = mp.reversed();
    if (mp.verts.empty() || mp.verts.front() != from || mp.verts.back() != to)
        throw BuildError("memory path endpoints disagree with the hopset edge");
    return mp;
}

inline void check_memory_path(const MemoryPath& mp, double edge_weight) {
    if (mp.weight() > edge_weight * (1.0 + 1e-9) + 1e-12)
        throw BuildError("memory path heavier than its hopset edge: " +
                         std::to_string(mp.weight()) + " > " + std::to_string(edge_weight));
    for (size_t i = 1; i < mp.cum.size(); ++i)
        if (mp.cum[i] < mp.cum[i - 1])
            throw BuildError("memory path cumulative weights not monotone");
}

}  // namespace detail

/// One scale of the superclustering-and-interconnection construction. `prev`
/// is the previous scale's layer (nullptr below the first built scale); its
/// edges join the exploration graph with min-merged weights.
inline ScaleBuildResult build_single_scale(const Graph& g, const HopsetLayer* prev, int k,
                                           const ParameterSchedule& sched,
                                           const BuildOptions& opt = {}) {
    const int n = g.n();
    const ScaleParams sp = sched.scale(k);
    const std::uint64_t hopbound = 2 * sched.beta_hops + 1;
    const int log_n = sched.log_n;

    std::vector<Edge> prev_edges;
    if (prev) prev_edges = prev->plain_edges();
    WorkGraph wg(g, prev_edges);

    ScaleBuildResult res;
    res.layer.scale = k;

    ClusterPartition part = ClusterPartition::singletons(n);
    ClusterMemory memory;
    if (opt.track_paths) memory = ClusterMemory::singletons(n);

    std::map<std::pair<Vertex, Vertex>, size_t> edge_index;
    auto emit_edge = [&](Vertex a, Vertex b, double w, EdgeKind kind, int phase,
                         std::optional<MemoryPath> path) -> bool {
        if (a == b) throw BuildError("hopset edge endpoints coincide");
        Vertex u = std::min(a, b), v = std::max(a, b);
        // both endpoints of an interconnection propose the edge; the first
        // proposal wins (iteration order is canonical, so this is stable)
        if (edge_index.contains({u, v})) return false;
        HopEdge e;
        e.u = u;
        e.v = v;
        e.w = w;
        e.kind = kind;
        e.phase = phase;
        if (path) {
            if (path->verts.front() != u) *path = path->reversed();
            detail::check_memory_path(*path, w);
            e.path = std::move(path);
        }
        edge_index[{u, v}] = res.layer.edges.size();
        res.layer.edges.push_back(std::move(e));
        return true;
    };

    std::uint64_t stored_path_vertices = 0;
    auto charge_path_budget = [&](std::uint64_t vertices) {
        stored_path_vertices += vertices;
        if (stored_path_vertices > opt.path_vertex_cap)
            throw BuildError("memory-path storage exceeded the configured cap");
    };

    for (int i = 0; i <= sched.ell; ++i) {
        const long long deg = sched.deg[static_cast<size_t>(i)];
        const double delta_hat = sp.delta_hat[static_cast<size_t>(i)];
        const double radius = sp.radius_bound[static_cast<size_t>(i)];
        PhaseStats st;
        st.phase = i;
        st.clusters_in = part.cluster_count();
        st.deg = deg;
        st.delta = sp.delta[static_cast<size_t>(i)];
        st.delta_hat = delta_hat;
        st.radius_bound = radius;

        PhaseSnapshot snap;
        if (opt.audit) snap.partition = part;

        auto pop = detect_popular(wg, part, deg, delta_hat, hopbound, opt.track_paths, &res.cost,
                                  opt.track_paths ? &memory : nullptr);
        for (char c : pop.popular) st.popular += c;
        if (opt.audit) snap.popular = pop.popular;

        const bool last_phase = i == sched.ell;
        std::vector<int> u_clusters;

        if (!last_phase) {
            std::vector<int> w_set;
            for (int c = 0; c < part.cluster_count(); ++c)
                if (pop.popular[static_cast<size_t>(c)]) w_set.push_back(c);

            RulingInstance inst;
            inst.candidates = w_set;
            inst.ids.resize(part.clusters.size());
            for (size_t c = 0; c < part.clusters.size(); ++c)
                inst.ids[c] = part.clusters[c].center;
            inst.id_bits = log_n;
            inst.knockout = [&](const std::vector<int>& sources) {
                auto r = cluster_bfs(wg, part, sources, 2, delta_hat, hopbound, false, &res.cost);
                std::vector<char> detected(part.clusters.size(), 0);
                for (size_t c = 0; c < part.clusters.size(); ++c)
                    detected[c] = r.detected_pulse[c] >= 0;
                return detected;
            };
            std::vector<int> q_set = ruling_set(inst);
            st.ruling = static_cast<long long>(q_set.size());

            auto detection = cluster_bfs(wg, part, q_set, 2 * log_n, delta_hat, hopbound,
                                         opt.track_paths, &res.cost,
                                         opt.track_paths ? &memory : nullptr);

            // every popular cluster must be superclustered
            for (int c : w_set)
                if (detection.detected_pulse[static_cast<size_t>(c)] < 0)
                    throw BuildError("popular cluster missed by the covering exploration");

            // group detected clusters by their winning ruling-set cluster
            std::map<Vertex, std::vector<int>> groups;  // winner center -> members
            for (int c = 0; c < part.cluster_count(); ++c) {
                if (detection.detected_pulse[static_cast<size_t>(c)] < 0) {
                    u_clusters.push_back(c);
                    continue;
                }
                groups[detection.winner_source[static_cast<size_t>(c)]].push_back(c);
            }
            st.superclustered = part.cluster_count() - static_cast<long long>(u_clusters.size());
            st.unclustered = static_cast<long long>(u_clusters.size());

            const double sup_weight = 2.0 * (delta_hat + 2.0 * radius) * log_n;
            ClusterPartition next;
            next.phase = i + 1;
            ClusterMemory next_memory;
            if (opt.track_paths) {
                next_memory.verts.assign(static_cast<size_t>(n), {});
                next_memory.cum.assign(static_cast<size_t>(n), {});
            }
            for (const auto& [winner_center, members] : groups) {
                Cluster super;
                super.center = winner_center;
                if (static_cast<long long>(members.size()) < deg + 1)
                    throw BuildError("supercluster smaller than deg+1 clusters");
                for (int c : members) {
                    const Cluster& cl = part.clusters[static_cast<size_t>(c)];
                    super.members.insert(super.members.end(), cl.members.begin(),
                                         cl.members.end());
                    std::optional<MemoryPath> mp;
                    if (cl.center != winner_center) {
                        if (opt.track_paths) {
                            mp = detail::memory_path_between(
                                detection.winner[static_cast<size_t>(c)].path, cl.center,
                                winner_center);
                            charge_path_budget(mp->verts.size());
                        }
                        if (emit_edge(cl.center, winner_center, sup_weight,
                                      EdgeKind::supercluster, i, std::move(mp)))
                            ++st.supercluster_edges;
                    }
                    if (opt.track_paths) {
                        // members now answer to the winner's center: prepend the
                        // winner-to-old-center witness path to each memory path
                        MemoryPath down = detail::memory_path_between(
                            detection.winner[static_cast<size_t>(c)].path, winner_center,
                            cl.center);
                        for (Vertex v : cl.members) {
                            auto& nv = next_memory.verts[static_cast<size_t>(v)];
                            auto& ncum = next_memory.cum[static_cast<size_t>(v)];
                            nv = down.verts;
                            ncum = down.cum;
                            const auto& ov = memory.verts[static_cast<size_t>(v)];
                            const auto& ocum = memory.cum[static_cast<size_t>(v)];
                            for (size_t j = 1; j < ov.size(); ++j) {
                                nv.push_back(ov[j]);
                                ncum.push_back(down.weight() + ocum[j]);
                            }
                        }
                    }
                }
                next.clusters.push_back(std::move(super));
            }
            // interconnection among the left-out clusters
            std::vector<char> in_u(part.clusters.size(), 0);
            for (int c : u_clusters) in_u[static_cast<size_t>(c)] = 1;
            std::vector<int> center_cluster(static_cast<size_t>(n), -1);
            for (size_t c = 0; c < part.clusters.size(); ++c)
                center_cluster[static_cast<size_t>(part.clusters[c].center)] =
                    static_cast<int>(c);
            for (int c : u_clusters) {
                for (const ExploreRecord& r : pop.neighbors[static_cast<size_t>(c)]) {
                    int c2 = center_cluster[static_cast<size_t>(r.source)];
                    if (c2 < 0 || !in_u[static_cast<size_t>(c2)]) continue;
                    std::optional<MemoryPath> mp;
                    if (opt.track_paths) {
                        mp = detail::memory_path_between(
                            r.path, r.source, part.clusters[static_cast<size_t>(c)].center);
                        charge_path_budget(mp->verts.size());
                    }
                    if (emit_edge(part.clusters[static_cast<size_t>(c)].center, r.source,
                                  r.dist + 2.0 * radius, EdgeKind::interconnect, i,
                                  std::move(mp)))
                        ++st.interconnect_edges;
                }
            }
            if (opt.audit) snap.u_clusters = u_clusters;
            res.phases.push_back(st);
            if (opt.audit) res.snapshots.push_back(std::move(snap));
            part = std::move(next);
            part.rebuild_vertex_index(n);
            if (opt.track_paths) memory = std::move(next_memory);
        } else {
            // final phase: no superclustering; every cluster interconnects
            if (st.popular != 0)
                throw BuildError("popular cluster in the final phase");
            if (st.clusters_in > deg)
                throw BuildError("final phase holds more clusters than its degree budget");
            st.unclustered = st.clusters_in;
            for (int c = 0; c < part.cluster_count(); ++c) {
                u_clusters.push_back(c);
                for (const ExploreRecord& r : pop.neighbors[static_cast<size_t>(c)]) {
                    std::optional<MemoryPath> mp;
                    if (opt.track_paths) {
                        mp = detail::memory_path_between(
                            r.path, r.source, part.clusters[static_cast<size_t>(c)].center);
                        charge_path_budget(mp->verts.size());
                    }
                    if (emit_edge(part.clusters[static_cast<size_t>(c)].center, r.source,
                                  r.dist + 2.0 * radius, EdgeKind::interconnect, i,
                                  std::move(mp)))
                        ++st.interconnect_edges;
                }
            }
            if (opt.audit) {
                snap.u_clusters = u_clusters;
                res.snapshots.push_back(std::move(snap));
            }
            res.phases.push_back(st);
        }
    }
    return res;
}

/// A finished hopset: layers for scales k0..lambda in the weight units of the
/// input graph, plus everything needed to query and audit it.
struct Hopset {
    ParameterSchedule sched;
    double weight_scale = 1.0;  // minimum input weight; layers were built at scale 1
    std::vector<HopsetLayer> layers;
    std::vector<std::vector<PhaseStats>> phase_stats;  // parallel to layers
    std::vector<CostMeter> layer_costs;                // parallel to layers
    CostMeter cost;
    bool paths_tracked = false;

    size_t edge_count() const {
        size_t s = 0;
        for (const auto& l : layers) s += l.edges.size();
        return s;
    }
    std::vector<Edge> all_edges() const {
        std::vector<Edge> out;
        for (const auto& l : layers) {
            auto es = l.plain_edges();
            out.insert(out.end(), es.begin(), es.end());
        }
        return out;
    }
};

/// Multi-scale construction driven by a precomputed schedule. Weights are
/// normalized so the lightest edge has weight one, scales k0..lambda are
/// built bottom-up (each over the graph merged with the previous layer), and
/// layer weights are mapped back to the input units. Pass `audit_sink` to
/// capture per-phase snapshots.
inline Hopset build_hopset_with_schedule(
    const Graph& g, const ParameterSchedule& sched, const BuildOptions& opt = {},
    std::vector<std::vector<PhaseSnapshot>>* audit_sink = nullptr) {
    Hopset h;
    h.sched = sched;
    h.paths_tracked = opt.track_paths;
    if (g.edge_count() == 0) return h;

    const double wmin = g.min_weight();
    h.weight_scale = wmin;
    const Graph normalized = g.scaled(1.0 / wmin);

    HopsetLayer prev;
    bool have_prev = false;
    for (int k = h.sched.k0; k <= h.sched.lambda; ++k) {
        ScaleBuildResult r =
            build_single_scale(normalized, have_prev ? &prev : nullptr, k, h.sched, opt);
        h.cost.merge(r.cost);
        h.layer_costs.push_back(r.cost);
        h.phase_stats.push_back(r.phases);
        if (audit_sink) audit_sink->push_back(std::move(r.snapshots));
        prev = r.layer;
        have_prev = true;
        h.layers.push_back(std::move(r.layer));
    }
    // back to input units
    for (HopsetLayer& layer : h.layers)
        for (HopEdge& e : layer.edges) {
            e.w *= wmin;
            if (e.path)
                for (double& c : e.path->cum) c *= wmin;
        }
    return h;
}

/// Full construction with the user-facing stretch target; the aspect ratio is
/// measured from the graph unless supplied.
inline Hopset build_hopset(const Graph& g, double eps, int kappa, double rho,
                           const BuildOptions& opt = {},
                           std::optional<double> aspect_override = std::nullopt,
                           std::vector<std::vector<PhaseSnapshot>>* audit_sink = nullptr) {
    double aspect = 1.0;
    if (aspect_override) {
        aspect = *aspect_override;
    } else if (g.edge_count() > 0) {
        aspect = aspect_ratio(g);
    }
    ParameterSchedule sched = compute_schedule(g.n(), eps, kappa, rho, aspect);
    return build_hopset_with_schedule(g, sched, opt, audit_sink);
}

}  // namespace hopset
