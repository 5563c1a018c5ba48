#pragma once

// Shared test utilities: seeded graph construction and brute-force oracles
// kept independent of the algorithm paths they are used to check.

#include <cstdint>
#include <random>
#include <vector>

#include "hopset/cluster.hpp"
#include "hopset/graph.hpp"
#include "hopset/ruling.hpp"

namespace testutil {

inline double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline hopset::Graph random_connected_graph(int n, double extra_edge_prob, std::uint64_t seed,
                                            double wmin = 0.5, double wmax = 4.0) {
    std::mt19937_64 rng(seed);
    std::vector<hopset::Edge> edges;
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
        edges.push_back({u, v, wmin + (wmax - wmin) * unit_draw(rng)});
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unit_draw(rng) < extra_edge_prob)
                edges.push_back({u, v, wmin + (wmax - wmin) * unit_draw(rng)});
    return hopset::Graph(n, std::move(edges));
}

/// Brute-force virtual cluster graph: clusters adjacent iff their hop-bounded
/// distance is within the threshold. Uses the plain Bellman-Ford kernel, not
/// the exploration engine it is used to audit.
inline hopset::ExplicitVirtualGraph brute_virtual_graph(const hopset::WorkGraph& g,
                                                        const hopset::ClusterPartition& p,
                                                        double delta_hat,
                                                        std::uint64_t hopbound) {
    const int nc = p.cluster_count();
    hopset::ExplicitVirtualGraph vg;
    vg.nc = nc;
    vg.adj.assign(static_cast<size_t>(nc), {});
    std::vector<std::vector<double>> cdist(static_cast<size_t>(nc));
    for (int c = 0; c < nc; ++c) {
        auto dv = hopset::bounded_bellman_ford(g, p.clusters[static_cast<size_t>(c)].members,
                                               hopbound);
        cdist[static_cast<size_t>(c)].assign(static_cast<size_t>(nc), hopset::kInf);
        for (int c2 = 0; c2 < nc; ++c2) {
            double best = hopset::kInf;
            for (hopset::Vertex v : p.clusters[static_cast<size_t>(c2)].members)
                best = std::min(best, dv.dist[static_cast<size_t>(v)]);
            cdist[static_cast<size_t>(c)][static_cast<size_t>(c2)] = best;
        }
    }
    for (int a = 0; a < nc; ++a)
        for (int b = 0; b < nc; ++b)
            if (a != b && cdist[static_cast<size_t>(a)][static_cast<size_t>(b)] <= delta_hat)
                vg.adj[static_cast<size_t>(a)].push_back(b);
    return vg;
}

/// Hop-bounded cluster-to-cluster distance by multi-source Bellman-Ford.
inline double brute_cluster_distance(const hopset::WorkGraph& g,
                                     const hopset::ClusterPartition& p, int ca, int cb,
                                     std::uint64_t hopbound) {
    auto dv =
        hopset::bounded_bellman_ford(g, p.clusters[static_cast<size_t>(ca)].members, hopbound);
    double best = hopset::kInf;
    for (hopset::Vertex v : p.clusters[static_cast<size_t>(cb)].members)
        best = std::min(best, dv.dist[static_cast<size_t>(v)]);
    return best;
}

}  // namespace testutil
