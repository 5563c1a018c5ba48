#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "hopset/builder.hpp"
#include "hopset/graph.hpp"
#include "hopset/reduction.hpp"

namespace hopset {

/// Query-side view: the graph merged with the hopset (minimum weight per
/// pair), the hop budget, and the stretch the answers are good for.
struct HopsetIndex {
    WorkGraph merged;
    std::uint64_t beta = 1;
    double eps = 0.0;

    static HopsetIndex of(const Graph& g, const Hopset& h) {
        HopsetIndex idx;
        auto extra = h.all_edges();
        idx.merged = WorkGraph(g, extra);
        idx.beta = h.sched.beta_hops;
        idx.eps = h.sched.rescaled ? h.sched.eps_user : h.sched.eps_dprime;
        return idx;
    }
    static HopsetIndex of(const Graph& g, const ReducedHopset& rh) {
        HopsetIndex idx;
        auto extra = rh.all_edges();
        idx.merged = WorkGraph(g, extra);
        idx.beta = rh.beta_hops_query;
        idx.eps = rh.eps_user;
        return idx;
    }
};

/// Approximate single-source distances: a hop-bounded relaxation in the
/// merged graph. Answers lie in [d_G, (1+eps) d_G].
inline DistanceVector sssd(const HopsetIndex& idx, Vertex s, BellmanFordStats* stats = nullptr) {
    std::vector<Vertex> src{s};
    return bounded_bellman_ford(idx.merged, src, idx.beta, std::nullopt, stats);
}

/// Batch variant; rows equal looping sssd bitwise. Sources are distributed
/// over `threads` workers writing disjoint slots.
inline std::vector<DistanceVector> mssd(const HopsetIndex& idx, const std::vector<Vertex>& sources,
                                        int threads = 1) {
    if (sources.empty()) throw std::invalid_argument("mssd needs at least one source");
    std::vector<DistanceVector> rows(sources.size());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(sources.size())));
    if (threads == 1) {
        for (size_t i = 0; i < sources.size(); ++i) rows[i] = sssd(idx, sources[i]);
        return rows;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= sources.size()) return;
                rows[i] = sssd(idx, sources[i]);
            }
        });
    for (auto& th : pool) th.join();
    return rows;
}

}  // namespace hopset
