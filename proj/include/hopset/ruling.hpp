#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hopset/cluster.hpp"

namespace hopset {

/// Knock-out oracle: given source cluster indexes, run a depth-2 BFS in the
/// virtual cluster graph and return a detected flag per cluster index.
using KnockoutFn = std::function<std::vector<char>(const std::vector<int>&)>;

struct RulingInstance {
    std::vector<int> candidates;  // cluster indexes forming the candidate set
    std::vector<int> ids;         // per cluster index: its id (center vertex id)
    int id_bits = 0;              // uniform id width, log2 of the padded id space
    KnockoutFn knockout;
};

struct RulingTrace {
    // alive candidate indexes after processing each level, bottom level first;
    // the union of outputs at level h rules the candidate set within 2h
    std::vector<std::vector<int>> alive_per_level;
};

/// Deterministic ruling-set selection over the virtual cluster graph:
/// candidates split recursively on id bits, and at every level the zero-side
/// outputs knock out one-side clusters they reach within two virtual hops.
/// Processing is bottom-up over bit positions; all same-level knock-out
/// explorations run as a single multi-source batch. The result is 3-separated
/// and rules the candidate set within 2*id_bits virtual hops.
inline std::vector<int> ruling_set(const RulingInstance& inst, RulingTrace* trace = nullptr) {
    std::vector<int> alive = inst.candidates;
    if (trace) trace->alive_per_level.clear();
    for (int bit = 0; bit < inst.id_bits; ++bit) {
        std::vector<int> zero_side;
        for (int ci : alive)
            if (((inst.ids[static_cast<size_t>(ci)] >> bit) & 1) == 0) zero_side.push_back(ci);
        std::vector<char> detected = inst.knockout(zero_side);
        std::vector<int> next;
        next.reserve(alive.size());
        for (int ci : alive) {
            const bool one_side = ((inst.ids[static_cast<size_t>(ci)] >> bit) & 1) != 0;
            if (one_side && detected[static_cast<size_t>(ci)]) continue;  // knocked out
            next.push_back(ci);
        }
        alive = std::move(next);
        if (trace) trace->alive_per_level.push_back(alive);
    }
    return alive;
}

/// Explicit virtual cluster graph for verification at test scale.
struct ExplicitVirtualGraph {
    int nc = 0;
    std::vector<std::vector<int>> adj;  // unweighted, by cluster index

    std::vector<int> bfs_levels(const std::vector<int>& sources) const {
        std::vector<int> level(static_cast<size_t>(nc), -1);
        std::vector<int> frontier;
        for (int s : sources)
            if (level[static_cast<size_t>(s)] < 0) {
                level[static_cast<size_t>(s)] = 0;
                frontier.push_back(s);
            }
        int d = 0;
        while (!frontier.empty()) {
            std::vector<int> next;
            ++d;
            for (int u : frontier)
                for (int v : adj[static_cast<size_t>(u)])
                    if (level[static_cast<size_t>(v)] < 0) {
                        level[static_cast<size_t>(v)] = d;
                        next.push_back(v);
                    }
            frontier = std::move(next);
        }
        return level;
    }
};

struct RulingReport {
    bool pass = false;
    int min_separation = std::numeric_limits<int>::max();
    int max_covering = 0;
    std::pair<int, int> offending_pair{-1, -1};
    int offending_candidate = -1;
    std::string failure;  // "", "separation" or "covering"
};

/// Check that `selected` is 3-separated and rules `candidates` within
/// `covering_allowed` hops of the explicit virtual graph.
inline RulingReport verify_ruling(const std::vector<int>& selected,
                                  const std::vector<int>& candidates,
                                  const ExplicitVirtualGraph& vg, int covering_allowed,
                                  int separation_required = 3) {
    RulingReport rep;
    for (int q : selected) {
        std::vector<int> lv = vg.bfs_levels({q});
        for (int q2 : selected) {
            if (q2 == q) continue;
            int d = lv[static_cast<size_t>(q2)];
            if (d < 0) continue;
            if (d < rep.min_separation) {
                rep.min_separation = d;
                rep.offending_pair = {q, q2};
            }
        }
    }
    if (rep.min_separation < separation_required) {
        rep.failure = "separation";
        return rep;
    }
    std::vector<int> lv = vg.bfs_levels(selected);
    for (int c : candidates) {
        int d = lv[static_cast<size_t>(c)];
        if (d < 0) {
            rep.max_covering = std::numeric_limits<int>::max();
            rep.offending_candidate = c;
            rep.failure = "covering";
            return rep;
        }
        if (d > rep.max_covering) {
            rep.max_covering = d;
            if (d > covering_allowed) rep.offending_candidate = c;
        }
    }
    if (rep.max_covering > covering_allowed) {
        rep.failure = "covering";
        return rep;
    }
    rep.pass = true;
    return rep;
}

}  // namespace hopset
