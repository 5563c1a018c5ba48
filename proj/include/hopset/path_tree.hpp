#pragma once

#include <string>
#include <vector>

#include "hopset/costs.hpp"
#include "hopset/graph.hpp"

namespace hopset {

class TreeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rooted tree over the vertex set: per-vertex parent pointer, the weight of
/// the edge to the parent, and a distance estimate. Unreached vertices carry
/// parent -1 and an infinite estimate.
struct PathTree {
    Vertex source = -1;
    std::vector<Vertex> parent;
    std::vector<double> est;
    std::vector<double> edge_w;

    size_t tree_edge_count() const {
        size_t c = 0;
        for (size_t v = 0; v < parent.size(); ++v)
            if (parent[v] != -1 && static_cast<Vertex>(v) != source) ++c;
        return c;
    }
};

/// Parent-pointer doubling: after ceil(log2 n) synchronous iterations every
/// vertex points at the root and holds its exact tree distance. The tree's
/// parent chains must be acyclic and end at the source.
inline std::vector<double> pointer_jump(const PathTree& t, CostMeter* meter = nullptr) {
    const size_t n = t.parent.size();
    std::vector<Vertex> q(n);
    std::vector<double> d(n);
    std::vector<char> in_tree(n, 0);
    for (size_t v = 0; v < n; ++v) {
        if (static_cast<Vertex>(v) == t.source) {
            q[v] = t.source;
            d[v] = 0.0;
            in_tree[v] = 1;
        } else if (t.parent[v] != -1) {
            q[v] = t.parent[v];
            d[v] = t.edge_w[v];
            in_tree[v] = 1;
        } else {
            q[v] = static_cast<Vertex>(v);
            d[v] = kInf;
        }
    }
    const int iters = ceil_log2(static_cast<std::uint64_t>(std::max<size_t>(n, 2))) + 1;
    std::vector<Vertex> q2(n);
    std::vector<double> d2(n);
    for (int it = 0; it < iters; ++it) {
        for (size_t v = 0; v < n; ++v) {
            if (!in_tree[v]) {
                q2[v] = q[v];
                d2[v] = d[v];
                continue;
            }
            d2[v] = d[v] + d[static_cast<size_t>(q[v])];
            q2[v] = q[static_cast<size_t>(q[v])];
        }
        q.swap(q2);
        d.swap(d2);
    }
    for (size_t v = 0; v < n; ++v) {
        if (in_tree[v] && q[v] != t.source)
            throw TreeError("pointer jumping did not reach the root from vertex " +
                            std::to_string(v));
        if (!in_tree[v]) d[v] = kInf;
    }
    if (meter) {
        meter->add_rounds(static_cast<std::uint64_t>(iters));
        meter->add_work(static_cast<std::uint64_t>(iters) * n);
    }
    std::vector<double> out(n);
    for (size_t v = 0; v < n; ++v) out[v] = (static_cast<Vertex>(v) == t.source) ? 0.0 : d[v];
    return out;
}

/// Structural audit used by tests and the validate command: acyclic parents,
/// estimates strictly decreasing toward the root.
inline void check_tree_shape(const PathTree& t) {
    const size_t n = t.parent.size();
    for (size_t v = 0; v < n; ++v) {
        if (static_cast<Vertex>(v) == t.source || t.parent[v] == -1) continue;
        if (!(t.est[static_cast<size_t>(t.parent[v])] < t.est[v]))
            throw TreeError("estimate does not decrease toward the root at vertex " +
                            std::to_string(v));
    }
    // est-decrease implies acyclicity; still bound the chain length defensively
    for (size_t v = 0; v < n; ++v) {
        Vertex cur = static_cast<Vertex>(v);
        size_t steps = 0;
        while (cur != t.source && t.parent[static_cast<size_t>(cur)] != -1) {
            cur = t.parent[static_cast<size_t>(cur)];
            if (++steps > n) throw TreeError("parent chain longer than n at vertex " +
                                             std::to_string(v));
        }
    }
}

}  // namespace hopset
