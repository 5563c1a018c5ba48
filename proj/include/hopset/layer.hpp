#pragma once

#include <optional>
#include <vector>

#include "hopset/graph.hpp"

namespace hopset {

enum class EdgeKind { supercluster, interconnect };

/// Witness path for a hopset edge: vertices from edge.u to edge.v over edges
/// of the graph merged with the previous layer, with cumulative weights from
/// edge.u. Its total weight never exceeds the hopset edge weight.
struct MemoryPath {
    std::vector<Vertex> verts;
    std::vector<double> cum;

    double weight() const { return cum.empty() ? 0.0 : cum.back(); }
    size_t hops() const { return verts.empty() ? 0 : verts.size() - 1; }

    MemoryPath reversed() const {
        MemoryPath r;
        const double total = weight();
        r.verts.assign(verts.rbegin(), verts.rend());
        r.cum.resize(cum.size());
        for (size_t i = 0; i < cum.size(); ++i) r.cum[i] = total - cum[cum.size() - 1 - i];
        return r;
    }
};

struct HopEdge {
    Vertex u = -1;  // canonical u < v
    Vertex v = -1;
    double w = 0.0;
    EdgeKind kind = EdgeKind::interconnect;
    int phase = 0;
    std::optional<MemoryPath> path;
};

/// All hopset edges emitted for one scale.
struct HopsetLayer {
    int scale = 0;
    std::vector<HopEdge> edges;

    std::vector<Edge> plain_edges() const {
        std::vector<Edge> out;
        out.reserve(edges.size());
        for (const HopEdge& e : edges) out.push_back({e.u, e.v, e.w});
        return out;
    }

    std::uint64_t stored_path_vertices() const {
        std::uint64_t s = 0;
        for (const HopEdge& e : edges)
            if (e.path) s += e.path->verts.size();
        return s;
    }
};

}  // namespace hopset
