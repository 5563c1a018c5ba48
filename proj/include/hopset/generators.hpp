#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hopset/graph.hpp"

namespace hopset {

/// Seeded synthetic families. All randomness flows through explicit integer
/// arithmetic on mt19937_64 draws, so outputs are stable across platforms.
namespace gen {

inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// log-uniform weight spanning `decades` orders of magnitude above wmin
inline double log_uniform_weight(std::mt19937_64& rng, double wmin, double decades) {
    return wmin * std::pow(10.0, decades * unit(rng));
}

/// Connected Erdos-Renyi-style graph: a random attachment backbone plus
/// independent extra pairs up to the requested average degree.
inline Graph erdos_renyi(int n, double avg_degree, double weight_decades, std::uint64_t seed) {
    if (n < 1) throw GraphError("generator needs n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
        edges.push_back({u, v, log_uniform_weight(rng, 1.0, weight_decades)});
    }
    const double p = n > 1 ? std::min(1.0, avg_degree / static_cast<double>(n - 1)) : 0.0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unit(rng) < p) edges.push_back({u, v, log_uniform_weight(rng, 1.0, weight_decades)});
    return Graph(n, std::move(edges));
}

/// Random geometric graph on the unit square; Euclidean weights scaled by
/// `weight_scale`, plus a backbone so the graph stays connected.
inline Graph geometric(int n, double radius, double weight_scale, std::uint64_t seed) {
    if (n < 1) throw GraphError("generator needs n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<double, double>> pts(static_cast<size_t>(n));
    for (auto& [x, y] : pts) {
        x = unit(rng);
        y = unit(rng);
    }
    auto dist = [&pts](int a, int b) {
        const double dx = pts[static_cast<size_t>(a)].first - pts[static_cast<size_t>(b)].first;
        const double dy = pts[static_cast<size_t>(a)].second - pts[static_cast<size_t>(b)].second;
        return std::sqrt(dx * dx + dy * dy);
    };
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (dist(u, v) <= radius)
                edges.push_back({u, v, std::max(dist(u, v), 1e-6) * weight_scale});
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
        edges.push_back({u, v, std::max(dist(u, v), 1e-6) * weight_scale});
    }
    return Graph(n, std::move(edges));
}

/// Path or cycle whose weights are powers of two drawn up to `max_exponent`;
/// stresses wide aspect ratios.
inline Graph power_weight_ring(int n, int max_exponent, bool close_cycle, std::uint64_t seed) {
    if (n < 2) throw GraphError("generator needs n >= 2");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (int v = 0; v + 1 < n; ++v) {
        const int e = static_cast<int>(rng() % static_cast<std::uint64_t>(max_exponent + 1));
        edges.push_back({v, v + 1, std::ldexp(1.0, e)});
    }
    if (close_cycle) {
        const int e = static_cast<int>(rng() % static_cast<std::uint64_t>(max_exponent + 1));
        edges.push_back({n - 1, 0, std::ldexp(1.0, e)});
    }
    return Graph(n, std::move(edges));
}

/// Dense unit-weight blobs joined by heavy bridges: many close cluster pairs
/// at the bottom scales plus a huge aspect ratio.
inline Graph blob_chain(int blobs, int blob_size, double bridge_weight, std::uint64_t seed) {
    if (blobs < 1 || blob_size < 2) throw GraphError("generator needs blobs >= 1, blob_size >= 2");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    const int n = blobs * blob_size;
    for (int b = 0; b < blobs; ++b) {
        const int base = b * blob_size;
        for (int i = 0; i < blob_size; ++i)
            for (int j = i + 1; j < blob_size; ++j)
                if (i + 1 == j || unit(rng) < 0.6)
                    edges.push_back({base + i, base + j, 1.0 + unit(rng)});
        if (b + 1 < blobs) edges.push_back({base + blob_size - 1, base + blob_size, bridge_weight});
    }
    return Graph(n, std::move(edges));
}

}  // namespace gen
}  // namespace hopset
