#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "helpers.hpp"
#include "hopset/generators.hpp"
#include "hopset/query.hpp"

using namespace hopset;

TEST_CASE("isolated source sees only itself") {
    Graph g(4, {{1, 2, 1.0}, {2, 3, 1.0}});
    Hopset h = build_hopset(g, 0.5, 3, 0.49);
    HopsetIndex idx = HopsetIndex::of(g, h);
    auto dv = sssd(idx, 0);
    CHECK(dv.dist[0] == 0.0);
    for (Vertex v = 1; v < 4; ++v) CHECK(!dv.reached(v));
}

TEST_CASE("unit path is answered exactly") {
    std::vector<Edge> es;
    for (int v = 0; v + 1 < 12; ++v) es.push_back({v, v + 1, 1.0});
    Graph g(12, std::move(es));
    Hopset h = build_hopset(g, 0.3, 3, 0.49);
    HopsetIndex idx = HopsetIndex::of(g, h);
    auto dv = sssd(idx, 0);
    for (Vertex v = 0; v < 12; ++v) CHECK(dv.dist[static_cast<size_t>(v)] == static_cast<double>(v));
}

TEST_CASE("stretch bound against the oracle on a wide-aspect fixture") {
    Graph g = gen::blob_chain(4, 8, 3.0e8, 12);
    Hopset h = build_hopset(g, 0.999, 3, 0.49);
    REQUIRE(h.edge_count() > 0);
    HopsetIndex idx = HopsetIndex::of(g, h);
    WorkGraph plain(g);
    for (Vertex s = 0; s < g.n(); ++s) {
        auto exact = dijkstra(plain, s);
        auto approx = sssd(idx, s);
        for (Vertex v = 0; v < g.n(); ++v) {
            if (v == s) continue;
            const double de = exact.dist[static_cast<size_t>(v)];
            const double da = approx.dist[static_cast<size_t>(v)];
            REQUIRE(da >= de * (1.0 - 1e-9));
            REQUIRE(da <= de * (1.0 + 0.999) * (1.0 + 1e-9));
            // realizing path stays within the hop budget
            REQUIRE(approx.hops[static_cast<size_t>(v)] >= 0);
            REQUIRE(static_cast<std::uint64_t>(approx.hops[static_cast<size_t>(v)]) <= idx.beta);
        }
    }
}

TEST_CASE("batch rows equal looping single-source bitwise") {
    Graph g = testutil::random_connected_graph(48, 0.1, 5, 1.0, 9.0);
    Hopset h = build_hopset(g, 0.5, 3, 0.49);
    HopsetIndex idx = HopsetIndex::of(g, h);
    std::vector<Vertex> sources{0, 7, 13, 40, 47, 7};
    auto batch1 = mssd(idx, sources, 1);
    auto batch4 = mssd(idx, sources, 4);
    for (size_t i = 0; i < sources.size(); ++i) {
        auto row = sssd(idx, sources[i]);
        REQUIRE(batch1[i].dist.size() == row.dist.size());
        for (size_t v = 0; v < row.dist.size(); ++v) {
            CHECK(std::memcmp(&batch1[i].dist[v], &row.dist[v], sizeof(double)) == 0);
            CHECK(std::memcmp(&batch4[i].dist[v], &row.dist[v], sizeof(double)) == 0);
            CHECK(batch1[i].parent[v] == row.parent[v]);
            CHECK(batch4[i].parent[v] == row.parent[v]);
            CHECK(batch4[i].hops[v] == row.hops[v]);
        }
    }
}

TEST_CASE("all-pairs stretch on a small graph through the index") {
    Graph g = testutil::random_connected_graph(32, 0.12, 9, 1.0, 20.0);
    Hopset h = build_hopset(g, 0.5, 4, 0.25);
    HopsetIndex idx = HopsetIndex::of(g, h);
    WorkGraph plain(g);
    std::vector<Vertex> all(32);
    for (int i = 0; i < 32; ++i) all[static_cast<size_t>(i)] = i;
    auto rows = mssd(idx, all, 3);
    for (Vertex s = 0; s < 32; ++s) {
        auto exact = dijkstra(plain, s);
        for (Vertex v = 0; v < 32; ++v) {
            if (v == s) continue;
            CHECK(rows[static_cast<size_t>(s)].dist[static_cast<size_t>(v)] <=
                  exact.dist[static_cast<size_t>(v)] * 1.5 * (1.0 + 1e-9));
            CHECK(rows[static_cast<size_t>(s)].dist[static_cast<size_t>(v)] >=
                  exact.dist[static_cast<size_t>(v)] * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("disjoint components stay infinite") {
    Graph g(6, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}});
    Hopset h = build_hopset(g, 0.5, 3, 0.49);
    HopsetIndex idx = HopsetIndex::of(g, h);
    auto rows = mssd(idx, {0, 3}, 2);
    CHECK(!rows[0].reached(4));
    CHECK(!rows[1].reached(1));
    CHECK(rows[0].reached(2));
    CHECK(rows[1].reached(5));
}

TEST_CASE("reduced index serves queries under the same contract") {
    Graph g = gen::erdos_renyi(48, 5.0, 8.0, 33);
    ReducedHopset rh = build_reduced_hopset(g, 0.5, 3, 0.49);
    HopsetIndex idx = HopsetIndex::of(g, rh);
    WorkGraph plain(g);
    for (Vertex s : {0, 20, 47}) {
        auto exact = dijkstra(plain, s);
        auto approx = sssd(idx, s);
        for (Vertex v = 0; v < g.n(); ++v) {
            if (v == s || !exact.reached(v)) continue;
            CHECK(approx.dist[static_cast<size_t>(v)] >=
                  exact.dist[static_cast<size_t>(v)] * (1.0 - 1e-9));
            CHECK(approx.dist[static_cast<size_t>(v)] <=
                  exact.dist[static_cast<size_t>(v)] * 1.5 * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("merged view keeps the minimum weight per pair") {
    Graph g(3, {{0, 1, 5.0}, {1, 2, 2.0}});
    std::vector<Edge> extra{{0, 1, 3.0}, {1, 2, 4.0}, {0, 2, 7.0}};
    WorkGraph merged(g, extra);
    auto weight_of = [&merged](Vertex a, Vertex b) {
        for (const auto& [to, w] : merged.adj[static_cast<size_t>(a)])
            if (to == b) return w;
        return kInf;
    };
    CHECK(weight_of(0, 1) == 3.0);
    CHECK(weight_of(1, 0) == 3.0);
    CHECK(weight_of(1, 2) == 2.0);
    CHECK(weight_of(0, 2) == 7.0);
}
