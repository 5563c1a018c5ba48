#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hopset/builder.hpp"
#include "hopset/io.hpp"
#include "hopset/reduction.hpp"

namespace hopset {

/// Versioned JSON artifact carrying a built hopset plus everything queries,
/// tree extraction and validation need. Key order is fixed and doubles are
/// emitted round-trip exactly, so identical builds serialize byte-identically.
using ojson = nlohmann::ordered_json;

class ArtifactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline ojson schedule_to_json(const ParameterSchedule& s) {
    ojson j;
    j["n"] = s.n;
    j["padded_n"] = s.padded_n;
    j["log_n"] = s.log_n;
    j["eps_user"] = s.eps_user;
    j["eps_internal"] = s.eps_internal;
    j["eps_prime"] = s.eps_prime;
    j["eps_dprime"] = s.eps_dprime;
    j["rescaled"] = s.rescaled;
    j["eps_assumption_ok"] = s.eps_assumption_ok;
    j["kappa"] = s.kappa;
    j["rho"] = s.rho;
    j["aspect"] = s.aspect;
    j["lambda"] = s.lambda;
    j["i0"] = s.i0;
    j["ell"] = s.ell;
    j["deg"] = s.deg;
    j["h"] = s.h;
    j["beta"] = s.beta;
    j["beta_hops"] = s.beta_hops;
    j["k0"] = s.k0;
    j["sigma"] = s.sigma;
    j["sigma_cap"] = s.sigma_cap;
    j["vacuous"] = s.vacuous;
    j["beta_exceeds_n"] = s.beta_exceeds_n;
    return j;
}

inline ParameterSchedule schedule_from_json(const ojson& j) {
    ParameterSchedule s;
    s.n = j.at("n");
    s.padded_n = j.at("padded_n");
    s.log_n = j.at("log_n");
    s.eps_user = j.at("eps_user");
    s.eps_internal = j.at("eps_internal");
    s.eps_prime = j.at("eps_prime");
    s.eps_dprime = j.at("eps_dprime");
    s.rescaled = j.at("rescaled");
    s.eps_assumption_ok = j.at("eps_assumption_ok");
    s.kappa = j.at("kappa");
    s.rho = j.at("rho");
    s.aspect = j.at("aspect");
    s.lambda = j.at("lambda");
    s.i0 = j.at("i0");
    s.ell = j.at("ell");
    s.deg = j.at("deg").get<std::vector<long long>>();
    s.h = j.at("h").get<std::vector<double>>();
    s.beta = j.at("beta");
    s.beta_hops = j.at("beta_hops");
    s.k0 = j.at("k0");
    s.sigma = j.at("sigma").get<std::vector<double>>();
    s.sigma_cap = j.at("sigma_cap");
    s.vacuous = j.at("vacuous");
    s.beta_exceeds_n = j.at("beta_exceeds_n");
    return s;
}

inline ojson layer_to_json(const HopsetLayer& l) {
    ojson j;
    j["scale"] = l.scale;
    ojson edges = ojson::array();
    for (const HopEdge& e : l.edges) {
        ojson je;
        je["u"] = e.u;
        je["v"] = e.v;
        je["w"] = e.w;
        je["kind"] = e.kind == EdgeKind::supercluster ? "s" : "i";
        je["phase"] = e.phase;
        if (e.path) {
            je["pv"] = e.path->verts;
            je["pc"] = e.path->cum;
        }
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    return j;
}

inline HopsetLayer layer_from_json(const ojson& j) {
    HopsetLayer l;
    l.scale = j.at("scale");
    for (const auto& je : j.at("edges")) {
        HopEdge e;
        e.u = je.at("u");
        e.v = je.at("v");
        e.w = je.at("w");
        e.kind = je.at("kind") == "s" ? EdgeKind::supercluster : EdgeKind::interconnect;
        e.phase = je.at("phase");
        if (je.contains("pv")) {
            MemoryPath mp;
            mp.verts = je.at("pv").get<std::vector<Vertex>>();
            mp.cum = je.at("pc").get<std::vector<double>>();
            e.path = std::move(mp);
        }
        l.edges.push_back(std::move(e));
    }
    return l;
}

inline ojson phase_stats_to_json(const std::vector<PhaseStats>& ps) {
    ojson arr = ojson::array();
    for (const PhaseStats& st : ps) {
        ojson j;
        j["phase"] = st.phase;
        j["clusters_in"] = st.clusters_in;
        j["popular"] = st.popular;
        j["ruling"] = st.ruling;
        j["superclustered"] = st.superclustered;
        j["unclustered"] = st.unclustered;
        j["supercluster_edges"] = st.supercluster_edges;
        j["interconnect_edges"] = st.interconnect_edges;
        j["deg"] = st.deg;
        j["delta"] = st.delta;
        j["delta_hat"] = st.delta_hat;
        j["radius_bound"] = st.radius_bound;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline std::vector<PhaseStats> phase_stats_from_json(const ojson& arr) {
    std::vector<PhaseStats> out;
    for (const auto& j : arr) {
        PhaseStats st;
        st.phase = j.at("phase");
        st.clusters_in = j.at("clusters_in");
        st.popular = j.at("popular");
        st.ruling = j.at("ruling");
        st.superclustered = j.at("superclustered");
        st.unclustered = j.at("unclustered");
        st.supercluster_edges = j.at("supercluster_edges");
        st.interconnect_edges = j.at("interconnect_edges");
        st.deg = j.at("deg");
        st.delta = j.at("delta");
        st.delta_hat = j.at("delta_hat");
        st.radius_bound = j.at("radius_bound");
        out.push_back(st);
    }
    return out;
}

}  // namespace detail

struct LoadedArtifact {
    std::string mode;  // "direct", "path-reporting" or "reduced"
    std::uint64_t graph_checksum = 0;
    std::optional<Hopset> direct;
    std::optional<ReducedHopset> reduced;
};

inline std::string serialize_hopset(const Graph& g, const Hopset& h, const std::string& mode) {
    ojson j;
    j["format"] = "hopset-artifact";
    j["version"] = 1;
    j["mode"] = mode;
    j["graph"] = {{"n", g.n()}, {"m", g.edge_count()}, {"checksum", graph_checksum(g)}};
    j["schedule"] = detail::schedule_to_json(h.sched);
    j["weight_scale"] = h.weight_scale;
    j["paths_tracked"] = h.paths_tracked;
    ojson layers = ojson::array();
    for (const HopsetLayer& l : h.layers) layers.push_back(detail::layer_to_json(l));
    j["layers"] = std::move(layers);
    ojson stats = ojson::array();
    for (const auto& ps : h.phase_stats) stats.push_back(detail::phase_stats_to_json(ps));
    j["phase_stats"] = std::move(stats);
    j["cost"] = {{"rounds", h.cost.rounds}, {"work", h.cost.work}};
    return j.dump(1) + "\n";
}

inline std::string serialize_reduced(const Graph& g, const ReducedHopset& rh) {
    ojson j;
    j["format"] = "hopset-artifact";
    j["version"] = 1;
    j["mode"] = "reduced";
    j["graph"] = {{"n", g.n()}, {"m", g.edge_count()}, {"checksum", graph_checksum(g)}};
    j["eps_user"] = rh.eps_user;
    j["eps6"] = rh.eps6;
    j["kappa"] = rh.kappa;
    j["rho"] = rh.rho;
    j["weight_scale"] = rh.weight_scale;
    j["aspect"] = rh.aspect;
    j["eps_internal"] = rh.eps_internal;
    j["beta"] = rh.beta;
    j["beta_hops_query"] = rh.beta_hops_query;
    j["paths_tracked"] = rh.paths_tracked;
    j["scales"] = rh.scales;
    ojson sgs = ojson::array();
    for (const ScalePartition& sp : rh.scale_graphs) {
        ojson js;
        js["k"] = sp.k;
        js["threshold"] = sp.contract_threshold;
        js["cap"] = sp.cap;
        js["node_of"] = sp.node_of;
        ojson ses = ojson::array();
        for (const auto& se : sp.superedges)
            ses.push_back({{"x", se.x}, {"y", se.y}, {"w", se.w}, {"witness", se.witness}});
        js["superedges"] = std::move(ses);
        // tree edges live in the node registry; keep the partition lean
        sgs.push_back(std::move(js));
    }
    j["scale_graphs"] = std::move(sgs);
    ojson nodes = ojson::array();
    for (const DistinctNode& d : rh.registry.nodes) {
        nodes.push_back({{"first_scale_pos", d.first_scale_pos},
                         {"center", d.center},
                         {"members", d.members},
                         {"t_parent", d.t_parent},
                         {"t_dist", d.t_dist}});
    }
    j["nodes"] = std::move(nodes);
    ojson sdist = ojson::array();
    for (const auto& sd : rh.registry.scale_distinct) sdist.push_back(sd);
    j["scale_distinct"] = std::move(sdist);
    ojson stars = ojson::array();
    for (const StarEdge& se : rh.registry.stars)
        stars.push_back({{"c", se.center}, {"l", se.leaf}, {"w", se.w}, {"node", se.node}});
    j["stars"] = std::move(stars);
    ojson per_scale = ojson::array();
    for (const ReducedScaleHopset& ps : rh.per_scale) {
        ojson jp;
        jp["k"] = ps.k;
        jp["schedule"] = detail::schedule_to_json(ps.sched);
        ojson layers = ojson::array();
        for (const HopsetLayer& l : ps.center_layers) layers.push_back(detail::layer_to_json(l));
        jp["layers"] = std::move(layers);
        per_scale.push_back(std::move(jp));
    }
    j["per_scale"] = std::move(per_scale);
    j["cost"] = {{"rounds", rh.cost.rounds}, {"work", rh.cost.work}};
    return j.dump(1) + "\n";
}

inline LoadedArtifact load_artifact(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception& e) {
        throw ArtifactError(std::string("artifact is not valid JSON: ") + e.what());
    }
    if (!j.contains("format") || j.at("format") != "hopset-artifact" || j.at("version") != 1)
        throw ArtifactError("unrecognized artifact format or version");
    LoadedArtifact out;
    out.mode = j.at("mode");
    out.graph_checksum = j.at("graph").at("checksum");
    if (out.mode == "reduced") {
        ReducedHopset rh;
        rh.n = j.at("graph").at("n");
        rh.eps_user = j.at("eps_user");
        rh.eps6 = j.at("eps6");
        rh.kappa = j.at("kappa");
        rh.rho = j.at("rho");
        rh.weight_scale = j.at("weight_scale");
        rh.aspect = j.at("aspect");
        rh.eps_internal = j.at("eps_internal");
        rh.beta = j.at("beta");
        rh.beta_hops_query = j.at("beta_hops_query");
        rh.paths_tracked = j.at("paths_tracked");
        rh.scales = j.at("scales").get<std::vector<int>>();
        for (const auto& js : j.at("scale_graphs")) {
            ScalePartition sp;
            sp.k = js.at("k");
            sp.contract_threshold = js.at("threshold");
            sp.cap = js.at("cap");
            sp.node_of = js.at("node_of").get<std::vector<int>>();
            int nc = 0;
            for (int x : sp.node_of) nc = std::max(nc, x + 1);
            sp.node_members.assign(static_cast<size_t>(nc), {});
            for (size_t v = 0; v < sp.node_of.size(); ++v)
                sp.node_members[static_cast<size_t>(sp.node_of[v])].push_back(
                    static_cast<Vertex>(v));
            for (const auto& je : js.at("superedges")) {
                ScalePartition::SuperEdge se;
                se.x = je.at("x");
                se.y = je.at("y");
                se.w = je.at("w");
                se.witness = je.at("witness");
                sp.superedges.push_back(se);
            }
            rh.scale_graphs.push_back(std::move(sp));
        }
        for (const auto& jn : j.at("nodes")) {
            DistinctNode d;
            d.first_scale_pos = jn.at("first_scale_pos");
            d.center = jn.at("center");
            d.members = jn.at("members").get<std::vector<Vertex>>();
            d.t_parent = jn.at("t_parent").get<std::vector<Vertex>>();
            d.t_dist = jn.at("t_dist").get<std::vector<double>>();
            rh.registry.nodes.push_back(std::move(d));
        }
        for (const auto& sd : j.at("scale_distinct"))
            rh.registry.scale_distinct.push_back(sd.get<std::vector<int>>());
        for (const auto& js : j.at("stars")) {
            StarEdge se;
            se.center = js.at("c");
            se.leaf = js.at("l");
            se.w = js.at("w");
            se.node = js.at("node");
            rh.registry.stars.push_back(se);
        }
        rh.registry.vertex_nodes.assign(static_cast<size_t>(rh.n), {});
        for (size_t ni = 0; ni < rh.registry.nodes.size(); ++ni) {
            const auto& node = rh.registry.nodes[ni];
            for (size_t mi = 0; mi < node.members.size(); ++mi)
                rh.registry.vertex_nodes[static_cast<size_t>(node.members[mi])].push_back(
                    {static_cast<int>(ni), static_cast<int>(mi)});
        }
        for (const auto& jp : j.at("per_scale")) {
            ReducedScaleHopset ps;
            ps.k = jp.at("k");
            ps.sched = detail::schedule_from_json(jp.at("schedule"));
            for (const auto& jl : jp.at("layers"))
                ps.center_layers.push_back(detail::layer_from_json(jl));
            rh.per_scale.push_back(std::move(ps));
        }
        rh.cost.rounds = j.at("cost").at("rounds");
        rh.cost.work = j.at("cost").at("work");
        out.reduced = std::move(rh);
    } else {
        Hopset h;
        h.sched = detail::schedule_from_json(j.at("schedule"));
        h.weight_scale = j.at("weight_scale");
        h.paths_tracked = j.at("paths_tracked");
        for (const auto& jl : j.at("layers")) h.layers.push_back(detail::layer_from_json(jl));
        for (const auto& jp : j.at("phase_stats"))
            h.phase_stats.push_back(detail::phase_stats_from_json(jp));
        h.cost.rounds = j.at("cost").at("rounds");
        h.cost.work = j.at("cost").at("work");
        out.direct = std::move(h);
    }
    return out;
}

}  // namespace hopset
