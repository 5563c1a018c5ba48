// Command-line surface for the hopset toolkit: synthetic graph generation,
// hopset construction (direct, path-reporting, reduced), distance queries,
// tree extraction, oracle validation and benchmarking.
//
// Exit codes: 0 success, 1 internal assertion, 2 configuration error,
// 3 artifact/graph mismatch.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "hopset/hopset.hpp"

namespace {

using namespace hopset;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMismatch = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
}

Graph load_input(const std::string& path, const std::string& format) {
    const std::string text = read_file(path);
    if (format == "dimacs") return parse_dimacs(text);
    if (format == "csv") return parse_csv(text);
    throw std::invalid_argument("unknown graph format: " + format);
}

struct CommonOpts {
    std::string input;
    std::string format = "csv";
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--input", c.input, "graph file")->required();
    cmd->add_option("--format", c.format, "graph format: dimacs or csv")
        ->check(CLI::IsMember({"dimacs", "csv"}));
    cmd->add_option("--threads", c.threads, "worker threads for per-source batches")
        ->envname("HOPSET_THREADS")
        ->check(CLI::Range(1, 256));
}

LoadedArtifact load_checked_artifact(const std::string& path, const Graph& g) {
    LoadedArtifact art = load_artifact(read_file(path));
    if (art.graph_checksum != graph_checksum(g))
        throw ArtifactError("artifact was built from a different graph (checksum mismatch)");
    return art;
}

HopsetIndex index_of(const Graph& g, const LoadedArtifact& art) {
    if (art.reduced) return HopsetIndex::of(g, *art.reduced);
    return HopsetIndex::of(g, *art.direct);
}

std::string fmt(double v) { return format_weight(v); }

// ---------------------------------------------------------------- gen ----

struct GenOpts {
    std::string family = "er";
    int n = 64;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    double avg_degree = 6.0;
    double decades = 2.0;
    double radius = 0.25;
    double wscale = 1.0;
    int max_exp = 20;
    int blobs = 4;
    int blob_size = 8;
    double bridge = 1.0e8;
};

int run_gen(const GenOpts& o) {
    Graph g(1, {});
    if (o.family == "er") {
        g = gen::erdos_renyi(o.n, o.avg_degree, o.decades, o.seed);
    } else if (o.family == "geometric") {
        g = gen::geometric(o.n, o.radius, o.wscale, o.seed);
    } else if (o.family == "power-path") {
        g = gen::power_weight_ring(o.n, o.max_exp, false, o.seed);
    } else if (o.family == "power-cycle") {
        g = gen::power_weight_ring(o.n, o.max_exp, true, o.seed);
    } else if (o.family == "blobs") {
        g = gen::blob_chain(o.blobs, o.blob_size, o.bridge, o.seed);
    } else {
        throw std::invalid_argument("unknown family: " + o.family);
    }
    const std::string text = o.format == "dimacs" ? write_dimacs(g) : write_csv(g);
    if (o.out.empty())
        std::cout << text;
    else
        write_file(o.out, text);
    std::cerr << "generated " << o.family << " graph: n=" << g.n() << " m=" << g.edge_count()
              << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- build ----

struct BuildCmdOpts {
    CommonOpts common;
    double epsilon = 0.5;
    int kappa = 3;
    double rho = 0.49;
    std::string mode = "direct";
    std::string out;
    std::string report;
    double lambda_override = 0.0;  // 0: measure from the graph
    std::uint64_t path_cap = 50'000'000;
};

int run_build(const BuildCmdOpts& o) {
    const Graph g = load_input(o.common.input, o.common.format);
    const auto t0 = std::chrono::steady_clock::now();
    std::string artifact;
    ojson report;
    report["command"] = "build";
    report["mode"] = o.mode;
    report["n"] = g.n();
    report["m"] = g.edge_count();
    report["epsilon"] = o.epsilon;
    report["kappa"] = o.kappa;
    report["rho"] = o.rho;

    if (o.mode == "reduced") {
        ReducedOptions ropt;
        ropt.track_paths = true;
        ropt.path_vertex_cap = o.path_cap;
        ReducedHopset rh = build_reduced_hopset(g, o.epsilon, o.kappa, o.rho, ropt);
        artifact = serialize_reduced(g, rh);
        report["aspect"] = rh.aspect;
        report["beta"] = rh.beta;
        report["beta_hops_query"] = rh.beta_hops_query;
        report["relevant_scales"] = rh.scales;
        report["stars"] = rh.registry.stars.size();
        report["hop_edges"] = rh.hop_edge_count();
        report["H_size"] = rh.edge_count();
        const double cap = std::pow(static_cast<double>(g.n()), 1.0 + 1.0 / o.kappa) *
                           std::max(1.0, std::log2(static_cast<double>(std::max(g.n(), 2))));
        report["size_constant"] = static_cast<double>(rh.edge_count()) / cap;
        report["star_bound_n_log_n"] =
            static_cast<double>(g.n()) * std::log2(static_cast<double>(std::max(g.n(), 2)));
        report["rounds"] = rh.cost.rounds;
        report["work"] = rh.cost.work;
    } else {
        hopset::BuildOptions bopt;
        bopt.track_paths = o.mode == "path-reporting";
        bopt.path_vertex_cap = o.path_cap;
        std::optional<double> aspect;
        if (o.lambda_override > 0) aspect = o.lambda_override;
        Hopset h = build_hopset(g, o.epsilon, o.kappa, o.rho, bopt, aspect);
        artifact = serialize_hopset(g, h, o.mode);
        report["aspect"] = h.sched.aspect;
        report["lambda"] = h.sched.lambda;
        report["k0"] = h.sched.k0;
        report["ell"] = h.sched.ell;
        report["beta"] = h.sched.beta;
        report["vacuous"] = h.sched.vacuous;
        report["H_size"] = h.edge_count();
        ojson per_scale = ojson::array();
        for (const auto& l : h.layers)
            per_scale.push_back({{"scale", l.scale}, {"edges", l.edges.size()}});
        report["per_scale"] = std::move(per_scale);
        const double bound = std::ceil(std::log2(std::max(h.sched.aspect, 2.0))) *
                             std::pow(static_cast<double>(g.n()), 1.0 + 1.0 / o.kappa);
        report["size_bound"] = bound;
        report["size_ok"] = static_cast<double>(h.edge_count()) <= bound;
        report["rounds"] = h.cost.rounds;
        report["work"] = h.cost.work;
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(t1 - t0).count();

    if (!o.out.empty()) write_file(o.out, artifact);
    if (!o.report.empty()) write_file(o.report, report.dump(1) + "\n");
    std::cout << report.dump(1) << "\n";
    std::cerr << "build wall time: " << wall << " s\n";
    return kExitOk;
}

// -------------------------------------------------------------- query ----

struct QueryOpts {
    CommonOpts common;
    std::string hopset;
    std::vector<int> sources;
    std::string out;
};

int run_query(const QueryOpts& o) {
    const Graph g = load_input(o.common.input, o.common.format);
    LoadedArtifact art = load_checked_artifact(o.hopset, g);
    HopsetIndex idx = index_of(g, art);
    std::vector<Vertex> sources(o.sources.begin(), o.sources.end());
    for (Vertex s : sources)
        if (s < 0 || s >= g.n()) throw std::invalid_argument("source out of range");
    auto rows = mssd(idx, sources, o.common.threads);
    std::ostringstream out;
    out << "# source\tvertex\tdistance\thops\n";
    for (size_t i = 0; i < rows.size(); ++i)
        for (Vertex v = 0; v < g.n(); ++v) {
            const auto& dv = rows[i];
            out << sources[i] << "\t" << v << "\t"
                << (dv.reached(v) ? fmt(dv.dist[static_cast<size_t>(v)]) : "inf") << "\t"
                << dv.hops[static_cast<size_t>(v)] << "\n";
        }
    if (o.out.empty())
        std::cout << out.str();
    else
        write_file(o.out, out.str());
    return kExitOk;
}

// ---------------------------------------------------------------- spt ----

struct SptOpts {
    CommonOpts common;
    std::string hopset;
    int source = 0;
    std::string out;
};

int run_spt(const SptOpts& o) {
    const Graph g = load_input(o.common.input, o.common.format);
    LoadedArtifact art = load_checked_artifact(o.hopset, g);
    if (o.source < 0 || o.source >= g.n()) throw std::invalid_argument("source out of range");
    SptResult r = art.reduced ? extract_spt_reduced(g, *art.reduced, o.source)
                              : extract_spt_direct(g, *art.direct, o.source);
    std::ostringstream out;
    out << "# spt source=" << o.source << " rounds=" << r.cost.rounds << " work=" << r.cost.work
        << "\n";
    out << "# vertex\tparent\tdistance\n";
    for (Vertex v = 0; v < g.n(); ++v) {
        const Vertex p = r.tree.parent[static_cast<size_t>(v)];
        out << v << "\t" << p << "\t"
            << (r.tree.est[static_cast<size_t>(v)] < kInf ? fmt(r.tree.est[static_cast<size_t>(v)])
                                                          : "inf")
            << "\n";
    }
    if (o.out.empty())
        std::cout << out.str();
    else
        write_file(o.out, out.str());
    return kExitOk;
}

// ----------------------------------------------------------- validate ----

struct ValidateOpts {
    CommonOpts common;
    std::string hopset;
    std::string level = "sampled";
    long long pairs = 10000;
    int all_pairs_ceiling = 1024;
    std::uint64_t seed = 1;
    std::string out;
    std::string spt_file;
};

int run_validate(const ValidateOpts& o) {
    const Graph g = load_input(o.common.input, o.common.format);
    LoadedArtifact art = load_checked_artifact(o.hopset, g);
    HopsetIndex idx = index_of(g, art);
    if (o.level == "all" && g.n() > o.all_pairs_ceiling)
        throw std::invalid_argument("all-pairs validation refused for n > " +
                                    std::to_string(o.all_pairs_ceiling));

    WorkGraph plain(g);
    std::vector<Vertex> sources;
    if (o.level == "all") {
        for (Vertex s = 0; s < g.n(); ++s) sources.push_back(s);
    } else if (o.level == "sampled") {
        std::mt19937_64 rng(o.seed);
        const long long per_source = std::max<long long>(1, g.n() - 1);
        const long long want = (o.pairs + per_source - 1) / per_source;
        for (long long i = 0; i < want; ++i)
            sources.push_back(static_cast<Vertex>(rng() % static_cast<std::uint64_t>(g.n())));
    }

    double max_stretch = 1.0;
    long long checked = 0;
    long long lower_violations = 0, upper_violations = 0;
    std::vector<long long> histogram(12, 0);  // buckets of eps/10 up to eps, then overflow
    const double eps = idx.eps;
    for (Vertex s : sources) {
        auto exact = dijkstra(plain, s);
        auto approx = sssd(idx, s);
        for (Vertex v = 0; v < g.n(); ++v) {
            if (v == s || !exact.reached(v)) continue;
            ++checked;
            const double de = exact.dist[static_cast<size_t>(v)];
            const double da = approx.dist[static_cast<size_t>(v)];
            if (!(da < kInf) || da < de * (1.0 - 1e-9)) {
                ++lower_violations;
                continue;
            }
            const double stretch = da / de;
            max_stretch = std::max(max_stretch, stretch);
            if (stretch > (1.0 + eps) * (1.0 + 1e-9)) ++upper_violations;
            int bucket = static_cast<int>(std::floor((stretch - 1.0) / (eps / 10.0)));
            bucket = std::clamp(bucket, 0, 11);
            ++histogram[static_cast<size_t>(bucket)];
        }
    }

    ojson rep;
    rep["command"] = "validate";
    rep["level"] = o.level;
    rep["checked_pairs"] = checked;
    rep["epsilon"] = eps;
    rep["max_stretch"] = max_stretch;
    rep["lower_violations"] = lower_violations;
    rep["upper_violations"] = upper_violations;
    rep["stretch_histogram_eps_tenths"] = histogram;

    if (!o.spt_file.empty()) {
        // audit a tree table: edges in E, parent-consistent, within stretch
        std::istringstream in(read_file(o.spt_file));
        std::string line;
        Vertex tree_source = -1;
        std::vector<Vertex> parent(static_cast<size_t>(g.n()), -1);
        std::vector<double> dist(static_cast<size_t>(g.n()), kInf);
        while (std::getline(in, line)) {
            if (line.rfind("# spt source=", 0) == 0)
                tree_source = std::stoi(line.substr(13));
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            long long v, p;
            std::string d;
            ls >> v >> p >> d;
            parent[static_cast<size_t>(v)] = static_cast<Vertex>(p);
            dist[static_cast<size_t>(v)] = d == "inf" ? kInf : std::stod(d);
        }
        if (tree_source < 0) throw std::invalid_argument("tree file lacks a source header");
        auto exact = dijkstra(plain, tree_source);
        OriginClassifier cls(g, nullptr);
        long long edge_violations = 0, consistency_violations = 0, stretch_violations = 0;
        for (Vertex v = 0; v < g.n(); ++v) {
            if (v == tree_source || parent[static_cast<size_t>(v)] == -1) continue;
            const double gw = cls.graph_weight(parent[static_cast<size_t>(v)], v);
            if (gw == kInf) {
                ++edge_violations;
                continue;
            }
            const double expect = dist[static_cast<size_t>(parent[static_cast<size_t>(v)])] + gw;
            if (std::abs(dist[static_cast<size_t>(v)] - expect) >
                1e-9 * std::max(1.0, std::abs(expect)))
                ++consistency_violations;
            if (dist[static_cast<size_t>(v)] >
                exact.dist[static_cast<size_t>(v)] * (1.0 + eps) * (1.0 + 1e-9))
                ++stretch_violations;
        }
        rep["tree"] = {{"source", tree_source},
                       {"edge_violations", edge_violations},
                       {"consistency_violations", consistency_violations},
                       {"stretch_violations", stretch_violations}};
        if (edge_violations || consistency_violations || stretch_violations) {
            std::cout << rep.dump(1) << "\n";
            std::cerr << "tree audit failed\n";
            return kExitInternal;
        }
    }

    if (!o.out.empty()) write_file(o.out, rep.dump(1) + "\n");
    std::cout << rep.dump(1) << "\n";
    if (lower_violations || upper_violations) {
        std::cerr << "stretch bound violated\n";
        return kExitInternal;
    }
    return kExitOk;
}

// -------------------------------------------------------------- bench ----

struct BenchOpts {
    CommonOpts common;
    std::string hopset;
    int sources = 5;
    std::uint64_t seed = 1;
    std::string out;
};

int run_bench(const BenchOpts& o) {
    const Graph g = load_input(o.common.input, o.common.format);
    LoadedArtifact art = load_checked_artifact(o.hopset, g);
    HopsetIndex idx = index_of(g, art);
    WorkGraph plain(g);
    std::mt19937_64 rng(o.seed);
    std::vector<Vertex> sources;
    for (int i = 0; i < o.sources; ++i)
        sources.push_back(static_cast<Vertex>(rng() % static_cast<std::uint64_t>(g.n())));

    std::ostringstream csv;
    csv << "method,source,time,relaxations\n";
    char buf[64];
    auto emit = [&](const char* method, Vertex s, double secs, std::uint64_t relax) {
        std::snprintf(buf, sizeof(buf), "%.6f", secs);
        csv << method << "," << s << "," << buf << "," << relax << "\n";
    };
    for (Vertex s : sources) {
        {
            const auto t0 = std::chrono::steady_clock::now();
            BellmanFordStats st;
            auto dv = sssd(idx, s, &st);
            const auto t1 = std::chrono::steady_clock::now();
            emit("hopset", s, std::chrono::duration<double>(t1 - t0).count(), st.relaxations);
        }
        {
            const auto t0 = std::chrono::steady_clock::now();
            std::uint64_t relax = 0;
            auto dv = dijkstra(plain, s, &relax);
            const auto t1 = std::chrono::steady_clock::now();
            emit("dijkstra", s, std::chrono::duration<double>(t1 - t0).count(), relax);
        }
        {
            const auto t0 = std::chrono::steady_clock::now();
            BellmanFordStats st;
            std::vector<Vertex> src{s};
            auto dv = bounded_bellman_ford(plain, src, idx.beta, std::nullopt, &st);
            const auto t1 = std::chrono::steady_clock::now();
            emit("bellman-ford", s, std::chrono::duration<double>(t1 - t0).count(),
                 st.relaxations);
        }
    }
    if (o.out.empty())
        std::cout << csv.str();
    else
        write_file(o.out, csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic hopset toolkit: approximate shortest distances and trees"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value configuration file; use a [subcommand] section header");

    GenOpts gen_opts;
    auto* cgen = app.add_subcommand("gen", "generate a seeded synthetic graph");
    cgen->configurable();
    cgen->fallthrough();
    cgen->add_option("--family", gen_opts.family,
                     "er | geometric | power-path | power-cycle | blobs");
    cgen->add_option("--n", gen_opts.n)->check(CLI::Range(1, 10'000'000));
    cgen->add_option("--seed", gen_opts.seed);
    cgen->add_option("--out", gen_opts.out);
    cgen->add_option("--format", gen_opts.format)->check(CLI::IsMember({"dimacs", "csv"}));
    cgen->add_option("--avg-degree", gen_opts.avg_degree);
    cgen->add_option("--decades", gen_opts.decades, "weight span in orders of magnitude");
    cgen->add_option("--radius", gen_opts.radius);
    cgen->add_option("--wscale", gen_opts.wscale);
    cgen->add_option("--max-exp", gen_opts.max_exp);
    cgen->add_option("--blobs", gen_opts.blobs);
    cgen->add_option("--blob-size", gen_opts.blob_size);
    cgen->add_option("--bridge", gen_opts.bridge);

    BuildCmdOpts build_opts;
    auto* cbuild = app.add_subcommand("build", "construct a hopset and serialize it");
    cbuild->configurable();
    cbuild->fallthrough();
    add_common(cbuild, build_opts.common);
    cbuild->add_option("--epsilon", build_opts.epsilon, "stretch target in (0,1)")->required();
    cbuild->add_option("--kappa", build_opts.kappa, "sparsity exponent, integer >= 2");
    cbuild->add_option("--rho", build_opts.rho, "work exponent in (0, 1/2)");
    cbuild->add_option("--mode", build_opts.mode)
        ->check(CLI::IsMember({"direct", "path-reporting", "reduced"}));
    cbuild->add_option("--out", build_opts.out, "artifact file");
    cbuild->add_option("--report", build_opts.report, "metrics report file");
    cbuild->add_option("--lambda", build_opts.lambda_override,
                       "aspect-ratio override (skip the all-pairs measurement)");
    cbuild->add_option("--path-cap", build_opts.path_cap,
                       "stored memory-path vertex budget; builds fail loudly beyond it");

    QueryOpts query_opts;
    auto* cquery = app.add_subcommand("query", "approximate shortest distances");
    cquery->configurable();
    cquery->fallthrough();
    add_common(cquery, query_opts.common);
    cquery->add_option("--hopset", query_opts.hopset)->required();
    cquery->add_option("--source", query_opts.sources, "query source (repeatable)")->required();
    cquery->add_option("--out", query_opts.out);

    SptOpts spt_opts;
    auto* cspt = app.add_subcommand("spt", "extract an approximate shortest-path tree");
    cspt->configurable();
    cspt->fallthrough();
    add_common(cspt, spt_opts.common);
    cspt->add_option("--hopset", spt_opts.hopset)->required();
    cspt->add_option("--source", spt_opts.source)->required();
    cspt->add_option("--out", spt_opts.out);

    ValidateOpts val_opts;
    auto* cval = app.add_subcommand("validate", "stretch audit against the exact oracle");
    cval->configurable();
    cval->fallthrough();
    add_common(cval, val_opts.common);
    cval->add_option("--hopset", val_opts.hopset)->required();
    cval->add_option("--validate", val_opts.level)
        ->check(CLI::IsMember({"none", "sampled", "all"}));
    cval->add_option("--pairs", val_opts.pairs, "pair budget for sampled validation");
    cval->add_option("--all-pairs-ceiling", val_opts.all_pairs_ceiling);
    cval->add_option("--seed", val_opts.seed);
    cval->add_option("--out", val_opts.out, "report file");
    cval->add_option("--spt", val_opts.spt_file, "tree table to audit");

    BenchOpts bench_opts;
    auto* cbench = app.add_subcommand("bench", "compare query methods");
    cbench->configurable();
    cbench->fallthrough();
    add_common(cbench, bench_opts.common);
    cbench->add_option("--hopset", bench_opts.hopset)->required();
    cbench->add_option("--sources", bench_opts.sources)->check(CLI::Range(1, 100000));
    cbench->add_option("--seed", bench_opts.seed);
    cbench->add_option("--out", bench_opts.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*cgen) return run_gen(gen_opts);
        if (*cbuild) return run_build(build_opts);
        if (*cquery) return run_query(query_opts);
        if (*cspt) return run_spt(spt_opts);
        if (*cval) return run_validate(val_opts);
        if (*cbench) return run_bench(bench_opts);
    } catch (const ArtifactError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMismatch;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitConfig;
}
