#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hopset/graph.hpp"

namespace hopset {

enum class GraphFormat { dimacs, csv };

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool parse_int(std::string_view tok, long long& out) {
    tok = trim(tok);
    if (tok.empty()) return false;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && p == tok.data() + tok.size();
}

inline bool parse_double(std::string_view tok, double& out) {
    tok = trim(tok);
    if (tok.empty()) return false;
    // from_chars for doubles is available in libstdc++ >= 11
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && p == tok.data() + tok.size();
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace detail

/// DIMACS shortest-path format: optional "c ..." comment lines, one
/// "p sp <n> <m>" header, then "a <u> <v> <w>" arc lines with 1-based ids.
/// Arcs are interpreted as undirected edges; both orientations of the same
/// pair collapse to the lightest.
inline Graph parse_dimacs(std::string_view text) {
    int n = -1;
    std::vector<Edge> edges;
    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = detail::trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        if (line[0] == 'p') {
            auto toks = detail::split(line, ' ');
            std::erase_if(toks, [](std::string_view t) { return detail::trim(t).empty(); });
            long long nn = 0, mm = 0;
            if (toks.size() != 4 || detail::trim(toks[1]) != "sp" ||
                !detail::parse_int(toks[2], nn) || !detail::parse_int(toks[3], mm))
                throw ParseError(lineno, "malformed problem line, expected 'p sp <n> <m>'");
            if (nn < 1) throw ParseError(lineno, "vertex count must be >= 1");
            n = static_cast<int>(nn);
        } else if (line[0] == 'a') {
            if (n < 0) throw ParseError(lineno, "arc line before problem line");
            auto toks = detail::split(line, ' ');
            std::erase_if(toks, [](std::string_view t) { return detail::trim(t).empty(); });
            long long u = 0, v = 0;
            double w = 0.0;
            if (toks.size() != 4 || !detail::parse_int(toks[1], u) ||
                !detail::parse_int(toks[2], v) || !detail::parse_double(toks[3], w))
                throw ParseError(lineno, "malformed arc line, expected 'a <u> <v> <w>'");
            if (u < 1 || u > n || v < 1 || v > n)
                throw ParseError(lineno, "arc endpoint out of range [1,n]");
            if (!(w > 0.0))
                throw ParseError(lineno, "arc weight must be positive");
            edges.push_back({static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1), w});
        } else {
            throw ParseError(lineno, "unrecognized line type '" + std::string(1, line[0]) + "'");
        }
        if (end == text.size()) break;
    }
    if (n < 0) throw ParseError(lineno, "missing problem line");
    return Graph(n, std::move(edges));
}

/// CSV edge list: one "u,v,w" line per edge, 0-based ids. An optional leading
/// "# n=<count>" directive pins the vertex count (otherwise max id + 1).
/// Lines starting with '#' and a literal "u,v,w" header are skipped.
inline Graph parse_csv(std::string_view text) {
    std::vector<Edge> edges;
    long long n_directive = -1;
    long long max_id = -1;
    int lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = detail::trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++lineno;
        if (!line.empty() && line[0] == '#') {
            std::string_view rest = detail::trim(line.substr(1));
            if (rest.rfind("n=", 0) == 0) {
                if (!detail::parse_int(rest.substr(2), n_directive) || n_directive < 1)
                    throw ParseError(lineno, "bad n= directive");
            }
            if (end == text.size()) break;
            continue;
        }
        if (line.empty() || line == "u,v,w") {
            if (end == text.size()) break;
            continue;
        }
        auto toks = detail::split(line, ',');
        long long u = 0, v = 0;
        double w = 0.0;
        if (toks.size() != 3 || !detail::parse_int(toks[0], u) || !detail::parse_int(toks[1], v) ||
            !detail::parse_double(toks[2], w))
            throw ParseError(lineno, "malformed edge line, expected 'u,v,w'");
        if (u < 0 || v < 0) throw ParseError(lineno, "vertex ids must be non-negative");
        if (!(w > 0.0)) throw ParseError(lineno, "edge weight must be positive");
        max_id = std::max({max_id, u, v});
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
        if (end == text.size()) break;
    }
    long long n = n_directive >= 0 ? n_directive : max_id + 1;
    if (n < 1) throw ParseError(lineno, "empty edge list and no n= directive");
    if (max_id >= n) throw ParseError(lineno, "vertex id exceeds declared n");
    return Graph(static_cast<int>(n), std::move(edges));
}

inline Graph load_graph(std::string_view text, GraphFormat fmt) {
    return fmt == GraphFormat::dimacs ? parse_dimacs(text) : parse_csv(text);
}

inline std::string format_weight(double w) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    return buf;
}

inline std::string write_csv(const Graph& g) {
    std::ostringstream os;
    os << "# n=" << g.n() << "\n";
    for (const Edge& e : g.edges()) os << e.u << "," << e.v << "," << format_weight(e.w) << "\n";
    return os.str();
}

inline std::string write_dimacs(const Graph& g) {
    std::ostringstream os;
    os << "p sp " << g.n() << " " << g.edge_count() << "\n";
    for (const Edge& e : g.edges())
        os << "a " << (e.u + 1) << " " << (e.v + 1) << " " << format_weight(e.w) << "\n";
    return os.str();
}

/// FNV-1a over the canonical edge list; used to pair hopset artifacts with
/// the graph they were built from.
inline std::uint64_t graph_checksum(const Graph& g) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(g.n()));
    mix(static_cast<std::uint64_t>(g.edge_count()));
    for (const Edge& e : g.edges()) {
        mix(static_cast<std::uint64_t>(e.u));
        mix(static_cast<std::uint64_t>(e.v));
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(e.w));
        std::memcpy(&bits, &e.w, sizeof(bits));
        mix(bits);
    }
    return h;
}

}  // namespace hopset
