// Copyright 2026 The hxz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HXZ_HYPERGRAPH_HPP
#define HXZ_HYPERGRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hxz/errors.hpp"

namespace hxz {

using Vertex = std::uint32_t;
inline constexpr Vertex kNoVertex = ~Vertex{0};

enum class Role : std::uint8_t { internal, input, output };

inline const char *role_name(Role r) {
    switch (r) {
        case Role::input: return "input";
        case Role::output: return "output";
        default: return "internal";
    }
}

struct VertexMeta {
    int region = 0;
    Role role = Role::internal;
    std::optional<int> wire;

    bool operator==(const VertexMeta &) const = default;
};

/// Sorted vertex ids of one generalized-CZ gate.
using Edge = std::vector<Vertex>;

/// A hypergraph state description. Data members are public so that malformed
/// instances can be constructed and handed to validate().
struct Hypergraph {
    std::size_t n_vertices = 0;
    std::vector<Edge> edges;
    /// Either empty or one entry per vertex.
    std::vector<VertexMeta> meta;

    Hypergraph() = default;
    explicit Hypergraph(std::size_t n) : n_vertices(n) {
    }

    std::size_t size() const {
        return n_vertices;
    }

    Vertex add_vertex(VertexMeta m = {}) {
        if (meta.size() < n_vertices) {
            meta.resize(n_vertices);
        }
        meta.push_back(std::move(m));
        return static_cast<Vertex>(n_vertices++);
    }

    void add_edge(Edge e) {
        std::sort(e.begin(), e.end());
        edges.push_back(std::move(e));
    }
    void add_edge(std::initializer_list<Vertex> e) {
        add_edge(Edge(e));
    }

    /// Removes one edge equal to `e` (order-insensitive). Returns whether it existed.
    bool remove_edge(Edge e) {
        std::sort(e.begin(), e.end());
        auto it = std::find(edges.begin(), edges.end(), e);
        if (it == edges.end()) {
            return false;
        }
        edges.erase(it);
        return true;
    }

    bool has_edge(Edge e) const {
        std::sort(e.begin(), e.end());
        return std::find(edges.begin(), edges.end(), e) != edges.end();
    }

    const VertexMeta &meta_of(Vertex v) const {
        static const VertexMeta none{};
        return v < meta.size() ? meta[v] : none;
    }

    /// incidence[v] lists indices into `edges` of the edges containing v.
    std::vector<std::vector<std::size_t>> incidence() const {
        std::vector<std::vector<std::size_t>> out(n_vertices);
        for (std::size_t i = 0; i < edges.size(); i++) {
            for (Vertex v : edges[i]) {
                if (v < n_vertices) {
                    out[v].push_back(i);
                }
            }
        }
        return out;
    }

    std::size_t count_arity(std::size_t arity) const {
        return static_cast<std::size_t>(
            std::count_if(edges.begin(), edges.end(), [&](const Edge &e) { return e.size() == arity; }));
    }

    std::size_t max_arity() const {
        std::size_t m = 0;
        for (const auto &e : edges) {
            m = std::max(m, e.size());
        }
        return m;
    }

    bool operator==(const Hypergraph &) const = default;
};

enum class ViolationKind { arity_out_of_range, vertex_out_of_range, duplicate_edge, repeated_vertex_in_edge };

inline const char *violation_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::arity_out_of_range: return "arity-out-of-range";
        case ViolationKind::vertex_out_of_range: return "vertex-out-of-range";
        case ViolationKind::duplicate_edge: return "duplicate-edge";
        default: return "repeated-vertex-in-edge";
    }
}

struct Violation {
    ViolationKind kind;
    std::size_t edge_index;
};

/// Empty result means ok. Arity is counted over distinct vertices.
inline std::vector<Violation> validate(const Hypergraph &h) {
    std::vector<Violation> out;
    std::set<Edge> seen;
    for (std::size_t i = 0; i < h.edges.size(); i++) {
        Edge e = h.edges[i];
        std::sort(e.begin(), e.end());
        Edge distinct = e;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        if (distinct.size() != e.size()) {
            out.push_back({ViolationKind::repeated_vertex_in_edge, i});
        }
        if (distinct.empty() || distinct.size() > 3) {
            out.push_back({ViolationKind::arity_out_of_range, i});
        }
        if (std::any_of(e.begin(), e.end(), [&](Vertex v) { return v >= h.n_vertices; })) {
            out.push_back({ViolationKind::vertex_out_of_range, i});
        }
        if (!seen.insert(e).second) {
            out.push_back({ViolationKind::duplicate_edge, i});
        }
    }
    return out;
}

struct Coloring {
    std::vector<int> color_of;
    int k = 0;

    bool operator==(const Coloring &) const = default;
};

inline bool is_valid_coloring(const Hypergraph &h, const Coloring &c) {
    if (c.color_of.size() != h.n_vertices) {
        throw Error(ErrorKind::length_mismatch, "coloring covers " + std::to_string(c.color_of.size()) +
                                                    " vertices, hypergraph has " + std::to_string(h.n_vertices));
    }
    for (int col : c.color_of) {
        if (col < 0 || col >= c.k) {
            return false;
        }
    }
    for (const auto &e : h.edges) {
        for (std::size_t a = 0; a < e.size(); a++) {
            for (std::size_t b = a + 1; b < e.size(); b++) {
                if (c.color_of[e[a]] == c.color_of[e[b]]) {
                    return false;
                }
            }
        }
    }
    return true;
}

/// classes[i] is C_{i+1}, sorted.
inline std::vector<std::vector<Vertex>> color_classes(const Coloring &c) {
    std::vector<std::vector<Vertex>> out(static_cast<std::size_t>(std::max(c.k, 0)));
    for (std::size_t v = 0; v < c.color_of.size(); v++) {
        int col = c.color_of[v];
        if (col >= 0 && col < c.k) {
            out[static_cast<std::size_t>(col)].push_back(static_cast<Vertex>(v));
        }
    }
    return out;
}

/// First-fit coloring in vertex order; valid but not necessarily minimal.
inline Coloring greedy_coloring(const Hypergraph &h) {
    Coloring c{std::vector<int>(h.n_vertices, -1), 0};
    auto inc = h.incidence();
    for (std::size_t v = 0; v < h.n_vertices; v++) {
        std::vector<bool> taken(h.n_vertices + 1, false);
        for (std::size_t ei : inc[v]) {
            for (Vertex u : h.edges[ei]) {
                if (u != v && c.color_of[u] >= 0) {
                    taken[static_cast<std::size_t>(c.color_of[u])] = true;
                }
            }
        }
        int col = 0;
        while (taken[static_cast<std::size_t>(col)]) {
            col++;
        }
        c.color_of[v] = col;
        c.k = std::max(c.k, col + 1);
    }
    return c;
}

struct DecodedHypergraph {
    Hypergraph graph;
    std::optional<Coloring> coloring;
};

inline std::string encode(const Hypergraph &h, const Coloring *c = nullptr) {
    std::ostringstream out;
    out << "hypergraph n=" << h.n_vertices << "\n";
    for (const auto &e : h.edges) {
        if (e.size() < 2 || e.size() > 3) {
            throw Error(ErrorKind::domain, "text format holds edges of arity 2 or 3 only");
        }
        out << "e";
        for (Vertex v : e) {
            out << ' ' << v;
        }
        out << "\n";
    }
    for (std::size_t v = 0; v < h.meta.size(); v++) {
        const auto &m = h.meta[v];
        out << "meta " << v << " region=" << m.region << " role=" << role_name(m.role);
        if (m.wire) {
            out << " wire=" << *m.wire;
        }
        out << "\n";
    }
    if (c != nullptr) {
        if (c->color_of.size() != h.n_vertices) {
            throw Error(ErrorKind::length_mismatch, "coloring does not cover the hypergraph");
        }
        for (std::size_t v = 0; v < c->color_of.size(); v++) {
            out << "color " << v << ' ' << c->color_of[v] << "\n";
        }
    }
    return out.str();
}

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            i++;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            i++;
        }
        if (i > start) {
            out.push_back({line.substr(start, i - start), start + 1});
        }
    }
    return out;
}

inline bool parse_uint(std::string_view s, std::uint64_t &out) {
    if (s.empty() || s.size() > 18) {
        return false;
    }
    std::uint64_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') {
            return false;
        }
        v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    out = v;
    return true;
}

inline bool parse_int(std::string_view s, int &out) {
    bool neg = !s.empty() && s[0] == '-';
    std::uint64_t v;
    if (!parse_uint(neg ? s.substr(1) : s, v) || v > 0x7fffffff) {
        return false;
    }
    out = neg ? -static_cast<int>(v) : static_cast<int>(v);
    return true;
}

}  // namespace detail

inline DecodedHypergraph decode(std::string_view text) {
    DecodedHypergraph out;
    bool have_header = false;
    std::vector<bool> has_meta;
    std::vector<int> colors;
    std::size_t n_colored = 0;
    std::set<Edge> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto fail = [&](std::size_t col, const std::string &msg) -> ParseError { return ParseError(line_no, col, msg); };
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        line_no++;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto tok = detail::tokenize(line);
        if (tok.empty()) {
            continue;
        }
        auto vertex_arg = [&](const detail::Token &t) {
            std::uint64_t v;
            if (!detail::parse_uint(t.text, v)) {
                throw fail(t.column, "expected a vertex id, got '" + std::string(t.text) + "'");
            }
            if (v >= out.graph.n_vertices) {
                throw fail(t.column, "vertex " + std::to_string(v) + " out of range");
            }
            return static_cast<Vertex>(v);
        };
        if (!have_header) {
            std::uint64_t n;
            if (tok.size() != 2 || tok[0].text != "hypergraph" || tok[1].text.substr(0, 2) != "n=" ||
                !detail::parse_uint(tok[1].text.substr(2), n)) {
                throw fail(tok[0].column, "expected header 'hypergraph n=<N>'");
            }
            out.graph.n_vertices = n;
            has_meta.assign(n, false);
            colors.assign(n, -1);
            have_header = true;
            continue;
        }
        std::string_view kw = tok[0].text;
        if (kw == "e") {
            if (tok.size() < 3 || tok.size() > 4) {
                throw fail(tok[0].column, "edge arity " + std::to_string(tok.size() - 1) + " not in {2,3}");
            }
            Edge e;
            for (std::size_t i = 1; i < tok.size(); i++) {
                e.push_back(vertex_arg(tok[i]));
            }
            std::sort(e.begin(), e.end());
            if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
                throw fail(tok[0].column, "repeated vertex in edge");
            }
            if (!seen.insert(e).second) {
                throw fail(tok[0].column, "duplicate edge");
            }
            out.graph.edges.push_back(std::move(e));
        } else if (kw == "meta") {
            if (tok.size() < 2) {
                throw fail(tok[0].column, "meta needs a vertex id");
            }
            Vertex v = vertex_arg(tok[1]);
            VertexMeta m;
            for (std::size_t i = 2; i < tok.size(); i++) {
                auto eq = tok[i].text.find('=');
                if (eq == std::string_view::npos) {
                    throw fail(tok[i].column, "expected key=value");
                }
                auto key = tok[i].text.substr(0, eq);
                auto val = tok[i].text.substr(eq + 1);
                if (key == "region") {
                    if (!detail::parse_int(val, m.region)) {
                        throw fail(tok[i].column, "bad region");
                    }
                } else if (key == "role") {
                    if (val == "input") {
                        m.role = Role::input;
                    } else if (val == "output") {
                        m.role = Role::output;
                    } else if (val == "internal") {
                        m.role = Role::internal;
                    } else {
                        throw fail(tok[i].column, "bad role '" + std::string(val) + "'");
                    }
                } else if (key == "wire") {
                    int w;
                    if (!detail::parse_int(val, w)) {
                        throw fail(tok[i].column, "bad wire");
                    }
                    m.wire = w;
                } else {
                    throw fail(tok[i].column, "unknown meta key '" + std::string(key) + "'");
                }
            }
            if (out.graph.meta.empty()) {
                out.graph.meta.resize(out.graph.n_vertices);
            }
            if (has_meta[v]) {
                throw fail(tok[1].column, "meta given twice");
            }
            has_meta[v] = true;
            out.graph.meta[v] = m;
        } else if (kw == "color") {
            if (tok.size() != 3) {
                throw fail(tok[0].column, "expected 'color <v> <c>'");
            }
            Vertex v = vertex_arg(tok[1]);
            std::uint64_t col;
            if (!detail::parse_uint(tok[2].text, col) || col > 1000000) {
                throw fail(tok[2].column, "bad color");
            }
            if (colors[v] >= 0) {
                throw fail(tok[1].column, "color given twice");
            }
            colors[v] = static_cast<int>(col);
            n_colored++;
        } else {
            throw fail(tok[0].column, "unknown keyword '" + std::string(kw) + "'");
        }
    }
    if (!have_header) {
        throw ParseError(line_no, 1, "missing header");
    }
    if (n_colored > 0) {
        if (n_colored != out.graph.n_vertices) {
            throw ParseError(line_no, 1, "coloring is partial");
        }
        Coloring c;
        c.color_of = colors;
        c.k = *std::max_element(colors.begin(), colors.end()) + 1;
        out.coloring = std::move(c);
    }
    return out;
}

}  // namespace hxz

#endif
