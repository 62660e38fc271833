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

#ifndef HXZ_BUILDER_HPP
#define HXZ_BUILDER_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hxz/errors.hpp"
#include "hxz/hypergraph.hpp"

namespace hxz {

// Region labels 1..5 belong to the G_3^1 gadget. Chaining vertices of G_n^1
// (white inputs, final-layer links, Bell pairs) use kRegionLink; the |+>
// columns joining copies of G_n^1 use kRegionColumn.
inline constexpr int kRegionLink = 6;
inline constexpr int kRegionColumn = 7;

inline constexpr std::size_t kG31Vertices = 66;
inline constexpr std::size_t kG31PadPerWire = 4;

/// Wire indices, 1-based, i < j < k.
struct Triple {
    int i = 0, j = 0, k = 0;
    bool operator==(const Triple &) const = default;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
    }
    return r;
}

/// Distance of the sub-block hosting `tr` from the first one. The inner sum
/// over l runs over the gaps still available after fixing the first index;
/// terms where that count would go negative contribute nothing.
inline std::size_t triple_index(std::size_t n, Triple tr) {
    if (n < 4) {
        throw Error(ErrorKind::domain, "triple_index needs n >= 4");
    }
    const long long N = static_cast<long long>(n);
    const long long i = tr.i, j = tr.j, k = tr.k;
    if (!(1 <= i && i < j && j < k && k <= N)) {
        throw Error(ErrorKind::invalid_triple, "(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                                   std::to_string(k) + ") is not increasing within 1.." +
                                                   std::to_string(n));
    }
    if (i == 1 && j == 2 && k == 3) {
        throw Error(ErrorKind::excluded_triple, "(1,2,3) is wired inside the first sub-block");
    }
    long long first = 0;
    for (long long s = 0; s <= i - 1; s++) {
        for (long long l = 2; l <= N - 1; l++) {
            first += std::max(0LL, N - l - s + 1);
        }
    }
    long long second = 0;
    for (long long l = 1; l <= j - i; l++) {
        second += N - l - i + 1;
    }
    long long t = first + second + k - j - (N + 1) * (N - 2) / 2 - N + i - 1;
    return static_cast<std::size_t>(t);
}

/// d (2n + 63) C(n,3) - n.
inline std::uint64_t qubit_count(std::uint64_t n, std::uint64_t d) {
    if (n < 3 || d < 1) {
        throw Error(ErrorKind::domain, "qubit_count needs n >= 3 and d >= 1");
    }
    return d * (2 * n + 63) * binomial(n, 3) - n;
}

/// All 0-based triples in lexicographic order; entry s is hosted by sub-block s.
inline std::vector<std::array<int, 3>> lexicographic_triples(std::size_t n) {
    std::vector<std::array<int, 3>> out;
    int N = static_cast<int>(n);
    for (int a = 0; a < N; a++) {
        for (int b = a + 1; b < N; b++) {
            for (int c = b + 1; c < N; c++) {
                out.push_back({a, b, c});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Layout records. Every vertex id below refers to Block::h.

/// One wire's path through a G_3^1 gadget.
struct GadgetWire {
    Vertex input = kNoVertex;
    Vertex identity_hop = kNoVertex;
    std::array<Vertex, 2> hadamard_hops{kNoVertex, kNoVertex};
    Vertex ccz_short = kNoVertex;
    std::array<Vertex, 2> ccz_long{kNoVertex, kNoVertex};
    Vertex ccz = kNoVertex;
    Vertex merge = kNoVertex;
    std::vector<Vertex> tail;
    Vertex output = kNoVertex;

    bool operator==(const GadgetWire &) const = default;
};

/// One region-4 part. The two wires of `pair` each choose between an upper
/// hop (the upper hops share a CZ edge) and a lower hop; the `bypass` wire has
/// a single hop stored in `lower`.
struct CorrectionPart {
    std::array<int, 2> pair{0, 0};
    int bypass = 0;
    std::array<Vertex, 3> upper{kNoVertex, kNoVertex, kNoVertex};
    std::array<Vertex, 3> lower{kNoVertex, kNoVertex, kNoVertex};
    std::array<Vertex, 3> merge{kNoVertex, kNoVertex, kNoVertex};

    bool operator==(const CorrectionPart &) const = default;
};

struct GadgetLayout {
    Vertex offset = 0;
    std::array<GadgetWire, 3> wire;
    std::array<CorrectionPart, 3> part;

    bool operator==(const GadgetLayout &) const = default;
};

struct SubBlock {
    std::array<int, 3> triple{0, 1, 2};
    GadgetLayout gadget;

    bool operator==(const SubBlock &) const = default;
};

/// One copy of G_n^1.
struct LayerLayout {
    std::vector<SubBlock> sub;
    /// final_layer[g][w]: where wire w sits after group g.
    std::vector<std::vector<Vertex>> final_layer;
    /// bell[g][w] = {left, right} for wires skipping group g, else kNoVertex.
    std::vector<std::vector<std::array<Vertex, 2>>> bell;
    std::vector<Vertex> input, output;

    bool operator==(const LayerLayout &) const = default;
};

struct BlockLayout {
    std::vector<LayerLayout> layers;
    /// tail[w]: padding hops inserted in front of output port w.
    std::vector<std::vector<Vertex>> tail;

    bool operator==(const BlockLayout &) const = default;
};

struct Block {
    Hypergraph h;
    std::vector<Vertex> input_ports;
    std::vector<Vertex> output_ports;
    std::size_t n_wires = 0;
    std::map<int, std::vector<Vertex>> groups;
    std::map<int, std::vector<Vertex>> columns;
    BlockLayout layout;

    bool operator==(const Block &) const = default;
};

namespace detail {

template <typename F>
void for_each_vertex(GadgetLayout &g, F &&f) {
    for (auto &w : g.wire) {
        for (Vertex *v : {&w.input, &w.identity_hop, &w.hadamard_hops[0], &w.hadamard_hops[1], &w.ccz_short,
                          &w.ccz_long[0], &w.ccz_long[1], &w.ccz, &w.merge, &w.output}) {
            if (*v != kNoVertex) {
                f(*v);
            }
        }
        for (auto &v : w.tail) {
            f(v);
        }
    }
    for (auto &p : g.part) {
        for (auto *arr : {&p.upper, &p.lower, &p.merge}) {
            for (auto &v : *arr) {
                if (v != kNoVertex) {
                    f(v);
                }
            }
        }
    }
}

template <typename F>
void for_each_vertex(LayerLayout &l, F &&f) {
    auto g = [&](Vertex &v) {
        if (v != kNoVertex) {
            f(v);
        }
    };
    for (auto &s : l.sub) {
        for_each_vertex(s.gadget, f);
    }
    for (auto &row : l.final_layer) {
        for (auto &v : row) {
            g(v);
        }
    }
    for (auto &row : l.bell) {
        for (auto &pr : row) {
            g(pr[0]);
            g(pr[1]);
        }
    }
    for (auto &v : l.input) {
        g(v);
    }
    for (auto &v : l.output) {
        g(v);
    }
}

template <typename F>
void for_each_vertex(Block &b, F &&f) {
    for (auto &v : b.input_ports) {
        f(v);
    }
    for (auto &v : b.output_ports) {
        f(v);
    }
    for (auto &[k, vs] : b.groups) {
        for (auto &v : vs) {
            f(v);
        }
    }
    for (auto &[k, vs] : b.columns) {
        for (auto &v : vs) {
            f(v);
        }
    }
    for (auto &l : b.layout.layers) {
        for_each_vertex(l, f);
    }
    for (auto &t : b.layout.tail) {
        for (auto &v : t) {
            f(v);
        }
    }
}

/// Appends `src` to `dst`; returns the id offset of the copy.
inline Vertex append_graph(Hypergraph &dst, const Hypergraph &src) {
    Vertex off = static_cast<Vertex>(dst.n_vertices);
    for (Vertex v = 0; v < src.n_vertices; v++) {
        dst.add_vertex(src.meta_of(v));
    }
    for (const auto &e : src.edges) {
        Edge s;
        for (Vertex v : e) {
            s.push_back(v + off);
        }
        dst.edges.push_back(std::move(s));
    }
    return off;
}

/// Renumbers so that vertex v becomes new_id[v].
inline Block relabel(const Block &b, const std::vector<Vertex> &new_id) {
    Block out = b;
    Hypergraph h(b.h.n_vertices);
    h.meta.resize(b.h.n_vertices);
    for (Vertex v = 0; v < b.h.n_vertices; v++) {
        h.meta[new_id[v]] = b.h.meta_of(v);
    }
    for (const auto &e : b.h.edges) {
        Edge s;
        for (Vertex v : e) {
            s.push_back(new_id[v]);
        }
        h.add_edge(std::move(s));
    }
    out.h = std::move(h);
    for_each_vertex(out, [&](Vertex &v) { v = new_id[v]; });
    return out;
}

inline void set_port_roles(Block &b) {
    for (auto &m : b.h.meta) {
        m.role = Role::internal;
    }
    for (Vertex v : b.input_ports) {
        b.h.meta[v].role = Role::input;
    }
    for (Vertex v : b.output_ports) {
        b.h.meta[v].role = Role::output;
    }
}

/// G_3^1 before padding: 54 vertices.
inline Block raw_g31() {
    Block b;
    b.n_wires = 3;
    Hypergraph &h = b.h;
    auto add = [&](int region, int wire) { return h.add_vertex({region, Role::internal, wire}); };
    GadgetLayout g;
    for (int w = 0; w < 3; w++) {
        g.wire[w].input = add(1, w);
    }
    for (int w = 0; w < 3; w++) {
        auto &gw = g.wire[w];
        gw.identity_hop = add(2, w);
        gw.hadamard_hops = {add(2, w), add(2, w)};
        gw.ccz_short = add(2, w);
        gw.ccz_long = {add(2, w), add(2, w)};
        gw.ccz = add(2, w);
    }
    for (int w = 0; w < 3; w++) {
        g.wire[w].merge = add(3, w);
    }
    const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    for (int p = 0; p < 3; p++) {
        auto &part = g.part[p];
        part.pair = pairs[p];
        part.bypass = 3 - pairs[p][0] - pairs[p][1];
        for (int w : pairs[p]) {
            part.upper[w] = add(4, w);
            part.lower[w] = add(4, w);
            part.merge[w] = add(4, w);
        }
        part.lower[part.bypass] = add(4, part.bypass);
        part.merge[part.bypass] = add(4, part.bypass);
    }
    for (int w = 0; w < 3; w++) {
        g.wire[w].output = add(5, w);
    }

    for (int w = 0; w < 3; w++) {
        const auto &gw = g.wire[w];
        h.add_edge({gw.input, gw.identity_hop});
        h.add_edge({gw.identity_hop, gw.merge});
        h.add_edge({gw.input, gw.hadamard_hops[0]});
        h.add_edge({gw.hadamard_hops[0], gw.hadamard_hops[1]});
        h.add_edge({gw.hadamard_hops[1], gw.merge});
        h.add_edge({gw.input, gw.ccz_short});
        h.add_edge({gw.ccz_short, gw.ccz});
        h.add_edge({gw.input, gw.ccz_long[0]});
        h.add_edge({gw.ccz_long[0], gw.ccz_long[1]});
        h.add_edge({gw.ccz_long[1], gw.ccz});
        h.add_edge({gw.ccz, gw.merge});
    }
    h.add_edge({g.wire[0].ccz, g.wire[1].ccz, g.wire[2].ccz});
    std::array<Vertex, 3> at{g.wire[0].merge, g.wire[1].merge, g.wire[2].merge};
    for (const auto &part : g.part) {
        for (int w : part.pair) {
            h.add_edge({at[w], part.upper[w]});
            h.add_edge({part.upper[w], part.merge[w]});
            h.add_edge({at[w], part.lower[w]});
            h.add_edge({part.lower[w], part.merge[w]});
        }
        h.add_edge({part.upper[part.pair[0]], part.upper[part.pair[1]]});
        h.add_edge({at[part.bypass], part.lower[part.bypass]});
        h.add_edge({part.lower[part.bypass], part.merge[part.bypass]});
        for (int w = 0; w < 3; w++) {
            at[w] = part.merge[w];
        }
    }
    for (int w = 0; w < 3; w++) {
        h.add_edge({at[w], g.wire[w].output});
    }

    for (int w = 0; w < 3; w++) {
        b.input_ports.push_back(g.wire[w].input);
        b.output_ports.push_back(g.wire[w].output);
    }
    LayerLayout layer;
    layer.sub.push_back(SubBlock{{0, 1, 2}, g});
    layer.final_layer = {b.output_ports};
    layer.bell = {std::vector<std::array<Vertex, 2>>(3, {kNoVertex, kNoVertex})};
    layer.input = b.input_ports;
    layer.output = b.output_ports;
    b.layout.layers.push_back(std::move(layer));
    b.layout.tail.assign(3, {});
    set_port_roles(b);
    return b;
}

}  // namespace detail

/// Inserts `extra` teleportation hops in front of output port `wire`.
inline Block pad_wire(const Block &b, std::size_t wire, std::size_t extra) {
    if (extra % 2 != 0) {
        throw Error(ErrorKind::odd_extra, "padding must be even, got " + std::to_string(extra));
    }
    if (wire >= b.n_wires) {
        throw Error(ErrorKind::index_out_of_range, "wire " + std::to_string(wire) + " out of range");
    }
    Block out = b;
    if (extra == 0) {
        return out;
    }
    Vertex port = out.output_ports[wire];
    std::vector<std::size_t> touching;
    for (std::size_t i = 0; i < out.h.edges.size(); i++) {
        const auto &e = out.h.edges[i];
        if (std::find(e.begin(), e.end(), port) != e.end()) {
            touching.push_back(i);
        }
    }
    if (touching.size() != 1 || out.h.edges[touching[0]].size() != 2) {
        throw Error(ErrorKind::domain, "output port must hang off a single arity-2 edge");
    }
    const Edge &e = out.h.edges[touching[0]];
    Vertex pred = e[0] == port ? e[1] : e[0];
    out.h.edges.erase(out.h.edges.begin() + static_cast<std::ptrdiff_t>(touching[0]));
    VertexMeta m = out.h.meta_of(port);
    m.role = Role::internal;
    if (!m.wire) {
        m.wire = static_cast<int>(wire);
    }
    if (out.layout.tail.size() < out.n_wires) {
        out.layout.tail.resize(out.n_wires);
    }
    Vertex prev = pred;
    for (std::size_t i = 0; i < extra; i++) {
        Vertex y = out.h.add_vertex(m);
        out.h.add_edge({prev, y});
        out.layout.tail[wire].push_back(y);
        prev = y;
    }
    out.h.add_edge({prev, port});
    return out;
}

namespace detail {

struct G31Template {
    Block block;
    std::vector<int> colors;
};

/// Backtracking 3-coloring with all I/O ports pinned to color 0.
inline std::vector<int> color_g31(const Block &b) {
    const auto &h = b.h;
    auto inc = h.incidence();
    std::vector<int> col(h.n_vertices, -1);
    std::vector<bool> pinned(h.n_vertices, false);
    for (Vertex v : b.input_ports) {
        col[v] = 0, pinned[v] = true;
    }
    for (Vertex v : b.output_ports) {
        col[v] = 0, pinned[v] = true;
    }
    auto ok = [&](Vertex v, int c) {
        for (std::size_t ei : inc[v]) {
            for (Vertex u : h.edges[ei]) {
                if (u != v && col[u] == c) {
                    return false;
                }
            }
        }
        return true;
    };
    std::function<bool(Vertex)> go = [&](Vertex v) -> bool {
        if (v == h.n_vertices) {
            return true;
        }
        if (pinned[v]) {
            return ok(v, col[v]) && go(v + 1);
        }
        for (int c = 0; c < 3; c++) {
            if (ok(v, c)) {
                col[v] = c;
                if (go(v + 1)) {
                    return true;
                }
                col[v] = -1;
            }
        }
        return false;
    };
    if (!go(0)) {
        throw Error(ErrorKind::internal, "gadget admits no pinned 3-coloring");
    }
    return col;
}

inline G31Template make_g31_template() {
    Block b = raw_g31();
    for (std::size_t w = 0; w < 3; w++) {
        b = pad_wire(b, w, kG31PadPerWire);
    }
    auto &g = b.layout.layers[0].sub[0].gadget;
    for (int w = 0; w < 3; w++) {
        g.wire[w].tail = b.layout.tail[w];
        b.layout.tail[w].clear();
    }
    // Put each wire's region-5 chain next to its output port.
    std::vector<Vertex> order;
    for (int w = 0; w < 3; w++) {
        order.push_back(g.wire[w].input);
    }
    for (int w = 0; w < 3; w++) {
        const auto &gw = g.wire[w];
        for (Vertex v : {gw.identity_hop, gw.hadamard_hops[0], gw.hadamard_hops[1], gw.ccz_short, gw.ccz_long[0],
                         gw.ccz_long[1], gw.ccz}) {
            order.push_back(v);
        }
    }
    for (int w = 0; w < 3; w++) {
        order.push_back(g.wire[w].merge);
    }
    for (const auto &part : g.part) {
        for (int w : part.pair) {
            order.push_back(part.upper[w]);
            order.push_back(part.lower[w]);
            order.push_back(part.merge[w]);
        }
        order.push_back(part.lower[part.bypass]);
        order.push_back(part.merge[part.bypass]);
    }
    for (int w = 0; w < 3; w++) {
        for (Vertex v : g.wire[w].tail) {
            order.push_back(v);
        }
        order.push_back(g.wire[w].output);
    }
    if (order.size() != b.h.n_vertices) {
        throw Error(ErrorKind::internal, "gadget ordering does not cover the block");
    }
    std::vector<Vertex> new_id(order.size());
    for (std::size_t i = 0; i < order.size(); i++) {
        new_id[order[i]] = static_cast<Vertex>(i);
    }
    b = relabel(b, new_id);
    std::sort(b.h.edges.begin(), b.h.edges.end());
    b.groups[0] = {};
    for (Vertex v = 0; v < b.h.n_vertices; v++) {
        b.groups[0].push_back(v);
    }
    G31Template t;
    t.colors = color_g31(b);
    t.block = std::move(b);
    return t;
}

inline const G31Template &g31_template() {
    static const G31Template t = make_g31_template();
    return t;
}

/// Copies the gadget into `dst` for wires `triple`; ports become internal.
inline SubBlock embed_gadget(Block &dst, std::array<int, 3> triple) {
    const auto &t = g31_template().block;
    Vertex off = append_graph(dst.h, t.h);
    for (Vertex v = off; v < dst.h.n_vertices; v++) {
        auto &m = dst.h.meta[v];
        m.role = Role::internal;
        m.wire = triple[static_cast<std::size_t>(*m.wire)];
    }
    SubBlock s;
    s.triple = triple;
    s.gadget = t.layout.layers[0].sub[0].gadget;
    for_each_vertex(s.gadget, [&](Vertex &v) { v += off; });
    s.gadget.offset = off;
    return s;
}

}  // namespace detail

inline Block build_block_g31() {
    return detail::g31_template().block;
}

inline Block build_gn1(std::size_t n) {
    if (n < 3) {
        throw Error(ErrorKind::domain, "G_n^1 needs n >= 3");
    }
    if (n == 3) {
        return build_block_g31();
    }
    const auto triples = lexicographic_triples(n);
    const std::size_t m = triples.size();
    Block b;
    b.n_wires = n;
    Hypergraph &h = b.h;
    LayerLayout L;
    L.final_layer.assign(m, std::vector<Vertex>(n, kNoVertex));
    L.bell.assign(m, std::vector<std::array<Vertex, 2>>(n, {kNoVertex, kNoVertex}));
    L.input.assign(n, kNoVertex);
    auto link = [&](int wire) { return h.add_vertex({kRegionLink, Role::internal, wire}); };
    for (std::size_t g = 0; g < m; g++) {
        const auto &T = triples[g];
        std::size_t first = h.n_vertices;
        auto in_triple = [&](std::size_t w) { return std::find(T.begin(), T.end(), static_cast<int>(w)) != T.end(); };
        if (g == 0) {
            for (std::size_t w = 3; w < n; w++) {
                Vertex white = link(static_cast<int>(w));
                L.input[w] = white;
                L.final_layer[0][w] = white;
            }
        } else {
            for (std::size_t w = 0; w < n; w++) {
                if (in_triple(w)) {
                    continue;
                }
                Vertex left = link(static_cast<int>(w));
                Vertex right = link(static_cast<int>(w));
                h.add_edge({left, right});
                h.add_edge({L.final_layer[g - 1][w], left});
                L.bell[g][w] = {left, right};
                L.final_layer[g][w] = right;
            }
        }
        SubBlock s = detail::embed_gadget(b, T);
        for (int x = 0; x < 3; x++) {
            std::size_t w = static_cast<std::size_t>(T[x]);
            if (g == 0) {
                L.input[w] = s.gadget.wire[x].input;
            } else {
                h.add_edge({L.final_layer[g - 1][w], s.gadget.wire[x].input});
            }
            if (g + 1 < m) {
                Vertex p = link(T[x]);
                h.add_edge({s.gadget.wire[x].output, p});
                L.final_layer[g][w] = p;
            } else {
                L.final_layer[g][w] = s.gadget.wire[x].output;
            }
        }
        L.sub.push_back(std::move(s));
        auto &grp = b.groups[static_cast<int>(g)];
        for (std::size_t v = first; v < h.n_vertices; v++) {
            grp.push_back(static_cast<Vertex>(v));
        }
    }
    L.output = L.final_layer[m - 1];
    b.input_ports = L.input;
    b.output_ports = L.output;
    b.layout.layers.push_back(std::move(L));
    b.layout.tail.assign(n, {});
    detail::set_port_roles(b);
    if (h.n_vertices != qubit_count(n, 1)) {
        throw Error(ErrorKind::internal, "G_n^1 vertex count mismatch");
    }
    return b;
}

inline Block build_gnd(std::size_t n, std::size_t d) {
    if (n < 3 || d < 1) {
        throw Error(ErrorKind::domain, "G_n^d needs n >= 3 and d >= 1");
    }
    Block one = build_gn1(n);
    if (d == 1) {
        return one;
    }
    const int m = static_cast<int>(binomial(n, 3));
    Block b;
    b.n_wires = n;
    std::vector<Vertex> prev_out;
    for (std::size_t t = 0; t < d; t++) {
        if (t > 0) {
            auto &col = b.columns[static_cast<int>(t - 1)];
            for (std::size_t w = 0; w < n; w++) {
                col.push_back(b.h.add_vertex({kRegionColumn, Role::internal, static_cast<int>(w)}));
            }
        }
        Vertex off = detail::append_graph(b.h, one.h);
        LayerLayout L = one.layout.layers[0];
        detail::for_each_vertex(L, [&](Vertex &v) { v += off; });
        for (auto &s : L.sub) {
            s.gadget.offset += off;
        }
        for (const auto &[g, vs] : one.groups) {
            auto &grp = b.groups[static_cast<int>(t) * m + g];
            for (Vertex v : vs) {
                grp.push_back(v + off);
            }
        }
        if (t > 0) {
            const auto &col = b.columns[static_cast<int>(t - 1)];
            for (std::size_t w = 0; w < n; w++) {
                b.h.add_edge({prev_out[w], col[w]});
                b.h.add_edge({col[w], L.input[w]});
            }
        }
        prev_out = L.output;
        b.layout.layers.push_back(std::move(L));
    }
    b.input_ports = b.layout.layers.front().input;
    b.output_ports = b.layout.layers.back().output;
    b.layout.tail.assign(n, {});
    detail::set_port_roles(b);
    if (b.h.n_vertices != qubit_count(n, d)) {
        throw Error(ErrorKind::internal, "G_n^d vertex count mismatch");
    }
    return b;
}

/// Three colors: 0 ("red") on every gadget port, 2 on the |+> columns.
inline Coloring build_coloring(const Block &b) {
    if (b.layout.layers.empty()) {
        throw Error(ErrorKind::domain, "block carries no construction layout");
    }
    const auto &tmpl = detail::g31_template().colors;
    std::vector<int> col(b.h.n_vertices, -1);
    for (const auto &L : b.layout.layers) {
        for (std::size_t g = 0; g < L.sub.size(); g++) {
            const auto &s = L.sub[g];
            for (std::size_t i = 0; i < tmpl.size(); i++) {
                col[s.gadget.offset + i] = tmpl[i];
            }
            for (int w : s.triple) {
                Vertex f = L.final_layer[g][static_cast<std::size_t>(w)];
                if (f != s.gadget.wire[0].output && f != s.gadget.wire[1].output && f != s.gadget.wire[2].output) {
                    col[f] = 1;
                }
            }
        }
        for (const auto &row : L.bell) {
            for (const auto &pr : row) {
                if (pr[0] != kNoVertex) {
                    col[pr[0]] = 0;
                    col[pr[1]] = 1;
                }
            }
        }
        for (Vertex v : L.input) {
            if (col[v] < 0) {
                col[v] = 1;
            }
        }
    }
    for (const auto &[t, vs] : b.columns) {
        for (Vertex v : vs) {
            col[v] = 2;
        }
    }
    for (std::size_t w = 0; w < b.layout.tail.size(); w++) {
        const auto &tail = b.layout.tail[w];
        if (tail.empty()) {
            continue;
        }
        int prev = -1;
        for (const auto &e : b.h.edges) {
            if (e.size() == 2 && (e[0] == tail[0] || e[1] == tail[0])) {
                Vertex other = e[0] == tail[0] ? e[1] : e[0];
                if (tail.size() < 2 || other != tail[1]) {
                    prev = col[other];
                }
            }
        }
        int end = col[b.output_ports[w]];
        for (std::size_t i = 0; i < tail.size(); i++) {
            int c = 0;
            while (c == prev || (i + 1 == tail.size() && c == end)) {
                c++;
            }
            col[tail[i]] = c;
            prev = c;
        }
    }
    Coloring out{std::move(col), 3};
    if (!is_valid_coloring(b.h, out)) {
        throw Error(ErrorKind::internal, "constructed coloring is invalid");
    }
    return out;
}

}  // namespace hxz

#endif
