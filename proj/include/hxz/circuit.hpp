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

#ifndef HXZ_CIRCUIT_HPP
#define HXZ_CIRCUIT_HPP

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hxz/errors.hpp"
#include "hxz/hypergraph.hpp"
#include "hxz/rng.hpp"

namespace hxz {

struct Gate {
    enum class Kind : std::uint8_t { H, CCZ };
    Kind kind = Kind::H;
    std::array<int, 3> q{0, 0, 0};

    std::size_t arity() const {
        return kind == Kind::H ? 1 : 3;
    }
    static Gate h(int a) {
        return Gate{Kind::H, {a, 0, 0}};
    }
    /// Qubits are stored sorted.
    static Gate ccz(int a, int b, int c) {
        std::array<int, 3> q{a, b, c};
        std::sort(q.begin(), q.end());
        return Gate{Kind::CCZ, q};
    }
    bool operator==(const Gate &) const = default;
};

using Layer = std::vector<Gate>;

struct Circuit {
    std::size_t n_qubits = 0;
    std::vector<Layer> layers;

    std::size_t depth() const {
        return layers.size();
    }
    bool operator==(const Circuit &) const = default;
};

/// Throws overlapping-supports or index-out-of-range.
inline void check_circuit(const Circuit &c) {
    for (std::size_t li = 0; li < c.layers.size(); li++) {
        std::set<int> used;
        for (const auto &g : c.layers[li]) {
            for (std::size_t a = 0; a < g.arity(); a++) {
                int q = g.q[a];
                if (q < 0 || static_cast<std::size_t>(q) >= c.n_qubits) {
                    throw Error(ErrorKind::index_out_of_range,
                                "qubit " + std::to_string(q) + " in layer " + std::to_string(li));
                }
                if (!used.insert(q).second) {
                    throw Error(ErrorKind::overlapping_supports,
                                "qubit " + std::to_string(q) + " used twice in layer " + std::to_string(li));
                }
            }
        }
    }
}

/// One layer per line, gates separated by ';'. A line holding only ';' is an
/// empty layer; blank and comment-only lines are skipped. Without `n_qubits`
/// the width is one more than the largest index used.
inline Circuit parse_circuit(std::string_view text, std::optional<std::size_t> n_qubits = std::nullopt) {
    Circuit c;
    int max_q = -1;
    std::size_t line_no = 0;
    std::size_t pos = 0;
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
        if (detail::tokenize(line).empty()) {
            continue;
        }
        Layer layer;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t semi = line.find(';', start);
            if (semi == std::string_view::npos) {
                semi = line.size();
            }
            std::string_view piece = line.substr(start, semi - start);
            auto tok = detail::tokenize(piece);
            for (auto &t : tok) {
                t.column += start;
            }
            start = semi + 1;
            if (tok.empty()) {
                continue;
            }
            std::vector<int> qs;
            for (std::size_t i = 1; i < tok.size(); i++) {
                std::uint64_t v;
                if (!detail::parse_uint(tok[i].text, v) || v > 1000000) {
                    throw ParseError(line_no, tok[i].column, "expected qubit index, got '" + std::string(tok[i].text) + "'");
                }
                qs.push_back(static_cast<int>(v));
                max_q = std::max(max_q, static_cast<int>(v));
            }
            if (tok[0].text == "H") {
                if (qs.size() != 1) {
                    throw ParseError(line_no, tok[0].column, "H takes one qubit");
                }
                layer.push_back(Gate::h(qs[0]));
            } else if (tok[0].text == "CCZ") {
                if (qs.size() != 3) {
                    throw ParseError(line_no, tok[0].column, "CCZ takes three qubits");
                }
                if (qs[0] == qs[1] || qs[0] == qs[2] || qs[1] == qs[2]) {
                    throw Error(ErrorKind::overlapping_supports, "CCZ with repeated qubit on line " + std::to_string(line_no));
                }
                layer.push_back(Gate::ccz(qs[0], qs[1], qs[2]));
            } else {
                throw ParseError(line_no, tok[0].column, "unknown gate '" + std::string(tok[0].text) + "'");
            }
        }
        c.layers.push_back(std::move(layer));
    }
    c.n_qubits = n_qubits ? *n_qubits : static_cast<std::size_t>(max_q + 1);
    check_circuit(c);
    return c;
}

inline std::string format_circuit(const Circuit &c) {
    std::ostringstream out;
    for (const auto &layer : c.layers) {
        if (layer.empty()) {
            out << ";\n";
            continue;
        }
        for (std::size_t i = 0; i < layer.size(); i++) {
            const auto &g = layer[i];
            if (i) {
                out << "; ";
            }
            if (g.kind == Gate::Kind::H) {
                out << "H " << g.q[0];
            } else {
                out << "CCZ " << g.q[0] << ' ' << g.q[1] << ' ' << g.q[2];
            }
        }
        out << "\n";
    }
    return out.str();
}

/// Random disjoint-support layers: each wire is drawn into a CCZ, an H, or idles.
inline Circuit random_circuit(std::size_t n, std::size_t depth, Rng &rng) {
    Circuit c;
    c.n_qubits = n;
    for (std::size_t d = 0; d < depth; d++) {
        std::vector<int> wires(n);
        for (std::size_t w = 0; w < n; w++) {
            wires[w] = static_cast<int>(w);
        }
        rng.shuffle(wires);
        Layer layer;
        std::size_t i = 0;
        while (i < n) {
            std::uint64_t r = rng.below(3);
            if (r == 0 && i + 3 <= n) {
                layer.push_back(Gate::ccz(wires[i], wires[i + 1], wires[i + 2]));
                i += 3;
            } else if (r == 1) {
                layer.push_back(Gate::h(wires[i]));
                i++;
            } else {
                i++;
            }
        }
        c.layers.push_back(std::move(layer));
    }
    return c;
}

/// The nine depth-one selections on three wires: H^a (x) H^b (x) H^c, then CCZ.
inline std::vector<Circuit> single_layer_patterns() {
    std::vector<Circuit> out;
    for (int mask = 0; mask < 8; mask++) {
        Circuit c;
        c.n_qubits = 3;
        Layer layer;
        for (int w = 0; w < 3; w++) {
            if (mask >> w & 1) {
                layer.push_back(Gate::h(w));
            }
        }
        c.layers.push_back(layer);
        out.push_back(c);
    }
    Circuit c;
    c.n_qubits = 3;
    c.layers.push_back({Gate::ccz(0, 1, 2)});
    out.push_back(c);
    return out;
}

}  // namespace hxz

#endif
