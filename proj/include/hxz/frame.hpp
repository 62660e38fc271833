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

#ifndef HXZ_FRAME_HPP
#define HXZ_FRAME_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hxz/errors.hpp"
#include "hxz/hypergraph.hpp"
#include "hxz/statevec.hpp"

namespace hxz {

/// physical = X^x Z^z H^h (C logical), wire by wire, with C the CzLedger.
struct PauliFrame {
    std::vector<std::uint8_t> x, z, h;

    PauliFrame() = default;
    explicit PauliFrame(std::size_t n) : x(n, 0), z(n, 0), h(n, 0) {
    }
    std::size_t size() const {
        return x.size();
    }
    bool operator==(const PauliFrame &) const = default;
};

/// Pending CZ corrections as a set of unordered wire pairs (parity).
class CzLedger {
   public:
    void toggle(int a, int b) {
        if (a == b) {
            throw Error(ErrorKind::internal, "CZ pair needs two distinct wires");
        }
        auto key = std::minmax(a, b);
        auto it = pairs_.find(key);
        if (it == pairs_.end()) {
            pairs_.insert(key);
        } else {
            pairs_.erase(it);
        }
    }
    bool contains(int a, int b) const {
        return pairs_.count(std::minmax(a, b)) != 0;
    }
    bool touches(int w) const {
        return std::any_of(pairs_.begin(), pairs_.end(), [&](const auto &p) { return p.first == w || p.second == w; });
    }
    bool empty() const {
        return pairs_.empty();
    }
    std::size_t size() const {
        return pairs_.size();
    }
    const std::set<std::pair<int, int>> &pairs() const {
        return pairs_;
    }
    bool operator==(const CzLedger &) const = default;

   private:
    std::set<std::pair<int, int>> pairs_;
};

struct FrameGate {
    enum class Kind : std::uint8_t { H, CZ, CCZ };
    Kind kind;
    std::array<int, 3> w{0, 0, 0};

    static FrameGate h(int a) {
        return {Kind::H, {a, 0, 0}};
    }
    static FrameGate cz(int a, int b) {
        return {Kind::CZ, {a, b, 0}};
    }
    static FrameGate ccz(int a, int b, int c) {
        return {Kind::CCZ, {a, b, c}};
    }
};

/// Pushes gate g through the byproducts: g P C = P' C' g for H and CCZ, and
/// CZ P C = P' C' for CZ (the gate lands in the ledger). The H rule needs the
/// wire to be free of pending CZs.
inline void propagate_byproduct(PauliFrame &f, CzLedger &ledger, const FrameGate &g) {
    switch (g.kind) {
        case FrameGate::Kind::H: {
            int a = g.w[0];
            if (ledger.touches(a)) {
                throw Error(ErrorKind::internal, "H on a wire with a pending CZ");
            }
            std::swap(f.x[static_cast<std::size_t>(a)], f.z[static_cast<std::size_t>(a)]);
            break;
        }
        case FrameGate::Kind::CZ: {
            auto a = static_cast<std::size_t>(g.w[0]), b = static_cast<std::size_t>(g.w[1]);
            f.z[b] ^= f.x[a];
            f.z[a] ^= f.x[b];
            ledger.toggle(g.w[0], g.w[1]);
            break;
        }
        case FrameGate::Kind::CCZ: {
            auto a = static_cast<std::size_t>(g.w[0]), b = static_cast<std::size_t>(g.w[1]),
                 c = static_cast<std::size_t>(g.w[2]);
            std::uint8_t xa = f.x[a], xb = f.x[b], xc = f.x[c];
            if (xa) {
                ledger.toggle(g.w[1], g.w[2]);
            }
            if (xb) {
                ledger.toggle(g.w[0], g.w[2]);
            }
            if (xc) {
                ledger.toggle(g.w[0], g.w[1]);
            }
            f.z[a] ^= xb & xc;
            f.z[b] ^= xa & xc;
            f.z[c] ^= xa & xb;
            break;
        }
    }
}

struct LogicalEvent {
    enum class Kind : std::uint8_t { H, CCZ };
    Kind kind;
    std::array<int, 3> wires{0, 0, 0};

    bool operator==(const LogicalEvent &) const = default;
};

/// Follows the logical qubits through a resource state as its vertices are
/// measured. Edges not yet touched by the logical picture stay in a residual
/// hypergraph; an edge whose vertices all carry logical wires becomes a gate
/// on the frame.
class FrameTracker {
   public:
    FrameTracker(const Hypergraph &h, std::span<const Vertex> inputs, std::span<const Vertex> outputs)
        : n_(h.n_vertices),
          incident_(h.n_vertices),
          wire_of_(h.n_vertices, -1),
          measured_(h.n_vertices, 0),
          carrier_(inputs.begin(), inputs.end()),
          outputs_(outputs.begin(), outputs.end()),
          frame_(inputs.size()) {
        for (const auto &e : h.edges) {
            toggle_edge(e);
        }
        for (std::size_t w = 0; w < carrier_.size(); w++) {
            wire_of_[carrier_[w]] = static_cast<int>(w);
        }
        for (Vertex v : carrier_) {
            absorb_ready(v);
        }
    }

    const PauliFrame &frame() const {
        return frame_;
    }
    const CzLedger &ledger() const {
        return ledger_;
    }
    const std::vector<LogicalEvent> &events() const {
        return events_;
    }
    int wire_of(Vertex v) const {
        return wire_of_[v];
    }
    Vertex carrier(int wire) const {
        return carrier_[static_cast<std::size_t>(wire)];
    }
    bool measured(Vertex v) const {
        return measured_[v] != 0;
    }
    std::size_t residual_edges() const {
        return edges_.size();
    }

    /// Returns the wire that moved (X) or -1 (Z).
    int record(Vertex v, Basis basis, int bit) {
        if (v >= n_ || measured_[v]) {
            throw Error(ErrorKind::internal, "vertex " + std::to_string(v) + " measured twice or out of range");
        }
        return basis == Basis::X ? hop(v, bit & 1) : remove(v, bit & 1);
    }

    /// Marks the H accumulated by an odd hop count as the logical gate.
    void relabel_hadamard(int wire) {
        auto w = static_cast<std::size_t>(wire);
        if (!frame_.h[w] || ledger_.touches(wire)) {
            throw Error(ErrorKind::internal, "wire " + std::to_string(wire) + " cannot take a logical H here");
        }
        frame_.h[w] = 0;
        events_.push_back({LogicalEvent::Kind::H, {wire, 0, 0}});
    }

    void finish() const {
        for (std::size_t w = 0; w < carrier_.size(); w++) {
            if (carrier_[w] != outputs_[w]) {
                throw Error(ErrorKind::internal, "wire " + std::to_string(w) + " did not reach its output port");
            }
        }
        if (!ledger_.empty()) {
            throw Error(ErrorKind::nonempty_ledger, std::to_string(ledger_.size()) + " CZ corrections pending");
        }
    }

   private:
    using Key = std::vector<Vertex>;

    void toggle_edge(const Key &e) {
        if (edges_.erase(e)) {
            for (Vertex v : e) {
                incident_[v].erase(e);
            }
        } else {
            edges_.insert(e);
            for (Vertex v : e) {
                incident_[v].insert(e);
            }
        }
    }

    bool all_carriers(const Key &e) const {
        return std::all_of(e.begin(), e.end(), [&](Vertex v) { return wire_of_[v] >= 0; });
    }

    void absorb(const Key &e) {
        std::array<int, 3> w{0, 0, 0};
        for (std::size_t i = 0; i < e.size(); i++) {
            w[i] = wire_of_[e[i]];
            if (e.size() > 1 && frame_.h[static_cast<std::size_t>(w[i])]) {
                throw Error(ErrorKind::internal, "entangling edge reached a Hadamard-rotated wire");
            }
        }
        if (e.size() == 1) {
            frame_.z[static_cast<std::size_t>(w[0])] ^= 1;
        } else if (e.size() == 2) {
            propagate_byproduct(frame_, ledger_, FrameGate::cz(w[0], w[1]));
        } else {
            propagate_byproduct(frame_, ledger_, FrameGate::ccz(w[0], w[1], w[2]));
            std::sort(w.begin(), w.end());
            events_.push_back({LogicalEvent::Kind::CCZ, w});
        }
        toggle_edge(e);
    }

    void absorb_ready(Vertex v) {
        std::vector<Key> ready;
        for (const auto &e : incident_[v]) {
            if (all_carriers(e)) {
                ready.push_back(e);
            }
        }
        for (const auto &e : ready) {
            absorb(e);
        }
    }

    int hop(Vertex v, int s) {
        int w = wire_of_[v];
        if (w < 0) {
            throw Error(ErrorKind::internal, "X measurement on vertex " + std::to_string(v) + " which carries no wire");
        }
        const auto &inc = incident_[v];
        if (inc.size() != 1 || inc.begin()->size() != 2) {
            throw Error(ErrorKind::internal, "vertex " + std::to_string(v) + " has " + std::to_string(inc.size()) +
                                                 " residual edges at its teleportation");
        }
        Key e = *inc.begin();
        Vertex next = e[0] == v ? e[1] : e[0];
        if (wire_of_[next] >= 0) {
            throw Error(ErrorKind::internal, "teleportation into a vertex that already carries a wire");
        }
        auto wi = static_cast<std::size_t>(w);
        std::uint8_t x = frame_.x[wi], z = frame_.z[wi];
        frame_.x[wi] = static_cast<std::uint8_t>(z ^ s);
        frame_.z[wi] = x;
        frame_.h[wi] ^= 1;
        toggle_edge(e);
        measured_[v] = 1;
        wire_of_[v] = -1;
        wire_of_[next] = w;
        carrier_[wi] = next;
        absorb_ready(next);
        return w;
    }

    int remove(Vertex v, int m) {
        if (wire_of_[v] >= 0) {
            throw Error(ErrorKind::internal, "Z measurement on carrier vertex " + std::to_string(v));
        }
        std::vector<Key> touching(incident_[v].begin(), incident_[v].end());
        std::vector<Key> rest;
        for (const auto &e : touching) {
            toggle_edge(e);
            if (m) {
                Key r;
                for (Vertex u : e) {
                    if (u != v) {
                        r.push_back(u);
                    }
                }
                if (!r.empty()) {
                    toggle_edge(r);
                    rest.push_back(std::move(r));
                }
            }
        }
        measured_[v] = 1;
        for (const auto &r : rest) {
            if (edges_.count(r) && all_carriers(r)) {
                absorb(r);
            }
        }
        return -1;
    }

    std::size_t n_;
    std::set<Key> edges_;
    std::vector<std::set<Key>> incident_;
    std::vector<int> wire_of_;
    std::vector<std::uint8_t> measured_;
    std::vector<Vertex> carrier_;
    std::vector<Vertex> outputs_;
    PauliFrame frame_;
    CzLedger ledger_;
    std::vector<LogicalEvent> events_;
};

/// Turns the physical output (qubit w = wire w) into the logical one:
/// X^x, then Z^z, then H^h.
inline void unwind(StateVector &s, const PauliFrame &f) {
    if (s.width() != f.size()) {
        throw Error(ErrorKind::dimension_mismatch, "frame and state disagree on the wire count");
    }
    for (std::size_t w = 0; w < f.size(); w++) {
        Handle q = s.active()[w];
        if (f.x[w]) {
            s.apply_1q(q, Gate1::X);
        }
        if (f.z[w]) {
            s.apply_1q(q, Gate1::Z);
        }
        if (f.h[w]) {
            s.apply_1q(q, Gate1::H);
        }
    }
}

}  // namespace hxz

#endif
