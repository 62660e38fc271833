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

#ifndef HXZ_COMPILER_HPP
#define HXZ_COMPILER_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hxz/builder.hpp"
#include "hxz/circuit.hpp"
#include "hxz/errors.hpp"
#include "hxz/frame.hpp"
#include "hxz/statevec.hpp"

namespace hxz {

struct BasisRule {
    enum class Kind : std::uint8_t { ConstX, ConstZ, Branch };
    Kind kind = Kind::ConstX;
    /// Branch: wire pair whose pending-CZ parity decides.
    std::array<int, 2> pair{0, 0};
    /// Branch: measure X iff the parity equals this value.
    bool x_when_set = true;
    std::vector<Vertex> deps;

    static BasisRule x() {
        return {};
    }
    static BasisRule z() {
        BasisRule r;
        r.kind = Kind::ConstZ;
        return r;
    }
    bool operator==(const BasisRule &) const = default;
};

struct PlanStep {
    Vertex vertex = kNoVertex;
    BasisRule rule;
    /// After this X measurement the odd hop count of its wire is the logical H.
    bool logical_h = false;

    bool operator==(const PlanStep &) const = default;
};

/// Bases of all steps are fixed on entry to the stage; Z-resolved steps then
/// run before X-resolved ones, each group in listed order.
struct PlanStage {
    std::vector<PlanStep> steps;

    bool operator==(const PlanStage &) const = default;
};

struct GadgetChoice {
    enum class Path : std::uint8_t { identity, hadamard, ccz };
    std::size_t layer = 0;
    std::size_t sub = 0;
    int wire = 0;
    Path path = Path::identity;
    /// Physical route: the two-hop branch (identity hop or short CCZ route) or the three-hop one.
    bool short_route = true;

    bool operator==(const GadgetChoice &) const = default;
};

struct MeasurementPlan {
    std::size_t n_wires = 0;
    std::vector<Vertex> inputs;
    std::vector<Vertex> outputs;
    std::vector<PlanStage> stages;
    std::vector<GadgetChoice> choices;

    std::size_t step_count() const {
        std::size_t n = 0;
        for (const auto &s : stages) {
            n += s.steps.size();
        }
        return n;
    }
    bool operator==(const MeasurementPlan &) const = default;
};

/// Concrete basis for `step`. `outcomes[v]` is -1 until v is measured.
inline Basis resolve(const PlanStep &step, std::span<const std::int8_t> outcomes, const CzLedger &ledger) {
    switch (step.rule.kind) {
        case BasisRule::Kind::ConstX: return Basis::X;
        case BasisRule::Kind::ConstZ: return Basis::Z;
        case BasisRule::Kind::Branch: break;
    }
    for (Vertex d : step.rule.deps) {
        if (d >= outcomes.size() || outcomes[d] < 0) {
            throw Error(ErrorKind::missing_dependency,
                        "step on vertex " + std::to_string(step.vertex) + " waits for vertex " + std::to_string(d));
        }
    }
    bool set = ledger.contains(step.rule.pair[0], step.rule.pair[1]);
    return set == step.rule.x_when_set ? Basis::X : Basis::Z;
}

/// Empty when every non-output vertex is measured exactly once and no output is.
inline std::vector<std::string> plan_coverage_errors(const Block &b, const MeasurementPlan &p) {
    std::vector<std::string> errs;
    std::vector<int> seen(b.h.n_vertices, 0);
    for (const auto &st : p.stages) {
        for (const auto &s : st.steps) {
            if (s.vertex >= b.h.n_vertices) {
                errs.push_back("step vertex " + std::to_string(s.vertex) + " out of range");
                continue;
            }
            seen[s.vertex]++;
        }
    }
    std::vector<bool> is_out(b.h.n_vertices, false);
    for (Vertex v : b.output_ports) {
        is_out[v] = true;
    }
    for (Vertex v = 0; v < b.h.n_vertices; v++) {
        int want = is_out[v] ? 0 : 1;
        if (seen[v] != want) {
            errs.push_back("vertex " + std::to_string(v) + " measured " + std::to_string(seen[v]) + " times");
        }
    }
    return errs;
}

namespace detail {

class PlanWriter {
   public:
    PlanWriter(const Block &b, MeasurementPlan &p) : b_(b), p_(p), cur_(b.input_ports), par_(b.n_wires, 0) {
    }

    int parity(int w) const {
        return par_[static_cast<std::size_t>(w)];
    }
    Vertex at(int w) const {
        return cur_[static_cast<std::size_t>(w)];
    }

    void del(Vertex v) {
        p_.stages.push_back({{PlanStep{v, BasisRule::z(), false}}});
    }

    /// Teleports wire w one step onto `next`; into an output port this walks its padding first.
    void hop(int w, Vertex next, bool logical_h = false) {
        auto wi = static_cast<std::size_t>(w);
        if (next == b_.output_ports[wi] && wi < b_.layout.tail.size()) {
            for (Vertex y : b_.layout.tail[wi]) {
                step(w, y, false);
            }
        }
        step(w, next, logical_h);
    }

    /// Region-4 part with a run-time choice between the CZ path and the plain one.
    void branch_part(const CorrectionPart &part, const std::array<int, 3> &triple, std::vector<Vertex> deps) {
        int j = part.pair[0], k = part.pair[1];
        int wj = triple[static_cast<std::size_t>(j)], wk = triple[static_cast<std::size_t>(k)];
        BasisRule upper;
        upper.kind = BasisRule::Kind::Branch;
        upper.pair = {std::min(wj, wk), std::max(wj, wk)};
        upper.x_when_set = true;
        upper.deps = deps;
        BasisRule lower = upper;
        lower.x_when_set = false;
        PlanStage st;
        st.steps.push_back({at(wj), BasisRule::x(), false});
        st.steps.push_back({at(wk), BasisRule::x(), false});
        st.steps.push_back({part.upper[static_cast<std::size_t>(j)], upper, false});
        st.steps.push_back({part.upper[static_cast<std::size_t>(k)], upper, false});
        st.steps.push_back({part.lower[static_cast<std::size_t>(j)], lower, false});
        st.steps.push_back({part.lower[static_cast<std::size_t>(k)], lower, false});
        p_.stages.push_back(std::move(st));
        cur_[static_cast<std::size_t>(wj)] = part.merge[static_cast<std::size_t>(j)];
        cur_[static_cast<std::size_t>(wk)] = part.merge[static_cast<std::size_t>(k)];
    }

   private:
    void step(int w, Vertex next, bool logical_h) {
        auto wi = static_cast<std::size_t>(w);
        p_.stages.push_back({{PlanStep{cur_[wi], BasisRule::x(), logical_h}}});
        cur_[wi] = next;
        // the relabel consumes the rotation
        par_[wi] = logical_h ? 0 : par_[wi] ^ 1;
    }

    const Block &b_;
    MeasurementPlan &p_;
    std::vector<Vertex> cur_;
    std::vector<int> par_;
};

/// Sub-block index hosting a CCZ on sorted 0-based wires q.
inline std::size_t ccz_host(std::size_t n, const std::array<int, 3> &q) {
    if (q[0] == 0 && q[1] == 1 && q[2] == 2) {
        return 0;
    }
    return triple_index(n, Triple{q[0] + 1, q[1] + 1, q[2] + 1});
}

inline void traverse_gadget(PlanWriter &pw, MeasurementPlan &plan, std::size_t layer, std::size_t sub_index,
                            const SubBlock &sub, bool ccz, const std::array<bool, 3> &hadamard) {
    const auto &G = sub.gadget;
    const auto &T = sub.triple;
    if (ccz) {
        for (int x = 0; x < 3; x++) {
            const auto &gw = G.wire[static_cast<std::size_t>(x)];
            int w = T[static_cast<std::size_t>(x)];
            pw.del(gw.identity_hop);
            pw.del(gw.hadamard_hops[0]);
            pw.del(gw.hadamard_hops[1]);
            bool short_route = pw.parity(w) == 0;
            if (short_route) {
                pw.del(gw.ccz_long[0]);
                pw.del(gw.ccz_long[1]);
                pw.hop(w, gw.ccz_short);
            } else {
                pw.del(gw.ccz_short);
                pw.hop(w, gw.ccz_long[0]);
                pw.hop(w, gw.ccz_long[1]);
            }
            pw.hop(w, gw.ccz);
            plan.choices.push_back({layer, sub_index, w, GadgetChoice::Path::ccz, short_route});
        }
        for (int x = 0; x < 3; x++) {
            pw.hop(T[static_cast<std::size_t>(x)], G.wire[static_cast<std::size_t>(x)].merge);
        }
    } else {
        for (int x = 0; x < 3; x++) {
            const auto &gw = G.wire[static_cast<std::size_t>(x)];
            int w = T[static_cast<std::size_t>(x)];
            bool h = hadamard[static_cast<std::size_t>(x)];
            pw.del(gw.ccz_short);
            pw.del(gw.ccz_long[0]);
            pw.del(gw.ccz_long[1]);
            pw.del(gw.ccz);
            // Two hops keep the entry parity, three flip it; the merge must end at parity h.
            bool short_route = pw.parity(w) == static_cast<int>(h);
            if (short_route) {
                pw.del(gw.hadamard_hops[0]);
                pw.del(gw.hadamard_hops[1]);
                pw.hop(w, gw.identity_hop);
            } else {
                pw.del(gw.identity_hop);
                pw.hop(w, gw.hadamard_hops[0]);
                pw.hop(w, gw.hadamard_hops[1]);
            }
            pw.hop(w, gw.merge, h);
            plan.choices.push_back(
                {layer, sub_index, w, h ? GadgetChoice::Path::hadamard : GadgetChoice::Path::identity, short_route});
        }
    }
    std::vector<Vertex> deps{G.wire[0].ccz, G.wire[1].ccz, G.wire[2].ccz};
    for (const auto &part : G.part) {
        int j = part.pair[0], k = part.pair[1];
        int wj = T[static_cast<std::size_t>(j)], wk = T[static_cast<std::size_t>(k)];
        if (ccz) {
            pw.branch_part(part, T, deps);
        } else {
            pw.del(part.upper[static_cast<std::size_t>(j)]);
            pw.del(part.upper[static_cast<std::size_t>(k)]);
            pw.hop(wj, part.lower[static_cast<std::size_t>(j)]);
            pw.hop(wj, part.merge[static_cast<std::size_t>(j)]);
            pw.hop(wk, part.lower[static_cast<std::size_t>(k)]);
            pw.hop(wk, part.merge[static_cast<std::size_t>(k)]);
        }
        int l = part.bypass;
        int wl = T[static_cast<std::size_t>(l)];
        pw.hop(wl, part.lower[static_cast<std::size_t>(l)]);
        pw.hop(wl, part.merge[static_cast<std::size_t>(l)]);
    }
    for (int x = 0; x < 3; x++) {
        const auto &gw = G.wire[static_cast<std::size_t>(x)];
        int w = T[static_cast<std::size_t>(x)];
        for (Vertex y : gw.tail) {
            pw.hop(w, y);
        }
        pw.hop(w, gw.output);
    }
}

}  // namespace detail

/// Measurement plan realizing `c` on `b` (a block from the builder). Layers
/// beyond the circuit's depth run as identity.
inline MeasurementPlan compile(const Circuit &c, const Block &b) {
    const auto &layers = b.layout.layers;
    if (layers.empty()) {
        throw Error(ErrorKind::plan_mismatch, "block carries no construction layout");
    }
    if (c.n_qubits != b.n_wires) {
        throw Error(ErrorKind::plan_mismatch, "circuit has " + std::to_string(c.n_qubits) + " qubits, block " +
                                                  std::to_string(b.n_wires) + " wires");
    }
    if (c.depth() > layers.size()) {
        throw Error(ErrorKind::plan_mismatch, "circuit depth " + std::to_string(c.depth()) + " exceeds block depth " +
                                                  std::to_string(layers.size()));
    }
    check_circuit(c);
    const std::size_t n = b.n_wires;
    MeasurementPlan plan;
    plan.n_wires = n;
    plan.inputs = b.input_ports;
    plan.outputs = b.output_ports;
    detail::PlanWriter pw(b, plan);
    for (std::size_t li = 0; li < layers.size(); li++) {
        const LayerLayout &L = layers[li];
        const std::size_t m = L.sub.size();
        if (li > 0) {
            const auto &col = b.columns.at(static_cast<int>(li - 1));
            for (std::size_t w = 0; w < n; w++) {
                pw.hop(static_cast<int>(w), col[w]);
                pw.hop(static_cast<int>(w), L.input[w]);
            }
        }
        std::vector<bool> has_ccz(m, false);
        std::vector<std::array<bool, 3>> hadamard(m, {false, false, false});
        if (li < c.depth()) {
            for (const auto &g : c.layers[li]) {
                if (g.kind == Gate::Kind::CCZ) {
                    std::size_t s = detail::ccz_host(n, g.q);
                    if (s >= m || L.sub[s].triple != g.q) {
                        throw Error(ErrorKind::internal, "triple routing disagrees with the block layout");
                    }
                    has_ccz[s] = true;
                }
            }
            for (const auto &g : c.layers[li]) {
                if (g.kind != Gate::Kind::H) {
                    continue;
                }
                bool placed = false;
                for (std::size_t s = 0; s < m && !placed; s++) {
                    if (has_ccz[s]) {
                        continue;
                    }
                    for (std::size_t x = 0; x < 3; x++) {
                        if (L.sub[s].triple[x] == g.q[0]) {
                            hadamard[s][x] = true;
                            placed = true;
                        }
                    }
                }
                if (!placed) {
                    throw Error(ErrorKind::unroutable_gate, "no free gadget for H " + std::to_string(g.q[0]) +
                                                                " in layer " + std::to_string(li));
                }
            }
        }
        for (std::size_t g = 0; g < m; g++) {
            const SubBlock &sub = L.sub[g];
            auto in_triple = [&](std::size_t w) {
                return std::find(sub.triple.begin(), sub.triple.end(), static_cast<int>(w)) != sub.triple.end();
            };
            if (g > 0) {
                for (std::size_t w = 0; w < n; w++) {
                    if (!in_triple(w)) {
                        pw.hop(static_cast<int>(w), L.bell[g][w][0]);
                        pw.hop(static_cast<int>(w), L.bell[g][w][1]);
                    }
                }
                for (std::size_t x = 0; x < 3; x++) {
                    pw.hop(sub.triple[x], sub.gadget.wire[x].input);
                }
            }
            detail::traverse_gadget(pw, plan, li, g, sub, has_ccz[g], hadamard[g]);
            if (g + 1 < m) {
                for (int w : sub.triple) {
                    pw.hop(w, L.final_layer[g][static_cast<std::size_t>(w)]);
                }
            }
        }
    }
    for (std::size_t w = 0; w < n; w++) {
        if (pw.at(static_cast<int>(w)) != b.output_ports[w]) {
            throw Error(ErrorKind::internal, "wire " + std::to_string(w) + " stopped short of its output");
        }
    }
    if (auto errs = plan_coverage_errors(b, plan); !errs.empty()) {
        throw Error(ErrorKind::internal, "plan coverage: " + errs.front());
    }
    return plan;
}

/// Audit listing: one line per step.
inline std::string export_plan(const MeasurementPlan &p) {
    std::ostringstream out;
    out << "plan wires=" << p.n_wires << " stages=" << p.stages.size() << " steps=" << p.step_count() << "\n";
    out << "inputs";
    for (Vertex v : p.inputs) {
        out << ' ' << v;
    }
    out << "\noutputs";
    for (Vertex v : p.outputs) {
        out << ' ' << v;
    }
    out << "\n";
    for (std::size_t si = 0; si < p.stages.size(); si++) {
        for (const auto &s : p.stages[si].steps) {
            out << "step stage=" << si << " vertex=" << s.vertex << " rule=";
            switch (s.rule.kind) {
                case BasisRule::Kind::ConstX: out << "X"; break;
                case BasisRule::Kind::ConstZ: out << "Z"; break;
                case BasisRule::Kind::Branch:
                    out << "branch pair=" << s.rule.pair[0] << ',' << s.rule.pair[1]
                        << " x_when=" << (s.rule.x_when_set ? "set" : "clear");
                    break;
            }
            out << " deps=";
            for (std::size_t i = 0; i < s.rule.deps.size(); i++) {
                out << (i ? "," : "") << s.rule.deps[i];
            }
            if (s.logical_h) {
                out << " logical=H";
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace hxz

#endif
