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

#ifndef HXZ_ENGINE_HPP
#define HXZ_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hxz/builder.hpp"
#include "hxz/circuit.hpp"
#include "hxz/compiler.hpp"
#include "hxz/errors.hpp"
#include "hxz/frame.hpp"
#include "hxz/parallel.hpp"
#include "hxz/rng.hpp"
#include "hxz/statevec.hpp"

namespace hxz {

struct Instruction {
    enum class Op : std::uint8_t { Activate, Entangle, Measure };
    Op op;
    /// Vertex, edge index into Block::h.edges, or stage index.
    std::uint32_t index;

    bool operator==(const Instruction &) const = default;
};

struct InstructionTape {
    std::vector<Instruction> ops;
    std::size_t peak_width = 0;

    bool operator==(const InstructionTape &) const = default;
};

struct ScheduleOptions {
    std::size_t width_cap = kDefaultWidthCap;
    bool hoist_deletions = true;
};

namespace detail {

/// Order of stages after moving each single-step constant-Z stage up to just
/// after the stage that activated the last of its edge partners. Branch
/// stages are never crossed. With `allow`, only stages s with allow[s] move.
inline std::vector<std::size_t> hoisted_order(const Block &b, const MeasurementPlan &p,
                                              const std::vector<bool> *allow = nullptr) {
    const std::size_t S = p.stages.size();
    auto inc = b.h.incidence();
    std::vector<long> act_stage(b.h.n_vertices, -1);
    std::vector<bool> active(b.h.n_vertices, false), applied(b.h.edges.size(), false);
    for (std::size_t s = 0; s < S; s++) {
        for (const auto &st : p.stages[s].steps) {
            for (std::size_t ei : inc[st.vertex]) {
                if (applied[ei]) {
                    continue;
                }
                for (Vertex u : b.h.edges[ei]) {
                    if (!active[u]) {
                        active[u] = true;
                        act_stage[u] = static_cast<long>(s);
                    }
                }
                applied[ei] = true;
            }
        }
    }
    std::vector<std::vector<std::size_t>> after(S);
    std::vector<bool> moved(S, false);
    long barrier = -1;
    for (std::size_t s = 0; s < S; s++) {
        const auto &steps = p.stages[s].steps;
        bool lone_z = steps.size() == 1 && steps[0].rule.kind == BasisRule::Kind::ConstZ;
        if (!lone_z) {
            for (const auto &st : steps) {
                if (st.rule.kind == BasisRule::Kind::Branch) {
                    barrier = static_cast<long>(s);
                }
            }
            continue;
        }
        if (allow && !(*allow)[s]) {
            continue;
        }
        Vertex v = steps[0].vertex;
        long target = std::max(barrier, act_stage[v]);
        for (std::size_t ei : inc[v]) {
            for (Vertex u : b.h.edges[ei]) {
                target = std::max(target, act_stage[u]);
            }
        }
        if (target >= 0 && target + 1 < static_cast<long>(s)) {
            after[static_cast<std::size_t>(target)].push_back(s);
            moved[s] = true;
        }
    }
    std::vector<std::size_t> order;
    order.reserve(S);
    for (std::size_t s = 0; s < S; s++) {
        if (!moved[s]) {
            order.push_back(s);
            for (std::size_t t : after[s]) {
                order.push_back(t);
            }
        }
    }
    return order;
}

}  // namespace detail

/// Lazy activation tape measuring stages in `order`: before a stage is
/// measured, every edge touching its vertices is applied, activating vertices
/// on first use. The caller vouches that `order` is semantically valid.
inline InstructionTape schedule_order(const Block &b, const MeasurementPlan &p, std::span<const std::size_t> order,
                                      std::size_t width_cap = kDefaultWidthCap) {
    if (p.n_wires != b.n_wires || p.outputs != b.output_ports || p.inputs != b.input_ports) {
        throw Error(ErrorKind::plan_mismatch, "plan was compiled for a different block");
    }
    InstructionTape tape;
    auto inc = b.h.incidence();
    std::vector<bool> active(b.h.n_vertices, false), applied(b.h.edges.size(), false);
    std::size_t width = 0;
    auto need_edge = [&](std::size_t ei) {
        if (applied[ei]) {
            return;
        }
        for (Vertex u : b.h.edges[ei]) {
            if (!active[u]) {
                active[u] = true;
                width++;
                tape.ops.push_back({Instruction::Op::Activate, u});
            }
        }
        tape.ops.push_back({Instruction::Op::Entangle, static_cast<std::uint32_t>(ei)});
        applied[ei] = true;
    };
    for (std::size_t s : order) {
        const auto &steps = p.stages[s].steps;
        for (const auto &st : steps) {
            for (std::size_t ei : inc[st.vertex]) {
                need_edge(ei);
            }
            if (!active[st.vertex]) {
                active[st.vertex] = true;
                width++;
                tape.ops.push_back({Instruction::Op::Activate, st.vertex});
            }
        }
        tape.peak_width = std::max(tape.peak_width, width);
        tape.ops.push_back({Instruction::Op::Measure, static_cast<std::uint32_t>(s)});
        width -= steps.size();
    }
    for (std::size_t ei = 0; ei < b.h.edges.size(); ei++) {
        need_edge(ei);
    }
    for (Vertex v : b.output_ports) {
        if (!active[v]) {
            active[v] = true;
            width++;
            tape.ops.push_back({Instruction::Op::Activate, v});
        }
    }
    tape.peak_width = std::max(tape.peak_width, width);
    if (tape.peak_width > width_cap) {
        throw Error(ErrorKind::width_cap_exceeded, "schedule needs " + std::to_string(tape.peak_width) +
                                                       " live qubits, cap is " + std::to_string(width_cap));
    }
    return tape;
}

inline InstructionTape schedule(const Block &b, const MeasurementPlan &p, ScheduleOptions opt = {}) {
    std::vector<std::size_t> order;
    if (opt.hoist_deletions) {
        order = detail::hoisted_order(b, p);
    } else {
        for (std::size_t s = 0; s < p.stages.size(); s++) {
            order.push_back(s);
        }
    }
    return schedule_order(b, p, order, opt.width_cap);
}

/// Empty when the tape satisfies every ordering invariant.
inline std::vector<std::string> validate_tape(const Block &b, const MeasurementPlan &p, const InstructionTape &t) {
    std::vector<std::string> errs;
    const auto N = b.h.n_vertices;
    std::vector<int> activated(N, 0), measured(N, 0);
    std::vector<int> applied(b.h.edges.size(), 0), stage_done(p.stages.size(), 0);
    std::vector<bool> is_out(N, false);
    for (Vertex v : b.output_ports) {
        is_out[v] = true;
    }
    std::size_t width = 0, peak = 0;
    for (const auto &ins : t.ops) {
        switch (ins.op) {
            case Instruction::Op::Activate:
                if (ins.index >= N) {
                    errs.push_back("activation of unknown vertex");
                    break;
                }
                if (activated[ins.index]++) {
                    errs.push_back("vertex " + std::to_string(ins.index) + " activated twice");
                }
                width++;
                peak = std::max(peak, width);
                break;
            case Instruction::Op::Entangle: {
                if (ins.index >= b.h.edges.size()) {
                    errs.push_back("unknown edge");
                    break;
                }
                if (applied[ins.index]++) {
                    errs.push_back("edge " + std::to_string(ins.index) + " applied twice");
                }
                for (Vertex u : b.h.edges[ins.index]) {
                    if (!activated[u]) {
                        errs.push_back("edge " + std::to_string(ins.index) + " applied before vertex " + std::to_string(u) +
                                       " was activated");
                    }
                    if (measured[u]) {
                        errs.push_back("edge " + std::to_string(ins.index) + " applied after vertex " + std::to_string(u) +
                                       " was measured");
                    }
                }
                break;
            }
            case Instruction::Op::Measure: {
                if (ins.index >= p.stages.size()) {
                    errs.push_back("unknown stage");
                    break;
                }
                if (stage_done[ins.index]++) {
                    errs.push_back("stage " + std::to_string(ins.index) + " measured twice");
                }
                for (const auto &st : p.stages[ins.index].steps) {
                    Vertex v = st.vertex;
                    if (!activated[v]) {
                        errs.push_back("vertex " + std::to_string(v) + " measured before activation");
                    }
                    if (is_out[v]) {
                        errs.push_back("output port " + std::to_string(v) + " measured");
                    }
                    if (measured[v]++) {
                        errs.push_back("vertex " + std::to_string(v) + " measured twice");
                    }
                    width--;
                }
                break;
            }
        }
    }
    for (std::size_t ei = 0; ei < b.h.edges.size(); ei++) {
        if (!applied[ei]) {
            errs.push_back("edge " + std::to_string(ei) + " never applied");
        }
    }
    for (std::size_t s = 0; s < p.stages.size(); s++) {
        if (!stage_done[s]) {
            errs.push_back("stage " + std::to_string(s) + " never measured");
        }
    }
    for (Vertex v = 0; v < N; v++) {
        if (!activated[v]) {
            errs.push_back("vertex " + std::to_string(v) + " never activated");
        }
    }
    if (peak != t.peak_width) {
        errs.push_back("recorded peak width " + std::to_string(t.peak_width) + " differs from " + std::to_string(peak));
    }
    return errs;
}

struct MeasurementRecord {
    Vertex vertex;
    Outcome outcome;

    bool operator==(const MeasurementRecord &) const = default;
};

/// Runs one stage: bases fixed from the state on entry, then Z steps, then X
/// steps. `measure(v, basis)` performs the physical measurement.
template <typename MeasureFn>
void run_stage(const PlanStage &stage, FrameTracker &tracker, std::vector<std::int8_t> &outcomes, MeasureFn &&measure,
               std::vector<MeasurementRecord> *log = nullptr) {
    std::vector<Basis> bases;
    bases.reserve(stage.steps.size());
    for (const auto &st : stage.steps) {
        bases.push_back(resolve(st, outcomes, tracker.ledger()));
    }
    for (Basis pass : {Basis::Z, Basis::X}) {
        for (std::size_t i = 0; i < stage.steps.size(); i++) {
            if (bases[i] != pass) {
                continue;
            }
            const auto &st = stage.steps[i];
            Outcome o = measure(st.vertex, pass);
            outcomes[st.vertex] = static_cast<std::int8_t>(o.bit);
            int wire = tracker.record(st.vertex, pass, o.bit);
            if (st.logical_h && pass == Basis::X) {
                tracker.relabel_hadamard(wire);
            }
            if (log) {
                log->push_back({st.vertex, o});
            }
        }
    }
}

struct ExecOptions {
    std::size_t width_cap = kDefaultWidthCap;
    /// When set, returns the bit to force for (vertex, basis); otherwise Born sampling.
    std::function<std::optional<int>(Vertex, Basis)> force;
};

struct RunResult {
    /// Output qubits in wire order, before unwinding.
    StateVector output_state;
    PauliFrame frame;
    CzLedger ledger;
    std::vector<MeasurementRecord> outcome_log;
    std::vector<LogicalEvent> events;
    std::size_t peak_width = 0;

    /// Logical output state.
    StateVector unwound() const {
        StateVector s = output_state;
        unwind(s, frame);
        return s;
    }
};

/// Executes the tape. `inputs` is either empty (all |+>) or one state per wire.
inline RunResult execute(const Block &b, const MeasurementPlan &p, const InstructionTape &tape,
                         std::span<const QubitState> inputs, Rng &rng, const ExecOptions &opt = {}) {
    if (!inputs.empty() && inputs.size() != b.n_wires) {
        throw Error(ErrorKind::dimension_mismatch, "expected " + std::to_string(b.n_wires) + " input states");
    }
    const auto N = b.h.n_vertices;
    std::vector<int> input_wire(N, -1);
    for (std::size_t w = 0; w < b.input_ports.size(); w++) {
        input_wire[b.input_ports[w]] = static_cast<int>(w);
    }
    StateVector s(opt.width_cap);
    std::vector<Handle> handle(N, 0);
    std::vector<std::int8_t> outcomes(N, -1);
    FrameTracker tracker(b.h, b.input_ports, b.output_ports);
    RunResult r{StateVector(opt.width_cap), PauliFrame(), CzLedger(), {}, {}, 0};
    auto measure = [&](Vertex v, Basis basis) {
        if (opt.force) {
            if (auto bit = opt.force(v, basis)) {
                return s.measure_forced(handle[v], basis, *bit);
            }
        }
        return s.measure(handle[v], basis, rng);
    };
    for (const auto &ins : tape.ops) {
        switch (ins.op) {
            case Instruction::Op::Activate: {
                int w = input_wire[ins.index];
                handle[ins.index] = s.activate(w >= 0 && !inputs.empty() ? inputs[static_cast<std::size_t>(w)] : kPlus);
                r.peak_width = std::max(r.peak_width, s.width());
                break;
            }
            case Instruction::Op::Entangle: {
                const auto &e = b.h.edges[ins.index];
                std::array<Handle, 3> hs{};
                for (std::size_t i = 0; i < e.size(); i++) {
                    hs[i] = handle[e[i]];
                }
                s.apply_gcz(std::span<const Handle>(hs.data(), e.size()));
                break;
            }
            case Instruction::Op::Measure:
                run_stage(p.stages[ins.index], tracker, outcomes, measure, &r.outcome_log);
                break;
        }
    }
    tracker.finish();
    std::vector<Handle> out;
    for (Vertex v : b.output_ports) {
        out.push_back(handle[v]);
    }
    r.output_state = s.reordered(out);
    r.frame = tracker.frame();
    r.ledger = tracker.ledger();
    r.events = tracker.events();
    return r;
}

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double infidelity = 0;
    std::size_t peak_width = 0;
};

struct OracleReport {
    double max_infidelity = 0;
    std::vector<TrialRecord> trials;
};

struct OracleOptions {
    std::size_t width_cap = kDefaultWidthCap;
    std::size_t jobs = 1;
    /// Negative control: compiles a perturbed circuit but compares against the original.
    bool corrupt_plan = false;
};

/// Circuit that differs from `c` in its first layer: an H is removed, added,
/// or (when every wire holds a CCZ) the first CCZ is dropped.
inline Circuit corrupted(const Circuit &c) {
    Circuit out = c;
    if (out.layers.empty()) {
        out.layers.emplace_back();
    }
    auto &layer = out.layers[0];
    for (std::size_t i = 0; i < layer.size(); i++) {
        if (layer[i].kind == Gate::Kind::H) {
            layer.erase(layer.begin() + static_cast<std::ptrdiff_t>(i));
            return out;
        }
    }
    std::vector<bool> busy(out.n_qubits, false);
    for (const auto &g : layer) {
        for (std::size_t a = 0; a < g.arity(); a++) {
            busy[static_cast<std::size_t>(g.q[a])] = true;
        }
    }
    for (std::size_t w = 0; w < out.n_qubits; w++) {
        if (!busy[w]) {
            layer.push_back(Gate::h(static_cast<int>(w)));
            return out;
        }
    }
    layer.erase(layer.begin());
    return out;
}

/// Random product inputs, Born sampling, frame unwinding, comparison with
/// oracle_run. Trial t draws from stream t + 1 of `seed`.
inline OracleReport check_against_oracle(const Circuit &c, std::size_t n, std::size_t d, std::size_t trials,
                                         std::uint64_t seed, const OracleOptions &opt = {}) {
    if (c.n_qubits != n) {
        throw Error(ErrorKind::plan_mismatch, "circuit width differs from n");
    }
    Block b = build_gnd(n, d);
    MeasurementPlan plan = compile(opt.corrupt_plan ? corrupted(c) : c, b);
    InstructionTape tape = schedule(b, plan, {opt.width_cap, true});
    OracleReport rep;
    rep.trials.resize(trials);
    parallel_for(trials, opt.jobs, [&](std::size_t t) {
        Rng rng(seed, t + 1);
        std::vector<QubitState> inputs;
        for (std::size_t w = 0; w < n; w++) {
            inputs.push_back(random_qubit(rng));
        }
        StateVector in = StateVector::product(inputs, opt.width_cap);
        StateVector want = oracle_run(c, in);
        ExecOptions eo;
        eo.width_cap = opt.width_cap;
        RunResult r = execute(b, plan, tape, inputs, rng, eo);
        StateVector got = r.unwound();
        double inf = std::max(0.0, 1.0 - fidelity(got, want.amplitudes()));
        rep.trials[t] = TrialRecord{t, stream_seed(seed, t + 1), inf, r.peak_width};
    });
    for (const auto &tr : rep.trials) {
        rep.max_infidelity = std::max(rep.max_infidelity, tr.infidelity);
    }
    return rep;
}

inline std::string format_report(const OracleReport &rep) {
    std::ostringstream out;
    char buf[64];
    for (const auto &t : rep.trials) {
        std::snprintf(buf, sizeof buf, "%.3e", t.infidelity);
        out << "trial=" << t.trial << " seed=" << t.seed << " infidelity=" << buf << " peak_width=" << t.peak_width
            << "\n";
    }
    std::snprintf(buf, sizeof buf, "%.3e", rep.max_infidelity);
    out << "max_infidelity=" << buf << " trials=" << rep.trials.size() << "\n";
    return out.str();
}

}  // namespace hxz

#endif
