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


// hxz: build, simulate, verify, vbqc, compile, selftest.
// Exit codes: 0 success, 1 property breach, 2 usage or input error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hxz/acceptance.hpp"
#include "hxz/hxz.hpp"
#include "hxz/oracles.hpp"

namespace {

using namespace hxz;

constexpr int kOk = 0, kBreach = 1, kUsage = 2;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::domain, "cannot read '" + path + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw Error(ErrorKind::domain, "cannot write '" + path + "'");
    }
}

// stdout plus an optional copy on disk
struct Report {
    std::ostringstream buf;
    std::string path;

    template <typename T>
    Report &operator<<(const T &x) {
        buf << x;
        return *this;
    }
    void flush() {
        std::cout << buf.str() << std::flush;
        if (!path.empty()) {
            write_file(path, buf.str());
        }
    }
};

std::string g(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", x);
    return b;
}

// ---------------------------------------------------------------- build

struct BuildArgs {
    std::size_t n = 3, d = 1;
    std::string out;
};

int cmd_build(const BuildArgs &a) {
    Block b = build_gnd(a.n, a.d);
    Coloring c = build_coloring(b);
    std::cout << "n=" << a.n << " d=" << a.d << " vertices=" << b.h.n_vertices << " edges=" << b.h.edges.size()
              << " arity3=" << b.h.count_arity(3) << " chi=" << c.k << "\n";
    if (!a.out.empty()) {
        write_file(a.out, encode(b.h, &c));
    }
    return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
    std::string circuit;
    bool patterns = false;
    std::size_t random = 0;
    std::optional<std::size_t> n, d;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    std::size_t width_cap = kDefaultWidthCap;
    bool corrupt = false;
    std::string report;
};

int cmd_simulate(const SimArgs &a) {
    std::vector<Circuit> circuits;
    std::size_t n = 3, d = 1;
    if (a.patterns) {
        circuits = single_layer_patterns();
    } else if (!a.circuit.empty()) {
        Circuit c = parse_circuit(read_file(a.circuit), a.n);
        n = c.n_qubits;
        d = a.d.value_or(std::max<std::size_t>(1, c.depth()));
        circuits.push_back(std::move(c));
    } else if (a.random > 0) {
        n = a.n.value_or(3);
        d = a.d.value_or(1);
        for (std::size_t k = 0; k < a.random; k++) {
            Rng r(a.seed, 5000 + k);
            circuits.push_back(random_circuit(n, d, r));
        }
    } else {
        throw Error(ErrorKind::domain, "give --circuit, --patterns or --random-circuits");
    }
    OracleOptions oo;
    oo.width_cap = a.width_cap;
    oo.jobs = a.jobs;
    oo.corrupt_plan = a.corrupt;
    Report rep{{}, a.report};
    double worst = 0;
    for (std::size_t k = 0; k < circuits.size(); k++) {
        rep << "circuit=" << k << " n=" << n << " d=" << d << " layers=" << circuits[k].depth()
            << (a.corrupt ? " corrupted=1" : "") << "\n";
        auto r = check_against_oracle(circuits[k], n, d, a.trials, stream_seed(a.seed, k), oo);
        rep << format_report(r);
        worst = std::max(worst, r.max_infidelity);
    }
    bool ok = worst <= 1e-10;
    char buf[96];
    std::snprintf(buf, sizeof buf, "summary circuits=%zu max_infidelity=%.3e verdict=%s\n", circuits.size(), worst,
                  ok ? "equivalent" : "breach");
    rep << buf;
    rep.flush();
    return ok ? kOk : kBreach;
}

// ---------------------------------------------------------------- compile

struct CompileArgs {
    std::string circuit;
    std::optional<std::size_t> n, d;
    std::size_t width_cap = kDefaultWidthCap;
    std::string out;
};

int cmd_compile(const CompileArgs &a) {
    Circuit c = parse_circuit(read_file(a.circuit), a.n);
    Block b = build_gnd(c.n_qubits, a.d.value_or(std::max<std::size_t>(1, c.depth())));
    MeasurementPlan p = compile(c, b);
    InstructionTape t = schedule(b, p, {a.width_cap, true});
    std::string text = export_plan(p);
    text += "tape ops=" + std::to_string(t.ops.size()) + " peak_width=" + std::to_string(t.peak_width) + "\n";
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_file(a.out, text);
        std::cout << "stages=" << p.stages.size() << " peak_width=" << t.peak_width << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string graph;
    std::size_t n = 3, d = 1;
    double delta = 0.5, eps = 0.5;
    std::string source = "honest";
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    std::string report;
};

struct SourceSpec {
    enum class Kind { honest, lazy, zero, dense_zero, flip } kind = Kind::honest;
    double p = 1.0;
};

SourceSpec parse_source(const std::string &s) {
    SourceSpec out;
    if (s == "honest") {
        return out;
    }
    if (s == "lazy") {
        out.kind = SourceSpec::Kind::lazy;
        return out;
    }
    if (s == "zero") {
        out.kind = SourceSpec::Kind::zero;
        return out;
    }
    if (s == "dense-zero") {
        out.kind = SourceSpec::Kind::dense_zero;
        return out;
    }
    ServerSpec f = parse_server_spec(s);  // shares the flip[:p] grammar
    if (f.kind != ServerSpec::Kind::flip) {
        throw Error(ErrorKind::domain, "unknown source '" + s + "'");
    }
    out.kind = SourceSpec::Kind::flip;
    out.p = f.p;
    return out;
}

SourcePtr make_source(const SourceSpec &s, const Hypergraph &h, std::uint64_t seed) {
    switch (s.kind) {
        case SourceSpec::Kind::honest: return honest_source(h, seed);
        case SourceSpec::Kind::lazy: return lazy_source(h, seed);
        case SourceSpec::Kind::zero: return constant_source(h.n_vertices, 0);
        case SourceSpec::Kind::dense_zero: {
            std::vector<Amp> a(std::size_t{1} << h.n_vertices, Amp{0.0});
            a[0] = 1.0;
            return dense_source(a, h.n_vertices, seed);
        }
        case SourceSpec::Kind::flip: return flip_source(honest_source(h, stream_seed(seed, 1)), s.p, seed);
    }
    return nullptr;
}

// Exact per-register pass probability when it can be computed.
std::optional<double> exact_register_pass(const SourceSpec &s, const Hypergraph &h, const Coloring &c) {
    constexpr std::size_t kBrute = 12;
    auto brute = [&](std::vector<Amp> amps, double flip) {
        double m = 0;
        for (int i = 0; i < c.k; i++) {
            m += oracle::color_test_pass_probability(amps, h, c.color_of, i, flip) / c.k;
        }
        return m;
    };
    switch (s.kind) {
        case SourceSpec::Kind::honest:
        case SourceSpec::Kind::lazy:
        case SourceSpec::Kind::zero: return 1.0;
        case SourceSpec::Kind::dense_zero: {
            std::vector<Amp> a(std::size_t{1} << h.n_vertices, Amp{0.0});
            a[0] = 1.0;
            return brute(a, 0.0);
        }
        case SourceSpec::Kind::flip:
            if (h.n_vertices <= kBrute) {
                return brute(hypergraph_amplitudes(h), s.p);
            }
            if (s.p == 1.0) {
                double m = 0;
                for (int i = 0; i < c.k; i++) {
                    m += oracle::all_flip_pass_probability(h, c.color_of, i) / c.k;
                }
                return m;
            }
            return std::nullopt;
    }
    return std::nullopt;
}

int cmd_verify(const VerifyArgs &a) {
    Hypergraph h;
    Coloring col;
    if (!a.graph.empty()) {
        auto dec = decode(read_file(a.graph));
        h = std::move(dec.graph);
        col = dec.coloring ? *dec.coloring : greedy_coloring(h);
    } else {
        Block b = build_gnd(a.n, a.d);
        col = build_coloring(b);
        h = std::move(b.h);
    }
    if (!is_valid_coloring(h, col)) {
        throw Error(ErrorKind::invalid_coloring, "graph coloring is not proper");
    }
    SourceSpec spec = parse_source(a.source);
    std::size_t regs = required_registers(static_cast<std::size_t>(col.k), a.delta, a.eps);
    Report rep{{}, a.report};
    rep << "vertices=" << h.n_vertices << " chi=" << col.k << " delta=" << g(a.delta) << " eps=" << g(a.eps)
        << " registers=" << regs << " ell=" << regs - 1 << " source=" << a.source << "\n";
    if (a.trials == 0) {
        rep.flush();
        return kOk;
    }
    std::vector<CoverResult> runs(a.trials);
    parallel_for(a.trials, a.jobs, [&](std::size_t t) {
        auto src = make_source(spec, h, stream_seed(a.seed, 2 * t + 2));
        Rng rng(a.seed, 2 * t + 1);
        runs[t] = cover_protocol(*src, h, col, a.delta, a.eps, rng);
    });
    std::size_t acc = 0;
    for (const auto &r : runs) {
        acc += r.accepted;
    }
    rep << "first_run\n" << format_cover_report(runs[0]);
    double reject_rate = 1.0 - static_cast<double>(acc) / static_cast<double>(a.trials);
    rep << "trials=" << a.trials << " accept=" << acc << " reject=" << a.trials - acc
        << " reject_rate=" << g(reject_rate) << "\n";
    int code = kOk;
    if (auto pass = exact_register_pass(spec, h, col)) {
        double exact = 1.0 - std::pow(*pass, static_cast<double>(regs - 1));
        double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(a.trials));
        bool ok = std::abs(reject_rate - exact) <= std::max(3.0 * sigma, 0.5 / static_cast<double>(a.trials));
        rep << "exact_reject=" << g(exact) << " sigma=" << g(sigma) << " within_3sigma=" << (ok ? "yes" : "no")
            << "\n";
        code = ok ? kOk : kBreach;
    } else {
        rep << "exact_reject=n/a\n";
    }
    rep.flush();
    return code;
}

// ---------------------------------------------------------------- vbqc

struct VbqcArgs {
    std::string circuit;
    std::optional<std::size_t> n, d;
    double delta = 0.5, eps = 0.5;
    std::string server = "honest";
    std::uint64_t seed = 1;
    bool threaded = false;
    bool print_transcript = false;
    std::string transcript, server_transcript;
};

int cmd_vbqc(const VbqcArgs &a) {
    Circuit c = parse_circuit(read_file(a.circuit), a.n);
    std::size_t d = a.d.value_or(std::max<std::size_t>(1, c.depth()));
    ServerSpec spec = parse_server_spec(a.server);
    VbqcOptions opt;
    opt.threaded = a.threaded;
    opt.channel_capacity = a.threaded ? 64 : 0;
    VbqcResult r = run_vbqc(c, c.n_qubits, d, a.delta, a.eps, spec, a.seed, opt);
    if (a.print_transcript) {
        std::cout << format_transcript(r.client_log);
    }
    if (!a.transcript.empty()) {
        write_file(a.transcript, format_transcript(r.client_log));
    }
    if (!a.server_transcript.empty()) {
        write_file(a.server_transcript, format_transcript(r.server_log));
    }
    std::cout << r.client_log.back() << "\n";
    std::cout << "server=" << format_server_spec(spec) << " messages=" << r.messages
              << " client_to_server=" << r.client_to_server << " tested=" << r.records.size() << "\n";
    if (r.accepted) {
        std::cout << "output_bits=";
        for (int b : r.output_bits) {
            std::cout << b;
        }
        std::cout << " frame_x=";
        for (auto v : r.frame.x) {
            std::cout << int(v);
        }
        std::cout << " frame_z=";
        for (auto v : r.frame.z) {
            std::cout << int(v);
        }
        std::cout << " frame_h=";
        for (auto v : r.frame.h) {
            std::cout << int(v);
        }
        std::cout << "\n";
        if (!std::isnan(r.oracle_fidelity)) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "oracle_fidelity=%.12f\n", r.oracle_fidelity);
            std::cout << buf;
        }
    }
    bool breach = r.client_to_server != 0;
    if (spec.kind == ServerSpec::Kind::honest) {
        breach = breach || !r.accepted || !(r.oracle_fidelity >= 1.0 - 1e-10);
    }
    return breach ? kBreach : kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"hxz: X/Z hypergraph-state MBQC toolkit"};
    app.require_subcommand(1);

    BuildArgs ba;
    auto *build = app.add_subcommand("build", "build G_n^d and its 3-coloring");
    build->add_option("--n", ba.n, "logical qubits (>= 3)");
    build->add_option("--d", ba.d, "depth (>= 1)");
    build->add_option("--out", ba.out, "write the hypergraph with its coloring here");

    SimArgs sa;
    auto *sim = app.add_subcommand("simulate", "compare MBQC runs with the circuit oracle");
    auto *sim_src = sim->add_option_group("input");
    sim_src->add_option("--circuit", sa.circuit, "circuit file");
    sim_src->add_flag("--patterns", sa.patterns, "the nine one-layer patterns on G_3^1");
    sim_src->add_option("--random-circuits", sa.random, "this many random circuits");
    sim_src->require_option(1);
    sim->add_option("--n", sa.n, "logical qubits");
    sim->add_option("--d", sa.d, "block depth");
    sim->add_option("--trials", sa.trials, "random inputs per circuit");
    sim->add_option("--seed", sa.seed);
    sim->add_option("--jobs", sa.jobs, "worker threads");
    sim->add_option("--width-cap", sa.width_cap, "simulator window");
    sim->add_flag("--corrupt-plan", sa.corrupt, "negative control: compile a perturbed circuit");
    sim->add_option("--report", sa.report, "also write the report here");

    CompileArgs ca;
    auto *comp = app.add_subcommand("compile", "print the measurement plan for a circuit");
    comp->add_option("--circuit", ca.circuit, "circuit file")->required();
    comp->add_option("--n", ca.n);
    comp->add_option("--d", ca.d);
    comp->add_option("--width-cap", ca.width_cap);
    comp->add_option("--out", ca.out);

    VerifyArgs va;
    auto *ver = app.add_subcommand("verify", "run the cover protocol");
    ver->add_option("--graph", va.graph, "hypergraph file (coloring optional)");
    ver->add_option("--n", va.n);
    ver->add_option("--d", va.d);
    ver->add_option("--delta", va.delta);
    ver->add_option("--eps", va.eps);
    ver->add_option("--source", va.source, "honest | lazy | zero | dense-zero | flip[:p]");
    ver->add_option("--trials", va.trials);
    ver->add_option("--seed", va.seed);
    ver->add_option("--jobs", va.jobs);
    ver->add_option("--report", va.report);

    VbqcArgs qa;
    auto *vb = app.add_subcommand("vbqc", "one-way verifiable blind computation");
    vb->add_option("--circuit", qa.circuit, "circuit file")->required();
    vb->add_option("--n", qa.n);
    vb->add_option("--d", qa.d);
    vb->add_option("--delta", qa.delta);
    vb->add_option("--eps", qa.eps);
    vb->add_option("--server", qa.server, "honest | zero | flip[:p]");
    vb->add_option("--seed", qa.seed);
    vb->add_flag("--threaded", qa.threaded, "client and server on separate threads");
    vb->add_flag("--print-transcript", qa.print_transcript);
    vb->add_option("--transcript", qa.transcript, "client transcript file");
    vb->add_option("--server-transcript", qa.server_transcript);

    std::size_t self_jobs = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t self_seed = AcceptanceOptions{}.seed;
    auto *self = app.add_subcommand("selftest", "run the acceptance suite");
    self->add_option("--jobs", self_jobs);
    self->add_option("--seed", self_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*build) {
            return cmd_build(ba);
        }
        if (*sim) {
            return cmd_simulate(sa);
        }
        if (*comp) {
            return cmd_compile(ca);
        }
        if (*ver) {
            return cmd_verify(va);
        }
        if (*vb) {
            return cmd_vbqc(qa);
        }
        if (*self) {
            return run_acceptance(std::cout, {self_jobs, self_seed}) ? kOk : kBreach;
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::internal ? kBreach : kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
