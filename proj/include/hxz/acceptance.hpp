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


#ifndef HXZ_ACCEPTANCE_HPP
#define HXZ_ACCEPTANCE_HPP

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <ostream>
#include <string>
#include <vector>

#include "hxz/builder.hpp"
#include "hxz/circuit.hpp"
#include "hxz/engine.hpp"
#include "hxz/frame.hpp"
#include "hxz/oracles.hpp"
#include "hxz/statevec.hpp"
#include "hxz/vbqc.hpp"
#include "hxz/verifier.hpp"

namespace hxz {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    std::size_t jobs = 1;
    std::uint64_t seed = 20260;
};

namespace acceptance {

inline std::string fmt(const char *f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

inline double binomial_sigma(double p, std::size_t n) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// |observed - expected| <= 3 sigma; a zero-variance expectation must match exactly.
inline bool within_3sigma(double observed, double expected, std::size_t n) {
    double s = binomial_sigma(expected, n);
    return std::abs(observed - expected) <= std::max(3.0 * s, 0.5 / static_cast<double>(n));
}

inline CriterionResult block_universality(const AcceptanceOptions &o) {
    double worst = 0;
    for (const auto &c : single_layer_patterns()) {
        OracleOptions oo;
        oo.jobs = o.jobs;
        worst = std::max(worst, check_against_oracle(c, 3, 1, 20, o.seed, oo).max_infidelity);
    }
    return {1, "block universality", worst <= 1e-10, fmt("patterns=9 trials=20 max_infidelity=%.2e", worst)};
}

inline CriterionResult chained_universality(const AcceptanceOptions &o) {
    double worst = 0;
    std::size_t runs = 0, peak = 0;
    for (auto [n, d] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 1}, {4, 2}, {3, 3}}) {
        std::vector<double> inf(50);
        std::vector<std::size_t> pk(50);
        parallel_for(50, o.jobs, [&](std::size_t k) {
            Rng r(o.seed, 1000 * n + 100 * d + k);
            Circuit c = random_circuit(n, d, r);
            auto rep = check_against_oracle(c, n, d, 1, stream_seed(o.seed, 7000 + 100 * n + 10 * d + k));
            inf[k] = rep.max_infidelity;
            pk[k] = rep.trials[0].peak_width;
        });
        worst = std::max(worst, *std::max_element(inf.begin(), inf.end()));
        peak = std::max(peak, *std::max_element(pk.begin(), pk.end()));
        runs += 50;
    }
    return {2, "chained universality", worst <= 1e-10,
            fmt("circuits=%zu max_infidelity=%.2e peak_width=%zu", runs, worst, peak)};
}

inline CriterionResult counting(const AcceptanceOptions &) {
    bool ok = build_gnd(3, 1).h.n_vertices == 66;
    std::size_t checked = 0;
    for (std::size_t n = 3; n <= 5; n++) {
        for (std::size_t d = 1; d <= 3; d++) {
            auto got = static_cast<long long>(build_gnd(n, d).h.n_vertices);
            ok = ok && got == oracle::vertex_count(static_cast<long long>(n), static_cast<long long>(d)) &&
                 static_cast<std::uint64_t>(got) == qubit_count(n, d);
            checked++;
        }
    }
    return {3, "vertex counting", ok, fmt("configurations=%zu g31=%zu", checked, build_gnd(3, 1).h.n_vertices)};
}

inline CriterionResult index_formula(const AcceptanceOptions &) {
    bool ok = triple_index(4, {1, 2, 4}) == 1 && triple_index(4, {1, 3, 4}) == 2 && triple_index(4, {2, 3, 4}) == 3;
    std::size_t checked = 0;
    for (std::size_t n = 4; n <= 8; n++) {
        int N = static_cast<int>(n);
        for (int i = 1; i <= N; i++) {
            for (int j = i + 1; j <= N; j++) {
                for (int k = j + 1; k <= N; k++) {
                    if (i == 1 && j == 2 && k == 3) {
                        continue;
                    }
                    ok = ok && triple_index(n, {i, j, k}) == oracle::lex_rank(n, i, j, k);
                    checked++;
                }
            }
        }
    }
    return {4, "triple index", ok, fmt("triples=%zu n=4..8", checked)};
}

inline CriterionResult coloring(const AcceptanceOptions &) {
    bool ok = true;
    std::size_t blocks = 0;
    for (std::size_t n = 3; n <= 5; n++) {
        for (std::size_t d = 1; d <= 2; d++) {
            Block b = build_gnd(n, d);
            Coloring c = build_coloring(b);
            std::set<int> used(c.color_of.begin(), c.color_of.end());
            ok = ok && c.k == 3 && used.size() == 3 && is_valid_coloring(b.h, c);
            for (const auto &L : b.layout.layers) {
                for (const auto &s : L.sub) {
                    int want = c.color_of[s.gadget.wire[0].input];
                    for (const auto &w : s.gadget.wire) {
                        ok = ok && c.color_of[w.input] == want && c.color_of[w.output] == want;
                    }
                }
            }
            blocks++;
        }
    }
    return {5, "three-coloring", ok, fmt("blocks=%zu colors=3", blocks)};
}

/// Largest total variation between sampled and exact color-test distributions on the triangle.
inline double triangle_tv(RegisterSource &src, std::size_t samples) {
    Hypergraph t = oracle::ccz_triangle();
    Coloring col{{0, 1, 2}, 3};
    auto amps = hypergraph_amplitudes(t);
    double worst = 0;
    for (int i = 0; i < 3; i++) {
        auto exact = oracle::mixed_basis_distribution(amps, 3, std::uint64_t{1} << i);
        std::vector<double> hist(8, 0.0);
        for (std::size_t s = 0; s < samples; s++) {
            auto rec = run_color_test(*src.open(), t, col, i, 1);
            unsigned y = 0;
            for (unsigned v = 0; v < 3; v++) {
                y |= static_cast<unsigned>(rec.outcomes[v]) << v;
            }
            hist[y] += 1.0 / static_cast<double>(samples);
        }
        double tv = 0;
        for (std::size_t y = 0; y < 8; y++) {
            tv += 0.5 * std::abs(hist[y] - exact[y]);
        }
        worst = std::max(worst, tv);
    }
    return worst;
}

inline CriterionResult verifier_completeness(const AcceptanceOptions &o) {
    Block b = build_gnd(3, 1);
    Coloring col = build_coloring(b);
    auto src = honest_source(b.h, stream_seed(o.seed, 60));
    Rng rng(o.seed, 61);
    std::size_t rejects = 0;
    for (int t = 0; t < 1000; t++) {
        rejects += !cover_protocol(*src, b.h, col, 0.5, 0.5, rng).accepted;
    }
    auto tri = honest_source(oracle::ccz_triangle(), stream_seed(o.seed, 62));
    double tv = triangle_tv(*tri, 10000);
    return {6, "verifier completeness", rejects == 0 && tv < 0.02,
            fmt("runs=1000 rejects=%zu triangle_tv=%.4f", rejects, tv)};
}

inline CriterionResult verifier_soundness(const AcceptanceOptions &o) {
    Hypergraph t = oracle::ccz_triangle();
    Coloring col{{0, 1, 2}, 3};
    std::vector<Amp> zero(8, Amp{0.0});
    zero[0] = 1.0;
    auto src = dense_source(zero, 3, stream_seed(o.seed, 70));
    const std::size_t trials = 10000;
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 3; i++) {
        double exact = oracle::color_test_pass_probability(zero, t, col.color_of, i);
        std::size_t pass = 0;
        for (std::size_t s = 0; s < trials; s++) {
            pass += run_color_test(*src->open(), t, col, i, 1).pass;
        }
        double obs = static_cast<double>(pass) / trials;
        ok = ok && within_3sigma(obs, exact, trials);
        detail += fmt("%scolor%d=%.4f/%.4f", i ? " " : "", i + 1, obs, exact);
    }
    return {7, "verifier soundness", ok, detail + " (observed/exact)"};
}

inline CriterionResult sample_count(const AcceptanceOptions &) {
    std::size_t a = required_registers(3, 0.1, 0.1), b = required_registers(3, 0.5, 0.5);
    return {8, "sample count", a == 271 && b == 7, fmt("(0.1,0.1)->%zu (0.5,0.5)->%zu", a, b)};
}

inline CriterionResult vbqc(const AcceptanceOptions &o) {
    const std::size_t runs = 200;
    Circuit c = parse_circuit("CCZ 0 1 2", 3);
    std::vector<int> ok(runs, 0);
    std::vector<double> fid(runs, 0.0);
    std::vector<std::uint64_t> c2s(runs, 0);
    parallel_for(runs, o.jobs, [&](std::size_t s) {
        auto r = run_vbqc(c, 3, 1, 0.5, 0.5, {}, stream_seed(o.seed, 900 + s));
        ok[s] = r.accepted;
        fid[s] = r.accepted ? r.oracle_fidelity : 0.0;
        c2s[s] = r.client_to_server;
    });
    std::size_t accepted = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    double min_fid = *std::min_element(fid.begin(), fid.end());
    std::uint64_t total_c2s = 0;
    for (auto x : c2s) {
        total_c2s += x;
    }

    Block b = build_gnd(3, 1);
    Coloring col = build_coloring(b);
    double pass_reg = 0;
    for (int i = 0; i < col.k; i++) {
        pass_reg += oracle::all_flip_pass_probability(b.h, col.color_of, i) / col.k;
    }
    std::size_t ell = required_registers(3, 0.5, 0.5) - 1;
    double exact_reject = 1.0 - std::pow(pass_reg, static_cast<double>(ell));
    std::vector<int> rej(runs, 0);
    parallel_for(runs, o.jobs, [&](std::size_t s) {
        auto r = run_vbqc(c, 3, 1, 0.5, 0.5, parse_server_spec("flip"), stream_seed(o.seed, 1900 + s));
        rej[s] = !r.accepted;
        c2s[s] = r.client_to_server;
    });
    for (auto x : c2s) {
        total_c2s += x;
    }
    double obs_reject = static_cast<double>(std::count(rej.begin(), rej.end(), 1)) / runs;
    bool pass = accepted == runs && min_fid >= 1.0 - 1e-10 && within_3sigma(obs_reject, exact_reject, runs) &&
                total_c2s == 0;
    return {9, "vbqc", pass,
            fmt("honest_accept=%zu/%zu min_fidelity=%.12f flip_reject=%.3f exact=%.3f client_to_server=%llu",
                accepted, runs, min_fid, obs_reject, exact_reject, static_cast<unsigned long long>(total_c2s))};
}

inline double max_abs_diff(std::span<const Amp> a, std::span<const Amp> b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

inline CriterionResult simulator_foundations(const AcceptanceOptions &o) {
    Rng rng(o.seed, 100);
    // norm drift
    StateVector s;
    std::vector<Handle> live;
    for (int q = 0; q < 8; q++) {
        live.push_back(s.activate(random_qubit(rng)));
    }
    double drift = 0;
    for (int op = 0; op < 1000; op++) {
        std::uint64_t kind = rng.below(4);
        Handle a = live[rng.below(live.size())];
        if (kind == 0) {
            s.apply_1q(a, static_cast<Gate1>(rng.below(3)));
        } else if (kind == 1) {
            std::vector<Handle> pick = live;
            rng.shuffle(pick);
            pick.resize(1 + rng.below(3));
            s.apply_gcz(pick);
        } else if (kind == 2) {
            s.measure(a, rng.bit() ? Basis::X : Basis::Z, rng);
            live.erase(std::find(live.begin(), live.end(), a));
            live.push_back(s.activate(random_qubit(rng)));
        } else {
            s.apply_1q(a, Gate1::H);
        }
        drift = std::max(drift, std::abs(s.norm_squared() - 1.0));
    }

    // Z outcomes on a hypergraph state
    Hypergraph h(5);
    h.add_edge({0, 1, 2});
    h.add_edge({1, 3});
    h.add_edge({2, 3, 4});
    h.add_edge({0, 4});
    auto amps = hypergraph_amplitudes(h);
    const std::size_t samples = 20000;
    std::vector<double> hist(32, 0.0);
    auto src = dense_source(amps, 5, stream_seed(o.seed, 101));
    for (std::size_t t = 0; t < samples; t++) {
        auto sess = src->open();
        unsigned y = 0;
        for (Vertex v = 0; v < 5; v++) {
            y |= static_cast<unsigned>(sess->measure(v, Basis::Z)) << v;
        }
        hist[y] += 1;
    }
    double chi2 = 0, expect = samples / 32.0;
    for (double c : hist) {
        chi2 += (c - expect) * (c - expect) / expect;
    }
    boost::math::chi_squared dist(31);
    double p_value = boost::math::cdf(boost::math::complement(dist, chi2));

    // byproduct identities on random 3-qubit states
    double worst = 0;
    for (int t = 0; t < 20; t++) {
        std::vector<QubitState> in{random_qubit(rng), random_qubit(rng), random_qubit(rng)};
        auto base = StateVector::product(in);
        for (int a = 0; a < 3; a++) {
            int b2 = (a + 1) % 3, c2 = (a + 2) % 3;
            auto lhs = base, rhs = base;
            lhs.apply_1q(a, Gate1::X);
            lhs.apply_gcz({0, 1, 2});
            lhs.apply_1q(a, Gate1::X);
            rhs.apply_gcz({0, 1, 2});
            rhs.apply_gcz({static_cast<Handle>(b2), static_cast<Handle>(c2)});
            worst = std::max(worst, max_abs_diff(lhs.amplitudes(), rhs.amplitudes()));

            lhs = base, rhs = base;
            lhs.apply_1q(a, Gate1::X);
            lhs.apply_gcz({static_cast<Handle>(a), static_cast<Handle>(b2)});
            lhs.apply_1q(a, Gate1::X);
            rhs.apply_gcz({static_cast<Handle>(a), static_cast<Handle>(b2)});
            rhs.apply_1q(b2, Gate1::Z);
            worst = std::max(worst, max_abs_diff(lhs.amplitudes(), rhs.amplitudes()));

            lhs = base, rhs = base;
            lhs.apply_1q(a, Gate1::Z);
            lhs.apply_gcz({0, 1, 2});
            rhs.apply_gcz({0, 1, 2});
            rhs.apply_1q(a, Gate1::Z);
            worst = std::max(worst, max_abs_diff(lhs.amplitudes(), rhs.amplitudes()));
        }
        // frame rule against the dense state: CCZ X^x Z^z = X^x' Z^z' C' CCZ
        for (unsigned bits = 0; bits < 64; bits++) {
            PauliFrame f(3);
            for (std::size_t w = 0; w < 3; w++) {
                f.x[w] = (bits >> w) & 1;
                f.z[w] = (bits >> (w + 3)) & 1;
            }
            auto lhs = base, rhs = base;
            for (Handle w = 0; w < 3; w++) {
                if (f.z[w]) {
                    lhs.apply_1q(w, Gate1::Z);
                }
                if (f.x[w]) {
                    lhs.apply_1q(w, Gate1::X);
                }
            }
            lhs.apply_gcz({0, 1, 2});
            CzLedger led;
            propagate_byproduct(f, led, FrameGate::ccz(0, 1, 2));
            rhs.apply_gcz({0, 1, 2});
            for (const auto &[p, q] : led.pairs()) {
                rhs.apply_gcz({static_cast<Handle>(p), static_cast<Handle>(q)});
            }
            for (Handle w = 0; w < 3; w++) {
                if (f.z[w]) {
                    rhs.apply_1q(w, Gate1::Z);
                }
                if (f.x[w]) {
                    rhs.apply_1q(w, Gate1::X);
                }
            }
            // the two sides may differ by a global sign
            Amp phase = 0;
            for (std::size_t i = 0; i < 8; i++) {
                phase += std::conj(rhs.amplitudes()[i]) * lhs.amplitudes()[i];
            }
            for (auto &amp : rhs.raw_amplitudes()) {
                amp *= phase / std::abs(phase);
            }
            worst = std::max(worst, max_abs_diff(lhs.amplitudes(), rhs.amplitudes()));
        }
    }
    bool ok = drift <= 1e-9 && p_value > 0.001 && worst <= 1e-12;
    return {10, "simulator foundations", ok,
            fmt("norm_drift=%.1e z_uniformity_p=%.3f conjugation_error=%.1e", drift, p_value, worst)};
}

}  // namespace acceptance

/// Runs the ten acceptance criteria, one line each; true when all pass.
inline bool run_acceptance(std::ostream &out, const AcceptanceOptions &o = {}) {
    using Fn = std::function<CriterionResult(const AcceptanceOptions &)>;
    const std::vector<Fn> all{acceptance::block_universality, acceptance::chained_universality,
                              acceptance::counting,           acceptance::index_formula,
                              acceptance::coloring,           acceptance::verifier_completeness,
                              acceptance::verifier_soundness, acceptance::sample_count,
                              acceptance::vbqc,               acceptance::simulator_foundations};
    bool all_pass = true;
    for (const auto &f : all) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = f(o);
        } catch (const std::exception &e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << "): " << r.detail
            << acceptance::fmt(" [%.1fs]", secs) << std::endl;
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
    return all_pass;
}

}  // namespace hxz

#endif
