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


#ifndef HXZ_VERIFIER_HPP
#define HXZ_VERIFIER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hxz/errors.hpp"
#include "hxz/hypergraph.hpp"
#include "hxz/rng.hpp"
#include "hxz/statevec.hpp"

namespace hxz {

/// One register's measurement authority. Every vertex is asked at most once.
class RegisterSession {
   public:
    virtual ~RegisterSession() = default;
    virtual int measure(Vertex v, Basis basis) = 0;
    /// Unmeasured qubits `vs` in order, when the session holds a real state.
    virtual std::optional<StateVector> peek(std::span<const Vertex> vs) {
        (void)vs;
        return std::nullopt;
    }
};

/// Hands out one fresh session per register.
class RegisterSource {
   public:
    virtual ~RegisterSource() = default;
    virtual std::shared_ptr<RegisterSession> open() = 0;
};

using SourcePtr = std::shared_ptr<RegisterSource>;

namespace detail {

class OnceGuard {
   public:
    explicit OnceGuard(std::size_t n) : seen_(n, false) {
    }
    void mark(Vertex v) {
        if (v >= seen_.size()) {
            throw Error(ErrorKind::index_out_of_range, "vertex " + std::to_string(v) + " outside the register");
        }
        if (seen_[v]) {
            throw Error(ErrorKind::protocol_violation, "vertex " + std::to_string(v) + " measured twice");
        }
        seen_[v] = true;
    }

   private:
    std::vector<bool> seen_;
};

// Exact sampler for the ideal state under a color-test pattern.
class HonestSession final : public RegisterSession {
   public:
    HonestSession(std::shared_ptr<const Hypergraph> h, std::shared_ptr<const std::vector<std::vector<std::size_t>>> inc,
                  Rng rng)
        : h_(std::move(h)), inc_(std::move(inc)), rng_(rng), guard_(h_->n_vertices), z_(h_->n_vertices, -1),
          x_(h_->n_vertices, false), pinned_(h_->n_vertices, false) {
    }

    int measure(Vertex v, Basis basis) override {
        guard_.mark(v);
        if (basis == Basis::Z) {
            return z_bit(v);
        }
        if (pinned_[v]) {
            throw Error(ErrorKind::invalid_coloring, "X request on " + std::to_string(v) + " shares an edge with an X vertex");
        }
        x_[v] = true;
        int o = 0;
        for (std::size_t ei : (*inc_)[v]) {
            int prod = 1;
            for (Vertex k : h_->edges[ei]) {
                if (k == v) {
                    continue;
                }
                if (x_[k]) {
                    throw Error(ErrorKind::invalid_coloring,
                                "X vertices " + std::to_string(k) + " and " + std::to_string(v) + " share an edge");
                }
                pinned_[k] = true;
                prod &= z_bit(k);
            }
            o ^= prod;
        }
        return o;
    }

   private:
    int z_bit(Vertex v) {
        if (z_[v] < 0) {
            z_[v] = static_cast<std::int8_t>(rng_.bit());
        }
        return z_[v];
    }

    std::shared_ptr<const Hypergraph> h_;
    std::shared_ptr<const std::vector<std::vector<std::size_t>>> inc_;
    Rng rng_;
    OnceGuard guard_;
    std::vector<std::int8_t> z_;
    std::vector<bool> x_, pinned_;
};

// The actual hypergraph state, entangled only as measurements reach it.
class LazyGraphSession final : public RegisterSession {
   public:
    LazyGraphSession(const Hypergraph &h, Rng rng, std::size_t width_cap)
        : n_(h.n_vertices), rng_(rng), guard_(h.n_vertices), s_(width_cap), handle_(h.n_vertices, 0),
          active_(h.n_vertices, false), gone_(h.n_vertices, false) {
        for (const auto &e : h.edges) {
            toggle(e);
        }
    }

    int measure(Vertex v, Basis basis) override {
        guard_.mark(v);
        int bit;
        if (basis == Basis::X) {
            settle(v);
            bit = s_.measure(handle_[v], Basis::X, rng_).bit;
        } else {
            bit = active_[v] ? s_.measure(handle_[v], Basis::Z, rng_).bit : rng_.bit();
            // Z outcome b leaves e \ {v} on every pending edge when b = 1.
            std::vector<Edge> touched;
            for (const auto &e : pending_) {
                if (std::find(e.begin(), e.end(), v) != e.end()) {
                    touched.push_back(e);
                }
            }
            for (auto &e : touched) {
                pending_.erase(e);
                if (bit) {
                    e.erase(std::find(e.begin(), e.end(), v));
                    if (!e.empty()) {
                        toggle(e);
                    }
                }
            }
        }
        gone_[v] = true;
        return bit;
    }

    std::optional<StateVector> peek(std::span<const Vertex> vs) override {
        std::vector<Handle> hs;
        for (Vertex v : vs) {
            if (v >= n_ || gone_[v]) {
                throw Error(ErrorKind::index_out_of_range, "vertex " + std::to_string(v) + " is not live");
            }
            settle(v);
        }
        for (Vertex v : vs) {
            hs.push_back(handle_[v]);
        }
        return s_.reordered(hs);
    }

    std::size_t peak_width() const {
        return peak_;
    }

   private:
    void toggle(const Edge &e) {
        if (!pending_.erase(e)) {
            pending_.insert(e);
        }
    }

    void activate(Vertex v) {
        if (!active_[v]) {
            handle_[v] = s_.activate(kPlus);
            active_[v] = true;
            peak_ = std::max(peak_, s_.width());
        }
    }

    // applies every pending edge through v
    void settle(Vertex v) {
        activate(v);
        for (auto it = pending_.begin(); it != pending_.end();) {
            if (std::find(it->begin(), it->end(), v) == it->end()) {
                ++it;
                continue;
            }
            std::array<Handle, 3> hs{};
            for (std::size_t i = 0; i < it->size(); i++) {
                activate((*it)[i]);
                hs[i] = handle_[(*it)[i]];
            }
            s_.apply_gcz(std::span<const Handle>(hs.data(), it->size()));
            it = pending_.erase(it);
        }
    }

    std::size_t n_;
    Rng rng_;
    OnceGuard guard_;
    StateVector s_;
    std::vector<Handle> handle_;
    std::vector<bool> active_, gone_;
    std::set<Edge> pending_;
    std::size_t peak_ = 0;
};

class FlipSession final : public RegisterSession {
   public:
    FlipSession(std::shared_ptr<RegisterSession> inner, double p, Rng rng) : inner_(std::move(inner)), p_(p), rng_(rng) {
    }
    int measure(Vertex v, Basis basis) override {
        int b = inner_->measure(v, basis);
        return rng_.bernoulli(p_) ? b ^ 1 : b;
    }
    std::optional<StateVector> peek(std::span<const Vertex> vs) override {
        return inner_->peek(vs);
    }

   private:
    std::shared_ptr<RegisterSession> inner_;
    double p_;
    Rng rng_;
};

class ConstantSession final : public RegisterSession {
   public:
    ConstantSession(std::size_t n, int bit) : guard_(n), bit_(bit) {
    }
    int measure(Vertex v, Basis) override {
        guard_.mark(v);
        return bit_;
    }

   private:
    OnceGuard guard_;
    int bit_;
};

class DenseSession final : public RegisterSession {
   public:
    DenseSession(StateVector s, Rng rng) : guard_(s.width()), s_(std::move(s)), rng_(rng) {
    }
    int measure(Vertex v, Basis basis) override {
        guard_.mark(v);
        return s_.measure(static_cast<Handle>(v), basis, rng_).bit;
    }
    std::optional<StateVector> peek(std::span<const Vertex> vs) override {
        std::vector<Handle> hs(vs.begin(), vs.end());
        return s_.reordered(hs);
    }

   private:
    OnceGuard guard_;
    StateVector s_;
    Rng rng_;
};

// Each open() draws a new RNG stream so repeated protocol runs differ.
class StreamCounter {
   protected:
    explicit StreamCounter(std::uint64_t seed) : seed_(seed) {
    }
    Rng next_rng() {
        return Rng(seed_, ++opened_);
    }
    std::uint64_t seed_;
    std::uint64_t opened_ = 0;
};

class HonestSource final : public RegisterSource, StreamCounter {
   public:
    HonestSource(const Hypergraph &h, std::uint64_t seed)
        : StreamCounter(seed), h_(std::make_shared<const Hypergraph>(h)),
          inc_(std::make_shared<const std::vector<std::vector<std::size_t>>>(h.incidence())) {
    }
    std::shared_ptr<RegisterSession> open() override {
        return std::make_shared<HonestSession>(h_, inc_, next_rng());
    }

   private:
    std::shared_ptr<const Hypergraph> h_;
    std::shared_ptr<const std::vector<std::vector<std::size_t>>> inc_;
};

class LazySource final : public RegisterSource, StreamCounter {
   public:
    LazySource(const Hypergraph &h, std::uint64_t seed, std::size_t cap) : StreamCounter(seed), h_(h), cap_(cap) {
    }
    std::shared_ptr<RegisterSession> open() override {
        return std::make_shared<LazyGraphSession>(h_, next_rng(), cap_);
    }

   private:
    Hypergraph h_;
    std::size_t cap_;
};

class FlipSource final : public RegisterSource, StreamCounter {
   public:
    FlipSource(SourcePtr inner, double p, std::uint64_t seed) : StreamCounter(seed), inner_(std::move(inner)), p_(p) {
    }
    std::shared_ptr<RegisterSession> open() override {
        return std::make_shared<FlipSession>(inner_->open(), p_, next_rng());
    }

   private:
    SourcePtr inner_;
    double p_;
};

class ConstantSource final : public RegisterSource {
   public:
    ConstantSource(std::size_t n, int bit) : n_(n), bit_(bit) {
    }
    std::shared_ptr<RegisterSession> open() override {
        return std::make_shared<ConstantSession>(n_, bit_);
    }

   private:
    std::size_t n_;
    int bit_;
};

class DenseSource final : public RegisterSource, StreamCounter {
   public:
    DenseSource(StateVector s, std::uint64_t seed) : StreamCounter(seed), s_(std::move(s)) {
    }
    std::shared_ptr<RegisterSession> open() override {
        return std::make_shared<DenseSession>(s_, next_rng());
    }

   private:
    StateVector s_;
};

}  // namespace detail

/// Ideal-state sampler valid for color-test patterns; X requests on
/// vertices sharing an edge raise invalid-coloring.
inline SourcePtr honest_source(const Hypergraph &h, std::uint64_t seed) {
    return std::make_shared<detail::HonestSource>(h, seed);
}

/// Statevector-backed ideal register for arbitrary patterns.
inline SourcePtr lazy_source(const Hypergraph &h, std::uint64_t seed, std::size_t width_cap = kDefaultWidthCap) {
    return std::make_shared<detail::LazySource>(h, seed, width_cap);
}

inline SourcePtr flip_source(SourcePtr inner, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::domain, "flip probability must lie in [0, 1]");
    }
    return std::make_shared<detail::FlipSource>(std::move(inner), p, seed);
}

inline SourcePtr constant_source(std::size_t n_vertices, int bit) {
    return std::make_shared<detail::ConstantSource>(n_vertices, bit & 1);
}

/// Same N-qubit state for every register; amplitude index bit v is vertex v.
inline SourcePtr dense_source(std::span<const Amp> amplitudes, std::size_t n_vertices, std::uint64_t seed,
                              std::size_t width_cap = kDefaultWidthCap) {
    if (n_vertices > width_cap) {
        throw Error(ErrorKind::width_cap_exceeded, std::to_string(n_vertices) + " qubits exceed the window");
    }
    if (amplitudes.size() != (std::size_t{1} << n_vertices)) {
        throw Error(ErrorKind::dimension_mismatch, "amplitude vector does not match " + std::to_string(n_vertices) +
                                                       " qubits");
    }
    StateVector s(width_cap);
    for (std::size_t i = 0; i < n_vertices; i++) {
        s.activate(kZero);
    }
    s.raw_amplitudes().assign(amplitudes.begin(), amplitudes.end());
    double nn = s.norm_squared();
    if (!(nn > 0.0)) {
        throw Error(ErrorKind::domain, "zero state");
    }
    for (auto &a : s.raw_amplitudes()) {
        a /= std::sqrt(nn);
    }
    return std::make_shared<detail::DenseSource>(std::move(s), seed);
}

/// Amplitudes of the hypergraph state, vertex v at bit v.
inline std::vector<Amp> hypergraph_amplitudes(const Hypergraph &h) {
    if (h.n_vertices > kDefaultWidthCap) {
        throw Error(ErrorKind::width_cap_exceeded, "dense hypergraph state too wide");
    }
    std::size_t dim = std::size_t{1} << h.n_vertices;
    std::vector<std::size_t> masks;
    for (const auto &e : h.edges) {
        std::size_t m = 0;
        for (Vertex v : e) {
            m |= std::size_t{1} << v;
        }
        masks.push_back(m);
    }
    double a = 1.0 / std::sqrt(static_cast<double>(dim));
    std::vector<Amp> out(dim);
    for (std::size_t i = 0; i < dim; i++) {
        int sign = 0;
        for (std::size_t m : masks) {
            sign ^= (i & m) == m;
        }
        out[i] = Amp{sign ? -a : a};
    }
    return out;
}

/// ell + 1 with ell = ceil(chi (1 - delta) / (delta eps)).
inline std::size_t required_registers(std::size_t chi, double delta, double eps) {
    if (chi < 1 || !(delta > 0.0 && delta < 1.0) || !(eps > 0.0 && eps <= 1.0)) {
        throw Error(ErrorKind::domain, "need chi >= 1, 0 < delta < 1, 0 < eps <= 1");
    }
    double x = static_cast<double>(chi) * (1.0 - delta) / (delta * eps);
    // 3 * 0.9 / 0.01 lands a hair above 270 in binary
    double ell = std::ceil(x * (1.0 - 1e-12));
    if (ell > 1e15) {
        throw Error(ErrorKind::domain, "register count overflows");
    }
    return static_cast<std::size_t>(ell) + 1;
}

struct ColorTestResult {
    bool pass = true;
    std::vector<Vertex> failing;
};

/// Stabilizer parity check on every vertex of color i (0-based).
inline ColorTestResult check_color_test(const Hypergraph &h, const Coloring &c, int i,
                                        std::span<const std::int8_t> outcomes) {
    if (outcomes.size() != h.n_vertices || c.color_of.size() != h.n_vertices) {
        throw Error(ErrorKind::length_mismatch, "outcomes and coloring must cover every vertex");
    }
    if (i < 0 || i >= c.k) {
        throw Error(ErrorKind::index_out_of_range, "color " + std::to_string(i) + " outside 0.." + std::to_string(c.k - 1));
    }
    for (std::size_t v = 0; v < outcomes.size(); v++) {
        if (outcomes[v] != 0 && outcomes[v] != 1) {
            throw Error(ErrorKind::incomplete_outcomes, "vertex " + std::to_string(v) + " has no outcome");
        }
    }
    std::vector<int> parity(h.n_vertices, 0);
    for (std::size_t v = 0; v < h.n_vertices; v++) {
        if (c.color_of[v] == i) {
            parity[v] = outcomes[v];
        }
    }
    for (const auto &e : h.edges) {
        for (Vertex j : e) {
            if (c.color_of[j] != i) {
                continue;
            }
            int prod = 1;
            for (Vertex k : e) {
                if (k != j) {
                    prod &= outcomes[k];
                }
            }
            parity[j] ^= prod;
        }
    }
    ColorTestResult r;
    for (std::size_t v = 0; v < h.n_vertices; v++) {
        if (c.color_of[v] == i && parity[v]) {
            r.pass = false;
            r.failing.push_back(static_cast<Vertex>(v));
        }
    }
    return r;
}

struct TestRecord {
    std::size_t register_id = 0;
    int color = 0;
    std::vector<std::int8_t> outcomes;
    bool pass = false;
    std::vector<Vertex> failing;
};

/// Measures the whole register in vertex order under color test i and checks it.
inline TestRecord run_color_test(RegisterSession &s, const Hypergraph &h, const Coloring &c, int i,
                                 std::size_t register_id) {
    TestRecord r;
    r.register_id = register_id;
    r.color = i;
    r.outcomes.assign(h.n_vertices, -1);
    for (Vertex v = 0; v < h.n_vertices; v++) {
        r.outcomes[v] = static_cast<std::int8_t>(s.measure(v, c.color_of[v] == i ? Basis::X : Basis::Z) & 1);
    }
    auto res = check_color_test(h, c, i, r.outcomes);
    r.pass = res.pass;
    r.failing = std::move(res.failing);
    return r;
}

struct CoverResult {
    bool accepted = false;
    std::size_t reserved = 0;  // 1-based
    std::size_t ell = 0;
    int chi = 0;
    double delta = 0, eps = 0;
    std::vector<TestRecord> records;
};

/// Cover protocol; stops at the first failing register.
inline CoverResult cover_protocol(RegisterSource &src, const Hypergraph &h, const Coloring &c, double delta,
                                  double eps, Rng &rng) {
    if (!is_valid_coloring(h, c)) {
        throw Error(ErrorKind::invalid_coloring, "cover protocol needs a valid coloring");
    }
    CoverResult r;
    r.chi = c.k;
    r.delta = delta;
    r.eps = eps;
    r.ell = required_registers(static_cast<std::size_t>(c.k), delta, eps) - 1;
    r.reserved = static_cast<std::size_t>(rng.below(r.ell + 1)) + 1;
    r.accepted = true;
    for (std::size_t reg = 1; reg <= r.ell + 1; reg++) {
        if (reg == r.reserved) {
            continue;
        }
        auto session = src.open();
        int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.k)));
        r.records.push_back(run_color_test(*session, h, c, i, reg));
        if (!r.records.back().pass) {
            r.accepted = false;
            break;
        }
    }
    return r;
}

inline std::string format_cover_report(const CoverResult &r) {
    std::ostringstream out;
    for (const auto &t : r.records) {
        out << "register=" << t.register_id << " color=" << t.color + 1 << " pass=" << (t.pass ? 1 : 0) << " failing=";
        if (t.failing.empty()) {
            out << '-';
        }
        for (std::size_t k = 0; k < t.failing.size(); k++) {
            out << (k ? "," : "") << t.failing[k];
        }
        out << "\n";
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "verdict=%s reserved=%zu chi=%d delta=%g eps=%g ell=%zu\n",
                  r.accepted ? "accept" : "reject", r.reserved, r.chi, r.delta, r.eps, r.ell);
    out << buf;
    return out.str();
}

}  // namespace hxz

#endif
