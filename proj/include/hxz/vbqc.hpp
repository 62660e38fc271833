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


#ifndef HXZ_VBQC_HPP
#define HXZ_VBQC_HPP

#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hxz/builder.hpp"
#include "hxz/circuit.hpp"
#include "hxz/compiler.hpp"
#include "hxz/engine.hpp"
#include "hxz/errors.hpp"
#include "hxz/frame.hpp"
#include "hxz/hypergraph.hpp"
#include "hxz/rng.hpp"
#include "hxz/statevec.hpp"
#include "hxz/verifier.hpp"

namespace hxz {

/// The only direction a message can travel.
enum class Direction { server_to_client };

/// QubitDelivery: hands the client measurement authority over one vertex.
struct Message {
    Direction direction = Direction::server_to_client;
    std::uint64_t seq = 0;
    std::size_t register_id = 0;  // 1-based
    Vertex vertex = 0;
    std::shared_ptr<RegisterSession> payload;
};

/// In-process FIFO. capacity 0 means unbounded.
class Channel {
   public:
    explicit Channel(std::size_t capacity = 0) : cap_(capacity) {
    }

    void send(Message m) {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return closed_ || cap_ == 0 || q_.size() < cap_; });
        if (closed_) {
            throw Error(ErrorKind::channel_closed, "send on a closed channel");
        }
        q_.push_back(std::move(m));
        sent_++;
        cv_.notify_all();
    }

    /// Blocks until a message arrives; channel-closed once closed and drained.
    Message recv() {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return closed_ || !q_.empty(); });
        if (q_.empty()) {
            throw Error(ErrorKind::channel_closed, "recv on a closed channel");
        }
        Message m = std::move(q_.front());
        q_.pop_front();
        cv_.notify_all();
        return m;
    }

    void close() {
        std::lock_guard lk(mu_);
        closed_ = true;
        cv_.notify_all();
    }

    std::uint64_t sent() const {
        std::lock_guard lk(mu_);
        return sent_;
    }

   private:
    std::size_t cap_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<Message> q_;
    bool closed_ = false;
    std::uint64_t sent_ = 0;
};

struct ServerSpec {
    enum class Kind { honest, flip, zero } kind = Kind::honest;
    double p = 1.0;
};

/// "honest", "flip", "flip:<p>" or "zero".
inline ServerSpec parse_server_spec(const std::string &s) {
    ServerSpec spec;
    if (s == "honest") {
        return spec;
    }
    if (s == "zero") {
        spec.kind = ServerSpec::Kind::zero;
        return spec;
    }
    if (s == "flip" || s.rfind("flip:", 0) == 0) {
        spec.kind = ServerSpec::Kind::flip;
        if (s.size() > 5) {
            std::size_t used = 0;
            try {
                spec.p = std::stod(s.substr(5), &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used != s.size() - 5 || !(spec.p >= 0.0 && spec.p <= 1.0)) {
                throw Error(ErrorKind::domain, "bad flip probability in '" + s + "'");
            }
        }
        return spec;
    }
    throw Error(ErrorKind::domain, "unknown server '" + s + "'");
}

inline std::string format_server_spec(const ServerSpec &s) {
    switch (s.kind) {
        case ServerSpec::Kind::honest: return "honest";
        case ServerSpec::Kind::zero: return "zero";
        case ServerSpec::Kind::flip: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "flip:%g", s.p);
            return buf;
        }
    }
    return "?";
}

/// Emits every vertex of register 1, then register 2, and so on.
class Server {
   public:
    Server(const Hypergraph &h, std::size_t registers, ServerSpec spec, std::uint64_t seed,
           std::size_t width_cap = kDefaultWidthCap)
        : h_(h), registers_(registers), spec_(spec), seed_(seed), cap_(width_cap) {
    }

    bool done() const {
        return reg_ > registers_;
    }

    Message next() {
        if (done()) {
            throw Error(ErrorKind::protocol_violation, "server has nothing left to send");
        }
        if (vertex_ == 0) {
            session_ = open(reg_);
        }
        Message m{Direction::server_to_client, seq_++, reg_, vertex_, session_};
        log_.push_back("seq=" + std::to_string(m.seq) + " register=" + std::to_string(m.register_id) +
                       " vertex=" + std::to_string(m.vertex));
        if (++vertex_ == h_.n_vertices) {
            vertex_ = 0;
            reg_++;
            session_.reset();
        }
        return m;
    }

    const std::vector<std::string> &log() const {
        return log_;
    }

   private:
    std::shared_ptr<RegisterSession> open(std::size_t reg) {
        if (spec_.kind == ServerSpec::Kind::zero) {
            return std::make_shared<detail::ConstantSession>(h_.n_vertices, 0);
        }
        auto s = std::make_shared<detail::LazyGraphSession>(h_, Rng(seed_, 2 * reg), cap_);
        if (spec_.kind == ServerSpec::Kind::flip) {
            return std::make_shared<detail::FlipSession>(s, spec_.p, Rng(seed_, 2 * reg + 1));
        }
        return s;
    }

    const Hypergraph &h_;
    std::size_t registers_;
    ServerSpec spec_;
    std::uint64_t seed_;
    std::size_t cap_;
    std::size_t reg_ = 1;
    Vertex vertex_ = 0;
    std::uint64_t seq_ = 0;
    std::shared_ptr<RegisterSession> session_;
    std::vector<std::string> log_;
};

/// Client: tests ell registers and computes on the reserved one.
class Client {
   public:
    enum class Phase { choosing_reserve, receiving, testing, running, done };

    Client(const Circuit &c, const Block &b, const Coloring &col, std::size_t ell, Rng rng)
        : b_(b), col_(col), ell_(ell), rng_(rng), plan_(compile(c, b)) {
        auto tape = schedule(b, plan_);
        for (const auto &ins : tape.ops) {
            if (ins.op == Instruction::Op::Measure) {
                order_.push_back(ins.index);
            }
        }
        reserved_ = static_cast<std::size_t>(rng_.below(ell_ + 1)) + 1;
        phase_ = Phase::receiving;
    }

    void receive(const Message &m) {
        if (phase_ == Phase::done) {
            throw Error(ErrorKind::protocol_violation, "message after the last register");
        }
        if (m.register_id != reg_ || m.vertex != static_cast<Vertex>(seqs_.size())) {
            throw Error(ErrorKind::protocol_violation,
                        "expected register " + std::to_string(reg_) + " vertex " + std::to_string(seqs_.size()) +
                            ", got register " + std::to_string(m.register_id) + " vertex " +
                            std::to_string(m.vertex));
        }
        if (!m.payload || (!seqs_.empty() && m.payload != payload_)) {
            throw Error(ErrorKind::protocol_violation, "register payload changed mid-register");
        }
        payload_ = m.payload;
        seqs_.push_back(m.seq);
        if (seqs_.size() < b_.h.n_vertices) {
            return;
        }
        if (rejected_) {
            for (Vertex v = 0; v < b_.h.n_vertices; v++) {
                log_line(v, std::nullopt, 0);
            }
        } else if (reg_ == reserved_) {
            phase_ = Phase::running;
            compute();
        } else {
            phase_ = Phase::testing;
            test();
        }
        seqs_.clear();
        payload_.reset();
        phase_ = reg_ == ell_ + 1 ? Phase::done : Phase::receiving;
        reg_++;
    }

    Phase phase() const {
        return phase_;
    }
    bool finished() const {
        return phase_ == Phase::done;
    }
    bool accepted() const {
        return phase_ == Phase::done && !rejected_;
    }
    std::size_t reserved() const {
        return reserved_;
    }
    const std::vector<std::string> &log() const {
        return log_;
    }
    const std::vector<TestRecord> &records() const {
        return records_;
    }
    const std::vector<int> &output_bits() const {
        return bits_;
    }
    const PauliFrame &frame() const {
        return frame_;
    }
    const std::optional<StateVector> &logical_output() const {
        return logical_;
    }

   private:
    void log_line(Vertex v, std::optional<Basis> basis, int bit) {
        std::string s = "seq=" + std::to_string(seqs_[v]) + " register=" + std::to_string(reg_) +
                        " vertex=" + std::to_string(v);
        if (basis) {
            s += std::string(" basis=") + basis_char(*basis) + " outcome=" + std::to_string(bit);
        }
        log_.push_back(std::move(s));
    }

    void test() {
        // i is drawn only now, after the register is complete
        int i = static_cast<int>(rng_.below(static_cast<std::uint64_t>(col_.k)));
        TestRecord r;
        r.register_id = reg_;
        r.color = i;
        r.outcomes.assign(b_.h.n_vertices, -1);
        for (Vertex v = 0; v < b_.h.n_vertices; v++) {
            Basis basis = col_.color_of[v] == i ? Basis::X : Basis::Z;
            int bit = payload_->measure(v, basis) & 1;
            r.outcomes[v] = static_cast<std::int8_t>(bit);
            log_line(v, basis, bit);
        }
        auto res = check_color_test(b_.h, col_, i, r.outcomes);
        r.pass = res.pass;
        r.failing = std::move(res.failing);
        rejected_ = !r.pass;
        records_.push_back(std::move(r));
    }

    void compute() {
        FrameTracker tracker(b_.h, b_.input_ports, b_.output_ports);
        std::vector<std::int8_t> outcomes(b_.h.n_vertices, -1);
        auto measure = [&](Vertex v, Basis basis) {
            int bit = payload_->measure(v, basis) & 1;
            log_line(v, basis, bit);
            return Outcome{static_cast<Handle>(v), basis, bit, 0.0};
        };
        for (std::size_t s : order_) {
            run_stage(plan_.stages[s], tracker, outcomes, measure);
        }
        tracker.finish();
        frame_ = tracker.frame();
        logical_ = payload_->peek(b_.output_ports);
        if (logical_) {
            unwind(*logical_, frame_);
        }
        // logical Z readout through the frame X^x Z^z H^h
        for (std::size_t w = 0; w < b_.output_ports.size(); w++) {
            bool h = frame_.h[w];
            Basis basis = h ? Basis::X : Basis::Z;
            int bit = measure(b_.output_ports[w], basis).bit;
            bits_.push_back(bit ^ (h ? frame_.z[w] : frame_.x[w]));
        }
    }

    const Block &b_;
    const Coloring &col_;
    std::size_t ell_;
    Rng rng_;
    MeasurementPlan plan_;
    std::vector<std::size_t> order_;
    std::size_t reserved_ = 0;
    Phase phase_ = Phase::choosing_reserve;
    std::size_t reg_ = 1;
    std::vector<std::uint64_t> seqs_;
    std::shared_ptr<RegisterSession> payload_;
    bool rejected_ = false;
    std::vector<TestRecord> records_;
    std::vector<std::string> log_;
    std::vector<int> bits_;
    PauliFrame frame_;
    std::optional<StateVector> logical_;
};

struct VbqcOptions {
    std::size_t width_cap = kDefaultWidthCap;
    bool threaded = false;
    std::size_t channel_capacity = 0;
};

struct VbqcResult {
    bool accepted = false;
    std::size_t reserved = 0;
    std::size_t ell = 0;
    int chi = 0;
    double delta = 0, eps = 0;
    std::vector<int> output_bits;
    PauliFrame frame;
    std::optional<StateVector> logical_output;
    /// Against the circuit applied to |+...+>; NaN unless accepted with a state to compare.
    double oracle_fidelity = std::numeric_limits<double>::quiet_NaN();
    std::vector<TestRecord> records;
    std::vector<std::string> client_log, server_log;
    std::uint64_t messages = 0;
    std::uint64_t client_to_server = 0;
};

/// Seeds: client draws from stream 1 of `seed`, the server from stream 2.
inline VbqcResult run_vbqc(const Circuit &c, std::size_t n, std::size_t d, double delta, double eps,
                           const ServerSpec &spec, std::uint64_t seed, const VbqcOptions &opt = {}) {
    Block b = build_gnd(n, d);
    Coloring col = build_coloring(b);
    VbqcResult r;
    r.chi = col.k;
    r.delta = delta;
    r.eps = eps;
    r.ell = required_registers(static_cast<std::size_t>(col.k), delta, eps) - 1;
    Client client(c, b, col, r.ell, Rng(seed, 1));
    Server server(b.h, r.ell + 1, spec, stream_seed(seed, 2), opt.width_cap);
    Channel ch(opt.channel_capacity);
    std::vector<Message> transcript;
    if (opt.threaded) {
        std::thread t([&] {
            try {
                while (!server.done()) {
                    ch.send(server.next());
                }
            } catch (const Error &) {
                // client hung up
            }
            ch.close();
        });
        try {
            while (!client.finished()) {
                Message m = ch.recv();
                transcript.push_back(m);
                client.receive(m);
            }
        } catch (...) {
            ch.close();
            t.join();
            throw;
        }
        t.join();
    } else {
        while (!server.done()) {
            ch.send(server.next());
            Message m = ch.recv();
            transcript.push_back(m);
            client.receive(m);
        }
        ch.close();
    }
    if (!client.finished()) {
        throw Error(ErrorKind::protocol_violation, "server stopped before the last register");
    }
    r.messages = transcript.size();
    for (const auto &m : transcript) {
        r.client_to_server += m.direction != Direction::server_to_client;
    }
    r.accepted = client.accepted();
    r.reserved = client.reserved();
    r.records = client.records();
    r.output_bits = client.output_bits();
    r.frame = client.frame();
    r.logical_output = client.logical_output();
    if (r.accepted && r.logical_output) {
        std::vector<QubitState> plus(n, kPlus);
        StateVector want = oracle_run(c, StateVector::product(plus, opt.width_cap));
        r.oracle_fidelity = fidelity(*r.logical_output, want.amplitudes());
    }
    r.client_log = client.log();
    char buf[200];
    std::snprintf(buf, sizeof buf, "verdict=%s reserved=%zu n=%zu d=%zu delta=%g eps=%g ell=%zu",
                  r.accepted ? "accept" : "reject", r.reserved, n, d, delta, eps, r.ell);
    r.client_log.push_back(buf);
    r.server_log = server.log();
    std::snprintf(buf, sizeof buf, "verdict=- server=%s n=%zu d=%zu delta=%g eps=%g ell=%zu",
                  format_server_spec(spec).c_str(), n, d, delta, eps, r.ell);
    r.server_log.push_back(buf);
    return r;
}

inline std::string format_transcript(const std::vector<std::string> &lines) {
    std::string out;
    for (const auto &l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

}  // namespace hxz

#endif
