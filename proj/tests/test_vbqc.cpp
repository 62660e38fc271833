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


#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "hxz/oracles.hpp"
#include "hxz/vbqc.hpp"
#include "support.hpp"

namespace hxz {
namespace {

using testing::kind_of;

const ServerSpec kHonest{};

TEST(Channel, FifoAcrossThreads) {
    Channel ch(16);
    std::thread producer([&] {
        for (std::uint64_t k = 0; k < 10000; k++) {
            ch.send(Message{Direction::server_to_client, k, 1, 0, nullptr});
        }
        ch.close();
    });
    std::uint64_t expect = 0;
    for (;;) {
        try {
            Message m = ch.recv();
            ASSERT_EQ(m.seq, expect++);
        } catch (const Error &e) {
            EXPECT_EQ(e.kind(), ErrorKind::channel_closed);
            break;
        }
    }
    producer.join();
    EXPECT_EQ(expect, 10000u);
    EXPECT_EQ(ch.sent(), 10000u);
}

TEST(Channel, ClosedChannel) {
    Channel ch;
    ch.send(Message{});
    ch.close();
    EXPECT_NO_THROW(ch.recv());
    EXPECT_EQ(kind_of([&] { ch.recv(); }), ErrorKind::channel_closed);
    EXPECT_EQ(kind_of([&] { ch.send(Message{}); }), ErrorKind::channel_closed);
}

struct Fixture {
    Block b = build_block_g31();
    Coloring col = build_coloring(b);
    Circuit c = parse_circuit("CCZ 0 1 2\n");
};

TEST(Client, RejectsInterleavedRegisters) {
    Fixture f;
    Client client(f.c, f.b, f.col, 6, Rng(1));
    Server server(f.b.h, 7, kHonest, 2);
    client.receive(server.next());
    Message m = server.next();
    m.register_id = 2;
    EXPECT_EQ(kind_of([&] { client.receive(m); }), ErrorKind::protocol_violation);
}

TEST(Client, RejectsSkippedVerticesAndSwappedPayloads) {
    Fixture f;
    Client client(f.c, f.b, f.col, 6, Rng(1));
    Server server(f.b.h, 7, kHonest, 2);
    Server other(f.b.h, 7, kHonest, 3);
    client.receive(server.next());
    server.next();
    EXPECT_EQ(kind_of([&] { client.receive(server.next()); }), ErrorKind::protocol_violation);

    Client c2(f.c, f.b, f.col, 6, Rng(1));
    Server s2(f.b.h, 7, kHonest, 2);
    c2.receive(s2.next());
    other.next();
    Message swapped = other.next();
    EXPECT_EQ(kind_of([&] { c2.receive(swapped); }), ErrorKind::protocol_violation);
}

TEST(Client, ReservesBeforeAnyMessageAndCoversTheRange) {
    Fixture f;
    std::set<std::size_t> seen;
    for (std::uint64_t s = 0; s < 200; s++) {
        Client client(f.c, f.b, f.col, 6, Rng(s, 1));
        EXPECT_EQ(client.phase(), Client::Phase::receiving);
        EXPECT_GE(client.reserved(), 1u);
        EXPECT_LE(client.reserved(), 7u);
        seen.insert(client.reserved());
    }
    EXPECT_EQ(seen.size(), 7u);
}

TEST(Server, RefusesToRunPastTheEnd) {
    Fixture f;
    Server server(f.b.h, 1, kHonest, 2);
    for (std::size_t v = 0; v < f.b.h.n_vertices; v++) {
        server.next();
    }
    EXPECT_TRUE(server.done());
    EXPECT_EQ(kind_of([&] { server.next(); }), ErrorKind::protocol_violation);
}

TEST(ServerSpec, Parsing) {
    EXPECT_EQ(parse_server_spec("honest").kind, ServerSpec::Kind::honest);
    EXPECT_EQ(parse_server_spec("zero").kind, ServerSpec::Kind::zero);
    ServerSpec f = parse_server_spec("flip");
    EXPECT_EQ(f.kind, ServerSpec::Kind::flip);
    EXPECT_EQ(f.p, 1.0);
    EXPECT_EQ(parse_server_spec("flip:0.25").p, 0.25);
    EXPECT_EQ(format_server_spec(parse_server_spec("flip:0.25")), "flip:0.25");
    EXPECT_EQ(kind_of([] { parse_server_spec("flip:2"); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { parse_server_spec("flip:x"); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { parse_server_spec("evil"); }), ErrorKind::domain);
}

TEST(Vbqc, HonestCczAccepts) {
    VbqcResult r = run_vbqc(parse_circuit("CCZ 0 1 2\n"), 3, 1, 0.5, 0.5, kHonest, 7);
    EXPECT_TRUE(r.accepted);
    EXPECT_EQ(r.ell, 6u);
    EXPECT_EQ(r.records.size(), 6u);
    ASSERT_TRUE(r.logical_output.has_value());
    EXPECT_NEAR(r.oracle_fidelity, 1.0, 1e-10);
    EXPECT_EQ(r.output_bits.size(), 3u);
    EXPECT_EQ(r.messages, 7u * 66u);
    EXPECT_EQ(r.client_to_server, 0u);
}

TEST(Vbqc, CompletenessOverManySeeds) {
    Circuit c = parse_circuit("CCZ 0 1 2\n");
    for (std::uint64_t seed = 0; seed < 200; seed++) {
        VbqcResult r = run_vbqc(c, 3, 1, 0.5, 0.5, kHonest, seed);
        ASSERT_TRUE(r.accepted) << seed;
        ASSERT_GE(r.oracle_fidelity, 1 - 1e-10) << seed;
        ASSERT_EQ(r.client_to_server, 0u);
    }
}

TEST(Vbqc, DeeperCircuitAccepts) {
    Circuit c = parse_circuit("CCZ 0 1 2\nH 0 ; H 2\n");
    VbqcResult r = run_vbqc(c, 3, 2, 0.5, 0.5, kHonest, 11);
    EXPECT_TRUE(r.accepted);
    EXPECT_NEAR(r.oracle_fidelity, 1.0, 1e-10);
}

TEST(Vbqc, ReadoutIsTheLogicalZBasis) {
    // H on |+> gives |0>, so every readout bit is 0
    Circuit c = parse_circuit("H 0 ; H 1 ; H 2\n");
    for (std::uint64_t seed = 0; seed < 20; seed++) {
        VbqcResult r = run_vbqc(c, 3, 1, 0.5, 0.5, kHonest, seed);
        ASSERT_TRUE(r.accepted);
        EXPECT_EQ(r.output_bits, (std::vector<int>{0, 0, 0})) << seed;
    }
    // on CCZ|+++> each bit is uniform
    int ones = 0;
    for (std::uint64_t seed = 0; seed < 200; seed++) {
        ones += run_vbqc(parse_circuit("CCZ 0 1 2\n"), 3, 1, 0.5, 0.5, kHonest, seed).output_bits[0];
    }
    EXPECT_GT(ones, 60);
    EXPECT_LT(ones, 140);
}

TEST(Vbqc, FlippingServerIsRejected) {
    Block b = build_block_g31();
    Coloring col = build_coloring(b);
    double q = 0;
    for (int i = 0; i < col.k; i++) {
        q += oracle::all_flip_pass_probability(b.h, col.color_of, i) / col.k;
    }
    const double delta = 0.5;
    double exact_reject = 1 - std::pow(q, 6.0);
    const int runs = 200;
    int rejects = 0;
    for (std::uint64_t seed = 0; seed < runs; seed++) {
        VbqcResult r = run_vbqc(parse_circuit("CCZ 0 1 2\n"), 3, 1, delta, 0.5, ServerSpec{ServerSpec::Kind::flip, 1.0},
                                seed);
        rejects += !r.accepted;
        EXPECT_TRUE(std::isnan(r.oracle_fidelity) || r.accepted);
    }
    double rate = rejects / static_cast<double>(runs);
    double sigma = std::sqrt(std::max(exact_reject * (1 - exact_reject), 0.5 / runs) / runs);
    EXPECT_GE(rate, 1 - delta - 3 * sigma);
    EXPECT_NEAR(rate, exact_reject, 3 * sigma);
}

TEST(Vbqc, PartialFlipsAreUsuallyCaught) {
    int rejects = 0;
    for (std::uint64_t seed = 0; seed < 50; seed++) {
        rejects += !run_vbqc(parse_circuit("CCZ 0 1 2\n"), 3, 1, 0.5, 0.5, parse_server_spec("flip:0.2"), seed).accepted;
    }
    EXPECT_GE(rejects, 45);
}

TEST(Vbqc, AllZeroServerPassesTestsButHoldsNoState) {
    // all-zero answers satisfy every parity check
    VbqcResult r = run_vbqc(parse_circuit("CCZ 0 1 2\n"), 3, 1, 0.5, 0.5, ServerSpec{ServerSpec::Kind::zero, 1.0}, 3);
    EXPECT_TRUE(r.accepted);
    EXPECT_FALSE(r.logical_output.has_value());
    EXPECT_TRUE(std::isnan(r.oracle_fidelity));
}

TEST(Vbqc, ServerTranscriptDoesNotDependOnTheCircuit) {
    VbqcResult a = run_vbqc(parse_circuit("CCZ 0 1 2\n"), 3, 1, 0.5, 0.5, kHonest, 17);
    VbqcResult b = run_vbqc(parse_circuit("H 1\n", 3), 3, 1, 0.5, 0.5, kHonest, 17);
    EXPECT_EQ(a.server_log, b.server_log);
    EXPECT_EQ(a.messages, b.messages);
}

TEST(Vbqc, DeterministicAndThreadIndependent) {
    Circuit c = parse_circuit("CCZ 0 1 2\n");
    VbqcResult a = run_vbqc(c, 3, 1, 0.5, 0.5, parse_server_spec("flip:0.01"), 19);
    VbqcResult b = run_vbqc(c, 3, 1, 0.5, 0.5, parse_server_spec("flip:0.01"), 19);
    VbqcOptions threaded;
    threaded.threaded = true;
    threaded.channel_capacity = 8;
    VbqcResult t = run_vbqc(c, 3, 1, 0.5, 0.5, parse_server_spec("flip:0.01"), 19, threaded);
    EXPECT_EQ(a.client_log, b.client_log);
    EXPECT_EQ(a.client_log, t.client_log);
    EXPECT_EQ(a.server_log, t.server_log);
    EXPECT_EQ(a.accepted, t.accepted);
}

TEST(Vbqc, TranscriptFormat) {
    VbqcResult r = run_vbqc(parse_circuit("CCZ 0 1 2\n"), 3, 1, 0.5, 0.5, ServerSpec{ServerSpec::Kind::flip, 1.0}, 23);
    ASSERT_FALSE(r.accepted);
    EXPECT_EQ(r.client_log.size(), 7u * 66u + 1);
    EXPECT_EQ(r.client_log.back(), "verdict=reject reserved=" + std::to_string(r.reserved) +
                                       " n=3 d=1 delta=0.5 eps=0.5 ell=6");
    EXPECT_EQ(r.server_log.back(), "verdict=- server=flip:1 n=3 d=1 delta=0.5 eps=0.5 ell=6");
    EXPECT_EQ(r.server_log[1], "seq=1 register=1 vertex=1");
    // registers after the rejection carry no basis or outcome
    const std::string &last = r.client_log[r.client_log.size() - 2];
    if (r.records.back().register_id < 7) {
        EXPECT_EQ(last.find("basis="), std::string::npos);
    }
    // the computed register is logged in measurement order, the rest in delivery order
    std::vector<std::uint64_t> seqs;
    for (std::size_t k = 0; k + 1 < r.client_log.size(); k++) {
        std::uint64_t seq = 0, reg = 0, v = 0;
        ASSERT_EQ(std::sscanf(r.client_log[k].c_str(), "seq=%lu register=%lu vertex=%lu", &seq, &reg, &v), 3);
        EXPECT_EQ(seq, (reg - 1) * 66 + v);
        seqs.push_back(seq);
    }
    std::sort(seqs.begin(), seqs.end());
    for (std::size_t k = 0; k < seqs.size(); k++) {
        ASSERT_EQ(seqs[k], k);
    }
    EXPECT_EQ(format_transcript({"a", "b"}), "a\nb\n");
}

}  // namespace
}  // namespace hxz
