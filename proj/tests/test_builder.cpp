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

#include <set>

#include "hxz/builder.hpp"
#include "hxz/oracles.hpp"
#include "support.hpp"

namespace hxz {
namespace {

using testing::kind_of;

TEST(TripleIndex, FourQubitValues) {
    EXPECT_EQ(triple_index(4, {1, 2, 4}), 1u);
    EXPECT_EQ(triple_index(4, {1, 3, 4}), 2u);
    EXPECT_EQ(triple_index(4, {2, 3, 4}), 3u);
}

TEST(TripleIndex, Errors) {
    EXPECT_EQ(kind_of([] { triple_index(4, {1, 2, 3}); }), ErrorKind::excluded_triple);
    EXPECT_EQ(kind_of([] { triple_index(4, {2, 1, 3}); }), ErrorKind::invalid_triple);
    EXPECT_EQ(kind_of([] { triple_index(4, {1, 2, 5}); }), ErrorKind::invalid_triple);
    EXPECT_EQ(kind_of([] { triple_index(3, {1, 2, 3}); }), ErrorKind::domain);
}

TEST(TripleIndex, SevenQubitBijection) {
    std::set<std::size_t> seen;
    for (int i = 1; i <= 7; i++) {
        for (int j = i + 1; j <= 7; j++) {
            for (int k = j + 1; k <= 7; k++) {
                if (i == 1 && j == 2 && k == 3) {
                    continue;
                }
                std::size_t t = triple_index(7, {i, j, k});
                EXPECT_EQ(t, oracle::lex_rank(7, i, j, k)) << i << j << k;
                seen.insert(t);
            }
        }
    }
    EXPECT_EQ(seen.size(), binomial(7, 3) - 1);
    EXPECT_EQ(*seen.begin(), 1u);
    EXPECT_EQ(*seen.rbegin(), binomial(7, 3) - 1);
}

TEST(TripleIndex, MatchesLexicographicRankUpToEight) {
    for (std::size_t n = 4; n <= 8; n++) {
        auto lex = lexicographic_triples(n);
        for (std::size_t r = 1; r < lex.size(); r++) {
            Triple t{lex[r][0] + 1, lex[r][1] + 1, lex[r][2] + 1};
            ASSERT_EQ(triple_index(n, t), r);
            ASSERT_EQ(oracle::lex_rank(n, t.i, t.j, t.k), r);
        }
    }
}

TEST(QubitCount, Examples) {
    EXPECT_EQ(qubit_count(3, 1), 66u);
    EXPECT_EQ(qubit_count(4, 1), 280u);
    EXPECT_EQ(qubit_count(4, 3), 848u);
    EXPECT_EQ(kind_of([] { qubit_count(2, 1); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { qubit_count(3, 0); }), ErrorKind::domain);
}

TEST(G31, Structure) {
    Block b = build_block_g31();
    EXPECT_EQ(b.h.n_vertices, 66u);
    EXPECT_EQ(b.h.count_arity(3), 1u);
    EXPECT_EQ(b.h.max_arity(), 3u);
    EXPECT_TRUE(validate(b.h).empty());
    ASSERT_EQ(b.n_wires, 3u);
    for (std::size_t w = 0; w < 3; w++) {
        EXPECT_EQ(b.h.meta_of(b.input_ports[w]).region, 1);
        EXPECT_EQ(b.h.meta_of(b.input_ports[w]).role, Role::input);
        EXPECT_EQ(b.h.meta_of(b.output_ports[w]).region, 5);
        EXPECT_EQ(b.h.meta_of(b.output_ports[w]).role, Role::output);
    }
    for (const auto &e : b.h.edges) {
        if (e.size() == 3) {
            for (Vertex v : e) {
                EXPECT_EQ(b.h.meta_of(v).region, 2);
            }
        }
    }
    // three region-4 parts: one correction pair plus one bypass each
    const auto &G = b.layout.layers.at(0).sub.at(0).gadget;
    std::set<std::pair<int, int>> pairs;
    for (const auto &part : G.part) {
        pairs.insert({part.pair[0], part.pair[1]});
        EXPECT_NE(part.bypass, part.pair[0]);
        EXPECT_NE(part.bypass, part.pair[1]);
        auto j = static_cast<std::size_t>(part.pair[0]), k = static_cast<std::size_t>(part.pair[1]);
        EXPECT_TRUE(b.h.has_edge({part.upper[j], part.upper[k]}));
        EXPECT_EQ(b.h.meta_of(part.upper[j]).region, 4);
    }
    EXPECT_EQ(pairs, (std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(G31, IdentityPatternKeepsPlusStates) {
    Block b = build_block_g31();
    Circuit c;
    c.n_qubits = 3;
    c.layers.emplace_back();
    MeasurementPlan p = compile(c, b);
    Rng rng(4);
    RunResult r = execute(b, p, schedule(b, p), {}, rng);
    std::vector<QubitState> plus(3, kPlus);
    EXPECT_NEAR(fidelity(r.unwound(), StateVector::product(plus).amplitudes()), 1.0, 1e-12);
}

TEST(Gn1, FourQubits) {
    Block b = build_gn1(4);
    EXPECT_EQ(b.h.n_vertices, 280u);
    ASSERT_EQ(b.layout.layers.size(), 1u);
    const auto &L = b.layout.layers[0];
    ASSERT_EQ(L.sub.size(), 4u);
    // (1,3,4) lands in the third sub-block
    EXPECT_EQ(L.sub[2].triple, (std::array<int, 3>{0, 2, 3}));
    EXPECT_EQ(L.sub[3].triple, (std::array<int, 3>{1, 2, 3}));
    EXPECT_TRUE(validate(b.h).empty());
}

TEST(Gn1, SubBlocksFollowTheIndexFormula) {
    for (std::size_t n = 4; n <= 6; n++) {
        Block b = build_gn1(n);
        const auto &L = b.layout.layers[0];
        ASSERT_EQ(L.sub.size(), binomial(n, 3));
        for (std::size_t s = 1; s < L.sub.size(); s++) {
            const auto &t = L.sub[s].triple;
            EXPECT_EQ(triple_index(n, {t[0] + 1, t[1] + 1, t[2] + 1}), s);
        }
    }
}

TEST(Gn1, FiveQubitsAndSmallCases) {
    EXPECT_EQ(build_gn1(5).h.n_vertices, 725u);
    EXPECT_EQ(build_gn1(3), build_block_g31());
    EXPECT_EQ(kind_of([] { build_gn1(2); }), ErrorKind::domain);
}

TEST(Gnd, Examples) {
    EXPECT_EQ(build_gnd(3, 2).h.n_vertices, 135u);
    Block b = build_gnd(4, 2);
    EXPECT_EQ(b.layout.layers.size(), 2u);
    ASSERT_EQ(b.columns.size(), 1u);
    EXPECT_EQ(b.columns.begin()->second.size(), 4u);
    for (std::size_t n = 3; n <= 5; n++) {
        EXPECT_EQ(build_gnd(n, 1), build_gn1(n));
    }
    EXPECT_EQ(kind_of([] { build_gnd(3, 0); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { build_gnd(2, 1); }), ErrorKind::domain);
}

TEST(Gnd, CountsArityAndPorts) {
    for (std::size_t n = 3; n <= 5; n++) {
        for (std::size_t d = 1; d <= 3; d++) {
            Block b = build_gnd(n, d);
            EXPECT_TRUE(validate(b.h).empty()) << n << "," << d;
            EXPECT_EQ(static_cast<long long>(b.h.n_vertices), oracle::vertex_count(static_cast<long long>(n),
                                                                                  static_cast<long long>(d)));
            EXPECT_EQ(b.h.n_vertices, qubit_count(n, d));
            EXPECT_EQ(b.h.max_arity(), 3u);
            EXPECT_EQ(b.h.count_arity(3), binomial(n, 3) * d);
            ASSERT_EQ(b.input_ports.size(), n);
            ASSERT_EQ(b.output_ports.size(), n);
            std::set<Vertex> in(b.input_ports.begin(), b.input_ports.end());
            for (Vertex v : b.output_ports) {
                EXPECT_FALSE(in.count(v));
                EXPECT_EQ(b.h.meta_of(v).role, Role::output);
            }
            for (Vertex v : b.input_ports) {
                EXPECT_EQ(b.h.meta_of(v).role, Role::input);
            }
        }
    }
}

TEST(BuildColoring, ThreeColorsMonochromaticPorts) {
    for (std::size_t n = 3; n <= 5; n++) {
        for (std::size_t d = 1; d <= 2; d++) {
            Block b = build_gnd(n, d);
            Coloring c = build_coloring(b);
            EXPECT_EQ(c.k, 3);
            EXPECT_TRUE(is_valid_coloring(b.h, c));
            EXPECT_EQ(std::set<int>(c.color_of.begin(), c.color_of.end()).size(), 3u);
            for (const auto &L : b.layout.layers) {
                for (const auto &s : L.sub) {
                    int red = c.color_of[s.gadget.wire[0].input];
                    for (const auto &w : s.gadget.wire) {
                        EXPECT_EQ(c.color_of[w.input], red);
                        EXPECT_EQ(c.color_of[w.output], red);
                    }
                }
            }
            int red = c.color_of[b.input_ports[0]];
            std::set<int> column_colors;
            for (const auto &[t, vs] : b.columns) {
                for (Vertex v : vs) {
                    column_colors.insert(c.color_of[v]);
                }
            }
            if (d > 1) {
                EXPECT_EQ(column_colors.size(), 1u);
                EXPECT_NE(*column_colors.begin(), red);
            }
        }
    }
}

TEST(PadWire, ZeroIsIdentityOddIsRejected) {
    Block b = build_block_g31();
    EXPECT_EQ(pad_wire(b, 1, 0), b);
    EXPECT_EQ(kind_of([&] { pad_wire(b, 1, 3); }), ErrorKind::odd_extra);
    EXPECT_EQ(kind_of([&] { pad_wire(b, 7, 2); }), ErrorKind::index_out_of_range);
}

TEST(PadWire, CountGrowsAndSemanticsSurvive) {
    Block b = build_block_g31();
    Block p = pad_wire(pad_wire(b, 0, 2), 2, 4);
    EXPECT_EQ(p.h.n_vertices, b.h.n_vertices + 6);
    EXPECT_TRUE(validate(p.h).empty());
    EXPECT_TRUE(is_valid_coloring(p.h, build_coloring(p)));
    for (const auto &c : single_layer_patterns()) {
        EXPECT_LE(testing::block_infidelity(b, c, 3, 4), 1e-10);
        EXPECT_LE(testing::block_infidelity(p, c, 3, 4), 1e-10);
    }
}

TEST(Binomial, SmallValues) {
    EXPECT_EQ(binomial(3, 3), 1u);
    EXPECT_EQ(binomial(8, 3), 56u);
    EXPECT_EQ(binomial(2, 3), 0u);
}

}  // namespace
}  // namespace hxz
