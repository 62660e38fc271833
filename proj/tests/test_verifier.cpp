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

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "hxz/oracles.hpp"
#include "hxz/verifier.hpp"
#include "support.hpp"

namespace hxz {
namespace {

using testing::kind_of;

Coloring rainbow(std::size_t n) {
    Coloring c;
    c.k = static_cast<int>(n);
    for (std::size_t v = 0; v < n; v++) {
        c.color_of.push_back(static_cast<int>(v));
    }
    return c;
}

Coloring path_coloring() {
    return Coloring{{0, 1, 0}, 2};
}

std::uint64_t xmask_of(const Coloring &c, int i) {
    std::uint64_t m = 0;
    for (std::size_t v = 0; v < c.color_of.size(); v++) {
        if (c.color_of[v] == i) {
            m |= std::uint64_t{1} << v;
        }
    }
    return m;
}

// Empirical distribution of the full outcome word under color test i.
std::vector<double> sampled(RegisterSource &src, const Hypergraph &h, const Coloring &c, int i, int samples) {
    std::vector<double> p(std::size_t{1} << h.n_vertices, 0.0);
    for (int k = 0; k < samples; k++) {
        auto s = src.open();
        TestRecord r = run_color_test(*s, h, c, i, 1);
        std::size_t key = 0;
        for (std::size_t v = 0; v < h.n_vertices; v++) {
            key |= static_cast<std::size_t>(r.outcomes[v]) << v;
        }
        p[key] += 1.0 / samples;
    }
    return p;
}

double tv(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        s += std::abs(a[i] - b[i]);
    }
    return s / 2;
}

double sampled_pass_rate(RegisterSource &src, const Hypergraph &h, const Coloring &c, int i, int samples) {
    int pass = 0;
    for (int k = 0; k < samples; k++) {
        auto s = src.open();
        pass += run_color_test(*s, h, c, i, 1).pass;
    }
    return pass / static_cast<double>(samples);
}

TEST(RequiredRegisters, Examples) {
    EXPECT_EQ(required_registers(3, 0.1, 0.1), 271u);
    EXPECT_EQ(required_registers(3, 0.5, 0.5), 7u);
    EXPECT_EQ(kind_of([] { required_registers(3, 0.0, 0.1); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { required_registers(3, 1.0, 0.1); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { required_registers(3, 0.5, 1.5); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { required_registers(3, 0.5, 0.0); }), ErrorKind::domain);
    EXPECT_EQ(kind_of([] { required_registers(0, 0.5, 0.5); }), ErrorKind::domain);
    EXPECT_EQ(required_registers(3, 0.5, 1.0), 4u);
}

TEST(RequiredRegisters, MatchesTheCeilingOnAGrid) {
    for (int a = 1; a < 20; a++) {
        for (int b = 1; b <= 20; b++) {
            for (std::size_t chi : {1u, 2u, 3u}) {
                double delta = a / 20.0, eps = b / 20.0;
                // exact rational arithmetic: chi (20 - a) 20 / (a b)
                long long num = static_cast<long long>(chi) * (20 - a) * 20, den = a * b;
                long long ell = (num + den - 1) / den;
                EXPECT_EQ(required_registers(chi, delta, eps), static_cast<std::size_t>(ell + 1))
                    << chi << " " << delta << " " << eps;
            }
        }
    }
}

TEST(RequiredRegisters, NonIncreasing) {
    for (int a = 1; a < 19; a++) {
        for (int b = 1; b < 20; b++) {
            double d = a / 20.0, e = b / 20.0;
            EXPECT_GE(required_registers(3, d, e), required_registers(3, d + 0.05, e));
            EXPECT_GE(required_registers(3, d, e), required_registers(3, d, e + 0.05));
        }
    }
}

TEST(ColorTest, Examples) {
    Hypergraph tri = oracle::ccz_triangle();
    Coloring c = rainbow(3);
    std::vector<std::int8_t> ok{0, 0, 1}, bad{0, 1, 1};
    EXPECT_TRUE(check_color_test(tri, c, 0, ok).pass);
    auto r = check_color_test(tri, c, 0, bad);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.failing, std::vector<Vertex>{0});

    Hypergraph edge(2);
    edge.add_edge({0, 1});
    std::vector<std::int8_t> ones{1, 1};
    EXPECT_TRUE(check_color_test(edge, Coloring{{0, 1}, 2}, 0, ones).pass);
}

TEST(ColorTest, Errors) {
    Hypergraph tri = oracle::ccz_triangle();
    Coloring c = rainbow(3);
    std::vector<std::int8_t> two{0, 0}, gap{0, -1, 1};
    EXPECT_EQ(kind_of([&] { check_color_test(tri, c, 0, two); }), ErrorKind::length_mismatch);
    std::vector<std::int8_t> full{0, 0, 0};
    EXPECT_EQ(kind_of([&] { check_color_test(tri, c, 3, full); }), ErrorKind::index_out_of_range);
    EXPECT_EQ(kind_of([&] { check_color_test(tri, c, 0, gap); }), ErrorKind::incomplete_outcomes);
}

TEST(ColorTest, AgreesWithBruteForceStabilizerCheck) {
    Rng rng(151);
    for (int g = 0; g < 20; g++) {
        Hypergraph h = testing::random_hypergraph(6, 5, rng);
        Coloring c = greedy_coloring(h);
        for (int i = 0; i < c.k; i++) {
            for (std::uint64_t y = 0; y < 64; y++) {
                std::vector<std::int8_t> o(6);
                for (std::size_t v = 0; v < 6; v++) {
                    o[v] = static_cast<std::int8_t>((y >> v) & 1);
                }
                ASSERT_EQ(check_color_test(h, c, i, o).pass, oracle::stabilized(h, c.color_of, i, y));
            }
        }
    }
}

TEST(ColorTest, FlippingOneXBitFlipsOnlyItsCheck) {
    Rng rng(157);
    for (int g = 0; g < 20; g++) {
        Hypergraph h = testing::random_hypergraph(7, 6, rng);
        Coloring c = greedy_coloring(h);
        ASSERT_TRUE(is_valid_coloring(h, c));
        int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.k)));
        std::vector<std::int8_t> o(7);
        for (auto &b : o) {
            b = static_cast<std::int8_t>(rng.bit());
        }
        auto base = check_color_test(h, c, i, o);
        for (Vertex j = 0; j < 7; j++) {
            if (c.color_of[j] != i) {
                continue;
            }
            auto f = o;
            f[j] ^= 1;
            auto r = check_color_test(h, c, i, f);
            std::set<Vertex> a(base.failing.begin(), base.failing.end()), b(r.failing.begin(), r.failing.end());
            std::set<Vertex> diff;
            std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(diff, diff.end()));
            EXPECT_EQ(diff, std::set<Vertex>{j});
        }
    }
}

TEST(HonestSource, PassesEveryColorTest) {
    Rng rng(163);
    for (int g = 0; g < 30; g++) {
        Hypergraph h = testing::random_hypergraph(10, 8, rng);
        Coloring c = greedy_coloring(h);
        auto src = honest_source(h, 163 + static_cast<std::uint64_t>(g));
        for (int i = 0; i < c.k; i++) {
            for (int k = 0; k < 10; k++) {
                auto s = src->open();
                EXPECT_TRUE(run_color_test(*s, h, c, i, 1).pass);
            }
        }
    }
    Block b = build_gnd(4, 2);
    Coloring c = build_coloring(b);
    auto src = honest_source(b.h, 5);
    for (int i = 0; i < 3; i++) {
        auto s = src->open();
        EXPECT_TRUE(run_color_test(*s, b.h, c, i, 1).pass);
    }
}

TEST(HonestSource, MatchesDenseDistribution) {
    struct Case {
        Hypergraph h;
        Coloring c;
    };
    std::vector<Case> cases{{oracle::ccz_triangle(), rainbow(3)}, {oracle::two_edge_path(), path_coloring()}};
    Rng rng(167);
    Hypergraph r = testing::random_hypergraph(5, 4, rng);
    cases.push_back({r, greedy_coloring(r)});
    for (const auto &[h, c] : cases) {
        auto amps = hypergraph_amplitudes(h);
        auto src = honest_source(h, 167);
        for (int i = 0; i < c.k; i++) {
            auto want = oracle::mixed_basis_distribution(amps, h.n_vertices, xmask_of(c, i));
            EXPECT_LT(tv(sampled(*src, h, c, i, 10000), want), 0.02) << "color " << i;
        }
    }
}

TEST(HonestSource, ZMarginalsAreUniform) {
    Hypergraph h = oracle::two_edge_path();
    Coloring c = path_coloring();
    auto src = honest_source(h, 173);
    // color 1 reads vertices 0 and 2 in Z
    std::vector<double> counts(4, 0);
    const int samples = 10000;
    for (int k = 0; k < samples; k++) {
        auto s = src->open();
        TestRecord r = run_color_test(*s, h, c, 1, 1);
        counts[static_cast<std::size_t>(r.outcomes[0] | (r.outcomes[2] << 1))]++;
    }
    double chi2 = 0, e = samples / 4.0;
    for (double n : counts) {
        chi2 += (n - e) * (n - e) / e;
    }
    boost::math::chi_squared dist(3);
    EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001);
}

TEST(HonestSource, RejectsXOnBothEndsOfAnEdge) {
    auto src = honest_source(oracle::two_edge_path(), 1);
    auto s = src->open();
    s->measure(0, Basis::X);
    EXPECT_EQ(kind_of([&] { s->measure(1, Basis::X); }), ErrorKind::invalid_coloring);
    auto t = src->open();
    t->measure(2, Basis::Z);
    EXPECT_EQ(kind_of([&] { t->measure(2, Basis::Z); }), ErrorKind::protocol_violation);
    EXPECT_EQ(kind_of([&] { t->measure(9, Basis::Z); }), ErrorKind::index_out_of_range);
}

TEST(LazySource, MatchesDenseDistributionAndPasses) {
    Hypergraph h = oracle::two_edge_path();
    Coloring c = path_coloring();
    auto amps = hypergraph_amplitudes(h);
    auto src = lazy_source(h, 179);
    for (int i = 0; i < 2; i++) {
        auto want = oracle::mixed_basis_distribution(amps, 3, xmask_of(c, i));
        EXPECT_LT(tv(sampled(*src, h, c, i, 10000), want), 0.02);
    }
    Block b = build_block_g31();
    Coloring bc = build_coloring(b);
    auto big = lazy_source(b.h, 181);
    for (int i = 0; i < 3; i++) {
        auto s = big->open();
        EXPECT_TRUE(run_color_test(*s, b.h, bc, i, 1).pass);
    }
}

TEST(LazySource, PeekReturnsTheLiveState) {
    Hypergraph h = oracle::ccz_triangle();
    auto s = lazy_source(h, 191)->open();
    std::vector<Vertex> all{0, 1, 2};
    auto st = s->peek(all);
    ASSERT_TRUE(st.has_value());
    EXPECT_NEAR(fidelity(*st, hypergraph_amplitudes(h)), 1.0, 1e-12);
    EXPECT_FALSE(constant_source(3, 0)->open()->peek(all).has_value());
}

TEST(CoverProtocol, HonestAlwaysAccepts) {
    Hypergraph h = oracle::ccz_triangle();
    Coloring c = rainbow(3);
    auto src = honest_source(h, 193);
    Rng rng(193);
    std::set<std::size_t> reserved;
    for (int k = 0; k < 1000; k++) {
        CoverResult r = cover_protocol(*src, h, c, 0.5, 0.5, rng);
        ASSERT_TRUE(r.accepted);
        EXPECT_EQ(r.ell, 6u);
        EXPECT_EQ(r.records.size(), 6u);
        reserved.insert(r.reserved);
    }
    EXPECT_EQ(reserved, (std::set<std::size_t>{1, 2, 3, 4, 5, 6, 7}));
    Block b = build_block_g31();
    auto big = honest_source(b.h, 197);
    Rng r2(197);
    EXPECT_TRUE(cover_protocol(*big, b.h, build_coloring(b), 0.2, 0.2, r2).accepted);
}

TEST(CoverProtocol, FlipNoiseMatchesExactRejection) {
    Hypergraph h = oracle::ccz_triangle();
    Coloring c = rainbow(3);
    auto amps = hypergraph_amplitudes(h);
    double q = 0;
    for (int i = 0; i < 3; i++) {
        q += oracle::color_test_pass_probability(amps, h, c.color_of, i, 0.5) / 3;
    }
    const std::size_t ell = required_registers(3, 0.5, 0.5) - 1;
    double exact = 1.0 - std::pow(q, static_cast<double>(ell));
    auto src = flip_source(honest_source(h, 199), 0.5, 211);
    Rng rng(199);
    const int runs = 10000;
    int rejects = 0;
    for (int k = 0; k < runs; k++) {
        rejects += !cover_protocol(*src, h, c, 0.5, 0.5, rng).accepted;
    }
    double rate = rejects / static_cast<double>(runs), sigma = std::sqrt(exact * (1 - exact) / runs);
    EXPECT_NEAR(q, 0.5, 1e-12);
    EXPECT_LE(std::abs(rate - exact), 3 * sigma) << rate << " vs " << exact;
}

TEST(CoverProtocol, AllZeroAnswersAccept) {
    // vertex 1 of the path has two edges; zero outcomes satisfy every check
    Hypergraph h = oracle::two_edge_path();
    auto src = constant_source(3, 0);
    Rng rng(223);
    for (int k = 0; k < 50; k++) {
        EXPECT_TRUE(cover_protocol(*src, h, path_coloring(), 0.3, 0.3, rng).accepted);
    }
    auto ones = constant_source(3, 1);
    // with all ones, vertex 1 reads 1 + 1 + 1 and fails; vertices 0, 2 read 1 + 1 and pass
    auto s = ones->open();
    EXPECT_FALSE(run_color_test(*s, h, path_coloring(), 1, 1).pass);
}

TEST(CoverProtocol, InvalidColoringAndDeterminism) {
    Hypergraph h = oracle::ccz_triangle();
    auto src = honest_source(h, 1);
    Rng rng(1);
    EXPECT_EQ(kind_of([&] { cover_protocol(*src, h, Coloring{{0, 0, 1}, 2}, 0.5, 0.5, rng); }),
              ErrorKind::invalid_coloring);
    auto run = [&] {
        auto s = flip_source(honest_source(h, 5), 0.3, 6);
        Rng r(7);
        return format_cover_report(cover_protocol(*s, h, rainbow(3), 0.2, 0.2, r));
    };
    EXPECT_EQ(run(), run());
    EXPECT_EQ(kind_of([&] { flip_source(src, 1.5, 1); }), ErrorKind::domain);
}

TEST(CoverProtocol, ReportFormat) {
    // Z on every vertex breaks every stabilizer
    Hypergraph h = oracle::ccz_triangle();
    auto amps = hypergraph_amplitudes(h);
    for (std::size_t x = 0; x < 8; x++) {
        if (std::popcount(x) % 2) {
            amps[x] = -amps[x];
        }
    }
    auto src = dense_source(amps, 3, 227);
    Rng rng(227);
    CoverResult r = cover_protocol(*src, h, rainbow(3), 0.5, 0.5, rng);
    EXPECT_FALSE(r.accepted);
    ASSERT_EQ(r.records.size(), 1u);
    std::string text = format_cover_report(r);
    int color = r.records[0].color;
    EXPECT_EQ(text, "register=" + std::to_string(r.records[0].register_id) + " color=" + std::to_string(color + 1) +
                        " pass=0 failing=" + std::to_string(color) + "\nverdict=reject reserved=" +
                        std::to_string(r.reserved) + " chi=3 delta=0.5 eps=0.5 ell=6\n");
}

TEST(DenseSource, IdealStateBehavesLikeHonest) {
    Hypergraph h = oracle::ccz_triangle();
    Coloring c = rainbow(3);
    auto amps = hypergraph_amplitudes(h);
    auto dense = dense_source(amps, 3, 229);
    auto honest = honest_source(h, 229);
    for (int i = 0; i < 3; i++) {
        EXPECT_LT(tv(sampled(*dense, h, c, i, 10000), sampled(*honest, h, c, i, 10000)), 0.03);
    }
}

TEST(DenseSource, ZeroStatePassesWithHalfPowerOfColorSize) {
    Hypergraph h = oracle::two_edge_path();
    Coloring c = path_coloring();
    std::vector<Amp> zero(8, Amp{0});
    zero[0] = 1;
    auto src = dense_source(zero, 3, 233);
    for (int i = 0; i < 2; i++) {
        int size = std::popcount(xmask_of(c, i));
        double exact = oracle::color_test_pass_probability(zero, h, c.color_of, i);
        EXPECT_NEAR(exact, std::pow(0.5, size), 1e-12);
        EXPECT_NEAR(sampled_pass_rate(*src, h, c, i, 4000), exact, 0.03);
    }
}

TEST(DenseSource, ZErrorFailsItsColorDeterministically) {
    Hypergraph h = oracle::two_edge_path();
    Coloring c = path_coloring();
    for (Vertex v = 0; v < 3; v++) {
        auto amps = hypergraph_amplitudes(h);
        for (std::size_t x = 0; x < amps.size(); x++) {
            if ((x >> v) & 1) {
                amps[x] = -amps[x];
            }
        }
        auto src = dense_source(amps, 3, 239);
        for (int i = 0; i < 2; i++) {
            double want = c.color_of[v] == i ? 0.0 : 1.0;
            EXPECT_NEAR(oracle::color_test_pass_probability(amps, h, c.color_of, i), want, 1e-12);
            EXPECT_EQ(sampled_pass_rate(*src, h, c, i, 200), want) << "v=" << v << " i=" << i;
        }
    }
}

TEST(DenseSource, FarStatesAreAcceptedRarely) {
    // states with fidelity below 1 - eps to the ideal one
    struct Case {
        Hypergraph h;
        Coloring c;
    };
    std::vector<Case> cases{{oracle::ccz_triangle(), rainbow(3)}, {oracle::two_edge_path(), path_coloring()}};
    const double delta = 0.3, eps = 0.3;
    Rng pick(241);
    for (const auto &[h, c] : cases) {
        auto ideal = hypergraph_amplitudes(h);
        for (int trial = 0; trial < 4; trial++) {
            std::vector<Amp> amps(ideal.size());
            double f = 1;
            do {
                for (auto &a : amps) {
                    a = Amp{pick.normal(), pick.normal()};
                }
                StateVector s(kDefaultWidthCap);
                for (std::size_t v = 0; v < h.n_vertices; v++) {
                    s.activate(kZero);
                }
                s.raw_amplitudes() = amps;
                f = fidelity(s, ideal);
            } while (f >= 1 - eps);
            double q = 0;
            for (int i = 0; i < c.k; i++) {
                q += oracle::color_test_pass_probability(amps, h, c.color_of, i) / c.k;
            }
            const std::size_t ell = required_registers(static_cast<std::size_t>(c.k), delta, eps) - 1;
            double exact_accept = std::pow(q, static_cast<double>(ell));
            EXPECT_LE(exact_accept, delta);
            auto src = dense_source(amps, h.n_vertices, 251 + static_cast<std::uint64_t>(trial));
            Rng rng(257, static_cast<std::uint64_t>(trial));
            const int runs = 2000;
            int accepts = 0;
            for (int k = 0; k < runs; k++) {
                accepts += cover_protocol(*src, h, c, delta, eps, rng).accepted;
            }
            double rate = accepts / static_cast<double>(runs);
            double sigma = std::sqrt(std::max(exact_accept * (1 - exact_accept), 0.25 / runs) / runs);
            EXPECT_LE(rate, delta + 3 * sigma);
            EXPECT_NEAR(rate, exact_accept, 3 * sigma);
        }
    }
}

TEST(DenseSource, Errors) {
    std::vector<Amp> seven(7, Amp{1});
    EXPECT_EQ(kind_of([&] { dense_source(seven, 3, 1); }), ErrorKind::dimension_mismatch);
    std::vector<Amp> eight(8, Amp{1});
    EXPECT_EQ(kind_of([&] { dense_source(eight, 3, 1, 2); }), ErrorKind::width_cap_exceeded);
    std::vector<Amp> zeros(8, Amp{0});
    EXPECT_EQ(kind_of([&] { dense_source(zeros, 3, 1); }), ErrorKind::domain);
}

TEST(FlipOracle, AnalyticMatchesBruteForce) {
    Rng rng(263);
    for (int g = 0; g < 15; g++) {
        Hypergraph h = testing::random_hypergraph(6, 5, rng);
        Coloring c = greedy_coloring(h);
        auto amps = hypergraph_amplitudes(h);
        for (int i = 0; i < c.k; i++) {
            EXPECT_NEAR(oracle::all_flip_pass_probability(h, c.color_of, i),
                        oracle::color_test_pass_probability(amps, h, c.color_of, i, 1.0), 1e-12);
        }
    }
}

}  // namespace
}  // namespace hxz
