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


#ifndef HXZ_ORACLES_HPP
#define HXZ_ORACLES_HPP

// Brute-force reference computations. They share no code with the modules
// they check beyond the Hypergraph/Coloring containers.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hxz/builder.hpp"
#include "hxz/errors.hpp"
#include "hxz/hypergraph.hpp"

namespace hxz::oracle {

/// 0-based lexicographic rank of 1-based triple (i, j, k) among triples of 1..n.
inline std::size_t lex_rank(std::size_t n, int i, int j, int k) {
    std::size_t r = 0;
    for (int a = 1; a <= static_cast<int>(n); a++) {
        for (int b = a + 1; b <= static_cast<int>(n); b++) {
            for (int c = b + 1; c <= static_cast<int>(n); c++) {
                if (a == i && b == j && c == k) {
                    return r;
                }
                r++;
            }
        }
    }
    throw Error(ErrorKind::invalid_triple, "triple not found");
}

/// d (2n + 63) C(n,3) - n, in exact integers.
inline long long vertex_count(long long n, long long d) {
    return d * (2 * n + 63) * (n * (n - 1) * (n - 2) / 6) - n;
}

/// Stabilizer check on every vertex of color i; y holds vertex v at bit v.
inline bool stabilized(const Hypergraph &h, const std::vector<int> &color_of, int i, std::uint64_t y) {
    for (std::size_t j = 0; j < h.n_vertices; j++) {
        if (color_of[j] != i) {
            continue;
        }
        unsigned parity = (y >> j) & 1;
        for (const auto &e : h.edges) {
            bool has = false;
            unsigned prod = 1;
            for (Vertex k : e) {
                if (k == j) {
                    has = true;
                } else {
                    prod &= (y >> k) & 1;
                }
            }
            if (has) {
                parity ^= prod;
            }
        }
        if (parity) {
            return false;
        }
    }
    return true;
}

/// Born distribution when the qubits in xmask are read in X and the rest in Z.
inline std::vector<double> mixed_basis_distribution(std::span<const std::complex<double>> amps, std::size_t n,
                                                    std::uint64_t xmask) {
    const std::uint64_t dim = std::uint64_t{1} << n;
    if (amps.size() != dim) {
        throw Error(ErrorKind::dimension_mismatch, "amplitude count");
    }
    double norm = 0;
    for (auto a : amps) {
        norm += std::norm(a);
    }
    const double scale = std::pow(0.5, std::popcount(xmask));
    std::vector<double> p(dim, 0.0);
    for (std::uint64_t y = 0; y < dim; y++) {
        std::complex<double> acc = 0;
        for (std::uint64_t x = 0; x < dim; x++) {
            if ((x ^ y) & ~xmask & (dim - 1)) {
                continue;
            }
            acc += std::popcount(x & y & xmask) % 2 ? -amps[x] : amps[x];
        }
        p[y] = std::norm(acc) * scale / norm;
    }
    return p;
}

/// Probability that color test i passes on the given state when every
/// reported bit is flipped independently with probability flip_p.
inline double color_test_pass_probability(std::span<const std::complex<double>> amps, const Hypergraph &h,
                                          const std::vector<int> &color_of, int i, double flip_p = 0.0) {
    const std::size_t n = h.n_vertices;
    std::uint64_t xmask = 0;
    for (std::size_t v = 0; v < n; v++) {
        if (color_of[v] == i) {
            xmask |= std::uint64_t{1} << v;
        }
    }
    auto p = mixed_basis_distribution(amps, n, xmask);
    const std::uint64_t dim = std::uint64_t{1} << n;
    double pass = 0;
    for (std::uint64_t y = 0; y < dim; y++) {
        if (p[y] == 0.0) {
            continue;
        }
        for (std::uint64_t f = 0; f < dim; f++) {
            int k = std::popcount(f);
            double w = std::pow(flip_p, k) * std::pow(1.0 - flip_p, static_cast<double>(n) - k);
            if (w > 0 && stabilized(h, color_of, i, y ^ f)) {
                pass += p[y] * w;
            }
        }
    }
    return pass;
}

/// Pass probability of color test i on the ideal state when the server
/// flips every bit. With Z bits z (uniform) the flipped check on j reads
/// 1 + deg(j) + sum over arity-3 edges {j,a,b} of (z_a + z_b), an affine
/// system over GF(2): pass probability 2^-rank if consistent, else 0.
inline double all_flip_pass_probability(const Hypergraph &h, const std::vector<int> &color_of, int i) {
    const std::size_t n = h.n_vertices;
    const std::size_t words = (n + 1 + 63) / 64;  // last bit column is the constant
    std::vector<std::vector<std::uint64_t>> rows;
    auto flip = [&](std::vector<std::uint64_t> &r, std::size_t bit) { r[bit / 64] ^= std::uint64_t{1} << (bit % 64); };
    auto get = [&](const std::vector<std::uint64_t> &r, std::size_t bit) { return (r[bit / 64] >> (bit % 64)) & 1; };
    for (std::size_t j = 0; j < n; j++) {
        if (color_of[j] != i) {
            continue;
        }
        std::vector<std::uint64_t> r(words, 0);
        unsigned rhs = 1;
        for (const auto &e : h.edges) {
            if (std::find(e.begin(), e.end(), static_cast<Vertex>(j)) == e.end()) {
                continue;
            }
            rhs ^= 1;
            if (e.size() == 3) {
                for (Vertex k : e) {
                    if (k != j) {
                        flip(r, k);
                    }
                }
            }
        }
        if (rhs) {
            flip(r, n);
        }
        rows.push_back(std::move(r));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows.size(); col++) {
        std::size_t piv = rank;
        while (piv < rows.size() && !get(rows[piv], col)) {
            piv++;
        }
        if (piv == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[piv]);
        for (std::size_t r = 0; r < rows.size(); r++) {
            if (r != rank && get(rows[r], col)) {
                for (std::size_t w = 0; w < words; w++) {
                    rows[r][w] ^= rows[rank][w];
                }
            }
        }
        rank++;
    }
    for (std::size_t r = rank; r < rows.size(); r++) {
        if (get(rows[r], n)) {
            return 0.0;
        }
    }
    return std::ldexp(1.0, -static_cast<int>(rank));
}

/// CCZ triangle: one arity-3 edge on three vertices, one color each.
inline Hypergraph ccz_triangle() {
    Hypergraph h(3);
    h.add_edge({0, 1, 2});
    return h;
}

/// Path 0 - 1 - 2 with two arity-2 edges.
inline Hypergraph two_edge_path() {
    Hypergraph h(3);
    h.add_edge({0, 1});
    h.add_edge({1, 2});
    return h;
}

}  // namespace hxz::oracle

#endif
