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


#ifndef HXZ_TESTS_SUPPORT_HPP
#define HXZ_TESTS_SUPPORT_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "hxz/hxz.hpp"

namespace hxz::testing {

/// Kind of the Error thrown by f, or nothing.
template <typename F>
std::optional<ErrorKind> kind_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    return std::nullopt;
}

/// Worst infidelity of `c` on an arbitrary (possibly padded) block.
inline double block_infidelity(const Block &b, const Circuit &c, std::uint64_t seed, std::size_t trials) {
    MeasurementPlan p = compile(c, b);
    InstructionTape t = schedule(b, p);
    double worst = 0;
    for (std::size_t k = 0; k < trials; k++) {
        Rng rng(seed, k);
        std::vector<QubitState> in;
        for (std::size_t w = 0; w < c.n_qubits; w++) {
            in.push_back(random_qubit(rng));
        }
        StateVector want = oracle_run(c, StateVector::product(in));
        RunResult r = execute(b, p, t, in, rng);
        worst = std::max(worst, 1.0 - fidelity(r.unwound(), want.amplitudes()));
    }
    return worst;
}

inline Hypergraph random_hypergraph(std::size_t n, std::size_t edges, Rng &rng) {
    Hypergraph h;
    for (std::size_t v = 0; v < n; v++) {
        h.add_vertex({});
    }
    std::set<Edge> seen;
    for (std::size_t k = 0; k < edges * 4 && seen.size() < edges; k++) {
        std::size_t ar = 2 + rng.below(2);
        std::set<Vertex> vs;
        while (vs.size() < ar) {
            vs.insert(static_cast<Vertex>(rng.below(n)));
        }
        Edge e(vs.begin(), vs.end());
        if (seen.insert(e).second) {
            h.add_edge(e);
        }
    }
    return h;
}

}  // namespace hxz::testing

#endif
