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

#ifndef HXZ_STATEVEC_HPP
#define HXZ_STATEVEC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hxz/circuit.hpp"
#include "hxz/errors.hpp"
#include "hxz/rng.hpp"

namespace hxz {

using Amp = std::complex<double>;
using QubitState = std::array<Amp, 2>;
using Handle = std::uint64_t;

enum class Basis : std::uint8_t { X, Z };
enum class Gate1 : std::uint8_t { H, X, Z };

inline char basis_char(Basis b) {
    return b == Basis::X ? 'X' : 'Z';
}

inline constexpr std::size_t kDefaultWidthCap = 22;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

inline const QubitState kPlus{Amp{kInvSqrt2}, Amp{kInvSqrt2}};
inline const QubitState kZero{Amp{1.0}, Amp{0.0}};
inline const QubitState kOne{Amp{0.0}, Amp{1.0}};

struct Outcome {
    Handle qubit = 0;
    Basis basis = Basis::Z;
    int bit = 0;
    double probability = 1.0;

    bool operator==(const Outcome &) const = default;
};

/// Dense state over the live qubits. active()[p] is amplitude-index bit p.
class StateVector {
   public:
    explicit StateVector(std::size_t width_cap = kDefaultWidthCap) : cap_(width_cap), amp_{Amp{1.0}} {
    }

    std::size_t width() const {
        return active_.size();
    }
    std::size_t width_cap() const {
        return cap_;
    }
    const std::vector<Handle> &active() const {
        return active_;
    }
    std::span<const Amp> amplitudes() const {
        return amp_;
    }
    /// Mutable access for tests that inject phases or errors.
    std::vector<Amp> &raw_amplitudes() {
        return amp_;
    }

    bool is_active(Handle q) const {
        return std::find(active_.begin(), active_.end(), q) != active_.end();
    }

    std::size_t position(Handle q) const {
        auto it = std::find(active_.begin(), active_.end(), q);
        if (it == active_.end()) {
            throw Error(ErrorKind::inactive_handle, "qubit handle " + std::to_string(q) + " is not active");
        }
        return static_cast<std::size_t>(it - active_.begin());
    }

    double norm_squared() const {
        double s = 0;
        for (const auto &a : amp_) {
            s += std::norm(a);
        }
        return s;
    }

    Handle activate(const QubitState &init = kPlus) {
        if (active_.size() >= cap_) {
            throw Error(ErrorKind::width_cap_exceeded, "window already holds " + std::to_string(cap_) + " qubits");
        }
        double nn = std::norm(init[0]) + std::norm(init[1]);
        if (std::abs(nn - 1.0) > 1e-9) {
            throw Error(ErrorKind::domain, "initial single-qubit state is not normalized");
        }
        std::size_t n = amp_.size();
        amp_.resize(2 * n);
        for (std::size_t i = 0; i < n; i++) {
            amp_[n + i] = amp_[i] * init[1];
            amp_[i] *= init[0];
        }
        active_.push_back(next_);
        return next_++;
    }

    /// Sign flip on the all-ones component of 1 to 3 qubits.
    void apply_gcz(std::span<const Handle> qs) {
        if (qs.empty() || qs.size() > 3) {
            throw Error(ErrorKind::domain, "generalized CZ acts on 1 to 3 qubits");
        }
        std::size_t mask = 0;
        for (Handle q : qs) {
            std::size_t bit = std::size_t{1} << position(q);
            if (mask & bit) {
                throw Error(ErrorKind::duplicate_handle, "qubit handle " + std::to_string(q) + " repeated");
            }
            mask |= bit;
        }
        for (std::size_t i = 0; i < amp_.size(); i++) {
            if ((i & mask) == mask) {
                amp_[i] = -amp_[i];
            }
        }
    }
    void apply_gcz(std::initializer_list<Handle> qs) {
        apply_gcz(std::span<const Handle>(qs.begin(), qs.size()));
    }

    void apply_1q(Handle q, Gate1 g) {
        std::size_t bit = std::size_t{1} << position(q);
        for (std::size_t i = 0; i < amp_.size(); i++) {
            if (i & bit) {
                continue;
            }
            Amp &a0 = amp_[i];
            Amp &a1 = amp_[i | bit];
            switch (g) {
                case Gate1::H: {
                    Amp s = a0 + a1, d = a0 - a1;
                    a0 = s * kInvSqrt2;
                    a1 = d * kInvSqrt2;
                    break;
                }
                case Gate1::X: std::swap(a0, a1); break;
                case Gate1::Z: a1 = -a1; break;
            }
        }
    }

    Outcome measure(Handle q, Basis basis, Rng &rng) {
        return measure_impl(q, basis, -1, &rng);
    }
    Outcome measure_forced(Handle q, Basis basis, int bit) {
        return measure_impl(q, basis, bit, nullptr);
    }

    /// Probability that measuring q in `basis` yields 1; the state is unchanged.
    double probability_of_one(Handle q, Basis basis) const {
        StateVector copy = *this;
        if (basis == Basis::X) {
            copy.apply_1q(q, Gate1::H);
        }
        std::size_t bit = std::size_t{1} << copy.position(q);
        double p1 = 0;
        for (std::size_t i = 0; i < copy.amp_.size(); i++) {
            if (i & bit) {
                p1 += std::norm(copy.amp_[i]);
            }
        }
        return p1;
    }

    /// Same state with the qubits permuted so that active() == order.
    StateVector reordered(std::span<const Handle> order) const {
        if (order.size() != active_.size()) {
            throw Error(ErrorKind::dimension_mismatch, "reorder needs every active qubit exactly once");
        }
        std::vector<std::size_t> src(order.size());
        for (std::size_t p = 0; p < order.size(); p++) {
            src[p] = position(order[p]);
        }
        StateVector out(cap_);
        out.active_.assign(order.begin(), order.end());
        out.next_ = next_;
        out.amp_.assign(amp_.size(), Amp{});
        for (std::size_t j = 0; j < amp_.size(); j++) {
            std::size_t i = 0;
            for (std::size_t p = 0; p < src.size(); p++) {
                i |= ((j >> p) & 1) << src[p];
            }
            out.amp_[j] = amp_[i];
        }
        return out;
    }

    /// Product state, qubit w at bit w.
    static StateVector product(std::span<const QubitState> qubits, std::size_t width_cap = kDefaultWidthCap) {
        StateVector s(width_cap);
        for (const auto &q : qubits) {
            s.activate(q);
        }
        return s;
    }

   private:
    Outcome measure_impl(Handle q, Basis basis, int forced, Rng *rng) {
        if (basis == Basis::X) {
            apply_1q(q, Gate1::H);
        }
        std::size_t p = position(q);
        std::size_t bit = std::size_t{1} << p;
        double p1 = 0;
        for (std::size_t i = 0; i < amp_.size(); i++) {
            if (i & bit) {
                p1 += std::norm(amp_[i]);
            }
        }
        double total = norm_squared();
        p1 = std::clamp(p1 / total, 0.0, 1.0);
        int b;
        if (forced >= 0) {
            b = forced & 1;
            double pb = b ? p1 : 1.0 - p1;
            if (pb <= 1e-12) {
                if (basis == Basis::X) {
                    apply_1q(q, Gate1::H);
                }
                throw Error(ErrorKind::zero_probability_branch,
                            "forced outcome " + std::to_string(b) + " has probability " + std::to_string(pb));
            }
        } else {
            b = rng->uniform() < p1 ? 1 : 0;
        }
        double pb = b ? p1 : 1.0 - p1;
        double scale = 1.0 / std::sqrt(pb * total);
        std::size_t low = bit - 1;
        std::vector<Amp> next(amp_.size() / 2);
        for (std::size_t j = 0; j < next.size(); j++) {
            std::size_t i = (j & low) | ((j & ~low) << 1) | (b ? bit : 0);
            next[j] = amp_[i] * scale;
        }
        amp_ = std::move(next);
        active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(p));
        return Outcome{q, basis, b, pb};
    }

    std::size_t cap_;
    std::vector<Handle> active_;
    std::vector<Amp> amp_;
    Handle next_ = 0;
};

/// |<ref|s>|^2 normalized by both norms.
inline double fidelity(const StateVector &s, std::span<const Amp> reference) {
    auto a = s.amplitudes();
    if (a.size() != reference.size()) {
        throw Error(ErrorKind::dimension_mismatch, "state has " + std::to_string(a.size()) + " amplitudes, reference " +
                                                       std::to_string(reference.size()));
    }
    Amp ip{};
    double na = 0, nr = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        ip += std::conj(reference[i]) * a[i];
        na += std::norm(a[i]);
        nr += std::norm(reference[i]);
    }
    if (na == 0 || nr == 0) {
        return 0;
    }
    return std::clamp(std::norm(ip) / (na * nr), 0.0, 1.0);
}

/// Applies the circuit with wire w acting on input.active()[w].
inline StateVector oracle_run(const Circuit &c, const StateVector &input) {
    if (c.n_qubits != input.width()) {
        throw Error(ErrorKind::dimension_mismatch, "circuit has " + std::to_string(c.n_qubits) + " qubits, input " +
                                                       std::to_string(input.width()));
    }
    if (c.n_qubits > input.width_cap()) {
        throw Error(ErrorKind::width_cap_exceeded, "circuit wider than the window");
    }
    check_circuit(c);
    StateVector s = input;
    const auto &q = input.active();
    for (const auto &layer : c.layers) {
        for (const auto &g : layer) {
            if (g.kind == Gate::Kind::H) {
                s.apply_1q(q[static_cast<std::size_t>(g.q[0])], Gate1::H);
            } else {
                s.apply_gcz({q[static_cast<std::size_t>(g.q[0])], q[static_cast<std::size_t>(g.q[1])],
                             q[static_cast<std::size_t>(g.q[2])]});
            }
        }
    }
    return s;
}

/// Random pure single-qubit state from complex Gaussians.
inline QubitState random_qubit(Rng &rng) {
    for (;;) {
        Amp a{rng.normal(), rng.normal()};
        Amp b{rng.normal(), rng.normal()};
        double n = std::sqrt(std::norm(a) + std::norm(b));
        if (n > 1e-6) {
            return {a / n, b / n};
        }
    }
}

}  // namespace hxz

#endif
