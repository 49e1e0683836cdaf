// Copyright 2026 The qtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// The three-wire teleportation circuit as an explicit gate program, cut at
// the point where Alice hands over to Bob, plus seeded projective
// measurement and exhaustive outcome enumeration.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtele/core.hpp"
#include "qtele/gates.hpp"
#include "qtele/rng.hpp"

namespace qtele {

/// Wire indices of the three-wire circuit (inputs a, b, c; outputs x, y, z).
inline constexpr int kWireA = 0;
inline constexpr int kWireB = 1;
inline constexpr int kWireC = 2;

struct GateStep {
    GateName gate;
    /// (control, target) for XOR; only the first entry is used otherwise.
    std::array<int, 2> wires{-1, -1};

    static GateStep single(GateName g, int wire) { return {g, {wire, -1}}; }
    static GateStep exclusive_or(int control, int target) { return {GateName::XOR, {control, target}}; }

    std::span<const int> targets() const {
        return std::span<const int>(wires.data(), static_cast<std::size_t>(arity(gate)));
    }

    friend bool operator==(const GateStep &, const GateStep &) = default;
};

struct CircuitProgram {
    std::string label;
    std::vector<GateStep> steps;

    std::size_t size() const { return steps.size(); }

    /// Number of two-qubit steps.
    std::size_t two_qubit_count() const {
        std::size_t count = 0;
        for (const auto &s : steps) count += arity(s.gate) == 2 ? 1 : 0;
        return count;
    }

    /// Same program with every wire index moved up by `offset`.
    CircuitProgram shifted(int offset) const {
        CircuitProgram out{label, steps};
        for (auto &s : out.steps) {
            for (auto &w : s.wires) {
                if (w >= 0) w += offset;
            }
        }
        return out;
    }

    friend CircuitProgram operator+(const CircuitProgram &a, const CircuitProgram &b) {
        CircuitProgram out{a.label + "+" + b.label, a.steps};
        out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
        return out;
    }
};

/// Alice's EPR preparation on (b, c): L on b, then XOR b -> c.
inline CircuitProgram epr_program() {
    return {"epr", {GateStep::single(GateName::L, kWireB), GateStep::exclusive_or(kWireB, kWireC)}};
}

/// Alice's encoding of the mystery qubit on a into her half of the pair.
inline CircuitProgram encode_program() {
    return {"encode", {GateStep::exclusive_or(kWireA, kWireB), GateStep::single(GateName::R, kWireA)}};
}

/// Everything left of the dashed line.
inline CircuitProgram alice_program() {
    CircuitProgram p = epr_program() + encode_program();
    p.label = "alice";
    return p;
}

/// Everything right of the dashed line. S(a) and T(c) touch disjoint wires;
/// the S-then-T order is fixed.
inline CircuitProgram bob_program() {
    return {"bob",
            {GateStep::single(GateName::S, kWireA), GateStep::exclusive_or(kWireB, kWireC),
             GateStep::exclusive_or(kWireC, kWireA), GateStep::single(GateName::S, kWireA),
             GateStep::single(GateName::T, kWireC), GateStep::exclusive_or(kWireC, kWireA)}};
}

inline CircuitProgram full_program() {
    CircuitProgram p = alice_program() + bob_program();
    p.label = "full";
    return p;
}

/// "a".."h" for wires 0..7.
inline std::string wire_label(int wire) {
    if (wire >= 0 && wire < 8) return std::string(1, static_cast<char>('a' + wire));
    return "q" + std::to_string(wire);
}

/// One-line rendering, e.g. "XOR c=b t=c" or "L q=b".
inline std::string to_string(const GateStep &step) {
    if (arity(step.gate) == 2) {
        return std::string(gate_name(step.gate)) + " c=" + wire_label(step.wires[0]) +
               " t=" + wire_label(step.wires[1]);
    }
    return std::string(gate_name(step.gate)) + " q=" + wire_label(step.wires[0]);
}

/// One step per line.
inline std::string render(const CircuitProgram &program) {
    std::string out;
    for (const auto &s : program.steps) out += to_string(s) + "\n";
    return out;
}

template <typename Scalar>
PureState<Scalar> apply_step(const PureState<Scalar> &s, const GateStep &step) {
    if (step.gate == GateName::XOR) return apply_2q(s, step.wires[0], step.wires[1], gate_XOR<Scalar>());
    return apply_1q(s, step.wires[0], single_qubit_matrix<Scalar>(step.gate));
}

template <typename Scalar>
PureState<Scalar> run(const CircuitProgram &program, const PureState<Scalar> &s) {
    PureState<Scalar> out = s;
    for (const auto &step : program.steps) out = apply_step(out, step);
    return out;
}

/// Dense matrix of a program on n qubits, built column by column from basis inputs.
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> program_matrix(const CircuitProgram &program,
                                                                                  int n) {
    const Index dim = Index{1} << n;
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> m(dim, dim);
    for (Index col = 0; col < dim; ++col) {
        m.col(col) = run(program, PureState<Scalar>::basis(n, col)).amplitudes();
    }
    return m;
}

template <typename Scalar = double>
struct MeasurementRecord {
    int qubit;
    int outcome;
    Scalar probability;
    PureState<Scalar> post_state;
};

/// Probability of reading `outcome` on qubit q.
template <typename Scalar>
Scalar outcome_probability(const PureState<Scalar> &s, int q, int outcome) {
    detail::check_qubit(q, s.num_qubits());
    Scalar p = 0;
    for (Index i = 0; i < s.dim(); ++i) {
        if (bit_of(i, q, s.num_qubits()) == outcome) p += std::norm(s[i]);
    }
    return p;
}

/// Collapse onto the given bits of the given qubits. Returns nullopt when the
/// branch has probability below 1e-12.
template <typename Scalar>
std::optional<PureState<Scalar>> project(const PureState<Scalar> &s, std::span<const int> qubits,
                                         std::span<const int> bits, Scalar *probability = nullptr) {
    const int n = s.num_qubits();
    AmplitudeVector<Scalar> v = s.amplitudes();
    for (Index i = 0; i < v.size(); ++i) {
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            if (bit_of(i, qubits[k], n) != bits[k]) {
                v(i) = 0;
                break;
            }
        }
    }
    const Scalar p = v.squaredNorm();
    if (probability) *probability = p;
    if (p < Scalar(tol::kAlgebra)) return std::nullopt;
    v /= std::sqrt(p);
    return PureState<Scalar>(n, std::move(v), detail::trusted);
}

/// Born-rule measurement of one qubit in the standard basis. Consumes exactly
/// one uniform draw from rng: outcome 0 iff draw < p0.
template <typename Scalar>
MeasurementRecord<Scalar> measure(const PureState<Scalar> &s, int q, Rng &rng) {
    detail::check_qubit(q, s.num_qubits());
    const Scalar p0 = outcome_probability(s, q, 0);
    const Scalar p1 = outcome_probability(s, q, 1);
    if (p0 < Scalar(tol::kAlgebra) && p1 < Scalar(tol::kAlgebra)) {
        throw Error(ErrorCode::DegenerateState, "both outcomes have vanishing probability");
    }
    const double draw = rng.uniform();
    const int outcome = draw < static_cast<double>(p0 / (p0 + p1)) ? 0 : 1;
    const int qubit_arr[1] = {q};
    const int bit_arr[1] = {outcome};
    Scalar p = 0;
    auto post = project<Scalar>(s, qubit_arr, bit_arr, &p);
    return {q, outcome, p, std::move(*post)};
}

template <typename Scalar = double>
struct Outcome {
    std::vector<int> bits;
    Scalar probability;
    /// Empty for zero-probability branches.
    std::optional<PureState<Scalar>> post_state;
};

/// All 2^k joint outcomes of measuring `qubits`, in binary counting order with
/// the first listed qubit as the high-order bit.
template <typename Scalar>
std::vector<Outcome<Scalar>> enumerate_outcomes(const PureState<Scalar> &s, std::span<const int> qubits) {
    const int n = s.num_qubits();
    Index seen = 0;
    for (int q : qubits) {
        detail::check_qubit(q, n);
        if (seen & detail::qubit_mask(q, n)) throw Error(ErrorCode::DuplicateQubit, "repeated qubit");
        seen |= detail::qubit_mask(q, n);
    }
    const int k = static_cast<int>(qubits.size());
    std::vector<Outcome<Scalar>> out;
    out.reserve(std::size_t{1} << k);
    for (Index pattern = 0; pattern < (Index{1} << k); ++pattern) {
        std::vector<int> bits(static_cast<std::size_t>(k));
        for (int t = 0; t < k; ++t) bits[static_cast<std::size_t>(t)] = bit_of(pattern, t, k);
        Scalar p = 0;
        auto post = project<Scalar>(s, qubits, bits, &p);
        out.push_back({std::move(bits), p, std::move(post)});
    }
    return out;
}

template <typename Scalar>
std::vector<Outcome<Scalar>> enumerate_outcomes(const PureState<Scalar> &s, std::initializer_list<int> qubits) {
    return enumerate_outcomes(s, std::span<const int>(qubits.begin(), qubits.size()));
}

/// Turns the measured bits (u, v) on wires a, b back into fresh basis kets and
/// reattaches wire c's collapsed state: |u>|v> ⊗ rho.
template <typename Scalar>
PureState<Scalar> reinject(const PureState<Scalar> &collapsed, int u, int v) {
    const PureState<Scalar> rho = factor_out(collapsed, {kWireC});
    const Index uv = (Index{u} << 1) | Index{v};
    return tensor(PureState<Scalar>::basis(2, uv), rho);
}

template <typename Scalar = double>
struct ResendResult {
    int u;
    int v;
    PureState<Scalar> final_state;
};

/// Runs Alice's half on |psi 0 0>, measures a then b, reinjects |u>|v> and
/// runs Bob's half.
template <typename Scalar>
ResendResult<Scalar> measure_resend_experiment(const PureState<Scalar> &psi, Rng &rng) {
    if (psi.num_qubits() != 1) throw Error(ErrorCode::DimensionMismatch, "mystery state must be one qubit");
    const auto dashed = run(alice_program(), tensor(psi, PureState<Scalar>::basis(2, 0)));
    const auto ma = measure(dashed, kWireA, rng);
    const auto mb = measure(ma.post_state, kWireB, rng);
    const auto resent = reinject(mb.post_state, ma.outcome, mb.outcome);
    return {ma.outcome, mb.outcome, run(bob_program(), resent)};
}

/// Deterministic version of the experiment for one forced branch. Returns
/// nullopt if the branch cannot occur.
template <typename Scalar>
std::optional<PureState<Scalar>> measure_resend_branch(const PureState<Scalar> &psi, int u, int v) {
    const auto dashed = run(alice_program(), tensor(psi, PureState<Scalar>::basis(2, 0)));
    const int qubits[2] = {kWireA, kWireB};
    const int bits[2] = {u, v};
    auto collapsed = project<Scalar>(dashed, qubits, bits);
    if (!collapsed) return std::nullopt;
    return run(bob_program(), reinject(*collapsed, u, v));
}

}  // namespace qtele
