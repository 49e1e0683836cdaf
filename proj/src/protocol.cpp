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

#include "qtele/protocol.hpp"

#include <cmath>

namespace qtele {

std::string_view mode_name(BobMode mode) {
    return mode == BobMode::Unitary ? "unitary-bob" : "classical-bob";
}

std::optional<BobMode> parse_mode(std::string_view text) {
    if (text == "unitary-bob" || text == "unitary") return BobMode::Unitary;
    if (text == "classical-bob" || text == "classical") return BobMode::Classical;
    return std::nullopt;
}

EprPair prepare_epr() {
    // epr_program acts on wires (b, c) of the three-wire circuit; here the
    // pair lives alone on (0, 1).
    return {run(epr_program().shifted(-1), State::basis(2, 0)), 0, 1};
}

State phi_plus() { return prepare_epr().joint; }

namespace {

// Wire-a/b/c state right after Alice's two encoding gates.
State encoded_state(const State &psi, const EprPair &epr) {
    if (psi.num_qubits() != 1) throw Error(ErrorCode::DimensionMismatch, "mystery state must be one qubit");
    return run(encode_program(), tensor(psi, epr.joint));
}

}  // namespace

AliceResult alice_encode(const State &psi, const EprPair &epr, Rng &rng) {
    const State encoded = encoded_state(psi, epr);
    const auto ma = measure(encoded, kWireA, rng);
    const auto mb = measure(ma.post_state, kWireB, rng);
    return {{ma.outcome, mb.outcome}, factor_out(mb.post_state, {kWireC}), ma.probability * mb.probability};
}

std::optional<AliceResult> alice_encode_branch(const State &psi, const EprPair &epr, ClassicalBits bits) {
    const State encoded = encoded_state(psi, epr);
    const int qa[1] = {kWireA};
    const int ua[1] = {bits.u};
    double pa = 0;
    auto after_a = project<double>(encoded, qa, ua, &pa);
    if (!after_a) return std::nullopt;
    const int qb[1] = {kWireB};
    const int vb[1] = {bits.v};
    double pb = 0;
    auto after_b = project<double>(*after_a, qb, vb, &pb);
    if (!after_b) return std::nullopt;
    return AliceResult{bits, factor_out(*after_b, {kWireC}), pa * pb};
}

std::pair<ClassicalBits, State> read_check_wires(const State &out) {
    if (out.num_qubits() != 3) throw Error(ErrorCode::DimensionMismatch, "expected the three-wire state");
    State state = out;
    ClassicalBits check;
    for (int wire : {kWireA, kWireB}) {
        const double p1 = outcome_probability(state, wire, 1);
        if (p1 > tol::kComparison && p1 < 1.0 - tol::kComparison) {
            throw Error(ErrorCode::NondeterministicCheckBits,
                        "check wire " + wire_label(wire) + " reads 1 with probability " + std::to_string(p1));
        }
        const int bit = p1 >= 0.5 ? 1 : 0;
        (wire == kWireA ? check.u : check.v) = bit;
        const int q[1] = {wire};
        const int b[1] = {bit};
        state = *project<double>(state, q, b);
    }
    return {check, std::move(state)};
}

BobUnitaryResult bob_decode_unitary(ClassicalBits bits, const State &rho) {
    if (rho.num_qubits() != 1) throw Error(ErrorCode::DimensionMismatch, "Bob's qubit must be one qubit");
    const Index uv = (Index{bits.u} << 1) | Index{bits.v};
    const auto [check, collapsed] = read_check_wires(run(bob_program(), tensor(State::basis(2, uv), rho)));
    return {check, factor_out(collapsed, {kWireC})};
}

std::vector<GateName> correction_gates(ClassicalBits bits) {
    std::vector<GateName> gates;
    if (bits.v) gates.push_back(GateName::X);
    if (bits.u) gates.push_back(GateName::Z);
    return gates;
}

Gate1<double> correction_matrix(ClassicalBits bits) {
    Gate1<double> m = Gate1<double>::Identity();
    for (GateName g : correction_gates(bits)) m = single_qubit_matrix<double>(g) * m;
    return m;
}

State bob_decode_classical(ClassicalBits bits, const State &rho) {
    if (rho.num_qubits() != 1) throw Error(ErrorCode::DimensionMismatch, "Bob's qubit must be one qubit");
    State out = rho;
    for (GateName g : correction_gates(bits)) out = apply_1q(out, 0, single_qubit_matrix<double>(g));
    AmplitudeVector<double> v = out.amplitudes();
    v.normalize();
    return State(1, std::move(v), detail::trusted);
}

TeleportTranscript teleport_once(const State &psi, BobMode mode, Rng &rng) {
    const EprPair epr = prepare_epr();
    const AliceResult alice = alice_encode(psi, epr, rng);
    // Only alice.bits crosses to Bob; collapsed_remote stands in for the
    // qubit he has held since the pair was split.
    TeleportTranscript t{.mode = mode, .input_psi = psi, .bits = alice.bits, .output = alice.collapsed_remote};
    if (mode == BobMode::Unitary) {
        const auto bob = bob_decode_unitary(alice.bits, alice.collapsed_remote);
        t.bob_check = bob.check;
        t.output = bob.z;
    } else {
        t.output = bob_decode_classical(alice.bits, alice.collapsed_remote);
    }
    t.fidelity = fidelity(t.output, psi);
    return t;
}

TeleportTranscript teleport_once(const State &psi, BobMode mode, std::uint64_t seed, std::uint64_t trial) {
    Rng rng(seed, trial, Stream::Measurement);
    TeleportTranscript t = teleport_once(psi, mode, rng);
    t.seed = seed;
    t.trial = trial;
    return t;
}

namespace {

constexpr int kAux = 0;

State entangled_input(const State &chi) {
    if (chi.num_qubits() != 2) throw Error(ErrorCode::DimensionMismatch, "chi must be a two-qubit state");
    return run(encode_program().shifted(1), tensor(chi, prepare_epr().joint));
}

double finish_entangled(const State &collapsed, const State &chi, BobMode mode, ClassicalBits bits) {
    State out = collapsed;
    if (mode == BobMode::Unitary) {
        out = run(bob_program().shifted(1), out);
    } else {
        for (GateName g : correction_gates(bits)) out = apply_1q(out, kWireC + 1, single_qubit_matrix<double>(g));
    }
    return fidelity(factor_out(out, {kAux, kWireC + 1}), chi);
}

}  // namespace

EntangledRun teleport_entangled(const State &chi, BobMode mode, Rng &rng) {
    const State encoded = entangled_input(chi);
    const auto ma = measure(encoded, kWireA + 1, rng);
    const auto mb = measure(ma.post_state, kWireB + 1, rng);
    const ClassicalBits bits{ma.outcome, mb.outcome};
    return {bits, finish_entangled(mb.post_state, chi, mode, bits)};
}

std::optional<double> teleport_entangled_branch(const State &chi, BobMode mode, ClassicalBits bits) {
    const int qubits[2] = {kWireA + 1, kWireB + 1};
    const int outcome[2] = {bits.u, bits.v};
    auto collapsed = project<double>(entangled_input(chi), qubits, outcome);
    if (!collapsed) return std::nullopt;
    return finish_entangled(*collapsed, chi, mode, bits);
}

double teleport_entangled_test(Rng &rng) { return teleport_entangled(phi_plus(), BobMode::Unitary, rng).fidelity; }

}  // namespace qtele
