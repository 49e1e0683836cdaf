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

// Teleportation as a two-party protocol: Alice prepares and splits an EPR
// pair, later encodes a mystery qubit into her half and measures two
// classical bits; Bob rebuilds the qubit either by running his half of the
// circuit or by one of four classically chosen corrections.

#include <cstdint>
#include <optional>
#include <utility>
#include <string_view>
#include <vector>

#include "qtele/circuit.hpp"
#include "qtele/core.hpp"
#include "qtele/gates.hpp"
#include "qtele/rng.hpp"

namespace qtele {

using State = PureState<double>;

enum class BobMode { Unitary, Classical };

std::string_view mode_name(BobMode mode);
std::optional<BobMode> parse_mode(std::string_view text);

struct ClassicalBits {
    int u = 0;
    int v = 0;
    friend bool operator==(const ClassicalBits &, const ClassicalBits &) = default;
};

/// Two qubits in (|00>+|11>)/√2: qubit 0 is Alice's σ, qubit 1 is Bob's ρ.
struct EprPair {
    State joint;
    int alice_qubit = 0;
    int bob_qubit = 1;
};

/// L then XOR on |00>.
EprPair prepare_epr();

struct AliceResult {
    ClassicalBits bits;
    /// Bob's qubit after Alice's measurement (bookkeeping for the harness).
    State collapsed_remote;
    double branch_prob;
};

/// Encodes psi into Alice's half of `epr` and measures wires a then b,
/// consuming two draws from rng.
AliceResult alice_encode(const State &psi, const EprPair &epr, Rng &rng);

/// Same as alice_encode with the measurement outcome forced. Returns nullopt
/// for a zero-probability branch.
std::optional<AliceResult> alice_encode_branch(const State &psi, const EprPair &epr, ClassicalBits bits);

struct BobUnitaryResult {
    ClassicalBits check;
    State z;
};

/// Reads check wires a then b of a three-qubit state, projecting after each
/// read. Throws NondeterministicCheckBits unless each wire is in a basis
/// state to within 1e-9. Returns the bits and the projected state.
std::pair<ClassicalBits, State> read_check_wires(const State &out);

/// Runs Bob's half of the circuit on |u>|v>⊗rho and reads the two check
/// wires. Throws NondeterministicCheckBits if either check wire is not in a
/// basis state.
BobUnitaryResult bob_decode_unitary(ClassicalBits bits, const State &rho);

/// Correction gates for a branch, in application order. Frozen from the
/// branch derivation: (0,0) none, (0,1) X, (1,0) Z, (1,1) X then Z.
std::vector<GateName> correction_gates(ClassicalBits bits);

/// Product matrix of correction_gates(bits).
Gate1<double> correction_matrix(ClassicalBits bits);

/// Applies the classical correction for `bits` to rho.
State bob_decode_classical(ClassicalBits bits, const State &rho);

struct TeleportTranscript {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    BobMode mode = BobMode::Unitary;
    State input_psi{};
    ClassicalBits bits{};
    std::optional<ClassicalBits> bob_check{};
    State output{};
    double fidelity = 0;
};

/// prepare_epr, alice_encode, hand over the bits, decode.
TeleportTranscript teleport_once(const State &psi, BobMode mode, Rng &rng);

/// Seeded run using the measurement stream of (seed, trial).
TeleportTranscript teleport_once(const State &psi, BobMode mode, std::uint64_t seed, std::uint64_t trial = 0);

struct EntangledRun {
    ClassicalBits bits;
    double fidelity;
};

/// (|00>+|11>)/√2
State phi_plus();

/// Teleports wire a of a two-qubit state `chi` on (d, a), where d is an
/// auxiliary qubit that never takes part. Qubit layout is (d, a, b, c).
/// Returns the fidelity of the final (d, c) state against chi.
EntangledRun teleport_entangled(const State &chi, BobMode mode, Rng &rng);

/// Forced-branch variant of teleport_entangled; nullopt if the branch has
/// zero probability.
std::optional<double> teleport_entangled_branch(const State &chi, BobMode mode, ClassicalBits bits);

/// Teleports half of a Φ+ pair and returns the joint fidelity.
double teleport_entangled_test(Rng &rng);

}  // namespace qtele
