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

// The four single-qubit operations and the exclusive-or gate used by the
// teleportation circuit, plus the X and Z flips Bob needs when he corrects
// his qubit classically instead of running his half of the circuit.

#include <cmath>
#include <complex>
#include <optional>
#include <string_view>

#include "qtele/core.hpp"

namespace qtele {

enum class GateName { L, R, S, T, XOR, X, Z };

inline constexpr GateName kAllGates[] = {GateName::L, GateName::R,   GateName::S, GateName::T,
                                         GateName::XOR, GateName::X, GateName::Z};

constexpr std::string_view gate_name(GateName g) {
    switch (g) {
        case GateName::L: return "L";
        case GateName::R: return "R";
        case GateName::S: return "S";
        case GateName::T: return "T";
        case GateName::XOR: return "XOR";
        case GateName::X: return "X";
        case GateName::Z: return "Z";
    }
    return "?";
}

constexpr std::optional<GateName> parse_gate_name(std::string_view s) {
    for (GateName g : kAllGates) {
        if (gate_name(g) == s) return g;
    }
    return std::nullopt;
}

/// Number of wires a gate acts on.
constexpr int arity(GateName g) { return g == GateName::XOR ? 2 : 1; }

namespace detail {
template <typename Scalar>
Scalar inv_sqrt2() {
    static const Scalar value = Scalar(1) / std::sqrt(Scalar(2));
    return value;
}
}  // namespace detail

/// |0> -> (|0>+|1>)/√2, |1> -> (-|0>+|1>)/√2.
template <typename Scalar = double>
Gate1<Scalar> gate_L() {
    const Scalar h = detail::inv_sqrt2<Scalar>();
    Gate1<Scalar> m;
    m << h, -h,
         h, h;
    return m;
}

/// Inverse of L: |0> -> (|0>-|1>)/√2, |1> -> (|0>+|1>)/√2.
template <typename Scalar = double>
Gate1<Scalar> gate_R() {
    const Scalar h = detail::inv_sqrt2<Scalar>();
    Gate1<Scalar> m;
    m << h, h,
         -h, h;
    return m;
}

/// |0> -> i|0>, |1> unchanged.
template <typename Scalar = double>
Gate1<Scalar> gate_S() {
    using C = std::complex<Scalar>;
    Gate1<Scalar> m;
    m << C(0, 1), C(0),
         C(0), C(1);
    return m;
}

/// |0> -> -|0>, |1> -> -i|1>.
template <typename Scalar = double>
Gate1<Scalar> gate_T() {
    using C = std::complex<Scalar>;
    Gate1<Scalar> m;
    m << C(-1), C(0),
         C(0), C(0, -1);
    return m;
}

/// Controlled-not with the high-order qubit of the pair as control.
template <typename Scalar = double>
Gate2<Scalar> gate_XOR() {
    Gate2<Scalar> m;
    m << 1, 0, 0, 0,
         0, 1, 0, 0,
         0, 0, 0, 1,
         0, 0, 1, 0;
    return m;
}

template <typename Scalar = double>
Gate1<Scalar> gate_X() {
    Gate1<Scalar> m;
    m << 0, 1,
         1, 0;
    return m;
}

template <typename Scalar = double>
Gate1<Scalar> gate_Z() {
    Gate1<Scalar> m;
    m << 1, 0,
         0, -1;
    return m;
}

/// Matrix for a single-qubit gate name. XOR is rejected.
template <typename Scalar = double>
Gate1<Scalar> single_qubit_matrix(GateName g) {
    switch (g) {
        case GateName::L: return gate_L<Scalar>();
        case GateName::R: return gate_R<Scalar>();
        case GateName::S: return gate_S<Scalar>();
        case GateName::T: return gate_T<Scalar>();
        case GateName::X: return gate_X<Scalar>();
        case GateName::Z: return gate_Z<Scalar>();
        case GateName::XOR: break;
    }
    throw Error(ErrorCode::DimensionMismatch, "XOR is a two-qubit gate");
}

}  // namespace qtele
