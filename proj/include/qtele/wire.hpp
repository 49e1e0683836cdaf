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

// Line-delimited messages exchanged between the broker and the two protocol
// roles. Each message is one JSON object on one line; keys are emitted in
// sorted order so the encoding is canonical. Floating-point values travel as
// decimal strings with 17 significant digits, which round-trips doubles
// exactly.
//
// Kinds and their payload fields:
//   HELLO        role, [amps: the mystery qubit, alice only]
//   EPR_READY    wires (the wires the receiving role now owns)
//   APPLY        gate, wires ((control, target) for XOR)
//   MEASURE      wires (exactly one)
//   MEASURED     wires (one), outcome
//   CLASSICAL    u, v
//   RELEASE      -
//   STATE_REPORT amps (Bob's output wire), fidelity
//   ERROR        code, message
//   BYE          -
// Every message carries `session`.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtele/gates.hpp"
#include "qtele/protocol.hpp"

namespace qtele::wire {

inline constexpr std::size_t kMaxLineBytes = 64 * 1024;

enum class Kind { Hello, EprReady, Apply, Measure, Measured, Classical, Release, StateReport, Error, Bye };

enum class Role { Alice, Bob };

std::string_view kind_name(Kind kind);
std::optional<Kind> parse_kind(std::string_view text);
std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view text);

/// Symbolic codes carried in ERROR messages.
namespace codes {
inline constexpr std::string_view kRoleTaken = "ROLE_TAKEN";
inline constexpr std::string_view kNotOwner = "NOT_OWNER";
inline constexpr std::string_view kOrderViolation = "ORDER_VIOLATION";
inline constexpr std::string_view kBadArgument = "BAD_ARGUMENT";
inline constexpr std::string_view kBadKind = "BAD_KIND";
inline constexpr std::string_view kMalformed = "MALFORMED";
inline constexpr std::string_view kNotJoined = "NOT_JOINED";
inline constexpr std::string_view kSessionClosed = "SESSION_CLOSED";
inline constexpr std::string_view kPeerDisconnect = "PEER_DISCONNECT";
}  // namespace codes

struct Message {
    Kind kind = Kind::Bye;
    std::string session{};
    std::optional<Role> role{};
    std::optional<GateName> gate{};
    std::vector<int> wires{};
    std::optional<int> outcome{};
    std::optional<ClassicalBits> bits{};
    std::vector<std::complex<double>> amps{};
    std::optional<double> fidelity{};
    std::string code{};
    std::string message{};

    friend bool operator==(const Message &, const Message &) = default;
};

/// Canonical single-line encoding, without the trailing newline.
std::string encode(const Message &m);

/// Inverse of encode. Throws Error with MalformedLine, UnknownKind or
/// OversizeLine.
Message decode(std::string_view line);

// Constructors for the common messages.
Message hello(std::string session, Role role, std::vector<std::complex<double>> psi = {});
Message epr_ready(std::string session, std::vector<int> wires);
Message apply(std::string session, GateName gate, std::vector<int> wires);
Message measure(std::string session, int wire);
Message measured(std::string session, int wire, int outcome);
Message classical(std::string session, ClassicalBits bits);
Message release(std::string session);
Message state_report(std::string session, std::vector<std::complex<double>> amps, double fidelity);
Message error(std::string session, std::string_view code, std::string message);
Message bye(std::string session);

}  // namespace qtele::wire

namespace qtele {
using WireMessage = wire::Message;
}  // namespace qtele
