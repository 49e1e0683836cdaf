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

// One teleportation session as held by the broker: the joint three-qubit
// state, which role owns which wire, and the phase. Pure state machine with
// no I/O; the broker feeds it messages and routes what comes back.
//
// Ownership by phase:
//   WaitingPeers  nobody
//   Distributed   alice: a (mystery), b (σ)   bob: c (ρ)
//   Encoded       bob: a, b (rebuilt from Alice's bits), c
//   Decoded       nobody
//   Closed        nobody
//
// Measurement randomness comes from the session's own Rng. Alice's two
// measurements draw first, Bob's check measurements (if any) after, so the
// bits match an in-process run seeded with the same stream.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtele/protocol.hpp"
#include "qtele/wire.hpp"

namespace qtele {

enum class Phase { WaitingPeers, Distributed, Encoded, Decoded, Closed };

std::string_view phase_name(Phase phase);

struct Envelope {
    wire::Role to;
    wire::Message message;
};

struct SessionOptions {
    /// Answer RELEASE with STATE_REPORT instead of BYE.
    bool test_hooks = false;
};

class Session {
   public:
    Session(std::string id, Rng rng, SessionOptions options = {});

    /// Processes one message from `from`. Rejected messages produce a single
    /// ERROR envelope back to the sender and leave the session untouched.
    std::vector<Envelope> handle(wire::Role from, const wire::Message &message);

    /// The connection of `who` went away.
    std::vector<Envelope> disconnect(wire::Role who);

    const std::string &id() const { return id_; }
    Phase phase() const { return phase_; }
    bool joined(wire::Role role) const { return joined_[index(role)]; }
    const std::optional<State> &joint() const { return joint_; }
    const std::optional<State> &psi() const { return psi_; }
    bool owns(wire::Role role, int wire) const;

    /// True once the session is closed and neither role is connected.
    bool finished() const { return phase_ == Phase::Closed && !connected_[0] && !connected_[1]; }

   private:
    static std::size_t index(wire::Role role) { return role == wire::Role::Alice ? 0 : 1; }

    std::vector<Envelope> reject(wire::Role to, std::string_view code, std::string message) const;
    std::vector<Envelope> on_hello(wire::Role from, const wire::Message &m);
    std::vector<Envelope> on_apply(wire::Role from, const wire::Message &m);
    std::vector<Envelope> on_measure(wire::Role from, const wire::Message &m);
    std::vector<Envelope> on_classical(wire::Role from, const wire::Message &m);
    std::vector<Envelope> on_release(wire::Role from);
    std::vector<Envelope> on_bye(wire::Role from);
    std::vector<Envelope> close_and_notify(wire::Role leaving, std::string why);

    std::string id_;
    Rng rng_;
    SessionOptions options_;
    Phase phase_ = Phase::WaitingPeers;
    std::array<bool, 2> joined_{false, false};
    std::array<bool, 2> connected_{false, false};
    std::optional<State> psi_;
    std::optional<State> joint_;
    std::array<std::optional<int>, 2> alice_outcomes_;
};

}  // namespace qtele
