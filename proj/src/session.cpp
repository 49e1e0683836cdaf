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

#include "qtele/session.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtele/analysis.hpp"

namespace qtele {

using wire::Kind;
using wire::Role;
namespace codes = wire::codes;

namespace {
Role other(Role r) { return r == Role::Alice ? Role::Bob : Role::Alice; }
constexpr int kCircuitWires = 3;
}  // namespace

std::string_view phase_name(Phase phase) {
    switch (phase) {
        case Phase::WaitingPeers: return "WaitingPeers";
        case Phase::Distributed: return "Distributed";
        case Phase::Encoded: return "Encoded";
        case Phase::Decoded: return "Decoded";
        case Phase::Closed: return "Closed";
    }
    return "?";
}

Session::Session(std::string id, Rng rng, SessionOptions options)
    : id_(std::move(id)), rng_(rng), options_(options) {}

bool Session::owns(Role role, int wire) const {
    switch (phase_) {
        case Phase::Distributed:
            return role == Role::Alice ? (wire == kWireA || wire == kWireB) : wire == kWireC;
        case Phase::Encoded:
            return role == Role::Bob && wire >= 0 && wire < kCircuitWires;
        default:
            return false;
    }
}

std::vector<Envelope> Session::reject(Role to, std::string_view code, std::string message) const {
    return {{to, wire::error(id_, code, std::move(message))}};
}

std::vector<Envelope> Session::handle(Role from, const wire::Message &m) {
    if (phase_ == Phase::Closed) return reject(from, codes::kSessionClosed, "session is closed");
    if (m.kind == Kind::Hello) return on_hello(from, m);
    if (!joined_[index(from)]) return reject(from, codes::kNotJoined, "send HELLO first");
    switch (m.kind) {
        case Kind::Apply: return on_apply(from, m);
        case Kind::Measure: return on_measure(from, m);
        case Kind::Classical: return on_classical(from, m);
        case Kind::Release: return on_release(from);
        case Kind::Bye: return on_bye(from);
        default:
            return reject(from, codes::kBadKind,
                          std::string(wire::kind_name(m.kind)) + " is not accepted from clients");
    }
}

std::vector<Envelope> Session::on_hello(Role from, const wire::Message &m) {
    if (joined_[index(from)]) {
        return reject(from, codes::kRoleTaken, std::string(wire::role_name(from)) + " already joined");
    }
    if (phase_ != Phase::WaitingPeers) return reject(from, codes::kOrderViolation, "session already started");
    if (m.role != from) return reject(from, codes::kBadArgument, "HELLO role does not match connection");
    if (from == Role::Alice) {
        try {
            psi_ = make_state<double>(1, m.amps);
            // Keep the sender's amplitudes bit for bit when they are already
            // unit norm to round-off.
            const AmplitudeVector<double> sent = Eigen::Map<const AmplitudeVector<double>>(m.amps.data(), 2);
            if (std::abs(sent.squaredNorm() - 1.0) <= 8 * std::numeric_limits<double>::epsilon()) {
                psi_ = State(1, sent, detail::trusted);
            }
        } catch (const Error &e) {
            return reject(from, codes::kBadArgument, std::string("bad mystery qubit: ") + e.what());
        }
    } else if (!m.amps.empty()) {
        return reject(from, codes::kBadArgument, "bob does not bring a qubit");
    }
    joined_[index(from)] = true;
    connected_[index(from)] = true;
    if (!joined_[0] || !joined_[1]) return {};

    joint_ = tensor(*psi_, prepare_epr().joint);
    phase_ = Phase::Distributed;
    return {{Role::Alice, wire::epr_ready(id_, {kWireA, kWireB})}, {Role::Bob, wire::epr_ready(id_, {kWireC})}};
}

std::vector<Envelope> Session::on_apply(Role from, const wire::Message &m) {
    if (phase_ != Phase::Distributed && phase_ != Phase::Encoded) {
        return reject(from, codes::kOrderViolation, "APPLY outside the active phases");
    }
    if (!m.gate || static_cast<int>(m.wires.size()) != arity(*m.gate)) {
        return reject(from, codes::kBadArgument, "gate and wire count do not match");
    }
    for (int w : m.wires) {
        if (w < 0 || w >= kCircuitWires) return reject(from, codes::kBadArgument, "wire " + std::to_string(w) + " does not exist");
    }
    if (m.wires.size() == 2 && m.wires[0] == m.wires[1]) {
        return reject(from, codes::kBadArgument, "XOR needs two distinct wires");
    }
    for (int w : m.wires) {
        if (!owns(from, w)) {
            return reject(from, codes::kNotOwner,
                          std::string(wire::role_name(from)) + " does not own wire " + wire_label(w));
        }
    }
    const GateStep step = m.wires.size() == 2 ? GateStep::exclusive_or(m.wires[0], m.wires[1])
                                              : GateStep::single(*m.gate, m.wires[0]);
    joint_ = apply_step(*joint_, step);
    return {};
}

std::vector<Envelope> Session::on_measure(Role from, const wire::Message &m) {
    if (phase_ != Phase::Distributed && phase_ != Phase::Encoded) {
        return reject(from, codes::kOrderViolation, "MEASURE outside the active phases");
    }
    if (m.wires.size() != 1 || m.wires[0] < 0 || m.wires[0] >= kCircuitWires) {
        return reject(from, codes::kBadArgument, "MEASURE takes exactly one existing wire");
    }
    const int w = m.wires[0];
    if (!owns(from, w)) {
        return reject(from, codes::kNotOwner, std::string(wire::role_name(from)) + " does not own wire " + wire_label(w));
    }
    auto record = measure(*joint_, w, rng_);
    joint_ = std::move(record.post_state);
    if (from == Role::Alice) alice_outcomes_[static_cast<std::size_t>(w)] = record.outcome;
    return {{from, wire::measured(id_, w, record.outcome)}};
}

std::vector<Envelope> Session::on_classical(Role from, const wire::Message &m) {
    if (from != Role::Alice) return reject(from, codes::kOrderViolation, "only alice sends classical bits");
    if (phase_ != Phase::Distributed) return reject(from, codes::kOrderViolation, "bits already sent");
    if (!alice_outcomes_[0] || !alice_outcomes_[1]) {
        return reject(from, codes::kOrderViolation, "measure wires a and b before sending bits");
    }
    // Bob's wires a, b are rebuilt from what Alice actually measured; the
    // relayed bits are passed on verbatim so Bob's check can catch a
    // corrupted channel.
    State rebuilt;
    try {
        rebuilt = reinject(*joint_, *alice_outcomes_[0], *alice_outcomes_[1]);
    } catch (const Error &) {
        return reject(from, codes::kOrderViolation, "wires a and b are no longer in their measured states");
    }
    joint_ = std::move(rebuilt);
    phase_ = Phase::Encoded;
    return {{Role::Bob, wire::classical(id_, m.bits.value_or(ClassicalBits{}))}};
}

std::vector<Envelope> Session::on_release(Role from) {
    if (from != Role::Bob || phase_ != Phase::Encoded) {
        return reject(from, codes::kOrderViolation, "RELEASE is bob's last step after the bits arrive");
    }
    phase_ = Phase::Decoded;
    if (!options_.test_hooks) return {{Role::Bob, wire::bye(id_)}};

    State z;
    double fid = 0;
    try {
        z = factor_out(*joint_, {kWireC});
        fid = fidelity(z, *psi_);
    } catch (const Error &) {
        // Wire c is still entangled with a, b: report the most likely branch
        // and the fidelity of the reduced state.
        const auto outcomes = enumerate_outcomes(*joint_, {kWireA, kWireB});
        const auto best = std::max_element(outcomes.begin(), outcomes.end(),
                                           [](const auto &x, const auto &y) { return x.probability < y.probability; });
        z = factor_out(*best->post_state, {kWireC});
        fid = fidelity(*psi_, partial_trace(density_of(*joint_), {kWireC}));
    }
    std::vector<std::complex<double>> amps(z.amplitudes().begin(), z.amplitudes().end());
    return {{Role::Bob, wire::state_report(id_, std::move(amps), fid)}};
}

std::vector<Envelope> Session::on_bye(Role from) {
    if (from == Role::Alice && phase_ < Phase::Encoded) {
        return close_and_notify(from, "alice left before sending her bits");
    }
    if (from == Role::Bob) {
        if (phase_ == Phase::Decoded) {
            phase_ = Phase::Closed;
            return {};
        }
        return close_and_notify(from, "bob left before releasing his qubit");
    }
    return {};
}

std::vector<Envelope> Session::disconnect(Role who) {
    connected_[index(who)] = false;
    if (phase_ == Phase::Closed) return {};
    if (who == Role::Alice && phase_ >= Phase::Encoded) return {};
    if (who == Role::Bob && phase_ == Phase::Decoded) {
        phase_ = Phase::Closed;
        return {};
    }
    return close_and_notify(who, std::string(wire::role_name(who)) + " disconnected");
}

std::vector<Envelope> Session::close_and_notify(Role leaving, std::string why) {
    phase_ = Phase::Closed;
    const Role peer = other(leaving);
    if (!joined_[index(peer)] || !connected_[index(peer)]) return {};
    return {{peer, wire::error(id_, codes::kPeerDisconnect, std::move(why))}};
}

}  // namespace qtele
