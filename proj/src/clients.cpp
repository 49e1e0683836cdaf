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

#include "qtele/clients.hpp"

namespace qtele {

using wire::Kind;
using wire::Role;

namespace {

std::vector<WireMessage> apply_steps(const std::string &session, const CircuitProgram &program) {
    std::vector<WireMessage> out;
    for (const auto &step : program.steps) {
        const auto targets = step.targets();
        out.push_back(wire::apply(session, step.gate, std::vector<int>(targets.begin(), targets.end())));
    }
    return out;
}

[[noreturn]] void fail(const WireMessage &m) { throw BrokerFailure(m.code, m.message); }

}  // namespace

AliceMachine::AliceMachine(std::string session, State psi) : session_(std::move(session)), psi_(std::move(psi)) {}

std::vector<WireMessage> AliceMachine::start() const {
    const auto &a = psi_.amplitudes();
    return {wire::hello(session_, Role::Alice, {a.begin(), a.end()})};
}

std::vector<WireMessage> AliceMachine::on_message(const WireMessage &m) {
    switch (m.kind) {
        case Kind::Error:
            fail(m);
        case Kind::EprReady: {
            auto out = apply_steps(session_, encode_program());
            out.push_back(wire::measure(session_, kWireA));
            out.push_back(wire::measure(session_, kWireB));
            return out;
        }
        case Kind::Measured:
            if (!m.wires.empty() && (m.wires[0] == kWireA || m.wires[0] == kWireB)) {
                outcomes_[m.wires[0]] = m.outcome;
            }
            if (outcomes_[0] && outcomes_[1] && !done_) {
                done_ = true;
                return {wire::classical(session_, bits()), wire::bye(session_)};
            }
            return {};
        default:
            return {};
    }
}

BobMachine::BobMachine(std::string session, BobMode mode, bool strict_check)
    : session_(std::move(session)), mode_(mode), strict_(strict_check) {}

std::vector<WireMessage> BobMachine::start() const { return {wire::hello(session_, Role::Bob)}; }

std::optional<ClassicalBits> BobMachine::check() const {
    if (!checks_[0] || !checks_[1]) return std::nullopt;
    return ClassicalBits{*checks_[0], *checks_[1]};
}

std::vector<WireMessage> BobMachine::on_message(const WireMessage &m) {
    switch (m.kind) {
        case Kind::Error:
            fail(m);
        case Kind::Classical: {
            if (received_) return {};
            received_ = m.bits;
            if (mode_ == BobMode::Unitary) {
                auto out = apply_steps(session_, bob_program());
                out.push_back(wire::measure(session_, kWireA));
                out.push_back(wire::measure(session_, kWireB));
                return out;
            }
            std::vector<WireMessage> out;
            for (GateName g : correction_gates(*received_)) out.push_back(wire::apply(session_, g, {kWireC}));
            out.push_back(wire::release(session_));
            return out;
        }
        case Kind::Measured:
            if (!m.wires.empty() && (m.wires[0] == kWireA || m.wires[0] == kWireB)) {
                checks_[m.wires[0]] = m.outcome;
            }
            if (const auto c = check(); c && received_) {
                if (*c != *received_ && strict_) {
                    aborted_ = true;
                    done_ = true;
                    return {wire::bye(session_)};
                }
                return {wire::release(session_)};
            }
            return {};
        case Kind::StateReport:
            fidelity_ = m.fidelity;
            amplitudes_ = m.amps;
            done_ = true;
            return {wire::bye(session_)};
        case Kind::Bye:
            done_ = true;
            return {wire::bye(session_)};
        default:
            return {};
    }
}

namespace {

template <typename Machine>
void pump(Machine &machine, const net::Endpoint &endpoint, const ClientOptions &options) {
    auto sock = net::LineSocket::connect(endpoint, options.idle_timeout);
    auto send_all = [&](const std::vector<WireMessage> &out) {
        for (const auto &m : out) {
            if (options.observer) options.observer(true, m);
            sock.send_line(wire::encode(m));
        }
    };
    send_all(machine.start());
    while (!machine.done()) {
        auto line = sock.read_line();
        if (!line) throw Error(ErrorCode::ConnectionLost, "broker closed the connection");
        const WireMessage m = wire::decode(*line);
        if (options.observer) options.observer(false, m);
        send_all(machine.on_message(m));
    }
}

}  // namespace

ClassicalBits alice_client(const net::Endpoint &endpoint, const State &psi, const ClientOptions &options) {
    AliceMachine machine(options.session, psi);
    pump(machine, endpoint, options);
    return machine.bits();
}

BobOutcome bob_client(const net::Endpoint &endpoint, BobMode mode, const ClientOptions &options) {
    BobMachine machine(options.session, mode, options.strict_check);
    pump(machine, endpoint, options);
    if (machine.aborted()) {
        const auto r = *machine.received();
        const auto c = *machine.check();
        throw Error(ErrorCode::CheckBitMismatch, "received (" + std::to_string(r.u) + "," + std::to_string(r.v) +
                                                     ") but check wires read (" + std::to_string(c.u) + "," +
                                                     std::to_string(c.v) + ")");
    }
    BobOutcome out;
    out.bits = machine.received().value_or(ClassicalBits{});
    out.check = machine.check();
    out.check_ok = !out.check || *out.check == out.bits;
    out.fidelity = machine.reported_fidelity();
    out.amplitudes = machine.reported_amplitudes();
    return out;
}

}  // namespace qtele
