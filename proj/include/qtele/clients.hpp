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

// Alice and Bob as network clients of the broker. Each role is a pure state
// machine (incoming message -> outgoing messages); alice_client and
// bob_client only pump lines between the machine and a socket.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtele/net.hpp"
#include "qtele/protocol.hpp"
#include "qtele/wire.hpp"

namespace qtele {

/// The broker answered with ERROR.
class BrokerFailure : public Error {
   public:
    BrokerFailure(std::string code, const std::string &message)
        : Error(ErrorCode::BrokerError, code + ": " + message), broker_code_(std::move(code)) {}
    const std::string &broker_code() const { return broker_code_; }

   private:
    std::string broker_code_;
};

class AliceMachine {
   public:
    AliceMachine(std::string session, State psi);

    std::vector<WireMessage> start() const;
    /// Throws BrokerFailure on ERROR.
    std::vector<WireMessage> on_message(const WireMessage &m);

    bool done() const { return done_; }
    ClassicalBits bits() const { return {*outcomes_[0], *outcomes_[1]}; }

   private:
    std::string session_;
    State psi_;
    std::optional<int> outcomes_[2];
    bool done_ = false;
};

class BobMachine {
   public:
    BobMachine(std::string session, BobMode mode, bool strict_check);

    std::vector<WireMessage> start() const;
    /// Throws BrokerFailure on ERROR.
    std::vector<WireMessage> on_message(const WireMessage &m);

    bool done() const { return done_; }
    /// Check bits disagreed with the received bits under strict checking.
    bool aborted() const { return aborted_; }
    std::optional<ClassicalBits> received() const { return received_; }
    std::optional<ClassicalBits> check() const;
    std::optional<double> reported_fidelity() const { return fidelity_; }
    const std::vector<std::complex<double>> &reported_amplitudes() const { return amplitudes_; }

   private:
    std::string session_;
    BobMode mode_;
    bool strict_;
    std::optional<ClassicalBits> received_;
    std::optional<int> checks_[2];
    std::optional<double> fidelity_;
    std::vector<std::complex<double>> amplitudes_;
    bool done_ = false;
    bool aborted_ = false;
};

struct ClientOptions {
    std::string session = "default";
    std::chrono::milliseconds idle_timeout = net::kDefaultIdleTimeout;
    bool strict_check = false;
    /// Observer for every message sent (outgoing = true) or received.
    std::function<void(bool outgoing, const WireMessage &)> observer;
};

/// Joins as Alice, teleports psi and returns the bits she sent.
ClassicalBits alice_client(const net::Endpoint &endpoint, const State &psi, const ClientOptions &options = {});

struct BobOutcome {
    ClassicalBits bits;
    std::optional<ClassicalBits> check;
    bool check_ok = true;
    /// Present only when the broker runs with test hooks.
    std::optional<double> fidelity;
    std::vector<std::complex<double>> amplitudes;
};

/// Joins as Bob and decodes. Throws Error(CheckBitMismatch) when strict
/// checking is on and the check bits disagree with the received bits.
BobOutcome bob_client(const net::Endpoint &endpoint, BobMode mode, const ClientOptions &options = {});

}  // namespace qtele
