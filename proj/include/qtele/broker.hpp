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

// The quantum-state broker: holds each session's joint state and lets the
// two roles touch it only through ownership-checked commands. Everything a
// role sends to the other passes through here, and only CLASSICAL crosses
// from Alice to Bob.

#include <array>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "qtele/net.hpp"
#include "qtele/session.hpp"

namespace qtele {

struct BrokerOptions {
    net::Endpoint listen;
    /// Session k (in order of creation, from 0) measures with Rng(seed, k).
    std::uint64_t seed = 0;
    bool test_hooks = false;
    std::chrono::milliseconds idle_timeout = net::kDefaultIdleTimeout;
    /// Stop serving once this many sessions have finished.
    std::optional<std::size_t> max_sessions;
};

class Broker {
   public:
    /// Binds immediately so port() is valid before run().
    explicit Broker(BrokerOptions options);
    Broker(const Broker &) = delete;
    Broker &operator=(const Broker &) = delete;
    ~Broker();

    std::uint16_t port() const { return listener_.port(); }

    /// Serves until stop() or until max_sessions sessions have finished.
    void run();

    /// run() on a background thread.
    void start();

    void stop();

    std::size_t sessions_finished() const { return finished_.load(); }

   private:
    struct Connection;
    struct Slot;

    void serve(std::shared_ptr<Connection> conn);
    std::shared_ptr<Slot> slot_for(const std::string &id);
    void route(Slot &slot, const std::vector<Envelope> &envelopes);
    void release_slot(const std::shared_ptr<Slot> &slot);

    BrokerOptions options_;
    net::Listener listener_;
    std::atomic<bool> stopping_{false};
    std::atomic<std::size_t> finished_{0};
    std::uint64_t next_index_ = 0;

    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
    std::vector<std::weak_ptr<Connection>> live_;
    std::size_t active_ = 0;
    std::condition_variable idle_;
    std::thread background_;
};

/// Runs a broker in the calling thread. `on_listening` receives the bound
/// port before the first accept.
void broker_serve(const BrokerOptions &options, const std::function<void(std::uint16_t)> &on_listening = {});

}  // namespace qtele
