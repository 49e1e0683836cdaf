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

#include "qtele/broker.hpp"

#include <functional>

namespace qtele {

using wire::Kind;
using wire::Role;

struct Broker::Connection {
    net::LineSocket socket;
    void send(const wire::Message &m) {
        try {
            socket.send_line(wire::encode(m));
        } catch (const Error &) {
            // Peer already gone; its own thread reports the disconnect.
        }
    }
};

struct Broker::Slot {
    std::mutex mutex;
    Session session;
    std::array<std::shared_ptr<Connection>, 2> peers;
    bool counted = false;

    Slot(std::string id, Rng rng, SessionOptions options) : session(std::move(id), rng, options) {}
};

namespace {
std::size_t role_index(Role r) { return r == Role::Alice ? 0 : 1; }
}  // namespace

Broker::Broker(BrokerOptions options) : options_(std::move(options)), listener_(options_.listen) {}

Broker::~Broker() {
    stop();
    if (background_.joinable()) background_.join();
}

void Broker::start() { background_ = std::thread([this] { run(); }); }

void Broker::stop() { stopping_ = true; }

void Broker::run() {
    while (!stopping_) {
        auto sock = listener_.accept(std::chrono::milliseconds(50));
        if (!sock) continue;
        sock->set_idle_timeout(options_.idle_timeout);
        auto conn = std::make_shared<Connection>(Connection{std::move(*sock)});
        std::lock_guard lock(mutex_);
        std::erase_if(live_, [](const auto &weak) { return weak.expired(); });
        live_.push_back(conn);
        ++active_;
        std::thread([this, conn] {
            serve(conn);
            std::lock_guard done(mutex_);
            if (--active_ == 0) idle_.notify_all();
        }).detach();
    }
    std::unique_lock lock(mutex_);
    for (auto &weak : live_) {
        if (auto conn = weak.lock()) conn->socket.shutdown();
    }
    idle_.wait(lock, [this] { return active_ == 0; });
}

std::shared_ptr<Broker::Slot> Broker::slot_for(const std::string &id) {
    std::lock_guard lock(mutex_);
    auto &slot = sessions_[id];
    if (!slot) {
        const SessionOptions session_options{.test_hooks = options_.test_hooks};
        slot = std::make_shared<Slot>(id, Rng(options_.seed, next_index_++, Stream::Measurement), session_options);
    }
    return slot;
}

void Broker::route(Slot &slot, const std::vector<Envelope> &envelopes) {
    for (const auto &env : envelopes) {
        if (auto &peer = slot.peers[role_index(env.to)]) peer->send(env.message);
    }
}

void Broker::release_slot(const std::shared_ptr<Slot> &slot) {
    // Caller holds slot->mutex.
    if (!slot->session.finished() || slot->counted) return;
    slot->counted = true;
    {
        std::lock_guard lock(mutex_);
        auto it = sessions_.find(slot->session.id());
        if (it != sessions_.end() && it->second == slot) sessions_.erase(it);
    }
    const std::size_t done = ++finished_;
    if (options_.max_sessions && done >= *options_.max_sessions) stopping_ = true;
}

void Broker::serve(std::shared_ptr<Connection> conn) {
    std::shared_ptr<Slot> slot;
    Role role = Role::Alice;
    try {
        while (!stopping_) {
            auto line = conn->socket.read_line();
            if (!line) break;
            wire::Message msg;
            try {
                msg = wire::decode(*line);
            } catch (const Error &e) {
                conn->send(wire::error(slot ? slot->session.id() : "", wire::codes::kMalformed, e.what()));
                continue;
            }

            if (!slot) {
                if (msg.kind != Kind::Hello) {
                    conn->send(wire::error(msg.session, wire::codes::kNotJoined, "send HELLO first"));
                    continue;
                }
                auto candidate = slot_for(msg.session);
                std::lock_guard lock(candidate->mutex);
                const Role r = msg.role.value_or(Role::Alice);
                if (candidate->peers[role_index(r)] || candidate->session.joined(r)) {
                    conn->send(wire::error(msg.session, wire::codes::kRoleTaken,
                                           std::string(wire::role_name(r)) + " already joined"));
                    continue;
                }
                candidate->peers[role_index(r)] = conn;
                auto out = candidate->session.handle(r, msg);
                if (!candidate->session.joined(r)) {
                    candidate->peers[role_index(r)].reset();
                    for (const auto &env : out) conn->send(env.message);
                    continue;
                }
                slot = candidate;
                role = r;
                route(*slot, out);
                continue;
            }

            if (msg.session != slot->session.id()) {
                conn->send(wire::error(slot->session.id(), wire::codes::kBadArgument, "wrong session id"));
                continue;
            }
            std::lock_guard lock(slot->mutex);
            route(*slot, slot->session.handle(role, msg));
            if (msg.kind == Kind::Bye) break;
        }
    } catch (const Error &) {
        // Timeout, reset or oversize line: treated as a disconnect.
    }

    if (slot) {
        std::lock_guard lock(slot->mutex);
        slot->peers[role_index(role)].reset();
        route(*slot, slot->session.disconnect(role));
        release_slot(slot);
    }
    conn->socket.shutdown();
}

void broker_serve(const BrokerOptions &options, const std::function<void(std::uint16_t)> &on_listening) {
    Broker broker(options);
    if (on_listening) on_listening(broker.port());
    broker.run();
}

}  // namespace qtele
