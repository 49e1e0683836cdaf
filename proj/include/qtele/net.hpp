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

// Minimal blocking TCP plumbing for newline-delimited messages.

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace qtele::net {

struct Endpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;
};

/// Parses "host:port". Throws Error(MalformedLine) on bad input.
Endpoint parse_endpoint(std::string_view text);

inline constexpr std::chrono::milliseconds kDefaultIdleTimeout{10'000};

/// Owning socket descriptor that reads and writes whole lines.
class LineSocket {
   public:
    LineSocket() = default;
    explicit LineSocket(int fd) : fd_(fd) {}
    LineSocket(LineSocket &&other) noexcept;
    LineSocket &operator=(LineSocket &&other) noexcept;
    LineSocket(const LineSocket &) = delete;
    LineSocket &operator=(const LineSocket &) = delete;
    ~LineSocket();

    /// Throws Error(ConnectionLost) if nothing is listening.
    static LineSocket connect(const Endpoint &endpoint,
                              std::chrono::milliseconds idle_timeout = kDefaultIdleTimeout);

    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }

    void set_idle_timeout(std::chrono::milliseconds timeout);

    /// Sends `line` plus a newline. Safe to call from several threads.
    void send_line(std::string_view line);

    /// Next line without its newline, or nullopt on orderly EOF. Throws
    /// Error(ConnectionLost) on timeout or reset and Error(OversizeLine) when
    /// a line exceeds 64 KiB.
    std::optional<std::string> read_line();

    /// Unblocks pending reads in other threads.
    void shutdown();

   private:
    int fd_ = -1;
    std::string buffer_;
    std::mutex write_mutex_;
};

class Listener {
   public:
    /// Binds and listens; port 0 picks an ephemeral port.
    explicit Listener(const Endpoint &endpoint);
    Listener(const Listener &) = delete;
    Listener &operator=(const Listener &) = delete;
    ~Listener();

    std::uint16_t port() const { return port_; }

    /// Waits up to `timeout` for a connection.
    std::optional<LineSocket> accept(std::chrono::milliseconds timeout);

   private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

}  // namespace qtele::net
