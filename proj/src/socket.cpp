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

#include "qtele/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "qtele/error.hpp"
#include "qtele/wire.hpp"

namespace qtele::net {

namespace {

std::string errno_text() { return std::strerror(errno); }

sockaddr_in resolve(const Endpoint &endpoint) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(endpoint.port);
    std::string host = endpoint.host == "localhost" ? "127.0.0.1" : endpoint.host;
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;

    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo *res = nullptr;
    if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
        throw Error(ErrorCode::ConnectionLost, "cannot resolve host '" + endpoint.host + "'");
    }
    addr.sin_addr = reinterpret_cast<sockaddr_in *>(res->ai_addr)->sin_addr;
    ::freeaddrinfo(res);
    return addr;
}

}  // namespace

Endpoint parse_endpoint(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
        throw Error(ErrorCode::MalformedLine, "endpoint must look like host:port");
    }
    unsigned port = 0;
    const auto digits = text.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || port > 65535) {
        throw Error(ErrorCode::MalformedLine, "bad port in endpoint '" + std::string(text) + "'");
    }
    return {std::string(text.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

LineSocket::LineSocket(LineSocket &&other) noexcept : fd_(other.fd_), buffer_(std::move(other.buffer_)) {
    other.fd_ = -1;
}

LineSocket &LineSocket::operator=(LineSocket &&other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = other.fd_;
        buffer_ = std::move(other.buffer_);
        other.fd_ = -1;
    }
    return *this;
}

LineSocket::~LineSocket() {
    if (fd_ >= 0) ::close(fd_);
}

LineSocket LineSocket::connect(const Endpoint &endpoint, std::chrono::milliseconds idle_timeout) {
    const sockaddr_in addr = resolve(endpoint);
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw Error(ErrorCode::ConnectionLost, "socket: " + errno_text());
    LineSocket sock(fd);
    if (::connect(fd, reinterpret_cast<const sockaddr *>(&addr), sizeof addr) != 0) {
        throw Error(ErrorCode::ConnectionLost,
                    "cannot connect to " + endpoint.host + ":" + std::to_string(endpoint.port) + ": " + errno_text());
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    sock.set_idle_timeout(idle_timeout);
    return sock;
}

void LineSocket::set_idle_timeout(std::chrono::milliseconds timeout) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
}

void LineSocket::send_line(std::string_view line) {
    std::string data(line);
    data.push_back('\n');
    std::lock_guard lock(write_mutex_);
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error(ErrorCode::ConnectionLost, "send: " + errno_text());
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::optional<std::string> LineSocket::read_line() {
    for (;;) {
        const auto newline = buffer_.find('\n');
        if (newline != std::string::npos) {
            std::string line = buffer_.substr(0, newline);
            buffer_.erase(0, newline + 1);
            if (line.size() > wire::kMaxLineBytes) throw Error(ErrorCode::OversizeLine, "incoming line exceeds 64 KiB");
            return line;
        }
        if (buffer_.size() > wire::kMaxLineBytes) throw Error(ErrorCode::OversizeLine, "incoming line exceeds 64 KiB");
        char chunk[4096];
        const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n == 0) return std::nullopt;
        if (n < 0) {
            if (errno == EINTR) continue;
            if (errno == EAGAIN || errno == EWOULDBLOCK) throw Error(ErrorCode::ConnectionLost, "idle timeout");
            throw Error(ErrorCode::ConnectionLost, "recv: " + errno_text());
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

void LineSocket::shutdown() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Listener::Listener(const Endpoint &endpoint) {
    const sockaddr_in addr = resolve(endpoint);
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw Error(ErrorCode::ConnectionLost, "socket: " + errno_text());
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd_, reinterpret_cast<const sockaddr *>(&addr), sizeof addr) != 0 || ::listen(fd_, 64) != 0) {
        const std::string why = errno_text();
        ::close(fd_);
        fd_ = -1;
        throw Error(ErrorCode::ConnectionLost, "cannot listen on " + endpoint.host + ":" +
                                                   std::to_string(endpoint.port) + ": " + why);
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(fd_, reinterpret_cast<sockaddr *>(&bound), &len);
    port_ = ntohs(bound.sin_port);
}

Listener::~Listener() {
    if (fd_ >= 0) ::close(fd_);
}

std::optional<LineSocket> Listener::accept(std::chrono::milliseconds timeout) {
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (ready <= 0) return std::nullopt;
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) return std::nullopt;
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return LineSocket(fd);
}

}  // namespace qtele::net
