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

#include "qtele/wire.hpp"

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "json.hpp"

namespace qtele::wire {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 10> kKindNames = {"HELLO",    "EPR_READY", "APPLY",        "MEASURE", "MEASURED",
                                                         "CLASSICAL", "RELEASE",  "STATE_REPORT", "ERROR",   "BYE"};

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

[[noreturn]] void malformed(const std::string &why) { throw Error(ErrorCode::MalformedLine, why); }

double parse_double(const json &j) {
    if (!j.is_string()) malformed("floating-point fields must be decimal strings");
    const auto &text = j.get_ref<const std::string &>();
    if (text.empty()) malformed("empty number");
    char *end = nullptr;
    errno = 0;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(value)) {
        malformed("bad number '" + text + "'");
    }
    return value;
}

int parse_bit(const json &j, const char *field) {
    if (!j.is_number_integer()) malformed(std::string(field) + " must be an integer");
    const auto bit = j.get<long long>();
    if (bit != 0 && bit != 1) malformed(std::string(field) + " must be 0 or 1");
    return static_cast<int>(bit);
}

const json &require(const json &obj, const char *field) {
    auto it = obj.find(field);
    if (it == obj.end()) malformed(std::string("missing field '") + field + "'");
    return *it;
}

std::vector<int> parse_wires(const json &j) {
    if (!j.is_array()) malformed("wires must be an array");
    std::vector<int> wires;
    for (const auto &w : j) {
        if (!w.is_number_integer()) malformed("wire indices must be integers");
        const auto value = w.get<long long>();
        if (value < 0 || value >= kMaxQubits) malformed("wire index out of range");
        wires.push_back(static_cast<int>(value));
    }
    return wires;
}

std::vector<std::complex<double>> parse_amps(const json &j) {
    if (!j.is_array()) malformed("amps must be an array");
    std::vector<std::complex<double>> amps;
    for (const auto &pair : j) {
        if (!pair.is_array() || pair.size() != 2) malformed("each amplitude is a [re, im] pair");
        amps.emplace_back(parse_double(pair[0]), parse_double(pair[1]));
    }
    return amps;
}

std::string parse_string(const json &j, const char *field) {
    if (!j.is_string()) malformed(std::string(field) + " must be a string");
    return j.get<std::string>();
}

// Payload keys allowed for each kind, besides "kind" and "session".
const std::set<std::string> &allowed_fields(Kind kind) {
    static const std::array<std::set<std::string>, 10> table = {{
        {"role", "amps"},
        {"wires"},
        {"gate", "wires"},
        {"wires"},
        {"wires", "outcome"},
        {"u", "v"},
        {},
        {"amps", "fidelity"},
        {"code", "message"},
        {},
    }};
    return table[static_cast<std::size_t>(kind)];
}

}  // namespace

std::string_view kind_name(Kind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<Kind> parse_kind(std::string_view text) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == text) return static_cast<Kind>(i);
    }
    return std::nullopt;
}

std::string_view role_name(Role role) { return role == Role::Alice ? "alice" : "bob"; }

std::optional<Role> parse_role(std::string_view text) {
    if (text == "alice") return Role::Alice;
    if (text == "bob") return Role::Bob;
    return std::nullopt;
}

std::string encode(const Message &m) {
    json j;
    j["kind"] = kind_name(m.kind);
    j["session"] = m.session;
    auto amps_json = [&] {
        json arr = json::array();
        for (const auto &a : m.amps) arr.push_back({format_double(a.real()), format_double(a.imag())});
        return arr;
    };
    switch (m.kind) {
        case Kind::Hello:
            j["role"] = role_name(m.role.value_or(Role::Alice));
            if (!m.amps.empty()) j["amps"] = amps_json();
            break;
        case Kind::EprReady:
        case Kind::Measure:
            j["wires"] = m.wires;
            break;
        case Kind::Apply:
            j["gate"] = gate_name(m.gate.value_or(GateName::L));
            j["wires"] = m.wires;
            break;
        case Kind::Measured:
            j["wires"] = m.wires;
            j["outcome"] = m.outcome.value_or(0);
            break;
        case Kind::Classical:
            j["u"] = m.bits.value_or(ClassicalBits{}).u;
            j["v"] = m.bits.value_or(ClassicalBits{}).v;
            break;
        case Kind::StateReport:
            j["amps"] = amps_json();
            j["fidelity"] = format_double(m.fidelity.value_or(0.0));
            break;
        case Kind::Error:
            j["code"] = m.code;
            j["message"] = m.message;
            break;
        case Kind::Release:
        case Kind::Bye:
            break;
    }
    return j.dump();
}

Message decode(std::string_view line) {
    if (line.size() > kMaxLineBytes) {
        throw Error(ErrorCode::OversizeLine, "line of " + std::to_string(line.size()) + " bytes exceeds 64 KiB");
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find('\n') != std::string_view::npos) malformed("embedded newline");

    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) malformed("not a JSON object");

    const json &kind_field = require(j, "kind");
    if (!kind_field.is_string()) malformed("kind must be a string");
    const auto kind = parse_kind(kind_field.get<std::string>());
    if (!kind) throw Error(ErrorCode::UnknownKind, "unknown message kind '" + kind_field.get<std::string>() + "'");

    Message m;
    m.kind = *kind;
    m.session = parse_string(require(j, "session"), "session");

    const auto &allowed = allowed_fields(m.kind);
    for (const auto &[key, value] : j.items()) {
        if (key != "kind" && key != "session" && !allowed.contains(key)) {
            malformed("unexpected field '" + key + "' for " + std::string(kind_name(m.kind)));
        }
    }

    switch (m.kind) {
        case Kind::Hello: {
            const auto role = parse_role(parse_string(require(j, "role"), "role"));
            if (!role) malformed("role must be alice or bob");
            m.role = role;
            if (j.contains("amps")) m.amps = parse_amps(j["amps"]);
            break;
        }
        case Kind::EprReady:
            m.wires = parse_wires(require(j, "wires"));
            break;
        case Kind::Apply: {
            const auto gate = parse_gate_name(parse_string(require(j, "gate"), "gate"));
            if (!gate) malformed("unknown gate");
            m.gate = gate;
            m.wires = parse_wires(require(j, "wires"));
            break;
        }
        case Kind::Measure:
            m.wires = parse_wires(require(j, "wires"));
            break;
        case Kind::Measured:
            m.wires = parse_wires(require(j, "wires"));
            m.outcome = parse_bit(require(j, "outcome"), "outcome");
            break;
        case Kind::Classical:
            m.bits = ClassicalBits{parse_bit(require(j, "u"), "u"), parse_bit(require(j, "v"), "v")};
            break;
        case Kind::StateReport:
            m.amps = parse_amps(require(j, "amps"));
            m.fidelity = parse_double(require(j, "fidelity"));
            break;
        case Kind::Error:
            m.code = parse_string(require(j, "code"), "code");
            m.message = parse_string(require(j, "message"), "message");
            break;
        case Kind::Release:
        case Kind::Bye:
            break;
    }
    return m;
}

Message hello(std::string session, Role role, std::vector<std::complex<double>> psi) {
    Message m{.kind = Kind::Hello, .session = std::move(session), .role = role};
    m.amps = std::move(psi);
    return m;
}

Message epr_ready(std::string session, std::vector<int> wires) {
    return {.kind = Kind::EprReady, .session = std::move(session), .wires = std::move(wires)};
}

Message apply(std::string session, GateName gate, std::vector<int> wires) {
    return {.kind = Kind::Apply, .session = std::move(session), .gate = gate, .wires = std::move(wires)};
}

Message measure(std::string session, int wire) {
    return {.kind = Kind::Measure, .session = std::move(session), .wires = {wire}};
}

Message measured(std::string session, int wire, int outcome) {
    return {.kind = Kind::Measured, .session = std::move(session), .wires = {wire}, .outcome = outcome};
}

Message classical(std::string session, ClassicalBits bits) {
    return {.kind = Kind::Classical, .session = std::move(session), .bits = bits};
}

Message release(std::string session) { return {.kind = Kind::Release, .session = std::move(session)}; }

Message state_report(std::string session, std::vector<std::complex<double>> amps, double fidelity) {
    return {.kind = Kind::StateReport, .session = std::move(session), .amps = std::move(amps), .fidelity = fidelity};
}

Message error(std::string session, std::string_view code, std::string message) {
    return {.kind = Kind::Error, .session = std::move(session), .code = std::string(code), .message = std::move(message)};
}

Message bye(std::string session) { return {.kind = Kind::Bye, .session = std::move(session)}; }

}  // namespace qtele::wire
