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

#include <gtest/gtest.h>

#include <random>

namespace qtele {
namespace {

using C = std::complex<double>;

ErrorCode decode_error(std::string_view line) {
    try {
        wire::decode(line);
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "decoded without error: " << line;
    return ErrorCode::BadPsiSpec;
}

TEST(Wire, ClassicalRoundTrip) {
    const auto m = wire::classical("s1", {1, 0});
    const std::string line = wire::encode(m);
    EXPECT_EQ(line, R"({"kind":"CLASSICAL","session":"s1","u":1,"v":0})");
    EXPECT_EQ(wire::decode(line), m);
}

TEST(Wire, ApplyEncoding) {
    EXPECT_EQ(wire::encode(wire::apply("x", GateName::XOR, {0, 1})),
              R"({"gate":"XOR","kind":"APPLY","session":"x","wires":[0,1]})");
}

TEST(Wire, AmplitudesAreDecimalStrings) {
    const std::string line = wire::encode(wire::hello("s", wire::Role::Alice, {C(0.6, 0), C(0, 0.8)}));
    EXPECT_NE(line.find(R"("5.9999999999999998e-01")"), std::string::npos) << line;
}

TEST(Wire, UnknownKind) {
    EXPECT_EQ(decode_error(R"({"kind":"FOO","session":"s"})"), ErrorCode::UnknownKind);
}

TEST(Wire, Oversize) {
    std::string line = R"({"kind":"BYE","session":")" + std::string(wire::kMaxLineBytes, 'x') + R"("})";
    EXPECT_EQ(decode_error(line), ErrorCode::OversizeLine);
}

TEST(Wire, Malformed) {
    for (const char *line : {
             "not json",
             "[1,2]",
             R"({"session":"s"})",
             R"({"kind":"BYE"})",
             R"({"kind":"BYE","session":"s","extra":1})",
             R"({"kind":"CLASSICAL","session":"s","u":2,"v":0})",
             R"({"kind":"CLASSICAL","session":"s","u":1})",
             R"({"kind":"APPLY","session":"s","gate":"H","wires":[0]})",
             R"({"kind":"HELLO","session":"s","role":"eve"})",
             R"({"kind":"STATE_REPORT","session":"s","amps":[["1","0"]],"fidelity":"abc"})",
             R"({"kind":"STATE_REPORT","session":"s","amps":[[1]],"fidelity":"1"})",
             R"({"kind":"MEASURE","session":"s","wires":"a"})",
         }) {
        EXPECT_EQ(decode_error(line), ErrorCode::MalformedLine) << line;
    }
}

TEST(Wire, ToleratesCarriageReturn) {
    EXPECT_EQ(wire::decode("{\"kind\":\"BYE\",\"session\":\"s\"}\r"), wire::bye("s"));
}

TEST(Wire, StateReportPreservesDoublesExactly) {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> dist(-1, 1);
    for (int i = 0; i < 1000; ++i) {
        const double f = std::abs(dist(gen));
        const auto m = wire::state_report("r", {C(dist(gen), dist(gen)), C(dist(gen), dist(gen))}, f);
        const auto back = wire::decode(wire::encode(m));
        EXPECT_EQ(back, m);
        EXPECT_LE(std::abs(*back.fidelity - f), 1e-15);
    }
}

TEST(Wire, RandomMessagesRoundTrip) {
    std::mt19937_64 gen(2);
    auto pick = [&](int n) { return static_cast<int>(gen() % static_cast<unsigned>(n)); };
    for (int i = 0; i < 500; ++i) {
        const std::string session = "s" + std::to_string(pick(1000));
        wire::Message m;
        switch (pick(10)) {
            case 0: m = wire::hello(session, pick(2) ? wire::Role::Alice : wire::Role::Bob, {C(0.6), C(0, -0.8)}); break;
            case 1: m = wire::epr_ready(session, {pick(3)}); break;
            case 2: m = wire::apply(session, kAllGates[pick(7)], {pick(3), pick(3)}); break;
            case 3: m = wire::measure(session, pick(3)); break;
            case 4: m = wire::measured(session, pick(3), pick(2)); break;
            case 5: m = wire::classical(session, {pick(2), pick(2)}); break;
            case 6: m = wire::release(session); break;
            case 7: m = wire::state_report(session, {C(0.1 * pick(10), -0.3)}, 0.5); break;
            case 8: m = wire::error(session, wire::codes::kNotOwner, "msg \"quoted\"\n"); break;
            default: m = wire::bye(session); break;
        }
        EXPECT_EQ(wire::decode(wire::encode(m)), m) << wire::encode(m);
    }
}

TEST(Wire, Names) {
    EXPECT_EQ(wire::parse_kind("STATE_REPORT"), wire::Kind::StateReport);
    EXPECT_EQ(wire::kind_name(wire::Kind::EprReady), "EPR_READY");
    EXPECT_EQ(wire::parse_role("bob"), wire::Role::Bob);
    EXPECT_FALSE(wire::parse_role("carol").has_value());
}

}  // namespace
}  // namespace qtele
