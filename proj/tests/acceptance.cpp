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

// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include <fmt/format.h>

#include <chrono>
#include <functional>
#include <future>
#include <json.hpp>
#include <random>
#include <string>

#include "oracle.hpp"
#include "process.hpp"
#include "qtele/analysis.hpp"
#include "qtele/broker.hpp"
#include "qtele/clients.hpp"
#include "qtele/commands.hpp"
#include "qtele/protocol.hpp"
#include "qtele/session.hpp"
#include "qtele/stats.hpp"

namespace qtele {
namespace {

using namespace std::chrono_literals;
using Clock = std::chrono::steady_clock;
using C = std::complex<double>;
using Mat = oracle::Mat;

constexpr ClassicalBits kBranches[4] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
const double kH = 1.0 / std::sqrt(2.0);

struct Verdict {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string &what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }
};

Verdict gate_entries() {
    Verdict v;
    for (GateName g : kAllGates) {
        const Mat built = g == GateName::XOR ? Mat(gate_XOR()) : Mat(single_qubit_matrix(g));
        v.require(built == oracle::literal(g), fmt::format("{} entries differ", gate_name(g)));
        const Mat id = Mat::Identity(built.rows(), built.cols());
        v.require((built.adjoint() * built - id).cwiseAbs().maxCoeff() <= 1e-15,
                  fmt::format("{} not unitary", gate_name(g)));
    }
    const double lr = (gate_L() * gate_R() - Gate1<double>::Identity()).cwiseAbs().maxCoeff();
    const double rl = (gate_R() * gate_L() - Gate1<double>::Identity()).cwiseAbs().maxCoeff();
    v.require(lr <= 1e-15 && rl <= 1e-15, fmt::format("LR-I {:.3g}, RL-I {:.3g}", lr, rl));
    if (v.ok) v.detail = fmt::format("7 gates exact; |LR-I|={:.1g} |RL-I|={:.1g}", lr, rl);
    return v;
}

Verdict transfer() {
    Verdict v;
    Rng rng(20260001, 0, Stream::Psi);
    const State phi = make_state<double>(1, {kH, kH});
    double worst = 1;
    for (int i = 0; i < 100; ++i) {
        const State psi = random_qubit<double>(rng);
        const State out = run(full_program(), tensor(psi, State::basis(2, 0)));
        const double f = fidelity(psi, partial_trace(density_of(out), {kWireC}));
        worst = std::min(worst, f);
        v.require(f >= 1 - 1e-9, fmt::format("wire-c fidelity {:.17g}", f));
        v.require(equal_up_to_global_phase(out, tensor(tensor(phi, phi), psi), 1e-9), "output is not |phi phi psi>");
    }
    if (v.ok) v.detail = fmt::format("100 states; min wire-c fidelity {:.17g}", worst);
    return v;
}

Verdict dashed_line() {
    Verdict v;
    Rng rng(20260002, 0, Stream::Psi);
    double worst_p = 0;
    for (int i = 0; i < 100; ++i) {
        const State psi = random_qubit<double>(rng);
        const State dashed = run(alice_program(), tensor(psi, State::basis(2, 0)));
        for (const auto &o : enumerate_outcomes(dashed, {kWireA, kWireB})) {
            worst_p = std::max(worst_p, std::abs(o.probability - 0.25));
            v.require(std::abs(o.probability - 0.25) <= 1e-9, fmt::format("branch probability {}", o.probability));
            const int u = o.bits[0], w = o.bits[1];
            const State resent = run(bob_program(), reinject(*o.post_state, u, w));
            v.require(equal_up_to_global_phase(resent, tensor(State::basis(2, static_cast<Index>(2 * u + w)), psi), 1e-9),
                      fmt::format("branch ({},{}) is not |uv psi>", u, w));
        }
    }
    if (v.ok) v.detail = fmt::format("100 states x 4 branches; max |p-1/4| {:.2g}", worst_p);
    return v;
}

Verdict randomness() {
    Verdict v;
    Rng rng(20260003, 0, Stream::Psi);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const State psi = random_qubit<double>(rng);
        const auto rho = partial_trace(density_of(run(alice_program(), tensor(psi, State::basis(2, 0)))), {kWireC});
        const double d = (rho.matrix() - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff();
        worst = std::max(worst, d);
        v.require(d <= 1e-9, fmt::format("wire-c marginal off I/2 by {:.3g}", d));
    }
    std::array<std::uint64_t, 4> counts{};
    const State psi = make_state<double>(1, {0.6, C(0, 0.8)});
    for (std::uint64_t k = 0; k < 10000; ++k) {
        const auto t = teleport_once(psi, BobMode::Classical, 20260004, k);
        ++counts[static_cast<std::size_t>(2 * t.bits.u + t.bits.v)];
    }
    const double stat = chi_square_uniform(counts);
    const double p = chi_square_p_df3(stat);
    v.require(p > 0.001, fmt::format("chi-square {:.3f}, p {:.3g}", stat, p));
    if (v.ok) {
        v.detail = fmt::format("marginal max dev {:.2g}; counts {}/{}/{}/{} chi2={:.3f} p={:.3f}", worst, counts[0],
                               counts[1], counts[2], counts[3], stat, p);
    }
    return v;
}

Verdict mode_equivalence() {
    Verdict v;
    Rng rng(20260005, 0, Stream::Psi);
    for (int i = 0; i < 50; ++i) {
        const State psi = random_qubit<double>(rng);
        for (auto bits : kBranches) {
            const auto alice = alice_encode_branch(psi, prepare_epr(), bits);
            v.require(alice.has_value(), "branch unreachable");
            if (!alice) continue;
            const auto unitary = bob_decode_unitary(bits, alice->collapsed_remote);
            const State classical = bob_decode_classical(bits, alice->collapsed_remote);
            v.require(unitary.check == bits, "check bits differ from sent bits");
            v.require(equal_up_to_global_phase(unitary.z, classical, 1e-9),
                      fmt::format("modes disagree on branch ({},{})", bits.u, bits.v));
        }
    }
    // Re-derive the correction table: Bob's branch map from the oracle matrix
    // of Alice's program, composed with the frozen correction, must be a phase.
    const Mat alice = oracle::program_matrix(alice_program(), 3);
    for (auto bits : kBranches) {
        Mat k(2, 2);
        for (int col = 0; col < 2; ++col) {
            for (int c = 0; c < 2; ++c) k(c, col) = 2.0 * alice(4 * bits.u + 2 * bits.v + c, 4 * col);
        }
        const Mat product = correction_matrix(bits) * k;
        const C phase = product(0, 0);
        v.require(std::abs(std::abs(phase) - 1) <= 1e-12 &&
                      (product - phase * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12,
                  fmt::format("correction for ({},{}) does not invert the branch", bits.u, bits.v));
    }
    if (v.ok) v.detail = "4 branches x 50 states agree; correction table re-derived";
    return v;
}

Verdict entanglement() {
    Verdict v;
    const State partial = make_state<double>(2, {0.6, 0, 0, 0.8});
    double worst = 1;
    for (const State &chi : {phi_plus(), partial}) {
        for (BobMode mode : {BobMode::Unitary, BobMode::Classical}) {
            for (auto bits : kBranches) {
                const auto f = teleport_entangled_branch(chi, mode, bits);
                v.require(f.has_value(), "branch unreachable");
                if (f) {
                    worst = std::min(worst, *f);
                    v.require(std::abs(*f - 1) <= 1e-9, fmt::format("joint fidelity {:.17g}", *f));
                }
            }
        }
    }
    if (v.ok) v.detail = fmt::format("phi+ and 0.6/0.8, both modes, all branches; min fidelity {:.17g}", worst);
    return v;
}

Verdict two_xor_cost() {
    Verdict v;
    std::size_t by_scan = 0;
    for (const auto &step : alice_program().steps) by_scan += step.targets().size() == 2 ? 1 : 0;
    v.require(alice_program().two_qubit_count() == 2 && by_scan == 2,
              fmt::format("alice uses {} two-qubit steps", by_scan));
    if (v.ok) v.detail = "alice's side has 2 XOR steps";
    return v;
}

// Drives Alice over a raw socket, trying to touch Bob's wire before her turn.
std::pair<ClassicalBits, int> fuzzing_alice(const net::Endpoint &ep, const State &psi, const std::string &id,
                                            std::mt19937_64 &gen, Verdict &v) {
    auto sock = net::LineSocket::connect(ep, 5s);
    AliceMachine machine(id, psi);
    for (const auto &m : machine.start()) sock.send_line(wire::encode(m));
    auto first = sock.read_line();
    v.require(first && wire::decode(*first).kind == wire::Kind::EprReady, "alice did not get EPR_READY");
    int rejected = 0;
    for (int k = 0; k < 120; ++k) {
        constexpr GateName kSingles[] = {GateName::L, GateName::S, GateName::T, GateName::X, GateName::Z};
        const wire::Message probe =
            gen() % 2 ? wire::measure(id, kWireC) : wire::apply(id, kSingles[gen() % 5], {kWireC});
        sock.send_line(wire::encode(probe));
        const auto reply = sock.read_line();
        const bool is_error = reply && wire::decode(*reply).kind == wire::Kind::Error;
        v.require(is_error, "foreign command was not rejected");
        rejected += is_error ? 1 : 0;
    }
    std::vector<WireMessage> pending = machine.on_message(wire::decode(*first));
    while (!machine.done()) {
        for (const auto &m : pending) sock.send_line(wire::encode(m));
        auto line = sock.read_line();
        if (!line) throw Error(ErrorCode::ConnectionLost, "broker closed");
        pending = machine.on_message(wire::decode(*line));
    }
    for (const auto &m : pending) sock.send_line(wire::encode(m));
    return {machine.bits(), rejected};
}

Verdict distributed_parity() {
    Verdict v;
    const std::uint64_t seed = 20260008;

    // Three processes: broker, bob, alice.
    using testing::Child;
    const std::string bin = QTELE_BINARY;
    for (BobMode mode : {BobMode::Unitary, BobMode::Classical}) {
        const std::string s = std::to_string(seed);
        Child serve({bin, "serve", "--listen", "127.0.0.1:0", "--seed", s, "--test-hooks", "--max-sessions", "1"});
        const auto banner = serve.read_line();
        v.require(banner.has_value(), "broker did not start");
        if (!banner) return v;
        const std::string endpoint = banner->substr(banner->rfind(' ') + 1);
        Child bob({bin, "bob", "--connect", endpoint, "--format", "json", "--mode", std::string(mode_name(mode))});
        Child alice({bin, "alice", "--connect", endpoint, "--psi", "random", "--seed", s, "--format", "json"});
        const auto alice_out = nlohmann::json::parse(alice.read_all());
        const auto bob_out = nlohmann::json::parse(bob.read_all());
        v.require(alice.wait() == 0 && bob.wait() == 0 && serve.wait() == 0, "a process exited with an error");
        const auto expected = teleport_once(cli::resolve_psi("random", seed, 0), mode, seed, 0);
        v.require(alice_out["u"] == expected.bits.u && alice_out["v"] == expected.bits.v, "alice's bits differ");
        v.require(bob_out["u"] == expected.bits.u && bob_out["v"] == expected.bits.v, "bob's bits differ");
        v.require(bob_out.contains("fidelity") && bob_out["fidelity"].get<double>() == expected.fidelity,
                  "fidelity is not bit-identical");
    }

    // Ownership fuzz inside a session: every foreign command is an ERROR and
    // leaves the joint state alone.
    std::mt19937_64 gen(seed);
    int attempts = 0;
    for (int round = 0; round < 20; ++round) {
        Session session("f", Rng(seed, static_cast<std::uint64_t>(round)), {});
        session.handle(wire::Role::Alice, wire::hello("f", wire::Role::Alice, {C(0.6), C(0, 0.8)}));
        session.handle(wire::Role::Bob, wire::hello("f", wire::Role::Bob));
        for (int k = 0; k < 10; ++k) {
            const wire::Role who = gen() % 2 ? wire::Role::Alice : wire::Role::Bob;
            const int w = who == wire::Role::Alice ? kWireC : static_cast<int>(gen() % 2);
            const State before = *session.joint();
            const auto out = gen() % 2 ? session.handle(who, wire::measure("f", w))
                                       : session.handle(who, wire::apply("f", GateName::X, {w}));
            v.require(out.size() == 1 && out[0].message.kind == wire::Kind::Error, "fuzz got a non-ERROR reply");
            v.require(*session.joint() == before && session.phase() == Phase::Distributed, "fuzz mutated the state");
            ++attempts;
        }
    }

    // Same over TCP: a fuzzing alice still reproduces the in-process run.
    Broker broker(BrokerOptions{.listen = {"127.0.0.1", 0}, .seed = seed, .test_hooks = true, .idle_timeout = 5s,
                                .max_sessions = {}});
    broker.start();
    const net::Endpoint ep{"127.0.0.1", broker.port()};
    const State psi = cli::resolve_psi("random", seed, 0);
    ClientOptions bob_opts;
    bob_opts.session = "fuzz";
    auto bob = std::async(std::launch::async, [&] { return bob_client(ep, BobMode::Unitary, bob_opts); });
    std::this_thread::sleep_for(50ms);
    const auto [bits, rejected] = fuzzing_alice(ep, psi, "fuzz", gen, v);
    const BobOutcome outcome = bob.get();
    const auto expected = teleport_once(psi, BobMode::Unitary, seed, 0);
    v.require(bits == expected.bits && outcome.bits == expected.bits, "bits changed under fuzzing");
    v.require(outcome.fidelity && *outcome.fidelity == expected.fidelity, "fidelity changed under fuzzing");
    attempts += rejected;

    if (v.ok) {
        v.detail = fmt::format("3-process runs match (bits {}{}, fidelity {:.17g}); {} fuzz commands all ERROR",
                               expected.bits.u, expected.bits.v, expected.fidelity, attempts);
    }
    return v;
}

Verdict property_suites() {
    Verdict v;
    Rng rng(20260009);
    int norm_cases = 0, xor_cases = 0, trace_cases = 0, completeness_cases = 0;
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + t % 3;
        State s = random_state<double>(n, rng);
        for (int d = 0; d < 20; ++d) {
            const GateName g = kAllGates[rng() % 7];
            const int a = static_cast<int>(rng() % static_cast<unsigned>(n));
            const int b = (a + 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1))) % n;
            s = g == GateName::XOR ? apply_2q(s, a, b, gate_XOR()) : apply_1q(s, a, single_qubit_matrix(g));
        }
        v.require(std::abs(s.squared_norm() - 1) <= 1e-9, "norm drifted");
        ++norm_cases;

        const int c = static_cast<int>(rng() % static_cast<unsigned>(n));
        const int tg = (c + 1) % n;
        const State twice = apply_2q(apply_2q(s, c, tg, gate_XOR()), c, tg, gate_XOR());
        v.require((twice.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff() <= 1e-12, "XOR twice is not identity");
        ++xor_cases;

        const State four = random_state<double>(4, rng);
        const auto d = density_of(four);
        const double gap =
            (partial_trace(partial_trace(d, {0, 2, 3}), {0, 2}).matrix() - partial_trace(d, {0, 3}).matrix())
                .cwiseAbs()
                .maxCoeff();
        v.require(gap <= 1e-12, "partial traces do not compose");
        ++trace_cases;

        std::vector<int> qubits;
        for (int q = 0; q < n; ++q) {
            if (q == 0 || rng() % 2) qubits.push_back(q);
        }
        double total = 0;
        for (const auto &o : enumerate_outcomes<double>(s, qubits)) total += o.probability;
        v.require(std::abs(total - 1) <= 1e-12, "outcome probabilities do not sum to 1");
        ++completeness_cases;
    }
    if (v.ok) {
        v.detail = fmt::format("norm {} / XOR involution {} / partial-trace composition {} / completeness {} cases",
                               norm_cases, xor_cases, trace_cases, completeness_cases);
    }
    return v;
}

struct Criterion {
    int number;
    const char *name;
    std::function<Verdict()> check;
    std::optional<std::chrono::milliseconds> budget;
};

}  // namespace
}  // namespace qtele

int main() {
    using namespace qtele;
    const Criterion criteria[] = {
        {1, "gate matrices", gate_entries, 1000ms},
        {2, "transfer to output z", transfer, 1000ms},
        {3, "dashed-line measure and resend", dashed_line, 2000ms},
        {4, "randomness of (u,v) and wire c", randomness, std::nullopt},
        {5, "classical and unitary bob agree", mode_equivalence, std::nullopt},
        {6, "entanglement teleportation", entanglement, std::nullopt},
        {7, "two XORs on alice's side", two_xor_cost, std::nullopt},
        {8, "distributed parity and ownership", distributed_parity, 10000ms},
        {9, "property suites", property_suites, std::nullopt},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto start = Clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception &e) {
            v.ok = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
        if (c.budget && elapsed > *c.budget) {
            if (v.ok) v.detail = fmt::format("took {} ms, limit {} ms", elapsed.count(), c.budget->count());
            v.ok = false;
        }
        failures += v.ok ? 0 : 1;
        fmt::print("[{}] {} {}: {} ({} ms)\n", v.ok ? "PASS" : "FAIL", c.number, c.name, v.detail, elapsed.count());
    }
    fmt::print("{} of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
