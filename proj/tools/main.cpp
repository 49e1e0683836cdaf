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

// qtele: command-line front end for the teleportation simulator and the
// networked Alice/Bob harness.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "qtele/commands.hpp"

namespace {

using qtele::cli::OutputFormat;
using qtele::cli::RunConfig;

void add_common(CLI::App &cmd, RunConfig &cfg) {
    cmd.add_option("--psi", cfg.psi_spec, "Mystery qubit: zero|one|plus|random|re0,im0,re1,im1");
    cmd.add_option("--seed", cfg.seed, "Seed for every random choice");
    cmd.add_option("--format", cfg.format, "Output format: text|json|csv")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{
                {"text", OutputFormat::Text}, {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}},
            CLI::ignore_case));
}

void add_mode(CLI::App &cmd, RunConfig &cfg) {
    cmd.add_option("--mode", cfg.mode, "Bob's decoder: unitary-bob|classical-bob")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, qtele::BobMode>{{"unitary-bob", qtele::BobMode::Unitary},
                                                  {"classical-bob", qtele::BobMode::Classical},
                                                  {"unitary", qtele::BobMode::Unitary},
                                                  {"classical", qtele::BobMode::Classical}}));
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum teleportation circuit simulator and two-party harness"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto *simulate = app.add_subcommand("simulate", "Run the full circuit on |psi 0 0> and report each output wire");
    add_common(*simulate, cfg);
    simulate->add_flag("--show-circuit", cfg.show_circuit, "Print the gate program");

    auto *teleport = app.add_subcommand("teleport", "Seeded in-process teleportation runs");
    add_common(*teleport, cfg);
    add_mode(*teleport, cfg);
    teleport->add_option("--trials", cfg.trials, "Number of runs");
    teleport->add_flag("--strict-check", cfg.strict_check, "Fail if Bob's check bits disagree");

    auto *dashed = app.add_subcommand("dashed-line", "Measure-and-resend experiment at the Alice/Bob cut");
    add_common(*dashed, cfg);
    dashed->add_option("--trials", cfg.trials, "Number of runs");

    auto *entangle = app.add_subcommand("entangle-check", "Purity of each wire at the Alice/Bob cut");
    add_common(*entangle, cfg);

    auto *serve = app.add_subcommand("serve", "Run the quantum-state broker");
    serve->add_option("--listen", cfg.listen, "host:port to listen on (port 0 picks one)");
    serve->add_option("--seed", cfg.seed, "Measurement seed");
    serve->add_flag("--test-hooks", cfg.test_hooks, "Report Bob's final qubit and fidelity on RELEASE");
    serve->add_option("--max-sessions", cfg.max_sessions, "Exit after this many finished sessions");

    auto *alice = app.add_subcommand("alice", "Join a broker session as Alice");
    add_common(*alice, cfg);
    alice->add_option("--connect", cfg.connect, "Broker host:port");
    alice->add_option("--session", cfg.session, "Session id");

    auto *bob = app.add_subcommand("bob", "Join a broker session as Bob");
    add_mode(*bob, cfg);
    bob->add_option("--connect", cfg.connect, "Broker host:port");
    bob->add_option("--session", cfg.session, "Session id");
    bob->add_option("--format", cfg.format, "Output format: text|json")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{{"text", OutputFormat::Text}, {"json", OutputFormat::Json}}));
    bob->add_flag("--strict-check", cfg.strict_check, "Abort with CheckBitMismatch if check bits disagree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qtele::cli::kExitUsage;
    }

    using namespace qtele::cli;
    if (*simulate) return cmd_simulate(cfg, std::cout, std::cerr);
    if (*teleport) return cmd_teleport(cfg, std::cout, std::cerr);
    if (*dashed) return cmd_dashed_line(cfg, std::cout, std::cerr);
    if (*entangle) return cmd_entangle_check(cfg, std::cout, std::cerr);
    if (*serve) return cmd_serve(cfg, std::cout, std::cerr);
    if (*alice) return cmd_alice(cfg, std::cout, std::cerr);
    if (*bob) return cmd_bob(cfg, std::cout, std::cerr);
    return kExitUsage;
}
