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

// Subcommand drivers behind the qtele executable. Each validates its config
// before doing anything observable and returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qtele/protocol.hpp"

namespace qtele::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

enum class OutputFormat { Text, Json, Csv };

struct RunConfig {
    /// "zero", "one", "plus", "random" or "re0,im0,re1,im1".
    std::string psi_spec = "random";
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    BobMode mode = BobMode::Unitary;
    OutputFormat format = OutputFormat::Text;
    bool show_circuit = false;
    bool strict_check = false;
    std::string listen = "127.0.0.1:0";
    std::string connect = "127.0.0.1:7300";
    bool test_hooks = false;
    std::string session = "default";
    std::optional<std::size_t> max_sessions;
};

/// Mystery qubit for a given trial. "random" draws from the psi stream of
/// (seed, trial). Throws Error(BadPsiSpec); `warn` receives a note when an
/// explicit amplitude pair had to be renormalized by more than 1e-6.
State resolve_psi(const std::string &spec, std::uint64_t seed, std::uint64_t trial, std::ostream *warn = nullptr);

int cmd_simulate(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_teleport(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_dashed_line(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_entangle_check(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_serve(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_alice(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_bob(const RunConfig &cfg, std::ostream &out, std::ostream &err);

}  // namespace qtele::cli
