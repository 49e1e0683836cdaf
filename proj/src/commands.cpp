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

#include "qtele/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "qtele/analysis.hpp"
#include "qtele/broker.hpp"
#include "qtele/circuit.hpp"
#include "qtele/clients.hpp"
#include "qtele/stats.hpp"

namespace qtele::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double kPass = 1.0 - tol::kComparison;

double parse_number(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::BadPsiSpec, "'" + std::string(text) + "' is not a number");
    }
    return value;
}

State plus_state() {
    const double h = 1.0 / std::sqrt(2.0);
    return make_state<double>(1, {h, h});
}

/// Validates everything a command needs before it produces output.
void validate(const RunConfig &cfg) {
    if (cfg.trials < 1) throw Error(ErrorCode::BadPsiSpec, "--trials must be at least 1");
    resolve_psi(cfg.psi_spec, cfg.seed, 0);
}

std::string format_complex(std::complex<double> a) {
    return fmt::format("{:.10f}{}{:.10f}i", a.real() == 0 ? 0.0 : a.real(), a.imag() < 0 ? '-' : '+',
                       std::abs(a.imag()));
}

json amps_json(const State &s) {
    json arr = json::array();
    for (Index i = 0; i < s.dim(); ++i) arr.push_back({s[i].real(), s[i].imag()});
    return arr;
}

json matrix_json(const DensityMatrix<double> &d) {
    json rows = json::array();
    for (Index r = 0; r < d.dim(); ++r) {
        json row = json::array();
        for (Index c = 0; c < d.dim(); ++c) row.push_back({d(r, c).real(), d(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

template <typename F>
int guarded(std::ostream &err, F &&body) {
    try {
        return body();
    } catch (const BrokerFailure &e) {
        fmt::print(err, "error: {}\n", e.broker_code());
        fmt::print(err, "{}\n", e.what());
        return kExitFailure;
    } catch (const Error &e) {
        fmt::print(err, "error: {}\n", e.what());
        const bool usage = e.code() == ErrorCode::BadPsiSpec || e.code() == ErrorCode::MalformedLine;
        return usage ? kExitUsage : kExitFailure;
    }
}

const char *bits_label(ClassicalBits b) {
    static const char *labels[4] = {"00", "01", "10", "11"};
    return labels[b.u * 2 + b.v];
}

}  // namespace

State resolve_psi(const std::string &spec, std::uint64_t seed, std::uint64_t trial, std::ostream *warn) {
    if (spec == "zero") return State::basis(1, 0);
    if (spec == "one") return State::basis(1, 1);
    if (spec == "plus") return plus_state();
    if (spec == "random") {
        Rng rng(seed, trial, Stream::Psi);
        return random_qubit<double>(rng);
    }
    std::vector<double> parts;
    std::size_t start = 0;
    for (;;) {
        const auto comma = spec.find(',', start);
        parts.push_back(parse_number(std::string_view(spec).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 4) {
        throw Error(ErrorCode::BadPsiSpec, "expected zero|one|plus|random or re0,im0,re1,im1; got '" + spec + "'");
    }
    const std::complex<double> amps[2] = {{parts[0], parts[1]}, {parts[2], parts[3]}};
    try {
        auto normalized = normalize_state<double>(1, amps);
        if (warn && normalized.correction > tol::kConstruction) {
            fmt::print(*warn, "warning: psi renormalized (norm was off by {:.3g})\n", normalized.correction);
        }
        return normalized.state;
    } catch (const Error &e) {
        throw Error(ErrorCode::BadPsiSpec, e.what());
    }
}

int cmd_simulate(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        validate(cfg);
        const State psi = resolve_psi(cfg.psi_spec, cfg.seed, 0, &err);
        const State input = tensor(psi, State::basis(2, 0));
        const CircuitProgram program = full_program();
        const State final_state = run(program, input);
        const auto rho = density_of(final_state);
        const State phi = plus_state();

        struct WireReport {
            const char *wire;
            DensityMatrix<double> marginal;
            const char *target;
            double fidelity;
        };
        std::vector<WireReport> wires;
        for (int w : {kWireA, kWireB, kWireC}) {
            const int keep[1] = {w};
            auto m = partial_trace(rho, keep);
            const bool is_output = w == kWireC;
            const double f = fidelity(is_output ? psi : phi, m);
            wires.push_back({w == kWireA ? "x" : w == kWireB ? "y" : "z", std::move(m), is_output ? "psi" : "phi", f});
        }
        const bool ok = std::all_of(wires.begin(), wires.end(), [](const auto &w) { return w.fidelity >= kPass; });

        switch (cfg.format) {
            case OutputFormat::Json: {
                json j;
                j["psi"] = amps_json(psi);
                if (cfg.show_circuit) {
                    json steps = json::array();
                    for (const auto &s : program.steps) steps.push_back(to_string(s));
                    j["circuit"] = steps;
                }
                j["final"] = amps_json(final_state);
                for (const auto &w : wires) {
                    j["wires"][w.wire] = {{"target", w.target},
                                          {"fidelity", w.fidelity},
                                          {"purity", purity(w.marginal)},
                                          {"marginal", matrix_json(w.marginal)}};
                }
                j["ok"] = ok;
                out << j.dump() << '\n';
                break;
            }
            case OutputFormat::Csv:
                out << "wire,target,fidelity,purity\n";
                for (const auto &w : wires) {
                    fmt::print(out, "{},{},{},{}\n", w.wire, w.target, w.fidelity, purity(w.marginal));
                }
                break;
            case OutputFormat::Text:
                fmt::print(out, "input psi: {}\n", to_string(psi));
                if (cfg.show_circuit) {
                    out << "circuit:\n";
                    for (const auto &s : program.steps) fmt::print(out, "  {}\n", to_string(s));
                }
                fmt::print(out, "final state: {}\n", to_string(final_state));
                for (const auto &w : wires) {
                    fmt::print(out, "wire {}: fidelity vs {} = {:.12f}, purity = {:.12f}\n", w.wire, w.target,
                               w.fidelity, purity(w.marginal));
                    fmt::print(out, "  marginal = [[{}, {}], [{}, {}]]\n", format_complex(w.marginal(0, 0)),
                               format_complex(w.marginal(0, 1)), format_complex(w.marginal(1, 0)),
                               format_complex(w.marginal(1, 1)));
                }
                fmt::print(out, "result: {}\n", ok ? "PASS" : "FAIL");
                break;
        }
        return ok ? kExitOk : kExitFailure;
    });
}

int cmd_teleport(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        validate(cfg);
        std::array<std::uint64_t, 4> histogram{};
        double min_fidelity = 1.0;
        double sum_fidelity = 0.0;
        std::uint64_t check_mismatches = 0;
        if (cfg.format == OutputFormat::Csv) {
            out << "trial,seed,mode,u,v,check_x,check_y,fidelity,psi0_re,psi0_im,psi1_re,psi1_im\n";
        }
        for (std::int64_t k = 0; k < cfg.trials; ++k) {
            const auto trial = static_cast<std::uint64_t>(k);
            const State psi = resolve_psi(cfg.psi_spec, cfg.seed, trial, k == 0 ? &err : nullptr);
            const TeleportTranscript t = teleport_once(psi, cfg.mode, cfg.seed, trial);
            ++histogram[static_cast<std::size_t>(t.bits.u * 2 + t.bits.v)];
            min_fidelity = std::min(min_fidelity, t.fidelity);
            sum_fidelity += t.fidelity;
            if (t.bob_check && *t.bob_check != t.bits) ++check_mismatches;

            switch (cfg.format) {
                case OutputFormat::Json: {
                    json j;
                    j["trial"] = t.trial;
                    j["seed"] = t.seed;
                    j["mode"] = mode_name(t.mode);
                    j["u"] = t.bits.u;
                    j["v"] = t.bits.v;
                    if (t.bob_check) {
                        j["check_x"] = t.bob_check->u;
                        j["check_y"] = t.bob_check->v;
                    }
                    j["fidelity"] = t.fidelity;
                    j["psi0_re"] = psi[0].real();
                    j["psi0_im"] = psi[0].imag();
                    j["psi1_re"] = psi[1].real();
                    j["psi1_im"] = psi[1].imag();
                    out << j.dump() << '\n';
                    break;
                }
                case OutputFormat::Csv:
                    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{}\n", t.trial, t.seed, mode_name(t.mode),
                               t.bits.u, t.bits.v, t.bob_check ? std::to_string(t.bob_check->u) : "",
                               t.bob_check ? std::to_string(t.bob_check->v) : "", t.fidelity, psi[0].real(),
                               psi[0].imag(), psi[1].real(), psi[1].imag());
                    break;
                case OutputFormat::Text:
                    fmt::print(out, "trial {:>4}  bits {}  fidelity {:.12f}\n", t.trial, bits_label(t.bits),
                               t.fidelity);
                    break;
            }
        }
        const double chi2 = chi_square_uniform(histogram);
        const double p = chi_square_p_df3(chi2);
        const double mean = sum_fidelity / static_cast<double>(cfg.trials);
        const bool ok = min_fidelity >= kPass && (check_mismatches == 0 || !cfg.strict_check);
        switch (cfg.format) {
            case OutputFormat::Json: {
                json j;
                j["record"] = "summary";
                j["trials"] = cfg.trials;
                j["min_fidelity"] = min_fidelity;
                j["mean_fidelity"] = mean;
                j["histogram"] = {{"00", histogram[0]}, {"01", histogram[1]}, {"10", histogram[2]}, {"11", histogram[3]}};
                j["chi_square"] = chi2;
                j["p_value"] = p;
                j["check_mismatches"] = check_mismatches;
                j["ok"] = ok;
                out << j.dump() << '\n';
                break;
            }
            case OutputFormat::Csv:
                fmt::print(err, "summary: min_fidelity={} mean_fidelity={} hist={}/{}/{}/{} chi_square={} p={}\n",
                           min_fidelity, mean, histogram[0], histogram[1], histogram[2], histogram[3], chi2, p);
                break;
            case OutputFormat::Text:
                fmt::print(out, "trials {}  min fidelity {:.12f}  mean fidelity {:.12f}\n", cfg.trials, min_fidelity,
                           mean);
                fmt::print(out, "bits histogram 00:{} 01:{} 10:{} 11:{}  chi-square {:.4f} (p = {:.4f})\n",
                           histogram[0], histogram[1], histogram[2], histogram[3], chi2, p);
                fmt::print(out, "result: {}\n", ok ? "PASS" : "FAIL");
                break;
        }
        return ok ? kExitOk : kExitFailure;
    });
}

int cmd_dashed_line(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        validate(cfg);
        bool ok = true;
        if (cfg.format == OutputFormat::Csv) {
            out << "trial,u,v,fidelity_uvpsi,fidelity_z,unmeasured_diff\n";
        }
        for (std::int64_t k = 0; k < cfg.trials; ++k) {
            const auto trial = static_cast<std::uint64_t>(k);
            const State psi = resolve_psi(cfg.psi_spec, cfg.seed, trial, k == 0 ? &err : nullptr);
            Rng rng(cfg.seed, trial, Stream::Measurement);
            const auto result = measure_resend_experiment(psi, rng);
            const State expected = tensor(State::basis(2, (result.u << 1) | result.v), psi);
            const double f_full = fidelity(expected, result.final_state);
            const auto z_measured = partial_trace(density_of(result.final_state), {kWireC});
            const double f_z = fidelity(psi, z_measured);
            const auto z_unmeasured =
                partial_trace(density_of(run(full_program(), tensor(psi, State::basis(2, 0)))), {kWireC});
            const double diff = (z_measured.matrix() - z_unmeasured.matrix()).cwiseAbs().maxCoeff();
            const bool row_ok = f_full >= kPass && f_z >= kPass && diff <= tol::kComparison;
            ok = ok && row_ok;

            switch (cfg.format) {
                case OutputFormat::Json: {
                    json j;
                    j["trial"] = trial;
                    j["u"] = result.u;
                    j["v"] = result.v;
                    j["fidelity_uvpsi"] = f_full;
                    j["fidelity_z"] = f_z;
                    j["unmeasured_diff"] = diff;
                    out << j.dump() << '\n';
                    break;
                }
                case OutputFormat::Csv:
                    fmt::print(out, "{},{},{},{},{},{}\n", trial, result.u, result.v, f_full, f_z, diff);
                    break;
                case OutputFormat::Text:
                    fmt::print(out,
                               "trial {:>4}  (u,v)=({},{})  fidelity vs |uv psi> {:.12f}  wire z vs psi {:.12f}  "
                               "max diff vs unmeasured run {:.3e}\n",
                               trial, result.u, result.v, f_full, f_z, diff);
                    break;
            }
        }
        if (cfg.format == OutputFormat::Json) {
            json j;
            j["record"] = "summary";
            j["trials"] = cfg.trials;
            j["ok"] = ok;
            out << j.dump() << '\n';
        } else if (cfg.format == OutputFormat::Text) {
            fmt::print(out, "result: {}\n", ok ? "PASS" : "FAIL");
        }
        return ok ? kExitOk : kExitFailure;
    });
}

int cmd_entangle_check(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        validate(cfg);
        const State psi = resolve_psi(cfg.psi_spec, cfg.seed, 0, &err);
        const State dashed = run(alice_program(), tensor(psi, State::basis(2, 0)));
        const auto rho = density_of(dashed);

        if (cfg.format == OutputFormat::Csv) out << "wire,purity,verdict\n";
        json j;
        if (cfg.format == OutputFormat::Json) j["psi"] = amps_json(psi);
        for (int w : {kWireA, kWireB, kWireC}) {
            const int keep[1] = {w};
            const double p = purity(partial_trace(rho, keep));
            const char *verdict = entangled_across(dashed, std::span<const int>(keep)) ? "entangled" : "product";
            const std::string name = wire_label(w);
            switch (cfg.format) {
                case OutputFormat::Json:
                    j["wires"][name] = {{"purity", p}, {"verdict", verdict}};
                    break;
                case OutputFormat::Csv:
                    fmt::print(out, "{},{},{}\n", name, p, verdict);
                    break;
                case OutputFormat::Text:
                    fmt::print(out, "wire {} | rest: purity {:.12f}  {}\n", name, p, verdict);
                    break;
            }
        }
        if (cfg.format == OutputFormat::Json) out << j.dump() << '\n';
        return kExitOk;
    });
}

int cmd_serve(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        BrokerOptions options;
        options.listen = net::parse_endpoint(cfg.listen);
        options.seed = cfg.seed;
        options.test_hooks = cfg.test_hooks;
        options.max_sessions = cfg.max_sessions;
        broker_serve(options, [&](std::uint16_t port) {
            fmt::print(out, "listening on {}:{}\n", options.listen.host, port);
            out.flush();
        });
        return kExitOk;
    });
}

int cmd_alice(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto endpoint = net::parse_endpoint(cfg.connect);
        const State psi = resolve_psi(cfg.psi_spec, cfg.seed, 0, &err);
        ClientOptions options;
        options.session = cfg.session;
        const ClassicalBits bits = alice_client(endpoint, psi, options);
        if (cfg.format == OutputFormat::Json) {
            json j;
            j["role"] = "alice";
            j["u"] = bits.u;
            j["v"] = bits.v;
            j["psi"] = amps_json(psi);
            out << j.dump() << '\n';
        } else {
            fmt::print(out, "alice sent bits {}{}\n", bits.u, bits.v);
        }
        return kExitOk;
    });
}

int cmd_bob(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto endpoint = net::parse_endpoint(cfg.connect);
        ClientOptions options;
        options.session = cfg.session;
        options.strict_check = cfg.strict_check;
        const BobOutcome result = bob_client(endpoint, cfg.mode, options);
        const bool fidelity_ok = !result.fidelity || *result.fidelity >= kPass;
        if (cfg.format == OutputFormat::Json) {
            json j;
            j["role"] = "bob";
            j["mode"] = mode_name(cfg.mode);
            j["u"] = result.bits.u;
            j["v"] = result.bits.v;
            if (result.check) {
                j["check_x"] = result.check->u;
                j["check_y"] = result.check->v;
            }
            j["check_ok"] = result.check_ok;
            if (result.fidelity) j["fidelity"] = *result.fidelity;
            out << j.dump() << '\n';
        } else {
            fmt::print(out, "bob received bits {}{}\n", result.bits.u, result.bits.v);
            if (result.check) {
                fmt::print(out, "check wires read {}{} ({})\n", result.check->u, result.check->v,
                           result.check_ok ? "match" : "MISMATCH");
            }
            if (result.fidelity) fmt::print(out, "reported fidelity {:.17g}\n", *result.fidelity);
        }
        return fidelity_ok ? kExitOk : kExitFailure;
    });
}

}  // namespace qtele::cli
