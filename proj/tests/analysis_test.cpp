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

#include "qtele/analysis.hpp"

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qtele/circuit.hpp"

namespace qtele {
namespace {

using C = std::complex<double>;
using Mat = DensityMatrix<double>::Matrix;
const double kH = 1.0 / std::sqrt(2.0);

PureState<> phi_plus_state() { return make_state<double>(2, {kH, 0, 0, kH}); }

PureState<> dashed(const PureState<> &psi) { return run(alice_program(), tensor(psi, PureState<>::basis(2, 0))); }

TEST(PartialTrace, PhiPlusMarginalIsMaximallyMixed) {
    const auto rho = partial_trace(density_of(phi_plus_state()), {1});
    EXPECT_LE((rho.matrix() - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(purity(rho), 0.5, 1e-15);
}

TEST(PartialTrace, ProductMarginalIsPure) {
    const auto s = tensor(make_state<double>(1, {0.6, 0.8}), PureState<>::basis(1, 0));
    const auto rho = partial_trace(density_of(s), {0});
    Mat want(2, 2);
    want << 0.36, 0.48, 0.48, 0.64;
    EXPECT_LE((rho.matrix() - want).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(purity(rho), 1.0, 1e-15);
}

TEST(PartialTrace, MatchesBruteForceOracle) {
    Rng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 3;
        const auto s = random_state<double>(n, rng);
        std::vector<int> keep;
        for (int q = 0; q < n; ++q) {
            if (rng() % 2) keep.push_back(q);
        }
        if (keep.empty()) keep.push_back(static_cast<int>(rng() % static_cast<unsigned>(n)));
        std::shuffle(keep.begin(), keep.end(), rng);
        const auto got = partial_trace<double>(density_of(s), keep);
        EXPECT_LE((got.matrix() - oracle::reduce_to(s.amplitudes(), keep, n)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(PartialTrace, Composes) {
    // Tracing in two stages equals tracing in one.
    Rng rng(67);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_state<double>(4, rng);
        const auto d = density_of(s);
        const auto staged = partial_trace(partial_trace(d, {0, 2, 3}), {0, 2});
        const auto direct = partial_trace(d, {0, 3});
        EXPECT_LE((staged.matrix() - direct.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(PartialTrace, PreservesTrace) {
    Rng rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_state<double>(3, rng);
        const auto rho = partial_trace(density_of(s), {static_cast<int>(trial % 3)});
        EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_NEAR(rho.matrix().trace().imag(), 0.0, 1e-12);
    }
}

TEST(PartialTrace, ComplementaryPuritiesAgree) {
    Rng rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_state<double>(3, rng);
        const auto d = density_of(s);
        EXPECT_NEAR(purity(partial_trace(d, {0})), purity(partial_trace(d, {1, 2})), 1e-12);
    }
}

TEST(PartialTrace, Errors) {
    const auto d = density_of(PureState<>::basis(2, 0));
    EXPECT_THROW(partial_trace(d, std::span<const int>{}), Error);
    EXPECT_THROW(partial_trace(d, {0, 0}), Error);
    EXPECT_THROW(partial_trace(d, {2}), Error);
}

TEST(Dashed, WireCIsMaximallyMixed) {
    Rng rng(79);
    for (int i = 0; i < 50; ++i) {
        const auto rho = partial_trace(density_of(dashed(random_qubit<double>(rng))), {kWireC});
        EXPECT_LE((rho.matrix() - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Dashed, PlusEntanglesEveryWire) {
    const auto s = dashed(make_state<double>(1, {kH, kH}));
    for (int q = 0; q < 3; ++q) EXPECT_TRUE(entangled_across(s, {q})) << q;
}

TEST(Dashed, ZeroLeavesWireAUnentangled) {
    const auto s = dashed(PureState<>::basis(1, 0));
    EXPECT_FALSE(entangled_across(s, {kWireA}));
    EXPECT_TRUE(entangled_across(s, {kWireB}));
    EXPECT_TRUE(entangled_across(s, {kWireC}));
}

TEST(Entanglement, Errors) {
    EXPECT_THROW(entangled_across(phi_plus_state(), {0, 1}), Error);
    EXPECT_THROW(entangled_across(phi_plus_state(), std::span<const int>{}), Error);
}

TEST(Fidelity, AgainstDensity) {
    const auto plus = make_state<double>(1, {kH, kH});
    EXPECT_NEAR(fidelity(plus, density_of(plus)), 1.0, 1e-15);
    const auto mixed = partial_trace(density_of(phi_plus_state()), {0});
    EXPECT_NEAR(fidelity(plus, mixed), 0.5, 1e-15);
}

TEST(Validation, AcceptsAndRejects) {
    EXPECT_NO_THROW(make_density<double>(1, 0.5 * Mat::Identity(2, 2)));
    Mat not_hermitian(2, 2);
    not_hermitian << 0.5, 0.5, 0, 0.5;
    EXPECT_THROW(make_density<double>(1, not_hermitian), Error);
    EXPECT_THROW(make_density<double>(1, Mat::Identity(2, 2)), Error);
    Mat negative(2, 2);
    negative << 1.5, 0, 0, -0.5;
    EXPECT_THROW(make_density<double>(1, negative), Error);
    EXPECT_THROW(make_density<double>(2, 0.5 * Mat::Identity(2, 2)), Error);
}

TEST(Validation, PureStatesBeyondGershgorin) {
    // Uniform superposition: discs extend below zero, eigenvalues do not.
    const Mat m = Mat::Constant(8, 8, C(1.0 / 8.0));
    EXPECT_TRUE(is_valid_density<double>(m));
    Rng rng(83);
    for (int i = 0; i < 50; ++i) EXPECT_TRUE(is_valid_density<double>(density_of(random_state<double>(3, rng)).matrix()));
}

}  // namespace
}  // namespace qtele
