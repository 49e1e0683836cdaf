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

#include <cstdint>
#include <limits>
#include <random>

namespace qtele {

/// Named substreams derived from one user seed. Every randomized operation
/// draws from an explicitly passed Rng, never from global state.
enum class Stream : std::uint64_t {
    Measurement = 0,
    Psi = 1,
};

/// Seedable, splittable generator. Built on mt19937_64 seeded through
/// std::seed_seq, both of which are fully specified by the standard, so a
/// (seed, trial, stream) triple yields the same draws on every platform.
class Rng {
   public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed, std::uint64_t trial = 0, Stream stream = Stream::Measurement) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
            static_cast<std::uint32_t>(stream)};
        engine_.seed(seq);
    }

    static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Independent child generator; consumes two draws from this one.
    Rng split() {
        const std::uint64_t a = engine_();
        const std::uint64_t b = engine_();
        return Rng(a, b, Stream::Measurement);
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace qtele
