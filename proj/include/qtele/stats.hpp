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

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace qtele {

/// Pearson statistic of four counts against the uniform distribution.
inline double chi_square_uniform(const std::array<std::uint64_t, 4> &counts) {
    double total = 0;
    for (auto c : counts) total += static_cast<double>(c);
    const double expected = total / 4.0;
    double stat = 0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

/// Upper-tail probability of a chi-square variable with 3 degrees of freedom.
inline double chi_square_p_df3(double stat) {
    if (stat <= 0) return 1.0;
    return std::erfc(std::sqrt(stat / 2.0)) + std::sqrt(2.0 * stat / std::numbers::pi) * std::exp(-stat / 2.0);
}

}  // namespace qtele
