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

// Dense pure states over a handful of qubits and the free functions that act
// on them. Qubit 0 is the top wire and the most significant bit of a basis
// index, so the index of |b0 b1 ... b(n-1)> reads as the bitstring itself.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qtele/error.hpp"
#include "qtele/rng.hpp"

namespace qtele {

inline constexpr int kMaxQubits = 8;

/// Tolerances shared across the library.
namespace tol {
inline constexpr double kConstruction = 1e-6;
inline constexpr double kComparison = 1e-9;
inline constexpr double kAlgebra = 1e-12;
}  // namespace tol

template <typename Scalar>
using AmplitudeVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using Gate1 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Gate2 = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

using Index = Eigen::Index;

namespace detail {
struct trusted_t {};
inline constexpr trusted_t trusted{};

inline void check_qubit(int q, int n) {
    if (q < 0 || q >= n) {
        throw Error(ErrorCode::BadQubitIndex,
                    "qubit " + std::to_string(q) + " out of range for " + std::to_string(n) + " qubits");
    }
}

/// Mask selecting qubit q's bit inside a basis index of an n-qubit state.
constexpr Index qubit_mask(int q, int n) { return Index{1} << (n - 1 - q); }
}  // namespace detail

/// Unit-norm amplitude vector over 1..kMaxQubits qubits. Immutable after
/// construction; every operation returns a new state.
template <typename Scalar = double>
class PureState {
   public:
    using Complex = std::complex<Scalar>;
    using Vector = AmplitudeVector<Scalar>;

    /// |0> on one qubit.
    PureState() : n_qubits_(1), amps_(Vector::Unit(2, 0)) {}

    /// Skips validation. Only for callers that already guarantee the
    /// invariants (unit norm, finite entries, matching length).
    PureState(int n_qubits, Vector amps, detail::trusted_t)
        : n_qubits_(n_qubits), amps_(std::move(amps)) {}

    /// Computational basis state |index> on n qubits.
    static PureState basis(int n_qubits, Index index) {
        if (n_qubits < 1 || n_qubits > kMaxQubits) {
            throw Error(ErrorCode::TooManyQubits, "qubit count must be in [1, 8]");
        }
        const Index dim = Index{1} << n_qubits;
        if (index < 0 || index >= dim) {
            throw Error(ErrorCode::LengthMismatch, "basis index out of range");
        }
        Vector v = Vector::Zero(dim);
        v(index) = Complex(1);
        return PureState(n_qubits, std::move(v), detail::trusted);
    }

    /// Basis state from a bitstring such as "010"; the first character is qubit 0.
    static PureState from_bits(std::string_view bits) {
        Index index = 0;
        for (char c : bits) {
            if (c != '0' && c != '1') throw Error(ErrorCode::LengthMismatch, "bitstring must be 0/1");
            index = (index << 1) | (c == '1' ? 1 : 0);
        }
        return basis(static_cast<int>(bits.size()), index);
    }

    int num_qubits() const { return n_qubits_; }
    Index dim() const { return amps_.size(); }
    const Vector &amplitudes() const { return amps_; }
    Complex operator[](Index i) const { return amps_(i); }

    Scalar squared_norm() const { return amps_.squaredNorm(); }

    friend bool operator==(const PureState &a, const PureState &b) {
        return a.n_qubits_ == b.n_qubits_ && a.amps_ == b.amps_;
    }

   private:
    int n_qubits_;
    Vector amps_;
};

namespace detail {
template <typename Scalar>
void validate_amplitudes(int n, const AmplitudeVector<Scalar> &amps) {
    if (n < 1 || n > kMaxQubits) {
        throw Error(ErrorCode::TooManyQubits, "qubit count " + std::to_string(n) + " not in [1, 8]");
    }
    if (amps.size() != (Index{1} << n)) {
        throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(Index{1} << n) +
                                                   " amplitudes, got " + std::to_string(amps.size()));
    }
    for (Index i = 0; i < amps.size(); ++i) {
        if (!std::isfinite(amps(i).real()) || !std::isfinite(amps(i).imag())) {
            throw Error(ErrorCode::NonFinite, "amplitude " + std::to_string(i) + " is not finite");
        }
    }
    if (std::sqrt(amps.squaredNorm()) < Scalar(1e-12)) {
        throw Error(ErrorCode::ZeroVector, "amplitude vector has zero norm");
    }
}
}  // namespace detail

/// Validated construction. The norm must already be within 1e-6 of one; the
/// returned state is rescaled to exact unit norm.
template <typename Scalar = double>
PureState<Scalar> make_state(int n, std::span<const std::complex<Scalar>> amps) {
    AmplitudeVector<Scalar> v = Eigen::Map<const AmplitudeVector<Scalar>>(amps.data(), amps.size());
    detail::validate_amplitudes(n, v);
    const Scalar norm = std::sqrt(v.squaredNorm());
    if (std::abs(norm - Scalar(1)) > Scalar(tol::kConstruction)) {
        throw Error(ErrorCode::Unnormalized, "norm deviates from 1 by more than 1e-6");
    }
    v /= norm;
    return PureState<Scalar>(n, std::move(v), detail::trusted);
}

template <typename Scalar = double>
PureState<Scalar> make_state(int n, std::initializer_list<std::complex<Scalar>> amps) {
    return make_state<Scalar>(n, std::span<const std::complex<Scalar>>(amps.begin(), amps.size()));
}

/// Result of normalize_state: the state plus how far the input norm was from one.
template <typename Scalar = double>
struct Normalized {
    PureState<Scalar> state;
    Scalar correction;
};

/// Like make_state but accepts any nonzero finite vector.
template <typename Scalar = double>
Normalized<Scalar> normalize_state(int n, std::span<const std::complex<Scalar>> amps) {
    AmplitudeVector<Scalar> v = Eigen::Map<const AmplitudeVector<Scalar>>(amps.data(), amps.size());
    detail::validate_amplitudes(n, v);
    const Scalar norm = std::sqrt(v.squaredNorm());
    v /= norm;
    return {PureState<Scalar>(n, std::move(v), detail::trusted), std::abs(norm - Scalar(1))};
}

/// s1 ⊗ s2; s1's qubits become the high-order wires.
template <typename Scalar>
PureState<Scalar> tensor(const PureState<Scalar> &s1, const PureState<Scalar> &s2) {
    const int n = s1.num_qubits() + s2.num_qubits();
    if (n > kMaxQubits) {
        throw Error(ErrorCode::TooManyQubits, "tensor product exceeds 8 qubits");
    }
    AmplitudeVector<Scalar> v(s1.dim() * s2.dim());
    for (Index i = 0; i < s1.dim(); ++i) {
        v.segment(i * s2.dim(), s2.dim()) = s1[i] * s2.amplitudes();
    }
    return PureState<Scalar>(n, std::move(v), detail::trusted);
}

/// Left-multiplies every (bit q = 0, bit q = 1) amplitude pair by g.
/// g must be unitary for the result to be a valid state.
template <typename Scalar, typename Derived>
PureState<Scalar> apply_1q(const PureState<Scalar> &s, int q, const Eigen::MatrixBase<Derived> &g) {
    static_assert(Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2,
                  "single-qubit gate must be 2x2");
    detail::check_qubit(q, s.num_qubits());
    const Gate1<Scalar> m = g;
    const Index stride = detail::qubit_mask(q, s.num_qubits());
    AmplitudeVector<Scalar> v = s.amplitudes();
    for (Index base = 0; base < v.size(); base += 2 * stride) {
        for (Index i = base; i < base + stride; ++i) {
            const auto a0 = v(i);
            const auto a1 = v(i + stride);
            v(i) = m(0, 0) * a0 + m(0, 1) * a1;
            v(i + stride) = m(1, 0) * a0 + m(1, 1) * a1;
        }
    }
    return PureState<Scalar>(s.num_qubits(), std::move(v), detail::trusted);
}

/// Applies a 4x4 gate to the ordered pair (q_hi, q_lo); q_hi supplies the
/// high-order bit of the gate's two-bit index.
template <typename Scalar, typename Derived>
PureState<Scalar> apply_2q(const PureState<Scalar> &s, int q_hi, int q_lo,
                           const Eigen::MatrixBase<Derived> &g) {
    static_assert(Derived::RowsAtCompileTime == 4 && Derived::ColsAtCompileTime == 4,
                  "two-qubit gate must be 4x4");
    const int n = s.num_qubits();
    detail::check_qubit(q_hi, n);
    detail::check_qubit(q_lo, n);
    if (q_hi == q_lo) {
        throw Error(ErrorCode::DuplicateQubit, "two-qubit gate on a single wire " + std::to_string(q_hi));
    }
    const Gate2<Scalar> m = g;
    const Index hi = detail::qubit_mask(q_hi, n);
    const Index lo = detail::qubit_mask(q_lo, n);
    AmplitudeVector<Scalar> v = s.amplitudes();
    Eigen::Matrix<std::complex<Scalar>, 4, 1> block;
    for (Index i = 0; i < v.size(); ++i) {
        if ((i & hi) || (i & lo)) continue;
        const Index idx[4] = {i, i | lo, i | hi, i | hi | lo};
        for (int k = 0; k < 4; ++k) block(k) = v(idx[k]);
        block = m * block;
        for (int k = 0; k < 4; ++k) v(idx[k]) = block(k);
    }
    return PureState<Scalar>(n, std::move(v), detail::trusted);
}

template <typename Scalar>
std::complex<Scalar> inner(const PureState<Scalar> &s1, const PureState<Scalar> &s2) {
    if (s1.num_qubits() != s2.num_qubits()) {
        throw Error(ErrorCode::DimensionMismatch, "states have different qubit counts");
    }
    return s1.amplitudes().dot(s2.amplitudes());
}

/// |<s1|s2>|^2, clamped to [0, 1].
template <typename Scalar>
Scalar fidelity(const PureState<Scalar> &s1, const PureState<Scalar> &s2) {
    return std::clamp(std::norm(inner(s1, s2)), Scalar(0), Scalar(1));
}

template <typename Scalar>
bool equal_up_to_global_phase(const PureState<Scalar> &s1, const PureState<Scalar> &s2,
                              Scalar tolerance = Scalar(tol::kComparison)) {
    return fidelity(s1, s2) >= Scalar(1) - tolerance;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived> &m, double tolerance = tol::kComparison) {
    using Mat = Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
    const Mat product = m.adjoint() * m;
    return (product - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

/// Bit value of qubit q in basis index i.
constexpr int bit_of(Index i, int q, int n) { return (i & detail::qubit_mask(q, n)) ? 1 : 0; }

/// Bitstring label for a basis index, qubit 0 first.
inline std::string basis_label(Index i, int n) {
    std::string out(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q) out[static_cast<std::size_t>(q)] = bit_of(i, q, n) ? '1' : '0';
    return out;
}

/// Human-readable ket sum, e.g. "(0.7071067812+0i)|00⟩ + (0.7071067812+0i)|11⟩".
template <typename Scalar>
std::string to_string(const PureState<Scalar> &s, int precision = 10) {
    std::ostringstream out;
    out.precision(precision);
    bool first = true;
    for (Index i = 0; i < s.dim(); ++i) {
        const auto a = s[i];
        if (std::abs(a) < Scalar(tol::kAlgebra)) continue;
        if (!first) out << " + ";
        first = false;
        const Scalar re = std::abs(a.real()) < Scalar(tol::kAlgebra) ? Scalar(0) : a.real();
        const Scalar im = std::abs(a.imag()) < Scalar(tol::kAlgebra) ? Scalar(0) : a.imag();
        out << '(' << re << (im < 0 ? '-' : '+') << std::abs(im) << "i)|" << basis_label(i, s.num_qubits())
            << "⟩";
    }
    return out.str();
}

/// Writes the state of the `keep` qubits (in the given order) when the full
/// state factorizes as (rest) ⊗ (keep). Throws NotProduct otherwise.
template <typename Scalar>
PureState<Scalar> factor_out(const PureState<Scalar> &s, std::span<const int> keep,
                             Scalar tolerance = Scalar(tol::kComparison)) {
    const int n = s.num_qubits();
    const int k = static_cast<int>(keep.size());
    if (k < 1 || k >= n) throw Error(ErrorCode::EmptyOrFullSubset, "factor_out needs a proper subset");
    Index keep_mask = 0;
    for (int q : keep) {
        detail::check_qubit(q, n);
        if (keep_mask & detail::qubit_mask(q, n)) throw Error(ErrorCode::DuplicateQubit, "repeated qubit");
        keep_mask |= detail::qubit_mask(q, n);
    }
    Index dominant = 0;
    s.amplitudes().cwiseAbs2().maxCoeff(&dominant);
    const Index rest_bits = dominant & ~keep_mask;

    AmplitudeVector<Scalar> sub(Index{1} << k);
    for (Index j = 0; j < sub.size(); ++j) {
        Index full = rest_bits;
        for (int t = 0; t < k; ++t) {
            if (bit_of(j, t, k)) full |= detail::qubit_mask(keep[static_cast<std::size_t>(t)], n);
        }
        sub(j) = s[full];
    }
    sub.normalize();
    // Product check: total weight explained by the conditional state.
    Scalar captured = 0;
    for (Index rest = 0; rest < s.dim(); ++rest) {
        if (rest & keep_mask) continue;
        std::complex<Scalar> overlap = 0;
        for (Index j = 0; j < sub.size(); ++j) {
            Index full = rest;
            for (int t = 0; t < k; ++t) {
                if (bit_of(j, t, k)) full |= detail::qubit_mask(keep[static_cast<std::size_t>(t)], n);
            }
            overlap += std::conj(sub(j)) * s[full];
        }
        captured += std::norm(overlap);
    }
    if (captured < Scalar(1) - tolerance) {
        throw Error(ErrorCode::NotProduct, "state does not factor over the requested qubits");
    }
    return PureState<Scalar>(k, std::move(sub), detail::trusted);
}

template <typename Scalar>
PureState<Scalar> factor_out(const PureState<Scalar> &s, std::initializer_list<int> keep) {
    return factor_out(s, std::span<const int>(keep.begin(), keep.size()));
}

/// Haar-random single-qubit state (uniform on the Bloch sphere).
template <typename Scalar = double>
PureState<Scalar> random_qubit(Rng &rng) {
    const Scalar cos_theta = Scalar(1) - Scalar(2) * Scalar(rng.uniform());
    const Scalar phi = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(rng.uniform());
    const Scalar c = std::sqrt((Scalar(1) + cos_theta) / Scalar(2));
    const Scalar s = std::sqrt(std::max(Scalar(0), (Scalar(1) - cos_theta) / Scalar(2)));
    AmplitudeVector<Scalar> v(2);
    v << std::complex<Scalar>(c), std::polar(s, phi);
    v.normalize();
    return PureState<Scalar>(1, std::move(v), detail::trusted);
}

/// Haar-random n-qubit state from normalized complex Gaussian amplitudes.
template <typename Scalar = double>
PureState<Scalar> random_state(int n, Rng &rng) {
    std::normal_distribution<Scalar> gauss;
    std::vector<std::complex<Scalar>> amps(std::size_t{1} << n);
    for (auto &a : amps) {
        const Scalar re = gauss(rng);
        a = {re, gauss(rng)};
    }
    return normalize_state<Scalar>(n, amps).state;
}

}  // namespace qtele
