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

// Density matrices, partial trace and purity. Enough machinery to decide,
// per bipartition, whether a pure state is entangled.

#include <Eigen/Eigenvalues>

#include <span>
#include <vector>

#include "qtele/core.hpp"

namespace qtele {

template <typename Scalar = double>
class DensityMatrix {
   public:
    using Matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

    DensityMatrix(int n_qubits, Matrix m, detail::trusted_t) : n_qubits_(n_qubits), m_(std::move(m)) {}

    int num_qubits() const { return n_qubits_; }
    Index dim() const { return m_.rows(); }
    const Matrix &matrix() const { return m_; }
    std::complex<Scalar> operator()(Index r, Index c) const { return m_(r, c); }

   private:
    int n_qubits_;
    Matrix m_;
};

/// Checks Hermitian, unit trace and positive semidefinite, each within 1e-9.
/// PSD is first attempted with Gershgorin discs; only matrices the discs
/// cannot clear go to an eigensolver.
template <typename Scalar>
bool is_valid_density(const typename DensityMatrix<Scalar>::Matrix &m, Scalar tolerance = Scalar(tol::kComparison)) {
    if (m.rows() != m.cols() || m.rows() < 2) return false;
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tolerance) return false;
    const std::complex<Scalar> trace = m.trace();
    if (std::abs(trace - std::complex<Scalar>(1)) > tolerance) return false;
    const Scalar purity = (m * m).trace().real();
    if (purity > std::norm(trace) + tolerance) return false;

    Scalar lower = std::numeric_limits<Scalar>::infinity();
    for (Index i = 0; i < m.rows(); ++i) {
        const Scalar radius = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
        lower = std::min(lower, m(i, i).real() - radius);
    }
    if (lower >= -tolerance) return true;
    Eigen::SelfAdjointEigenSolver<typename DensityMatrix<Scalar>::Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tolerance;
}

/// Validated construction from an explicit matrix.
template <typename Scalar = double>
DensityMatrix<Scalar> make_density(int n, typename DensityMatrix<Scalar>::Matrix m) {
    if (n < 1 || n > kMaxQubits) throw Error(ErrorCode::TooManyQubits, "qubit count must be in [1, 8]");
    if (m.rows() != (Index{1} << n) || m.cols() != m.rows()) {
        throw Error(ErrorCode::LengthMismatch, "density matrix has the wrong shape");
    }
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "density matrix has non-finite entries");
    if (!is_valid_density<Scalar>(m)) {
        throw Error(ErrorCode::Unnormalized, "matrix is not Hermitian, unit-trace and positive semidefinite");
    }
    return DensityMatrix<Scalar>(n, std::move(m), detail::trusted);
}

/// |s><s|
template <typename Scalar>
DensityMatrix<Scalar> density_of(const PureState<Scalar> &s) {
    const auto &v = s.amplitudes();
    return DensityMatrix<Scalar>(s.num_qubits(), v * v.adjoint(), detail::trusted);
}

/// Reduced density matrix on `keep`, ordered as given (keep[0] becomes the
/// high-order qubit of the result).
template <typename Scalar>
DensityMatrix<Scalar> partial_trace(const DensityMatrix<Scalar> &d, std::span<const int> keep) {
    const int n = d.num_qubits();
    const int k = static_cast<int>(keep.size());
    if (k == 0) throw Error(ErrorCode::EmptyOrFullSubset, "partial trace must keep at least one qubit");
    Index keep_mask = 0;
    for (int q : keep) {
        detail::check_qubit(q, n);
        if (keep_mask & detail::qubit_mask(q, n)) throw Error(ErrorCode::DuplicateQubit, "repeated qubit");
        keep_mask |= detail::qubit_mask(q, n);
    }
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (!(keep_mask & detail::qubit_mask(q, n))) traced.push_back(q);
    }
    const int t = static_cast<int>(traced.size());

    auto scatter = [n](Index pattern, std::span<const int> qubits) {
        const int width = static_cast<int>(qubits.size());
        Index full = 0;
        for (int i = 0; i < width; ++i) {
            if (bit_of(pattern, i, width)) full |= detail::qubit_mask(qubits[static_cast<std::size_t>(i)], n);
        }
        return full;
    };

    const Index out_dim = Index{1} << k;
    typename DensityMatrix<Scalar>::Matrix out = DensityMatrix<Scalar>::Matrix::Zero(out_dim, out_dim);
    for (Index r = 0; r < out_dim; ++r) {
        const Index row_bits = scatter(r, keep);
        for (Index c = 0; c < out_dim; ++c) {
            const Index col_bits = scatter(c, keep);
            std::complex<Scalar> sum = 0;
            for (Index e = 0; e < (Index{1} << t); ++e) {
                const Index env = scatter(e, traced);
                sum += d(row_bits | env, col_bits | env);
            }
            out(r, c) = sum;
        }
    }
    return DensityMatrix<Scalar>(k, std::move(out), detail::trusted);
}

template <typename Scalar>
DensityMatrix<Scalar> partial_trace(const DensityMatrix<Scalar> &d, std::initializer_list<int> keep) {
    return partial_trace(d, std::span<const int>(keep.begin(), keep.size()));
}

/// trace(m^2)
template <typename Scalar>
Scalar purity(const DensityMatrix<Scalar> &d) {
    // trace(m m) = sum |m_ij|^2 for Hermitian m.
    return d.matrix().cwiseAbs2().sum();
}

/// <psi|rho|psi>
template <typename Scalar>
Scalar fidelity(const PureState<Scalar> &psi, const DensityMatrix<Scalar> &rho) {
    if (psi.num_qubits() != rho.num_qubits()) {
        throw Error(ErrorCode::DimensionMismatch, "state and density matrix differ in size");
    }
    const auto &v = psi.amplitudes();
    return std::clamp((v.adjoint() * rho.matrix() * v)(0, 0).real(), Scalar(0), Scalar(1));
}

inline constexpr double kEntanglementTolerance = 1e-6;

/// Purity-deficit witness: the state is entangled across (subset, rest) iff
/// the reduced state on `subset` is mixed.
template <typename Scalar>
bool entangled_across(const PureState<Scalar> &s, std::span<const int> subset,
                      Scalar tolerance = Scalar(kEntanglementTolerance)) {
    if (subset.empty() || static_cast<int>(subset.size()) >= s.num_qubits()) {
        throw Error(ErrorCode::EmptyOrFullSubset, "bipartition needs a proper nonempty subset");
    }
    return purity(partial_trace(density_of(s), subset)) < Scalar(1) - tolerance;
}

template <typename Scalar>
bool entangled_across(const PureState<Scalar> &s, std::initializer_list<int> subset,
                      Scalar tolerance = Scalar(kEntanglementTolerance)) {
    return entangled_across(s, std::span<const int>(subset.begin(), subset.size()), tolerance);
}

}  // namespace qtele
