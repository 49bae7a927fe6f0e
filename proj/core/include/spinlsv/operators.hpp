// Copyright 2026 The spinlsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "spinlsv/fock_space.hpp"

namespace spinlsv {

/// Dense conversion is refused above this dimension.
inline constexpr std::size_t kMaxDenseDimension = 2000;

/// Sparse Hermitian matrix over a FockBasis (hbar = 1).
class HermitianOperator {
  public:
    using SparseMatrix = Eigen::SparseMatrix<cplx>;

    /// Collects entries with symmetric insertion, so the result is Hermitian
    /// by construction. Duplicate entries are summed.
    class Builder {
      public:
        explicit Builder(BasisPtr basis);
        void add_diagonal(std::size_t index, double value);
        /// Adds `value` at (row, col) and conj(value) at (col, row); row != col.
        void add_coupling(std::size_t row, std::size_t col, cplx value);
        [[nodiscard]] HermitianOperator build() &&;

      private:
        BasisPtr basis_;
        std::vector<Eigen::Triplet<cplx>> entries_;
    };

    [[nodiscard]] const BasisPtr& basis_ptr() const { return basis_; }
    [[nodiscard]] const FockBasis& basis() const { return *basis_; }
    [[nodiscard]] std::size_t dimension() const { return basis_->size(); }
    [[nodiscard]] const SparseMatrix& matrix() const { return matrix_; }
    /// True when every stored entry has zero imaginary part.
    [[nodiscard]] bool is_real() const { return real_; }
    [[nodiscard]] double max_abs_entry() const;

    /// Throws std::length_error above kMaxDenseDimension.
    [[nodiscard]] Eigen::MatrixXcd to_dense() const;

    [[nodiscard]] StateVector apply(const StateVector& state) const;
    [[nodiscard]] double expectation(const StateVector& state) const;

  private:
    HermitianOperator(BasisPtr basis, SparseMatrix matrix);

    BasisPtr basis_;
    SparseMatrix matrix_;
    bool real_ = true;
};

/// Diagonal N_mode.
HermitianOperator number_operator(const BasisPtr& basis, Mode mode);

/// kappa-free LSV generator N_{+1} + N_{-1} = N - N_0 (diagonal).
HermitianOperator lsv_generator(const BasisPtr& basis);

/// Spin-mixing Hamiltonian chi (a0+ a0+ a1 a-1 + h.c.). Purely off-diagonal;
/// on the zero-magnetization sector the entries are chi (k+1) sqrt((N-2k)(N-2k-1)).
HermitianOperator h_smd(const BasisPtr& basis, double chi);

/// Quadratic-Zeeman sweep Hamiltonian
///   (c2 / 2N) [2 (a0+ a0+ a1 a-1 + h.c.) + (2 N0 - 1)(N - N0)] - q N0,
/// applied verbatim on any sector.
HermitianOperator h_qpt(const BasisPtr& basis, double c2, double q);

/// Collective rotation generator
///   L_x = (a1+ a0 + a1 a0+ + a0+ a-1 + a0 a-1+) / sqrt(2).
/// Requires a Full-sector basis; throws std::invalid_argument otherwise.
HermitianOperator l_x(const BasisPtr& basis);

/// Linear sweep q(t) = q_start - sign(q_start - q_end) * rate * t, t in [0, duration].
class RampSchedule {
  public:
    /// Throws std::invalid_argument unless rate > 0 and both endpoints are finite.
    RampSchedule(double q_start, double q_end, double rate);

    /// Constant q for a fixed duration; rate() is 0.
    static RampSchedule hold(double q, double duration);

    [[nodiscard]] double q_start() const { return q_start_; }
    [[nodiscard]] double q_end() const { return q_end_; }
    [[nodiscard]] double rate() const { return rate_; }
    [[nodiscard]] double duration() const { return duration_; }
    [[nodiscard]] double q_at(double t) const;

  private:
    RampSchedule() = default;

    double q_start_ = 0.0;
    double q_end_ = 0.0;
    double rate_ = 0.0;
    double duration_ = 0.0;
};

} // namespace spinlsv
