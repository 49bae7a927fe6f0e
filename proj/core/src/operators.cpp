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

#include "spinlsv/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinlsv {

HermitianOperator::Builder::Builder(BasisPtr basis) : basis_(std::move(basis)) {
    if (!basis_) {
        throw std::invalid_argument("HermitianOperator::Builder: null basis");
    }
}

void HermitianOperator::Builder::add_diagonal(std::size_t index, double value) {
    if (index >= basis_->size()) {
        throw std::out_of_range("HermitianOperator::Builder: diagonal index out of range");
    }
    entries_.emplace_back(static_cast<int>(index), static_cast<int>(index), cplx(value, 0.0));
}

void HermitianOperator::Builder::add_coupling(std::size_t row, std::size_t col, cplx value) {
    if (row >= basis_->size() || col >= basis_->size()) {
        throw std::out_of_range("HermitianOperator::Builder: coupling index out of range");
    }
    if (row == col) {
        throw std::invalid_argument("HermitianOperator::Builder: coupling must be off-diagonal");
    }
    entries_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
    entries_.emplace_back(static_cast<int>(col), static_cast<int>(row), std::conj(value));
}

HermitianOperator HermitianOperator::Builder::build() && {
    const auto n = static_cast<Eigen::Index>(basis_->size());
    SparseMatrix matrix(n, n);
    matrix.setFromTriplets(entries_.begin(), entries_.end());
    matrix.makeCompressed();
    return HermitianOperator(std::move(basis_), std::move(matrix));
}

HermitianOperator::HermitianOperator(BasisPtr basis, SparseMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
    for (Eigen::Index k = 0; k < matrix_.nonZeros(); ++k) {
        if (matrix_.valuePtr()[k].imag() != 0.0) {
            real_ = false;
            break;
        }
    }
}

double HermitianOperator::max_abs_entry() const {
    double largest = 0.0;
    for (Eigen::Index k = 0; k < matrix_.nonZeros(); ++k) {
        largest = std::max(largest, std::abs(matrix_.valuePtr()[k]));
    }
    return largest;
}

Eigen::MatrixXcd HermitianOperator::to_dense() const {
    if (dimension() > kMaxDenseDimension) {
        throw std::length_error("HermitianOperator::to_dense: dimension " + std::to_string(dimension()) +
                                " exceeds " + std::to_string(kMaxDenseDimension));
    }
    return Eigen::MatrixXcd(matrix_);
}

StateVector HermitianOperator::apply(const StateVector& state) const {
    if (!state.basis().same_space(*basis_)) {
        throw std::invalid_argument("HermitianOperator::apply: state and operator bases differ");
    }
    return StateVector(basis_, matrix_ * state.amplitudes());
}

double HermitianOperator::expectation(const StateVector& state) const {
    if (!state.basis().same_space(*basis_)) {
        throw std::invalid_argument("HermitianOperator::expectation: state and operator bases differ");
    }
    return state.amplitudes().dot(matrix_ * state.amplitudes()).real();
}

namespace {

template <typename Weight>
HermitianOperator diagonal_operator(const BasisPtr& basis, Weight weight) {
    HermitianOperator::Builder builder(basis);
    for (std::size_t i = 0; i < basis->size(); ++i) {
        const double value = weight(basis->at(i));
        if (value != 0.0) {
            builder.add_diagonal(i, value);
        }
    }
    return std::move(builder).build();
}

// Inserts prefactor * sqrt((n1+1)(n-1+1) n0 (n0-1)) for the pair-conversion
// |n1, n0, n-1> -> |n1+1, n0-2, n-1+1> and its conjugate.
void add_pair_conversion(HermitianOperator::Builder& builder, const FockBasis& basis, double prefactor) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& from = basis.at(i);
        if (from.n_zero < 2) {
            continue;
        }
        const OccupationTriple to{from.n_plus + 1, from.n_zero - 2, from.n_minus + 1};
        const double amplitude = std::sqrt(static_cast<double>(from.n_plus + 1) * (from.n_minus + 1) * from.n_zero *
                                           (from.n_zero - 1));
        builder.add_coupling(basis.index_of(to), i, prefactor * amplitude);
    }
}

} // namespace

HermitianOperator number_operator(const BasisPtr& basis, Mode mode) {
    return diagonal_operator(basis, [mode](const OccupationTriple& t) { return static_cast<double>(t.occupation(mode)); });
}

HermitianOperator lsv_generator(const BasisPtr& basis) {
    return diagonal_operator(basis, [](const OccupationTriple& t) { return static_cast<double>(t.n_plus + t.n_minus); });
}

HermitianOperator h_smd(const BasisPtr& basis, double chi) {
    HermitianOperator::Builder builder(basis);
    add_pair_conversion(builder, *basis, chi);
    return std::move(builder).build();
}

HermitianOperator h_qpt(const BasisPtr& basis, double c2, double q) {
    const double n = basis->total_atoms();
    HermitianOperator::Builder builder(basis);
    for (std::size_t i = 0; i < basis->size(); ++i) {
        const double n0 = basis->at(i).n_zero;
        const double value = c2 / (2.0 * n) * (2.0 * n0 - 1.0) * (n - n0) - q * n0;
        if (value != 0.0) {
            builder.add_diagonal(i, value);
        }
    }
    add_pair_conversion(builder, *basis, c2 / n);
    return std::move(builder).build();
}

HermitianOperator l_x(const BasisPtr& basis) {
    if (!basis->sector().is_full()) {
        throw std::invalid_argument("l_x: operator leaves sector " + to_string(basis->sector()) +
                                    "; use a Full basis");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    HermitianOperator::Builder builder(basis);
    for (std::size_t i = 0; i < basis->size(); ++i) {
        const auto& from = basis->at(i);
        if (from.n_zero > 0) {
            // a1+ a0
            const OccupationTriple to{from.n_plus + 1, from.n_zero - 1, from.n_minus};
            builder.add_coupling(basis->index_of(to), i,
                                 inv_sqrt2 * std::sqrt(static_cast<double>(from.n_plus + 1) * from.n_zero));
        }
        if (from.n_minus > 0) {
            // a0+ a-1
            const OccupationTriple to{from.n_plus, from.n_zero + 1, from.n_minus - 1};
            builder.add_coupling(basis->index_of(to), i,
                                 inv_sqrt2 * std::sqrt(static_cast<double>(from.n_zero + 1) * from.n_minus));
        }
    }
    return std::move(builder).build();
}

RampSchedule::RampSchedule(double q_start, double q_end, double rate)
    : q_start_(q_start), q_end_(q_end), rate_(rate) {
    if (!std::isfinite(q_start) || !std::isfinite(q_end)) {
        throw std::invalid_argument("RampSchedule: endpoints must be finite");
    }
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("RampSchedule: rate must be positive and finite");
    }
    duration_ = std::abs(q_start_ - q_end_) / rate_;
}

RampSchedule RampSchedule::hold(double q, double duration) {
    if (!std::isfinite(q) || !(duration >= 0.0) || !std::isfinite(duration)) {
        throw std::invalid_argument("RampSchedule::hold: q must be finite and duration non-negative");
    }
    RampSchedule schedule;
    schedule.q_start_ = q;
    schedule.q_end_ = q;
    schedule.duration_ = duration;
    return schedule;
}

double RampSchedule::q_at(double t) const {
    const double direction = (q_start_ > q_end_) ? 1.0 : (q_start_ < q_end_ ? -1.0 : 0.0);
    return q_start_ - direction * rate_ * t;
}

} // namespace spinlsv
