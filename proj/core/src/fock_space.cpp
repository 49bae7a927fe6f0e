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

#include "spinlsv/fock_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace spinlsv {

std::string to_string(const OccupationTriple& triple) {
    return "(" + std::to_string(triple.n_plus) + "," + std::to_string(triple.n_zero) + "," +
           std::to_string(triple.n_minus) + ")";
}

std::string to_string(const Sector& sector) {
    return sector.is_full() ? std::string("Full") : "Magnetization(" + std::to_string(sector.magnetization()) + ")";
}

FockBasis::FockBasis(int total_atoms, Sector sector)
    : total_atoms_(total_atoms), sector_(sector),
      lookup_(static_cast<std::size_t>(total_atoms + 1) * static_cast<std::size_t>(total_atoms + 1), -1) {
    for (int n_plus = 0; n_plus <= total_atoms; ++n_plus) {
        for (int n_zero = 0; n_zero + n_plus <= total_atoms; ++n_zero) {
            const OccupationTriple triple{n_plus, n_zero, total_atoms - n_plus - n_zero};
            if (!sector_.contains(triple)) {
                continue;
            }
            lookup_[static_cast<std::size_t>(n_plus) * static_cast<std::size_t>(total_atoms + 1) +
                    static_cast<std::size_t>(n_zero)] = static_cast<int>(states_.size());
            states_.push_back(triple);
        }
    }
}

std::optional<std::size_t> FockBasis::find(const OccupationTriple& triple) const {
    if (triple.n_plus < 0 || triple.n_zero < 0 || triple.n_minus < 0 || triple.total() != total_atoms_) {
        return std::nullopt;
    }
    const int index = lookup_[static_cast<std::size_t>(triple.n_plus) * static_cast<std::size_t>(total_atoms_ + 1) +
                              static_cast<std::size_t>(triple.n_zero)];
    if (index < 0) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(index);
}

std::size_t FockBasis::index_of(const OccupationTriple& triple) const {
    if (auto index = find(triple)) {
        return *index;
    }
    throw std::invalid_argument("triple " + to_string(triple) + " is not in the N=" + std::to_string(total_atoms_) +
                                " " + to_string(sector_) + " basis");
}

BasisPtr enumerate_basis(int total_atoms, Sector sector, int max_atoms) {
    if (total_atoms < 1) {
        throw std::invalid_argument("enumerate_basis: atom number must be at least 1, got " +
                                    std::to_string(total_atoms));
    }
    if (total_atoms > max_atoms) {
        throw std::invalid_argument("enumerate_basis: atom number " + std::to_string(total_atoms) +
                                    " exceeds the configured limit " + std::to_string(max_atoms));
    }
    if (!sector.is_full() && std::abs(sector.magnetization()) > total_atoms) {
        throw std::invalid_argument("enumerate_basis: |m| = " + std::to_string(std::abs(sector.magnetization())) +
                                    " exceeds N = " + std::to_string(total_atoms));
    }
    return BasisPtr(new FockBasis(total_atoms, sector));
}

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (!basis_) {
        throw std::invalid_argument("StateVector: null basis");
    }
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_->size()) {
        throw std::invalid_argument("StateVector: " + std::to_string(amplitudes_.size()) +
                                    " amplitudes for a basis of size " + std::to_string(basis_->size()));
    }
}

cplx StateVector::amplitude(const OccupationTriple& triple) const {
    return amplitudes_[static_cast<Eigen::Index>(basis_->index_of(triple))];
}

cplx overlap(const StateVector& a, const StateVector& b) {
    if (!a.basis().same_space(b.basis())) {
        throw std::invalid_argument("overlap: states live on different bases");
    }
    return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(overlap(a, b)); }

StateVector fock_state(const BasisPtr& basis, const OccupationTriple& triple) {
    Eigen::VectorXcd amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    amplitudes[static_cast<Eigen::Index>(basis->index_of(triple))] = 1.0;
    return StateVector(basis, std::move(amplitudes));
}

StateVector superpose(const BasisPtr& basis, std::span<const std::pair<cplx, OccupationTriple>> terms) {
    Eigen::VectorXcd amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    for (const auto& [coefficient, triple] : terms) {
        amplitudes[static_cast<Eigen::Index>(basis->index_of(triple))] += coefficient;
    }
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("superpose: coefficients sum to the zero vector");
    }
    amplitudes /= norm;
    return StateVector(basis, std::move(amplitudes));
}

StateVector superpose(const BasisPtr& basis, std::initializer_list<std::pair<cplx, OccupationTriple>> terms) {
    return superpose(basis, std::span<const std::pair<cplx, OccupationTriple>>(terms.begin(), terms.size()));
}

std::vector<double> population_distribution(const StateVector& state, Mode mode) {
    const auto& basis = state.basis();
    std::vector<double> distribution(static_cast<std::size_t>(basis.total_atoms() + 1), 0.0);
    const auto& amplitudes = state.amplitudes();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        distribution[static_cast<std::size_t>(basis.at(i).occupation(mode))] +=
            std::norm(amplitudes[static_cast<Eigen::Index>(i)]);
    }
    return distribution;
}

MeanStd count_statistics(std::span<const double> distribution) {
    double mean = 0.0;
    for (std::size_t n = 0; n < distribution.size(); ++n) {
        mean += static_cast<double>(n) * distribution[n];
    }
    // Central second moment; the raw <n^2> - <n>^2 form loses all digits when
    // the distribution is nearly a delta.
    double variance = 0.0;
    for (std::size_t n = 0; n < distribution.size(); ++n) {
        const double deviation = static_cast<double>(n) - mean;
        variance += deviation * deviation * distribution[n];
    }
    return {mean, std::sqrt(std::max(variance, 0.0))};
}

MeanStd mean_and_std_n0(const StateVector& state) {
    return count_statistics(population_distribution(state, Mode::Zero));
}

} // namespace spinlsv
