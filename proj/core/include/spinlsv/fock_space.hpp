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

#include <complex>
#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace spinlsv {

using cplx = std::complex<double>;

/// Largest atom number accepted by enumerate_basis unless the caller raises it.
inline constexpr int kDefaultMaxAtoms = 120;

/// Zeeman sublevel of a spin-1 atom.
enum class Mode { Plus, Zero, Minus };

/// Occupations of the m_F = +1, 0, -1 modes.
struct OccupationTriple {
    int n_plus = 0;
    int n_zero = 0;
    int n_minus = 0;

    [[nodiscard]] constexpr int total() const { return n_plus + n_zero + n_minus; }
    [[nodiscard]] constexpr int magnetization() const { return n_plus - n_minus; }
    [[nodiscard]] constexpr int occupation(Mode mode) const {
        switch (mode) {
        case Mode::Plus:
            return n_plus;
        case Mode::Zero:
            return n_zero;
        case Mode::Minus:
            return n_minus;
        }
        return 0;
    }

    // Lexicographic on (n_plus, n_zero, n_minus); within one basis n_minus is
    // fixed by the other two, so this is the (n_plus, n_zero) basis order.
    auto operator<=>(const OccupationTriple&) const = default;
};

std::string to_string(const OccupationTriple& triple);

/// Either the whole Fock space or one magnetization sector n_plus - n_minus = m.
class Sector {
  public:
    static Sector full() { return Sector{}; }
    static Sector magnetization(int m) { return Sector{m}; }

    [[nodiscard]] bool is_full() const { return !magnetization_.has_value(); }
    /// Only meaningful when !is_full().
    [[nodiscard]] int magnetization() const { return magnetization_.value_or(0); }
    [[nodiscard]] bool contains(const OccupationTriple& triple) const {
        return is_full() || triple.magnetization() == *magnetization_;
    }

    bool operator==(const Sector&) const = default;

  private:
    Sector() = default;
    explicit Sector(int m) : magnetization_(m) {}

    std::optional<int> magnetization_;
};

std::string to_string(const Sector& sector);

/// Deterministically ordered occupation basis for N three-mode bosons.
///
/// Immutable once built and always handled through BasisPtr, so states and
/// operators built on the same basis can share it across threads.
class FockBasis {
  public:
    [[nodiscard]] int total_atoms() const { return total_atoms_; }
    [[nodiscard]] const Sector& sector() const { return sector_; }
    [[nodiscard]] std::size_t size() const { return states_.size(); }
    [[nodiscard]] const OccupationTriple& at(std::size_t index) const { return states_.at(index); }
    [[nodiscard]] std::span<const OccupationTriple> states() const { return states_; }

    [[nodiscard]] std::optional<std::size_t> find(const OccupationTriple& triple) const;
    /// Throws std::invalid_argument naming the triple when it is not in the basis.
    [[nodiscard]] std::size_t index_of(const OccupationTriple& triple) const;
    [[nodiscard]] bool contains(const OccupationTriple& triple) const { return find(triple).has_value(); }

    /// Same atom number and sector. Two such bases are element-for-element identical.
    [[nodiscard]] bool same_space(const FockBasis& other) const {
        return total_atoms_ == other.total_atoms_ && sector_ == other.sector_;
    }

  private:
    friend std::shared_ptr<const FockBasis> enumerate_basis(int, Sector, int);
    FockBasis(int total_atoms, Sector sector);

    int total_atoms_;
    Sector sector_;
    std::vector<OccupationTriple> states_;
    // Dense (n_plus, n_zero) -> index table; -1 marks triples outside the sector.
    std::vector<int> lookup_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

/// Enumerates all triples with n_plus + n_zero + n_minus = N inside `sector`,
/// sorted lexicographically on (n_plus, n_zero).
BasisPtr enumerate_basis(int total_atoms, Sector sector, int max_atoms = kDefaultMaxAtoms);

/// Pure state: complex amplitudes over a FockBasis.
class StateVector {
  public:
    /// Checks the dimension only; the builders below produce unit-norm states.
    StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

    [[nodiscard]] const BasisPtr& basis_ptr() const { return basis_; }
    [[nodiscard]] const FockBasis& basis() const { return *basis_; }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }
    [[nodiscard]] const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    [[nodiscard]] Eigen::VectorXcd& amplitudes() { return amplitudes_; }
    [[nodiscard]] cplx amplitude(const OccupationTriple& triple) const;
    [[nodiscard]] double norm_squared() const { return amplitudes_.squaredNorm(); }

  private:
    BasisPtr basis_;
    Eigen::VectorXcd amplitudes_;
};

/// |<a|b>|^2. Both states must live on the same space.
double fidelity(const StateVector& a, const StateVector& b);
cplx overlap(const StateVector& a, const StateVector& b);

StateVector fock_state(const BasisPtr& basis, const OccupationTriple& triple);

/// Normalized superposition of basis states. Repeated triples add up.
StateVector superpose(const BasisPtr& basis, std::span<const std::pair<cplx, OccupationTriple>> terms);
StateVector superpose(const BasisPtr& basis, std::initializer_list<std::pair<cplx, OccupationTriple>> terms);

/// P(n) for n = 0..N that `mode` holds n atoms.
std::vector<double> population_distribution(const StateVector& state, Mode mode);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

/// Mean and standard deviation of a count distribution indexed by n = 0..size-1.
MeanStd count_statistics(std::span<const double> distribution);

/// <N0> and Delta N0, from population_distribution(state, Mode::Zero).
MeanStd mean_and_std_n0(const StateVector& state);

} // namespace spinlsv
