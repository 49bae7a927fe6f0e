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

#include "spinlsv/fock_space.hpp"
#include "spinlsv/operators.hpp"

namespace spinlsv {

inline constexpr double kDefaultRampTolerance = 1e-10;
/// evolve_ramp fails rather than return a state whose norm moved more than this.
inline constexpr double kMaxRampNormDrift = 1e-6;

/// Eigendecomposition H = V diag(lambda) V^dagger of a HermitianOperator.
///
/// Real symmetric operators are diagonalized in real arithmetic. Immutable
/// after construction and safe to share between threads.
class SpectralCache {
  public:
    explicit SpectralCache(const HermitianOperator& op);

    [[nodiscard]] const BasisPtr& basis_ptr() const { return basis_; }
    [[nodiscard]] const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    [[nodiscard]] Eigen::MatrixXcd eigenvectors() const;

    /// exp(-i H t) applied to `state`.
    [[nodiscard]] StateVector evolve(const StateVector& state, double t) const;
    /// exp(-i H t) applied to a raw amplitude vector of matching size.
    [[nodiscard]] Eigen::VectorXcd evolve(const Eigen::VectorXcd& amplitudes, double t) const;

    /// max |(V Lambda V^dagger - H)_ij|.
    [[nodiscard]] double reconstruction_error(const HermitianOperator& op) const;

  private:
    BasisPtr basis_;
    Eigen::VectorXd eigenvalues_;
    bool real_ = true;
    Eigen::MatrixXd real_vectors_;
    Eigen::MatrixXcd complex_vectors_;
};

/// exp(-i H t) |state>. Negative t runs the evolution backwards.
StateVector evolve_static(const StateVector& state, const HermitianOperator& hamiltonian, double t);
StateVector evolve_static(const StateVector& state, const SpectralCache& spectrum, double t);

/// Multiplies each amplitude by exp(-i kappa (n_plus + n_minus) T).
StateVector apply_lsv_phase(const StateVector& state, double kappa, double big_t);

/// Collective rotation exp(-i theta L_x) on one Full basis.
class Rotation {
  public:
    explicit Rotation(const BasisPtr& full_basis);

    [[nodiscard]] const BasisPtr& basis_ptr() const { return spectrum_.basis_ptr(); }
    [[nodiscard]] StateVector apply(const StateVector& state, double theta) const;

  private:
    SpectralCache spectrum_;
};

/// exp(-i theta L_x) |state>. The state must be on a Full basis.
StateVector rotate(const StateVector& state, double theta);

/// Copies sector amplitudes into the Full basis with the same atom number.
StateVector promote_to_full(const StateVector& state);
/// Keeps only the amplitudes of `sector` (no renormalization).
StateVector project_to_sector(const StateVector& state, Sector sector);
/// Total probability outside `sector`.
double sector_leakage(const StateVector& state, Sector sector);

struct RampResult {
    StateVector state;
    /// | ||psi_final||^2 - ||psi_initial||^2 |
    double norm_drift = 0.0;
    std::size_t steps = 0;
};

/// Integrates i d/dt psi = H_qpt(c2, q(t)) psi over the schedule with an
/// adaptive Runge-Kutta-Fehlberg 7(8) stepper at the given local tolerance.
/// The Full basis is integrated one magnetization sector at a time. Throws
/// std::runtime_error when the norm drifts by more than kMaxRampNormDrift.
RampResult evolve_ramp(const StateVector& state, double c2, const RampSchedule& schedule,
                       double tolerance = kDefaultRampTolerance);

/// Time-ordered propagator of a ramp, block-diagonal over magnetization sectors.
///
/// The state-independent counterpart of evolve_ramp: each sector block is
/// integrated once, with the identity as the initial condition, and can then
/// be applied to any number of states.
class RampPropagator {
  public:
    RampPropagator(const BasisPtr& basis, double c2, const RampSchedule& schedule,
                   double tolerance = kDefaultRampTolerance);

    [[nodiscard]] const BasisPtr& basis_ptr() const { return basis_; }
    [[nodiscard]] StateVector apply(const StateVector& state) const;
    /// max over blocks of max |(U^dagger U - 1)_ij|.
    [[nodiscard]] double unitarity_defect() const { return unitarity_defect_; }
    [[nodiscard]] std::size_t steps() const { return steps_; }

  private:
    struct Block {
        std::vector<Eigen::Index> indices;
        Eigen::MatrixXcd unitary;
    };

    BasisPtr basis_;
    std::vector<Block> blocks_;
    double unitarity_defect_ = 0.0;
    std::size_t steps_ = 0;
};

} // namespace spinlsv
