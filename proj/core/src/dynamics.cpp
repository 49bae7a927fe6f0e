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

#include "spinlsv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

namespace spinlsv {

namespace odeint = boost::numeric::odeint;

namespace {

std::string scientific(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3e", value);
    return buffer;
}

} // namespace

SpectralCache::SpectralCache(const HermitianOperator& op) : basis_(op.basis_ptr()), real_(op.is_real()) {
    const Eigen::MatrixXcd dense = op.to_dense();
    if (real_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense.real());
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("SpectralCache: eigendecomposition did not converge");
        }
        eigenvalues_ = solver.eigenvalues();
        real_vectors_ = solver.eigenvectors();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("SpectralCache: eigendecomposition did not converge");
        }
        eigenvalues_ = solver.eigenvalues();
        complex_vectors_ = solver.eigenvectors();
    }
}

Eigen::MatrixXcd SpectralCache::eigenvectors() const {
    return real_ ? Eigen::MatrixXcd(real_vectors_.cast<cplx>()) : complex_vectors_;
}

Eigen::VectorXcd SpectralCache::evolve(const Eigen::VectorXcd& amplitudes, double t) const {
    if (amplitudes.size() != eigenvalues_.size()) {
        throw std::invalid_argument("SpectralCache::evolve: dimension mismatch");
    }
    Eigen::VectorXcd coefficients =
        real_ ? Eigen::VectorXcd(real_vectors_.transpose() * amplitudes) : Eigen::VectorXcd(complex_vectors_.adjoint() * amplitudes);
    for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
        coefficients[k] *= std::polar(1.0, -eigenvalues_[k] * t);
    }
    return real_ ? Eigen::VectorXcd(real_vectors_ * coefficients) : Eigen::VectorXcd(complex_vectors_ * coefficients);
}

StateVector SpectralCache::evolve(const StateVector& state, double t) const {
    if (!state.basis().same_space(*basis_)) {
        throw std::invalid_argument("evolve: state basis (N=" + std::to_string(state.basis().total_atoms()) + ", " +
                                    to_string(state.basis().sector()) + ") does not match the Hamiltonian basis (N=" +
                                    std::to_string(basis_->total_atoms()) + ", " + to_string(basis_->sector()) + ")");
    }
    return StateVector(basis_, evolve(state.amplitudes(), t));
}

double SpectralCache::reconstruction_error(const HermitianOperator& op) const {
    const Eigen::MatrixXcd vectors = eigenvectors();
    const Eigen::MatrixXcd rebuilt = vectors * eigenvalues_.cast<cplx>().asDiagonal() * vectors.adjoint();
    return (rebuilt - op.to_dense()).cwiseAbs().maxCoeff();
}

StateVector evolve_static(const StateVector& state, const SpectralCache& spectrum, double t) {
    return spectrum.evolve(state, t);
}

StateVector evolve_static(const StateVector& state, const HermitianOperator& hamiltonian, double t) {
    if (!state.basis().same_space(hamiltonian.basis())) {
        throw std::invalid_argument("evolve_static: state and Hamiltonian bases differ");
    }
    return SpectralCache(hamiltonian).evolve(state, t);
}

StateVector apply_lsv_phase(const StateVector& state, double kappa, double big_t) {
    const auto& basis = state.basis();
    Eigen::VectorXcd amplitudes = state.amplitudes();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& triple = basis.at(i);
        amplitudes[static_cast<Eigen::Index>(i)] *=
            std::polar(1.0, -kappa * static_cast<double>(triple.n_plus + triple.n_minus) * big_t);
    }
    return StateVector(state.basis_ptr(), std::move(amplitudes));
}

Rotation::Rotation(const BasisPtr& full_basis) : spectrum_(l_x(full_basis)) {}

StateVector Rotation::apply(const StateVector& state, double theta) const {
    if (!state.basis().sector().is_full()) {
        throw std::invalid_argument("rotate: state is on the " + to_string(state.basis().sector()) +
                                    " sector; promote_to_full first");
    }
    return spectrum_.evolve(state, theta);
}

StateVector rotate(const StateVector& state, double theta) {
    if (!state.basis().sector().is_full()) {
        throw std::invalid_argument("rotate: state is on the " + to_string(state.basis().sector()) +
                                    " sector; promote_to_full first");
    }
    return Rotation(state.basis_ptr()).apply(state, theta);
}

StateVector promote_to_full(const StateVector& state) {
    const auto& basis = state.basis();
    if (basis.sector().is_full()) {
        return state;
    }
    auto full = enumerate_basis(basis.total_atoms(), Sector::full(), std::max(basis.total_atoms(), kDefaultMaxAtoms));
    Eigen::VectorXcd amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(full->size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        amplitudes[static_cast<Eigen::Index>(full->index_of(basis.at(i)))] = state.amplitudes()[static_cast<Eigen::Index>(i)];
    }
    return StateVector(std::move(full), std::move(amplitudes));
}

StateVector project_to_sector(const StateVector& state, Sector sector) {
    const auto& basis = state.basis();
    auto target = enumerate_basis(basis.total_atoms(), sector, std::max(basis.total_atoms(), kDefaultMaxAtoms));
    Eigen::VectorXcd amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(target->size()));
    for (std::size_t i = 0; i < target->size(); ++i) {
        if (auto source = basis.find(target->at(i))) {
            amplitudes[static_cast<Eigen::Index>(i)] = state.amplitudes()[static_cast<Eigen::Index>(*source)];
        }
    }
    return StateVector(std::move(target), std::move(amplitudes));
}

double sector_leakage(const StateVector& state, Sector sector) {
    const auto& basis = state.basis();
    double outside = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!sector.contains(basis.at(i))) {
            outside += std::norm(state.amplitudes()[static_cast<Eigen::Index>(i)]);
        }
    }
    return outside;
}

namespace {

// One magnetization sector of H_qpt(c2, q) = coupling - q * diag(n0).
struct SectorBlock {
    std::vector<Eigen::Index> indices;
    Eigen::SparseMatrix<double> coupling;
    Eigen::VectorXd n0;
};

std::vector<SectorBlock> sector_blocks(const BasisPtr& basis, double c2) {
    std::map<int, std::vector<Eigen::Index>> by_magnetization;
    for (std::size_t i = 0; i < basis->size(); ++i) {
        by_magnetization[basis->at(i).magnetization()].push_back(static_cast<Eigen::Index>(i));
    }
    const HermitianOperator coupling = h_qpt(basis, c2, 0.0);
    const auto& matrix = coupling.matrix();

    std::vector<Eigen::Index> local(basis->size(), -1);
    std::vector<SectorBlock> blocks;
    blocks.reserve(by_magnetization.size());
    for (auto& [m, indices] : by_magnetization) {
        SectorBlock block;
        block.indices = std::move(indices);
        const auto d = static_cast<Eigen::Index>(block.indices.size());
        block.n0.resize(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            local[static_cast<std::size_t>(block.indices[j])] = j;
            block.n0[j] = basis->at(static_cast<std::size_t>(block.indices[j])).n_zero;
        }
        std::vector<Eigen::Triplet<double>> entries;
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::SparseMatrix<cplx>::InnerIterator it(matrix, block.indices[j]); it; ++it) {
                const Eigen::Index row = local[static_cast<std::size_t>(it.row())];
                if (row < 0) {
                    throw std::logic_error("h_qpt couples different magnetization sectors");
                }
                entries.emplace_back(row, j, it.value().real());
            }
        }
        block.coupling.resize(d, d);
        block.coupling.setFromTriplets(entries.begin(), entries.end());
        block.coupling.makeCompressed();
        blocks.push_back(std::move(block));
    }
    return blocks;
}

// Integrates i d/dt C = (coupling - q(t) diag(n0)) C column by column, with
// real and imaginary parts stored as [Re C(:,c); Im C(:,c)] per column.
std::size_t integrate_block(const SectorBlock& block, const RampSchedule& schedule, double tolerance,
                            Eigen::MatrixXcd& amplitudes) {
    const double duration = schedule.duration();
    if (duration == 0.0) {
        return 0;
    }
    const Eigen::Index d = amplitudes.rows();
    const Eigen::Index cols = amplitudes.cols();

    using Storage = std::vector<double>;
    Storage y(static_cast<std::size_t>(2 * d * cols));
    Eigen::Map<Eigen::MatrixXd> packed(y.data(), 2 * d, cols);
    packed.topRows(d) = amplitudes.real();
    packed.bottomRows(d) = amplitudes.imag();

    Eigen::VectorXd zeeman(d);
    auto rhs = [&](const Storage& x, Storage& dxdt, double t) {
        zeeman = schedule.q_at(t) * block.n0;
        Eigen::Map<const Eigen::MatrixXd> in(x.data(), 2 * d, cols);
        Eigen::Map<Eigen::MatrixXd> out(dxdt.data(), 2 * d, cols);
        // d Re/dt = H Im, d Im/dt = -H Re with H = coupling - diag(zeeman).
        out.topRows(d).noalias() = block.coupling * in.bottomRows(d);
        out.topRows(d) -= zeeman.asDiagonal() * in.bottomRows(d);
        out.bottomRows(d).noalias() = -(block.coupling * in.topRows(d));
        out.bottomRows(d) += zeeman.asDiagonal() * in.topRows(d);
    };

    using Stepper = odeint::runge_kutta_fehlberg78<Storage>;
    const double initial_step = std::min(duration, 1e-3);
    const std::size_t steps =
        odeint::integrate_adaptive(odeint::make_controlled<Stepper>(tolerance, tolerance), rhs, y, 0.0, duration, initial_step);

    Eigen::Map<const Eigen::MatrixXd> result(y.data(), 2 * d, cols);
    amplitudes.real() = result.topRows(d);
    amplitudes.imag() = result.bottomRows(d);
    return steps;
}

void check_tolerance(double tolerance) {
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
        throw std::invalid_argument("ramp tolerance must be positive");
    }
}

} // namespace

RampResult evolve_ramp(const StateVector& state, double c2, const RampSchedule& schedule, double tolerance) {
    check_tolerance(tolerance);
    RampResult result{state, 0.0, 0};
    if (schedule.duration() == 0.0) {
        return result;
    }
    Eigen::VectorXcd& amplitudes = result.state.amplitudes();
    for (const auto& block : sector_blocks(state.basis_ptr(), c2)) {
        const auto d = static_cast<Eigen::Index>(block.indices.size());
        Eigen::MatrixXcd local(d, 1);
        for (Eigen::Index j = 0; j < d; ++j) {
            local(j, 0) = amplitudes[block.indices[static_cast<std::size_t>(j)]];
        }
        if (local.squaredNorm() == 0.0) {
            continue;
        }
        result.steps += integrate_block(block, schedule, tolerance, local);
        for (Eigen::Index j = 0; j < d; ++j) {
            amplitudes[block.indices[static_cast<std::size_t>(j)]] = local(j, 0);
        }
    }
    result.norm_drift = std::abs(result.state.norm_squared() - state.norm_squared());
    if (result.norm_drift > kMaxRampNormDrift) {
        throw std::runtime_error("evolve_ramp: norm drifted by " + scientific(result.norm_drift) +
                                 "; rerun with a tighter tolerance than " + scientific(tolerance));
    }
    return result;
}

RampPropagator::RampPropagator(const BasisPtr& basis, double c2, const RampSchedule& schedule, double tolerance)
    : basis_(basis) {
    check_tolerance(tolerance);
    for (auto& block : sector_blocks(basis, c2)) {
        const auto d = static_cast<Eigen::Index>(block.indices.size());
        Eigen::MatrixXcd unitary = Eigen::MatrixXcd::Identity(d, d);
        steps_ += integrate_block(block, schedule, tolerance, unitary);
        const double defect =
            (unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
        unitarity_defect_ = std::max(unitarity_defect_, defect);
        blocks_.push_back({std::move(block.indices), std::move(unitary)});
    }
    if (unitarity_defect_ > kMaxRampNormDrift) {
        throw std::runtime_error("RampPropagator: unitarity defect " + scientific(unitarity_defect_) +
                                 "; rerun with a tighter tolerance than " + scientific(tolerance));
    }
}

StateVector RampPropagator::apply(const StateVector& state) const {
    if (!state.basis().same_space(*basis_)) {
        throw std::invalid_argument("RampPropagator::apply: state and propagator bases differ");
    }
    Eigen::VectorXcd amplitudes(state.amplitudes().size());
    Eigen::VectorXcd local;
    for (const auto& block : blocks_) {
        const auto d = static_cast<Eigen::Index>(block.indices.size());
        local.resize(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            local[j] = state.amplitudes()[block.indices[static_cast<std::size_t>(j)]];
        }
        local = block.unitary * local;
        for (Eigen::Index j = 0; j < d; ++j) {
            amplitudes[block.indices[static_cast<std::size_t>(j)]] = local[j];
        }
    }
    return StateVector(basis_, std::move(amplitudes));
}

} // namespace spinlsv
