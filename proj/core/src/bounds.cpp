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

#include "spinlsv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spinlsv {

namespace {

int twice_spin(double spin) {
    const double twice = 2.0 * spin;
    if (!(spin >= 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
        throw std::invalid_argument("spin length must be a non-negative multiple of 1/2, got " + std::to_string(spin));
    }
    return static_cast<int>(std::lround(twice));
}

void check_atoms_and_scalars(int atoms, double big_t, double eta) {
    if (atoms < 1) {
        throw std::invalid_argument("atom number must be at least 1");
    }
    if (!(big_t > 0.0) || !std::isfinite(big_t)) {
        throw std::invalid_argument("interrogation time T must be positive");
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw std::invalid_argument("number of trials eta must be positive");
    }
}

double sublevel_variance(const SpinDistribution& dist) {
    const double variance = moments(dist).variance();
    const double scale = std::max(1.0, std::pow(dist.spin(), 4));
    if (variance <= 1e-14 * scale) {
        throw std::domain_error("zero QFI state: m^2 has no spread (M2 = M1^2)");
    }
    return variance;
}

} // namespace

SpinDistribution::SpinDistribution(double spin, std::vector<cplx> amplitudes)
    : spin_(spin), amplitudes_(std::move(amplitudes)) {
    const int levels = twice_spin(spin) + 1;
    if (static_cast<int>(amplitudes_.size()) != levels) {
        throw std::invalid_argument("SpinDistribution: spin " + std::to_string(spin) + " needs " +
                                    std::to_string(levels) + " amplitudes, got " + std::to_string(amplitudes_.size()));
    }
    double norm = 0.0;
    for (const auto& a : amplitudes_) {
        norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > 1e-12) {
        throw std::invalid_argument("SpinDistribution: amplitudes are not normalized (sum |alpha|^2 = " +
                                    std::to_string(norm) + ")");
    }
}

SpinDistribution SpinDistribution::from_weights(double spin, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("SpinDistribution: weights must be finite and non-negative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("SpinDistribution: weights sum to zero");
    }
    std::vector<cplx> amplitudes;
    amplitudes.reserve(weights.size());
    for (double w : weights) {
        amplitudes.emplace_back(std::sqrt(w / total), 0.0);
    }
    return SpinDistribution(spin, std::move(amplitudes));
}

SpinDistribution SpinDistribution::uniform(double spin) {
    const int levels = twice_spin(spin) + 1;
    return from_weights(spin, std::vector<double>(static_cast<std::size_t>(levels), 1.0));
}

std::vector<double> SpinDistribution::weights() const {
    std::vector<double> w;
    w.reserve(amplitudes_.size());
    for (const auto& a : amplitudes_) {
        w.push_back(std::norm(a));
    }
    return w;
}

MomentPair moments(const SpinDistribution& dist) {
    MomentPair result;
    for (std::size_t i = 0; i < dist.levels(); ++i) {
        const double weight = std::norm(dist.amplitudes()[i]);
        const double m2 = dist.m_of(i) * dist.m_of(i);
        result.m1 += weight * m2;
        result.m2 += weight * m2 * m2;
    }
    return result;
}

double qcrb_product(const SpinDistribution& dist, int atoms, double big_t, double eta) {
    check_atoms_and_scalars(atoms, big_t, eta);
    return 1.0 / (big_t * std::sqrt(4.0 * eta * atoms * sublevel_variance(dist)));
}

double qcrb_ghz(const SpinDistribution& dist, int atoms, double big_t, double eta) {
    check_atoms_and_scalars(atoms, big_t, eta);
    const double n = atoms;
    return 1.0 / (big_t * std::sqrt(4.0 * eta * n * n * sublevel_variance(dist)));
}

double qcrb_uniform(double spin, int atoms, double big_t, double eta) {
    twice_spin(spin);
    if (spin < 1.0) {
        throw std::invalid_argument("qcrb_uniform: requires F >= 1, got " + std::to_string(spin));
    }
    check_atoms_and_scalars(atoms, big_t, eta);
    const double f = spin;
    return std::sqrt(45.0 / (4.0 * atoms * f * (1.0 + f) * (4.0 * f * f + 4.0 * f - 3.0))) / (big_t * std::sqrt(eta));
}

double qfi_from_state(const StateVector& state, const HermitianOperator& generator, double big_t) {
    if (!state.basis().same_space(generator.basis())) {
        throw std::invalid_argument("qfi_from_state: state and generator bases differ");
    }
    const Eigen::VectorXcd image = generator.matrix() * state.amplitudes();
    const double mean = state.amplitudes().dot(image).real();
    const double second = image.squaredNorm();
    return 4.0 * big_t * big_t * std::max(second - mean * mean, 0.0);
}

double qcrb_from_qfi(double qfi, double eta) {
    if (!(qfi > 0.0)) {
        throw std::domain_error("qcrb_from_qfi: QFI must be positive, got " + std::to_string(qfi));
    }
    if (!(eta > 0.0)) {
        throw std::invalid_argument("qcrb_from_qfi: eta must be positive");
    }
    return 1.0 / std::sqrt(eta * qfi);
}

std::string_view to_string(StateFamily family) {
    switch (family) {
    case StateFamily::Product:
        return "product";
    case StateFamily::Ghz:
        return "ghz";
    }
    return "unknown";
}

namespace {

double shell_variance(const std::vector<double>& weights, const std::vector<double>& m_squared) {
    double first = 0.0;
    double second = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        first += weights[j] * m_squared[j];
        second += weights[j] * m_squared[j] * m_squared[j];
    }
    return second - first * first;
}

// Visits every composition of `units` into weights.size() non-negative parts.
template <typename Visit>
void for_each_composition(std::vector<int>& parts, std::size_t slot, int remaining, Visit& visit) {
    if (slot + 1 == parts.size()) {
        parts[slot] = remaining;
        visit(parts);
        return;
    }
    for (int take = 0; take <= remaining; ++take) {
        parts[slot] = take;
        for_each_composition(parts, slot + 1, remaining - take, visit);
    }
}

} // namespace

SpinDistribution optimal_distribution(double spin) {
    const int twice = twice_spin(spin);
    if (twice == 0) {
        throw std::invalid_argument("optimal_distribution: F = 0 has a single sublevel");
    }
    const auto levels = static_cast<std::size_t>(twice + 1);
    std::vector<double> weights(levels, 0.0);
    weights.front() += 0.25;
    weights.back() += 0.25;
    if (twice % 2 == 0) {
        weights[levels / 2] += 0.5;
    } else {
        weights[levels / 2 - 1] += 0.25;
        weights[levels / 2] += 0.25;
    }
    return SpinDistribution::from_weights(spin, weights);
}

OptimizedDistribution optimize_distribution(double spin, StateFamily family, int atoms, double big_t, double eta,
                                            double grid_step) {
    const int twice = twice_spin(spin);
    if (spin > 4.0 || twice == 0) {
        throw std::invalid_argument("optimize_distribution: spin must be in [1/2, 4]");
    }
    if (!(grid_step > 0.0) || grid_step > 0.5) {
        throw std::invalid_argument("optimize_distribution: grid step must be in (0, 0.5]");
    }
    check_atoms_and_scalars(atoms, big_t, eta);

    // Shells |m| = F, F-1, ..., down to 0 or 1/2.
    std::vector<double> m_squared;
    for (int twice_m = twice; twice_m >= 0; twice_m -= 2) {
        const double m = 0.5 * twice_m;
        m_squared.push_back(m * m);
    }
    const std::size_t shells = m_squared.size();

    const int units = static_cast<int>(std::lround(1.0 / grid_step));
    std::vector<double> best(shells, 0.0);
    best[0] = 1.0;
    double best_variance = -1.0;
    if (shells == 1) {
        best_variance = 0.0;
    } else {
        std::vector<int> parts(shells, 0);
        std::vector<double> trial(shells, 0.0);
        auto visit = [&](const std::vector<int>& p) {
            for (std::size_t j = 0; j < shells; ++j) {
                trial[j] = static_cast<double>(p[j]) / units;
            }
            const double v = shell_variance(trial, m_squared);
            if (v > best_variance) {
                best_variance = v;
                best = trial;
            }
        };
        for_each_composition(parts, 0, units, visit);

        for (double step = 0.5 * grid_step; step > 1e-14; step *= 0.5) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (std::size_t from = 0; from < shells; ++from) {
                    for (std::size_t to = 0; to < shells; ++to) {
                        if (from == to || best[from] < step) {
                            continue;
                        }
                        auto candidate = best;
                        candidate[from] -= step;
                        candidate[to] += step;
                        const double v = shell_variance(candidate, m_squared);
                        if (v > best_variance) {
                            best_variance = v;
                            best = std::move(candidate);
                            improved = true;
                        }
                    }
                }
            }
        }
    }

    // Spread each shell over its +m and -m sublevels; index = m + F.
    std::vector<double> weights(static_cast<std::size_t>(twice + 1), 0.0);
    for (std::size_t j = 0; j < shells; ++j) {
        const int twice_m = twice - 2 * static_cast<int>(j);
        const auto up = static_cast<std::size_t>((twice + twice_m) / 2);
        const auto down = static_cast<std::size_t>((twice - twice_m) / 2);
        if (up == down) {
            weights[up] += best[j];
        } else {
            weights[up] += 0.5 * best[j];
            weights[down] += 0.5 * best[j];
        }
    }
    auto distribution = SpinDistribution::from_weights(spin, weights);
    const double delta_kappa = family == StateFamily::Product ? qcrb_product(distribution, atoms, big_t, eta)
                                                              : qcrb_ghz(distribution, atoms, big_t, eta);
    return {std::move(distribution), delta_kappa};
}

double wigner_eckart_coefficient(double spin, double m) {
    twice_spin(spin);
    if (spin < 1.0) {
        throw std::invalid_argument("wigner_eckart_coefficient: requires F >= 1, got " + std::to_string(spin));
    }
    if (std::abs(m) > spin + 1e-12 || std::abs(2.0 * (spin - m) - std::round(2.0 * (spin - m))) > 1e-12 ||
        std::lround(2.0 * (spin - m)) % 2 != 0) {
        throw std::invalid_argument("wigner_eckart_coefficient: m = " + std::to_string(m) +
                                    " is not a sublevel of F = " + std::to_string(spin));
    }
    const double f = spin;
    return (-f * (f + 1.0) + 3.0 * m * m) / std::sqrt((2.0 * f + 3.0) * (f + 1.0) * (2.0 * f + 1.0) * (2.0 * f - 1.0));
}

double kappa_to_c02(double kappa, double shift_per_c02_hz, double delta_jz2) {
    if (shift_per_c02_hz == 0.0) {
        throw std::domain_error("kappa_to_c02: Delta E / (h C0) must be nonzero");
    }
    return kappa / (2.0 * std::numbers::pi) * delta_jz2 / shift_per_c02_hz;
}

double c02_to_kappa(double c02, double shift_per_c02_hz, double delta_jz2) {
    if (delta_jz2 == 0.0) {
        throw std::domain_error("c02_to_kappa: Delta(jz^2) must be nonzero");
    }
    return 2.0 * std::numbers::pi * shift_per_c02_hz / delta_jz2 * c02;
}

} // namespace spinlsv
