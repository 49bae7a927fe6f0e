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

#include "spinlsv/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

namespace spinlsv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// A derivative below this is treated as a flat response.
constexpr double kMinDerivative = 1e-12;
/// Differences of <N0> at or below this many times N are rounding noise.
constexpr double kMeanResolution = 1e-11;

void require(bool condition, const std::string& message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

void require_even_atoms(int atoms) {
    require(atoms > 0 && atoms % 2 == 0, "atom number must be even and positive, got " + std::to_string(atoms));
}

void require_interrogation(double big_t) {
    require(big_t > 0.0 && std::isfinite(big_t), "interrogation time T must be positive");
}

double resolve_step(double kappa_step, double big_t) {
    if (kappa_step == 0.0) {
        return kDefaultKappaStep / big_t;
    }
    require(kappa_step > 0.0 && std::isfinite(kappa_step), "kappa step must be positive");
    return kappa_step;
}

std::vector<double> n0_distribution(const StateVector& state) { return population_distribution(state, Mode::Zero); }

/// Distributions at kappa - step, kappa, kappa + step.
struct Triple {
    std::vector<double> minus;
    std::vector<double> center;
    std::vector<double> plus;
};

Triple sample(const FinalStateFn& final_state, double kappa, double step) {
    return {n0_distribution(final_state(kappa - step)), n0_distribution(final_state(kappa)),
            n0_distribution(final_state(kappa + step))};
}

double mean_of(std::span<const double> distribution) { return count_statistics(distribution).mean; }

double precision_with_noise(const Triple& triple, double step, double sigma) {
    if (sigma == 0.0) {
        return precision_from_distributions(triple.minus, triple.center, triple.plus, step);
    }
    return precision_from_distributions(noisy_distribution(triple.minus, sigma),
                                        noisy_distribution(triple.center, sigma),
                                        noisy_distribution(triple.plus, sigma), step);
}

void check_grid(std::span<const double> grid, const char* name) {
    require(!grid.empty(), std::string(name) + " grid is empty");
    for (double v : grid) {
        require(std::isfinite(v), std::string(name) + " grid contains a non-finite value");
    }
}

void check_noises(std::span<const NoiseModel> noises) {
    require(!noises.empty(), "at least one noise model is required");
    for (const auto& noise : noises) {
        require(noise.sigma >= 0.0 && std::isfinite(noise.sigma), "noise width sigma must be non-negative");
    }
}

/// Scans rows x columns of precomputed triples and locates the minimum.
template <typename TripleAt>
std::vector<ScanResult> reduce(std::span<const double> t_grid, std::span<const double> kappa_grid,
                               std::span<const NoiseModel> noises, double step, std::size_t rows,
                               TripleAt&& triple_at) {
    std::vector<ScanResult> results(noises.size());
    for (auto& result : results) {
        result.t_values.assign(t_grid.begin(), t_grid.end());
        result.kappa_values.assign(kappa_grid.begin(), kappa_grid.end());
        result.surface.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(kappa_grid.size()));
    }
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < kappa_grid.size(); ++c) {
            const Triple triple = triple_at(r, c);
            for (std::size_t k = 0; k < noises.size(); ++k) {
                const double value = precision_with_noise(triple, step, noises[k].sigma);
                auto& result = results[k];
                result.surface(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
                if (std::isfinite(value) && value < result.delta_kappa_min) {
                    result.delta_kappa_min = value;
                    result.t_index = r;
                    result.kappa_index = c;
                }
            }
        }
    }
    for (auto& result : results) {
        if (!std::isfinite(result.delta_kappa_min)) {
            throw std::runtime_error("flat response: no grid point gives a finite precision");
        }
        result.kappa_opt = kappa_grid[result.kappa_index];
        if (!t_grid.empty()) {
            result.t_opt = t_grid[result.t_index];
        }
    }
    return results;
}

} // namespace

void SmdConfig::validate() const {
    require_even_atoms(atoms);
    require(std::isfinite(chi), "chi must be finite");
    require(t > 0.0 && t <= kTwoPi, "preparation time t must lie in (0, 2 pi], got " + std::to_string(t));
    require(std::isfinite(kappa), "kappa must be finite");
    require_interrogation(big_t);
}

void QptConfig::validate() const {
    require_even_atoms(atoms);
    require(c2 < 0.0 && std::isfinite(c2), "c2 must be negative, got " + std::to_string(c2));
    require(beta > 0.0 && std::isfinite(beta), "ramp rate beta must be positive, got " + std::to_string(beta));
    require(q0 >= 0.0 && std::isfinite(q0), "q0 must be non-negative, got " + std::to_string(q0));
    require(qf >= 0.0 && std::isfinite(qf), "qf must be non-negative, got " + std::to_string(qf));
    require(std::isfinite(kappa), "kappa must be finite");
    require_interrogation(big_t);
    require(tolerance > 0.0, "ramp tolerance must be positive");
}

SmdEchoModel::SmdEchoModel(int atoms, double chi, double big_t)
    : basis_((require_even_atoms(atoms), enumerate_basis(atoms, Sector::magnetization(0)))),
      big_t_((require_interrogation(big_t), big_t)), spectrum_(h_smd(basis_, chi)) {}

StateVector SmdEchoModel::initial_state() const {
    const int n = basis_->total_atoms();
    return fock_state(basis_, {0, n, 0});
}

StateVector SmdEchoModel::input_state(double t) const { return spectrum_.evolve(initial_state(), t); }

StateVector SmdEchoModel::recombine(const StateVector& input, double t, double kappa) const {
    return spectrum_.evolve(apply_lsv_phase(input, kappa, big_t_), -t);
}

StateVector SmdEchoModel::final_state(double t, double kappa) const { return recombine(input_state(t), t, kappa); }

SuperpositionModel::SuperpositionModel(int atoms, double chi, double big_t)
    : basis_((require_even_atoms(atoms), enumerate_basis(atoms, Sector::magnetization(0)))),
      big_t_((require_interrogation(big_t), big_t)), spectrum_(h_smd(basis_, chi)),
      input_(superpose(basis_, {{cplx{1.0, 0.0}, OccupationTriple{0, atoms, 0}},
                                {cplx{1.0, 0.0}, OccupationTriple{atoms / 2, 0, atoms / 2}}})) {}

StateVector SuperpositionModel::final_state(double t, double kappa) const {
    return spectrum_.evolve(apply_lsv_phase(input_, kappa, big_t_), -t);
}

StateVector qpt_initial_state(const QptConfig& config) {
    config.validate();
    const auto sector = enumerate_basis(config.atoms, Sector::magnetization(0));
    const OccupationTriple polar{0, config.atoms, 0};
    if (config.start == QptStart::Fock) {
        return fock_state(sector, polar);
    }
    const SpectralCache spectrum(h_qpt(sector, config.c2, config.q0));
    Eigen::VectorXcd ground = spectrum.eigenvectors().col(0);
    const cplx anchor = ground(static_cast<Eigen::Index>(sector->index_of(polar)));
    if (std::abs(anchor) > 0.0) {
        ground *= std::conj(anchor) / std::abs(anchor);
    }
    return StateVector(sector, std::move(ground));
}

QptPipeline::QptPipeline(const QptConfig& config)
    : config_((config.validate(), config)), full_(enumerate_basis(config.atoms, Sector::full())),
      prepared_([&] {
          auto ramp = evolve_ramp(qpt_initial_state(config), config.c2,
                                  RampSchedule(config.q0, 0.0, config.beta), config.tolerance);
          forward_norm_drift_ = ramp.norm_drift;
          return std::move(ramp.state);
      }()),
      rotation_(full_), input_(rotation_.apply(promote_to_full(prepared_), std::numbers::pi / 2.0)),
      reverse_(full_, config.c2, RampSchedule(0.0, config.qf, config.beta), config.tolerance) {}

StateVector QptPipeline::final_state(double kappa) const {
    const auto phased = apply_lsv_phase(input_, kappa, config_.big_t);
    return reverse_.apply(rotation_.apply(phased, -std::numbers::pi / 2.0));
}

StateVector run_smd_echo(const SmdConfig& config) {
    config.validate();
    return SmdEchoModel(config.atoms, config.chi, config.big_t).final_state(config.t, config.kappa);
}

StateVector run_superposition(const SmdConfig& config) {
    config.validate();
    return SuperpositionModel(config.atoms, config.chi, config.big_t).final_state(config.t, config.kappa);
}

StateVector run_qpt(const QptConfig& config) { return QptPipeline(config).final_state(config.kappa); }

double precision_from_distributions(std::span<const double> minus, std::span<const double> center,
                                    std::span<const double> plus, double kappa_step) {
    require(kappa_step > 0.0, "kappa step must be positive");
    require(minus.size() == center.size() && plus.size() == center.size() && !center.empty(),
            "distributions must share one non-empty support");
    const double atoms = static_cast<double>(center.size() - 1);
    const double difference = mean_of(plus) - mean_of(minus);
    const double derivative = difference / (2.0 * kappa_step);
    if (!std::isfinite(derivative) || std::abs(derivative) < kMinDerivative ||
        std::abs(difference) <= kMeanResolution * std::max(atoms, 1.0)) {
        return kUnresolved;
    }
    return count_statistics(center).std / std::abs(derivative);
}

double precision(const FinalStateFn& final_state, double kappa, double kappa_step) {
    require(kappa_step > 0.0, "kappa step must be positive");
    const Triple triple = sample(final_state, kappa, kappa_step);
    return precision_from_distributions(triple.minus, triple.center, triple.plus, kappa_step);
}

std::vector<double> noisy_distribution(std::span<const double> distribution, double sigma) {
    require(sigma >= 0.0 && std::isfinite(sigma), "noise width sigma must be non-negative");
    std::vector<double> result(distribution.begin(), distribution.end());
    if (sigma == 0.0 || distribution.empty()) {
        return result;
    }
    const std::size_t size = distribution.size();
    std::fill(result.begin(), result.end(), 0.0);
    std::vector<double> kernel(size);
    const double denominator = 2.0 * sigma * sigma;
    for (std::size_t source = 0; source < size; ++source) {
        const double weight = distribution[source];
        if (weight == 0.0) {
            continue;
        }
        double total = 0.0;
        for (std::size_t n = 0; n < size; ++n) {
            const double offset = static_cast<double>(n) - static_cast<double>(source);
            kernel[n] = std::exp(-offset * offset / denominator);
            total += kernel[n];
        }
        for (std::size_t n = 0; n < size; ++n) {
            result[n] += weight * kernel[n] / total;
        }
    }
    return result;
}

double precision_noisy(const FinalStateFn& final_state, double kappa, double kappa_step, const NoiseModel& noise) {
    require(kappa_step > 0.0, "kappa step must be positive");
    require(noise.sigma >= 0.0 && std::isfinite(noise.sigma), "noise width sigma must be non-negative");
    return precision_with_noise(sample(final_state, kappa, kappa_step), kappa_step, noise.sigma);
}

std::vector<double> default_t_grid(int points) {
    require(points >= 1, "t grid needs at least one point");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 1; i <= points; ++i) {
        grid[static_cast<std::size_t>(i - 1)] = kTwoPi * i / points;
    }
    return grid;
}

std::vector<double> default_kappa_grid(int points, double big_t) {
    require(points >= 2, "kappa grid needs at least two points");
    require_interrogation(big_t);
    const double half_width = 0.1 * std::numbers::pi / big_t;
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double position = static_cast<double>(2 * i - (points - 1)) / (points - 1);
        grid[static_cast<std::size_t>(i)] = half_width * position;
    }
    return grid;
}

std::vector<ScanResult> scan_qpt_pipeline(const QptPipeline& pipeline, std::span<const double> kappa_grid,
                                          std::span<const NoiseModel> noises, double kappa_step) {
    check_grid(kappa_grid, "kappa");
    check_noises(noises);
    const double step = resolve_step(kappa_step, pipeline.config().big_t);
    const FinalStateFn final_state = [&](double kappa) { return pipeline.final_state(kappa); };
    return reduce({}, kappa_grid, noises, step, 1,
                  [&](std::size_t, std::size_t c) { return sample(final_state, kappa_grid[c], step); });
}

std::vector<ScanResult> scan_optimal_precision(const Protocol& protocol, std::span<const double> t_grid,
                                               std::span<const double> kappa_grid,
                                               std::span<const NoiseModel> noises, double kappa_step) {
    check_grid(kappa_grid, "kappa");
    check_noises(noises);
    return std::visit(
        [&](const auto& p) -> std::vector<ScanResult> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, QptProtocol>) {
                return scan_qpt_pipeline(QptPipeline(p.config), kappa_grid, noises, kappa_step);
            } else {
                check_grid(t_grid, "t");
                for (double t : t_grid) {
                    require(t > 0.0 && t <= kTwoPi, "t grid values must lie in (0, 2 pi]");
                }
                const double step = resolve_step(kappa_step, p.big_t);
                if constexpr (std::is_same_v<P, SmdEchoProtocol>) {
                    const SmdEchoModel model(p.atoms, p.chi, p.big_t);
                    std::size_t cached_row = t_grid.size();
                    std::optional<StateVector> input;
                    return reduce(t_grid, kappa_grid, noises, step, t_grid.size(), [&](std::size_t r, std::size_t c) {
                        if (cached_row != r) {
                            input.emplace(model.input_state(t_grid[r]));
                            cached_row = r;
                        }
                        const double t = t_grid[r];
                        const FinalStateFn final_state = [&](double kappa) {
                            return model.recombine(*input, t, kappa);
                        };
                        return sample(final_state, kappa_grid[c], step);
                    });
                } else {
                    const SuperpositionModel model(p.atoms, p.chi, p.big_t);
                    return reduce(t_grid, kappa_grid, noises, step, t_grid.size(), [&](std::size_t r, std::size_t c) {
                        const double t = t_grid[r];
                        const FinalStateFn final_state = [&](double kappa) { return model.final_state(t, kappa); };
                        return sample(final_state, kappa_grid[c], step);
                    });
                }
            }
        },
        protocol);
}

ScanResult scan_optimal_precision(const Protocol& protocol, std::span<const double> t_grid,
                                  std::span<const double> kappa_grid, const NoiseModel& noise, double kappa_step) {
    auto results = scan_optimal_precision(protocol, t_grid, kappa_grid, std::span<const NoiseModel>(&noise, 1),
                                          kappa_step);
    return std::move(results.front());
}

FitResult fit_scaling(std::span<const ScalingPoint> points, double big_t) {
    require(points.size() >= 3, "fit_scaling needs at least three points, got " + std::to_string(points.size()));
    require_interrogation(big_t);
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& point : points) {
        require(point.atoms > 0, "fit_scaling: atom numbers must be positive");
        require(point.delta_kappa_min > 0.0 && std::isfinite(point.delta_kappa_min),
                "fit_scaling: delta kappa values must be positive and finite");
        x.push_back(std::log(static_cast<double>(point.atoms)));
        y.push_back(std::log(point.delta_kappa_min * big_t));
    }
    const double n = static_cast<double>(x.size());
    double x_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x_mean += x[i] / n;
        y_mean += y[i] / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - x_mean) * (x[i] - x_mean);
        sxy += (x[i] - x_mean) * (y[i] - y_mean);
    }
    require(sxx > 0.0, "fit_scaling: needs at least two distinct atom numbers");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = y_mean - fit.slope * x_mean;
    fit.points = x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        fit.residual += r * r;
    }
    return fit;
}

} // namespace spinlsv
