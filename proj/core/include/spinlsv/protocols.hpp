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
#include <functional>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "spinlsv/dynamics.hpp"
#include "spinlsv/fock_space.hpp"
#include "spinlsv/operators.hpp"

namespace spinlsv {

/// Central-difference step in kappa is kDefaultKappaStep / T.
inline constexpr double kDefaultKappaStep = 1e-6;
/// Value returned by the precision functions when the response is flat.
inline constexpr double kUnresolved = std::numeric_limits<double>::infinity();

/// Spin-mixing interferometer: preparation and recombination under H_smd for
/// time t around a phase stage of duration T.
struct SmdConfig {
    int atoms = 10;
    double chi = 1.0;
    double t = 1.0;
    double kappa = 0.0;
    double big_t = 1.0;

    /// Throws std::invalid_argument unless atoms is even and positive,
    /// t is in (0, 2 pi], T > 0 and the rest is finite.
    void validate() const;
};

/// State the forward ramp of the QPT interferometer starts from.
enum class QptStart {
    /// Ground state of H_qpt(c2, q0) on the zero-magnetization sector, the
    /// polar state |0,N,0> dressed by pair coupling at finite q0.
    GroundState,
    /// The bare Fock state |0,N,0>.
    Fock,
};

/// Quantum-phase-transition interferometer: ramp q0 -> 0, rotate, phase,
/// rotate back, ramp 0 -> qf, all sweeps at rate beta.
struct QptConfig {
    int atoms = 10;
    double c2 = -1.0;
    double q0 = 3.0;
    double qf = 3.0;
    double beta = 0.01;
    double kappa = 0.0;
    double big_t = 1.0;
    double tolerance = kDefaultRampTolerance;
    QptStart start = QptStart::GroundState;

    /// Throws std::invalid_argument unless atoms is even and positive,
    /// c2 < 0, beta > 0, q0 and qf >= 0, T > 0.
    void validate() const;
};

/// Gaussian detection noise of width sigma (atoms) on the N0 count.
struct NoiseModel {
    double sigma = 0.0;
};

/// Echo through spin-mixing: exp(+i H t) exp(-i kappa G T) exp(-i H t) |0,N,0>.
class SmdEchoModel {
  public:
    SmdEchoModel(int atoms, double chi, double big_t);

    [[nodiscard]] const BasisPtr& basis_ptr() const { return basis_; }
    [[nodiscard]] StateVector initial_state() const;
    /// State entering the phase stage, exp(-i H t) |0,N,0>.
    [[nodiscard]] StateVector input_state(double t) const;
    [[nodiscard]] StateVector final_state(double t, double kappa) const;
    /// Recombination applied to an already prepared input.
    [[nodiscard]] StateVector recombine(const StateVector& input, double t, double kappa) const;

  private:
    BasisPtr basis_;
    double big_t_;
    SpectralCache spectrum_;
};

/// (|0,N,0> + |N/2,0,N/2>)/sqrt(2), phase stage, then exp(+i H_smd t).
class SuperpositionModel {
  public:
    SuperpositionModel(int atoms, double chi, double big_t);

    [[nodiscard]] const BasisPtr& basis_ptr() const { return basis_; }
    [[nodiscard]] const StateVector& input_state() const { return input_; }
    [[nodiscard]] StateVector final_state(double t, double kappa) const;

  private:
    BasisPtr basis_;
    double big_t_;
    SpectralCache spectrum_;
    StateVector input_;
};

/// Start of the forward ramp on the zero-magnetization sector. The ground
/// state is phased so that its |0,N,0> amplitude is real and positive.
StateVector qpt_initial_state(const QptConfig& config);

/// Every kappa-independent stage of the QPT interferometer, computed once.
///
/// The forward ramp runs on the zero-magnetization sector. The rotation and
/// the reverse-ramp propagator act on the Full basis, so final_state(kappa)
/// only costs the phase stage and two dense applications.
class QptPipeline {
  public:
    explicit QptPipeline(const QptConfig& config);

    [[nodiscard]] const QptConfig& config() const { return config_; }
    /// After the forward ramp (zero-magnetization sector).
    [[nodiscard]] const StateVector& prepared_state() const { return prepared_; }
    /// After the first rotation (Full basis); the state entering the phase stage.
    [[nodiscard]] const StateVector& input_state() const { return input_; }
    [[nodiscard]] double forward_norm_drift() const { return forward_norm_drift_; }
    [[nodiscard]] const RampPropagator& reverse_ramp() const { return reverse_; }

    [[nodiscard]] StateVector final_state(double kappa) const;

  private:
    QptConfig config_;
    BasisPtr full_;
    double forward_norm_drift_ = 0.0;
    StateVector prepared_;
    Rotation rotation_;
    StateVector input_;
    RampPropagator reverse_;
};

StateVector run_smd_echo(const SmdConfig& config);
/// Requires even N so that |N/2, 0, N/2> exists.
StateVector run_superposition(const SmdConfig& config);
StateVector run_qpt(const QptConfig& config);

using FinalStateFn = std::function<StateVector(double kappa)>;

/// Error propagation Delta N0 / |d<N0>/d kappa| with a central difference.
/// Returns kUnresolved when the derivative is below 1e-12 or the difference
/// of means is lost in floating-point noise.
double precision(const FinalStateFn& final_state, double kappa, double kappa_step);

/// Gaussian blur of a count distribution over 0..N. Each true count is spread
/// with a kernel normalized over 0..N, so the result stays normalized.
/// sigma = 0 returns the input unchanged.
std::vector<double> noisy_distribution(std::span<const double> distribution, double sigma);

/// precision() on the noise-blurred N0 distribution. Bit-identical to
/// precision() when sigma = 0.
double precision_noisy(const FinalStateFn& final_state, double kappa, double kappa_step, const NoiseModel& noise);

/// Delta kappa from the N0 distributions at kappa - step, kappa, kappa + step.
double precision_from_distributions(std::span<const double> minus, std::span<const double> center,
                                    std::span<const double> plus, double kappa_step);

/// 200 uniform points in (0, 2 pi] by default.
std::vector<double> default_t_grid(int points = 200);
/// kappa values whose kappa T covers [-0.1 pi, 0.1 pi] uniformly; odd counts hit 0 exactly.
std::vector<double> default_kappa_grid(int points = 101, double big_t = 1.0);

struct SmdEchoProtocol {
    int atoms = 10;
    double chi = 1.0;
    double big_t = 1.0;
};

struct SuperpositionProtocol {
    int atoms = 10;
    double chi = 1.0;
    double big_t = 1.0;
};

struct QptProtocol {
    QptConfig config; ///< kappa is ignored; the scan supplies it.
};

using Protocol = std::variant<SmdEchoProtocol, SuperpositionProtocol, QptProtocol>;

struct ScanResult {
    std::vector<double> t_values;     ///< empty for protocols without a t stage
    std::vector<double> kappa_values;
    Eigen::MatrixXd surface;          ///< rows follow t (a single row without t), columns follow kappa
    double delta_kappa_min = kUnresolved;
    double t_opt = std::numeric_limits<double>::quiet_NaN();
    double kappa_opt = std::numeric_limits<double>::quiet_NaN();
    std::size_t t_index = 0;
    std::size_t kappa_index = 0;
};

/// Evaluates the precision landscape and its minimum. Non-finite points are
/// skipped; ties go to the lowest (t index, kappa index). Throws
/// std::runtime_error("flat response") when no grid point is finite.
/// A kappa_step of 0 means kDefaultKappaStep / T.
ScanResult scan_optimal_precision(const Protocol& protocol, std::span<const double> t_grid,
                                  std::span<const double> kappa_grid, const NoiseModel& noise = {},
                                  double kappa_step = 0.0);

/// Same scan for several noise widths; the final states are computed once.
std::vector<ScanResult> scan_optimal_precision(const Protocol& protocol, std::span<const double> t_grid,
                                               std::span<const double> kappa_grid,
                                               std::span<const NoiseModel> noises, double kappa_step = 0.0);

/// The QPT scan over a pipeline that is already built.
std::vector<ScanResult> scan_qpt_pipeline(const QptPipeline& pipeline, std::span<const double> kappa_grid,
                                          std::span<const NoiseModel> noises, double kappa_step = 0.0);

struct ScalingPoint {
    int atoms = 0;
    double delta_kappa_min = 0.0;
};

/// Ordinary least squares of ln(delta_kappa_min T) on ln N.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; ///< sum of squared residuals
    std::size_t points = 0;
};

/// Requires at least three points with positive N and delta_kappa_min and
/// at least two distinct N.
FitResult fit_scaling(std::span<const ScalingPoint> points, double big_t = 1.0);

} // namespace spinlsv
