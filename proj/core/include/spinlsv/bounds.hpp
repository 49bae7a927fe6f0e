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

#include <string_view>
#include <vector>

#include "spinlsv/fock_space.hpp"
#include "spinlsv/operators.hpp"

namespace spinlsv {

/// Energy shift per unit C0^(2), Delta E / (h C0^(2)), in Hz, for 87Rb.
inline constexpr double kRb87ShiftPerC02Hz = 8.6e15;
inline constexpr double kDefaultDeltaJz2 = 1.0;

/// Single-atom state sum_m alpha_m |F, m> over the 2F+1 Zeeman sublevels.
class SpinDistribution {
  public:
    /// `spin` must be a non-negative multiple of 1/2 and `amplitudes` ordered
    /// m = -F, ..., F. Throws std::invalid_argument on a size mismatch or
    /// when the amplitudes are not normalized to 1e-12.
    SpinDistribution(double spin, std::vector<cplx> amplitudes);

    /// Builds amplitudes sqrt(w_m) from probabilities w_m (renormalized).
    static SpinDistribution from_weights(double spin, const std::vector<double>& weights);
    static SpinDistribution uniform(double spin);

    [[nodiscard]] double spin() const { return spin_; }
    [[nodiscard]] std::size_t levels() const { return amplitudes_.size(); }
    [[nodiscard]] const std::vector<cplx>& amplitudes() const { return amplitudes_; }
    /// m value of sublevel `index`, i.e. -F + index.
    [[nodiscard]] double m_of(std::size_t index) const { return -spin_ + static_cast<double>(index); }
    [[nodiscard]] std::vector<double> weights() const;

  private:
    double spin_;
    std::vector<cplx> amplitudes_;
};

struct MomentPair {
    double m1 = 0.0; ///< sum |alpha_m|^2 m^2
    double m2 = 0.0; ///< sum |alpha_m|^2 m^4
    [[nodiscard]] double variance() const { return m2 - m1 * m1; }
};

MomentPair moments(const SpinDistribution& dist);

/// Uncorrelated N-atom product state: Delta kappa = 1 / (T sqrt(4 eta N (M2 - M1^2))).
/// Throws std::domain_error when M2 = M1^2 (zero QFI).
double qcrb_product(const SpinDistribution& dist, int atoms, double big_t = 1.0, double eta = 1.0);

/// Product state with uniform sublevel weights, in closed form:
/// sqrt(45 / (4 N F (F+1) (4F^2 + 4F - 3))) / (T sqrt(eta)). Requires F >= 1.
double qcrb_uniform(double spin, int atoms, double big_t = 1.0, double eta = 1.0);

/// Multimode GHZ state sum_m alpha_m |F, m>^N: N^2 replaces N in qcrb_product.
double qcrb_ghz(const SpinDistribution& dist, int atoms, double big_t = 1.0, double eta = 1.0);

/// Pure-state QFI 4 T^2 (<G^2> - <G>^2) for the encoding exp(-i kappa G T).
double qfi_from_state(const StateVector& state, const HermitianOperator& generator, double big_t = 1.0);

/// 1 / sqrt(eta F_Q). Throws std::domain_error unless F_Q > 0.
double qcrb_from_qfi(double qfi, double eta = 1.0);

enum class StateFamily { Product, Ghz };

std::string_view to_string(StateFamily family);

struct OptimizedDistribution {
    SpinDistribution distribution;
    double delta_kappa;
};

/// Closed-form maximizer of M2 - M1^2: equal weight on the largest and the
/// smallest |m| shell, each split over +m and -m. For integer F this is
/// (1/4, 1/2, 1/4) on m = -F, 0, F.
SpinDistribution optimal_distribution(double spin);

/// Maximizes M2 - M1^2 over the sublevel weights for spin <= 4.
///
/// Phases and the sign of m drop out of M1 and M2, so the search runs over
/// the weight carried by each |m| shell: an exhaustive simplex grid with
/// spacing `grid_step`, then pairwise coordinate refinement. The shell weight
/// is split equally between +m and -m in the returned distribution.
OptimizedDistribution optimize_distribution(double spin, StateFamily family, int atoms = 1, double big_t = 1.0,
                                            double eta = 1.0, double grid_step = 1e-2);

/// Matrix element <F, m| (p^2 - 3 p_z^2) / 6 m_e |F, m> in units of the
/// reduced matrix element <F||T^(2)||F>. Requires F >= 1 and |m| <= F.
double wigner_eckart_coefficient(double spin, double m);

/// C0^(2) = (kappa / 2 pi) * Delta(jz^2) / (Delta E / (h C0^(2))).
/// Throws std::domain_error when the shift coefficient is zero.
double kappa_to_c02(double kappa, double shift_per_c02_hz = kRb87ShiftPerC02Hz,
                    double delta_jz2 = kDefaultDeltaJz2);
/// Inverse of kappa_to_c02. Throws std::domain_error when delta_jz2 is zero.
double c02_to_kappa(double c02, double shift_per_c02_hz = kRb87ShiftPerC02Hz,
                    double delta_jz2 = kDefaultDeltaJz2);

} // namespace spinlsv
