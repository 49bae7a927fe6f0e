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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "spinlsv/bounds.hpp"
#include "spinlsv/dynamics.hpp"
#include "support/oracles.hpp"

using namespace spinlsv;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

/// Weights on m = -F..F with `w` at the listed sublevels.
SpinDistribution weights_at(double spin, std::initializer_list<std::pair<double, double>> m_and_w) {
    std::vector<double> w(static_cast<std::size_t>(std::lround(2.0 * spin)) + 1, 0.0);
    for (const auto& [m, weight] : m_and_w) {
        w[static_cast<std::size_t>(std::lround(m + spin))] = weight;
    }
    return SpinDistribution::from_weights(spin, w);
}

StateVector ghz_analog(int n) {
    const auto full = enumerate_basis(n, Sector::full());
    return superpose(full, {{0.5, {n, 0, 0}}, {1.0 / std::sqrt(2.0), {0, n, 0}}, {0.5, {0, 0, n}}});
}

} // namespace

TEST_CASE("SpinDistribution validation", "[bounds]") {
    CHECK_THROWS_AS(SpinDistribution(1.0, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpinDistribution(1.0, {1.0, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpinDistribution(0.3, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpinDistribution::from_weights(1.0, {-0.1, 0.6, 0.5}), std::invalid_argument);
    const SpinDistribution half(0.5, {cplx(0.6, 0.0), cplx(0.0, 0.8)});
    CHECK(half.levels() == 2);
    CHECK(half.m_of(0) == -0.5);
}

TEST_CASE("moments examples", "[bounds]") {
    const MomentPair uniform = moments(SpinDistribution::uniform(1.0));
    CHECK_THAT(uniform.m1, WithinAbs(2.0 / 3.0, 1e-15));
    CHECK_THAT(uniform.m2, WithinAbs(2.0 / 3.0, 1e-15));

    const MomentPair polar = moments(weights_at(1.0, {{0.0, 1.0}}));
    CHECK(polar.m1 == 0.0);
    CHECK(polar.m2 == 0.0);

    const MomentPair stretched = moments(weights_at(2.0, {{2.0, 0.5}, {-2.0, 0.5}}));
    CHECK_THAT(stretched.m1, WithinAbs(4.0, 1e-14));
    CHECK_THAT(stretched.m2, WithinAbs(16.0, 1e-13));
}

TEST_CASE("qcrb_product examples", "[bounds]") {
    CHECK_THAT(qcrb_product(SpinDistribution::uniform(1.0), 2), WithinRel(0.75, 1e-14));
    for (int n : {1, 5, 40}) {
        CHECK_THAT(qcrb_product(SpinDistribution::uniform(1.0), n), WithinRel(std::sqrt(9.0 / (8.0 * n)), 1e-14));
    }
    CHECK_THROWS_WITH(qcrb_product(weights_at(1.0, {{1.0, 0.5}, {-1.0, 0.5}}), 4), ContainsSubstring("zero QFI state"));
    CHECK_THROWS_AS(qcrb_product(weights_at(1.0, {{1.0, 0.5}, {-1.0, 0.5}}), 4), std::domain_error);

    for (int f = 1; f <= 4; ++f) {
        const auto dist = weights_at(f, {{static_cast<double>(f), 0.5}, {0.0, 0.5}});
        for (int n : {1, 3, 17}) {
            CHECK_THAT(qcrb_product(dist, n), WithinRel(1.0 / (std::sqrt(n) * f * f), 1e-13));
        }
    }
    const auto dist = SpinDistribution::uniform(2.0);
    CHECK_THAT(qcrb_product(dist, 6, 2.5, 3.0), WithinRel(qcrb_product(dist, 6) / (2.5 * std::sqrt(3.0)), 1e-14));
}

TEST_CASE("qcrb_uniform examples and identity with the product bound", "[bounds]") {
    CHECK_THAT(qcrb_uniform(1.0, 2), WithinRel(0.75, 1e-14));
    CHECK_THAT(qcrb_uniform(1.0, 8), WithinRel(0.375, 1e-14));
    CHECK_THAT(qcrb_uniform(2.0, 1), WithinRel(std::sqrt(45.0 / 504.0), 1e-14));
    CHECK_THROWS_AS(qcrb_uniform(0.0, 1), std::invalid_argument);
    for (double f : {1.0, 1.5, 2.0, 3.0, 4.5, 7.0}) {
        for (int n : {1, 2, 9, 40}) {
            CHECK_THAT(qcrb_product(SpinDistribution::uniform(f), n, 1.3, 2.0),
                       WithinRel(qcrb_uniform(f, n, 1.3, 2.0), 1e-12));
        }
    }
}

TEST_CASE("qcrb_ghz examples", "[bounds]") {
    for (int f = 1; f <= 3; ++f) {
        const auto opt = weights_at(f, {{static_cast<double>(f), 0.25}, {0.0, 0.5}, {-static_cast<double>(f), 0.25}});
        for (int n : {2, 10, 40}) {
            CHECK_THAT(qcrb_ghz(opt, n), WithinRel(1.0 / (n * f * f), 1e-13));
        }
    }
    const auto opt1 = weights_at(1.0, {{1.0, 0.25}, {0.0, 0.5}, {-1.0, 0.25}});
    CHECK_THAT(qcrb_ghz(opt1, 10), WithinRel(0.1, 1e-14));
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto dist = SpinDistribution::from_weights(2.0, {u(rng), u(rng), u(rng), u(rng), u(rng)});
        const int n = 1 + trial * 4;
        CHECK_THAT(qcrb_ghz(dist, n), WithinRel(qcrb_product(dist, n) / std::sqrt(n), 1e-13));
    }
}

TEST_CASE("qfi_from_state examples", "[bounds]") {
    for (int n : {2, 6, 10}) {
        const auto sector = enumerate_basis(n, Sector::magnetization(0));
        CHECK(qfi_from_state(fock_state(sector, {0, n, 0}), lsv_generator(sector)) == 0.0);

        const auto ghz = ghz_analog(n);
        const double qfi = qfi_from_state(ghz, lsv_generator(ghz.basis_ptr()));
        CHECK_THAT(qfi, WithinRel(static_cast<double>(n * n), 1e-12));
        CHECK_THAT(qcrb_from_qfi(qfi), WithinRel(1.0 / n, 1e-12));
        const auto opt = weights_at(1.0, {{1.0, 0.25}, {0.0, 0.5}, {-1.0, 0.25}});
        const MomentPair m = moments(opt);
        CHECK_THAT(qfi, WithinRel(4.0 * n * n * m.variance(), 1e-9));
        CHECK_THAT(qcrb_from_qfi(qfi), WithinRel(qcrb_ghz(opt, n), 1e-12));

        const auto sup = superpose(sector, {{1.0, {0, n, 0}}, {1.0, {n / 2, 0, n / 2}}});
        CHECK_THAT(qfi_from_state(sup, lsv_generator(sector)), WithinRel(static_cast<double>(n * n), 1e-12));
        CHECK_THAT(qfi_from_state(sup, lsv_generator(sector), 3.0), WithinRel(9.0 * n * n, 1e-12));
    }
}

TEST_CASE("QFI variance form agrees with the fidelity expansion", "[bounds]") {
    std::mt19937 rng(99);
    const double delta = 1e-4;
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + trial;
        const auto basis = enumerate_basis(n, trial % 2 ? Sector::full() : Sector::magnetization(0));
        const auto psi = testing::random_state(basis, rng);
        const double big_t = 0.5 + 0.25 * trial;
        const double kappa = 0.3;
        const auto a = apply_lsv_phase(psi, kappa, big_t);
        const auto b = apply_lsv_phase(psi, kappa + delta, big_t);
        const double estimate = 8.0 * (1.0 - std::abs(overlap(a, b))) / (delta * delta);
        const double qfi = qfi_from_state(psi, lsv_generator(basis), big_t);
        CHECK_THAT(estimate, WithinRel(qfi, 1e-5));
    }
}

TEST_CASE("qcrb_from_qfi examples", "[bounds]") {
    CHECK_THAT(qcrb_from_qfi(100.0), WithinRel(0.1, 1e-15));
    CHECK_THAT(qcrb_from_qfi(4.0, 4.0), WithinRel(0.25, 1e-15));
    CHECK_THROWS_AS(qcrb_from_qfi(0.0), std::domain_error);
    CHECK_THROWS_AS(qcrb_from_qfi(-1.0), std::domain_error);
}

TEST_CASE("optimize_distribution reaches the closed-form optimum", "[bounds]") {
    const auto product = optimize_distribution(1.0, StateFamily::Product, 7);
    CHECK_THAT(product.delta_kappa * std::sqrt(7.0), WithinRel(1.0, 1e-6));

    // Optimum 1/(N F^2) for F = 2.
    const auto ghz = optimize_distribution(2.0, StateFamily::Ghz, 5);
    CHECK_THAT(ghz.delta_kappa * 5.0, WithinRel(0.25, 1e-6));

    for (double f : {1.0, 2.0, 3.0, 4.0}) {
        const auto best = optimize_distribution(f, StateFamily::Ghz);
        const auto w = best.distribution.weights();
        CHECK_THAT(w.front(), WithinAbs(0.25, 1e-4));
        CHECK_THAT(w[w.size() / 2], WithinAbs(0.5, 1e-4));
        CHECK_THAT(w.back(), WithinAbs(0.25, 1e-4));
    }

    for (double f : {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}) {
        for (const auto family : {StateFamily::Product, StateFamily::Ghz}) {
            const int n = 6;
            const auto best = optimize_distribution(f, family, n);
            const auto closed = optimal_distribution(f);
            const double reference = family == StateFamily::Product ? qcrb_product(closed, n) : qcrb_ghz(closed, n);
            CHECK(best.delta_kappa >= reference * (1.0 - 1e-12));
            CHECK_THAT(best.delta_kappa, WithinRel(reference, 1e-6));
        }
    }

    // Every spin-1/2 state has m^2 = 1/4, so no distribution carries QFI.
    CHECK_THROWS_AS(optimize_distribution(0.5, StateFamily::Product), std::domain_error);
    CHECK_THROWS_AS(optimize_distribution(4.5, StateFamily::Product), std::invalid_argument);
    CHECK_THROWS_AS(optimize_distribution(0.0, StateFamily::Product), std::invalid_argument);
}

TEST_CASE("optimal bounds decrease in N and F", "[bounds]") {
    for (int f = 1; f <= 4; ++f) {
        const auto dist = optimal_distribution(f);
        const auto next = optimal_distribution(f + 1);
        for (int n = 1; n < 30; ++n) {
            CHECK(qcrb_product(dist, n + 1) < qcrb_product(dist, n));
            CHECK(qcrb_ghz(dist, n + 1) < qcrb_ghz(dist, n));
            CHECK(qcrb_product(next, n) < qcrb_product(dist, n));
            CHECK(qcrb_ghz(next, n) < qcrb_ghz(dist, n));
        }
    }
}

TEST_CASE("wigner_eckart_coefficient examples", "[bounds]") {
    CHECK_THAT(wigner_eckart_coefficient(1.0, 1.0), WithinRel(1.0 / std::sqrt(30.0), 1e-14));
    CHECK_THAT(wigner_eckart_coefficient(1.0, -1.0), WithinRel(1.0 / std::sqrt(30.0), 1e-14));
    CHECK_THAT(wigner_eckart_coefficient(1.0, 0.0), WithinRel(-2.0 / std::sqrt(30.0), 1e-14));
    for (double f : {1.0, 1.5, 2.0, 3.0, 5.0}) {
        double total = 0.0;
        for (double m = -f; m <= f + 1e-9; m += 1.0) {
            total += wigner_eckart_coefficient(f, m);
        }
        CHECK_THAT(total, WithinAbs(0.0, 1e-13));
    }
    CHECK_THROWS_AS(wigner_eckart_coefficient(0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(wigner_eckart_coefficient(2.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(wigner_eckart_coefficient(2.0, 0.5), std::invalid_argument);
}

TEST_CASE("kappa and C0^(2) conversion", "[bounds]") {
    CHECK(kRb87ShiftPerC02Hz == 8.6e15);
    CHECK(kDefaultDeltaJz2 == 1.0);
    CHECK(kappa_to_c02(0.0) == 0.0);
    CHECK_THAT(kappa_to_c02(2.0 * std::numbers::pi * 8.6e15), WithinRel(1.0, 1e-15));
    for (double kappa : {1e-9, 0.37, 5e12}) {
        CHECK_THAT(c02_to_kappa(kappa_to_c02(kappa)), WithinRel(kappa, 1e-14));
        CHECK_THAT(c02_to_kappa(kappa_to_c02(kappa, 3e10, 0.5), 3e10, 0.5), WithinRel(kappa, 1e-14));
    }
    CHECK_THROWS_AS(kappa_to_c02(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(c02_to_kappa(1.0, 8.6e15, 0.0), std::domain_error);
}
