// Copyright 2026 The trimoment Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <numeric>

namespace trimoment {
namespace {

constexpr std::int64_t kShots = 100000;

std::int64_t total(const std::vector<std::int64_t> &c) {
    return std::accumulate(c.begin(), c.end(), std::int64_t{0});
}

MeasurementRecord synthetic(std::vector<double> values, std::vector<std::int64_t> counts) {
    MeasurementRecord r;
    r.operator_tag = "synthetic";
    r.n_atoms = 1;
    r.eigenvalues = std::move(values);
    r.counts = std::move(counts);
    r.n_shots = total(r.counts);
    r.seed = 99;
    return r;
}

TEST(ProjectiveSample, EigenstateGivesOneOutcome) {
    const SymmetricState s = dicke_basis_state(4, 1);
    const auto r = projective_sample(s, collective_op_dicke(Axis::Z, 4), 1000, 5);
    ASSERT_EQ(r.eigenvalues.size(), 5u);
    EXPECT_EQ(r.counts[3], 1000); // m = +1 is the fourth-smallest outcome
    EXPECT_EQ(total(r.counts), 1000);
}

TEST(ProjectiveSample, BornRuleOnOneQubit) {
    const double h = 1.0 / std::sqrt(2.0);
    const FullState f = product_to_full(ProductState::identical(1, {h, h}));
    const auto r = projective_sample(f, collective_op(Axis::Z, 1), kShots, 42);
    ASSERT_EQ(r.eigenvalues.size(), 2u);
    EXPECT_NEAR(r.eigenvalues[0], -0.5, 1e-15);
    EXPECT_NEAR(r.eigenvalues[1], 0.5, 1e-15);
    const double freq = static_cast<double>(r.counts[1]) / kShots;
    EXPECT_NEAR(freq, 0.5, 3.0 / std::sqrt(static_cast<double>(kShots)));
}

TEST(ProjectiveSample, MeanMatchesExpectation) {
    const SymmetricState s = random_symmetric_state(4, 31);
    const OperatorMatrix jz = collective_op_dicke(Axis::Z, 4);
    const auto r = projective_sample(s, jz, kShots, 7);
    const auto e = estimate_moments(r);
    const double exact_mean = expectation(s.coeffs(), jz).real();
    const double var = central_moment(s, jz, 2);
    EXPECT_NEAR(e.mean.value, exact_mean, 5.0 * std::sqrt(var / kShots));
}

TEST(ProjectiveSample, DeterministicPerSeed) {
    const SymmetricState s = random_symmetric_state(5, 2);
    const OperatorMatrix op = directional_op({0.3, 0.4, 0.866}, 5, Space::Dicke);
    const auto a = projective_sample(s, op, 5000, 11);
    const auto b = projective_sample(s, op, 5000, 11);
    const auto c = projective_sample(s, op, 5000, 12);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    EXPECT_NE(a.counts, c.counts);
}

TEST(ProjectiveSample, OutcomesRespectSpectrum) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 3 + static_cast<int>(seed % 3);
        const FullState f = dicke_to_full(random_symmetric_state(n, seed));
        const OperatorMatrix op = directional_op({0.6, 0.0, 0.8}, n, Space::Full);
        const auto r = projective_sample(f, op, 2000, seed);
        // Full-space collective operators have N+1 distinct, degenerate eigenvalues.
        ASSERT_EQ(r.eigenvalues.size(), static_cast<std::size_t>(n) + 1);
        for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
            EXPECT_NEAR(r.eigenvalues[k], -0.5 * n + static_cast<double>(k), 1e-10);
            EXPECT_LE(std::abs(r.eigenvalues[k]), 0.5 * n + 1e-9);
        }
        EXPECT_EQ(total(r.counts), 2000);
    }
}

TEST(ProjectiveSample, Errors) {
    const SymmetricState s = testing::w_state();
    EXPECT_THROW(projective_sample(s, collective_op(Axis::Z, 3), 10, 1), DimensionMismatch);
    EXPECT_THROW(projective_sample(s, collective_op_dicke(Axis::Z, 4), 10, 1), DimensionMismatch);
    EXPECT_THROW(projective_sample(s, collective_op_dicke(Axis::Z, 3), 0, 1), InvalidArgument);
    Matrix m = Matrix::Zero(4, 4);
    m(0, 1) = 1.0;
    EXPECT_THROW(projective_sample(s, OperatorMatrix(m, Space::Dicke, false), 10, 1),
                 InvalidArgument);
}

TEST(EstimateMoments, SingleOutcomeHasNoSpread) {
    const auto e = estimate_moments(synthetic({-0.5, 0.5}, {0, 500}));
    EXPECT_EQ(e.mean.value, 0.5);
    EXPECT_EQ(e.m2.value, 0.0);
    EXPECT_EQ(e.m3.value, 0.0);
    EXPECT_EQ(e.m2.se, 0.0);
    EXPECT_EQ(e.m3.se, 0.0);
}

TEST(EstimateMoments, SymmetricBinary) {
    const auto e = estimate_moments(synthetic({-0.5, 0.5}, {5000, 5000}));
    EXPECT_NEAR(e.m2.value, 0.25, 1e-15);
    EXPECT_NEAR(e.m3.value, 0.0, 1e-15);
    EXPECT_EQ(e.n_resamples, kBootstrapResamples);
}

TEST(EstimateMoments, RequiresEnoughShots) {
    EXPECT_THROW(estimate_moments(synthetic({-0.5, 0.5}, {40, 59})), InsufficientShots);
    EXPECT_NO_THROW(estimate_moments(synthetic({-0.5, 0.5}, {40, 60})));
}

TEST(EstimateMoments, RejectsInconsistentRecord) {
    auto r = synthetic({-0.5, 0.5}, {100, 100});
    r.n_shots = 150;
    EXPECT_THROW(estimate_moments(r), InvalidArgument);
}

TEST(EstimateMoments, ThirdMomentOfPinnedStateWithinBootstrapError) {
    const SymmetricState s = testing::half_top_state();
    const MomentReport exact = entanglement_s(s);
    const auto ops = rotated_ops(exact.angles, 3, Space::Dicke);
    const auto r = projective_sample(s, ops[0], kShots, 2024, "Jx'");
    const auto e = estimate_moments(r);
    EXPECT_GT(e.m3.se, 0.0);
    EXPECT_LE(std::abs(e.m3.value - exact.m3_xp_direct), 5.0 * e.m3.se);
    EXPECT_LE(std::abs(e.m2.value - exact.var_xp), 5.0 * e.m2.se);
}

TEST(EstimateS, ProductStateConsistentWithZero) {
    std::mt19937_64 rng(77);
    const SymmetricState s = coherent_state(4, random_qubit(rng));
    const SEstimate e = estimate_s_from_samples(s, kShots, 1);
    EXPECT_LE(e.s_hat, 5.0 * e.se);
    EXPECT_EQ(e.record_xp.n_shots, kShots);
    EXPECT_EQ(e.record_yp.n_shots, kShots);
}

TEST(EstimateS, PinnedStateWithinPropagatedError) {
    const double exact = testing::pins()["half_top"]["S"].get<double>();
    for (std::uint64_t seed : {1u, 2u}) {
        const SEstimate e = estimate_s_from_samples(testing::half_top_state(), kShots, seed);
        EXPECT_LE(std::abs(e.s_hat - exact), 5.0 * e.se) << "seed " << seed;
    }
}

TEST(EstimateS, SameSeedSameResult) {
    const SEstimate a = estimate_s_from_samples(testing::half_top_state(), 20000, 9);
    const SEstimate b = estimate_s_from_samples(testing::half_top_state(), 20000, 9);
    EXPECT_EQ(a.s_hat, b.s_hat);
    EXPECT_EQ(a.se, b.se);
    EXPECT_EQ(a.record_xp.counts, b.record_xp.counts);
    EXPECT_EQ(a.record_yp.counts, b.record_yp.counts);
}

TEST(EstimateS, FullStatePath) {
    const double h = 1.0 / std::sqrt(2.0);
    const FullState f = product_to_full(ProductState::identical(1, {h, Complex(0.0, h)}));
    const SEstimate e = estimate_s_from_samples(f, 10000, 3);
    EXPECT_EQ(e.record_xp.n_atoms, 1);
    EXPECT_LE(e.s_hat, 5.0 * e.se + 1e-15);
}

TEST(EstimateS, Errors) {
    EXPECT_THROW(estimate_s_from_samples(testing::half_top_state(), 999, 1), InsufficientShots);
    EXPECT_THROW(estimate_s_from_samples(ghz_state(3), 1000, 1), FrameUndefined);
}

TEST(EstimateS, StandardErrorAtZero) {
    EXPECT_NEAR(s_standard_error({0.0, 0.2}, {0.0, 0.2}), 0.1, 1e-15);
    EXPECT_NEAR(s_standard_error({0.3, 0.1}, {0.0, 0.5}), 0.5 * 0.1, 1e-15);
}

// Bootstrap SE shrinks like 1/sqrt(M): doubling M scales it by about 0.707.
TEST(Convergence, DoublingShotsShrinksStandardError) {
    const SymmetricState s = random_symmetric_state(3, 404);
    const auto ops = rotated_ops(rotation_angles(mean_spin(s)), 3, Space::Dicke);
    double ratio_sum = 0.0;
    const int runs = 8;
    for (int k = 0; k < runs; ++k) {
        const auto small = estimate_moments(projective_sample(s, ops[0], 20000, mix_seed(k, 1)));
        const auto large = estimate_moments(projective_sample(s, ops[0], 40000, mix_seed(k, 2)));
        ratio_sum += large.m3.se / small.m3.se;
    }
    const double ratio = ratio_sum / runs;
    EXPECT_GE(ratio, 0.5);
    EXPECT_LE(ratio, 0.9);
}

TEST(JointMeasurement, SymmetricStatesSitInTheTopCasimirSector) {
    const int n = 3;
    const FullState f = dicke_to_full(random_symmetric_state(n, 8));
    const auto r = projective_sample_joint(f.amplitudes(), collective_op(Axis::Z, n),
                                           total_spin_squared(n, Space::Full), 5000, 4);
    for (std::size_t k = 0; k < r.outcomes.size(); ++k) {
        if (r.counts[k] > 0) {
            EXPECT_NEAR(r.outcomes[k].second, 3.75, 1e-10);
        }
    }
    EXPECT_EQ(total(r.counts), 5000);
}

TEST(JointMeasurement, JointEqualsMarginalTimesConditional) {
    const int n = 3;
    Vector psi = Vector::Random(8);
    psi.normalize();
    const OperatorMatrix jz = collective_op(Axis::Z, n);
    const OperatorMatrix j2 = total_spin_squared(n, Space::Full);
    const std::int64_t shots = 200000;
    const auto r = projective_sample_joint(psi, jz, j2, shots, 6);

    // Projectors from a separate diagonalization of each operator.
    auto projector = [](const Matrix &m, double value) {
        const Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        Matrix p = Matrix::Zero(m.rows(), m.cols());
        for (Eigen::Index k = 0; k < m.rows(); ++k) {
            if (std::abs(es.eigenvalues()(k) - value) < 1e-8) {
                p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
            }
        }
        return p;
    };
    for (std::size_t k = 0; k < r.outcomes.size(); ++k) {
        const auto [a, b] = r.outcomes[k];
        const Vector pa_psi = projector(jz.entries(), a) * psi;
        const double p_a = pa_psi.squaredNorm();
        const double p_b_given_a =
            p_a > 0.0 ? (projector(j2.entries(), b) * pa_psi).squaredNorm() / p_a : 0.0;
        const double expected = p_a * p_b_given_a;
        EXPECT_NEAR(r.probabilities[k], expected, 1e-10);
        const double freq = static_cast<double>(r.counts[k]) / shots;
        EXPECT_NEAR(freq, expected, 5.0 * std::sqrt(expected * (1 - expected) / shots) + 1e-12);
    }
}

TEST(JointMeasurement, RejectsNonCommuting) {
    const Vector psi = dicke_to_full(testing::w_state()).amplitudes();
    EXPECT_THROW(projective_sample_joint(psi, collective_op(Axis::X, 3), collective_op(Axis::Z, 3),
                                         10, 1),
                 InvalidArgument);
}

} // namespace
} // namespace trimoment
