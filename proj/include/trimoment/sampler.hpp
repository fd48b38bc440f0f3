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

/**
 * @file
 * Monte Carlo projective measurement of collective spin observables and
 * moment estimation from the resulting outcome tallies.
 *
 * Measurements are ideal eigenbasis measurements of the chosen operator.
 * J_x' and J_y' do not commute, so S is estimated from two independent runs
 * on fresh preparations of the state.
 *
 * Random streams (std::mt19937_64) are derived from the user seed with
 * mix_seed(seed, stream): stream 0 samples J_x', stream 1 samples J_y',
 * streams 2 and 3 drive the corresponding bootstraps.
 */

#pragma once

#include "core.hpp"
#include "frame.hpp"
#include "moments.hpp"
#include "operators.hpp"
#include "states.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace trimoment {

inline constexpr int kBootstrapResamples = 200;
inline constexpr std::int64_t kMinShotsMoments = 100;
inline constexpr std::int64_t kMinShotsS = 1000;

struct MeasurementRecord {
    std::string operator_tag;
    int n_atoms = 0;
    /// Sorted distinct outcomes; outcomes with zero count are kept.
    std::vector<double> eigenvalues;
    std::vector<std::int64_t> counts;
    std::int64_t n_shots = 0;
    std::uint64_t seed = 0;
};

/// Eigenvalue groups of a hermitian operator and the Born probability of each.
struct OutcomeDistribution {
    std::vector<double> eigenvalues;
    std::vector<double> probabilities;
};

inline OutcomeDistribution outcome_distribution(const Vector &psi, const OperatorMatrix &op,
                                                double merge_tol = Tolerances{}.eigen_merge) {
    if (!op.hermitian()) {
        throw InvalidArgument("projective measurement needs a hermitian operator");
    }
    if (psi.size() != op.dim()) {
        throw DimensionMismatch("state dimension does not match operator dimension");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(op.entries());
    if (es.info() != Eigen::Success) {
        throw InvalidArgument("eigendecomposition failed");
    }
    const Eigen::VectorXd &vals = es.eigenvalues();
    const Vector overlaps = es.eigenvectors().adjoint() * psi;

    OutcomeDistribution d;
    Eigen::Index k = 0;
    while (k < vals.size()) {
        const double first = vals(k);
        double sum_val = 0.0, prob = 0.0;
        Eigen::Index members = 0;
        while (k < vals.size() && vals(k) - first <= merge_tol) {
            sum_val += vals(k);
            prob += std::norm(overlaps(k));
            ++members;
            ++k;
        }
        d.eigenvalues.push_back(sum_val / static_cast<double>(members));
        d.probabilities.push_back(prob);
    }
    double total = 0.0;
    for (double p : d.probabilities) {
        total += p;
    }
    for (double &p : d.probabilities) {
        p /= total;
    }
    return d;
}

namespace detail {

/// Multinomial tally by sequential binomial draws.
inline std::vector<std::int64_t> multinomial(std::int64_t n, const std::vector<double> &p,
                                             std::mt19937_64 &rng) {
    std::vector<std::int64_t> out(p.size(), 0);
    double remaining_p = 1.0;
    std::int64_t remaining_n = n;
    for (std::size_t k = 0; k < p.size() && remaining_n > 0; ++k) {
        if (k + 1 == p.size()) {
            out[k] = remaining_n;
            break;
        }
        const double q = remaining_p > 0.0 ? std::clamp(p[k] / remaining_p, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::int64_t> bin(remaining_n, q);
        out[k] = bin(rng);
        remaining_n -= out[k];
        remaining_p -= p[k];
    }
    return out;
}

inline MeasurementRecord sample_vector(const Vector &psi, const OperatorMatrix &op, int n_atoms,
                                       std::int64_t n_shots, std::uint64_t seed,
                                       std::string tag) {
    if (n_shots < 1) {
        throw InvalidArgument("number of shots must be positive");
    }
    const OutcomeDistribution d = outcome_distribution(psi, op);
    std::vector<double> cdf(d.probabilities.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        acc += d.probabilities[k];
        cdf[k] = acc;
    }
    MeasurementRecord r{std::move(tag), n_atoms, d.eigenvalues,
                        std::vector<std::int64_t>(d.eigenvalues.size(), 0), n_shots, seed};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (std::int64_t s = 0; s < n_shots; ++s) {
        const double u = u01(rng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        // Never land on a zero-probability tail outcome through rounding.
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()),
                                              cdf.size() - 1);
        while (k > 0 && d.probabilities[k] == 0.0) {
            --k;
        }
        ++r.counts[k];
    }
    return r;
}

} // namespace detail

/// M ideal measurements of a Dicke-space observable on a symmetric state.
inline MeasurementRecord projective_sample(const SymmetricState &s, const OperatorMatrix &op,
                                           std::int64_t n_shots, std::uint64_t seed,
                                           std::string tag = "op") {
    if (op.space() != Space::Dicke) {
        throw DimensionMismatch("symmetric states are sampled with Dicke-space operators");
    }
    return detail::sample_vector(s.coeffs(), op, s.n_atoms(), n_shots, seed, std::move(tag));
}

inline MeasurementRecord projective_sample(const FullState &f, const OperatorMatrix &op,
                                           std::int64_t n_shots, std::uint64_t seed,
                                           std::string tag = "op") {
    if (op.space() != Space::Full) {
        throw DimensionMismatch("full states are sampled with full-space operators");
    }
    return detail::sample_vector(f.amplitudes(), op, f.n_atoms(), n_shots, seed, std::move(tag));
}

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

struct MomentEstimate {
    Estimate mean;
    Estimate m2;
    Estimate m3;
    int n_resamples = 0;
};

namespace detail {

struct PlugIn {
    double mean, m2, m3;
};

inline PlugIn plug_in(const std::vector<double> &values, const std::vector<std::int64_t> &counts,
                      std::int64_t n) {
    const double inv = 1.0 / static_cast<double>(n);
    double mean = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        mean += static_cast<double>(counts[k]) * inv * values[k];
    }
    double m2 = 0.0, m3 = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double f = static_cast<double>(counts[k]) * inv;
        const double d = values[k] - mean;
        m2 += f * d * d;
        m3 += f * d * d * d;
    }
    return {mean, m2, m3};
}

inline double sample_sd(const std::vector<double> &x) {
    if (x.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

} // namespace detail

/// Plug-in mean and central moments with bootstrap standard errors.
inline MomentEstimate estimate_moments(const MeasurementRecord &r, std::uint64_t bootstrap_seed,
                                       int n_resamples = kBootstrapResamples) {
    if (r.n_shots < kMinShotsMoments) {
        throw InsufficientShots("moment estimation needs at least " +
                                std::to_string(kMinShotsMoments) + " shots, got " +
                                std::to_string(r.n_shots));
    }
    if (r.counts.size() != r.eigenvalues.size()) {
        throw DimensionMismatch("record has mismatched eigenvalue and count lists");
    }
    std::int64_t total = 0;
    for (auto c : r.counts) {
        if (c < 0) {
            throw InvalidArgument("negative count in record");
        }
        total += c;
    }
    if (total != r.n_shots) {
        throw InvalidArgument("counts do not sum to the number of shots");
    }

    const detail::PlugIn point = detail::plug_in(r.eigenvalues, r.counts, r.n_shots);
    std::vector<double> freq(r.counts.size());
    for (std::size_t k = 0; k < freq.size(); ++k) {
        freq[k] = static_cast<double>(r.counts[k]) / static_cast<double>(r.n_shots);
    }
    std::mt19937_64 rng(bootstrap_seed);
    std::vector<double> means, m2s, m3s;
    for (int b = 0; b < n_resamples; ++b) {
        const auto resampled = detail::multinomial(r.n_shots, freq, rng);
        const detail::PlugIn p = detail::plug_in(r.eigenvalues, resampled, r.n_shots);
        means.push_back(p.mean);
        m2s.push_back(p.m2);
        m3s.push_back(p.m3);
    }
    return {{point.mean, detail::sample_sd(means)},
            {point.m2, detail::sample_sd(m2s)},
            {point.m3, detail::sample_sd(m3s)},
            n_resamples};
}

inline MomentEstimate estimate_moments(const MeasurementRecord &r) {
    return estimate_moments(r, mix_seed(r.seed, 2));
}

struct SEstimate {
    double s_hat = 0.0;
    double se = 0.0;
    RotationAngles angles = RotationAngles::from_angles(0.0, 0.0);
    MeasurementRecord record_xp;
    MeasurementRecord record_yp;
    MomentEstimate moments_xp;
    MomentEstimate moments_yp;
    std::uint64_t seed = 0;
};

/// Delta-method error of S = sqrt(a^2 + b^2) / 2. At S = 0 the gradient is
/// undefined; the RMS of the two errors, halved, is used instead.
inline double s_standard_error(Estimate a, Estimate b) {
    const double s = s_parameter(a.value, b.value);
    if (s == 0.0) {
        return 0.5 * std::sqrt(0.5 * (a.se * a.se + b.se * b.se));
    }
    return std::hypot(a.value * a.se, b.value * b.se) / (4.0 * s);
}

namespace detail {

template <class State>
SEstimate estimate_s_impl(const State &state, const MeanSpin &m, Space space,
                          std::int64_t n_shots, std::uint64_t seed, const Tolerances &tol) {
    if (n_shots < kMinShotsS) {
        throw InsufficientShots("S estimation needs at least " + std::to_string(kMinShotsS) +
                                " shots, got " + std::to_string(n_shots));
    }
    SEstimate e;
    e.seed = seed;
    e.angles = rotation_angles(m, tol.frame);
    const auto ops = rotated_ops(e.angles, state.n_atoms(), space);
    e.record_xp = projective_sample(state, ops[0], n_shots, mix_seed(seed, 0), "Jx'");
    e.record_yp = projective_sample(state, ops[1], n_shots, mix_seed(seed, 1), "Jy'");
    e.moments_xp = estimate_moments(e.record_xp, mix_seed(seed, 2));
    e.moments_yp = estimate_moments(e.record_yp, mix_seed(seed, 3));
    e.s_hat = s_parameter(e.moments_xp.m3.value, e.moments_yp.m3.value);
    e.se = s_standard_error(e.moments_xp.m3, e.moments_yp.m3);
    return e;
}

} // namespace detail

/// J_x' and J_y' sampled on independent preparations; the frame comes from
/// the exact mean spin of the prepared state.
inline SEstimate estimate_s_from_samples(const SymmetricState &s, std::int64_t n_shots,
                                         std::uint64_t seed, const Tolerances &tol = {}) {
    return detail::estimate_s_impl(s, mean_spin(s), Space::Dicke, n_shots, seed, tol);
}

inline SEstimate estimate_s_from_samples(const FullState &f, std::int64_t n_shots,
                                         std::uint64_t seed, const Tolerances &tol = {}) {
    return detail::estimate_s_impl(f, mean_spin(f), Space::Full, n_shots, seed, tol);
}

// ---------------------------------------------------------------------------
// Joint measurement of two commuting observables.

struct JointRecord {
    /// Distinct (a, b) outcome pairs, ordered by a then b.
    std::vector<std::pair<double, double>> outcomes;
    std::vector<double> probabilities;
    std::vector<std::int64_t> counts;
    std::int64_t n_shots = 0;
    std::uint64_t seed = 0;
};

/// Measures A and B together: A's eigenspaces are split by B restricted to
/// each of them. Throws when A and B do not commute.
inline JointRecord projective_sample_joint(const Vector &psi, const OperatorMatrix &a,
                                           const OperatorMatrix &b, std::int64_t n_shots,
                                           std::uint64_t seed,
                                           double merge_tol = Tolerances{}.eigen_merge) {
    if (a.dim() != b.dim() || psi.size() != a.dim()) {
        throw DimensionMismatch("joint measurement needs matching dimensions");
    }
    if (!a.hermitian() || !b.hermitian()) {
        throw InvalidArgument("joint measurement needs hermitian operators");
    }
    if (max_abs(commutator(a.entries(), b.entries())) > 1e-10) {
        throw InvalidArgument("joint measurement needs commuting operators");
    }
    if (n_shots < 1) {
        throw InvalidArgument("number of shots must be positive");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> ea(a.entries());
    const Eigen::VectorXd &va = ea.eigenvalues();
    JointRecord r;
    r.n_shots = n_shots;
    r.seed = seed;
    Eigen::Index k = 0;
    while (k < va.size()) {
        const Eigen::Index start = k;
        while (k < va.size() && va(k) - va(start) <= merge_tol) {
            ++k;
        }
        const Matrix basis = ea.eigenvectors().middleCols(start, k - start);
        const double a_val = va.segment(start, k - start).mean();
        const Matrix b_block = basis.adjoint() * b.entries() * basis;
        const Eigen::SelfAdjointEigenSolver<Matrix> eb(b_block);
        const Vector overlaps = eb.eigenvectors().adjoint() * (basis.adjoint() * psi);
        const Eigen::VectorXd &vb = eb.eigenvalues();
        Eigen::Index j = 0;
        while (j < vb.size()) {
            const Eigen::Index jstart = j;
            double p = 0.0;
            while (j < vb.size() && vb(j) - vb(jstart) <= merge_tol) {
                p += std::norm(overlaps(j));
                ++j;
            }
            r.outcomes.emplace_back(a_val, vb.segment(jstart, j - jstart).mean());
            r.probabilities.push_back(p);
        }
    }
    double total = 0.0;
    for (double p : r.probabilities) {
        total += p;
    }
    for (double &p : r.probabilities) {
        p /= total;
    }
    std::mt19937_64 rng(seed);
    r.counts = detail::multinomial(n_shots, r.probabilities, rng);
    return r;
}

} // namespace trimoment
