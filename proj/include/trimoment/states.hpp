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
 * The three pure-state representations of N two-level atoms and the
 * conversions between them.
 *
 * Basis convention (fixed library-wide): a full-space basis index b has one
 * bit per atom, atom 1 in the most significant bit. A zero bit is the upper
 * level |u> (m = +1/2), a one bit the lower level |l> (m = -1/2). Dicke
 * coefficients are ordered m = j, j-1, ..., -j, so coeffs[k] multiplies the
 * symmetric state with k atoms in the lower level.
 */

#pragma once

#include "core.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace trimoment {

/// Bit of the full-space basis index that belongs to `atom` (1-based).
inline std::size_t atom_mask(int atom, int n_atoms) noexcept {
    return std::size_t{1} << static_cast<unsigned>(n_atoms - atom);
}

inline std::size_t full_dim(int n_atoms) noexcept {
    return std::size_t{1} << static_cast<unsigned>(n_atoms);
}

enum class SizePolicy : std::uint8_t { Capped, AllowLarge };

namespace detail {

inline void check_norm(double norm2, double tol, const char *what) {
    if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > tol) {
        throw InvalidState(std::string(what) + " is not normalized (|psi|^2 = " +
                           std::to_string(norm2) + ")");
    }
}

inline void check_full_size(int n_atoms, SizePolicy policy) {
    if (n_atoms < 1) {
        throw InvalidState("n_atoms must be positive");
    }
    if (n_atoms > 30 || (policy == SizePolicy::Capped && n_atoms > kMaxFullAtoms)) {
        throw InvalidArgument("full-space representation of " + std::to_string(n_atoms) +
                              " atoms exceeds the cap of " + std::to_string(kMaxFullAtoms) +
                              " (override with AllowLarge)");
    }
}

} // namespace detail

/// Pure symmetric state as N+1 Dicke amplitudes.
class SymmetricState {
  public:
    static constexpr int kMinAtoms = 3;

    static SymmetricState from_coeffs(Vector coeffs, bool auto_normalize = false,
                                      double tol = Tolerances{}.norm) {
        if (coeffs.size() < kMinAtoms + 1) {
            throw InvalidState("symmetric state needs N >= 3 (got " +
                               std::to_string(coeffs.size()) + " coefficients)");
        }
        const double norm2 = coeffs.squaredNorm();
        if (auto_normalize && norm2 > 0.0 && std::isfinite(norm2)) {
            coeffs /= std::sqrt(norm2);
        } else {
            detail::check_norm(norm2, tol, "symmetric state");
        }
        const int n = static_cast<int>(coeffs.size()) - 1;
        return SymmetricState(n, std::move(coeffs));
    }

    static SymmetricState from_coeffs(const std::vector<Complex> &coeffs,
                                      bool auto_normalize = false,
                                      double tol = Tolerances{}.norm) {
        Vector v(static_cast<Eigen::Index>(coeffs.size()));
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            v(static_cast<Eigen::Index>(k)) = coeffs[k];
        }
        return from_coeffs(std::move(v), auto_normalize, tol);
    }

    int n_atoms() const noexcept { return n_atoms_; }
    double spin() const noexcept { return 0.5 * n_atoms_; }
    const Vector &coeffs() const noexcept { return coeffs_; }

  private:
    SymmetricState(int n, Vector coeffs) : n_atoms_(n), coeffs_(std::move(coeffs)) {}

    int n_atoms_;
    Vector coeffs_;
};

/// Single-atom amplitudes on |u> and |l>.
struct Qubit {
    Complex up{1.0, 0.0};
    Complex down{0.0, 0.0};
};

/// Fully factorized state |a_1> (x) ... (x) |a_N>.
class ProductState {
  public:
    static ProductState from_qubits(std::vector<Qubit> qubits, bool auto_normalize = false,
                                    double tol = Tolerances{}.norm) {
        if (qubits.empty()) {
            throw InvalidState("product state needs at least one atom");
        }
        for (auto &q : qubits) {
            const double norm2 = std::norm(q.up) + std::norm(q.down);
            if (auto_normalize && norm2 > 0.0 && std::isfinite(norm2)) {
                const double s = 1.0 / std::sqrt(norm2);
                q.up *= s;
                q.down *= s;
            } else {
                detail::check_norm(norm2, tol, "atom of product state");
            }
        }
        return ProductState(std::move(qubits));
    }

    static ProductState identical(int n_atoms, Qubit q, bool auto_normalize = false) {
        if (n_atoms < 1) {
            throw InvalidState("n_atoms must be positive");
        }
        return from_qubits(std::vector<Qubit>(static_cast<std::size_t>(n_atoms), q),
                           auto_normalize);
    }

    int n_atoms() const noexcept { return static_cast<int>(qubits_.size()); }
    const std::vector<Qubit> &qubits() const noexcept { return qubits_; }

    bool all_identical(double tol = 1e-14) const {
        for (const auto &q : qubits_) {
            if (std::abs(q.up - qubits_.front().up) > tol ||
                std::abs(q.down - qubits_.front().down) > tol) {
                return false;
            }
        }
        return true;
    }

  private:
    explicit ProductState(std::vector<Qubit> qubits) : qubits_(std::move(qubits)) {}

    std::vector<Qubit> qubits_;
};

/// 2^N amplitudes in the product basis; the oracle representation.
class FullState {
  public:
    static FullState from_amplitudes(int n_atoms, Vector amplitudes,
                                     SizePolicy policy = SizePolicy::Capped,
                                     bool auto_normalize = false,
                                     double tol = Tolerances{}.norm) {
        detail::check_full_size(n_atoms, policy);
        if (static_cast<std::size_t>(amplitudes.size()) != full_dim(n_atoms)) {
            throw InvalidState("full state of " + std::to_string(n_atoms) + " atoms needs " +
                               std::to_string(full_dim(n_atoms)) + " amplitudes");
        }
        const double norm2 = amplitudes.squaredNorm();
        if (auto_normalize && norm2 > 0.0 && std::isfinite(norm2)) {
            amplitudes /= std::sqrt(norm2);
        } else {
            detail::check_norm(norm2, tol, "full state");
        }
        return FullState(n_atoms, std::move(amplitudes));
    }

    int n_atoms() const noexcept { return n_atoms_; }
    std::size_t dim() const noexcept { return full_dim(n_atoms_); }
    const Vector &amplitudes() const noexcept { return amplitudes_; }

  private:
    FullState(int n, Vector amplitudes) : n_atoms_(n), amplitudes_(std::move(amplitudes)) {}

    int n_atoms_;
    Vector amplitudes_;
};

inline FullState dicke_to_full(const SymmetricState &s, SizePolicy policy = SizePolicy::Capped) {
    const int n = s.n_atoms();
    detail::check_full_size(n, policy);
    std::vector<double> inv_sqrt_binom(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r <= n; ++r) {
        inv_sqrt_binom[static_cast<std::size_t>(r)] = 1.0 / std::sqrt(binomial(n, r));
    }
    const std::size_t dim = full_dim(n);
    Vector amp(static_cast<Eigen::Index>(dim));
    for (std::size_t b = 0; b < dim; ++b) {
        const int r = std::popcount(b);
        amp(static_cast<Eigen::Index>(b)) = s.coeffs()(r) * inv_sqrt_binom[static_cast<std::size_t>(r)];
    }
    return FullState::from_amplitudes(n, std::move(amp), policy);
}

inline FullState product_to_full(const ProductState &p, SizePolicy policy = SizePolicy::Capped) {
    const int n = p.n_atoms();
    detail::check_full_size(n, policy);
    const std::size_t dim = full_dim(n);
    Vector amp(static_cast<Eigen::Index>(dim));
    for (std::size_t b = 0; b < dim; ++b) {
        Complex a{1.0, 0.0};
        for (int atom = 1; atom <= n; ++atom) {
            const Qubit &q = p.qubits()[static_cast<std::size_t>(atom - 1)];
            a *= (b & atom_mask(atom, n)) ? q.down : q.up;
        }
        amp(static_cast<Eigen::Index>(b)) = a;
    }
    return FullState::from_amplitudes(n, std::move(amp), policy, false, 1e-10);
}

/// Norm of the component of `f` outside the symmetric (j = N/2) subspace.
inline double asymmetric_norm(const FullState &f, Vector *dicke_out = nullptr) {
    const int n = f.n_atoms();
    Vector c = Vector::Zero(n + 1);
    for (std::size_t b = 0; b < f.dim(); ++b) {
        c(std::popcount(b)) += f.amplitudes()(static_cast<Eigen::Index>(b));
    }
    double outside2 = 0.0;
    for (int r = 0; r <= n; ++r) {
        c(r) /= std::sqrt(binomial(n, r));
    }
    for (std::size_t b = 0; b < f.dim(); ++b) {
        const int r = std::popcount(b);
        outside2 += std::norm(f.amplitudes()(static_cast<Eigen::Index>(b)) -
                              c(r) / std::sqrt(binomial(n, r)));
    }
    if (dicke_out != nullptr) {
        *dicke_out = std::move(c);
    }
    return std::sqrt(outside2);
}

inline SymmetricState full_to_dicke(const FullState &f, double tol = Tolerances{}.symmetric) {
    Vector c;
    const double outside = asymmetric_norm(f, &c);
    if (outside > tol) {
        throw NotSymmetric("state has norm " + std::to_string(outside) +
                           " outside the symmetric subspace");
    }
    return SymmetricState::from_coeffs(std::move(c), true);
}

/// Haar-like draw on the Dicke simplex: iid complex Gaussians, normalized.
inline SymmetricState random_symmetric_state(int n_atoms, std::uint64_t seed) {
    if (n_atoms < SymmetricState::kMinAtoms) {
        throw InvalidState("random symmetric state needs N >= 3");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector c(n_atoms + 1);
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        c(k) = Complex(re, im);
    }
    return SymmetricState::from_coeffs(std::move(c), true);
}

/// Uniform point on the Bloch sphere.
inline Qubit random_qubit(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double cos_t = 2.0 * unit(rng) - 1.0;
    const double azimuth = 2.0 * std::numbers::pi * unit(rng);
    const double half = 0.5 * std::acos(std::clamp(cos_t, -1.0, 1.0));
    return Qubit{Complex(std::cos(half), 0.0), std::polar(std::sin(half), azimuth)};
}

/// N identical copies of a random qubit (a coherent spin state).
inline ProductState random_coherent_product(int n_atoms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return ProductState::identical(n_atoms, random_qubit(rng), true);
}

/// Dicke amplitudes of N identical qubits: sqrt(C(N,k)) up^(N-k) down^k.
inline SymmetricState coherent_state(int n_atoms, Qubit q) {
    Vector c(n_atoms + 1);
    for (int k = 0; k <= n_atoms; ++k) {
        c(k) = std::sqrt(binomial(n_atoms, k)) * std::pow(q.up, n_atoms - k) * std::pow(q.down, k);
    }
    return SymmetricState::from_coeffs(std::move(c), true);
}

/// |j, j - k>.
inline SymmetricState dicke_basis_state(int n_atoms, int k) {
    if (k < 0 || k > n_atoms) {
        throw InvalidArgument("Dicke index out of range");
    }
    Vector c = Vector::Zero(n_atoms + 1);
    c(k) = 1.0;
    return SymmetricState::from_coeffs(std::move(c));
}

/// (|j, j> + |j, -j>) / sqrt(2); zero mean spin for N >= 2.
inline SymmetricState ghz_state(int n_atoms) {
    Vector c = Vector::Zero(n_atoms + 1);
    c(0) = c(n_atoms) = 1.0 / std::sqrt(2.0);
    return SymmetricState::from_coeffs(std::move(c));
}

/// Relabels atoms: atom i of the input becomes atom perm[i-1] of the output.
inline FullState permute_atoms(const FullState &f, std::span<const int> perm) {
    const int n = f.n_atoms();
    if (static_cast<int>(perm.size()) != n) {
        throw InvalidArgument("permutation size does not match atom count");
    }
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (int p : perm) {
        if (p < 1 || p > n || seen[static_cast<std::size_t>(p)]) {
            throw InvalidArgument("not a permutation of 1..N");
        }
        seen[static_cast<std::size_t>(p)] = true;
    }
    Vector out(static_cast<Eigen::Index>(f.dim()));
    for (std::size_t b = 0; b < f.dim(); ++b) {
        std::size_t target = 0;
        for (int atom = 1; atom <= n; ++atom) {
            if (b & atom_mask(atom, n)) {
                target |= atom_mask(perm[static_cast<std::size_t>(atom - 1)], n);
            }
        }
        out(static_cast<Eigen::Index>(target)) = f.amplitudes()(static_cast<Eigen::Index>(b));
    }
    return FullState::from_amplitudes(n, std::move(out), SizePolicy::AllowLarge);
}

} // namespace trimoment
