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
 * Pseudo-spin operators of single atoms and of the whole ensemble, as dense
 * matrices in the full 2^N space or the (N+1)-dimensional Dicke subspace,
 * plus matrix-free actions on full-space vectors.
 */

#pragma once

#include "core.hpp"
#include "states.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace trimoment {

inline double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Dense square operator tagged with the space it acts on.
class OperatorMatrix {
  public:
    OperatorMatrix(Matrix entries, Space space, bool hermitian,
                   double tol = Tolerances{}.hermitian)
        : entries_(std::move(entries)), space_(space), hermitian_(hermitian) {
        if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
            throw DimensionMismatch("operator matrix must be square and non-empty");
        }
        if (hermitian_) {
            const double dev = max_abs(entries_ - entries_.adjoint());
            if (dev > tol) {
                throw InvalidArgument("operator flagged hermitian deviates by " +
                                      std::to_string(dev));
            }
        }
    }

    Eigen::Index dim() const noexcept { return entries_.rows(); }
    const Matrix &entries() const noexcept { return entries_; }
    Space space() const noexcept { return space_; }
    bool hermitian() const noexcept { return hermitian_; }

  private:
    Matrix entries_;
    Space space_;
    bool hermitian_;
};

/// 2x2 spin-1/2 matrix, upper level first.
inline Eigen::Matrix2cd spin_half(Axis axis) {
    Eigen::Matrix2cd m;
    switch (axis) {
    case Axis::X:
        m << 0.0, 0.5, 0.5, 0.0;
        break;
    case Axis::Y:
        m << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0;
        break;
    case Axis::Z:
        m << 0.5, 0.0, 0.0, -0.5;
        break;
    }
    return m;
}

/// Unit (or arbitrary) weights (w_x, w_y, w_z) of w . J.
struct SpinDirection {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double component(Axis a) const noexcept {
        return a == Axis::X ? x : (a == Axis::Y ? y : z);
    }
    static SpinDirection along(Axis a) noexcept {
        return {a == Axis::X ? 1.0 : 0.0, a == Axis::Y ? 1.0 : 0.0, a == Axis::Z ? 1.0 : 0.0};
    }
};

inline Eigen::Matrix2cd spin_half(SpinDirection d) {
    return d.x * spin_half(Axis::X) + d.y * spin_half(Axis::Y) + d.z * spin_half(Axis::Z);
}

namespace detail {

inline void check_atom(int atom, int n_atoms) {
    if (n_atoms < 1) {
        throw InvalidArgument("n_atoms must be positive");
    }
    if (atom < 1 || atom > n_atoms) {
        throw InvalidArgument("atom index " + std::to_string(atom) + " out of range 1.." +
                              std::to_string(n_atoms));
    }
}

inline void check_dense_full(int n_atoms) {
    if (n_atoms < 1 || n_atoms > kMaxDenseFullAtoms) {
        throw InvalidArgument("dense full-space operators are limited to 1.." +
                              std::to_string(kMaxDenseFullAtoms) + " atoms");
    }
}

inline void check_vector(const Vector &psi, int n_atoms) {
    if (static_cast<std::size_t>(psi.size()) != full_dim(n_atoms)) {
        throw DimensionMismatch("vector length does not match 2^N");
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Matrix-free actions on full-space vectors.

/// Applies a 2x2 operator acting on `atom` (1-based) to psi.
inline Vector apply_local(const Vector &psi, int n_atoms, int atom, const Eigen::Matrix2cd &u) {
    detail::check_atom(atom, n_atoms);
    detail::check_vector(psi, n_atoms);
    const std::size_t mask = atom_mask(atom, n_atoms);
    Vector out(psi.size());
    for (std::size_t b = 0; b < full_dim(n_atoms); ++b) {
        if (b & mask) {
            continue;
        }
        const auto i0 = static_cast<Eigen::Index>(b);
        const auto i1 = static_cast<Eigen::Index>(b | mask);
        const Complex up = psi(i0);
        const Complex down = psi(i1);
        out(i0) = u(0, 0) * up + u(0, 1) * down;
        out(i1) = u(1, 0) * up + u(1, 1) * down;
    }
    return out;
}

inline Vector apply_single(const Vector &psi, int n_atoms, int atom, Axis axis) {
    return apply_local(psi, n_atoms, atom, spin_half(axis));
}

/// (d . J) psi with J the collective spin, by bit manipulation.
inline Vector apply_collective(const Vector &psi, int n_atoms, SpinDirection d) {
    detail::check_vector(psi, n_atoms);
    const Complex raise(d.x, -d.y); // coefficient of |u><l| is (d_x - i d_y)/2
    const Complex lower(d.x, d.y);
    Vector out = Vector::Zero(psi.size());
    for (std::size_t b = 0; b < full_dim(n_atoms); ++b) {
        const Complex a = psi(static_cast<Eigen::Index>(b));
        if (a == Complex{}) {
            continue;
        }
        for (int atom = 1; atom <= n_atoms; ++atom) {
            const std::size_t mask = atom_mask(atom, n_atoms);
            const bool is_down = (b & mask) != 0;
            out(static_cast<Eigen::Index>(b)) += (is_down ? -0.5 : 0.5) * d.z * a;
            out(static_cast<Eigen::Index>(b ^ mask)) += 0.5 * (is_down ? raise : lower) * a;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dense operators.

/// Single-atom operator J_{n,axis} embedded in the 2^N space.
inline OperatorMatrix single_atom_op(int atom, Axis axis, int n_atoms) {
    detail::check_atom(atom, n_atoms);
    detail::check_dense_full(n_atoms);
    const auto dim = static_cast<Eigen::Index>(full_dim(n_atoms));
    const std::size_t mask = atom_mask(atom, n_atoms);
    const Eigen::Matrix2cd u = spin_half(axis);
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        const int local = (static_cast<std::size_t>(b) & mask) ? 1 : 0;
        const auto flipped = static_cast<Eigen::Index>(static_cast<std::size_t>(b) ^ mask);
        m(b, b) += u(local, local);
        m(flipped, b) += u(1 - local, local);
    }
    return OperatorMatrix(std::move(m), Space::Full, true);
}

/// Dense matrix of d . J in the chosen space.
inline OperatorMatrix directional_op(SpinDirection d, int n_atoms, Space space);

inline OperatorMatrix collective_op(Axis axis, int n_atoms) {
    return directional_op(SpinDirection::along(axis), n_atoms, Space::Full);
}

inline OperatorMatrix collective_op_dicke(Axis axis, int n_atoms) {
    return directional_op(SpinDirection::along(axis), n_atoms, Space::Dicke);
}

namespace detail {

/// J_+ in the Dicke basis; entry (k-1, k) = sqrt(j(j+1) - m(m+1)), m = j - k.
inline Matrix dicke_raising(int n_atoms) {
    const double j = 0.5 * n_atoms;
    Matrix up = Matrix::Zero(n_atoms + 1, n_atoms + 1);
    for (int k = 1; k <= n_atoms; ++k) {
        const double m = j - k;
        up(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    return up;
}

} // namespace detail

inline OperatorMatrix directional_op(SpinDirection d, int n_atoms, Space space) {
    if (space == Space::Dicke) {
        if (n_atoms < 1) {
            throw InvalidArgument("n_atoms must be positive");
        }
        const double j = 0.5 * n_atoms;
        const Matrix up = detail::dicke_raising(n_atoms);
        const Matrix down = up.adjoint();
        const Matrix jx = 0.5 * (up + down);
        const Matrix jy = Complex(0.0, -0.5) * (up - down);
        Matrix jz = Matrix::Zero(n_atoms + 1, n_atoms + 1);
        for (int k = 0; k <= n_atoms; ++k) {
            jz(k, k) = j - k;
        }
        return OperatorMatrix(d.x * jx + d.y * jy + d.z * jz, Space::Dicke, true);
    }
    detail::check_dense_full(n_atoms);
    const auto dim = static_cast<Eigen::Index>(full_dim(n_atoms));
    Matrix m(dim, dim);
    Vector e = Vector::Zero(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        e(b) = 1.0;
        m.col(b) = apply_collective(e, n_atoms, d);
        e(b) = 0.0;
    }
    return OperatorMatrix(std::move(m), Space::Full, true);
}

/// J^2 = J_x^2 + J_y^2 + J_z^2.
inline OperatorMatrix total_spin_squared(int n_atoms, Space space) {
    Matrix sum;
    for (Axis a : kAxes) {
        const OperatorMatrix op = directional_op(SpinDirection::along(a), n_atoms, space);
        const Matrix &j = op.entries();
        sum = sum.size() == 0 ? Matrix(j * j) : Matrix(sum + j * j);
    }
    return OperatorMatrix(std::move(sum), space, true, 1e-12);
}

inline Matrix commutator(const Matrix &a, const Matrix &b) { return a * b - b * a; }
inline Matrix anticommutator(const Matrix &a, const Matrix &b) { return a * b + b * a; }

/// max |{J_{n,a}, J_{n,b}}| over entries; zero for distinct axes.
inline double anticommutator_check(int atom, Axis a, Axis b, int n_atoms) {
    if (a == b) {
        throw InvalidArgument("anticommutator check needs two distinct axes");
    }
    return max_abs(anticommutator(single_atom_op(atom, a, n_atoms).entries(),
                                  single_atom_op(atom, b, n_atoms).entries()));
}

/// <psi| A |psi> for a dense operator in the matching space.
inline Complex expectation(const Vector &psi, const OperatorMatrix &op) {
    if (psi.size() != op.dim()) {
        throw DimensionMismatch("state dimension " + std::to_string(psi.size()) +
                                " does not match operator dimension " +
                                std::to_string(op.dim()));
    }
    return psi.dot(op.entries() * psi);
}

} // namespace trimoment
