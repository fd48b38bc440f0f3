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
 * Mean spin vector and the rotated frame (x', y', z') in which the mean spin
 * points along z'.
 *
 * With theta the polar and phi the azimuthal angle of <J>:
 *
 *   J_x' =  cos(theta) cos(phi) J_x + cos(theta) sin(phi) J_y - sin(theta) J_z
 *   J_y' = -sin(phi) J_x + cos(phi) J_y
 *   J_z' =  sin(theta) cos(phi) J_x + sin(theta) sin(phi) J_y + cos(theta) J_z
 */

#pragma once

#include "core.hpp"
#include "operators.hpp"
#include "states.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace trimoment {

struct MeanSpin {
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;

    double magnitude() const noexcept { return std::sqrt(jx * jx + jy * jy + jz * jz); }
    /// Length of the projection onto the x-y plane.
    double transverse() const noexcept { return std::hypot(jx, jy); }
    double component(Axis a) const noexcept {
        return a == Axis::X ? jx : (a == Axis::Y ? jy : jz);
    }
};

class RotationAngles {
  public:
    /// theta in [0, pi]; phi is wrapped into (-pi, pi].
    static RotationAngles from_angles(double theta, double phi) {
        if (!(theta >= 0.0 && theta <= std::numbers::pi) || !std::isfinite(phi)) {
            throw InvalidArgument("theta must lie in [0, pi] and phi must be finite");
        }
        phi = std::remainder(phi, 2.0 * std::numbers::pi);
        if (phi <= -std::numbers::pi) {
            phi += 2.0 * std::numbers::pi;
        }
        return RotationAngles(theta, phi, std::cos(theta), std::sin(theta), std::cos(phi),
                              std::sin(phi));
    }

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }
    double cos_theta() const noexcept { return cos_theta_; }
    double sin_theta() const noexcept { return sin_theta_; }
    double cos_phi() const noexcept { return cos_phi_; }
    double sin_phi() const noexcept { return sin_phi_; }

    SpinDirection x_prime() const noexcept {
        return {cos_theta_ * cos_phi_, cos_theta_ * sin_phi_, -sin_theta_};
    }
    SpinDirection y_prime() const noexcept { return {-sin_phi_, cos_phi_, 0.0}; }
    SpinDirection z_prime() const noexcept {
        return {sin_theta_ * cos_phi_, sin_theta_ * sin_phi_, cos_theta_};
    }

  private:
    friend RotationAngles rotation_angles(const MeanSpin &, double);

    RotationAngles(double theta, double phi, double ct, double st, double cp, double sp)
        : theta_(theta), phi_(phi), cos_theta_(ct), sin_theta_(st), cos_phi_(cp), sin_phi_(sp) {}

    double theta_;
    double phi_;
    double cos_theta_;
    double sin_theta_;
    double cos_phi_;
    double sin_phi_;
};

/// Angles that carry <J> onto z'. Throws FrameUndefined when |<J>| <= eps.
/// When the transverse part vanishes (<J> along +-z) phi is set to 0.
inline RotationAngles rotation_angles(const MeanSpin &m, double eps = Tolerances{}.frame) {
    const double mag = m.magnitude();
    if (!(mag > eps)) {
        throw FrameUndefined("mean spin magnitude " + std::to_string(mag) +
                             " is below the frame threshold");
    }
    const double rho = m.transverse();
    const double ct = m.jz / mag;
    const double st = rho / mag;
    const double theta = std::atan2(rho, m.jz);
    if (rho <= eps) {
        return RotationAngles(theta, 0.0, ct, st, 1.0, 0.0);
    }
    return RotationAngles(theta, std::atan2(m.jy, m.jx), ct, st, m.jx / rho, m.jy / rho);
}

namespace detail {

inline double real_expectation(Complex v, double tol = 1e-12) {
    if (std::abs(v.imag()) > tol) {
        throw std::logic_error("expectation of a hermitian operator has imaginary part " +
                               std::to_string(v.imag()));
    }
    return v.real();
}

} // namespace detail

inline MeanSpin mean_spin(const SymmetricState &s) {
    const Vector &c = s.coeffs();
    const int n = s.n_atoms();
    return {detail::real_expectation(expectation(c, collective_op_dicke(Axis::X, n))),
            detail::real_expectation(expectation(c, collective_op_dicke(Axis::Y, n))),
            detail::real_expectation(expectation(c, collective_op_dicke(Axis::Z, n)))};
}

inline MeanSpin mean_spin(const FullState &f) {
    const Vector &psi = f.amplitudes();
    const int n = f.n_atoms();
    auto component = [&](Axis a) {
        return detail::real_expectation(
            psi.dot(apply_collective(psi, n, SpinDirection::along(a))));
    };
    return {component(Axis::X), component(Axis::Y), component(Axis::Z)};
}

/// <J_{atom, a}> for every axis; equal across atoms for symmetric states.
inline MeanSpin single_atom_mean(const FullState &f, int atom) {
    const Vector &psi = f.amplitudes();
    auto component = [&](Axis a) {
        return detail::real_expectation(psi.dot(apply_single(psi, f.n_atoms(), atom, a)));
    };
    return {component(Axis::X), component(Axis::Y), component(Axis::Z)};
}

/// (J_x', J_y', J_z') as dense operators.
inline std::array<OperatorMatrix, 3> rotated_ops(const RotationAngles &angles, int n_atoms,
                                                 Space space) {
    return {directional_op(angles.x_prime(), n_atoms, space),
            directional_op(angles.y_prime(), n_atoms, space),
            directional_op(angles.z_prime(), n_atoms, space)};
}

} // namespace trimoment
