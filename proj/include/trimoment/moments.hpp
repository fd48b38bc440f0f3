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
 * Central moments along the primed axes, the ten tripartite correlator sums
 * and the tripartite parameter
 *
 *   S = 1/2 sqrt( (dJ_x'^3)^2 + (dJ_y'^3)^2 ).
 *
 * Every third moment is available through two independent routes:
 *
 *  - direct: <(A - <A>)^3> for the explicitly rotated collective operator;
 *  - sum: a weighted sum of the correlators
 *      T_abc = sum_{p,q,r distinct} <J_{p a} J_{q b} J_{r c}>,
 *    which is all that survives once every single-atom and bipartite term of
 *    J_x'^3 has cancelled against <J_x'> = 0.
 *
 * S itself is taken from the direct route; the sum route is a cross-check.
 */

#pragma once

#include "core.hpp"
#include "frame.hpp"
#include "operators.hpp"
#include "states.hpp"

#include <array>
#include <cmath>
#include <string>
#include <string_view>

namespace trimoment {

/// The ten distinct axis multisets of a triple product.
enum class Pattern : std::uint8_t { XXX, YYY, ZZZ, XYZ, XXY, XXZ, XYY, YYZ, XZZ, YZZ };

inline constexpr std::array<Pattern, 10> kPatterns{
    Pattern::XXX, Pattern::YYY, Pattern::ZZZ, Pattern::XYZ, Pattern::XXY,
    Pattern::XXZ, Pattern::XYY, Pattern::YYZ, Pattern::XZZ, Pattern::YZZ};

constexpr std::array<Axis, 3> pattern_axes(Pattern p) noexcept {
    using enum Axis;
    switch (p) {
    case Pattern::XXX:
        return {X, X, X};
    case Pattern::YYY:
        return {Y, Y, Y};
    case Pattern::ZZZ:
        return {Z, Z, Z};
    case Pattern::XYZ:
        return {X, Y, Z};
    case Pattern::XXY:
        return {X, X, Y};
    case Pattern::XXZ:
        return {X, X, Z};
    case Pattern::XYY:
        return {X, Y, Y};
    case Pattern::YYZ:
        return {Y, Y, Z};
    case Pattern::XZZ:
        return {X, Z, Z};
    case Pattern::YZZ:
        return {Y, Z, Z};
    }
    return {X, X, X};
}

inline std::string pattern_name(Pattern p) {
    std::string s;
    for (Axis a : pattern_axes(p)) {
        s.push_back(axis_char(a));
    }
    return s;
}

/// Number of distinct orderings of the pattern's axes (1, 3 or 6).
constexpr int pattern_multiplicity(Pattern p) noexcept {
    const auto ax = pattern_axes(p);
    if (ax[0] == ax[1] && ax[1] == ax[2]) {
        return 1;
    }
    if (ax[0] != ax[1] && ax[1] != ax[2] && ax[0] != ax[2]) {
        return 6;
    }
    return 3;
}

/// Sums over ordered distinct triples of atoms, one entry per pattern.
struct TripleCorrelatorSet {
    std::array<Complex, 10> values{};

    Complex &operator[](Pattern p) noexcept { return values[static_cast<std::size_t>(p)]; }
    const Complex &operator[](Pattern p) const noexcept {
        return values[static_cast<std::size_t>(p)];
    }
    double value(Pattern p) const noexcept { return (*this)[p].real(); }

    double max_imag() const noexcept {
        double m = 0.0;
        for (const auto &v : values) {
            m = std::max(m, std::abs(v.imag()));
        }
        return m;
    }
};

enum class CorrelatorMode : std::uint8_t {
    FullSum,           // all N(N-1)(N-2) ordered triples
    SymmetricFastPath, // atoms (1,2,3) times N(N-1)(N-2); exact for symmetric states
};

namespace detail {

inline double ordered_triples(int n) noexcept {
    return static_cast<double>(n) * (n - 1) * (n - 2);
}

inline void check_order(int order) {
    if (order != 2 && order != 3) {
        throw InvalidArgument("central moment order must be 2 or 3");
    }
}

/// <psi|(A - mu)^order|psi> given an action v -> A v.
template <class Apply>
double central_moment_impl(const Vector &psi, Apply &&apply, int order, double imag_tol) {
    check_order(order);
    const double mu = real_expectation(psi.dot(apply(psi)), imag_tol);
    const Vector shifted = apply(psi) - mu * psi;
    if (order == 2) {
        return shifted.squaredNorm();
    }
    const Vector twice = apply(shifted) - mu * shifted;
    return real_expectation(shifted.dot(twice), imag_tol);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Direct route.

/// <(A - <A>)^order> for order 2 or 3, no assumption that <A> vanishes.
inline double central_moment(const Vector &psi, const OperatorMatrix &op, int order,
                             double imag_tol = Tolerances{}.imag) {
    if (!op.hermitian()) {
        throw InvalidArgument("central moment requires a hermitian operator");
    }
    if (psi.size() != op.dim()) {
        throw DimensionMismatch("state dimension " + std::to_string(psi.size()) +
                                " does not match operator dimension " +
                                std::to_string(op.dim()));
    }
    return detail::central_moment_impl(
        psi, [&](const Vector &v) -> Vector { return op.entries() * v; }, order, imag_tol);
}

inline double central_moment(const SymmetricState &s, const OperatorMatrix &op, int order) {
    if (op.space() != Space::Dicke) {
        throw DimensionMismatch("symmetric state needs a Dicke-space operator");
    }
    return central_moment(s.coeffs(), op, order);
}

inline double central_moment(const FullState &f, const OperatorMatrix &op, int order) {
    if (op.space() != Space::Full) {
        throw DimensionMismatch("full state needs a full-space operator");
    }
    return central_moment(f.amplitudes(), op, order);
}

/// Matrix-free variant for (d . J) in the full space.
inline double central_moment(const FullState &f, SpinDirection d, int order) {
    return detail::central_moment_impl(
        f.amplitudes(),
        [&](const Vector &v) { return apply_collective(v, f.n_atoms(), d); }, order,
        Tolerances{}.imag);
}

// ---------------------------------------------------------------------------
// Correlator sums.

/// <J_{p a} J_{q b} J_{r c}> for one ordered atom triple, matrix-free.
inline Complex triple_expectation(const FullState &f, std::array<int, 3> atoms,
                                  std::array<Axis, 3> axes) {
    const int n = f.n_atoms();
    const Vector &psi = f.amplitudes();
    Vector v = apply_single(psi, n, atoms[2], axes[2]);
    v = apply_single(v, n, atoms[1], axes[1]);
    v = apply_single(v, n, atoms[0], axes[0]);
    return psi.dot(v);
}

inline TripleCorrelatorSet triple_correlators(const FullState &f,
                                              CorrelatorMode mode = CorrelatorMode::FullSum) {
    const int n = f.n_atoms();
    if (n < 3) {
        throw InvalidArgument("triple correlators need N >= 3");
    }
    TripleCorrelatorSet out;
    if (mode == CorrelatorMode::SymmetricFastPath) {
        for (Pattern p : kPatterns) {
            out[p] = detail::ordered_triples(n) * triple_expectation(f, {1, 2, 3}, pattern_axes(p));
        }
        return out;
    }
    for (int p = 1; p <= n; ++p) {
        for (int q = 1; q <= n; ++q) {
            for (int r = 1; r <= n; ++r) {
                if (p == q || q == r || p == r) {
                    continue;
                }
                for (Pattern pat : kPatterns) {
                    out[pat] += triple_expectation(f, {p, q, r}, pattern_axes(pat));
                }
            }
        }
    }
    return out;
}

namespace detail {

/// Action of sum_p u_p on the symmetric subspace, for a 2x2 single-atom u.
class DickeCollective {
  public:
    explicit DickeCollective(int n_atoms)
        : n_(n_atoms), jx_(collective_op_dicke(Axis::X, n_atoms).entries()),
          jy_(collective_op_dicke(Axis::Y, n_atoms).entries()),
          jz_(collective_op_dicke(Axis::Z, n_atoms).entries()) {}

    /// u = a0 I + a_x S_x + a_y S_y + a_z S_z  =>  sum_p u_p = a0 N I + a . J.
    Vector apply(const Eigen::Matrix2cd &u, const Vector &v) const {
        const Complex a0 = 0.5 * u.trace();
        const Complex ax = 2.0 * (u * spin_half(Axis::X)).trace();
        const Complex ay = 2.0 * (u * spin_half(Axis::Y)).trace();
        const Complex az = 2.0 * (u * spin_half(Axis::Z)).trace();
        return (a0 * static_cast<double>(n_)) * v + ax * (jx_ * v) + ay * (jy_ * v) +
               az * (jz_ * v);
    }

  private:
    int n_;
    Matrix jx_, jy_, jz_;
};

} // namespace detail

/// Correlator sums computed inside the (N+1)-dim symmetric subspace by
/// inclusion-exclusion over coinciding atom indices:
///
///   T(u,v,w) = C(u)C(v)C(w) - C(uv)C(w) - C(uw)C(v) - C(u)C(vw)
///              + C(uvw) + C(uwv),   C(x) = sum_p x_p.
inline TripleCorrelatorSet triple_correlators(const SymmetricState &s) {
    const detail::DickeCollective coll(s.n_atoms());
    const Vector &psi = s.coeffs();
    TripleCorrelatorSet out;
    for (Pattern p : kPatterns) {
        const auto ax = pattern_axes(p);
        const Eigen::Matrix2cd u = spin_half(ax[0]);
        const Eigen::Matrix2cd v = spin_half(ax[1]);
        const Eigen::Matrix2cd w = spin_half(ax[2]);
        auto chain = [&](std::initializer_list<Eigen::Matrix2cd> ops) {
            Vector x = psi;
            for (auto it = std::rbegin(ops); it != std::rend(ops); ++it) {
                x = coll.apply(*it, x);
            }
            return psi.dot(x);
        };
        out[p] = chain({u, v, w}) - chain({u * v, w}) - chain({u * w, v}) - chain({u, v * w}) +
                 chain({u * v * w}) + chain({u * w * v});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sum route.

/// Third moment of (n . J) from the correlators, valid whenever <n . J> = 0:
/// sum over patterns of multiplicity * n_a n_b n_c * T_abc.
inline double third_moment_angle_form(SpinDirection n, const TripleCorrelatorSet &t) {
    double acc = 0.0;
    for (Pattern p : kPatterns) {
        const auto ax = pattern_axes(p);
        acc += pattern_multiplicity(p) * n.component(ax[0]) * n.component(ax[1]) *
               n.component(ax[2]) * t.value(p);
    }
    return acc;
}

/// dJ_x'^3 with the angle weights written in terms of the mean spin.
/// Falls back to the angle form when <J> lies along z (weights are 0/0).
inline double third_moment_sum_xp(const MeanSpin &m, const RotationAngles &angles,
                                  const TripleCorrelatorSet &t,
                                  double eps = Tolerances{}.frame) {
    const double rho2 = m.jx * m.jx + m.jy * m.jy;
    if (std::sqrt(rho2) <= eps) {
        return third_moment_angle_form(angles.x_prime(), t);
    }
    const double jx = m.jx, jy = m.jy, jz = m.jz;
    const double mag = m.magnitude();
    const double jz2 = jz * jz, jz3 = jz2 * jz;
    using P = Pattern;
    const double bracket =
        t.value(P::XXX) * jz3 * jx * jx * jx + t.value(P::YYY) * jz3 * jy * jy * jy -
        t.value(P::ZZZ) * rho2 * rho2 * rho2 - 6.0 * t.value(P::XYZ) * rho2 * jz2 * jx * jy +
        3.0 * t.value(P::XXY) * jz3 * jx * jx * jy - 3.0 * t.value(P::XXZ) * rho2 * jx * jx * jz2 +
        3.0 * t.value(P::XYY) * jz3 * jx * jy * jy - 3.0 * t.value(P::YYZ) * rho2 * jy * jy * jz2 +
        3.0 * t.value(P::XZZ) * jx * jz * rho2 * rho2 + 3.0 * t.value(P::YZZ) * jy * jz * rho2 * rho2;
    return bracket / (mag * mag * mag * rho2 * std::sqrt(rho2));
}

/// dJ_y'^3 from the four in-plane correlators.
inline double third_moment_sum_yp(const MeanSpin &m, const RotationAngles &angles,
                                  const TripleCorrelatorSet &t,
                                  double eps = Tolerances{}.frame) {
    const double rho2 = m.jx * m.jx + m.jy * m.jy;
    if (std::sqrt(rho2) <= eps) {
        return third_moment_angle_form(angles.y_prime(), t);
    }
    const double jx = m.jx, jy = m.jy;
    using P = Pattern;
    const double bracket = -t.value(P::XXX) * jy * jy * jy + t.value(P::YYY) * jx * jx * jx +
                           3.0 * t.value(P::XXY) * jx * jy * jy -
                           3.0 * t.value(P::XYY) * jx * jx * jy;
    return bracket / (rho2 * std::sqrt(rho2));
}

// ---------------------------------------------------------------------------
// Reports.

struct RouteComparison {
    double abs_dev = 0.0;
    double rel_dev = 0.0; // |d - s| / max(|d|, abs/rel); agrees iff rel_dev <= rel
    bool agree = true;
};

inline RouteComparison compare_routes(double direct, double sum, double rel = Tolerances{}.route_rel,
                                      double abs = Tolerances{}.route_abs) {
    RouteComparison c;
    c.abs_dev = std::abs(direct - sum);
    c.rel_dev = c.abs_dev / std::max(std::abs(direct), abs / rel);
    c.agree = c.abs_dev <= std::max(rel * std::abs(direct), abs);
    return c;
}

inline double s_parameter(double m3_xp, double m3_yp) { return 0.5 * std::hypot(m3_xp, m3_yp); }

struct MomentReport {
    int n_atoms = 0;
    Space space = Space::Dicke;
    MeanSpin mean_spin;
    RotationAngles angles = RotationAngles::from_angles(0.0, 0.0);
    double var_xp = 0.0;
    double var_yp = 0.0;
    double m3_xp_direct = 0.0;
    double m3_yp_direct = 0.0;
    double m3_xp_sum = 0.0;
    double m3_yp_sum = 0.0;
    double s_parameter = 0.0;
    TripleCorrelatorSet correlators;

    RouteComparison route_xp(const Tolerances &tol = {}) const {
        return compare_routes(m3_xp_direct, m3_xp_sum, tol.route_rel, tol.route_abs);
    }
    RouteComparison route_yp(const Tolerances &tol = {}) const {
        return compare_routes(m3_yp_direct, m3_yp_sum, tol.route_rel, tol.route_abs);
    }
    double s_from_sum() const { return trimoment::s_parameter(m3_xp_sum, m3_yp_sum); }
};

namespace detail {

inline void finish_report(MomentReport &r, const Tolerances &tol) {
    r.m3_xp_sum = third_moment_sum_xp(r.mean_spin, r.angles, r.correlators, tol.frame);
    r.m3_yp_sum = third_moment_sum_yp(r.mean_spin, r.angles, r.correlators, tol.frame);
    r.s_parameter = s_parameter(r.m3_xp_direct, r.m3_yp_direct);
}

} // namespace detail

/// Full moment report through the (N+1)-dim symmetric subspace; no cap on N.
inline MomentReport entanglement_s(const SymmetricState &s, const Tolerances &tol = {}) {
    MomentReport r;
    r.n_atoms = s.n_atoms();
    r.space = Space::Dicke;
    r.mean_spin = mean_spin(s);
    r.angles = rotation_angles(r.mean_spin, tol.frame);
    const OperatorMatrix xp = directional_op(r.angles.x_prime(), s.n_atoms(), Space::Dicke);
    const OperatorMatrix yp = directional_op(r.angles.y_prime(), s.n_atoms(), Space::Dicke);
    r.var_xp = central_moment(s, xp, 2);
    r.var_yp = central_moment(s, yp, 2);
    r.m3_xp_direct = central_moment(s, xp, 3);
    r.m3_yp_direct = central_moment(s, yp, 3);
    r.correlators = triple_correlators(s);
    detail::finish_report(r, tol);
    return r;
}

/// Same report computed entirely in the 2^N product basis (matrix-free).
/// With FullSum the state need not be symmetric.
inline MomentReport moment_report_full(const FullState &f,
                                       CorrelatorMode mode = CorrelatorMode::FullSum,
                                       const Tolerances &tol = {}) {
    MomentReport r;
    r.n_atoms = f.n_atoms();
    r.space = Space::Full;
    r.mean_spin = mean_spin(f);
    r.angles = rotation_angles(r.mean_spin, tol.frame);
    r.var_xp = central_moment(f, r.angles.x_prime(), 2);
    r.var_yp = central_moment(f, r.angles.y_prime(), 2);
    r.m3_xp_direct = central_moment(f, r.angles.x_prime(), 3);
    r.m3_yp_direct = central_moment(f, r.angles.y_prime(), 3);
    r.correlators = triple_correlators(f, mode);
    detail::finish_report(r, tol);
    return r;
}

/// Rejects non-symmetric input with NotSymmetric, then uses the Dicke path.
inline MomentReport entanglement_s(const FullState &f, const Tolerances &tol = {}) {
    return entanglement_s(full_to_dicke(f, tol.symmetric), tol);
}

inline MomentReport entanglement_s(const ProductState &p, const Tolerances &tol = {}) {
    if (p.n_atoms() > kMaxFullAtoms && p.all_identical()) {
        return entanglement_s(coherent_state(p.n_atoms(), p.qubits().front()), tol);
    }
    return entanglement_s(product_to_full(p), tol);
}

} // namespace trimoment
