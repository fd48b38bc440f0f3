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
 * Brute-force verification of the three-atom operator algebra.
 *
 * Every product of three collective operators J_a J_b J_c (27 orderings) is
 * written out as a term list over single-atom operators: a constant, single
 * atom terms, bipartite terms J_{pa} J_{qb} and tripartite terms
 * J_{1a} J_{2b} J_{3c}. Each list is rebuilt as an 8x8 matrix and compared
 * with the product of collective matrices. The same table is reused to expand
 * J_x'^3 term by term and to confirm that every bipartite and constant term
 * cancels, leaving (7/4) J_x' plus tripartite correlators only.
 */

#pragma once

#include "core.hpp"
#include "frame.hpp"
#include "moments.hpp"
#include "operators.hpp"
#include "states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace trimoment::oracle {

inline constexpr int kAtoms = 3;

struct Factor {
    int atom;
    Axis axis;
};

/// coeff * prod(factors); an empty factor list is coeff * identity.
struct Term {
    Complex coeff;
    std::vector<Factor> factors;
};

using TermList = std::vector<Term>;

struct OperatorIdentity {
    std::string id;
    /// Non-empty: left side is the ordered product of these collective operators.
    std::vector<Axis> collective_lhs;
    /// Used when collective_lhs is empty: a single-atom product.
    TermList atomic_lhs;
    TermList rhs;
};

struct IdentityResult {
    std::string identity_id;
    double max_abs_residual = 0.0;
    Eigen::Index dim = 0;
    bool passed = false;
};

namespace detail {

inline Term singles_term(Complex c, int atom, Axis a) { return {c, {{atom, a}}}; }

/// c (J_{1a} + J_{2a} + J_{3a})
inline void singles(TermList &out, Complex c, Axis a) {
    for (int atom = 1; atom <= kAtoms; ++atom) {
        out.push_back(singles_term(c, atom, a));
    }
}

inline void pair(TermList &out, Complex c, int p, Axis a, int q, Axis b) {
    out.push_back({c, {{p, a}, {q, b}}});
}

/// c J_{1a} J_{2b} J_{3c}
inline void triple(TermList &out, Complex c, Axis a, Axis b, Axis d) {
    out.push_back({c, {{1, a}, {2, b}, {3, d}}});
}

inline std::string product_id(const std::vector<Axis> &axes) {
    std::string id;
    for (Axis a : axes) {
        id += 'J';
        id += axis_char(a);
    }
    return id;
}

} // namespace detail

/// The 27 three-operator products for three atoms, transcribed term by term.
inline const std::vector<OperatorIdentity> &product_identities() {
    static const std::vector<OperatorIdentity> table = [] {
        using enum Axis;
        using detail::pair;
        using detail::singles;
        using detail::triple;
        const Complex i = kI;
        std::vector<OperatorIdentity> t;
        auto add = [&](std::vector<Axis> lhs, auto &&fill) {
            OperatorIdentity id{detail::product_id(lhs), lhs, {}, {}};
            fill(id.rhs);
            t.push_back(std::move(id));
        };

        add({X, X, X}, [&](TermList &r) {
            singles(r, 7.0 / 4, X);
            triple(r, 6, X, X, X);
        });
        add({X, X, Y}, [&](TermList &r) {
            singles(r, 3.0 / 4, Y);
            pair(r, i, 1, Z, 2, X), pair(r, i, 1, X, 2, Z), pair(r, i, 1, Z, 3, X);
            pair(r, i, 1, X, 3, Z), pair(r, i, 2, Z, 3, X), pair(r, i, 2, X, 3, Z);
            triple(r, 2, X, X, Y), triple(r, 2, X, Y, X), triple(r, 2, Y, X, X);
        });
        add({X, X, Z}, [&](TermList &r) {
            singles(r, 3.0 / 4, Z);
            pair(r, -i, 1, Y, 2, X), pair(r, -i, 1, X, 2, Y), pair(r, -i, 1, Y, 3, X);
            pair(r, -i, 1, X, 3, Y), pair(r, -i, 2, Y, 3, X), pair(r, -i, 2, X, 3, Y);
            triple(r, 2, X, X, Z), triple(r, 2, X, Z, X), triple(r, 2, Z, X, X);
        });
        add({Y, Y, X}, [&](TermList &r) {
            singles(r, 3.0 / 4, X);
            pair(r, -i, 1, Z, 2, Y), pair(r, -i, 1, Y, 2, Z), pair(r, -i, 1, Z, 3, Y);
            pair(r, -i, 1, Y, 3, Z), pair(r, -i, 2, Z, 3, Y), pair(r, -i, 2, Y, 3, Z);
            triple(r, 2, Y, Y, X), triple(r, 2, Y, X, Y), triple(r, 2, X, Y, Y);
        });
        add({Y, Y, Y}, [&](TermList &r) {
            singles(r, 7.0 / 4, Y);
            triple(r, 6, Y, Y, Y);
        });
        add({Y, Y, Z}, [&](TermList &r) {
            singles(r, 3.0 / 4, Z);
            pair(r, i, 1, X, 2, Y), pair(r, i, 1, Y, 2, X), pair(r, i, 1, X, 3, Y);
            pair(r, i, 1, Y, 3, X), pair(r, i, 2, X, 3, Y), pair(r, i, 2, Y, 3, X);
            triple(r, 2, Y, Y, Z), triple(r, 2, Y, Z, Y), triple(r, 2, Z, Y, Y);
        });
        add({Z, Z, X}, [&](TermList &r) {
            singles(r, 3.0 / 4, X);
            pair(r, i, 1, Y, 2, Z), pair(r, i, 1, Y, 3, Z), pair(r, i, 2, Y, 3, Z);
            pair(r, i, 1, Z, 2, Y), pair(r, i, 1, Z, 3, Y), pair(r, i, 2, Z, 3, Y);
            triple(r, 2, Z, Z, X), triple(r, 2, Z, X, Z), triple(r, 2, X, Z, Z);
        });
        add({Z, Z, Y}, [&](TermList &r) {
            singles(r, 3.0 / 4, Y);
            pair(r, -i, 1, X, 2, Z), pair(r, -i, 1, X, 3, Z), pair(r, -i, 1, Z, 2, X);
            pair(r, -i, 1, Z, 3, X), pair(r, -i, 2, X, 3, Z), pair(r, -i, 2, Z, 3, X);
            triple(r, 2, Y, Z, Z), triple(r, 2, Z, Z, Y), triple(r, 2, Z, Y, Z);
        });
        add({Z, Z, Z}, [&](TermList &r) {
            singles(r, 7.0 / 4, Z);
            triple(r, 6, Z, Z, Z);
        });
        add({X, Y, X}, [&](TermList &r) {
            singles(r, 1.0 / 4, Y);
            triple(r, 2, X, Y, X), triple(r, 2, X, X, Y), triple(r, 2, Y, X, X);
        });
        add({Y, X, X}, [&](TermList &r) {
            singles(r, 3.0 / 4, Y);
            pair(r, -i, 1, Z, 2, X), pair(r, -i, 1, Z, 3, X), pair(r, -i, 1, X, 2, Z);
            pair(r, -i, 1, X, 3, Z), pair(r, -i, 2, Z, 3, X), pair(r, -i, 2, X, 3, Z);
            triple(r, 2, Y, X, X), triple(r, 2, X, Y, X), triple(r, 2, X, X, Y);
        });
        add({X, Y, Y}, [&](TermList &r) {
            singles(r, 3.0 / 4, X);
            pair(r, i, 1, Z, 2, Y), pair(r, i, 1, Z, 3, Y), pair(r, i, 1, Y, 2, Z);
            pair(r, i, 1, Y, 3, Z), pair(r, i, 2, Z, 3, Y), pair(r, i, 2, Y, 3, Z);
            triple(r, 2, X, Y, Y), triple(r, 2, Y, X, Y), triple(r, 2, Y, Y, X);
        });
        add({Y, X, Y}, [&](TermList &r) {
            singles(r, 1.0 / 4, X);
            triple(r, 2, Y, X, Y), triple(r, 2, Y, Y, X), triple(r, 2, X, Y, Y);
        });
        add({X, Y, Z}, [&](TermList &r) {
            r.push_back({i * (3.0 / 8), {}});
            pair(r, i, 1, Z, 2, Z), pair(r, i, 1, Z, 3, Z), pair(r, -i, 1, Y, 2, Y);
            pair(r, i, 1, X, 2, X), pair(r, -i, 1, Y, 3, Y), pair(r, i, 1, X, 3, X);
            pair(r, i, 2, Z, 3, Z), pair(r, -i, 2, Y, 3, Y), pair(r, i, 2, X, 3, X);
            triple(r, 1, X, Y, Z), triple(r, 1, X, Z, Y), triple(r, 1, Y, X, Z);
            triple(r, 1, Z, X, Y), triple(r, 1, Y, Z, X), triple(r, 1, Z, Y, X);
        });
        add({Y, X, Z}, [&](TermList &r) {
            r.push_back({-i * (3.0 / 8), {}});
            pair(r, -i, 1, Z, 2, Z), pair(r, -i, 1, Z, 3, Z), pair(r, i, 1, X, 2, X);
            pair(r, -i, 1, Y, 2, Y), pair(r, -i, 1, Y, 3, Y), pair(r, i, 1, X, 3, X);
            pair(r, -i, 2, Z, 3, Z), pair(r, -i, 2, Y, 3, Y), pair(r, i, 2, X, 3, X);
            triple(r, 1, Y, X, Z), triple(r, 1, Y, Z, X), triple(r, 1, X, Y, Z);
            triple(r, 1, Z, Y, X), triple(r, 1, X, Z, Y), triple(r, 1, Z, X, Y);
        });
        add({X, Z, X}, [&](TermList &r) {
            singles(r, 1.0 / 4, Z);
            triple(r, 2, X, Z, X), triple(r, 2, X, X, Z), triple(r, 2, Z, X, X);
        });
        add({Z, X, X}, [&](TermList &r) {
            singles(r, 3.0 / 4, Z);
            pair(r, i, 1, Y, 2, X), pair(r, i, 1, Y, 3, X), pair(r, i, 1, X, 2, Y);
            pair(r, i, 2, Y, 3, X), pair(r, i, 1, X, 3, Y), pair(r, i, 2, X, 3, Y);
            triple(r, 2, X, Z, X), triple(r, 2, X, X, Z), triple(r, 2, Z, X, X);
        });
        add({X, Z, Y}, [&](TermList &r) {
            r.push_back({-i * (3.0 / 8), {}});
            pair(r, -i, 1, Y, 2, Y), pair(r, -i, 1, Y, 3, Y), pair(r, i, 1, Z, 2, Z);
            pair(r, -i, 1, X, 2, X), pair(r, i, 1, Z, 3, Z), pair(r, -i, 1, X, 3, X);
            pair(r, -i, 2, Y, 3, Y), pair(r, i, 2, Z, 3, Z), pair(r, -i, 2, X, 3, X);
            triple(r, 1, X, Z, Y), triple(r, 1, X, Y, Z), triple(r, 1, Z, X, Y);
            triple(r, 1, Y, X, Z), triple(r, 1, Z, Y, X), triple(r, 1, Y, Z, X);
        });
        add({Z, X, Y}, [&](TermList &r) {
            r.push_back({i * (3.0 / 8), {}});
            pair(r, i, 1, Y, 2, Y), pair(r, i, 1, Y, 3, Y), pair(r, -i, 1, X, 2, X);
            pair(r, i, 1, Z, 2, Z), pair(r, -i, 1, X, 3, X), pair(r, i, 1, Z, 3, Z);
            pair(r, i, 2, Y, 3, Y), pair(r, -i, 2, X, 3, X), pair(r, i, 2, Z, 3, Z);
            triple(r, 1, Z, X, Y), triple(r, 1, Z, Y, X), triple(r, 1, X, Z, Y);
            triple(r, 1, Y, Z, X), triple(r, 1, X, Y, Z), triple(r, 1, Y, X, Z);
        });
        add({X, Z, Z}, [&](TermList &r) {
            singles(r, 3.0 / 4, X);
            pair(r, -i, 1, Y, 2, Z), pair(r, -i, 1, Y, 3, Z), pair(r, -i, 1, Z, 2, Y);
            pair(r, -i, 2, Y, 3, Z), pair(r, -i, 1, Z, 3, Y), pair(r, -i, 2, Z, 3, Y);
            triple(r, 2, X, Z, Z), triple(r, 2, Z, X, Z), triple(r, 2, Z, Z, X);
        });
        add({Z, X, Z}, [&](TermList &r) {
            singles(r, 1.0 / 4, X);
            triple(r, 2, Z, X, Z), triple(r, 2, Z, Z, X), triple(r, 2, X, Z, Z);
        });
        add({Y, Z, X}, [&](TermList &r) {
            r.push_back({i * (3.0 / 8), {}});
            pair(r, i, 1, X, 2, X), pair(r, i, 1, X, 3, X), pair(r, -i, 1, Z, 2, Z);
            pair(r, i, 1, Y, 2, Y), pair(r, -i, 1, Z, 3, Z), pair(r, i, 1, Y, 3, Y);
            pair(r, i, 2, X, 3, X), pair(r, -i, 2, Z, 3, Z), pair(r, i, 2, Y, 3, Y);
            triple(r, 1, Y, Z, X), triple(r, 1, Y, X, Z), triple(r, 1, Z, Y, X);
            triple(r, 1, X, Y, Z), triple(r, 1, Z, X, Y), triple(r, 1, X, Z, Y);
        });
        add({Z, Y, X}, [&](TermList &r) {
            r.push_back({-i * (3.0 / 8), {}});
            pair(r, -i, 1, X, 2, X), pair(r, -i, 1, X, 3, X), pair(r, i, 1, Y, 2, Y);
            pair(r, -i, 1, Z, 2, Z), pair(r, i, 1, Y, 3, Y), pair(r, -i, 1, Z, 3, Z);
            pair(r, -i, 2, X, 3, X), pair(r, i, 2, Y, 3, Y), pair(r, -i, 2, Z, 3, Z);
            triple(r, 1, Z, Y, X), triple(r, 1, Z, X, Y), triple(r, 1, Y, Z, X);
            triple(r, 1, X, Z, Y), triple(r, 1, Y, X, Z), triple(r, 1, X, Y, Z);
        });
        add({Y, Z, Y}, [&](TermList &r) {
            singles(r, 1.0 / 4, Z);
            triple(r, 2, Y, Z, Y), triple(r, 2, Y, Y, Z), triple(r, 2, Z, Y, Y);
        });
        add({Z, Y, Y}, [&](TermList &r) {
            singles(r, 3.0 / 4, Z);
            pair(r, -i, 1, X, 2, Y), pair(r, -i, 1, X, 3, Y), pair(r, -i, 1, Y, 2, X);
            pair(r, -i, 2, X, 3, Y), pair(r, -i, 1, Y, 3, X), pair(r, -i, 2, Y, 3, X);
            triple(r, 2, Z, Y, Y), triple(r, 2, Y, Z, Y), triple(r, 2, Y, Y, Z);
        });
        add({Y, Z, Z}, [&](TermList &r) {
            singles(r, 3.0 / 4, Y);
            pair(r, i, 1, X, 2, Z), pair(r, i, 1, X, 3, Z), pair(r, i, 1, Z, 2, X);
            pair(r, i, 2, X, 3, Z), pair(r, i, 1, Z, 3, X), pair(r, i, 2, Z, 3, X);
            triple(r, 2, Y, Z, Z), triple(r, 2, Z, Y, Z), triple(r, 2, Z, Z, Y);
        });
        add({Z, Y, Z}, [&](TermList &r) {
            singles(r, 1.0 / 4, Y);
            triple(r, 2, Z, Y, Z), triple(r, 2, Z, Z, Y), triple(r, 2, Y, Z, Z);
        });
        return t;
    }();
    return table;
}

/// Per-atom relations J_n^2 = 1/4, J_n^3 = J_n / 4, J_nx J_ny = (i/2) J_nz
/// and cyclic, for every atom of the three-atom system.
inline std::vector<OperatorIdentity> single_atom_relations() {
    using enum Axis;
    std::vector<OperatorIdentity> out;
    for (int n = 1; n <= kAtoms; ++n) {
        const std::string atom = std::to_string(n);
        for (Axis a : kAxes) {
            const std::string ax(1, axis_char(a));
            out.push_back({"J" + atom + ax + "^2", {}, {{1.0, {{n, a}, {n, a}}}}, {{0.25, {}}}});
            out.push_back({"J" + atom + ax + "^3",
                           {},
                           {{1.0, {{n, a}, {n, a}, {n, a}}}},
                           {{0.25, {{n, a}}}}});
        }
        out.push_back({"J" + atom + "xJ" + atom + "y", {}, {{1.0, {{n, X}, {n, Y}}}},
                       {{0.5 * kI, {{n, Z}}}}});
        out.push_back({"J" + atom + "yJ" + atom + "z", {}, {{1.0, {{n, Y}, {n, Z}}}},
                       {{0.5 * kI, {{n, X}}}}});
        out.push_back({"J" + atom + "zJ" + atom + "x", {}, {{1.0, {{n, Z}, {n, X}}}},
                       {{0.5 * kI, {{n, Y}}}}});
    }
    return out;
}

/// Dense matrix of a term list in the 2^n_atoms space.
inline Matrix term_matrix(const TermList &terms, int n_atoms = kAtoms) {
    const auto dim = static_cast<Eigen::Index>(full_dim(n_atoms));
    std::map<std::pair<int, Axis>, Matrix> cache;
    auto single = [&](const Factor &f) -> const Matrix & {
        auto key = std::make_pair(f.atom, f.axis);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, single_atom_op(f.atom, f.axis, n_atoms).entries()).first;
        }
        return it->second;
    };
    Matrix out = Matrix::Zero(dim, dim);
    for (const Term &t : terms) {
        Matrix prod = Matrix::Identity(dim, dim);
        for (const Factor &f : t.factors) {
            prod = prod * single(f);
        }
        out += t.coeff * prod;
    }
    return out;
}

inline Matrix lhs_matrix(const OperatorIdentity &id, int n_atoms = kAtoms) {
    if (id.collective_lhs.empty()) {
        return term_matrix(id.atomic_lhs, n_atoms);
    }
    const auto dim = static_cast<Eigen::Index>(full_dim(n_atoms));
    Matrix prod = Matrix::Identity(dim, dim);
    for (Axis a : id.collective_lhs) {
        prod = prod * collective_op(a, n_atoms).entries();
    }
    return prod;
}

inline IdentityResult check_identity(const OperatorIdentity &id,
                                     double tol = Tolerances{}.identity) {
    const Matrix residual = lhs_matrix(id) - term_matrix(id.rhs);
    IdentityResult r;
    r.identity_id = id.id;
    r.max_abs_residual = max_abs(residual);
    r.dim = residual.rows();
    r.passed = r.max_abs_residual <= tol;
    return r;
}

struct SuiteOptions {
    /// Flip the sign of one right-hand term; the suite must then fail.
    bool corrupt_first_identity = false;
    double tol = Tolerances{}.identity;
};

/// All 27 collective three-operator identities followed by the single-atom
/// relations, in table order.
inline std::vector<IdentityResult> verify_identity_suite(const SuiteOptions &opt = {}) {
    std::vector<IdentityResult> out;
    bool first = true;
    for (OperatorIdentity id : product_identities()) {
        if (first && opt.corrupt_first_identity) {
            id.rhs.back().coeff = -id.rhs.back().coeff;
        }
        first = false;
        out.push_back(check_identity(id, opt.tol));
    }
    for (const auto &id : single_atom_relations()) {
        out.push_back(check_identity(id, opt.tol));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cancellation of bipartite terms in J_x'^3.

/// Direction of x' for arbitrary real angles.
inline SpinDirection x_prime_direction(double theta, double phi) {
    return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
}

/// (7/4) sum_n J_{n x'} + sum over ordered distinct (p, q, r) of the ten
/// weighted tripartite patterns. Contains no bipartite term by construction.
inline TermList reduced_cube_terms(SpinDirection n) {
    TermList out;
    for (int atom = 1; atom <= kAtoms; ++atom) {
        for (Axis a : kAxes) {
            out.push_back({7.0 / 4 * n.component(a), {{atom, a}}});
        }
    }
    for (int p = 1; p <= kAtoms; ++p) {
        for (int q = 1; q <= kAtoms; ++q) {
            for (int r = 1; r <= kAtoms; ++r) {
                if (p == q || q == r || p == r) {
                    continue;
                }
                for (Pattern pat : kPatterns) {
                    const auto ax = pattern_axes(pat);
                    const double w = pattern_multiplicity(pat) * n.component(ax[0]) *
                                     n.component(ax[1]) * n.component(ax[2]);
                    out.push_back({w, {{p, ax[0]}, {q, ax[1]}, {r, ax[2]}}});
                }
            }
        }
    }
    return out;
}

/// (n . J)^3 expanded into the 27 ordered collective products, each replaced
/// by its right-hand side from the identity table. Not merged.
inline TermList expanded_cube_terms(SpinDirection n) {
    TermList out;
    for (const auto &id : product_identities()) {
        double w = 1.0;
        for (Axis a : id.collective_lhs) {
            w *= n.component(a);
        }
        for (const Term &t : id.rhs) {
            out.push_back({w * t.coeff, t.factors});
        }
    }
    return out;
}

/// Combines like terms. Factors on distinct atoms commute, so each term is
/// keyed by its factors sorted by atom; terms must not repeat an atom.
inline TermList merge_terms(const TermList &terms) {
    std::map<std::vector<std::pair<int, int>>, Complex> acc;
    for (const Term &t : terms) {
        std::vector<std::pair<int, int>> key;
        for (const Factor &f : t.factors) {
            key.emplace_back(f.atom, static_cast<int>(f.axis));
        }
        std::sort(key.begin(), key.end());
        for (std::size_t k = 1; k < key.size(); ++k) {
            if (key[k].first == key[k - 1].first) {
                throw InvalidArgument("merge_terms: term repeats an atom");
            }
        }
        acc[key] += t.coeff;
    }
    TermList out;
    for (const auto &[key, c] : acc) {
        Term t{c, {}};
        for (const auto &[atom, axis] : key) {
            t.factors.push_back({atom, static_cast<Axis>(axis)});
        }
        out.push_back(std::move(t));
    }
    return out;
}

/// Largest |coefficient| among merged terms with the given number of factors.
inline double max_coefficient(const TermList &merged, std::size_t n_factors) {
    double m = 0.0;
    for (const Term &t : merged) {
        if (t.factors.size() == n_factors) {
            m = std::max(m, std::abs(t.coeff));
        }
    }
    return m;
}

/// max |a_k - b_k| over the union of merged term keys.
inline double max_coefficient_difference(const TermList &a, const TermList &b) {
    TermList diff = a;
    for (const Term &t : b) {
        diff.push_back({-t.coeff, t.factors});
    }
    double m = 0.0;
    for (const Term &t : merge_terms(diff)) {
        m = std::max(m, std::abs(t.coeff));
    }
    return m;
}

/// True when every term is a single-atom operator or a product over three
/// distinct atoms.
inline bool only_single_and_tripartite(const TermList &terms) {
    return std::all_of(terms.begin(), terms.end(), [](const Term &t) {
        if (t.factors.size() == 1) {
            return true;
        }
        if (t.factors.size() != 3) {
            return false;
        }
        const int a = t.factors[0].atom, b = t.factors[1].atom, c = t.factors[2].atom;
        return a != b && b != c && a != c;
    });
}

/// Compares the cube of J_x' (dense) with the reduced single + tripartite
/// form, for arbitrary real angles.
inline IdentityResult verify_cancellation(double theta, double phi,
                                          double tol = Tolerances{}.identity) {
    const SpinDirection n = x_prime_direction(theta, phi);
    const Matrix jxp = directional_op(n, kAtoms, Space::Full).entries();
    const Matrix cube = jxp * jxp * jxp;
    IdentityResult r;
    r.identity_id = "Jx'^3(theta=" + std::to_string(theta) + ",phi=" + std::to_string(phi) + ")";
    r.max_abs_residual = max_abs(cube - term_matrix(reduced_cube_terms(n)));
    r.dim = cube.rows();
    r.passed = r.max_abs_residual <= tol;
    return r;
}

struct CancellationSweep {
    int n_pairs = 0;
    double max_residual = 0.0;
    /// Largest surviving bipartite / constant coefficient after expanding the
    /// cube through the identity table.
    double max_bipartite = 0.0;
    double max_constant = 0.0;
    /// Expanded-and-merged vs reduced term list, coefficient by coefficient.
    double max_term_mismatch = 0.0;
    bool passed = false;
};

/// Seeded sweep over random (theta, phi) with theta in [0, pi], phi in (-pi, pi].
inline CancellationSweep cancellation_sweep(int n_pairs, std::uint64_t seed,
                                            double tol = Tolerances{}.identity) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> theta_dist(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> phi_dist(-std::numbers::pi, std::numbers::pi);
    CancellationSweep s;
    s.n_pairs = n_pairs;
    bool all = true;
    for (int k = 0; k < n_pairs; ++k) {
        const double theta = theta_dist(rng);
        const double phi = phi_dist(rng);
        const IdentityResult r = verify_cancellation(theta, phi, tol);
        all = all && r.passed;
        s.max_residual = std::max(s.max_residual, r.max_abs_residual);
        const SpinDirection n = x_prime_direction(theta, phi);
        const TermList merged = merge_terms(expanded_cube_terms(n));
        s.max_bipartite = std::max(s.max_bipartite, max_coefficient(merged, 2));
        s.max_constant = std::max(s.max_constant, max_coefficient(merged, 0));
        s.max_term_mismatch =
            std::max(s.max_term_mismatch, max_coefficient_difference(merged, reduced_cube_terms(n)));
    }
    s.passed = all && s.max_bipartite <= tol && s.max_constant <= tol &&
               s.max_term_mismatch <= tol;
    return s;
}

// ---------------------------------------------------------------------------
// N-atom sweeps.

struct SumRouteSummary {
    int n_atoms = 0;
    int n_states = 0;
    int n_checked = 0;
    int n_skipped = 0; // frame undefined
    double max_rel_dev_xp = 0.0;
    double max_rel_dev_yp = 0.0;
    double max_abs_dev = 0.0;
    bool passed = false;
};

/// Direct route with explicit dense rotated operators in the 2^N space versus
/// the correlator-sum route with correlators summed over all ordered triples.
inline SumRouteSummary verify_sum_route(const std::vector<SymmetricState> &corpus,
                                        const Tolerances &tol = {}) {
    SumRouteSummary s;
    s.n_states = static_cast<int>(corpus.size());
    bool all = true;
    for (const SymmetricState &state : corpus) {
        const int n = state.n_atoms();
        if (n > 6) {
            throw InvalidArgument("dense sum-route oracle supports 3 <= N <= 6");
        }
        s.n_atoms = n;
        const FullState full = dicke_to_full(state);
        const MeanSpin m = mean_spin(full);
        RotationAngles angles = RotationAngles::from_angles(0.0, 0.0);
        try {
            angles = rotation_angles(m, tol.frame);
        } catch (const FrameUndefined &) {
            ++s.n_skipped;
            continue;
        }
        const auto ops = rotated_ops(angles, n, Space::Full);
        const double direct_x = central_moment(full, ops[0], 3);
        const double direct_y = central_moment(full, ops[1], 3);
        const TripleCorrelatorSet t = triple_correlators(full, CorrelatorMode::FullSum);
        const double sum_x = third_moment_sum_xp(m, angles, t, tol.frame);
        const double sum_y = third_moment_sum_yp(m, angles, t, tol.frame);
        const auto cx = compare_routes(direct_x, sum_x, tol.route_rel, tol.route_abs);
        const auto cy = compare_routes(direct_y, sum_y, tol.route_rel, tol.route_abs);
        all = all && cx.agree && cy.agree;
        s.max_rel_dev_xp = std::max(s.max_rel_dev_xp, cx.rel_dev);
        s.max_rel_dev_yp = std::max(s.max_rel_dev_yp, cy.rel_dev);
        s.max_abs_dev = std::max({s.max_abs_dev, cx.abs_dev, cy.abs_dev});
        ++s.n_checked;
    }
    s.passed = all;
    return s;
}

/// n_trials seeded random symmetric states plus the GHZ-type state, which has
/// zero mean spin and is always reported as skipped.
inline SumRouteSummary verify_sum_route(int n_atoms, int n_trials, std::uint64_t seed,
                                        const Tolerances &tol = {}) {
    if (n_atoms < 3 || n_atoms > 6) {
        throw InvalidArgument("dense sum-route oracle supports 3 <= N <= 6");
    }
    std::vector<SymmetricState> corpus;
    corpus.reserve(static_cast<std::size_t>(n_trials) + 1);
    for (int k = 0; k < n_trials; ++k) {
        corpus.push_back(random_symmetric_state(n_atoms, mix_seed(seed, static_cast<std::uint64_t>(k))));
    }
    corpus.push_back(ghz_state(n_atoms));
    SumRouteSummary s = verify_sum_route(corpus, tol);
    s.n_atoms = n_atoms;
    return s;
}

struct ProductVanishingSummary {
    int n_atoms = 0;
    int n_trials = 0;
    double max_s = 0.0;
    /// max |T_abc - N(N-1)(N-2) <J_1a><J_1b><J_1c>| over patterns and trials.
    double max_factorization_residual = 0.0;
    bool passed = false;
};

inline ProductVanishingSummary verify_product_vanishing(int n_atoms, int n_trials,
                                                        std::uint64_t seed,
                                                        double s_tol = 1e-10,
                                                        const Tolerances &tol = {}) {
    if (n_atoms < 3) {
        throw InvalidArgument("product vanishing sweep needs N >= 3");
    }
    ProductVanishingSummary s;
    s.n_atoms = n_atoms;
    s.n_trials = n_trials;
    const double triples = static_cast<double>(n_atoms) * (n_atoms - 1) * (n_atoms - 2);
    for (int k = 0; k < n_trials; ++k) {
        const ProductState p =
            random_coherent_product(n_atoms, mix_seed(seed, static_cast<std::uint64_t>(k)));
        const SymmetricState state = coherent_state(n_atoms, p.qubits().front());
        const MomentReport r = entanglement_s(state, tol);
        s.max_s = std::max(s.max_s, r.s_parameter);
        const MeanSpin m = r.mean_spin;
        for (Pattern pat : kPatterns) {
            const auto ax = pattern_axes(pat);
            const double factored = triples * (m.component(ax[0]) / n_atoms) *
                                    (m.component(ax[1]) / n_atoms) *
                                    (m.component(ax[2]) / n_atoms);
            s.max_factorization_residual = std::max(
                s.max_factorization_residual, std::abs(r.correlators.value(pat) - factored));
        }
    }
    s.passed = s.max_s <= s_tol;
    return s;
}

} // namespace trimoment::oracle
