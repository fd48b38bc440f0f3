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

// JSON ingestion of states and JSON/CSV serialization of results.
//
// State file:
//   {"n_atoms": 3, "representation": "dicke", "coeffs": [[re, im], ...]}
//   {"n_atoms": 3, "representation": "product",
//    "coeffs": [[[up_re, up_im], [down_re, down_im]], ...]}
// Dicke coefficients are ordered m = j, j-1, ..., -j.

#pragma once

#include "core.hpp"
#include "moments.hpp"
#include "oracle.hpp"
#include "sampler.hpp"
#include "states.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

namespace trimoment::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Number formatting.

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

// ---------------------------------------------------------------------------
// States.

struct StateOptions {
    bool auto_normalize = false;
    std::optional<int> n_atoms_override;
    double norm_tol = Tolerances{}.norm;
};

struct ParsedState {
    int n_atoms = 0;
    std::variant<SymmetricState, ProductState> state;

    bool is_symmetric() const noexcept { return state.index() == 0; }
};

inline Complex parse_complex(const json &j, const std::string &where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidState(where + ": complex numbers are [re, im] arrays of two numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline ParsedState parse_state(const json &j, const StateOptions &opt = {}) {
    if (!j.is_object()) {
        throw InvalidState("state file must be a JSON object");
    }
    std::optional<int> n;
    if (j.contains("n_atoms")) {
        if (!j["n_atoms"].is_number_integer()) {
            throw InvalidState("n_atoms must be an integer");
        }
        n = j["n_atoms"].get<int>();
    }
    if (opt.n_atoms_override) {
        if (n && *n != *opt.n_atoms_override) {
            throw InvalidState("n_atoms in the file (" + std::to_string(*n) +
                               ") disagrees with --n (" +
                               std::to_string(*opt.n_atoms_override) + ")");
        }
        n = opt.n_atoms_override;
    }
    const std::string rep = j.value("representation", std::string("dicke"));
    if (!j.contains("coeffs") || !j["coeffs"].is_array()) {
        throw InvalidState("state file needs a \"coeffs\" array");
    }
    const json &coeffs = j["coeffs"];

    if (rep == "dicke") {
        std::vector<Complex> c;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            c.push_back(parse_complex(coeffs[k], "coeffs[" + std::to_string(k) + "]"));
        }
        if (n && static_cast<std::size_t>(*n) + 1 != c.size()) {
            throw InvalidState("dicke representation needs n_atoms + 1 coefficients");
        }
        auto s = SymmetricState::from_coeffs(c, opt.auto_normalize, opt.norm_tol);
        return {s.n_atoms(), std::move(s)};
    }
    if (rep == "product") {
        std::vector<Qubit> q;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            const std::string where = "coeffs[" + std::to_string(k) + "]";
            if (!coeffs[k].is_array() || coeffs[k].size() != 2) {
                throw InvalidState(where + ": each atom is [[up_re, up_im], [down_re, down_im]]");
            }
            q.push_back({parse_complex(coeffs[k][0], where), parse_complex(coeffs[k][1], where)});
        }
        if (n && static_cast<std::size_t>(*n) != q.size()) {
            throw InvalidState("product representation needs n_atoms qubit entries");
        }
        auto p = ProductState::from_qubits(std::move(q), opt.auto_normalize, opt.norm_tol);
        return {p.n_atoms(), std::move(p)};
    }
    throw InvalidState("representation must be \"dicke\" or \"product\", got \"" + rep + "\"");
}

inline ParsedState parse_state(const std::string &text, const StateOptions &opt = {}) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw InvalidState(std::string("malformed JSON: ") + e.what());
    }
    return parse_state(j, opt);
}

inline json to_json(const SymmetricState &s) {
    json c = json::array();
    for (Eigen::Index k = 0; k < s.coeffs().size(); ++k) {
        c.push_back(complex_json(s.coeffs()(k)));
    }
    return {{"n_atoms", s.n_atoms()}, {"representation", "dicke"}, {"coeffs", c}};
}

inline json to_json(const ProductState &p) {
    json c = json::array();
    for (const Qubit &q : p.qubits()) {
        c.push_back(json::array({complex_json(q.up), complex_json(q.down)}));
    }
    return {{"n_atoms", p.n_atoms()}, {"representation", "product"}, {"coeffs", c}};
}

// ---------------------------------------------------------------------------
// Moments.

inline json to_json(const MeanSpin &m) {
    return {{"jx", m.jx}, {"jy", m.jy}, {"jz", m.jz}, {"magnitude", m.magnitude()}};
}

inline json to_json(const RotationAngles &a) { return {{"theta", a.theta()}, {"phi", a.phi()}}; }

inline json to_json(const TripleCorrelatorSet &t) {
    json j = json::object();
    for (Pattern p : kPatterns) {
        j[pattern_name(p)] = t.value(p);
    }
    return j;
}

inline json to_json(const MomentReport &r, const Tolerances &tol = {}) {
    const RouteComparison cx = r.route_xp(tol);
    const RouteComparison cy = r.route_yp(tol);
    return {
        {"n_atoms", r.n_atoms},
        {"space", std::string(space_name(r.space))},
        {"mean_spin", to_json(r.mean_spin)},
        {"angles", to_json(r.angles)},
        {"var_xp", r.var_xp},
        {"var_yp", r.var_yp},
        {"m3_xp", r.m3_xp_direct},
        {"m3_yp", r.m3_yp_direct},
        {"s_parameter", r.s_parameter},
        {"routes",
         {{"direct", {{"xp", r.m3_xp_direct}, {"yp", r.m3_yp_direct}}},
          {"sum", {{"xp", r.m3_xp_sum}, {"yp", r.m3_yp_sum}}},
          {"max_rel_dev", std::max(cx.rel_dev, cy.rel_dev)},
          {"agree", cx.agree && cy.agree}}},
        {"correlators", to_json(r.correlators)},
        {"correlators_max_imag", r.correlators.max_imag()},
    };
}

// ---------------------------------------------------------------------------
// Sampling.

inline json to_json(const Estimate &e) { return {{"value", e.value}, {"se", e.se}}; }

inline json to_json(const MomentEstimate &e) {
    return {{"mean", to_json(e.mean)},
            {"m2", to_json(e.m2)},
            {"m3", to_json(e.m3)},
            {"bootstrap_resamples", e.n_resamples}};
}

inline json to_json(const MeasurementRecord &r) {
    return {{"operator_tag", r.operator_tag}, {"n_atoms", r.n_atoms},
            {"eigenvalues", r.eigenvalues},   {"counts", r.counts},
            {"M", r.n_shots},                 {"seed", r.seed}};
}

inline json to_json(const SEstimate &e) {
    json x = to_json(e.record_xp);
    x["estimates"] = to_json(e.moments_xp);
    json y = to_json(e.record_yp);
    y["estimates"] = to_json(e.moments_yp);
    return {{"angles", to_json(e.angles)},
            {"records", json::array({x, y})},
            {"s_hat", e.s_hat},
            {"se", e.se}};
}

// ---------------------------------------------------------------------------
// Verification.

inline json to_json(const oracle::IdentityResult &r) {
    return {{"identity_id", r.identity_id},
            {"max_abs_residual", r.max_abs_residual},
            {"dim", r.dim},
            {"passed", r.passed}};
}

inline json to_json(const oracle::CancellationSweep &s) {
    return {{"n_pairs", s.n_pairs},
            {"max_residual", s.max_residual},
            {"max_bipartite_coefficient", s.max_bipartite},
            {"max_constant_coefficient", s.max_constant},
            {"max_term_mismatch", s.max_term_mismatch},
            {"passed", s.passed}};
}

inline json to_json(const oracle::SumRouteSummary &s) {
    return {{"n_atoms", s.n_atoms},
            {"n_states", s.n_states},
            {"n_checked", s.n_checked},
            {"n_skipped_frame_undefined", s.n_skipped},
            {"max_rel_dev_xp", s.max_rel_dev_xp},
            {"max_rel_dev_yp", s.max_rel_dev_yp},
            {"max_abs_dev", s.max_abs_dev},
            {"passed", s.passed}};
}

inline json to_json(const oracle::ProductVanishingSummary &s) {
    return {{"n_atoms", s.n_atoms},
            {"n_trials", s.n_trials},
            {"max_s", s.max_s},
            {"max_factorization_residual", s.max_factorization_residual},
            {"passed", s.passed}};
}

inline json to_json(const Tolerances &t) {
    return {{"norm", t.norm},           {"symmetric", t.symmetric}, {"hermitian", t.hermitian},
            {"frame", t.frame},         {"route_rel", t.route_rel}, {"route_abs", t.route_abs},
            {"identity", t.identity},   {"imag", t.imag},           {"eigen_merge", t.eigen_merge}};
}

} // namespace trimoment::io
