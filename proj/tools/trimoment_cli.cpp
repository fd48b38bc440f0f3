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

// trimoment command-line front end.
//
//   trimoment compute --input state.json
//   trimoment verify  [--trials 100] [--seed 13] [--n N]
//   trimoment scan    --grid '{"n_atoms":3,"pair":[0,1],"alpha":{"start":0,"stop":1.57,"count":101}}'
//   trimoment sample  --input state.json [--shots 100000] [--seed 1]
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 frame undefined.

#include "trimoment/trimoment.hpp"

#include "CLI11.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

namespace {

using namespace trimoment;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInvalidInput = 2, kFrameUndefined = 3 };

struct RunConfig {
    std::string command;
    std::string input_path;
    std::string output_path = "-";
    std::optional<std::uint64_t> seed;
    int n_trials = 100;
    std::int64_t m_shots = 100000;
    std::optional<int> n_atoms_override;
    std::string grid;
    bool allow_large_n = false;
    bool auto_normalize = false;
    bool corrupt_identity = false;
    Tolerances tol;
};

/// Malformed user input that is not a library error (files, grids).
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int k = 0; k < len; ++k) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
    }
    return os.str();
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string read_input(const std::string &path) {
    if (path.empty()) {
        throw InputError("--input is required");
    }
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open input file " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string &path, const std::string &text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot open output file " + path);
    }
    out << text;
}

json meta_block(const RunConfig &cfg, std::uint64_t seed, const std::optional<std::string> &input) {
    return {{"tool", "trimoment"},
            {"version", kVersion},
            {"command", cfg.command},
            {"seed", seed},
            {"tolerances", io::to_json(cfg.tol)},
            {"input_sha256", input ? json(sha256_hex(*input)) : json(nullptr)},
            {"timestamp", utc_timestamp()}};
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// State resolution.

/// Symmetric states go through the Dicke path; N < 3 states (only reachable
/// through the product representation) stay in the full space.
using Resolved = std::variant<SymmetricState, FullState>;

Resolved resolve(const io::ParsedState &parsed, const RunConfig &cfg) {
    if (parsed.is_symmetric()) {
        return std::get<SymmetricState>(parsed.state);
    }
    const auto &p = std::get<ProductState>(parsed.state);
    if (p.n_atoms() >= SymmetricState::kMinAtoms && p.all_identical()) {
        return coherent_state(p.n_atoms(), p.qubits().front());
    }
    const FullState full =
        product_to_full(p, cfg.allow_large_n ? SizePolicy::AllowLarge : SizePolicy::Capped);
    if (p.n_atoms() >= SymmetricState::kMinAtoms) {
        return full_to_dicke(full, cfg.tol.symmetric);
    }
    if (asymmetric_norm(full) > cfg.tol.symmetric) {
        throw NotSymmetric("product state is not exchange symmetric");
    }
    return full;
}

io::ParsedState load_state(const RunConfig &cfg, const std::string &text) {
    io::StateOptions opt;
    opt.auto_normalize = cfg.auto_normalize;
    opt.n_atoms_override = cfg.n_atoms_override;
    opt.norm_tol = cfg.tol.norm;
    return io::parse_state(text, opt);
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns the exit code and writes its artifact.

int cmd_compute(const RunConfig &cfg) {
    const std::string text = read_input(cfg.input_path);
    const io::ParsedState parsed = load_state(cfg, text);
    const Resolved state = resolve(parsed, cfg);
    if (!std::holds_alternative<SymmetricState>(state)) {
        throw InvalidArgument("S needs at least 3 atoms");
    }
    const MomentReport r = entanglement_s(std::get<SymmetricState>(state), cfg.tol);
    json out = {{"meta", meta_block(cfg, cfg.seed.value_or(0), text)},
                {"report", io::to_json(r, cfg.tol)}};
    write_output(cfg.output_path, dump(out));
    return kOk;
}

int cmd_verify(const RunConfig &cfg) {
    const std::uint64_t seed = cfg.seed.value_or(13);
    oracle::SuiteOptions sopt;
    sopt.corrupt_first_identity = cfg.corrupt_identity;
    sopt.tol = cfg.tol.identity;
    bool all = true;

    json identities = json::array();
    for (const auto &r : oracle::verify_identity_suite(sopt)) {
        all = all && r.passed;
        identities.push_back(io::to_json(r));
    }

    const auto cancel = oracle::cancellation_sweep(cfg.n_trials, seed, cfg.tol.identity);
    all = all && cancel.passed;

    std::vector<int> route_sizes{3, 4, 5, 6};
    std::vector<int> vanish_sizes{3, 8};
    if (cfg.n_atoms_override) {
        const int n = *cfg.n_atoms_override;
        if (n < 3) {
            throw InvalidArgument("--n must be at least 3");
        }
        route_sizes.clear();
        if (n <= 6) {
            route_sizes.push_back(n);
        }
        vanish_sizes = {n};
    }
    json routes = json::array();
    for (int n : route_sizes) {
        const auto s = oracle::verify_sum_route(n, cfg.n_trials,
                                                mix_seed(seed, 100 + static_cast<std::uint64_t>(n)),
                                                cfg.tol);
        all = all && s.passed;
        routes.push_back(io::to_json(s));
    }
    json vanish = json::array();
    for (int n : vanish_sizes) {
        const auto s = oracle::verify_product_vanishing(
            n, cfg.n_trials, mix_seed(seed, 200 + static_cast<std::uint64_t>(n)), 1e-10, cfg.tol);
        all = all && s.passed;
        vanish.push_back(io::to_json(s));
    }

    json out = {{"meta", meta_block(cfg, seed, std::nullopt)},
                {"identities", identities},
                {"n_identities", identities.size()},
                {"cancellation", io::to_json(cancel)},
                {"sum_route", routes},
                {"product_vanishing", vanish},
                {"passed", all}};
    write_output(cfg.output_path, dump(out));
    return all ? kOk : kVerifyFailed;
}

struct Grid {
    int n_atoms = 3;
    int k0 = 0;
    int k1 = 1;
    double start = 0.0;
    double stop = 0.5 * std::numbers::pi;
    int count = 101;
    double relative_phase = 0.0;

    double alpha(int idx) const {
        return count == 1 ? start : start + (stop - start) * idx / (count - 1);
    }
};

Grid parse_grid(const RunConfig &cfg) {
    json j;
    try {
        j = json::parse(cfg.grid);
    } catch (const json::parse_error &e) {
        throw InputError(std::string("malformed grid JSON: ") + e.what());
    }
    Grid g;
    try {
        if (!j.is_object()) {
            throw InputError("grid must be a JSON object");
        }
        g.n_atoms = j.value("n_atoms", g.n_atoms);
        if (cfg.n_atoms_override) {
            g.n_atoms = *cfg.n_atoms_override;
        }
        if (j.contains("pair")) {
            const json &p = j.at("pair");
            if (!p.is_array() || p.size() != 2) {
                throw InputError("grid \"pair\" must be [k0, k1]");
            }
            g.k0 = p[0].get<int>();
            g.k1 = p[1].get<int>();
        }
        if (j.contains("alpha")) {
            const json &a = j.at("alpha");
            g.start = a.value("start", g.start);
            g.stop = a.value("stop", g.stop);
            g.count = a.value("count", g.count);
        }
        g.relative_phase = j.value("relative_phase", g.relative_phase);
    } catch (const json::exception &e) {
        throw InputError(std::string("malformed grid: ") + e.what());
    }
    if (g.n_atoms < SymmetricState::kMinAtoms) {
        throw InputError("grid n_atoms must be at least 3");
    }
    if (g.k0 < 0 || g.k1 < 0 || g.k0 > g.n_atoms || g.k1 > g.n_atoms || g.k0 == g.k1) {
        throw InputError("grid pair must hold two distinct indices in 0..n_atoms");
    }
    if (g.count < 1 || !std::isfinite(g.start) || !std::isfinite(g.stop) ||
        !std::isfinite(g.relative_phase)) {
        throw InputError("grid alpha needs finite start/stop and count >= 1");
    }
    return g;
}

int cmd_scan(const RunConfig &cfg) {
    const Grid g = parse_grid(cfg);
    const json meta = meta_block(cfg, cfg.seed.value_or(0), cfg.grid);
    std::ostringstream os;
    os << "# tool=trimoment version=" << kVersion << " command=scan seed=" << meta["seed"].dump()
       << "\n";
    os << "# input_sha256=" << meta["input_sha256"].get<std::string>() << "\n";
    os << "# tolerances=" << meta["tolerances"].dump() << "\n";
    os << "# state: coeffs[" << g.k0 << "]=cos(alpha), coeffs[" << g.k1
       << "]=exp(i*relative_phase)*sin(alpha), n_atoms=" << g.n_atoms
       << ", relative_phase=" << io::format_double(g.relative_phase) << "\n";
    os << "# frame_undefined=1 rows leave angle, moment and S columns empty\n";
    os << "# timestamp=" << meta["timestamp"].get<std::string>() << "\n";
    os << "index,alpha,theta,phi,jx,jy,jz,var_xp,var_yp,m3_xp,m3_yp,S,frame_undefined\n";

    const auto f = [](double v) { return io::format_double(v); };
    for (int idx = 0; idx < g.count; ++idx) {
        const double alpha = g.alpha(idx);
        std::vector<Complex> c(static_cast<std::size_t>(g.n_atoms) + 1, Complex{});
        c[static_cast<std::size_t>(g.k0)] = std::cos(alpha);
        c[static_cast<std::size_t>(g.k1)] = std::polar(1.0, g.relative_phase) * std::sin(alpha);
        const SymmetricState s = SymmetricState::from_coeffs(c, true);
        os << idx << "," << f(alpha) << ",";
        try {
            const MomentReport r = entanglement_s(s, cfg.tol);
            os << f(r.angles.theta()) << "," << f(r.angles.phi()) << "," << f(r.mean_spin.jx)
               << "," << f(r.mean_spin.jy) << "," << f(r.mean_spin.jz) << "," << f(r.var_xp)
               << "," << f(r.var_yp) << "," << f(r.m3_xp_direct) << "," << f(r.m3_yp_direct)
               << "," << f(r.s_parameter) << ",0\n";
        } catch (const FrameUndefined &) {
            const MeanSpin m = mean_spin(s);
            os << ",," << f(m.jx) << "," << f(m.jy) << "," << f(m.jz) << ",,,,,,1\n";
        }
    }
    write_output(cfg.output_path, os.str());
    return kOk;
}

int cmd_sample(const RunConfig &cfg) {
    const std::uint64_t seed = cfg.seed.value_or(1);
    const std::string text = read_input(cfg.input_path);
    const io::ParsedState parsed = load_state(cfg, text);
    const Resolved state = resolve(parsed, cfg);

    SEstimate est;
    json exact;
    std::visit(
        [&](const auto &s) {
            est = estimate_s_from_samples(s, cfg.m_shots, seed, cfg.tol);
            const Space space = std::is_same_v<std::decay_t<decltype(s)>, SymmetricState>
                                    ? Space::Dicke
                                    : Space::Full;
            const auto ops = rotated_ops(est.angles, s.n_atoms(), space);
            const double m3x = central_moment(s, ops[0], 3);
            const double m3y = central_moment(s, ops[1], 3);
            exact = {{"m3_xp", m3x}, {"m3_yp", m3y}, {"s_parameter", s_parameter(m3x, m3y)}};
        },
        state);

    json out = {{"meta", meta_block(cfg, seed, text)},
                {"n_atoms", parsed.n_atoms},
                {"sampling", io::to_json(est)},
                {"exact", exact}};
    write_output(cfg.output_path, dump(out));
    return kOk;
}

void emit_error(const RunConfig &cfg, const std::string &code, const std::string &message) {
    std::cerr << "trimoment: " << message << "\n";
    json out = {{"error", code},
                {"message", message},
                {"meta", meta_block(cfg, cfg.seed.value_or(0), std::nullopt)}};
    try {
        write_output(cfg.output_path, dump(out));
    } catch (const std::exception &) {
        std::cout << dump(out);
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Tripartite-entanglement parameter S from third-order spin moments"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::uint64_t seed = 0;
    double tol_rel = cfg.tol.route_rel;
    double tol_abs = cfg.tol.route_abs;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--output,-o", cfg.output_path, "Output path or - for stdout");
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--n", cfg.n_atoms_override, "Number of atoms override");
        sub->add_flag("--allow-large-n", cfg.allow_large_n,
                      "Allow full-space states above the default atom cap");
        sub->add_option("--tolerance-rel", tol_rel, "Relative tolerance of the route comparison");
        sub->add_option("--tolerance-abs", tol_abs, "Absolute floor of the route comparison");
    };

    CLI::App *compute = app.add_subcommand("compute", "Moment report and S for one state");
    add_common(compute);
    compute->add_option("--input,-i", cfg.input_path, "State JSON path or - for stdin")
        ->required();
    compute->add_flag("--auto-normalize", cfg.auto_normalize, "Normalize the input state");

    CLI::App *verify = app.add_subcommand("verify", "Run the operator identity and route checks");
    add_common(verify);
    verify->add_option("--trials", cfg.n_trials, "Trials per randomized sweep")
        ->check(CLI::PositiveNumber);
    verify->add_flag("--debug-corrupt-identity", cfg.corrupt_identity,
                     "Flip one sign in the identity table (harness self-test)");

    CLI::App *scan = app.add_subcommand("scan", "CSV sweep over a two-coefficient state family");
    add_common(scan);
    scan->add_option("--grid", cfg.grid, "Grid as inline JSON")->required();

    CLI::App *sample = app.add_subcommand("sample", "Monte Carlo estimate of S from measurements");
    add_common(sample);
    sample->add_option("--input,-i", cfg.input_path, "State JSON path or - for stdin")
        ->required();
    sample->add_option("--shots", cfg.m_shots, "Shots per measured operator");
    sample->add_flag("--auto-normalize", cfg.auto_normalize, "Normalize the input state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalidInput;
    }

    for (CLI::App *sub : app.get_subcommands()) {
        cfg.command = sub->get_name();
        if (sub->count("--seed") > 0) {
            cfg.seed = seed;
        }
    }
    cfg.tol.route_rel = tol_rel;
    cfg.tol.route_abs = tol_abs;

    try {
        if (!(tol_rel > 0.0) || !(tol_abs > 0.0)) {
            throw InputError("tolerances must be positive");
        }
        if (cfg.command == "compute") {
            return cmd_compute(cfg);
        }
        if (cfg.command == "verify") {
            return cmd_verify(cfg);
        }
        if (cfg.command == "scan") {
            return cmd_scan(cfg);
        }
        return cmd_sample(cfg);
    } catch (const FrameUndefined &e) {
        emit_error(cfg, "frame_undefined", e.what());
        return kFrameUndefined;
    } catch (const InsufficientShots &e) {
        emit_error(cfg, "insufficient_shots", e.what());
        return kInvalidInput;
    } catch (const trimoment::Error &e) {
        emit_error(cfg, "invalid_input", e.what());
        return kInvalidInput;
    } catch (const InputError &e) {
        emit_error(cfg, "invalid_input", e.what());
        return kInvalidInput;
    }
}
