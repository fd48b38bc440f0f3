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
 * Shared scalar/matrix aliases, axis tags, tolerances and the exception
 * hierarchy used across the library.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trimoment {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::X, Axis::Y, Axis::Z};

constexpr char axis_char(Axis a) noexcept {
    switch (a) {
    case Axis::X:
        return 'x';
    case Axis::Y:
        return 'y';
    case Axis::Z:
        return 'z';
    }
    return '?';
}

/// Which Hilbert space a vector or operator lives in.
enum class Space : std::uint8_t { Full, Dicke };

constexpr std::string_view space_name(Space s) noexcept {
    return s == Space::Full ? "full" : "dicke";
}

/// Tolerances with their module defaults. Everything that compares numbers
/// against a threshold takes one of these, so the CLI can surface them.
struct Tolerances {
    double norm = 1e-12;        // state normalization
    double symmetric = 1e-10;   // norm outside the symmetric subspace
    double hermitian = 1e-13;   // operator hermiticity
    double frame = 1e-9;        // |<J>| below which the primed frame is undefined
    double route_rel = 1e-9;    // direct vs correlator-sum route
    double route_abs = 1e-12;   // absolute floor for the route comparison
    double identity = 1e-12;    // operator identity residuals
    double imag = 1e-10;        // imaginary part of a hermitian expectation
    double eigen_merge = 1e-10; // degenerate eigenvalue merge
};

/// FullState vectors beyond this many atoms need an explicit override.
inline constexpr int kMaxFullAtoms = 14;
/// Dense 2^N x 2^N operators are never built above this many atoms.
inline constexpr int kMaxDenseFullAtoms = 12;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidState : public Error {
  public:
    using Error::Error;
};

class NotSymmetric : public Error {
  public:
    using Error::Error;
};

class FrameUndefined : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class InsufficientShots : public Error {
  public:
    using Error::Error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Binomial coefficient C(n, k) as a double; exact for the sizes used here.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double out = 1.0;
    for (int i = 1; i <= k; ++i) {
        out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return out;
}

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace trimoment
