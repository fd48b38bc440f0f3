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

#include <array>
#include <random>

namespace trimoment {
namespace {

constexpr double kTol = 1e-13;

Matrix op(int atom, Axis a, int n) { return single_atom_op(atom, a, n).entries(); }
Matrix coll(Axis a, int n) { return collective_op(a, n).entries(); }
Matrix coll_dicke(Axis a, int n) { return collective_op_dicke(a, n).entries(); }

/// Matrix of the permutation that swaps atoms 1 and 2.
Matrix swap12(int n) {
    const auto dim = static_cast<Eigen::Index>(full_dim(n));
    Matrix p = Matrix::Zero(dim, dim);
    const std::array<int, 3> perm{2, 1, 3};
    for (Eigen::Index b = 0; b < dim; ++b) {
        Vector e = Vector::Zero(dim);
        e(b) = 1.0;
        p.col(b) = permute_atoms(FullState::from_amplitudes(n, e), perm).amplitudes();
    }
    return p;
}

TEST(SingleAtomOp, PauliHalvesForOneAtom) {
    Matrix z(2, 2);
    z << 0.5, 0.0, 0.0, -0.5;
    EXPECT_EQ(op(1, Axis::Z, 1), z);
    const Matrix x = op(1, Axis::X, 1);
    EXPECT_LE(max_abs(x * x - 0.25 * Matrix::Identity(2, 2)), 0.0);
    const Matrix y = op(1, Axis::Y, 1);
    EXPECT_EQ(y(0, 1), Complex(0.0, -0.5));
    EXPECT_EQ(y(1, 0), Complex(0.0, 0.5));
}

TEST(SingleAtomOp, RelabelingSymmetry) {
    const Matrix p = swap12(3);
    EXPECT_LE(max_abs(p * op(1, Axis::Y, 3) * p.adjoint() - op(2, Axis::Y, 3)), kTol);
}

TEST(SingleAtomOp, MatchesKroneckerProduct) {
    // Atom 1 is the most significant factor: J_2x = I (x) s_x (x) I.
    const Eigen::Matrix2cd s = spin_half(Axis::X);
    Matrix expected = Matrix::Zero(8, 8);
    for (int a = 0; a < 2; ++a) {
        for (int c = 0; c < 2; ++c) {
            for (int r = 0; r < 2; ++r) {
                for (int q = 0; q < 2; ++q) {
                    expected(a * 4 + r * 2 + c, a * 4 + q * 2 + c) = s(r, q);
                }
            }
        }
    }
    EXPECT_EQ(op(2, Axis::X, 3), expected);
}

TEST(SingleAtomOp, RangeChecks) {
    EXPECT_THROW(single_atom_op(0, Axis::X, 3), InvalidArgument);
    EXPECT_THROW(single_atom_op(4, Axis::X, 3), InvalidArgument);
    EXPECT_THROW(single_atom_op(1, Axis::X, kMaxDenseFullAtoms + 1), InvalidArgument);
}

TEST(CollectiveOp, CyclicCommutatorsFullSpace) {
    for (int n = 1; n <= 6; ++n) {
        EXPECT_LE(max_abs(commutator(coll(Axis::X, n), coll(Axis::Y, n)) - kI * coll(Axis::Z, n)), kTol);
        EXPECT_LE(max_abs(commutator(coll(Axis::Y, n), coll(Axis::Z, n)) - kI * coll(Axis::X, n)), kTol);
        EXPECT_LE(max_abs(commutator(coll(Axis::Z, n), coll(Axis::X, n)) - kI * coll(Axis::Y, n)), kTol);
    }
}

TEST(CollectiveOp, CyclicCommutatorsDickeSpace) {
    for (int n = 1; n <= 12; ++n) {
        EXPECT_LE(max_abs(commutator(coll_dicke(Axis::X, n), coll_dicke(Axis::Y, n)) -
                          kI * coll_dicke(Axis::Z, n)), 1e-12);
        EXPECT_LE(max_abs(commutator(coll_dicke(Axis::Y, n), coll_dicke(Axis::Z, n)) -
                          kI * coll_dicke(Axis::X, n)), 1e-12);
    }
}

TEST(CollectiveOp, DistinctAtomsCommute) {
    for (Axis a : kAxes) {
        for (Axis b : kAxes) {
            for (int p = 1; p <= 4; ++p) {
                for (int q = 1; q <= 4; ++q) {
                    if (p != q) {
                        EXPECT_LE(max_abs(commutator(op(p, a, 4), op(q, b, 4))), 0.0);
                    }
                }
            }
        }
    }
}

TEST(CollectiveOp, JzEigenvaluesOnDickeStates) {
    const Matrix jz = coll(Axis::Z, 4);
    for (int k = 0; k <= 4; ++k) {
        const Vector v = dicke_to_full(dicke_basis_state(4, k)).amplitudes();
        EXPECT_LE(testing::max_abs_diff(jz * v, (2.0 - k) * v), kTol);
    }
}

TEST(CollectiveOp, MatrixFreeMatchesDense) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 2 + static_cast<int>(seed % 5);
        Vector psi = Vector::Random(static_cast<Eigen::Index>(full_dim(n)));
        const SpinDirection d{0.3, -0.7, 0.2};
        EXPECT_LE(testing::max_abs_diff(apply_collective(psi, n, d),
                                        directional_op(d, n, Space::Full).entries() * psi),
                  1e-14);
        EXPECT_LE(testing::max_abs_diff(apply_single(psi, n, 2, Axis::Y),
                                        op(2, Axis::Y, n) * psi),
                  1e-15);
    }
}

TEST(DickeOp, JzDiagonal) {
    const Matrix jz = coll_dicke(Axis::Z, 3);
    Eigen::VectorXd expected(4);
    expected << 1.5, 0.5, -0.5, -1.5;
    EXPECT_LE((jz.diagonal().real() - expected).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE(max_abs(Matrix(jz) - Matrix(jz.diagonal().asDiagonal())), 0.0);
}

TEST(DickeOp, CasimirIsConstantOnSymmetricSubspace) {
    for (int n = 3; n <= 8; ++n) {
        const double j = 0.5 * n;
        const Matrix j2 = total_spin_squared(n, Space::Dicke).entries();
        EXPECT_LE(max_abs(j2 - j * (j + 1.0) * Matrix::Identity(n + 1, n + 1)), kTol) << n;
    }
}

TEST(DickeOp, CasimirOnEmbeddedDickeStatesInFullSpace) {
    for (int n = 3; n <= 6; ++n) {
        const double j = 0.5 * n;
        const Matrix j2 = total_spin_squared(n, Space::Full).entries();
        for (int k = 0; k <= n; ++k) {
            const Vector v = dicke_to_full(dicke_basis_state(n, k)).amplitudes();
            EXPECT_LE(testing::max_abs_diff(j2 * v, j * (j + 1.0) * v), kTol);
        }
    }
}

TEST(DickeOp, AgreesWithProjectedFullSpaceOperator) {
    for (int n = 3; n <= 6; ++n) {
        Matrix basis(static_cast<Eigen::Index>(full_dim(n)), n + 1);
        for (int k = 0; k <= n; ++k) {
            basis.col(k) = dicke_to_full(dicke_basis_state(n, k)).amplitudes();
        }
        for (Axis a : kAxes) {
            EXPECT_LE(max_abs(basis.adjoint() * coll(a, n) * basis - coll_dicke(a, n)), 1e-12);
        }
    }
}

TEST(DickeOp, ExpectationsMatchFullSpace) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SymmetricState s = random_symmetric_state(5, seed);
        const FullState f = dicke_to_full(s);
        for (Axis a : kAxes) {
            const Complex d = expectation(s.coeffs(), collective_op_dicke(a, 5));
            const Complex full = expectation(f.amplitudes(), collective_op(a, 5));
            EXPECT_NEAR(std::abs(d - full), 0.0, 1e-12);
        }
    }
}

TEST(Algebra, AnticommutatorOfDistinctAxesVanishes) {
    EXPECT_LE(anticommutator_check(1, Axis::X, Axis::Y, 3), kTol);
    EXPECT_LE(anticommutator_check(2, Axis::Y, Axis::Z, 3), kTol);
    for (int n = 1; n <= 6; ++n) {
        for (int atom = 1; atom <= n; ++atom) {
            EXPECT_LE(anticommutator_check(atom, Axis::Z, Axis::X, n), kTol);
        }
    }
    EXPECT_THROW(anticommutator_check(1, Axis::X, Axis::X, 3), InvalidArgument);
}

TEST(Algebra, SingleAtomProductRelations) {
    for (int n = 1; n <= 6; ++n) {
        for (int atom = 1; atom <= n; ++atom) {
            const Matrix x = op(atom, Axis::X, n), y = op(atom, Axis::Y, n), z = op(atom, Axis::Z, n);
            const auto id = Matrix::Identity(x.rows(), x.cols());
            EXPECT_LE(max_abs(x * y - 0.5 * kI * z), kTol);
            EXPECT_LE(max_abs(y * z - 0.5 * kI * x), kTol);
            EXPECT_LE(max_abs(z * x - 0.5 * kI * y), kTol);
            for (const Matrix &m : {x, y, z}) {
                EXPECT_LE(max_abs(m * m - 0.25 * id), kTol);
            }
        }
    }
}

TEST(Algebra, AxesShareTheSameSpectrum) {
    for (int n = 1; n <= 5; ++n) {
        Eigen::VectorXd ref;
        for (Axis a : kAxes) {
            const Eigen::SelfAdjointEigenSolver<Matrix> es(coll(a, n));
            if (ref.size() == 0) {
                ref = es.eigenvalues();
                EXPECT_NEAR(ref.maxCoeff(), 0.5 * n, 1e-12);
            } else {
                EXPECT_LE((es.eigenvalues() - ref).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
    }
}

TEST(Algebra, RandomDirectionsAreHermitian) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int n = 1; n <= 6; ++n) {
        SpinDirection d{g(rng), g(rng), g(rng)};
        const double len = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
        d = {d.x / len, d.y / len, d.z / len};
        for (Space space : {Space::Full, Space::Dicke}) {
            const Matrix m = directional_op(d, n, space).entries();
            EXPECT_LE(max_abs(m - m.adjoint()), 1e-15) << n;
        }
    }
}

TEST(OperatorMatrix, Validation) {
    Matrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    EXPECT_THROW(OperatorMatrix(m, Space::Full, true), InvalidArgument);
    EXPECT_NO_THROW(OperatorMatrix(m, Space::Full, false));
    EXPECT_THROW(OperatorMatrix(Matrix::Zero(2, 3), Space::Full, false), DimensionMismatch);
    EXPECT_THROW(expectation(Vector::Zero(3), collective_op(Axis::X, 1)), DimensionMismatch);
}

} // namespace
} // namespace trimoment
