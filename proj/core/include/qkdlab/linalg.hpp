// Copyright 2026 The qkdlab Authors
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

#pragma once

// Finite-dimensional complex linear algebra and quantum-information
// primitives. Everything here is a pure function of its arguments.
//
// Bipartite operators on H_B (x) H_E use the index convention
// i = b * dimE + e, i.e. Bob's factor is the major index.

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace qkdlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kEigenClampWindow = 1e-9;
inline constexpr double kNormTolerance = 1e-12;

// Unit-norm ket.
class PureState {
 public:
  // Throws ValidationError unless |amplitudes| is 1 within kNormTolerance.
  explicit PureState(ComplexVector amplitudes);

  // Rescales to unit norm; throws ValidationError for a zero vector.
  static PureState normalized(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  Index dim() const { return amplitudes_.size(); }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

  // <this|other>
  Complex overlap(const PureState& other) const { return amplitudes_.dot(other.amplitudes_); }

  friend bool operator==(const PureState& a, const PureState& b) {
    return a.amplitudes_ == b.amplitudes_;
  }

 private:
  ComplexVector amplitudes_;
};

// Factorization H_B (x) H_E of a joint space.
class BipartiteLabel {
 public:
  BipartiteLabel(Index dimB, Index dimE);

  Index dimB() const { return dimB_; }
  Index dimE() const { return dimE_; }
  Index total() const { return dimB_ * dimE_; }

  friend bool operator==(const BipartiteLabel&, const BipartiteLabel&) = default;

 private:
  Index dimB_;
  Index dimE_;
};

enum class Subsystem { B, E };

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are orthonormal eigenvectors
};

bool is_hermitian(const ComplexMatrix& m, double tolerance = kHermitianTolerance);

// Throws DimensionError for non-square and ValidationError for non-Hermitian input.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

// Throws ValidationError unless m is Hermitian, has unit trace (1e-9) and no
// eigenvalue below -1e-9. Returns the eigenvalues with the clamp window
// [-1e-9, 0) mapped to 0.
RealVector density_eigenvalues(const ComplexMatrix& m);

// Hermitian square root of a positive semidefinite operator.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

// D(A, B) = 1/2 ||A - B||_1 for density operators.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// F(A, B) = || sqrt(A) sqrt(B) ||_1 for density operators.
double fidelity(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix partial_trace(const ComplexMatrix& m, const BipartiteLabel& label, Subsystem keep);

// Base-2 von Neumann entropy of a density operator.
double von_neumann_entropy(const ComplexMatrix& m);

// h(x) in bits; h(0) = h(1) = 0.
double binary_entropy(double x);

// Hermitian unitary U = P - Q with P the projector onto the non-negative
// eigenspace of m, so that 1/2 Tr[U m] = 1/2 ||m||_1.
ComplexMatrix optimal_distinguishing_unitary(const ComplexMatrix& m);

// dimOut x dimIn matrix with orthonormal columns, Haar distributed, fully
// determined by seed.
ComplexMatrix haar_random_isometry(Index dimIn, Index dimOut, std::uint64_t seed);

// Orthonormalizes the columns of a full-rank matrix (QR with a positive-real
// diagonal on R).
ComplexMatrix orthonormalize_columns(const ComplexMatrix& raw);

}  // namespace qkdlab
