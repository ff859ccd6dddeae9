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

#include "qkdlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qkdlab/errors.hpp"
#include "qkdlab/random.hpp"

namespace qkdlab {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

double clamp_eigenvalue(double lambda) {
  if (lambda < -kEigenClampWindow) {
    throw ValidationError("operator has eigenvalue " + std::to_string(lambda) +
                          " below the PSD tolerance");
  }
  return lambda < 0.0 ? 0.0 : lambda;
}

}  // namespace

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError("pure state has no amplitudes");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw ValidationError("pure state norm is " + std::to_string(norm) + ", expected 1");
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw ValidationError("cannot normalize a zero vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

BipartiteLabel::BipartiteLabel(Index dimB, Index dimE) : dimB_(dimB), dimE_(dimE) {
  if (dimB < 1 || dimE < 1) throw DimensionError("bipartite factors must have dimension >= 1");
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tolerance) return false;
    }
  }
  return true;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  require_square(m, "hermitian_eigen");
  if (!is_hermitian(m)) throw ValidationError("hermitian_eigen: matrix is not Hermitian");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  require_square(m, "hermitian_eigenvalues");
  if (!is_hermitian(m)) throw ValidationError("hermitian_eigenvalues: matrix is not Hermitian");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return solver.eigenvalues();
}

double trace_norm(const ComplexMatrix& m) {
  require_square(m, "trace_norm");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

RealVector density_eigenvalues(const ComplexMatrix& m) {
  require_square(m, "density operator");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw ValidationError("density operator has trace " + std::to_string(tr) + ", expected 1");
  }
  RealVector values = hermitian_eigenvalues(m);
  for (Index i = 0; i < values.size(); ++i) values(i) = clamp_eigenvalue(values(i));
  return values;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  RealVector roots(eig.values.size());
  for (Index i = 0; i < roots.size(); ++i) roots(i) = std::sqrt(clamp_eigenvalue(eig.values(i)));
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("trace_distance: operands differ in dimension");
  }
  density_eigenvalues(a);
  density_eigenvalues(b);
  const RealVector diff = hermitian_eigenvalues(a - b);
  return std::min(1.0, 0.5 * diff.cwiseAbs().sum());
}

double fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("fidelity: operands differ in dimension");
  }
  density_eigenvalues(a);
  density_eigenvalues(b);
  const ComplexMatrix product = psd_sqrt(a) * psd_sqrt(b);
  return std::min(1.0, trace_norm(product));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const BipartiteLabel& label, Subsystem keep) {
  require_square(m, "partial_trace");
  if (m.rows() != label.total()) {
    throw DimensionError("partial_trace: operator dimension " + std::to_string(m.rows()) +
                         " does not match " + std::to_string(label.dimB()) + "x" +
                         std::to_string(label.dimE()));
  }
  const Index nB = label.dimB();
  const Index nE = label.dimE();
  if (keep == Subsystem::B) {
    ComplexMatrix out = ComplexMatrix::Zero(nB, nB);
    for (Index b1 = 0; b1 < nB; ++b1)
      for (Index b2 = 0; b2 < nB; ++b2)
        for (Index e = 0; e < nE; ++e) out(b1, b2) += m(b1 * nE + e, b2 * nE + e);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(nE, nE);
  for (Index e1 = 0; e1 < nE; ++e1)
    for (Index e2 = 0; e2 < nE; ++e2)
      for (Index b = 0; b < nB; ++b) out(e1, e2) += m(b * nE + e1, b * nE + e2);
  return out;
}

double von_neumann_entropy(const ComplexMatrix& m) {
  const RealVector values = density_eigenvalues(m);
  double s = 0.0;
  for (Index i = 0; i < values.size(); ++i) {
    const double lambda = values(i);
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  return std::max(0.0, s);
}

double binary_entropy(double x) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
    throw DomainError("binary_entropy: argument " + std::to_string(x) + " outside [0, 1]");
  }
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

ComplexMatrix optimal_distinguishing_unitary(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  RealVector signs(eig.values.size());
  for (Index i = 0; i < signs.size(); ++i) signs(i) = eig.values(i) >= 0.0 ? 1.0 : -1.0;
  return eig.vectors * signs.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix orthonormalize_columns(const ComplexMatrix& raw) {
  if (raw.rows() < raw.cols()) throw DimensionError("cannot orthonormalize: more columns than rows");
  Eigen::HouseholderQR<ComplexMatrix> qr(raw);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(raw.rows(), raw.cols());
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < raw.cols(); ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

ComplexMatrix haar_random_isometry(Index dimIn, Index dimOut, std::uint64_t seed) {
  if (dimIn < 1) throw DimensionError("haar_random_isometry: dimIn must be >= 1");
  if (dimOut < dimIn) {
    throw DimensionError("haar_random_isometry: dimOut " + std::to_string(dimOut) +
                         " is smaller than dimIn " + std::to_string(dimIn));
  }
  SplitMix64 rng(seed);
  ComplexMatrix g(dimOut, dimIn);
  for (Index i = 0; i < dimOut; ++i)
    for (Index j = 0; j < dimIn; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  return orthonormalize_columns(g);
}

}  // namespace qkdlab
