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

// Reference implementations used only by the tests. They share no code with
// the library: plain loops, a cyclic Jacobi sweep and brute-force grids.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qkdlab::oracle {

using Cx = std::complex<double>;
using CxMatrix = Eigen::MatrixXcd;

// Eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi rotations on
// the real 2n x 2n embedding [[Re, -Im], [Im, Re]].
std::vector<double> hermitian_eigenvalues(const CxMatrix& m);

// Sum of singular values: square roots of the eigenvalues of M^dagger M.
double trace_norm(const CxMatrix& m);

// Tr_E or Tr_B by explicit index summation, i = b * dimE + e.
CxMatrix partial_trace_keep_b(const CxMatrix& m, int dimB, int dimE);
CxMatrix partial_trace_keep_e(const CxMatrix& m, int dimB, int dimE);

double binary_entropy(double x);

double entropy(const CxMatrix& m);

// max over phases a, b of |c1 + c2 e^{ia} + c3 e^{ib} - c4 e^{i(a+b)}| / (2 sqrt 2)
// (a global phase removes the third degree of freedom), on a grid x grid mesh
// followed by local golden-section polishing of the best cell.
double delta_by_grid(Cx c1, Cx c2, Cx c3, Cx c4, int grid = 1024);

}  // namespace qkdlab::oracle
