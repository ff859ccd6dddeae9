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

// Cloning bounds and observable-to-distance conversions as scalar maps.
//
// Arguments named z, v, x are already normalized trace norms in [0, 1].
// Values within 1e-12 outside [0, 1] are clamped; anything further out is a
// DomainError.

#include "qkdlab/source.hpp"

namespace qkdlab {

inline constexpr double kClampWindow = 1e-12;

struct DisturbanceBounds {
  double zLower = 0.0;  // lower bound on D(rho_B, rho'_B)
  double xLower = 0.0;  // lower bound on D(sigma_B, sigma'_B)
};

// |1 - 2 delta|
double helstrom_lower(double errorRate);
DisturbanceBounds disturbance_bounds(double deltaZ, double deltaX);

// f_theta(v); theta in (0, pi/2].
double f_theta(double theta, double v);

// Folds an angle in (0, pi) onto (0, pi/2] keeping |sin| and |cos|.
double fold_angle(double angle);

// g_alpha(x)
double g_alpha(double alpha, double x);

// F(rho_E, rho'_E) >= f_theta(D(sigma_B, sigma'_B)).
double fidelity_bound_arbitrary(const OverlapCharacterization& theta, double xLower);

// F >= g_alpha(f_phi(D(sigma_B, sigma'_B) / |cos beta|)).
double fidelity_bound_qubit(const QubitSourceAngles& angles, double xLower);

// q(z, v) = z v - sqrt((1 - z^2)(1 - v^2))
double q_zv(double z, double v);

// f2_phi(z, v): h_phi(z, v) when q(z, v) >= |cos phi|, f_phi(v) otherwise.
double f2_phi(double phi, double z, double v);

// F >= g_alpha(f2_phi(D(rho_B, rho'_B)/|cos alpha|, D(sigma_B, sigma'_B)/|cos beta|)).
// Only valid when Bob's system is two dimensional.
double fidelity_bound_qubit_dim2(const QubitSourceAngles& angles, double zLower, double xLower);

// D_E^2 + D_B^2 <= 1 (+1e-9).
bool fuchs_relation_check(double dE, double dB);

}  // namespace qkdlab
