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

#include "qkdlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qkdlab/errors.hpp"

namespace qkdlab {

namespace {

// Maps values within `window` outside [0, 1] onto the interval.
double unit_interval(double value, const char* what, double window = kClampWindow) {
  if (!(value >= -window && value <= 1.0 + window)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
  }
  return std::clamp(value, 0.0, 1.0);
}

double complement_root(double value) { return std::sqrt(std::max(0.0, 1.0 - value * value)); }

void require_theta(double theta) {
  if (!(theta > 0.0 && theta <= std::numbers::pi / 2.0 + kClampWindow)) {
    throw DomainError("theta must lie in (0, pi/2], got " + std::to_string(theta));
  }
}

double require_phi(double phi) {
  if (!(phi > 0.0 && phi < std::numbers::pi) || std::abs(std::sin(phi)) < kClampWindow) {
    throw DegenerateSourceError("basis angle phi must lie strictly inside (0, pi)");
  }
  return fold_angle(phi);
}

// Divides a Helstrom-certified distance by the source distance |cos angle|.
double normalized_distance(double distance, double angle, const char* what) {
  const double c = std::abs(std::cos(angle));
  if (c < kClampWindow) {
    throw DegenerateSourceError(std::string(what) + ": source states coincide (|cos| = 0)");
  }
  return unit_interval(unit_interval(distance, what) / c, what, 1e-9);
}

}  // namespace

double helstrom_lower(double errorRate) {
  if (!(errorRate >= 0.0 && errorRate <= 1.0)) {
    throw DomainError("error rate must lie in [0, 1], got " + std::to_string(errorRate));
  }
  return std::abs(1.0 - 2.0 * errorRate);
}

DisturbanceBounds disturbance_bounds(double deltaZ, double deltaX) {
  return {helstrom_lower(deltaZ), helstrom_lower(deltaX)};
}

double f_theta(double theta, double v) {
  require_theta(theta);
  v = unit_interval(v, "v");
  const double c = std::abs(std::cos(theta));
  if (v < c) return 0.0;
  return std::max(0.0, std::abs(std::sin(theta)) * v - c * complement_root(v));
}

double fold_angle(double angle) {
  if (!(angle > 0.0 && angle < std::numbers::pi)) {
    throw DomainError("angle must lie in (0, pi), got " + std::to_string(angle));
  }
  return angle > std::numbers::pi / 2.0 ? std::numbers::pi - angle : angle;
}

double g_alpha(double alpha, double x) {
  x = unit_interval(x, "x");
  const double s = std::abs(std::sin(alpha));
  if (x >= 2.0 * s / (1.0 + s)) return (1.0 + s) * x - s;
  return s;
}

double fidelity_bound_arbitrary(const OverlapCharacterization& theta, double xLower) {
  if (!theta.applicable()) {
    throw CertificationUnavailable("theta is inapplicable for this source (sqrt(2) Delta <= 1)");
  }
  return f_theta(*theta.theta, xLower);
}

double fidelity_bound_qubit(const QubitSourceAngles& angles, double xLower) {
  const double phi = require_phi(angles.phi);
  const double v = normalized_distance(xLower, angles.beta, "x-basis distance");
  return g_alpha(angles.alpha, f_theta(phi, v));
}

double q_zv(double z, double v) {
  z = unit_interval(z, "z");
  v = unit_interval(v, "v");
  return z * v - complement_root(z) * complement_root(v);
}

double f2_phi(double phi, double z, double v) {
  const double folded = require_phi(phi);
  z = unit_interval(z, "z");
  v = unit_interval(v, "v");
  const double c = std::abs(std::cos(folded));
  if (q_zv(z, v) >= c) {
    const double r = (complement_root(v) + c * complement_root(z)) / std::abs(std::sin(folded));
    return std::sqrt(std::clamp(1.0 - r * r, 0.0, 1.0));
  }
  return f_theta(folded, v);
}

double fidelity_bound_qubit_dim2(const QubitSourceAngles& angles, double zLower, double xLower) {
  const double z = normalized_distance(zLower, angles.alpha, "z-basis distance");
  const double v = normalized_distance(xLower, angles.beta, "x-basis distance");
  return g_alpha(angles.alpha, f2_phi(angles.phi, z, v));
}

bool fuchs_relation_check(double dE, double dB) { return dE * dE + dB * dB <= 1.0 + 1e-9; }

}  // namespace qkdlab
