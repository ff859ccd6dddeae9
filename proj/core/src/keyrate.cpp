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

#include "qkdlab/keyrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qkdlab/errors.hpp"

namespace qkdlab {

namespace {

constexpr std::array<std::pair<KeyrateVariant, std::string_view>, 5> kVariantNames{{
    {KeyrateVariant::ArbitraryTheta, "arbitrary-theta"},
    {KeyrateVariant::Qubit, "qubit"},
    {KeyrateVariant::QubitDim2, "qubit-dim2"},
    {KeyrateVariant::UncertaintyComparison, "uncertainty-comparison"},
    {KeyrateVariant::MinEntropy, "minentropy"},
}};

void require_rate(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

KeyrateReport report(KeyrateVariant variant, double fidelityBound, const ObservedStats& stats,
                     double epsilon, KeyrateInputs inputs) {
  KeyrateReport out;
  out.variant = variant;
  out.fidelityBound = fidelityBound;
  out.rate = entropy_bound_from_fidelity(fidelityBound, epsilon) - binary_entropy(stats.deltaZ());
  out.positive = out.rate > 0.0;
  inputs.deltaZ = stats.deltaZ();
  inputs.deltaX = stats.deltaX();
  inputs.epsilon = epsilon;
  out.inputs = inputs;
  return out;
}

}  // namespace

ObservedStats::ObservedStats(double deltaZ, double deltaX) : deltaZ_(deltaZ), deltaX_(deltaX) {
  require_rate(deltaZ, "deltaZ");
  require_rate(deltaX, "deltaX");
}

std::string_view to_string(KeyrateVariant variant) {
  for (const auto& [v, name] : kVariantNames) {
    if (v == variant) return name;
  }
  return "unknown";
}

std::optional<KeyrateVariant> parse_keyrate_variant(std::string_view name) {
  for (const auto& [v, n] : kVariantNames) {
    if (n == name) return v;
  }
  return std::nullopt;
}

double entropy_bound_from_fidelity(double fidelity, double epsilon) {
  if (!(std::abs(epsilon) < 1.0)) {
    throw DomainError("bias epsilon must lie in (-1, 1), got " + std::to_string(epsilon));
  }
  if (!(fidelity >= -kClampWindow && fidelity <= 1.0 + kClampWindow)) {
    throw DomainError("fidelity must lie in [0, 1], got " + std::to_string(fidelity));
  }
  const double f = std::clamp(fidelity, 0.0, 1.0);
  if (epsilon == 0.0) return 1.0 - binary_entropy(0.5 + 0.5 * f);
  const double p = 0.5 * (1.0 + epsilon);
  const double e2 = epsilon * epsilon;
  const double root = std::min(1.0, std::sqrt(e2 + (1.0 - e2) * f * f));
  return binary_entropy(p) - binary_entropy(0.5 + 0.5 * root);
}

KeyrateReport keyrate_arbitrary(const OverlapCharacterization& theta, const ObservedStats& stats,
                                double epsilon) {
  const double bound = fidelity_bound_arbitrary(theta, helstrom_lower(stats.deltaX()));
  KeyrateInputs inputs;
  inputs.delta = theta.delta;
  inputs.theta = theta.theta;
  return report(KeyrateVariant::ArbitraryTheta, bound, stats, epsilon, inputs);
}

KeyrateReport keyrate_qubit(const QubitSourceAngles& angles, const ObservedStats& stats,
                            double epsilon) {
  const double bound = fidelity_bound_qubit(angles, helstrom_lower(stats.deltaX()));
  KeyrateInputs inputs;
  inputs.angles = angles;
  return report(KeyrateVariant::Qubit, bound, stats, epsilon, inputs);
}

KeyrateReport keyrate_qubit_dim2(const QubitSourceAngles& angles, const ObservedStats& stats,
                                 double epsilon) {
  const double bound = fidelity_bound_qubit_dim2(angles, helstrom_lower(stats.deltaZ()),
                                                 helstrom_lower(stats.deltaX()));
  KeyrateInputs inputs;
  inputs.angles = angles;
  return report(KeyrateVariant::QubitDim2, bound, stats, epsilon, inputs);
}

KeyrateReport keyrate_uncertainty_comparison(double theta, const ObservedStats& stats) {
  if (!(theta > 0.0 && theta <= std::numbers::pi / 2.0 + kClampWindow)) {
    throw DomainError("theta must lie in (0, pi/2], got " + std::to_string(theta));
  }
  KeyrateReport out;
  out.variant = KeyrateVariant::UncertaintyComparison;
  out.rate = 1.0 - std::log2(1.0 + std::abs(std::cos(theta))) -
             binary_entropy(stats.deltaX()) - binary_entropy(stats.deltaZ());
  out.positive = out.rate > 0.0;
  out.certifying = false;
  out.inputs.deltaZ = stats.deltaZ();
  out.inputs.deltaX = stats.deltaX();
  out.inputs.theta = theta;
  return out;
}

double minentropy_rate(double traceDistanceUpper) {
  if (!(traceDistanceUpper >= -kClampWindow && traceDistanceUpper <= 1.0 + kClampWindow)) {
    throw DomainError("trace distance bound must lie in [0, 1], got " +
                      std::to_string(traceDistanceUpper));
  }
  return 1.0 - std::log2(1.0 + std::clamp(traceDistanceUpper, 0.0, 1.0));
}

KeyrateReport keyrate_minentropy(const KeyrateReport& fidelityReport) {
  if (!fidelityReport.certifying || !fidelityReport.fidelityBound) {
    throw CertificationUnavailable("min-entropy rate needs a certified fidelity bound");
  }
  if (fidelityReport.inputs.epsilon != 0.0) {
    throw CertificationUnavailable("min-entropy rate is only defined for unbiased sources");
  }
  const double f = *fidelityReport.fidelityBound;
  KeyrateReport out = fidelityReport;
  out.variant = KeyrateVariant::MinEntropy;
  out.rate = minentropy_rate(std::sqrt(std::max(0.0, 1.0 - f * f))) -
             binary_entropy(fidelityReport.inputs.deltaZ);
  out.positive = out.rate > 0.0;
  return out;
}

}  // namespace qkdlab
