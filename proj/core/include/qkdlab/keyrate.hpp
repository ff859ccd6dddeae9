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

// Asymptotic (Devetak-Winter) keyrates for each level of source
// characterization, plus the collective-attack min-entropy rate.
// Error-correction leakage is h(deltaZ); rates are reported unfloored.

#include <optional>
#include <string_view>

#include "qkdlab/bounds.hpp"
#include "qkdlab/source.hpp"

namespace qkdlab {

class ObservedStats {
 public:
  ObservedStats(double deltaZ, double deltaX);
  double deltaZ() const { return deltaZ_; }
  double deltaX() const { return deltaX_; }

 private:
  double deltaZ_;
  double deltaX_;
};

enum class KeyrateVariant { ArbitraryTheta, Qubit, QubitDim2, UncertaintyComparison, MinEntropy };

std::string_view to_string(KeyrateVariant variant);
std::optional<KeyrateVariant> parse_keyrate_variant(std::string_view name);

struct KeyrateInputs {
  double deltaZ = 0.0;
  double deltaX = 0.0;
  double epsilon = 0.0;
  std::optional<double> delta;
  std::optional<double> theta;
  std::optional<QubitSourceAngles> angles;
};

struct KeyrateReport {
  KeyrateVariant variant = KeyrateVariant::ArbitraryTheta;
  double rate = 0.0;
  std::optional<double> fidelityBound;  // empty for the uncertainty comparison
  bool positive = false;
  // False for values computed for comparison only.
  bool certifying = true;
  KeyrateInputs inputs;
};

// h(p) - h(1/2 + 1/2 sqrt(eps^2 + (1 - eps^2) F^2)), p = (1 + eps)/2.
double entropy_bound_from_fidelity(double fidelity, double epsilon);

KeyrateReport keyrate_arbitrary(const OverlapCharacterization& theta, const ObservedStats& stats,
                                double epsilon = 0.0);
KeyrateReport keyrate_qubit(const QubitSourceAngles& angles, const ObservedStats& stats,
                            double epsilon = 0.0);
KeyrateReport keyrate_qubit_dim2(const QubitSourceAngles& angles, const ObservedStats& stats,
                                 double epsilon = 0.0);

// 1 - log2(1 + |cos theta|) - h(dx) - h(dz). Comparison value only.
KeyrateReport keyrate_uncertainty_comparison(double theta, const ObservedStats& stats);

// 1 - log2(1 + D) for an upper bound D on D(rho_E, rho'_E).
double minentropy_rate(double traceDistanceUpper);

// Min-entropy rate from the fidelity bound of a certified report:
// minentropy_rate(sqrt(1 - F^2)) - h(dz). Unbiased sources only.
KeyrateReport keyrate_minentropy(const KeyrateReport& fidelityReport);

}  // namespace qkdlab
