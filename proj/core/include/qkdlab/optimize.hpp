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

#include <functional>
#include <span>
#include <vector>

namespace qkdlab {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  int maxEvaluations = 10000;
  double initialStep = 0.5;
  // Stop when the spread of simplex values and the simplex diameter both fall
  // below these tolerances.
  double valueTolerance = 1e-12;
  double pointTolerance = 1e-10;
};

struct NelderMeadResult {
  std::vector<double> point;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2)
// over an unconstrained real domain.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> start,
                             const NelderMeadOptions& options = {});

}  // namespace qkdlab
