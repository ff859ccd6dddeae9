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

// Alice's four emitted states and the characterization parameters derived
// from them: the basis overlap Delta, the angle theta, and for qubit sources
// the angles (alpha, beta, phi).

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "qkdlab/linalg.hpp"

namespace qkdlab {

// z-basis states |alpha>, |alpha'> and x-basis states |beta>, |beta'>.
// pZ is the probability of emitting |alpha> within the z basis.
class SourceSpec {
 public:
  SourceSpec(PureState alpha, PureState alphaPrime, PureState beta, PureState betaPrime,
             double pZ = 0.5);

  const PureState& alpha() const { return alpha_; }
  const PureState& alphaPrime() const { return alphaPrime_; }
  const PureState& beta() const { return beta_; }
  const PureState& betaPrime() const { return betaPrime_; }
  double pZ() const { return pZ_; }
  // Bias epsilon = 2 pZ - 1.
  double epsilon() const { return 2.0 * pZ_ - 1.0; }
  Index dim() const { return alpha_.dim(); }

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;

 private:
  PureState alpha_;
  PureState alphaPrime_;
  PureState beta_;
  PureState betaPrime_;
  double pZ_;
};

struct QubitSourceAngles {
  double alpha = 0.0;  // |sin alpha| = |<alpha|alpha'>|
  double beta = 0.0;   // |sin beta| = |<beta|beta'>|
  double phi = 0.0;    // Bloch angle between the two bases, in (0, pi)
};

struct OverlapCharacterization {
  double delta = 0.0;
  std::optional<double> theta;  // empty when sqrt(2) Delta <= 1

  bool applicable() const { return theta.has_value(); }
};

// Delta maximised over the physically irrelevant ket phases.
double compute_delta(const SourceSpec& src);

// Same maximisation with the z-basis terms weighted by sqrt(2 pZ) and
// sqrt(2 (1 - pZ)): the overlap a biased source reports when the bias is
// folded into the characterization. Equals compute_delta at pZ = 1/2.
double compute_bias_folded_delta(const SourceSpec& src);

OverlapCharacterization characterization_from_delta(double delta);
OverlapCharacterization compute_theta(const SourceSpec& src);
OverlapCharacterization compute_bias_folded_theta(const SourceSpec& src);

// Bloch vector <sigma_x, sigma_y, sigma_z> of a qubit ket.
std::array<double, 3> bloch_vector(const PureState& ket);

QubitSourceAngles extract_qubit_angles(const SourceSpec& src);

// Builds |alpha>, |alpha'> = cos(a/2)|0> + sin(a/2)|1>, sin(a/2)|0> + cos(a/2)|1>
// and the x pair from the same form rotated by phi about the Bloch y axis.
SourceSpec build_qubit_source(const QubitSourceAngles& angles, double pZ = 0.5);

// sigma_z / sigma_x eigenstates.
SourceSpec ideal_bb84_source(double pZ = 0.5);

// Pauli-type operators of a qubit source: Z along rho - rho', V along
// sigma - sigma', and X completing the frame so that V = cos(phi) Z + sin(phi) X.
struct QubitFrame {
  ComplexMatrix z;
  ComplexMatrix x;
  ComplexMatrix v;
  double phi = 0.0;
};
QubitFrame qubit_frame(const SourceSpec& src);

// JSON source documents:
// { "dim": d, "alpha": [[re,im],...], "alphaPrime": ..., "beta": ...,
//   "betaPrime": ..., "pZ": p }
SourceSpec parse_source_json(std::string_view text);
std::string source_to_json(const SourceSpec& src);
SourceSpec load_source(const std::filesystem::path& path);
void save_source(const SourceSpec& src, const std::filesystem::path& path);

}  // namespace qkdlab
