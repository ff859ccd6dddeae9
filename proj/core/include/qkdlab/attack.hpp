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

// Explicit collective attacks: isometries from Alice's source space into
// H_B (x) H_E, the quantities they induce, bound checks and searches.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qkdlab/linalg.hpp"
#include "qkdlab/source.hpp"

namespace qkdlab {

inline constexpr double kIsometryTolerance = 1e-10;

class AttackIsometry {
 public:
  // matrix has shape (dimB * dimE) x d with orthonormal columns (1e-10).
  AttackIsometry(ComplexMatrix matrix, BipartiteLabel label);

  // Haar-random attack.
  static AttackIsometry random(Index dimIn, BipartiteLabel label, std::uint64_t seed);

  // Orthonormalized from a raw real parameter vector of length
  // 2 * dimB * dimE * dimIn (real parts first, then imaginary parts, row-major).
  static AttackIsometry from_parameters(std::span<const double> params, Index dimIn,
                                        BipartiteLabel label);
  static std::size_t parameter_count(Index dimIn, BipartiteLabel label);

  const ComplexMatrix& matrix() const { return matrix_; }
  const BipartiteLabel& label() const { return label_; }
  Index input_dim() const { return matrix_.cols(); }

 private:
  ComplexMatrix matrix_;
  BipartiteLabel label_;
};

struct AttackedSource {
  // V|alpha>, V|alpha'>, V|beta>, V|beta'>
  std::array<ComplexVector, 4> joint;
  ComplexMatrix rhoB, rhoPrimeB, sigmaB, sigmaPrimeB;
  ComplexMatrix rhoE, rhoPrimeE;
};

AttackedSource apply_attack(const SourceSpec& src, const AttackIsometry& attack);

// Bob's reduction Tr_E[V O V^dagger] of a source-space operator.
ComplexMatrix reduce_to_bob(const AttackIsometry& attack, const ComplexMatrix& op);

struct AttackDiagnostics {
  double dZB = 0.0;                 // D(rho_B, rho'_B)
  std::optional<double> dXB;        // 1/2 ||X_B||_1 (qubit sources)
  std::optional<double> dVB;        // 1/2 ||V_B||_1 (qubit sources)
  std::optional<double> zNorm;      // 1/2 ||Z_B||_1 (qubit sources)
  double dSigmaB = 0.0;             // D(sigma_B, sigma'_B)
  double fE = 0.0;                  // F(rho_E, rho'_E)
  double dE = 0.0;                  // D(rho_E, rho'_E)
  double condEntropy = 0.0;         // H(Z|E) on the cq state with (pZ, 1 - pZ)
  std::optional<double> gamma;      // Gamma = 1/2 ||X_B||_1
};

AttackDiagnostics diagnostics(const SourceSpec& src, const AttackIsometry& attack);

// H(Z|E) = S(tau_ZE) - S(tau_E) for tau_ZE = p |0><0| (x) rhoE + (1-p) |1><1| (x) rhoPrimeE.
double conditional_entropy(const ComplexMatrix& rhoE, const ComplexMatrix& rhoPrimeE, double p);

struct BoundCheck {
  std::string name;
  bool applicable = false;
  double slack = 0.0;        // achieved - bound; meaningful when applicable
  bool expectedValid = true; // false for conjectures the lab is meant to refute
  std::string note;
};

struct BoundReport {
  std::vector<BoundCheck> checks;

  const BoundCheck* find(std::string_view name) const;
  // Most negative slack among applicable checks that are expected to hold.
  double worst_valid_slack() const;
};

// Slack of every inequality applicable to the pair. Negative slack is
// reported, never thrown.
BoundReport verify_bounds(const SourceSpec& src, const AttackIsometry& attack);
// Same, reusing a precomputed characterization of `src`.
BoundReport verify_bounds(const SourceSpec& src, const AttackIsometry& attack,
                          const OverlapCharacterization& theta);

// zvx inequality margin: |sin phi| sqrt(1-x^2) - |cos phi| sqrt(1-z^2) - sqrt(1-v^2).
// Positive margin means the inequality is violated.
double zvx_violation(double phi, double z, double x, double v);

struct TightnessCase {
  SourceSpec source;
  AttackIsometry attack;
};

// Source at angles (gamma - theta)/2 and gamma/2 with the cloning map
// |0> -> |00>, |1> -> |11>; requires 0 <= gamma <= theta <= pi/2.
TightnessCase build_tightness_attack(double theta, double gamma);

struct SearchOptions {
  Index dimB = 2;
  Index dimE = 2;
  int budget = 20000;    // total objective evaluations across restarts
  int restarts = 20;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct SearchResult {
  AttackDiagnostics best;
  AttackIsometry attack;
  double objective = 0.0;           // fE or condEntropy of the best attack
  double constraintResidual = 0.0;  // |dSigmaB - target|
  bool feasible = false;            // residual <= 1e-3
  int evaluations = 0;
  int bestRestart = 0;
};

inline constexpr double kConstraintBand = 1e-3;
inline constexpr double kPenaltyWeight = 10.0;

// Minimizes F(rho_E, rho'_E) subject to D(sigma_B, sigma'_B) = target (within 1e-3).
SearchResult minimize_fidelity(const SourceSpec& src, double target, const SearchOptions& options);

// Minimizes H(Z|E) subject to D(sigma_B, sigma'_B) = target (within 1e-3).
SearchResult minimize_conditional_entropy(const SourceSpec& src, double target,
                                          const SearchOptions& options);

struct ZvxFinding {
  double phi = 0.0;
  Index dimB = 0;
  Index dimE = 0;
  double margin = 0.0;  // largest zvx_violation found
  double z = 0.0, x = 0.0, v = 0.0;
  bool violated = false;  // margin > 1e-9
  int evaluations = 0;
  AttackIsometry attack;
};

struct ZvxOptions {
  Index dimB = 3;
  Index dimE = 2;
  int budget = 20000;
  int restarts = 20;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Norms z, x, v of Z_B, X_B, V_B for a qubit-input attack, with
// V = cos(phi) Z + sin(phi) X in the computational frame.
std::array<double, 3> zxv_norms(const AttackIsometry& attack, double phi);

// Nelder-Mead search maximizing zvx_violation.
ZvxFinding break_zvx_search(double phi, const ZvxOptions& options);

// Largest violation over `samples` Haar-random attacks.
ZvxFinding zvx_random_sweep(double phi, Index dimB, Index dimE, int samples, std::uint64_t seed);

// Attack documents: { "dimB": n, "dimE": m, "matrix": [[[re,im],...], ...] }
AttackIsometry parse_attack_json(std::string_view text);
std::string attack_to_json(const AttackIsometry& attack);
AttackIsometry load_attack(const std::filesystem::path& path);
void save_attack(const AttackIsometry& attack, const std::filesystem::path& path);

}  // namespace qkdlab
