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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qkdlab/attack.hpp"
#include "qkdlab/bounds.hpp"
#include "qkdlab/errors.hpp"
#include "qkdlab/keyrate.hpp"

namespace qkdlab {

namespace {

constexpr double kIdealTolerance = 1e-9;

ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

double half_trace_norm(const ComplexMatrix& m) { return 0.5 * trace_norm(m); }

ComplexMatrix pauli_z() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

BoundCheck skipped(std::string name, std::string note, bool expectedValid = true) {
  return {std::move(name), false, 0.0, expectedValid, std::move(note)};
}

BoundCheck check(std::string name, double slack, bool expectedValid = true,
                 std::string note = {}) {
  return {std::move(name), true, slack, expectedValid, std::move(note)};
}

}  // namespace

AttackIsometry::AttackIsometry(ComplexMatrix matrix, BipartiteLabel label)
    : matrix_(std::move(matrix)), label_(label) {
  if (matrix_.rows() != label_.total()) {
    throw DimensionError("attack matrix has " + std::to_string(matrix_.rows()) +
                         " rows, expected dimB * dimE = " + std::to_string(label_.total()));
  }
  if (matrix_.cols() < 1 || matrix_.cols() > matrix_.rows()) {
    throw DimensionError("attack matrix must have between 1 and dimB * dimE columns");
  }
  const ComplexMatrix gram = matrix_.adjoint() * matrix_;
  const ComplexMatrix identity = ComplexMatrix::Identity(gram.rows(), gram.cols());
  if ((gram - identity).cwiseAbs().maxCoeff() > kIsometryTolerance) {
    throw ValidationError("attack matrix columns are not orthonormal (V^dagger V != I)");
  }
}

AttackIsometry AttackIsometry::random(Index dimIn, BipartiteLabel label, std::uint64_t seed) {
  return AttackIsometry(haar_random_isometry(dimIn, label.total(), seed), label);
}

std::size_t AttackIsometry::parameter_count(Index dimIn, BipartiteLabel label) {
  return static_cast<std::size_t>(2 * label.total() * dimIn);
}

AttackIsometry AttackIsometry::from_parameters(std::span<const double> params, Index dimIn,
                                               BipartiteLabel label) {
  const Index rows = label.total();
  if (params.size() != parameter_count(dimIn, label)) {
    throw DimensionError("attack parameter vector has the wrong length");
  }
  const std::size_t half = params.size() / 2;
  ComplexMatrix raw(rows, dimIn);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < dimIn; ++c) {
      const auto k = static_cast<std::size_t>(r * dimIn + c);
      raw(r, c) = Complex(params[k], params[half + k]);
    }
  }
  return AttackIsometry(orthonormalize_columns(raw), label);
}

AttackedSource apply_attack(const SourceSpec& src, const AttackIsometry& attack) {
  if (src.dim() != attack.input_dim()) {
    throw DimensionError("attack input dimension " + std::to_string(attack.input_dim()) +
                         " does not match source dimension " + std::to_string(src.dim()));
  }
  const ComplexMatrix& v = attack.matrix();
  const BipartiteLabel& label = attack.label();
  AttackedSource out;
  out.joint = {v * src.alpha().amplitudes(), v * src.alphaPrime().amplitudes(),
               v * src.beta().amplitudes(), v * src.betaPrime().amplitudes()};
  std::array<ComplexMatrix, 4> projectors;
  for (std::size_t k = 0; k < 4; ++k) projectors[k] = outer(out.joint[k]);
  out.rhoB = partial_trace(projectors[0], label, Subsystem::B);
  out.rhoPrimeB = partial_trace(projectors[1], label, Subsystem::B);
  out.sigmaB = partial_trace(projectors[2], label, Subsystem::B);
  out.sigmaPrimeB = partial_trace(projectors[3], label, Subsystem::B);
  out.rhoE = partial_trace(projectors[0], label, Subsystem::E);
  out.rhoPrimeE = partial_trace(projectors[1], label, Subsystem::E);
  return out;
}

ComplexMatrix reduce_to_bob(const AttackIsometry& attack, const ComplexMatrix& op) {
  if (op.rows() != attack.input_dim() || op.cols() != attack.input_dim()) {
    throw DimensionError("operator does not act on the attack's input space");
  }
  return partial_trace(attack.matrix() * op * attack.matrix().adjoint(), attack.label(),
                       Subsystem::B);
}

double conditional_entropy(const ComplexMatrix& rhoE, const ComplexMatrix& rhoPrimeE, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("emission probability must lie in (0, 1)");
  const double q = 1.0 - p;
  const double joint = binary_entropy(p) + p * von_neumann_entropy(rhoE) +
                       q * von_neumann_entropy(rhoPrimeE);
  return joint - von_neumann_entropy(p * rhoE + q * rhoPrimeE);
}

AttackDiagnostics diagnostics(const SourceSpec& src, const AttackIsometry& attack) {
  const AttackedSource s = apply_attack(src, attack);
  AttackDiagnostics d;
  d.dZB = trace_distance(s.rhoB, s.rhoPrimeB);
  d.dSigmaB = trace_distance(s.sigmaB, s.sigmaPrimeB);
  d.fE = fidelity(s.rhoE, s.rhoPrimeE);
  d.dE = trace_distance(s.rhoE, s.rhoPrimeE);
  d.condEntropy = conditional_entropy(s.rhoE, s.rhoPrimeE, src.pZ());
  if (src.dim() == 2) {
    try {
      const QubitFrame frame = qubit_frame(src);
      d.zNorm = half_trace_norm(reduce_to_bob(attack, frame.z));
      d.dXB = half_trace_norm(reduce_to_bob(attack, frame.x));
      d.dVB = half_trace_norm(reduce_to_bob(attack, frame.v));
      d.gamma = d.dXB;
    } catch (const DegenerateSourceError&) {
      // No qubit frame: the frame-dependent quantities stay empty.
    }
  }
  return d;
}

const BoundCheck* BoundReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double BoundReport::worst_valid_slack() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) {
    if (c.applicable && c.expectedValid) worst = std::min(worst, c.slack);
  }
  return worst;
}

BoundReport verify_bounds(const SourceSpec& src, const AttackIsometry& attack) {
  return verify_bounds(src, attack, compute_theta(src));
}

BoundReport verify_bounds(const SourceSpec& src, const AttackIsometry& attack,
                          const OverlapCharacterization& theta) {
  const AttackDiagnostics d = diagnostics(src, attack);
  BoundReport report;
  auto& out = report.checks;

  if (theta.applicable()) {
    out.push_back(check("fidel_theta_bound", d.fE - f_theta(*theta.theta, d.dSigmaB)));
  } else {
    out.push_back(skipped("fidel_theta_bound", "theta inapplicable"));
  }

  std::optional<QubitSourceAngles> angles;
  std::string qubitNote;
  if (src.dim() != 2) {
    qubitNote = "source is not a qubit";
  } else if (!d.dXB) {
    qubitNote = "degenerate qubit source";
  } else {
    angles = extract_qubit_angles(src);
  }
  const bool dim2 = attack.label().dimB() == 2;

  if (angles) {
    const double phi = fold_angle(angles->phi);
    out.push_back(check("fidel_alpha", d.fE - g_alpha(angles->alpha, *d.dXB)));
    out.push_back(check("trx_trv", *d.dXB - f_theta(phi, *d.dVB)));
    if (std::abs(std::cos(angles->beta)) > 1e-12) {
      out.push_back(check("fidel_alpha_theta", d.fE - fidelity_bound_qubit(*angles, d.dSigmaB)));
    } else {
      out.push_back(skipped("fidel_alpha_theta", "x-basis states coincide"));
    }
    if (dim2) {
      out.push_back(check("zvx_bound", -zvx_violation(angles->phi, *d.zNorm, *d.dXB, *d.dVB)));
      if (std::abs(std::cos(angles->alpha)) > 1e-12 && std::abs(std::cos(angles->beta)) > 1e-12) {
        out.push_back(check("fidel_alpha_theta_dim2",
                            d.fE - fidelity_bound_qubit_dim2(*angles, d.dZB, d.dSigmaB)));
      } else {
        out.push_back(skipped("fidel_alpha_theta_dim2", "a basis has coinciding states"));
      }
    } else {
      out.push_back(skipped("zvx_bound", "dimB != 2"));
      out.push_back(skipped("fidel_alpha_theta_dim2", "dimB != 2"));
    }
    const bool ideal = angles->alpha < kIdealTolerance && angles->beta < kIdealTolerance &&
                       std::abs(angles->phi - std::numbers::pi / 2.0) < kIdealTolerance;
    if (ideal) {
      out.push_back(check("tr_zx_bound", 1.0 - d.dE * d.dE - d.dSigmaB * d.dSigmaB));
    } else {
      out.push_back(skipped("tr_zx_bound", "source is not ideal BB84"));
    }
  } else {
    for (const char* name : {"fidel_alpha", "trx_trv", "fidel_alpha_theta", "zvx_bound",
                             "fidel_alpha_theta_dim2", "tr_zx_bound"}) {
      out.push_back(skipped(name, qubitNote));
    }
  }

  out.push_back(check("ent_fidel", d.condEntropy - entropy_bound_from_fidelity(d.fE, src.epsilon()),
                      true, src.epsilon() == 0.0 ? "unbiased" : "biased"));
  out.push_back(check("hmin_relaxation", std::sqrt(std::max(0.0, 1.0 - d.fE * d.fE)) - d.dE));

  if (angles) {
    out.push_back(check("naive_fidelity", d.fE - *d.dXB, false, "conjecture F >= 1/2 ||X_B||_1"));
    out.push_back(check("naive_entropy",
                        d.condEntropy - (1.0 - binary_entropy(0.5 + 0.5 * std::min(1.0, *d.dXB))),
                        false, "conjecture H(Z|E) >= 1 - h(1/2 + 1/4 ||X_B||_1)"));
  } else {
    out.push_back(skipped("naive_fidelity", qubitNote, false));
    out.push_back(skipped("naive_entropy", qubitNote, false));
  }
  return report;
}

double zvx_violation(double phi, double z, double x, double v) {
  // Norms within rounding of 1 are snapped: sqrt(1 - t^2) turns 1e-16 noise into 1e-8.
  auto root = [](double t) {
    return std::abs(1.0 - t) <= 1e-13 ? 0.0 : std::sqrt(std::max(0.0, 1.0 - t * t));
  };
  return std::abs(std::sin(phi)) * root(x) - std::abs(std::cos(phi)) * root(z) - root(v);
}

TightnessCase build_tightness_attack(double theta, double gamma) {
  constexpr double kSlack = 1e-12;
  if (!(gamma >= -kSlack && gamma <= theta + kSlack && theta <= std::numbers::pi / 2.0 + kSlack)) {
    throw DomainError("tightness attack needs 0 <= gamma <= theta <= pi/2");
  }
  auto pair = [](double angle) {
    ComplexVector first(2), second(2);
    first << std::cos(angle / 2.0), std::sin(angle / 2.0);
    second << -std::sin(angle / 2.0), std::cos(angle / 2.0);
    return std::pair{PureState::normalized(first), PureState::normalized(second)};
  };
  auto [a, ap] = pair(gamma - theta);
  auto [b, bp] = pair(gamma);
  ComplexMatrix cloning = ComplexMatrix::Zero(4, 2);
  cloning(0, 0) = 1.0;  // |0> -> |0>_B |0>_E
  cloning(3, 1) = 1.0;  // |1> -> |1>_B |1>_E
  return {SourceSpec(a, ap, b, bp, 0.5), AttackIsometry(cloning, BipartiteLabel(2, 2))};
}

std::array<double, 3> zxv_norms(const AttackIsometry& attack, double phi) {
  if (attack.input_dim() != 2) throw DimensionError("zvx norms need a qubit-input attack");
  const ComplexMatrix z = pauli_z();
  const ComplexMatrix x = pauli_x();
  const ComplexMatrix v = std::cos(phi) * z + std::sin(phi) * x;
  return {half_trace_norm(reduce_to_bob(attack, z)), half_trace_norm(reduce_to_bob(attack, x)),
          half_trace_norm(reduce_to_bob(attack, v))};
}

}  // namespace qkdlab
