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

#include "qkdlab/source.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qkdlab/errors.hpp"
#include "qkdlab/optimize.hpp"

namespace qkdlab {

namespace {

constexpr int kPhaseGrid = 64;
// sqrt(2) Delta must exceed 1 by more than this for theta to be defined.
constexpr double kApplicabilityMargin = 1e-10;

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("pZ must lie strictly between 0 and 1, got " + std::to_string(p));
  }
}

// max over phases of |wa c1 e^{i t1} + wb c2 e^{i t2} + wa c3 e^{i t3} - wb c4 e^{i t4}| / (2 sqrt 2)
// with t4 = t2 + t3 - t1.
double maximize_overlap(const SourceSpec& src, double weightA, double weightB) {
  const Complex c1 = weightA * src.alpha().overlap(src.beta());
  const Complex c2 = weightB * src.alphaPrime().overlap(src.beta());
  const Complex c3 = weightA * src.alpha().overlap(src.betaPrime());
  const Complex c4 = weightB * src.alphaPrime().overlap(src.betaPrime());
  const double scale = 1.0 / (2.0 * std::numbers::sqrt2);

  auto value = [&](double t1, double t2, double t3) {
    const double t4 = t2 + t3 - t1;
    const Complex sum = c1 * std::polar(1.0, t1) + c2 * std::polar(1.0, t2) +
                        c3 * std::polar(1.0, t3) - c4 * std::polar(1.0, t4);
    return std::abs(sum) * scale;
  };

  std::array<Complex, kPhaseGrid> phase{};
  const double step = 2.0 * std::numbers::pi / kPhaseGrid;
  for (int k = 0; k < kPhaseGrid; ++k) phase[k] = std::polar(1.0, step * k);

  double best = -1.0;
  int b1 = 0, b2 = 0, b3 = 0;
  for (int i = 0; i < kPhaseGrid; ++i) {
    for (int j = 0; j < kPhaseGrid; ++j) {
      for (int k = 0; k < kPhaseGrid; ++k) {
        const int l = ((j + k - i) % kPhaseGrid + kPhaseGrid) % kPhaseGrid;
        const double v =
            std::abs(c1 * phase[i] + c2 * phase[j] + c3 * phase[k] - c4 * phase[l]) * scale;
        if (v > best) {
          best = v;
          b1 = i;
          b2 = j;
          b3 = k;
        }
      }
    }
  }

  NelderMeadOptions options;
  options.maxEvaluations = 4000;
  options.initialStep = step;
  options.valueTolerance = 1e-14;
  options.pointTolerance = 1e-10;
  const auto refined = nelder_mead(
      [&](std::span<const double> t) { return -value(t[0], t[1], t[2]); },
      {step * b1, step * b2, step * b3}, options);
  return std::max(best, -refined.value);
}

ComplexMatrix bloch_operator(const std::array<double, 3>& n) {
  ComplexMatrix op(2, 2);
  op << Complex(n[2], 0.0), Complex(n[0], -n[1]),
        Complex(n[0], n[1]), Complex(-n[2], 0.0);
  return op;
}

std::array<double, 3> difference(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

std::array<double, 3> unit(const std::array<double, 3>& a, const char* what) {
  const double n = std::sqrt(dot(a, a));
  if (n < 1e-12) throw DegenerateSourceError(std::string(what));
  return {a[0] / n, a[1] / n, a[2] / n};
}

void require_qubit(const SourceSpec& src) {
  if (src.dim() != 2) {
    throw DimensionError("qubit characterization needs a 2-dimensional source, got dimension " +
                         std::to_string(src.dim()));
  }
}

}  // namespace

SourceSpec::SourceSpec(PureState alpha, PureState alphaPrime, PureState beta, PureState betaPrime,
                       double pZ)
    : alpha_(std::move(alpha)),
      alphaPrime_(std::move(alphaPrime)),
      beta_(std::move(beta)),
      betaPrime_(std::move(betaPrime)),
      pZ_(pZ) {
  const Index d = alpha_.dim();
  if (d < 2) throw DimensionError("source states need dimension >= 2");
  if (alphaPrime_.dim() != d || beta_.dim() != d || betaPrime_.dim() != d) {
    throw DimensionError("source states do not share a common dimension");
  }
  require_probability(pZ_);
}

double compute_delta(const SourceSpec& src) { return maximize_overlap(src, 1.0, 1.0); }

double compute_bias_folded_delta(const SourceSpec& src) {
  return maximize_overlap(src, std::sqrt(2.0 * src.pZ()), std::sqrt(2.0 * (1.0 - src.pZ())));
}

OverlapCharacterization characterization_from_delta(double delta) {
  if (!(delta >= 0.0)) throw DomainError("Delta must be non-negative");
  OverlapCharacterization out;
  out.delta = delta;
  if (std::numbers::sqrt2 * delta > 1.0 + kApplicabilityMargin) {
    out.theta = std::asin(std::min(1.0, 2.0 * delta * delta - 1.0));
  }
  return out;
}

OverlapCharacterization compute_theta(const SourceSpec& src) {
  return characterization_from_delta(compute_delta(src));
}

OverlapCharacterization compute_bias_folded_theta(const SourceSpec& src) {
  return characterization_from_delta(compute_bias_folded_delta(src));
}

std::array<double, 3> bloch_vector(const PureState& ket) {
  if (ket.dim() != 2) throw DimensionError("Bloch vector needs a qubit state");
  const Complex a = ket.amplitudes()(0);
  const Complex b = ket.amplitudes()(1);
  const Complex ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

QubitSourceAngles extract_qubit_angles(const SourceSpec& src) {
  const QubitFrame frame = qubit_frame(src);
  QubitSourceAngles angles;
  angles.alpha = std::asin(std::min(1.0, std::abs(src.alpha().overlap(src.alphaPrime()))));
  angles.beta = std::asin(std::min(1.0, std::abs(src.beta().overlap(src.betaPrime()))));
  angles.phi = frame.phi;
  return angles;
}

QubitFrame qubit_frame(const SourceSpec& src) {
  require_qubit(src);
  const auto nz = unit(difference(bloch_vector(src.alpha()), bloch_vector(src.alphaPrime())),
                       "z-basis states coincide (rho = rho')");
  const auto nv = unit(difference(bloch_vector(src.beta()), bloch_vector(src.betaPrime())),
                       "x-basis states coincide (sigma = sigma')");
  const double c = std::clamp(dot(nz, nv), -1.0, 1.0);
  const double phi = std::acos(c);
  if (phi < 1e-12 || phi > std::numbers::pi - 1e-12) {
    throw DegenerateSourceError("the two bases share a Bloch axis (phi = 0 or pi)");
  }
  const auto nx = unit({nv[0] - c * nz[0], nv[1] - c * nz[1], nv[2] - c * nz[2]},
                       "the two bases share a Bloch axis (phi = 0 or pi)");
  return {bloch_operator(nz), bloch_operator(nx), bloch_operator(nv), phi};
}

SourceSpec build_qubit_source(const QubitSourceAngles& angles, double pZ) {
  const double halfPi = std::numbers::pi / 2.0;
  if (!(angles.alpha >= 0.0 && angles.alpha <= halfPi && angles.beta >= 0.0 &&
        angles.beta <= halfPi)) {
    throw DomainError("qubit source angles alpha, beta must lie in [0, pi/2]");
  }
  if (!(angles.phi > 0.0 && angles.phi < std::numbers::pi)) {
    throw DomainError("qubit source angle phi must lie in (0, pi)");
  }
  auto pair = [](double angle) {
    ComplexVector first(2), second(2);
    first << std::cos(angle / 2.0), std::sin(angle / 2.0);
    second << std::sin(angle / 2.0), std::cos(angle / 2.0);
    return std::pair{first, second};
  };
  ComplexMatrix rotation(2, 2);
  rotation << std::cos(angles.phi / 2.0), -std::sin(angles.phi / 2.0),
              std::sin(angles.phi / 2.0), std::cos(angles.phi / 2.0);
  auto [a, ap] = pair(angles.alpha);
  auto [b, bp] = pair(angles.beta);
  return SourceSpec(PureState::normalized(a), PureState::normalized(ap),
                    PureState::normalized(rotation * b), PureState::normalized(rotation * bp), pZ);
}

SourceSpec ideal_bb84_source(double pZ) {
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexVector zero(2), one(2), plus(2), minus(2);
  zero << 1.0, 0.0;
  one << 0.0, 1.0;
  plus << r, r;
  minus << r, -r;
  return SourceSpec(PureState(zero), PureState(one), PureState(plus), PureState(minus), pZ);
}

}  // namespace qkdlab
