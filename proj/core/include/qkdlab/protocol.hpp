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

// Seeded Monte Carlo of finite BB84 runs through a fixed collective attack.
// Every round draws from its own SplitMix64 substream keyed by
// (seed, round index), so threaded and sequential runs agree bit for bit.
// Keyrates are asymptotic formulas evaluated at the empirical error rates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdlab/attack.hpp"
#include "qkdlab/keyrate.hpp"

namespace qkdlab {

class DetectorSpec {
 public:
  // Effects for outcome 0 of the z and x measurements; 0 <= E <= I (1e-10).
  DetectorSpec(ComplexMatrix zEffect, ComplexMatrix xEffect);

  const ComplexMatrix& zEffect() const { return zEffect_; }
  const ComplexMatrix& xEffect() const { return xEffect_; }

 private:
  ComplexMatrix zEffect_;
  ComplexMatrix xEffect_;
};

// Helstrom-optimal effects for Bob's reduced states under the attack,
// weighting the z pair by (pZ, 1 - pZ) and the x pair equally.
DetectorSpec matched_detector(const SourceSpec& src, const AttackIsometry& attack);

struct RunConfig {
  std::uint64_t rounds = 1;
  double basisProbZ = 0.5;  // used by both Alice and Bob
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ErrorRates {
  double deltaZ = 0.0;
  double deltaX = 0.0;
};

struct RunResult {
  std::uint64_t rounds = 0;
  std::uint64_t siftedZ = 0, siftedX = 0;
  std::uint64_t errorsZ = 0, errorsX = 0;
  // errors / sifted; 1/2 when a basis received no sifted rounds.
  double empiricalDeltaZ = 0.5, empiricalDeltaX = 0.5;
  // Asymptotic theta-bound keyrate at the empirical rates; empty when the
  // source characterization does not certify.
  std::optional<KeyrateReport> keyrateAtEmpirical;

  friend bool operator==(const RunResult& a, const RunResult& b) {
    return a.rounds == b.rounds && a.siftedZ == b.siftedZ && a.siftedX == b.siftedX &&
           a.errorsZ == b.errorsZ && a.errorsX == b.errorsX;
  }
};

ErrorRates theoretical_rates(const SourceSpec& src, const AttackIsometry& attack,
                             const DetectorSpec& det);

RunResult simulate(const SourceSpec& src, const AttackIsometry& attack, const DetectorSpec& det,
                   const RunConfig& cfg);

struct SweepRow {
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  double deltaZ = 0.0;
  double deltaX = 0.0;
  std::optional<double> rate;
};

// CSV with header "rounds,seed,deltaZ,deltaX,rate", 12 significant digits;
// an uncertified rate is written as an empty field.
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Shared 12-significant-digit decimal formatting.
std::string format_decimal(double value);

}  // namespace qkdlab
