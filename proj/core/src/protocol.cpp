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

#include "qkdlab/protocol.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>
#include <thread>

#include "qkdlab/errors.hpp"
#include "qkdlab/random.hpp"

namespace qkdlab {

namespace {

constexpr double kEffectTolerance = 1e-10;

void validate_effect(const ComplexMatrix& e, const char* what) {
  if (e.rows() != e.cols()) throw DimensionError(std::string(what) + " must be square");
  if (!is_hermitian(e)) throw ValidationError(std::string(what) + " is not Hermitian");
  const RealVector w = hermitian_eigenvalues(e);
  if (w.minCoeff() < -kEffectTolerance || w.maxCoeff() > 1.0 + kEffectTolerance) {
    throw ValidationError(std::string(what) + " is not a POVM effect (0 <= E <= I)");
  }
}

double expectation(const ComplexMatrix& effect, const ComplexMatrix& state) {
  return std::clamp((effect * state).trace().real(), 0.0, 1.0);
}

ComplexMatrix positive_part_projector(const ComplexMatrix& m) {
  const ComplexMatrix u = optimal_distinguishing_unitary(m);
  return 0.5 * (ComplexMatrix::Identity(m.rows(), m.cols()) + u);
}

// Probability that Bob's outcome is 0, indexed by [alice basis][alice bit].
// Only matching-basis rows enter the sifted statistics.
struct OutcomeTable {
  std::array<std::array<double, 2>, 2> zMeasurement{};
  std::array<std::array<double, 2>, 2> xMeasurement{};
};

OutcomeTable outcome_table(const SourceSpec& src, const AttackIsometry& attack,
                           const DetectorSpec& det) {
  const AttackedSource s = apply_attack(src, attack);
  if (det.zEffect().rows() != attack.label().dimB()) {
    throw DimensionError("detector dimension does not match Bob's system");
  }
  const std::array<std::array<const ComplexMatrix*, 2>, 2> states{
      {{&s.rhoB, &s.rhoPrimeB}, {&s.sigmaB, &s.sigmaPrimeB}}};
  OutcomeTable t;
  for (int basis = 0; basis < 2; ++basis) {
    for (int bit = 0; bit < 2; ++bit) {
      t.zMeasurement[basis][bit] = expectation(det.zEffect(), *states[basis][bit]);
      t.xMeasurement[basis][bit] = expectation(det.xEffect(), *states[basis][bit]);
    }
  }
  return t;
}

struct Counts {
  std::uint64_t siftedZ = 0, siftedX = 0, errorsZ = 0, errorsX = 0;
};

void run_rounds(const OutcomeTable& t, const SourceSpec& src, const RunConfig& cfg,
                std::uint64_t begin, std::uint64_t end, Counts& c) {
  for (std::uint64_t round = begin; round < end; ++round) {
    SplitMix64 rng = SplitMix64::substream(cfg.seed, round);
    const bool aliceZ = rng.uniform() < cfg.basisProbZ;
    const bool bobZ = rng.uniform() < cfg.basisProbZ;
    const double bitDraw = rng.uniform();
    const double outcomeDraw = rng.uniform();
    if (aliceZ != bobZ) continue;
    const int basis = aliceZ ? 0 : 1;
    const int bit = bitDraw < (aliceZ ? src.pZ() : 0.5) ? 0 : 1;
    const double p0 = aliceZ ? t.zMeasurement[basis][bit] : t.xMeasurement[basis][bit];
    const int outcome = outcomeDraw < p0 ? 0 : 1;
    if (aliceZ) {
      ++c.siftedZ;
      c.errorsZ += outcome != bit ? 1 : 0;
    } else {
      ++c.siftedX;
      c.errorsX += outcome != bit ? 1 : 0;
    }
  }
}

}  // namespace

DetectorSpec::DetectorSpec(ComplexMatrix zEffect, ComplexMatrix xEffect)
    : zEffect_(std::move(zEffect)), xEffect_(std::move(xEffect)) {
  validate_effect(zEffect_, "z effect");
  validate_effect(xEffect_, "x effect");
  if (zEffect_.rows() != xEffect_.rows()) {
    throw DimensionError("z and x effects act on different spaces");
  }
}

DetectorSpec matched_detector(const SourceSpec& src, const AttackIsometry& attack) {
  const AttackedSource s = apply_attack(src, attack);
  const double p = src.pZ();
  return DetectorSpec(positive_part_projector(p * s.rhoB - (1.0 - p) * s.rhoPrimeB),
                      positive_part_projector(0.5 * (s.sigmaB - s.sigmaPrimeB)));
}

ErrorRates theoretical_rates(const SourceSpec& src, const AttackIsometry& attack,
                             const DetectorSpec& det) {
  const OutcomeTable t = outcome_table(src, attack, det);
  const double p = src.pZ();
  return {p * (1.0 - t.zMeasurement[0][0]) + (1.0 - p) * t.zMeasurement[0][1],
          0.5 * (1.0 - t.xMeasurement[1][0]) + 0.5 * t.xMeasurement[1][1]};
}

RunResult simulate(const SourceSpec& src, const AttackIsometry& attack, const DetectorSpec& det,
                   const RunConfig& cfg) {
  if (cfg.rounds < 1) throw DomainError("a run needs at least one round");
  if (!(cfg.basisProbZ > 0.0 && cfg.basisProbZ < 1.0)) {
    throw DomainError("basisProbZ must lie strictly between 0 and 1");
  }
  const OutcomeTable table = outcome_table(src, attack, det);

  const auto workers = static_cast<std::uint64_t>(
      std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(1, cfg.threads)), 1, cfg.rounds));
  std::vector<Counts> partial(workers);
  const std::uint64_t chunk = (cfg.rounds + workers - 1) / workers;
  if (workers == 1) {
    run_rounds(table, src, cfg, 0, cfg.rounds, partial[0]);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min(cfg.rounds, w * chunk);
      const std::uint64_t end = std::min(cfg.rounds, begin + chunk);
      pool.emplace_back([&, w, begin, end] { run_rounds(table, src, cfg, begin, end, partial[w]); });
    }
    for (auto& t : pool) t.join();
  }

  RunResult out;
  out.rounds = cfg.rounds;
  for (const Counts& c : partial) {
    out.siftedZ += c.siftedZ;
    out.siftedX += c.siftedX;
    out.errorsZ += c.errorsZ;
    out.errorsX += c.errorsX;
  }
  if (out.siftedZ > 0) {
    out.empiricalDeltaZ = static_cast<double>(out.errorsZ) / static_cast<double>(out.siftedZ);
  }
  if (out.siftedX > 0) {
    out.empiricalDeltaX = static_cast<double>(out.errorsX) / static_cast<double>(out.siftedX);
  }
  const OverlapCharacterization theta = compute_theta(src);
  if (theta.applicable()) {
    out.keyrateAtEmpirical = keyrate_arbitrary(
        theta, ObservedStats(out.empiricalDeltaZ, out.empiricalDeltaX), src.epsilon());
  }
  return out;
}

std::string format_decimal(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "rounds,seed,deltaZ,deltaX,rate\n";
  for (const SweepRow& r : rows) {
    out << r.rounds << ',' << r.seed << ',' << format_decimal(r.deltaZ) << ','
        << format_decimal(r.deltaX) << ',';
    if (r.rate) out << format_decimal(*r.rate);
    out << '\n';
  }
  return out.str();
}

}  // namespace qkdlab
