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
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "qkdlab/attack.hpp"
#include "qkdlab/errors.hpp"
#include "qkdlab/optimize.hpp"
#include "qkdlab/random.hpp"

namespace qkdlab {

namespace {

// The penalty weight starts at kPenaltyWeight and is raised in stages so the
// final iterate sits inside the constraint band.
constexpr std::array<double, 4> kPenaltySchedule{kPenaltyWeight, 1e3, 1e5, 1e7};
constexpr double kZvxViolationThreshold = 1e-9;

enum class Target { Fidelity, ConditionalEntropy };

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  const int workers = std::clamp(threads, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<double> random_start(std::size_t n, std::uint64_t seed, int restart) {
  SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(restart));
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

void validate(const SearchOptions& options, double target) {
  if (!(target >= 0.0 && target <= 1.0)) {
    throw DomainError("target disturbance must lie in [0, 1]");
  }
  if (options.dimB < 1 || options.dimE < 1) throw DimensionError("dimB and dimE must be >= 1");
  if (options.restarts < 1 || options.budget < options.restarts) {
    throw DomainError("search needs restarts >= 1 and budget >= restarts");
  }
}

struct Candidate {
  std::vector<double> params;
  double objective = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  int evaluations = 0;

  bool feasible() const { return residual <= kConstraintBand; }
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.feasible() != b.feasible()) return a.feasible();
  if (a.feasible()) return a.objective < b.objective;
  return a.residual < b.residual;
}

Candidate run_restart(const SourceSpec& src, double target, const SearchOptions& options,
                      Target kind, int restart) {
  const BipartiteLabel label(options.dimB, options.dimE);
  const Index d = src.dim();
  const ComplexMatrix betaP = src.beta().projector();
  const ComplexMatrix betaPrimeP = src.betaPrime().projector();
  const ComplexMatrix alphaP = src.alpha().projector();
  const ComplexMatrix alphaPrimeP = src.alphaPrime().projector();

  Candidate best;
  Candidate nearest;  // smallest residual seen, used when nothing is feasible
  int evaluations = 0;

  auto evaluate = [&](std::span<const double> params, double weight) {
    ++evaluations;
    const ComplexMatrix v = AttackIsometry::from_parameters(params, d, label).matrix();
    const ComplexMatrix vh = v.adjoint();
    auto reduce = [&](const ComplexMatrix& p, Subsystem keep) {
      return partial_trace(v * p * vh, label, keep);
    };
    const double dSigma =
        trace_distance(reduce(betaP, Subsystem::B), reduce(betaPrimeP, Subsystem::B));
    const ComplexMatrix rhoE = reduce(alphaP, Subsystem::E);
    const ComplexMatrix rhoPrimeE = reduce(alphaPrimeP, Subsystem::E);
    const double objective = kind == Target::Fidelity
                                 ? fidelity(rhoE, rhoPrimeE)
                                 : conditional_entropy(rhoE, rhoPrimeE, src.pZ());
    const double residual = std::abs(dSigma - target);
    Candidate here;
    here.objective = objective;
    here.residual = residual;
    const bool improves = better(here, best);
    const bool nearer = residual < nearest.residual;
    if (improves || nearer) {
      here.params.assign(params.begin(), params.end());
      if (improves) best = here;
      if (nearer) nearest = here;
    }
    const double excess = std::max(0.0, residual - kConstraintBand);
    return objective + weight * excess * excess;
  };

  const int share = options.budget / options.restarts;
  std::vector<double> point =
      random_start(AttackIsometry::parameter_count(d, label), options.seed, restart);
  for (std::size_t stage = 0; stage < kPenaltySchedule.size(); ++stage) {
    NelderMeadOptions nm;
    nm.maxEvaluations =
        std::max(1, share / static_cast<int>(kPenaltySchedule.size()) - 1);
    nm.initialStep = stage == 0 ? 0.5 : 0.05;
    nm.valueTolerance = 1e-13;
    nm.pointTolerance = 1e-10;
    const double weight = kPenaltySchedule[stage];
    point = nelder_mead([&](std::span<const double> p) { return evaluate(p, weight); }, point, nm)
                .point;
  }
  Candidate out = best.feasible() ? best : nearest;
  out.evaluations = evaluations;
  return out;
}

SearchResult search(const SourceSpec& src, double target, const SearchOptions& options,
                    Target kind) {
  validate(options, target);
  std::vector<Candidate> results(static_cast<std::size_t>(options.restarts));
  parallel_for(options.restarts, options.threads, [&](int r) {
    results[static_cast<std::size_t>(r)] = run_restart(src, target, options, kind, r);
  });
  int chosen = 0;
  int total = 0;
  for (int r = 0; r < options.restarts; ++r) {
    total += results[static_cast<std::size_t>(r)].evaluations;
    if (better(results[static_cast<std::size_t>(r)], results[static_cast<std::size_t>(chosen)])) {
      chosen = r;
    }
  }
  const Candidate& winner = results[static_cast<std::size_t>(chosen)];
  const BipartiteLabel label(options.dimB, options.dimE);
  AttackIsometry attack = AttackIsometry::from_parameters(winner.params, src.dim(), label);
  AttackDiagnostics diag = diagnostics(src, attack);
  SearchResult out{diag, attack};
  out.objective = kind == Target::Fidelity ? diag.fE : diag.condEntropy;
  out.constraintResidual = std::abs(diag.dSigmaB - target);
  out.feasible = out.constraintResidual <= kConstraintBand;
  out.evaluations = total;
  out.bestRestart = chosen;
  return out;
}

ZvxFinding finding_for(double phi, const AttackIsometry& attack, int evaluations) {
  const auto norms = zxv_norms(attack, phi);
  ZvxFinding f{phi,      attack.label().dimB(), attack.label().dimE(), 0.0, norms[0], norms[1],
               norms[2], false,                 evaluations,           attack};
  f.margin = zvx_violation(phi, norms[0], norms[1], norms[2]);
  f.violated = f.margin > kZvxViolationThreshold;
  return f;
}

}  // namespace

SearchResult minimize_fidelity(const SourceSpec& src, double target, const SearchOptions& options) {
  return search(src, target, options, Target::Fidelity);
}

SearchResult minimize_conditional_entropy(const SourceSpec& src, double target,
                                          const SearchOptions& options) {
  return search(src, target, options, Target::ConditionalEntropy);
}

ZvxFinding break_zvx_search(double phi, const ZvxOptions& options) {
  if (options.dimB < 1 || options.dimE < 1) throw DimensionError("dimB and dimE must be >= 1");
  if (options.restarts < 1 || options.budget < options.restarts) {
    throw DomainError("search needs restarts >= 1 and budget >= restarts");
  }
  const BipartiteLabel label(options.dimB, options.dimE);
  struct Outcome {
    std::vector<double> params;
    double margin = -std::numeric_limits<double>::infinity();
    int evaluations = 0;
  };
  std::vector<Outcome> results(static_cast<std::size_t>(options.restarts));
  parallel_for(options.restarts, options.threads, [&](int r) {
    Outcome& out = results[static_cast<std::size_t>(r)];
    NelderMeadOptions nm;
    nm.maxEvaluations = options.budget / options.restarts;
    nm.initialStep = 0.5;
    nm.valueTolerance = 1e-13;
    auto objective = [&](std::span<const double> p) {
      const auto n = zxv_norms(AttackIsometry::from_parameters(p, 2, label), phi);
      return -zvx_violation(phi, n[0], n[1], n[2]);
    };
    const auto res = nelder_mead(objective,
                                 random_start(AttackIsometry::parameter_count(2, label),
                                              options.seed, r),
                                 nm);
    out.params = res.point;
    out.margin = -res.value;
    out.evaluations = res.evaluations;
  });
  int chosen = 0;
  int total = 0;
  for (int r = 0; r < options.restarts; ++r) {
    total += results[static_cast<std::size_t>(r)].evaluations;
    if (results[static_cast<std::size_t>(r)].margin >
        results[static_cast<std::size_t>(chosen)].margin) {
      chosen = r;
    }
  }
  return finding_for(
      phi, AttackIsometry::from_parameters(results[static_cast<std::size_t>(chosen)].params, 2, label),
      total);
}

ZvxFinding zvx_random_sweep(double phi, Index dimB, Index dimE, int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("sweep needs at least one sample");
  const BipartiteLabel label(dimB, dimE);
  std::optional<ZvxFinding> best;
  for (int i = 0; i < samples; ++i) {
    const AttackIsometry attack =
        AttackIsometry::random(2, label, mix64(seed ^ mix64(static_cast<std::uint64_t>(i))));
    ZvxFinding f = finding_for(phi, attack, samples);
    if (!best || f.margin > best->margin) best = std::move(f);
  }
  return *best;
}

}  // namespace qkdlab
