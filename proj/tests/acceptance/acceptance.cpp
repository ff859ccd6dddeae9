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

// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// quantity, the tolerance it was judged against and the wall time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qkdlab/attack.hpp"
#include "qkdlab/bounds.hpp"
#include "qkdlab/keyrate.hpp"
#include "qkdlab/protocol.hpp"
#include "qkdlab/random.hpp"
#include "qkdlab/source.hpp"

namespace {

using namespace qkdlab;

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Binary entropy written out independently of the library.
double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

struct Criterion {
  int id;
  const char* title;
  double limitSeconds;
  std::function<Outcome()> body;
};

// ---------------------------------------------------------------------------

Outcome shor_preskill() {
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double d = 0.5 * k / 99.0;
    const double r = keyrate_arbitrary(characterization_from_delta(1.0), ObservedStats(d, d)).rate;
    worst = std::max(worst, std::abs(r - (1.0 - 2.0 * h2(d))));
  }
  return {worst <= 1e-12, fmt("max |r - (1 - 2h(d))| = %.2e over 100 points (tol 1e-12)", worst)};
}

Outcome tightness() {
  double worstD = 0.0, worstF = 0.0, worstSlack = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double theta = kPi / 2 * (i + 1) / 10.0;
    for (int j = 0; j < 10; ++j) {
      const double gamma = theta * j / 9.0;
      const TightnessCase t = build_tightness_attack(theta, gamma);
      const AttackDiagnostics d = diagnostics(t.source, t.attack);
      worstD = std::max(worstD, std::abs(d.dSigmaB - std::abs(std::cos(gamma))));
      worstF = std::max(worstF, std::abs(d.fE - std::abs(std::sin(theta - gamma))));
      worstSlack = std::max(worstSlack, std::abs(d.fE - f_theta(theta, d.dSigmaB)));
    }
  }
  const bool pass = worstD <= 1e-9 && worstF <= 1e-9 && worstSlack <= 1e-9;
  return {pass, fmt("max dev: D %.1e, F %.1e, F - f_theta(D) %.1e (tol 1e-9, 100 pairs)", worstD,
                    worstF, worstSlack)};
}

struct SweepSource {
  SourceSpec spec;
  OverlapCharacterization theta;
  const char* label;
};

std::vector<SweepSource> sweep_sources() {
  std::vector<SweepSource> out;
  for (double pZ : {0.5, 0.7, 0.3}) {
    const SourceSpec s = ideal_bb84_source(pZ);
    out.push_back({s, compute_theta(s), "ideal"});
  }
  SplitMix64 rng(20261016);
  const double pZs[3] = {0.5, 0.7, 0.3};
  for (int k = 0; k < 9; ++k) {
    const QubitSourceAngles a{1.2 * rng.uniform(), 1.2 * rng.uniform(),
                              0.15 + (kPi - 0.3) * rng.uniform()};
    const SourceSpec s = build_qubit_source(a, pZs[k % 3]);
    out.push_back({s, compute_theta(s), "qubit"});
  }
  return out;
}

struct CheckTally {
  const char* name;
  int applicable = 0;
  int violations = 0;
  double worst = kInf;
};

// Shared by criteria 3 and 9.
std::vector<CheckTally> g_sweep;
bool g_sweepDone = false;

Outcome validity_sweep() {
  const auto sources = sweep_sources();
  std::vector<CheckTally> tallies{{"fidel_theta_bound"}, {"fidel_alpha"}, {"ent_fidel"},
                                  {"tr_zx_bound"},       {"zvx_bound"},   {"hmin_relaxation"}};
  int attacks = 0;
  for (int i = 0; i < 10000; ++i) {
    const SweepSource& src = sources[static_cast<std::size_t>(i) % sources.size()];
    const int cell = i / static_cast<int>(sources.size());
    const BipartiteLabel label(2 + cell % 3, 2 + (cell / 3) % 3);
    const AttackIsometry attack =
        AttackIsometry::random(2, label, mix64(static_cast<std::uint64_t>(i) + 1));
    const BoundReport report = verify_bounds(src.spec, attack, src.theta);
    for (auto& t : tallies) {
      const BoundCheck* c = report.find(t.name);
      if (!c || !c->applicable) continue;
      ++t.applicable;
      t.worst = std::min(t.worst, c->slack);
      if (c->slack < -1e-9) ++t.violations;
    }
    ++attacks;
  }
  g_sweep = tallies;
  g_sweepDone = true;
  Outcome out;
  out.pass = true;
  std::string summary;
  for (const auto& t : tallies) {
    if (std::string(t.name) == "hmin_relaxation") continue;
    out.pass = out.pass && t.violations == 0 && t.applicable > 0;
    out.notes.push_back(fmt("%-18s applicable %5d  violations %d  worst slack %+.3e", t.name,
                            t.applicable, t.violations, t.worst));
  }
  out.detail = fmt("%d Haar attacks, 12 qubit sources (pZ in {0.5, 0.7, 0.3}), dimB, dimE in "
                   "{2,3,4}; tol -1e-9",
                   attacks);
  return out;
}

Outcome counterexamples() {
  double bestFid = kInf, bestEnt = kInf;
  std::string fidWitness = "none", entWitness = "none";
  for (double s : {0.2, 0.3, 0.5}) {
    const SourceSpec src = build_qubit_source({std::asin(s), 0.0, kPi / 2});
    SearchOptions o;
    o.budget = 20000;
    o.restarts = 20;
    o.seed = 41;
    for (double target : {0.5, 0.6, 0.7, 0.8, 0.9}) {
      const SearchResult r = minimize_fidelity(src, target, o);
      if (!r.feasible) continue;
      const double gap = r.best.fE - *r.best.dXB;
      if (gap < bestFid) {
        bestFid = gap;
        fidWitness = fmt("sin a=%.1f target %.2f: F=%.5f, X_B/2=%.5f", s, target, r.best.fE,
                         *r.best.dXB);
      }
    }
    SearchOptions e = o;
    e.dimE = 3;
    e.budget = 40000;
    for (double target : {0.95, 0.96, 0.97, 0.98, 0.99, 1.0}) {
      const SearchResult r = minimize_conditional_entropy(src, target, e);
      if (!r.feasible) continue;
      const double naive = 1.0 - h2(0.5 + 0.5 * std::min(1.0, *r.best.dXB));
      const double gap = r.best.condEntropy - naive;
      if (gap < bestEnt) {
        bestEnt = gap;
        entWitness = fmt("sin a=%.1f dimE=3 target %.2f: H=%.5f, 1-h(1/2+X_B/4)=%.5f", s, target,
                         r.best.condEntropy, naive);
      }
    }
  }
  Outcome out;
  out.pass = bestFid < -1e-4 && bestEnt < -1e-4;
  out.detail = fmt("min F - X_B/2 = %+.4e, min H - naive = %+.4e (need < -1e-4, budget <= 4e4 "
                   "per search)",
                   bestFid, bestEnt);
  out.notes = {"fidelity witness: " + fidWitness, "entropy witness:  " + entWitness};
  return out;
}

Outcome zvx_breakage() {
  double best = -kInf;
  std::string witness;
  for (double phi : {0.3, 0.7, 1.0}) {
    ZvxOptions o;
    o.dimB = 3;
    o.dimE = 2;
    o.budget = 100000;
    o.restarts = 20;
    o.seed = 5;
    const ZvxFinding f = break_zvx_search(phi, o);
    if (f.margin > best) {
      best = f.margin;
      witness = fmt("phi=%.1f z=%.4f x=%.4f v=%.4f", phi, f.z, f.x, f.v);
    }
  }
  double control = -kInf;
  int samples = 0;
  for (double phi : {0.3, 0.7, 1.0}) {
    for (Index dimE : {2, 3}) {
      control = std::max(control, zvx_random_sweep(phi, 2, dimE, 10000, 17).margin);
      samples += 10000;
    }
  }
  Outcome out;
  out.pass = best > 1e-4 && control <= 1e-9;
  out.detail = fmt("dimB=3 best margin %+.4e (need > 1e-4); dimB=2 control max %+.3e over %d "
                   "random attacks (need <= 1e-9)",
                   best, control, samples);
  out.notes = {"dimB=3 witness: " + witness};
  return out;
}

Outcome achievability() {
  const SourceSpec src = build_qubit_source({0.0, 0.0, kPi / 3});
  const auto theta = compute_theta(src);
  double worstExcess = -kInf, worstValidity = kInf;
  bool allFeasible = true;
  SearchOptions o;
  o.budget = 20000;
  o.restarts = 20;
  o.seed = 3;
  for (int k = 1; k <= 10; ++k) {
    const double target = 0.1 * k;
    const SearchResult r = minimize_fidelity(src, target, o);
    allFeasible = allFeasible && r.feasible;
    worstExcess = std::max(worstExcess, r.best.fE - f_theta(kPi / 3, target));
    worstValidity = std::min(worstValidity, r.best.fE - f_theta(kPi / 3, r.best.dSigmaB));
  }
  Outcome out;
  out.pass = allFeasible && worstExcess <= 2e-3 && worstValidity >= -1e-9;
  out.detail = fmt("max fE - f_theta(target) = %+.3e (tol 2e-3); all feasible: %s; min fE - "
                   "f_theta(D_B) = %+.2e",
                   worstExcess, allFeasible ? "yes" : "no", worstValidity);
  out.notes = {fmt("computed theta of the source = %.9f (pi/3 = %.9f)", *theta.theta, kPi / 3)};
  return out;
}

Outcome dominance() {
  SplitMix64 rng(7);
  std::vector<QubitSourceAngles> triples;
  for (int t = 0; t < 20; ++t) {
    triples.push_back({1.0 * rng.uniform(), 1.0 * rng.uniform(), 0.2 + (kPi - 0.4) * rng.uniform()});
  }
  int dim2Violations = 0, qubitViolations = 0, compared = 0;
  double dim2Worst = kInf, qubitWorst = kInf;
  QubitSourceAngles qubitWorstAt{};
  int zeroAlphaViolations = 0;
  auto grid = [](double floor, int k) { return floor + (0.5 - floor) * k / 19.0; };
  auto sweep_triple = [&](const QubitSourceAngles& a, bool countMain) {
    const auto theta = compute_theta(build_qubit_source(a));
    const double zFloor = 0.5 * (1 - std::cos(a.alpha)), xFloor = 0.5 * (1 - std::cos(a.beta));
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const ObservedStats s(grid(zFloor, i), grid(xFloor, j));
        const double q = keyrate_qubit(a, s).rate;
        if (countMain) {
          const double gap = keyrate_qubit_dim2(a, s).rate - q;
          dim2Worst = std::min(dim2Worst, gap);
          if (gap < -1e-9) ++dim2Violations;
        }
        if (!theta.applicable()) continue;
        const double gap = q - keyrate_arbitrary(theta, s).rate;
        if (countMain) {
          ++compared;
          if (gap < qubitWorst) {
            qubitWorst = gap;
            qubitWorstAt = a;
          }
          if (gap < -1e-9) ++qubitViolations;
        } else if (gap < -1e-9) {
          ++zeroAlphaViolations;
        }
      }
    }
  };
  for (const auto& a : triples) sweep_triple(a, true);
  for (int t = 0; t < 20; ++t) {
    sweep_triple({0.0, 1.0 * rng.uniform(), 0.2 + (kPi - 0.4) * rng.uniform()}, false);
  }

  int uncViolations = 0;
  double uncWorst = kInf;
  for (int t = 1; t <= 20; ++t) {
    const double phi = kPi / 2 * t / 20.0;
    const auto theta = compute_theta(build_qubit_source({0.0, 0.0, phi}));
    if (!theta.applicable()) continue;
    for (int k = 0; k < 20; ++k) {
      const double d = 0.5 * k / 19.0;
      const ObservedStats s(d, d);
      const double gap = keyrate_arbitrary(theta, s).rate -
                         keyrate_uncertainty_comparison(*theta.theta, s).rate;
      uncWorst = std::min(uncWorst, gap);
      if (gap < -1e-9) ++uncViolations;
    }
  }

  Outcome out;
  out.pass = dim2Violations == 0 && qubitViolations == 0 && uncViolations == 0;
  out.detail = fmt("violations beyond 1e-9: dim2>=qubit %d/8000, qubit>=arbitrary %d/%d, "
                   "arbitrary>=uncertainty %d/400",
                   dim2Violations, qubitViolations, compared, uncViolations);
  out.notes = {
      fmt("dim2 >= qubit: worst gap %+.3e", dim2Worst),
      fmt("qubit >= arbitrary: worst gap %+.4e at (alpha, beta, phi) = (%.3f, %.3f, %.3f)",
          qubitWorst, qubitWorstAt.alpha, qubitWorstAt.beta, qubitWorstAt.phi),
      fmt("qubit >= arbitrary restricted to alpha = 0 (20 extra triples): %d violations",
          zeroAlphaViolations),
      fmt("arbitrary >= uncertainty (basis-independent sources): worst gap %+.3e", uncWorst)};
  return out;
}

Outcome biased_optimum() {
  double worst = 0.0;
  for (double eps : {0.0, 0.2, 0.6}) {
    worst = std::max(worst, std::abs(entropy_bound_from_fidelity(1.0, eps) - h2(0.5 * (1 + eps))));
  }
  return {worst <= 1e-12, fmt("max |bound(F=1, eps) - h((1+eps)/2)| = %.2e (tol 1e-12)", worst)};
}

Outcome minentropy_endpoints() {
  const bool exact = minentropy_rate(0.0) == 1.0 && minentropy_rate(1.0) == 0.0;
  if (!g_sweepDone) validity_sweep();
  const CheckTally& relax = g_sweep.back();
  Outcome out;
  out.pass = exact && relax.violations == 0 && relax.applicable > 0;
  out.detail = fmt("endpoints exact: %s; D <= sqrt(1-F^2) on sweep: %d/%d violations, worst "
                   "slack %+.3e",
                   exact ? "yes" : "no", relax.violations, relax.applicable, relax.worst);
  return out;
}

Outcome monte_carlo() {
  struct Channel {
    const char* name;
    SourceSpec src;
    AttackIsometry attack;
  };
  ComplexMatrix copy = ComplexMatrix::Zero(4, 2);
  copy(0, 0) = 1.0;
  copy(3, 1) = 1.0;
  const TightnessCase tight = build_tightness_attack(kPi / 3, kPi / 6);
  std::vector<Channel> channels{
      {"identity", ideal_bb84_source(), AttackIsometry(ComplexMatrix::Identity(2, 2), BipartiteLabel(2, 1))},
      {"tightness", tight.source, tight.attack},
      {"full-copy", ideal_bb84_source(), AttackIsometry(copy, BipartiteLabel(2, 2))}};
  Outcome out;
  out.pass = true;
  double worstSigmas = 0.0;
  std::uint64_t seed = 1;
  for (const Channel& c : channels) {
    const DetectorSpec det = matched_detector(c.src, c.attack);
    const ErrorRates exact = theoretical_rates(c.src, c.attack, det);
    RunConfig cfg;
    cfg.rounds = 100000;
    cfg.seed = seed++;
    const RunResult r = simulate(c.src, c.attack, det, cfg);
    auto sigmas = [](double emp, double p, std::uint64_t n) {
      const double sd = std::sqrt(p * (1 - p) / static_cast<double>(n));
      if (sd < 1e-12) return std::abs(emp - p) < 1e-12 ? 0.0 : kInf;
      return std::abs(emp - p) / sd;
    };
    const double sz = sigmas(r.empiricalDeltaZ, exact.deltaZ, r.siftedZ);
    const double sx = sigmas(r.empiricalDeltaX, exact.deltaX, r.siftedX);
    worstSigmas = std::max({worstSigmas, sz, sx});
    RunConfig threaded = cfg;
    threaded.threads = 4;
    const bool repeat = simulate(c.src, c.attack, det, cfg) == r &&
                        simulate(c.src, c.attack, det, threaded) == r;
    out.pass = out.pass && sz <= 4.0 && sx <= 4.0 && repeat;
    out.notes.push_back(fmt("%-9s dz %.5f (exact %.5f, %.2f sd)  dx %.5f (exact %.5f, %.2f sd)  "
                            "repeatable %s",
                            c.name, r.empiricalDeltaZ, exact.deltaZ, sz, r.empiricalDeltaX,
                            exact.deltaX, sx, repeat ? "yes" : "no"));
  }
  out.detail = fmt("3 channels at 1e5 rounds: worst deviation %.2f sd (gate 4); same seed and "
                   "1 vs 4 threads bit-identical",
                   worstSigmas);
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Shor-Preskill recovery", 1, shor_preskill},
      {2, "tightness saturation", 5, tightness},
      {3, "bound validity sweep", 300, validity_sweep},
      {4, "counterexamples to the naive conjectures", 600, counterexamples},
      {5, "zvx breakage for dimB > 2", 600, zvx_breakage},
      {6, "achievability tracking", 600, achievability},
      {7, "keyrate dominance", 60, dominance},
      {8, "biased no-error optimum", 1, biased_optimum},
      {9, "min-entropy endpoints", 300, minentropy_endpoints},
      {10, "Monte Carlo consistency", 30, monte_carlo},
  };
  int passed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool inTime = seconds <= c.limitSeconds;
    const bool pass = o.pass && inTime;
    passed += pass ? 1 : 0;
    std::printf("%s  C%-2d %s: %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), seconds, c.limitSeconds, inTime ? "" : ", OVER TIME");
    for (const auto& n : o.notes) std::printf("          %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
