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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qkdlab/attack.hpp"
#include "qkdlab/bounds.hpp"
#include "qkdlab/errors.hpp"
#include "qkdlab/keyrate.hpp"
#include "qkdlab/protocol.hpp"
#include "qkdlab/source.hpp"

namespace qkdlab::cli {

namespace {

using nlohmann::json;

// Reported when a command succeeds but the requested certification does not
// apply; this is a result, not a failure.
struct Uncertified {
  std::string reason;
};

int thread_budget() {
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QKDLAB_THREADS")) {
    char* end = nullptr;
    const long requested = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && requested >= 1) {
      return static_cast<int>(std::min<long>(requested, hw));
    }
  }
  return static_cast<int>(hw);
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

double parse_radians(const std::string& text, const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw ValidationError(std::string(what) + " must be a plain number in radians, got '" + text +
                          "'");
  }
  return value;
}

QubitSourceAngles parse_angles(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(parse_radians(item, "--angles"));
  if (values.size() != 3) throw ValidationError("--angles expects alpha,beta,phi in radians");
  return {values[0], values[1], values[2]};
}

// Only |sin theta| and |cos theta| enter the bounds, so (pi/2, pi) folds onto (0, pi/2].
double fold_theta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw DomainError("--theta must lie in (0, pi) radians");
  }
  return fold_angle(theta);
}

OverlapCharacterization characterization_from_theta(double theta) {
  OverlapCharacterization c;
  c.theta = fold_theta(theta);
  c.delta = std::sqrt(0.5 * (1.0 + std::sin(*c.theta)));
  return c;
}

json angles_json(const QubitSourceAngles& a) {
  return {{"alpha", a.alpha}, {"beta", a.beta}, {"phi", a.phi}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json report_json(const KeyrateReport& r) {
  json inputs = {{"deltaZ", r.inputs.deltaZ},
                 {"deltaX", r.inputs.deltaX},
                 {"epsilon", r.inputs.epsilon},
                 {"delta", optional_json(r.inputs.delta)},
                 {"theta", optional_json(r.inputs.theta)},
                 {"angles", r.inputs.angles ? angles_json(*r.inputs.angles) : json(nullptr)}};
  return {{"variant", std::string(to_string(r.variant))},
          {"rate", r.rate},
          {"fidelityBound", optional_json(r.fidelityBound)},
          {"positive", r.positive},
          {"certifying", r.certifying},
          {"regime", "asymptotic"},
          {"inputs", inputs}};
}

json diagnostics_json(const AttackDiagnostics& d) {
  return {{"dZB", d.dZB},
          {"dXB", optional_json(d.dXB)},
          {"dVB", optional_json(d.dVB)},
          {"zNorm", optional_json(d.zNorm)},
          {"dSigmaB", d.dSigmaB},
          {"fE", d.fE},
          {"dE", d.dE},
          {"condEntropy", d.condEntropy},
          {"gamma", optional_json(d.gamma)}};
}

json bounds_json(const BoundReport& report) {
  json checks = json::array();
  bool allValid = true;
  for (const BoundCheck& c : report.checks) {
    const bool holds = !c.applicable || c.slack >= -1e-9;
    if (c.applicable && c.expectedValid && !holds) allValid = false;
    checks.push_back({{"name", c.name},
                      {"applicable", c.applicable},
                      {"slack", c.applicable ? json(c.slack) : json(nullptr)},
                      {"holds", holds},
                      {"expectedValid", c.expectedValid},
                      {"note", c.note}});
  }
  const double worst = report.worst_valid_slack();
  return {{"checks", checks},
          {"worstValidSlack", std::isfinite(worst) ? json(worst) : json(nullptr)},
          {"allValidHold", allValid}};
}

json matrix_json(const AttackIsometry& attack) { return json::parse(attack_to_json(attack)); }

// Characterization flags shared by keyrate and sweep.
struct RateRequest {
  std::string variant = "arbitrary-theta";
  std::string base = "arbitrary-theta";
  std::string sourcePath;
  std::optional<std::string> theta;
  std::optional<std::string> angles;
  std::optional<double> bias;
  double dz = 0.0;
  double dx = 0.0;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--variant", variant,
                    "arbitrary-theta | qubit | qubit-dim2 | uncertainty-comparison | minentropy")
        ->capture_default_str();
    cmd->add_option("--base", base, "fidelity bound feeding the minentropy variant")
        ->capture_default_str();
    auto* src = cmd->add_option("--source", sourcePath, "source JSON file");
    auto* th = cmd->add_option("--theta", theta, "basis-overlap angle in radians");
    auto* an = cmd->add_option("--angles", angles, "qubit angles alpha,beta,phi in radians");
    src->excludes(th)->excludes(an);
    th->excludes(an);
    cmd->add_option("--bias", bias, "source bias epsilon = 2 pZ - 1 (default: from the source)");
  }

  std::optional<SourceSpec> source() const {
    if (sourcePath.empty()) return std::nullopt;
    return load_source(sourcePath);
  }

  double epsilon(const std::optional<SourceSpec>& src) const {
    if (bias) return *bias;
    return src ? src->epsilon() : 0.0;
  }

  OverlapCharacterization theta_characterization(const std::optional<SourceSpec>& src) const {
    if (theta) return characterization_from_theta(parse_radians(*theta, "--theta"));
    if (src) return compute_theta(*src);
    if (angles) {
      const QubitSourceAngles a = parse_angles(*angles);
      return compute_theta(build_qubit_source(a));
    }
    throw ValidationError("this variant needs --theta, --angles or --source");
  }

  QubitSourceAngles qubit_angles(const std::optional<SourceSpec>& src) const {
    if (angles) return parse_angles(*angles);
    if (src) return extract_qubit_angles(*src);
    throw ValidationError("this variant needs --angles or a qubit --source");
  }

  // Returns the report, or the reason certification is unavailable.
  std::variant<KeyrateReport, Uncertified> evaluate(double deltaZ, double deltaX) const {
    const auto src = source();
    const ObservedStats stats(deltaZ, deltaX);
    const double eps = epsilon(src);
    auto fidelity_variant = [&](const std::string& name) -> KeyrateReport {
      const auto v = parse_keyrate_variant(name);
      if (!v) throw ValidationError("unknown keyrate variant '" + name + "'");
      switch (*v) {
        case KeyrateVariant::ArbitraryTheta:
          return keyrate_arbitrary(theta_characterization(src), stats, eps);
        case KeyrateVariant::Qubit:
          return keyrate_qubit(qubit_angles(src), stats, eps);
        case KeyrateVariant::QubitDim2:
          return keyrate_qubit_dim2(qubit_angles(src), stats, eps);
        case KeyrateVariant::UncertaintyComparison: {
          const auto c = theta_characterization(src);
          if (!c.applicable()) throw CertificationUnavailable("theta is inapplicable");
          return keyrate_uncertainty_comparison(*c.theta, stats);
        }
        case KeyrateVariant::MinEntropy:
          throw ValidationError("--base must name a fidelity-bound variant");
      }
      throw ValidationError("unknown keyrate variant '" + name + "'");
    };
    try {
      if (variant == "minentropy") return keyrate_minentropy(fidelity_variant(base));
      return fidelity_variant(variant);
    } catch (const CertificationUnavailable& e) {
      return Uncertified{e.what()};
    }
  }
};

json uncertified_json(const std::string& variant, const Uncertified& u) {
  return {{"variant", variant},
          {"rate", nullptr},
          {"fidelityBound", nullptr},
          {"positive", false},
          {"certifying", false},
          {"reason", u.reason}};
}

void print(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qkdlab: certified BB84 keyrates for imperfect sources and a collective-attack lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qkdlab 0.1.0");
  std::function<void()> action;
  const int threads = thread_budget();

  // theta
  std::string thetaSource;
  auto* theta = app.add_subcommand("theta", "Delta, theta and qubit angles of a source file");
  theta->add_option("--source", thetaSource, "source JSON file")->required();
  theta->callback([&] {
    action = [&] {
      const SourceSpec src = load_source(thetaSource);
      const OverlapCharacterization c = compute_theta(src);
      json doc = {{"dim", src.dim()},
                  {"pZ", src.pZ()},
                  {"delta", c.delta},
                  {"theta", c.applicable() ? json(*c.theta) : json("inapplicable")},
                  {"applicable", c.applicable()}};
      if (src.epsilon() != 0.0) {
        const OverlapCharacterization folded = compute_bias_folded_theta(src);
        doc["biasFolded"] = {{"delta", folded.delta},
                             {"theta", folded.applicable() ? json(*folded.theta)
                                                           : json("inapplicable")}};
      }
      doc["qubitAngles"] = nullptr;
      if (src.dim() == 2) {
        try {
          doc["qubitAngles"] = angles_json(extract_qubit_angles(src));
        } catch (const DegenerateSourceError& e) {
          doc["qubitAnglesNote"] = e.what();
        }
      }
      print(out, doc);
    };
  });

  // keyrate
  RateRequest rate;
  auto* keyrate = app.add_subcommand("keyrate", "certified asymptotic keyrate for one point");
  rate.add_flags(keyrate);
  keyrate->add_option("--dz", rate.dz, "z-basis error rate")->required();
  keyrate->add_option("--dx", rate.dx, "x-basis error rate")->required();
  keyrate->callback([&] {
    action = [&] {
      const auto result = rate.evaluate(rate.dz, rate.dx);
      if (const auto* r = std::get_if<KeyrateReport>(&result)) {
        print(out, report_json(*r));
      } else {
        print(out, uncertified_json(rate.variant, std::get<Uncertified>(result)));
      }
    };
  });

  // sweep
  RateRequest sweepRate;
  std::string param = "dx";
  double from = 0.0, to = 0.5;
  int steps = 50;
  std::string sweepAttack;
  std::uint64_t sweepSeed = 1;
  auto* sweep = app.add_subcommand("sweep", "keyrate curve as CSV");
  sweepRate.add_flags(sweep);
  sweep->add_option("--param", param, "dx | dz | both | rounds")->capture_default_str();
  sweep->add_option("--from", from)->capture_default_str();
  sweep->add_option("--to", to)->capture_default_str();
  sweep->add_option("--steps", steps, "N intervals, N + 1 rows")->capture_default_str();
  sweep->add_option("--dz", sweepRate.dz, "fixed z error rate")->capture_default_str();
  sweep->add_option("--dx", sweepRate.dx, "fixed x error rate")->capture_default_str();
  sweep->add_option("--attack", sweepAttack, "attack JSON (rounds sweeps)");
  sweep->add_option("--seed", sweepSeed, "simulation seed (rounds sweeps)")->capture_default_str();
  sweep->callback([&] {
    action = [&] {
      if (steps < 1) throw ValidationError("--steps must be >= 1");
      std::vector<SweepRow> rows;
      for (int i = 0; i <= steps; ++i) {
        const double value = from + (to - from) * static_cast<double>(i) / steps;
        SweepRow row;
        if (param == "rounds") {
          if (sweepRate.sourcePath.empty() || sweepAttack.empty()) {
            throw ValidationError("rounds sweeps need --source and --attack");
          }
          const SourceSpec src = load_source(sweepRate.sourcePath);
          const AttackIsometry attack = load_attack(sweepAttack);
          RunConfig cfg;
          cfg.rounds = static_cast<std::uint64_t>(std::max(1.0, std::round(value)));
          cfg.seed = sweepSeed;
          cfg.threads = threads;
          const RunResult r = simulate(src, attack, matched_detector(src, attack), cfg);
          row = {cfg.rounds, sweepSeed, r.empiricalDeltaZ, r.empiricalDeltaX, std::nullopt};
          if (r.keyrateAtEmpirical) row.rate = r.keyrateAtEmpirical->rate;
        } else {
          row.deltaZ = sweepRate.dz;
          row.deltaX = sweepRate.dx;
          if (param == "dx" || param == "both") row.deltaX = value;
          if (param == "dz" || param == "both") row.deltaZ = value;
          if (param != "dx" && param != "dz" && param != "both") {
            throw ValidationError("--param must be dx, dz, both or rounds");
          }
          try {
            const auto result = sweepRate.evaluate(row.deltaZ, row.deltaX);
            if (const auto* r = std::get_if<KeyrateReport>(&result)) row.rate = r->rate;
          } catch (const DomainError&) {
            // Error rates below the source's own floor: the point is left unrated.
          }
        }
        rows.push_back(row);
      }
      out << sweep_csv(rows);
    };
  });

  // attack-eval
  std::string evalSource, evalAttack;
  auto* attackEval = app.add_subcommand("attack-eval", "diagnostics and bound slacks of one attack");
  attackEval->add_option("--source", evalSource, "source JSON file")->required();
  attackEval->add_option("--attack", evalAttack, "attack JSON file")->required();
  attackEval->callback([&] {
    action = [&] {
      const SourceSpec src = load_source(evalSource);
      const AttackIsometry attack = load_attack(evalAttack);
      const AttackDiagnostics d = diagnostics(src, attack);
      print(out, {{"diagnostics", diagnostics_json(d)}, {"bounds", bounds_json(verify_bounds(src, attack))}});
    };
  });

  // optimize
  std::string optSource, objectiveName = "fidelity", saveAttack;
  double target = 0.0;
  SearchOptions search;
  auto* optimize = app.add_subcommand("optimize", "minimize Eve's fidelity or H(Z|E) at a disturbance");
  optimize->add_option("--source", optSource, "source JSON file")->required();
  optimize->add_option("--target", target, "target D(sigma_B, sigma'_B)")->required();
  optimize->add_option("--objective", objectiveName, "fidelity | entropy")->capture_default_str();
  optimize->add_option("--dimB", search.dimB)->capture_default_str();
  optimize->add_option("--dimE", search.dimE)->capture_default_str();
  optimize->add_option("--budget", search.budget, "total objective evaluations")->capture_default_str();
  optimize->add_option("--restarts", search.restarts)->capture_default_str();
  optimize->add_option("--seed", search.seed)->capture_default_str();
  optimize->add_option("--save-attack", saveAttack, "write the best attack to this file");
  optimize->callback([&] {
    action = [&] {
      if (objectiveName != "fidelity" && objectiveName != "entropy") {
        throw ValidationError("--objective must be fidelity or entropy");
      }
      const SourceSpec src = load_source(optSource);
      search.threads = threads;
      err << "optimize: " << search.restarts << " restarts, budget " << search.budget << '\n';
      const SearchResult r = objectiveName == "fidelity"
                                 ? minimize_fidelity(src, target, search)
                                 : minimize_conditional_entropy(src, target, search);
      if (!saveAttack.empty()) save_attack(r.attack, saveAttack);
      print(out, {{"objectiveKind", objectiveName},
                  {"target", target},
                  {"seed", search.seed},
                  {"budget", search.budget},
                  {"restarts", search.restarts},
                  {"dimB", search.dimB},
                  {"dimE", search.dimE},
                  {"objective", r.objective},
                  {"constraintResidual", r.constraintResidual},
                  {"feasible", r.feasible},
                  {"evaluations", r.evaluations},
                  {"bestRestart", r.bestRestart},
                  {"diagnostics", diagnostics_json(r.best)},
                  {"bounds", bounds_json(verify_bounds(src, r.attack))},
                  {"attack", matrix_json(r.attack)},
                  {"generatedAt", timestamp()}});
    };
  });

  // break-zvx
  std::string zvxPhi;
  ZvxOptions zvx;
  int controlSamples = 0;
  auto* breakZvx = app.add_subcommand("break-zvx", "search for violations of the dim-2 norm inequality");
  breakZvx->add_option("--phi", zvxPhi, "basis angle in radians")->required();
  breakZvx->add_option("--dimB", zvx.dimB)->capture_default_str();
  breakZvx->add_option("--dimE", zvx.dimE)->capture_default_str();
  breakZvx->add_option("--budget", zvx.budget)->capture_default_str();
  breakZvx->add_option("--restarts", zvx.restarts)->capture_default_str();
  breakZvx->add_option("--seed", zvx.seed)->capture_default_str();
  breakZvx->add_option("--random-samples", controlSamples,
                       "also sweep this many Haar-random attacks")->capture_default_str();
  breakZvx->callback([&] {
    action = [&] {
      const double phi = parse_radians(zvxPhi, "--phi");
      if (!(phi > 0.0 && phi < std::numbers::pi)) throw DomainError("--phi must lie in (0, pi)");
      zvx.threads = threads;
      err << "break-zvx: dimB " << zvx.dimB << ", " << zvx.restarts << " restarts\n";
      ZvxFinding f = break_zvx_search(phi, zvx);
      if (controlSamples > 0) {
        ZvxFinding sweepBest = zvx_random_sweep(phi, zvx.dimB, zvx.dimE, controlSamples, zvx.seed);
        if (sweepBest.margin > f.margin) {
          sweepBest.evaluations += f.evaluations;
          f = std::move(sweepBest);
        } else {
          f.evaluations += controlSamples;
        }
      }
      print(out, {{"phi", phi},
                  {"dimB", f.dimB},
                  {"dimE", f.dimE},
                  {"seed", zvx.seed},
                  {"budget", zvx.budget},
                  {"margin", f.margin},
                  {"violated", f.violated},
                  {"z", f.z},
                  {"x", f.x},
                  {"v", f.v},
                  {"evaluations", f.evaluations},
                  {"attack", matrix_json(f.attack)},
                  {"generatedAt", timestamp()}});
    };
  });

  // simulate
  std::string simSource, simAttack, detector = "matched";
  RunConfig run;
  auto* simulateCmd = app.add_subcommand("simulate", "Monte Carlo BB84 run through a fixed attack");
  simulateCmd->add_option("--source", simSource, "source JSON file")->required();
  simulateCmd->add_option("--attack", simAttack, "attack JSON file")->required();
  simulateCmd->add_option("--rounds", run.rounds)->required();
  simulateCmd->add_option("--seed", run.seed)->capture_default_str();
  simulateCmd->add_option("--basis-prob-z", run.basisProbZ)->capture_default_str();
  simulateCmd->add_option("--detector", detector, "matched | ideal")->capture_default_str();
  simulateCmd->callback([&] {
    action = [&] {
      const SourceSpec src = load_source(simSource);
      const AttackIsometry attack = load_attack(simAttack);
      std::optional<DetectorSpec> det;
      if (detector == "matched") {
        det = matched_detector(src, attack);
      } else if (detector == "ideal") {
        const Index n = attack.label().dimB();
        ComplexMatrix z = ComplexMatrix::Zero(n, n);
        z(0, 0) = 1.0;
        ComplexMatrix x = ComplexMatrix::Zero(n, n);
        if (n >= 2) x.topLeftCorner(2, 2).setConstant(0.5);
        det = DetectorSpec(z, x);
      } else {
        throw ValidationError("--detector must be matched or ideal");
      }
      run.threads = threads;
      err << "simulate: " << run.rounds << " rounds\n";
      const RunResult r = simulate(src, attack, *det, run);
      const ErrorRates exact = theoretical_rates(src, attack, *det);
      print(out, {{"rounds", r.rounds},
                  {"seed", run.seed},
                  {"basisProbZ", run.basisProbZ},
                  {"siftedZ", r.siftedZ},
                  {"siftedX", r.siftedX},
                  {"errorsZ", r.errorsZ},
                  {"errorsX", r.errorsX},
                  {"empiricalDeltaZ", r.empiricalDeltaZ},
                  {"empiricalDeltaX", r.empiricalDeltaX},
                  {"theoreticalDeltaZ", exact.deltaZ},
                  {"theoreticalDeltaX", exact.deltaX},
                  {"keyrateAtEmpirical",
                   r.keyrateAtEmpirical ? report_json(*r.keyrateAtEmpirical) : json(nullptr)},
                  {"keyrateLabel", "asymptotic-at-empirical"},
                  {"generatedAt", timestamp()}});
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const CertificationUnavailable& e) {
    err << "qkdlab: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ParseError& e) {
    err << "qkdlab: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {  // dimension, validation, degenerate source
    err << "qkdlab: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "qkdlab: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "qkdlab: internal numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
}

}  // namespace qkdlab::cli
