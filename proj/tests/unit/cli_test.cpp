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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

const std::filesystem::path kFixtures = QKDLAB_FIXTURE_DIR;

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;

  json doc() const { return json::parse(out); }
};

Invocation run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"qkdlab"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = qkdlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

std::string exact(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double h(double x) { return -x * std::log2(x) - (1 - x) * std::log2(1 - x); }

TEST(CliTheta, IdealInapplicableAndMalformed) {
  const Invocation ideal = run({"theta", "--source", fixture("ideal_source.json")});
  ASSERT_EQ(ideal.code, 0) << ideal.err;
  EXPECT_NEAR(ideal.doc()["theta"].get<double>(), 1.5707963, 1e-5);
  EXPECT_NEAR(ideal.doc()["qubitAngles"]["phi"].get<double>(), 1.5707963, 1e-6);

  const Invocation same = run({"theta", "--source", fixture("inapplicable_source.json")});
  ASSERT_EQ(same.code, 0) << same.err;
  EXPECT_EQ(same.doc()["theta"], "inapplicable");
  EXPECT_TRUE(same.doc()["qubitAngles"].is_null());

  const Invocation bad = run({"theta", "--source", fixture("malformed_source.json")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_TRUE(bad.out.empty());
  EXPECT_EQ(run({"theta", "--source", fixture("unnormalized_source.json")}).code, 2);
  EXPECT_EQ(run({"theta", "--source", fixture("qutrit_source.json")}).code, 0);
}

TEST(CliKeyrate, Examples) {
  const Invocation clean = run({"keyrate", "--theta", "1.5708", "--dz", "0", "--dx", "0"});
  ASSERT_EQ(clean.code, 0) << clean.err;
  EXPECT_NEAR(clean.doc()["rate"].get<double>(), 1.0, 1e-9);
  const Invocation noisy = run({"keyrate", "--theta", "1.5708", "--dz", "0.05", "--dx", "0.05"});
  EXPECT_NEAR(noisy.doc()["rate"].get<double>(), 0.4271, 2e-4);
  EXPECT_EQ(noisy.doc()["variant"], "arbitrary-theta");

  const double dz = 0.5 * (1 - std::cos(0.2)), dx = 0.5 * (1 - std::cos(0.3));
  const Invocation dim2 = run({"keyrate", "--variant", "qubit-dim2", "--angles", "0.2,0.3,1.1",
                               "--dz", exact(dz), "--dx", exact(dx)});
  ASSERT_EQ(dim2.code, 0) << dim2.err;
  EXPECT_NEAR(dim2.doc()["rate"].get<double>(), 1 - h(dz), 1e-7);

  const Invocation unc = run({"keyrate", "--variant", "uncertainty-comparison", "--theta", "0.7854",
                              "--dz", "0", "--dx", "0"});
  EXPECT_FALSE(unc.doc()["certifying"].get<bool>());
  const Invocation minent = run({"keyrate", "--variant", "minentropy", "--source",
                                 fixture("ideal_source.json"), "--dz", "0.01", "--dx", "0.02"});
  ASSERT_EQ(minent.code, 0) << minent.err;
  EXPECT_EQ(minent.doc()["variant"], "minentropy");
}

TEST(CliKeyrate, UncertifiedAndErrors) {
  const Invocation inapplicable = run({"keyrate", "--source", fixture("inapplicable_source.json"),
                                       "--dz", "0", "--dx", "0"});
  ASSERT_EQ(inapplicable.code, 0);
  EXPECT_TRUE(inapplicable.doc()["rate"].is_null());
  EXPECT_FALSE(inapplicable.doc()["certifying"].get<bool>());
  EXPECT_EQ(run({"keyrate", "--theta", "90deg", "--dz", "0", "--dx", "0"}).code, 2);
  EXPECT_EQ(run({"keyrate", "--theta", "1.0", "--dz", "0", "--dx", "0", "--bogus"}).code, 2);
  EXPECT_EQ(run({"keyrate", "--theta", "1.0", "--dz", "1.5", "--dx", "0"}).code, 2);
  EXPECT_EQ(run({"keyrate", "--variant", "qubit", "--dz", "0", "--dx", "0"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliSweep, HeaderRowsAndMonotoneRates) {
  const Invocation r = run({"sweep", "--theta", "1.2", "--param", "dx", "--from", "0", "--to",
                            "0.3", "--steps", "30", "--dz", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "rounds,seed,deltaZ,deltaX,rate");
  std::vector<double> rates;
  while (std::getline(lines, line)) rates.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  ASSERT_EQ(rates.size(), 31u);
  for (std::size_t i = 1; i < rates.size(); ++i) EXPECT_LE(rates[i], rates[i - 1] + 1e-12);
}

TEST(CliSweep, RoundsThroughSimulation) {
  const Invocation r = run({"sweep", "--param", "rounds", "--from", "1000", "--to", "3000",
                            "--steps", "2", "--source", fixture("tightness_source.json"),
                            "--attack", fixture("cloning_attack.json"), "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\n2000,4,"), std::string::npos) << r.out;
}

TEST(CliAttackEval, Fixtures) {
  const Invocation tight = run({"attack-eval", "--source", fixture("tightness_source.json"),
                                "--attack", fixture("cloning_attack.json")});
  ASSERT_EQ(tight.code, 0) << tight.err;
  const json doc = tight.doc();
  EXPECT_NEAR(doc["diagnostics"]["fE"].get<double>(), 0.5, 1e-12);
  for (const auto& c : doc["bounds"]["checks"]) {
    if (c["name"] == "fidel_theta_bound") EXPECT_NEAR(c["slack"].get<double>(), 0.0, 1e-6);
  }
  const Invocation random = run({"attack-eval", "--source", fixture("ideal_source.json"),
                                 "--attack", fixture("random_attack.json")});
  ASSERT_EQ(random.code, 0) << random.err;
  EXPECT_TRUE(random.doc()["bounds"]["allValidHold"].get<bool>());
  EXPECT_EQ(run({"attack-eval", "--source", fixture("qutrit_source.json"), "--attack",
                 fixture("random_attack.json")})
                .code,
            2);
}

json without_timestamp(json doc) {
  doc.erase("generatedAt");
  return doc;
}

TEST(CliOptimize, ReproducibleModuloTimestamp) {
  const std::initializer_list<std::string> args{
      "optimize", "--source", fixture("ideal_source.json"), "--target", "0.8",
      "--budget", "2000",     "--restarts",                 "4",        "--seed", "7"};
  const Invocation a = run(args);
  const Invocation b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_TRUE(a.doc().contains("generatedAt"));
  EXPECT_EQ(without_timestamp(a.doc()).dump(), without_timestamp(b.doc()).dump());
  EXPECT_NE(a.err.find("optimize"), std::string::npos);
}

TEST(CliBreakZvx, QutritViolatesQubitDoesNot) {
  const Invocation q3 = run({"break-zvx", "--phi", "0.7", "--dimB", "3", "--budget", "20000",
                             "--restarts", "10", "--seed", "2"});
  ASSERT_EQ(q3.code, 0) << q3.err;
  EXPECT_TRUE(q3.doc()["violated"].get<bool>());
  const Invocation q2 = run({"break-zvx", "--phi", "0.7", "--dimB", "2", "--budget", "5000",
                             "--restarts", "5", "--random-samples", "2000"});
  ASSERT_EQ(q2.code, 0) << q2.err;
  EXPECT_FALSE(q2.doc()["violated"].get<bool>());
  EXPECT_EQ(run({"break-zvx", "--phi", "4.0"}).code, 2);
}

TEST(CliSimulate, ReproducibleAndNoiseless) {
  const std::initializer_list<std::string> args{"simulate", "--source", fixture("ideal_source.json"),
                                                "--attack", fixture("identity_attack.json"),
                                                "--rounds", "20000", "--seed", "3"};
  const Invocation a = run(args);
  const Invocation b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(without_timestamp(a.doc()).dump(), without_timestamp(b.doc()).dump());
  EXPECT_EQ(a.doc()["errorsZ"].get<int>(), 0);
  EXPECT_EQ(a.doc()["errorsX"].get<int>(), 0);
  EXPECT_EQ(a.doc()["keyrateLabel"], "asymptotic-at-empirical");
}

}  // namespace
