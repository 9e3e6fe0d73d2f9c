// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The isacee Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "isacee/experiment.hpp"

using namespace isacee;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("isacee_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

SweepSpec small_spec() {
  SweepSpec s;
  s.algorithm = Algorithm::eec_point;
  s.param = SweepParam::gamma;
  s.grid = {db_to_linear(0.0), db_to_linear(10.0)};
  s.trials = 2;
  s.base = merge(preset("desk"), {{"M", "4"}, {"rho", "inf"}});
  s.threads = 1;
  return s;
}

}  // namespace

TEST(Enums, RoundTrip) {
  for (Algorithm a : {Algorithm::eec_point, Algorithm::eec_extended, Algorithm::ees_point, Algorithm::ees_extended,
                      Algorithm::power_min, Algorithm::sumrate_max, Algorithm::pareto})
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  for (SweepParam p : {SweepParam::rho, SweepParam::gamma, SweepParam::Pmax, SweepParam::E, SweepParam::K})
    EXPECT_EQ(parse_sweep_param(to_string(p)), p);
  EXPECT_THROW(parse_algorithm("nope"), std::invalid_argument);
  EXPECT_THROW(parse_sweep_param("nope"), std::invalid_argument);
}

TEST(SweepSpec, Validate) {
  SweepSpec s = small_spec();
  EXPECT_NO_THROW(s.validate());
  s.grid = {};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.grid = {2.0, 1.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.trials = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_spec();
  s.param = SweepParam::E;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(RunSweep, ShapeAndSummary) {
  const SweepSpec spec = small_spec();
  const SweepResult r = run_sweep(spec);
  ASSERT_EQ(r.rows.size(), 2u);
  ASSERT_EQ(r.trials.size(), 4u);
  for (std::size_t g = 0; g < 2; ++g) {
    double sum = 0.0, feas = 0.0;
    for (int t = 0; t < 2; ++t) {
      const TrialRecord& tr = r.trials[g * 2 + t];
      EXPECT_EQ(tr.trial, t);
      EXPECT_EQ(tr.seed, spec.seed + static_cast<std::uint64_t>(t));
      EXPECT_DOUBLE_EQ(tr.value, spec.grid[g]);
      EXPECT_EQ(tr.seconds, 0.0);
      sum += tr.feasible ? tr.ee_c : 0.0;
      feas += tr.feasible ? 1.0 : 0.0;
    }
    EXPECT_DOUBLE_EQ(r.rows[g].mean_ee_c, sum / 2);
    EXPECT_DOUBLE_EQ(r.rows[g].feasible_fraction, feas / 2);
  }
  EXPECT_FALSE(r.all_infeasible());
}

TEST(RunSweep, SinglePointGridGivesOneRow) {
  SweepSpec spec = small_spec();
  spec.grid = {1.0};
  spec.trials = 1;
  const SweepResult r = run_sweep(spec);
  EXPECT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.trials.size(), 1u);
}

TEST(RunSweep, AllInfeasibleIsReported) {
  SweepSpec spec = small_spec();
  spec.grid = {db_to_linear(80.0)};
  spec.trials = 1;
  const SweepResult r = run_sweep(spec);
  EXPECT_TRUE(r.all_infeasible());
  EXPECT_EQ(r.rows[0].mean_ee_c, 0.0);
}

TEST(Csv, RoundTripIsExact) {
  const fs::path d = scratch_dir("csv");
  const SweepResult r = run_sweep(small_spec());
  write_sweep_csv(r, (d / "s.csv").string(), (d / "t.csv").string());
  const SweepResult back = read_sweep_csv((d / "s.csv").string(), (d / "t.csv").string());
  EXPECT_EQ(back.algorithm, r.algorithm);
  EXPECT_EQ(back.param, r.param);
  ASSERT_EQ(back.rows.size(), r.rows.size());
  ASSERT_EQ(back.trials.size(), r.trials.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].value, r.rows[i].value);
    EXPECT_EQ(back.rows[i].mean_ee_c, r.rows[i].mean_ee_c);
    EXPECT_EQ(back.rows[i].mean_ee_s, r.rows[i].mean_ee_s);
    EXPECT_EQ(back.rows[i].feasible_fraction, r.rows[i].feasible_fraction);
  }
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    EXPECT_EQ(back.trials[i].outcome, r.trials[i].outcome);
    EXPECT_EQ(back.trials[i].ee_c, r.trials[i].ee_c);
    EXPECT_EQ(back.trials[i].crb, r.trials[i].crb);
    EXPECT_EQ(back.trials[i].power, r.trials[i].power);
    EXPECT_EQ(back.trials[i].seed, r.trials[i].seed);
  }
  write_sweep_csv(back, (d / "s2.csv").string(), (d / "t2.csv").string());
  EXPECT_EQ(slurp(d / "s.csv"), slurp(d / "s2.csv"));
  EXPECT_EQ(slurp(d / "t.csv"), slurp(d / "t2.csv"));
  fs::remove_all(d);
}

TEST(Csv, HeadersAreStable) {
  const fs::path d = scratch_dir("hdr");
  SweepSpec spec = small_spec();
  spec.grid = {1.0};
  spec.trials = 1;
  write_sweep_csv(run_sweep(spec), (d / "s.csv").string(), (d / "t.csv").string());
  const std::string s = slurp(d / "s.csv");
  const std::string t = slurp(d / "t.csv");
  EXPECT_EQ(s.substr(0, s.find('\n')),
            "algorithm,param,value,mean_ee_c,mean_ee_s,feasible_fraction,mean_iterations,mean_seconds");
  EXPECT_EQ(t.substr(0, t.find('\n')),
            "algorithm,param,value,trial,seed,outcome,feasible,ee_c,ee_s,power,crb,sum_rate,outer_iterations,"
            "seconds");
  fs::remove_all(d);
}

TEST(Csv, UnwritablePathThrows) {
  const SweepResult r;
  EXPECT_THROW(write_sweep_csv(r, "/nonexistent_dir/x/s.csv", "/nonexistent_dir/x/t.csv"), std::runtime_error);
  EXPECT_THROW(read_sweep_csv("/nonexistent_dir/s.csv", "/nonexistent_dir/t.csv"), std::runtime_error);
}

TEST(Determinism, RepeatedRunsAreByteIdentical) {
  const fs::path d = scratch_dir("det");
  SweepSpec spec = small_spec();
  spec.trials = 1;
  write_sweep_csv(run_sweep(spec), (d / "a_s.csv").string(), (d / "a_t.csv").string());
  write_sweep_csv(run_sweep(spec), (d / "b_s.csv").string(), (d / "b_t.csv").string());
  EXPECT_EQ(slurp(d / "a_s.csv"), slurp(d / "b_s.csv"));
  EXPECT_EQ(slurp(d / "a_t.csv"), slurp(d / "b_t.csv"));
  fs::remove_all(d);
}

TEST(Determinism, ThreadCountDoesNotChangeResults) {
  const fs::path d = scratch_dir("thr");
  SweepSpec spec = small_spec();
  spec.threads = 1;
  write_sweep_csv(run_sweep(spec), (d / "a_s.csv").string(), (d / "a_t.csv").string());
  spec.threads = 4;
  write_sweep_csv(run_sweep(spec), (d / "b_s.csv").string(), (d / "b_t.csv").string());
  EXPECT_EQ(slurp(d / "a_s.csv"), slurp(d / "b_s.csv"));
  EXPECT_EQ(slurp(d / "a_t.csv"), slurp(d / "b_t.csv"));
  fs::remove_all(d);
}

TEST(Pareto, RelativeGridRuns) {
  SweepSpec spec;
  spec.algorithm = Algorithm::pareto;
  spec.param = SweepParam::E;
  spec.grid = {0.0, 0.5, 1.0};
  spec.trials = 1;
  spec.base = preset("desk");
  spec.threads = 1;
  const SweepResult r = run_pareto(spec);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_DOUBLE_EQ(r.rows[0].feasible_fraction, 1.0);
  EXPECT_GE(r.rows[0].mean_ee_c, r.rows[1].mean_ee_c * (1 - 1e-3));
  EXPECT_GE(r.rows[1].mean_ee_c, r.rows[2].mean_ee_c * (1 - 1e-3));
}

TEST(Svg, WritesAWellFormedDocument) {
  const fs::path d = scratch_dir("svg");
  write_svg((d / "p.svg").string(), "title", "x", "y",
            {{"a", {0.0, 1.0, 2.0}, {1.0, 3.0, 2.0}}, {"b", {0.0, 2.0}, {0.5, 0.5}}});
  const std::string s = slurp(d / "p.svg");
  EXPECT_EQ(s.rfind("<svg", 0) == 0 || s.rfind("<?xml", 0) == 0, true);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
  EXPECT_NE(s.find("<polyline"), std::string::npos);
  EXPECT_THROW(write_svg("/nonexistent_dir/p.svg", "t", "x", "y", {}), std::runtime_error);
  fs::remove_all(d);
}
