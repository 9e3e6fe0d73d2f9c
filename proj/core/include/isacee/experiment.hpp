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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isacee/scenario.hpp"
#include "isacee/solvers.hpp"

namespace isacee {

enum class Algorithm { eec_point, eec_extended, ees_point, ees_extended, power_min, sumrate_max, pareto };

enum class SweepParam { rho, gamma, Pmax, E, K };

const char* to_string(Algorithm a);
const char* to_string(SweepParam p);
Algorithm parse_algorithm(const std::string& s);
SweepParam parse_sweep_param(const std::string& s);

/// Grid values are in SI units: rho in radians, gamma linear, Pmax in watts, K a count.
/// For E the values are fractions of each trial's best EE_S when E_relative is set, else absolute.
struct SweepSpec {
  Algorithm algorithm = Algorithm::eec_point;
  SweepParam param = SweepParam::rho;
  std::vector<double> grid;
  int trials = 20;
  RawConfig base;             // full configuration; the swept key is overridden
  std::uint64_t seed = 1;     // trial t uses seed + t
  AlgorithmOptions opts;
  bool keep_qos = false;      // Pareto: keep SINR and CRB constraints
  bool E_relative = true;
  int threads = 0;            // 0: hardware concurrency
  bool record_timing = false; // wall times make the output nondeterministic

  /// Throws std::invalid_argument on an empty or unsorted grid or trials < 1.
  void validate() const;
};

struct TrialRecord {
  double value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string outcome;
  bool feasible = false;
  double ee_c = 0.0;
  double ee_s = 0.0;
  double power = 0.0;
  double crb = 0.0;
  double sum_rate = 0.0;
  int outer_iterations = 0;
  double seconds = 0.0;
};

struct SweepRow {
  double value = 0.0;
  double mean_ee_c = 0.0;  // infeasible trials count as zero
  double mean_ee_s = 0.0;
  double feasible_fraction = 0.0;
  double mean_iterations = 0.0;
  double mean_seconds = 0.0;
};

struct SweepResult {
  Algorithm algorithm = Algorithm::eec_point;
  SweepParam param = SweepParam::rho;
  std::vector<SweepRow> rows;
  std::vector<TrialRecord> trials;  // ordered by (value index, trial)

  bool all_infeasible() const;
};

/// Monte-Carlo sweep; trials run in parallel and merge by index.
SweepResult run_sweep(const SweepSpec& spec);

/// Pareto boundary: per trial, one constrained solve per threshold.
SweepResult run_pareto(const SweepSpec& spec);

/// Summary and per-trial tables. Throws std::runtime_error when a file cannot be written.
void write_sweep_csv(const SweepResult& r, const std::string& summary_path, const std::string& trials_path);
SweepResult read_sweep_csv(const std::string& summary_path, const std::string& trials_path);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static SVG line chart.
void write_svg(const std::string& path, const std::string& title, const std::string& xlabel,
               const std::string& ylabel, const std::vector<Series>& series);

}  // namespace isacee
