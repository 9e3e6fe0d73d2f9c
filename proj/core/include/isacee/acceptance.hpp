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

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace isacee {

struct AcceptanceOptions {
  std::set<int> criteria{1, 2, 3, 4, 5, 6, 7, 8};
  int trend_trials = 20;
  int threads = 0;
  // Relative slack for the sweep trends; local solutions carry SCA round-off.
  double trend_tol = 1e-3;
  // Pareto knee: steepest segment slope over the mean slope of the first half.
  double knee_ratio = 3.0;
  std::ostream* log = nullptr;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the selected acceptance criteria; results come back in ascending id order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// "PASS 3 <title>: <detail>"
std::string format_result(const CriterionResult& r);

}  // namespace isacee
