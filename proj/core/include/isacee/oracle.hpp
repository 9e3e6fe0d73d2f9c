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

#include <map>
#include <string>
#include <vector>

#include "isacee/metrics.hpp"
#include "isacee/scenario.hpp"
#include "isacee/types.hpp"

/// Brute-force verifiers. Nothing here calls the steering, metrics or solver code paths.
namespace isacee::oracle {

struct OracleConfig {
  double fd_step = 1e-6;      // radians
  int grid_points = 10000;    // power grid of grid_search_ee
  int samples = 10000;        // random samples for property checks
  double richardson_tol = 1e-3;

  /// Throws std::invalid_argument when fd_step is outside [1e-8, 1e-3].
  void validate() const;
};

struct FisherReport {
  double J = 0.0;            // effective angle information, 1/rad^2 (1/J is the CRB)
  RMat fim;                  // 3x3 FIM over (theta, Re alpha, Im alpha)
  double richardson_gap = 0.0;
  bool stable = true;        // Richardson estimates agree within richardson_tol
};

/// Angle information of Y = alpha A(theta) X + Z, A = a a^H, from central differences of A(theta)
/// with one Richardson step, nuisance alpha eliminated by a Schur complement.
FisherReport fisher_fd(const CMat& Rx, double theta, cplx alpha, const SystemConfig& cfg,
                       const OracleConfig& oc = {});

struct GridResult {
  double power = 0.0;
  double ee = 0.0;
};

/// Single-user EE over a uniform transmit-power grid on (0, Pmax] with the MRT direction;
/// powers whose SINR falls below gamma are skipped.
GridResult grid_search_ee(const SystemConfig& cfg, const ChannelSet& ch, int resolution = 10000);

/// Plain-loop SINR of user k.
double sinr_loop(const CMat& W, const CMat* Rprobe, const std::vector<CVec>& h, int k, double sigma2);

/// Plain-loop EE_C.
double ee_comm_loop(const CMat& W, const CMat* Rprobe, const ChannelSet& ch, const SystemConfig& cfg);

/// sigma_s2 M sum(1/lambda_i) / L from an eigen decomposition.
double crb_extended_eig(const CMat& Rx, const SystemConfig& cfg);

struct AuditEntry {
  double value = 0.0;
  double bound = 0.0;
  double violation = 0.0;  // absolute, >= 0
  double relative = 0.0;   // violation / |bound|
};

struct AuditReport {
  std::map<std::string, AuditEntry> entries;
  double max_relative = 0.0;
  bool pass = false;
};

/// Constraints checked for the problem that produced a solution.
struct AuditSpec {
  TargetModel target = TargetModel::point;
  bool sinr = true;
  bool crb = true;             // rho (point) or tau (extended) when active
  double ees_floor = 0.0;      // EE_S >= ees_floor when positive
  double tolerance = 1e-6;     // on max_relative
};

AuditReport audit_solution(const BeamformerSolution& sol, const SystemConfig& cfg, const ChannelSet& ch,
                           const AuditSpec& spec = {}, const OracleConfig& oc = {});

}  // namespace isacee::oracle
