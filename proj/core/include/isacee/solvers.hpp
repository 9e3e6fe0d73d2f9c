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

#include <optional>
#include <string>
#include <vector>

#include "isacee/constraints.hpp"
#include "isacee/metrics.hpp"
#include "isacee/scenario.hpp"
#include "isacee/sdp.hpp"

namespace isacee {

enum class InitStrategy {
  sdr,   // power-minimizing SDR followed by per-user rank-one projection
  rzf,   // regularized zero forcing with equal power split
  given  // AlgorithmOptions::initial_W (and initial_R for the extended target)
};

/// Penalty schedule for the softened rank-one cuts.
struct PenaltyOptions {
  double p_init = 1.0;
  double growth = 5.0;
  int rounds = 10;          // warm-up rounds before declaring a scenario infeasible
  double slack_tol = 1e-6;  // warm-up stops when the slack sum drops below this
  double p_min = 1e-4;
  int max_rejects = 8;      // consecutive rejected candidates before the loop stops
};

struct AlgorithmOptions {
  double delta = 1e-4;
  int max_outer = 50;
  InitStrategy init = InitStrategy::sdr;
  std::optional<CMat> initial_W;
  std::optional<CMat> initial_R;
  PenaltyOptions penalty;
  sdp::SolveOptions sdp;
  double feas_tol = 1e-6;  // relative violation accepted by the feasibility audit

  /// Throws std::invalid_argument when delta <= 0 or max_outer < 1.
  void validate() const;
};

enum class StopReason { none, residual, objective_change, stalled, max_outer, infeasible, solver_failure };

const char* to_string(StopReason r);

/// Bookkeeping of one outer loop.
struct OuterLoopState {
  int i = 0;
  double lambda = 0.0;
  std::vector<double> t;
  std::vector<double> b;
  LinearizationPoint lp;
  std::vector<double> history;
  StopReason stop = StopReason::none;
};

/// Communication-centric EE, point target: Dinkelbach + quadratic transform + rank-one cut SCA.
BeamformerSolution solve_eec_point(const SystemConfig& cfg, const ChannelSet& ch, const AlgorithmOptions& opts = {});

/// Communication-centric EE, extended target: Dinkelbach + log-ratio MM over (W_k, R), then rank-one recovery.
BeamformerSolution solve_eec_extended(const SystemConfig& cfg, const ChannelSet& ch,
                                      const AlgorithmOptions& opts = {});

/// Sensing-centric EE, point target: epigraph chain with SCA cuts.
BeamformerSolution solve_ees_point(const SystemConfig& cfg, const ChannelSet& ch, const AlgorithmOptions& opts = {});

/// Sensing-centric EE, extended target: log-linearized product of power and tr(R_x^{-1}).
BeamformerSolution solve_ees_extended(const SystemConfig& cfg, const ChannelSet& ch,
                                      const AlgorithmOptions& opts = {});

struct ParetoOptions {
  AlgorithmOptions algo;
  /// Keep the SINR and CRB constraints of the communication problem (off: EE_S and power only).
  bool keep_qos = false;
  /// Starting point; when empty the sensing optimum is computed and used.
  std::optional<CMat> start;
};

struct ParetoPoint {
  double E = 0.0;
  bool feasible = false;
  double ee_c = 0.0;
  double ee_s = 0.0;
  BeamformerSolution solution;
};

/// Maximizes EE_C subject to EE_S >= E for every E of the ascending grid.
std::vector<ParetoPoint> solve_pareto_point(const SystemConfig& cfg, const ChannelSet& ch,
                                            const std::vector<double>& E_grid, const ParetoOptions& opts = {});

/// Minimum transmit power subject to SINR, power and CRB constraints.
BeamformerSolution baseline_power_min(const SystemConfig& cfg, const ChannelSet& ch,
                                      const AlgorithmOptions& opts = {});

/// Maximum sum rate under the same constraints (the EE loop with lambda = 0).
BeamformerSolution baseline_sumrate_max(const SystemConfig& cfg, const ChannelSet& ch,
                                        const AlgorithmOptions& opts = {});

/// Relative constraint violations of a rank-one point-target design.
struct PointViolation {
  double sinr = 0.0;   // max_k (gamma_k - SINR_k) / gamma_k
  double power = 0.0;  // (P - Pmax) / Pmax
  double crb = 0.0;    // (CRB - rho^2) / rho^2
  double max() const;
};

PointViolation point_violation(const CMat& W, const ChannelSet& ch, const SystemConfig& cfg);

}  // namespace isacee
