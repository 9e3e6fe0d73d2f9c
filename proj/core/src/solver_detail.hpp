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

// Shared machinery of the outer loops. Not installed.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isacee/metrics.hpp"
#include "isacee/sdp.hpp"
#include "isacee/solvers.hpp"

namespace isacee::detail {

struct SdrResult {
  sdp::Status status = sdp::Status::numerical_failure;
  std::vector<CMat> W;
  std::optional<CMat> R;
  double power = 0.0;
  int iterations = 0;
  std::string message;
};

/// min transmit power s.t. SDR SINR, power budget and the target's sensing constraint.
SdrResult sdr_power_min(const SystemConfig& cfg, const ChannelSet& ch, TargetModel target,
                        const sdp::SolveOptions& opts);

/// Columns W_k h_k / sqrt(h_k^H W_k h_k); MRT fallback for vanishing users.
CMat project_rank1(const std::vector<CMat>& W, const ChannelSet& ch, double fallback_power);

CMat rzf_directions(const SystemConfig& cfg, const ChannelSet& ch);

/// Scales W up until the CRB bound holds, if the power budget allows. Returns true if W changed.
bool repair_crb(CMat& W, const ChannelSet& ch, const SystemConfig& cfg);

struct PointVars {
  std::vector<sdp::HermVar> W;
  std::vector<sdp::CVecVar> w;
  std::vector<int> slack;
};

/// One point-target outer loop: subproblem builder, merit and feasibility hooks.
struct PointProblem {
  bool sinr_sdr = true;
  bool sinr_soc = true;
  bool crb_fixed = true;
  bool dinkelbach = false;
  /// Adds the algorithm's variables and constraints around wbar, returns the objective without penalty.
  std::function<sdp::LinExpr(sdp::ConeProblem&, const PointVars&, const CMat& wbar)> build;
  /// True objective, required to be non-decreasing over accepted iterates.
  std::function<double(const CMat&)> merit;
  /// (numerator, denominator) of a Dinkelbach ratio.
  std::function<std::pair<double, double>(const CMat&)> fractions;
  /// Relative violation of every constraint of the problem.
  std::function<double(const CMat&)> violation;
  /// Optional cheap fix applied to each candidate (e.g. scaling).
  std::function<void(CMat&)> repair;
};

struct PointStep {
  sdp::Status status = sdp::Status::numerical_failure;
  bool usable = false;
  CMat w;
  double slack = 0.0;
  int sdp_iterations = 0;
  std::string message;
};

PointStep point_step(const SystemConfig& cfg, const ChannelSet& ch, const PointProblem& pp, const CMat& wbar,
                     double penalty, const sdp::SolveOptions& opts);

/// Penalty warm-up from an infeasible start. Returns a feasible point or nothing.
std::optional<CMat> warm_up(const SystemConfig& cfg, const ChannelSet& ch, const PointProblem& pp, const CMat& w0,
                            const AlgorithmOptions& opts, BeamformerSolution& sol);

/// Accept/reject outer loop from a feasible start. Fills W, trace, outcome.
void run_point_loop(const SystemConfig& cfg, const ChannelSet& ch, const PointProblem& pp, const CMat& w0,
                    const AlgorithmOptions& opts, BeamformerSolution& sol, OuterLoopState& st);

/// Starting point per opts.init, repaired and warmed up as needed. Empty on infeasibility (sol updated).
std::optional<CMat> point_start(const SystemConfig& cfg, const ChannelSet& ch, const PointProblem& pp,
                                const AlgorithmOptions& opts, BeamformerSolution& sol);

/// Rate-over-power loop of the point target; energy = false drops the power term (sum-rate maximization).
PointProblem eec_point_problem(const SystemConfig& cfg, const ChannelSet& ch, bool energy);

/// Sensing-EE epigraph loop of the point target.
PointProblem ees_point_problem(const SystemConfig& cfg, const ChannelSet& ch);

/// Sensing-centric EE of a rank-one point-target design (0 when the CRB is unbounded).
double ees_point_value(const CMat& w, const ChannelSet& ch, const SystemConfig& cfg);

/// Extended-target iterate on the relaxed variables.
struct ExtendedPoint {
  std::vector<CMat> W;
  CMat R;
};

/// Sum rate of a relaxed extended-target point (SINR terms in h^H W h form).
double relaxed_sum_rate(const ExtendedPoint& x, const ChannelSet& ch, const SystemConfig& cfg);
double relaxed_power(const ExtendedPoint& x);
CMat relaxed_covariance(const ExtendedPoint& x);

/// Starting point per opts.init (given or SDR); empty on infeasibility (sol updated).
std::optional<ExtendedPoint> extended_start(const SystemConfig& cfg, const ChannelSet& ch,
                                            const AlgorithmOptions& opts, BeamformerSolution& sol);

/// Rank-one recovery into sol (W, Rprobe) plus diagnostics in sol.achieved.
void finish_extended(const ExtendedPoint& x, const ChannelSet& ch, const SystemConfig& cfg, BeamformerSolution& sol);

/// Fills sol.achieved from metrics.
void fill_achieved(BeamformerSolution& sol, const ChannelSet& ch, const SystemConfig& cfg, TargetModel target);

}  // namespace isacee::detail
