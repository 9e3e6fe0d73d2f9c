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
#include <optional>
#include <string>
#include <vector>

#include "isacee/scenario.hpp"
#include "isacee/types.hpp"

namespace isacee {

enum class Outcome { converged, max_iterations, infeasible, failed };

const char* to_string(Outcome o);

/// One outer iteration of an iterative solver.
struct IterationRecord {
  double objective = 0.0;  // true objective of the accepted iterate (EE_C, EE_S, ...)
  double lambda = 0.0;     // Dinkelbach ratio, or objective for pure SCA loops
  double residual = 0.0;   // Dinkelbach residual f1 - lambda*f2 (0 for SCA loops)
  double numerator = 0.0;  // f1 of the Dinkelbach ratio
  double slack = 0.0;      // sum of penalty slacks in the subproblem
  double penalty = 0.0;    // penalty weight used
  double violation = 0.0;  // max constraint violation of the accepted iterate
  int sdp_iterations = 0;
  bool accepted = true;
};

struct BeamformerSolution {
  CMat W;                        // M x K, columns are w_k
  std::optional<CMat> Rprobe;    // probing covariance (extended target)
  std::vector<IterationRecord> trace;
  std::map<std::string, double> achieved;
  Outcome outcome = Outcome::converged;
  std::string message;
  int outer_iterations = 0;

  /// R_x = W W^H (+ Rprobe).
  CMat covariance() const;
  /// Transmit power sum ||w_k||^2 (+ tr Rprobe).
  double transmit_power() const;
  bool ok() const { return outcome == Outcome::converged || outcome == Outcome::max_iterations; }
};

enum class TargetModel { point, extended };

struct MetricReport {
  std::vector<double> sinr;
  double sum_rate = 0.0;  // bits per channel use
  double P_total = 0.0;   // transmit power, watts
  double ee_c = 0.0;
  double crb = 0.0;
  double ee_s = 0.0;
};

double sinr_k(const CMat& W, const CVec& h_k, int k, double sigma_c2, const CMat* Rprobe = nullptr);

double sum_rate(const CMat& W, const ChannelSet& ch, double sigma_c2, const CMat* Rprobe = nullptr);

/// Power drawn from the supply: P_d / eps + P0.
double consumed_power(double transmit_power, const SystemConfig& cfg);

double ee_comm(const CMat& W, const ChannelSet& ch, const SystemConfig& cfg, const CMat* Rprobe = nullptr);

/// Angle Fisher functional of a covariance (CRB = sigma_s2 / (2 L |alpha|^2 F)).
double fisher_functional(const CMat& Rx, double theta);

/// Point-target angle CRB of R_x; +infinity when the Fisher term vanishes.
double crb_point_cov(const CMat& Rx, double theta, cplx alpha, const SystemConfig& cfg);
double crb_point(const CMat& W, double theta, cplx alpha, const SystemConfig& cfg, const CMat* Rprobe = nullptr);

/// sigma_s2 * M * tr(R_x^{-1}) / L. Throws std::domain_error when R_x is singular.
double crb_extended(const CMat& Rx, const SystemConfig& cfg);

double ee_sense(double crb_value, const CMat& W, const CMat* Rprobe, const SystemConfig& cfg);

MetricReport evaluate(const CMat& W, const CMat* Rprobe, const ChannelSet& ch, const SystemConfig& cfg,
                      TargetModel target);

}  // namespace isacee
