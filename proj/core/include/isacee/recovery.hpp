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

#include "isacee/metrics.hpp"
#include "isacee/scenario.hpp"
#include "isacee/types.hpp"

namespace isacee {

enum class RecoveryPath { already_rank1, closed_form, nullspace, dominant_eigenvector };

const char* to_string(RecoveryPath p);

struct RankReport {
  std::vector<RVec> spectra;       // eigenvalues of each W_k before recovery, descending
  std::vector<int> ranks;          // numeric rank before recovery
  std::vector<double> post_ratio;  // lambda_2 / lambda_1 of each recovered w_k w_k^H
  RecoveryPath path = RecoveryPath::already_rank1;
  double numerator_delta = 0.0;    // max_k |h_k^H W_k h_k - |h_k^H w_k|^2|
  double covariance_delta = 0.0;   // ||sum W_k + R - (sum w w^H + R')||_F
  double objective_delta = 0.0;    // relative EE_C change
};

struct Recovery {
  CMat W;                       // M x K beamformers, phase aligned
  std::optional<CMat> Rprobe;   // updated probing covariance (extended target)
  RankReport report;
};

/// Eigenvalues >= ratio_tol * lambda_max.
/// Hermitian part of X with negative eigenvalues set to zero.
CMat project_psd(const CMat& X);

int numeric_rank(const CMat& W, double ratio_tol = 1e-6);

/// Rotate each column so that h_k^H w_k is real and non-negative.
void align_phases(CMat& W, const std::vector<CVec>& h);

/// Rank-one beamformers from SDR covariances.
///  extended target: W_k h_k h_k^H W_k / (h_k^H W_k h_k) with the residual moved into the probing
///                   covariance, which keeps every SINR term, the power and R_x unchanged;
///  point target, K = 1: the same closed form, residual discarded;
///  point target, K > 1: dominant eigenvector of each W_k.
/// Throws std::domain_error when h_k^H W_k h_k vanishes on a closed-form path.
Recovery recover_rank1(const std::vector<CMat>& W_set, const std::optional<CMat>& Rprobe, const ChannelSet& ch,
                       const SystemConfig& cfg, TargetModel target);

}  // namespace isacee
