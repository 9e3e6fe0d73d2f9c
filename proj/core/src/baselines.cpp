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

#include "isacee/recovery.hpp"
#include "isacee/solvers.hpp"
#include "solver_detail.hpp"

namespace isacee {

BeamformerSolution baseline_power_min(const SystemConfig& cfg, const ChannelSet& ch, const AlgorithmOptions& opts) {
  cfg.validate();
  opts.validate();
  BeamformerSolution sol;
  const int K = static_cast<int>(ch.h.size());
  sol.W = CMat::Zero(cfg.M, K);
  const detail::SdrResult r = detail::sdr_power_min(cfg, ch, TargetModel::point, opts.sdp);
  IterationRecord rec;
  rec.sdp_iterations = r.iterations;
  rec.objective = -r.power;
  sol.trace.push_back(rec);
  if (r.status == sdp::Status::infeasible) {
    sol.outcome = Outcome::infeasible;
    sol.message = "infeasible scenario: power-minimization relaxation is infeasible";
    return sol;
  }
  if (r.W.empty()) {
    sol.outcome = Outcome::failed;
    sol.message = std::string("power-minimization SDP failed: ") + sdp::to_string(r.status);
    return sol;
  }
  const Recovery rec1 = recover_rank1(r.W, std::nullopt, ch, cfg, TargetModel::point);
  CMat w = rec1.W;
  detail::repair_crb(w, ch, cfg);
  sol.achieved["sdr_power"] = r.power;
  sol.outer_iterations = 1;

  detail::PointProblem pp;
  pp.build = [](sdp::ConeProblem&, const detail::PointVars& v, const CMat&) {
    sdp::LinExpr p;
    for (const auto& Wk : v.W) p -= sdp::trace(Wk);
    return p;
  };
  pp.merit = [](const CMat& x) { return -x.squaredNorm(); };
  pp.violation = [&cfg, &ch](const CMat& x) { return point_violation(x, ch, cfg).max(); };
  pp.repair = [&cfg, &ch](CMat& x) { detail::repair_crb(x, ch, cfg); };

  if (pp.violation(w) <= opts.feas_tol) {
    // The relaxation was tight (or repaired at negligible cost): nothing left to refine.
    sol.W = w;
    sol.outcome = Outcome::converged;
  } else {
    const auto w0 = detail::warm_up(cfg, ch, pp, w, opts, sol);
    if (!w0) return sol;
    OuterLoopState st;
    detail::run_point_loop(cfg, ch, pp, *w0, opts, sol, st);
  }
  detail::fill_achieved(sol, ch, cfg, TargetModel::point);
  sol.achieved["rank_path"] = static_cast<double>(rec1.report.path);
  return sol;
}

BeamformerSolution baseline_sumrate_max(const SystemConfig& cfg, const ChannelSet& ch,
                                        const AlgorithmOptions& opts) {
  cfg.validate();
  opts.validate();
  BeamformerSolution sol;
  const detail::PointProblem pp = detail::eec_point_problem(cfg, ch, false);
  const auto w0 = detail::point_start(cfg, ch, pp, opts, sol);
  if (!w0) {
    sol.W = CMat::Zero(cfg.M, static_cast<int>(ch.h.size()));
    return sol;
  }
  OuterLoopState st;
  detail::run_point_loop(cfg, ch, pp, *w0, opts, sol, st);
  detail::fill_achieved(sol, ch, cfg, TargetModel::point);
  return sol;
}

}  // namespace isacee
