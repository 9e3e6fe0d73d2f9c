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

#include <vector>

#include "isacee/constraints.hpp"
#include "isacee/solvers.hpp"
#include "solver_detail.hpp"

namespace isacee {

namespace detail {

PointProblem eec_point_problem(const SystemConfig& cfg, const ChannelSet& ch, bool energy) {
  PointProblem pp;
  pp.dinkelbach = energy;
  pp.build = [&cfg, &ch, energy](sdp::ConeProblem& prob, const PointVars& v, const CMat& wbar) {
    const int K = static_cast<int>(ch.h.size());
    std::vector<double> t(static_cast<std::size_t>(K));
    std::vector<double> u0(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      const std::size_t ks = static_cast<std::size_t>(k);
      t[ks] = qt_optimal_t(ch.h[ks], k, wbar, cfg.sigma_c2);
      u0[ks] = qt_argument_value(ch.h[ks], k, t[ks], wbar, cfg.sigma_c2);
    }
    const double lambda = energy ? ee_comm(wbar, ch, cfg) : 0.0;
    return quad_transform_objective(prob, ch.h, t, lambda, v.w, v.W, u0, cfg);
  };
  if (energy) {
    pp.merit = [&cfg, &ch](const CMat& w) { return ee_comm(w, ch, cfg); };
  } else {
    pp.merit = [&cfg, &ch](const CMat& w) { return sum_rate(w, ch, cfg.sigma_c2); };
  }
  pp.fractions = [&cfg, &ch](const CMat& w) {
    return std::make_pair(sum_rate(w, ch, cfg.sigma_c2), consumed_power(w.squaredNorm(), cfg));
  };
  pp.violation = [&cfg, &ch](const CMat& w) { return point_violation(w, ch, cfg).max(); };
  pp.repair = [&cfg, &ch](CMat& w) { repair_crb(w, ch, cfg); };
  return pp;
}

}  // namespace detail

BeamformerSolution solve_eec_point(const SystemConfig& cfg, const ChannelSet& ch, const AlgorithmOptions& opts) {
  cfg.validate();
  opts.validate();
  BeamformerSolution sol;
  const detail::PointProblem pp = detail::eec_point_problem(cfg, ch, true);
  const auto w0 = detail::point_start(cfg, ch, pp, opts, sol);
  if (!w0) {
    sol.W = CMat::Zero(cfg.M, static_cast<int>(ch.h.size()));
    return sol;
  }
  OuterLoopState st;
  detail::run_point_loop(cfg, ch, pp, *w0, opts, sol, st);
  detail::fill_achieved(sol, ch, cfg, TargetModel::point);
  sol.achieved["lambda"] = st.lambda;
  return sol;
}

}  // namespace isacee
