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

#include <algorithm>
#include <cmath>
#include <string>

#include "isacee/constraints.hpp"
#include "isacee/solvers.hpp"
#include "solver_detail.hpp"

namespace isacee {

namespace detail {

double ees_point_value(const CMat& w, const ChannelSet& ch, const SystemConfig& cfg) {
  const double c = crb_point(w, ch.theta, ch.alpha, cfg);
  return std::isfinite(c) ? ee_sense(c, w, nullptr, cfg) : 0.0;
}

PointProblem ees_point_problem(const SystemConfig& cfg, const ChannelSet& ch) {
  PointProblem pp;
  pp.sinr_sdr = false;
  pp.sinr_soc = false;
  pp.build = [&cfg, &ch](sdp::ConeProblem& prob, const PointVars& v, const CMat& wbar) {
    const int K = static_cast<int>(ch.h.size());
    LinearizationPoint lp;
    for (int k = 0; k < K; ++k) lp.w_prev.push_back(wbar.col(k));
    // Auxiliaries are normalized so that the expansion point sits at zeta = phi = 1.
    const double scale = M_PI * M_PI * cfg.M * cfg.M * wbar.squaredNorm();
    const double fisher_ref = std::max(fisher_functional(wbar * wbar.adjoint(), ch.theta), 1e-12 * scale);
    const double power_ref = consumed_power(wbar.squaredNorm(), cfg);
    lp.scalars_prev["zeta"] = 1.0;
    lp.scalars_prev["phi"] = 1.0;
    const Eigen::MatrixXcd G = [&] {
      Eigen::MatrixXcd g(K, K);
      for (int k = 0; k < K; ++k) g.row(k) = ch.h[static_cast<std::size_t>(k)].adjoint() * wbar;
      return g;
    }();
    for (int k = 0; k < K; ++k) {
      double psi = cfg.sigma_c2;
      for (int j = 0; j < K; ++j) {
        if (j != k) psi += std::norm(G(k, j));
      }
      lp.scalars_prev["tau" + std::to_string(k)] = G(k, k).real();
      lp.scalars_prev["psi" + std::to_string(k)] = psi;
    }
    const SensingEpigraph g =
        add_epigraph_sensing_point(prob, v.W, v.w, lp, ch.h, ch.theta, fisher_ref, power_ref, cfg);
    return sdp::LinExpr::variable(g.omega);
  };
  pp.merit = [&cfg, &ch](const CMat& w) { return ees_point_value(w, ch, cfg); };
  pp.violation = [&cfg, &ch](const CMat& w) { return point_violation(w, ch, cfg).max(); };
  pp.repair = [&cfg, &ch](CMat& w) { repair_crb(w, ch, cfg); };
  return pp;
}

}  // namespace detail

BeamformerSolution solve_ees_point(const SystemConfig& cfg, const ChannelSet& ch, const AlgorithmOptions& opts) {
  cfg.validate();
  opts.validate();
  BeamformerSolution sol;
  const detail::PointProblem pp = detail::ees_point_problem(cfg, ch);
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
