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
#include <stdexcept>
#include <vector>

#include "isacee/constraints.hpp"
#include "isacee/recovery.hpp"
#include "isacee/solvers.hpp"
#include "solver_detail.hpp"

namespace isacee {

namespace {

struct ParetoContext {
  const SystemConfig& cfg;
  const ChannelSet& ch;
  double E;
  bool keep_qos;
};

double ees_violation(const CMat& w, const ParetoContext& c) {
  if (!(c.E > 0.0)) return 0.0;
  return std::max(0.0, (c.E - detail::ees_point_value(w, c.ch, c.cfg)) / c.E);
}

double pareto_violation(const CMat& w, const ParetoContext& c) {
  const PointViolation v = point_violation(w, c.ch, c.cfg);
  const double base = c.keep_qos ? v.max() : v.power;
  return std::max(base, ees_violation(w, c));
}

/// Scale up until EE_S >= E (EE_S grows with a common scale factor) if the budget allows.
void repair_ees(CMat& w, const ParetoContext& c) {
  if (!(c.E > 0.0) || ees_violation(w, c) == 0.0) return;
  const double F = fisher_functional(w * w.adjoint(), c.ch.theta);
  const double k = c.E * crb_scale(c.cfg, c.ch.alpha) * c.cfg.L;
  const double P = w.squaredNorm();
  const double den = F - k * P / c.cfg.eps_pa;
  if (!(den > 0.0) || !(P > 0.0)) return;
  // F and P both scale with s^2: need s^2 (F - k P / eps) >= k P0.
  const double need = k * c.cfg.P0 / den * (1.0 + 1e-9);
  if (need <= 1.0 || need * P > c.cfg.Pmax) return;
  w *= std::sqrt(need);
}

detail::PointProblem pareto_problem(const ParetoContext& c) {
  detail::PointProblem pp;
  pp.sinr_sdr = c.keep_qos;
  pp.sinr_soc = c.keep_qos;
  pp.crb_fixed = c.keep_qos;
  pp.dinkelbach = true;
  pp.build = [c](sdp::ConeProblem& prob, const detail::PointVars& v, const CMat& wbar) {
    const SystemConfig& cfg = c.cfg;
    const int K = static_cast<int>(c.ch.h.size());
    const double ln2 = std::log(2.0);
    const double lambda = ee_comm(wbar, c.ch, cfg);
    sdp::LinExpr power;
    for (const auto& Wk : v.W) power += sdp::trace(Wk);
    sdp::LinExpr obj;
    for (int k = 0; k < K; ++k) {
      const std::size_t ks = static_cast<std::size_t>(k);
      const CVec& h = c.ch.h[ks];
      const Eigen::RowVectorXcd g = h.adjoint() * wbar;
      const double total = cfg.sigma_c2 + g.squaredNorm();
      const double b = sinr_k(wbar, h, k, cfg.sigma_c2);
      const double t = std::sqrt(1.0 + b) * g(k).real() / total;
      // ln(1 + b) - b + 2 t sqrt(1 + b) Re(h^H w_k) - t^2 (sigma^2 + sum_j tr(Q_k W_j)), in bits.
      sdp::LinExpr term(std::log1p(b) - b - t * t * cfg.sigma_c2);
      term += sdp::inner(h, v.w[ks]).re * (2.0 * t * std::sqrt(1.0 + b));
      for (int j = 0; j < K; ++j) term -= sdp::quad_form(h, v.W[static_cast<std::size_t>(j)], h).re * (t * t);
      obj += term * (1.0 / ln2);
    }
    obj -= lambda * (power * (1.0 / cfg.eps_pa) + sdp::LinExpr(cfg.P0));
    if (c.E > 0.0) {
      const double k = c.E * crb_scale(cfg, c.ch.alpha) * cfg.L;
      prob.add_lmi(crb_schur_block(v.W, c.ch.theta, (power * (1.0 / cfg.eps_pa) + sdp::LinExpr(cfg.P0)) * k));
    }
    return obj;
  };
  pp.merit = [c](const CMat& w) { return ee_comm(w, c.ch, c.cfg); };
  pp.fractions = [c](const CMat& w) {
    return std::make_pair(sum_rate(w, c.ch, c.cfg.sigma_c2), consumed_power(w.squaredNorm(), c.cfg));
  };
  pp.violation = [c](const CMat& w) { return pareto_violation(w, c); };
  pp.repair = [c](CMat& w) {
    if (c.keep_qos) detail::repair_crb(w, c.ch, c.cfg);
    repair_ees(w, c);
  };
  return pp;
}

}  // namespace

std::vector<ParetoPoint> solve_pareto_point(const SystemConfig& cfg, const ChannelSet& ch,
                                            const std::vector<double>& E_grid, const ParetoOptions& opts) {
  cfg.validate();
  opts.algo.validate();
  if (!std::is_sorted(E_grid.begin(), E_grid.end())) throw std::invalid_argument("E_grid must be ascending");
  const int K = static_cast<int>(ch.h.size());

  // Sensing optimum: the most sensing-efficient start available to every threshold.
  std::optional<CMat> sensing_start = opts.start;
  if (!sensing_start) {
    const BeamformerSolution s = solve_ees_point(cfg, ch, opts.algo);
    if (s.ok()) sensing_start = s.W;
  }

  std::vector<ParetoPoint> out;
  for (double E : E_grid) {
    ParetoPoint pt;
    pt.E = E;
    pt.solution.W = CMat::Zero(cfg.M, K);
    const ParetoContext ctx{cfg, ch, E, opts.keep_qos};
    const detail::PointProblem pp = pareto_problem(ctx);

    std::optional<CMat> w0;
    const detail::SdrResult r = detail::sdr_power_min(cfg, ch, TargetModel::point, opts.algo.sdp);
    if (!r.W.empty()) {
      CMat w = detail::project_rank1(r.W, ch, 0.1 * cfg.Pmax / K);
      if (w.squaredNorm() < 0.1 * cfg.Pmax) w *= std::sqrt(0.1 * cfg.Pmax / w.squaredNorm());
      pp.repair(w);
      if (pp.violation(w) <= opts.algo.feas_tol) w0 = w;
    }
    if (!w0 && sensing_start && pp.violation(*sensing_start) <= opts.algo.feas_tol) w0 = sensing_start;
    if (!w0) {
      AlgorithmOptions ao = opts.algo;
      ao.init = InitStrategy::given;
      ao.initial_W = sensing_start ? *sensing_start : detail::rzf_directions(cfg, ch);
      w0 = detail::point_start(cfg, ch, pp, ao, pt.solution);
    }
    if (!w0) {
      pt.feasible = false;
      if (pt.solution.outcome != Outcome::failed) pt.solution.outcome = Outcome::infeasible;
      if (pt.solution.message.empty()) pt.solution.message = "EE_S threshold not attainable";
      out.push_back(std::move(pt));
      continue;
    }
    OuterLoopState st;
    detail::run_point_loop(cfg, ch, pp, *w0, opts.algo, pt.solution, st);
    detail::fill_achieved(pt.solution, ch, cfg, TargetModel::point);
    pt.solution.achieved["E"] = E;
    pt.solution.achieved["lambda"] = st.lambda;
    pt.feasible = pt.solution.ok() && pp.violation(pt.solution.W) <= opts.algo.feas_tol;
    pt.ee_c = pt.solution.achieved["ee_c"];
    pt.ee_s = pt.solution.achieved["ee_s"];
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace isacee
