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
#include <cstdio>
#include <limits>
#include <mutex>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "isacee/sdp.hpp"

namespace isacee::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ent {
  int r;
  int c;
  double v;
};

// One PSD cone of the standard pair
//   (P) min <C,X> s.t. <A_i,X> = b_i, X PSD
//   (D) max b'y   s.t. C - sum_i y_i A_i PSD.
struct Block {
  int n = 0;
  RMat C;
  std::vector<int> vars;
  std::vector<std::vector<Ent>> ents;
};

struct StdForm {
  int m = 0;
  RVec b;
  std::vector<Block> blocks;
};

using Blocks = std::vector<RMat>;

// ---------------------------------------------------------------- conversion

struct Reduced {
  int m = 0;
  std::vector<LinExpr> subst;  // original var -> affine expr in reduced vars
  bool inconsistent = false;
};

// Eliminate e(y) = 0 by Gauss-Jordan with full pivoting.
Reduced eliminate_equalities(const ConeProblem& prob) {
  const int n = prob.num_vars();
  const auto& eqs = prob.eqs();
  Reduced red;
  if (eqs.empty()) {
    red.m = n;
    red.subst.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) red.subst.push_back(LinExpr::variable(i));
    return red;
  }
  const int p = static_cast<int>(eqs.size());
  RMat E = RMat::Zero(p, n);
  RVec g(p);
  for (int k = 0; k < p; ++k) {
    for (const auto& t : eqs[static_cast<std::size_t>(k)].terms()) E(k, t.var) += t.coef;
    g(k) = -eqs[static_cast<std::size_t>(k)].constant();
  }
  std::vector<int> col(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = i;
  const double scale = std::max(1.0, E.cwiseAbs().maxCoeff());
  int rank = 0;
  for (; rank < p; ++rank) {
    Eigen::Index pr = 0, pc = 0;
    const double piv = E.block(rank, rank, p - rank, n - rank).cwiseAbs().maxCoeff(&pr, &pc);
    if (piv <= 1e-12 * scale) break;
    pr += rank;
    pc += rank;
    E.row(rank).swap(E.row(pr));
    std::swap(g(rank), g(pr));
    E.col(rank).swap(E.col(pc));
    std::swap(col[static_cast<std::size_t>(rank)], col[static_cast<std::size_t>(pc)]);
    const double d = E(rank, rank);
    E.row(rank) /= d;
    g(rank) /= d;
    for (int k = 0; k < p; ++k) {
      if (k == rank || E(k, rank) == 0.0) continue;
      const double f = E(k, rank);
      E.row(k) -= f * E.row(rank);
      g(k) -= f * g(rank);
    }
  }
  for (int k = rank; k < p; ++k) {
    if (std::abs(g(k)) > 1e-9 * (1.0 + g.cwiseAbs().maxCoeff())) red.inconsistent = true;
  }
  // Columns [0, rank) are pivots: y_col[k] = g_k - sum_{q >= rank} E(k,q) y_col[q].
  red.m = n - rank;
  red.subst.assign(static_cast<std::size_t>(n), LinExpr());
  for (int q = rank; q < n; ++q) red.subst[static_cast<std::size_t>(col[static_cast<std::size_t>(q)])] = LinExpr::variable(q - rank);
  for (int k = 0; k < rank; ++k) {
    LinExpr e(g(k));
    for (int q = rank; q < n; ++q) {
      if (E(k, q) != 0.0) e.add_term(q - rank, -E(k, q));
    }
    red.subst[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])] = std::move(e);
  }
  return red;
}

struct Converted {
  StdForm sf;
  Reduced red;
  std::vector<int> solver_var;  // reduced var -> solver var or -1 (fixed at 0)
  double obj_const = 0.0;
  bool unbounded = false;
  bool inconsistent = false;
};

Converted convert(const ConeProblem& prob) {
  Converted out;
  out.red = eliminate_equalities(prob);
  out.inconsistent = out.red.inconsistent;
  const int m = out.red.m;

  struct Raw {
    int n;
    std::vector<Triplet> t;
  };
  std::vector<Raw> raw;
  for (const auto& L : prob.lmis()) raw.push_back({L.n, L.entries});
  for (const auto& g : prob.ineqs()) {
    Raw r{1, {}};
    if (g.constant() != 0.0) r.t.push_back({-1, 0, 0, g.constant()});
    for (const auto& t : g.terms()) r.t.push_back({t.var, 0, 0, t.coef});
    raw.push_back(std::move(r));
  }

  // Substitute reduced variables.
  for (auto& r : raw) {
    std::vector<Triplet> t2;
    t2.reserve(r.t.size());
    for (const auto& t : r.t) {
      if (t.var < 0) {
        t2.push_back(t);
        continue;
      }
      const LinExpr& s = out.red.subst[static_cast<std::size_t>(t.var)];
      if (s.constant() != 0.0) t2.push_back({-1, t.r, t.c, t.v * s.constant()});
      for (const auto& term : s.terms()) t2.push_back({term.var, t.r, t.c, t.v * term.coef});
    }
    r.t = std::move(t2);
  }
  RVec bred = RVec::Zero(m);
  out.obj_const = prob.objective().constant();
  for (const auto& t : prob.objective().terms()) {
    const LinExpr& s = out.red.subst[static_cast<std::size_t>(t.var)];
    out.obj_const += t.coef * s.constant();
    for (const auto& term : s.terms()) bred(term.var) += t.coef * term.coef;
  }

  std::vector<char> used(static_cast<std::size_t>(m), 0);
  for (const auto& r : raw) {
    for (const auto& t : r.t) {
      if (t.var >= 0 && t.v != 0.0) used[static_cast<std::size_t>(t.var)] = 1;
    }
  }
  out.solver_var.assign(static_cast<std::size_t>(m), -1);
  int ms = 0;
  for (int i = 0; i < m; ++i) {
    if (used[static_cast<std::size_t>(i)]) {
      out.solver_var[static_cast<std::size_t>(i)] = ms++;
    } else if (bred(i) != 0.0) {
      out.unbounded = true;
    }
  }
  out.sf.m = ms;
  out.sf.b = RVec::Zero(ms);
  for (int i = 0; i < m; ++i) {
    if (out.solver_var[static_cast<std::size_t>(i)] >= 0) out.sf.b(out.solver_var[static_cast<std::size_t>(i)]) = bred(i);
  }

  for (auto& r : raw) {
    Block B;
    B.n = r.n;
    B.C = RMat::Zero(r.n, r.n);
    std::vector<Triplet> terms;
    for (const auto& t : r.t) {
      if (t.var < 0) {
        B.C(t.r, t.c) += t.v;
        if (t.r != t.c) B.C(t.c, t.r) += t.v;
      } else {
        terms.push_back({out.solver_var[static_cast<std::size_t>(t.var)], std::min(t.r, t.c), std::max(t.r, t.c), -t.v});
      }
    }
    std::sort(terms.begin(), terms.end(), [](const Triplet& a, const Triplet& b) {
      if (a.var != b.var) return a.var < b.var;
      if (a.r != b.r) return a.r < b.r;
      return a.c < b.c;
    });
    for (const auto& t : terms) {
      if (B.vars.empty() || B.vars.back() != t.var) {
        B.vars.push_back(t.var);
        B.ents.emplace_back();
      }
      auto& e = B.ents.back();
      if (!e.empty() && e.back().r == t.r && e.back().c == t.c) {
        e.back().v += t.v;
      } else {
        e.push_back({t.r, t.c, t.v});
      }
    }
    // Drop cancelled entries and empty variables.
    std::vector<int> vars;
    std::vector<std::vector<Ent>> ents;
    for (std::size_t i = 0; i < B.vars.size(); ++i) {
      auto& e = B.ents[i];
      e.erase(std::remove_if(e.begin(), e.end(), [](const Ent& x) { return x.v == 0.0; }), e.end());
      if (!e.empty()) {
        vars.push_back(B.vars[i]);
        ents.push_back(std::move(e));
      }
    }
    B.vars = std::move(vars);
    B.ents = std::move(ents);
    out.sf.blocks.push_back(std::move(B));
  }
  return out;
}

// ---------------------------------------------------------------- scaling

struct Scaling {
  std::vector<RVec> D;  // per block congruence
  RVec s;               // per variable
  double c_scale = 1.0;
  double b_scale = 1.0;
};

Scaling equilibrate(StdForm& sf) {
  Scaling sc;
  sc.s = RVec::Ones(sf.m);
  for (const auto& B : sf.blocks) sc.D.push_back(RVec::Ones(B.n));
  for (int pass = 0; pass < 10; ++pass) {
    for (std::size_t j = 0; j < sf.blocks.size(); ++j) {
      Block& B = sf.blocks[j];
      RVec rmax = RVec::Zero(B.n);
      for (const auto& e : B.ents) {
        for (const auto& x : e) {
          rmax(x.r) = std::max(rmax(x.r), std::abs(x.v));
          rmax(x.c) = std::max(rmax(x.c), std::abs(x.v));
        }
      }
      RVec f(B.n);
      for (int r = 0; r < B.n; ++r) f(r) = rmax(r) > 0.0 ? 1.0 / std::sqrt(rmax(r)) : 1.0;
      for (auto& e : B.ents) {
        for (auto& x : e) x.v *= f(x.r) * f(x.c);
      }
      B.C = f.asDiagonal() * B.C * f.asDiagonal();
      sc.D[j] = sc.D[j].cwiseProduct(f);
    }
    RVec cmax = RVec::Zero(sf.m);
    for (const auto& B : sf.blocks) {
      for (std::size_t i = 0; i < B.vars.size(); ++i) {
        for (const auto& x : B.ents[i]) cmax(B.vars[i]) = std::max(cmax(B.vars[i]), std::abs(x.v));
      }
    }
    RVec f(sf.m);
    for (int i = 0; i < sf.m; ++i) f(i) = cmax(i) > 0.0 ? 1.0 / std::sqrt(cmax(i)) : 1.0;
    for (auto& B : sf.blocks) {
      for (std::size_t i = 0; i < B.vars.size(); ++i) {
        for (auto& x : B.ents[i]) x.v *= f(B.vars[i]);
      }
    }
    sc.s = sc.s.cwiseProduct(f);
  }
  sf.b = sf.b.cwiseProduct(sc.s);
  double cm = 0.0;
  for (const auto& B : sf.blocks) cm = std::max(cm, B.C.cwiseAbs().maxCoeff());
  sc.c_scale = cm > 0.0 ? cm : 1.0;
  for (auto& B : sf.blocks) B.C /= sc.c_scale;
  const double bm = sf.m > 0 ? sf.b.cwiseAbs().maxCoeff() : 0.0;
  sc.b_scale = bm > 0.0 ? bm : 1.0;
  sf.b /= sc.b_scale;
  return sc;
}

// ---------------------------------------------------------------- operators

RVec apply_A(const StdForm& sf, const Blocks& X) {
  RVec out = RVec::Zero(sf.m);
  for (std::size_t j = 0; j < sf.blocks.size(); ++j) {
    const Block& B = sf.blocks[j];
    const RMat& Xj = X[j];
    for (std::size_t i = 0; i < B.vars.size(); ++i) {
      double s = 0.0;
      for (const auto& x : B.ents[i]) s += x.v * (x.r == x.c ? Xj(x.r, x.r) : 2.0 * Xj(x.r, x.c));
      out(B.vars[i]) += s;
    }
  }
  return out;
}

Blocks apply_At(const StdForm& sf, const RVec& y) {
  Blocks out;
  out.reserve(sf.blocks.size());
  for (const auto& B : sf.blocks) {
    RMat R = RMat::Zero(B.n, B.n);
    for (std::size_t i = 0; i < B.vars.size(); ++i) {
      const double yi = y(B.vars[i]);
      if (yi == 0.0) continue;
      for (const auto& x : B.ents[i]) {
        R(x.r, x.c) += yi * x.v;
        if (x.r != x.c) R(x.c, x.r) += yi * x.v;
      }
    }
    out.push_back(std::move(R));
  }
  return out;
}

double dot(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j].cwiseProduct(b[j]).sum();
  return s;
}

double fro(const Blocks& a) {
  double s = 0.0;
  for (const auto& x : a) s += x.squaredNorm();
  return std::sqrt(s);
}

inline double tr_EWEW(const Ent& e, const Ent& f, const RMat& W) {
  const int r = e.r, c = e.c, p = f.r, q = f.c;
  if (r != c) {
    if (p != q) return 2.0 * (W(c, p) * W(q, r) + W(c, q) * W(p, r));
    return 2.0 * W(c, p) * W(p, r);
  }
  if (p != q) return 2.0 * W(r, p) * W(r, q);
  return W(r, p) * W(r, p);
}

// M_ij += <A_i, W A_j W> for the variables of one block.
void add_schur(const Block& B, const RMat& W, RMat& M) {
  const std::size_t nv = B.vars.size();
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& Ei = B.ents[i];
    const int gi = B.vars[i];
    for (std::size_t j = i; j < nv; ++j) {
      const auto& Ej = B.ents[j];
      double s = 0.0;
      for (const auto& e : Ei) {
        for (const auto& f : Ej) s += e.v * f.v * tr_EWEW(e, f, W);
      }
      const int gj = B.vars[j];
      M(gi, gj) += s;
      if (i != j) M(gj, gi) += s;
    }
  }
}

RMat sym(const RMat& A) { return 0.5 * (A + A.transpose()); }

// Largest a with X + a*dX PSD given X = L L'.
double max_step(const RMat& L, const RMat& dX) {
  const RMat Li = L.triangularView<Eigen::Lower>().solve(RMat::Identity(L.rows(), L.cols()));
  const RMat B = sym(Li * dX * Li.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(B, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0.0 ? -1.0 / lmin : kInf;
}

struct NT {
  RMat G;   // W = G G'
  RMat Gi;  // G^{-1}
  RMat W;
  RVec d;   // G' S G = G^{-1} X G^{-T} = diag(d)
  RMat Lx;
  RMat Ls;
};

bool nt_scaling(const RMat& X, const RMat& S, NT& nt) {
  Eigen::LLT<RMat> lx(X), ls(S);
  if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return false;
  nt.Lx = lx.matrixL();
  nt.Ls = ls.matrixL();
  Eigen::JacobiSVD<RMat> svd(nt.Ls.transpose() * nt.Lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  nt.d = svd.singularValues();
  if (!(nt.d.minCoeff() > 0.0)) return false;
  const RVec dm = nt.d.cwiseSqrt().cwiseInverse();
  nt.G = nt.Lx * svd.matrixV() * dm.asDiagonal();
  // G^{-1} = D^{-1/2} U' Ls'
  nt.Gi = dm.asDiagonal() * svd.matrixU().transpose() * nt.Ls.transpose();
  nt.W = sym(nt.G * nt.G.transpose());
  return true;
}

struct Direction {
  RVec dy;
  Blocks dX, dS;
  double dtau = 0.0;
  double dkappa = 0.0;
};

}  // namespace

static SolveReport solve_impl(const ConeProblem& prob, const SolveOptions& opts) {
  SolveReport rep;
  Converted cv = convert(prob);
  rep.y = RVec::Zero(prob.num_vars());
  if (cv.inconsistent) {
    rep.status = Status::infeasible;
    rep.message = "inconsistent equality constraints";
    return rep;
  }
  if (cv.unbounded) {
    rep.status = Status::unbounded;
    rep.message = "objective depends on an unconstrained variable";
    return rep;
  }
  StdForm& sf = cv.sf;
  const Scaling sc = equilibrate(sf);
  const int m = sf.m;
  const std::size_t nb = sf.blocks.size();
  int N = 0;
  for (const auto& B : sf.blocks) N += B.n;

  auto finish = [&](const RVec& ys_scaled, const Blocks& Xs_scaled) {
    RVec yred = RVec::Zero(cv.red.m);
    for (int i = 0; i < cv.red.m; ++i) {
      const int s = cv.solver_var[static_cast<std::size_t>(i)];
      if (s >= 0) yred(i) = ys_scaled(s) * sc.s(s) * sc.c_scale;
    }
    for (int i = 0; i < prob.num_vars(); ++i) rep.y(i) = cv.red.subst[static_cast<std::size_t>(i)].eval(yred);
    rep.objective = prob.objective().eval(rep.y);
    rep.Z.clear();
    double pobj = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const RVec& D = sc.D[j];
      RMat Zj = sc.b_scale * D.asDiagonal() * Xs_scaled[j] * D.asDiagonal();
      pobj += sf.blocks[j].C.cwiseProduct(Xs_scaled[j]).sum();
      rep.Z.push_back(std::move(Zj));
    }
    rep.dual_objective = pobj * sc.b_scale * sc.c_scale + cv.obj_const;
  };

  if (m == 0) {
    // Pure feasibility check of constant blocks.
    bool ok = true;
    for (const auto& B : sf.blocks) {
      Eigen::SelfAdjointEigenSolver<RMat> es(B.C, Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) < -opts.tol_feas) ok = false;
    }
    Blocks Xz;
    for (const auto& B : sf.blocks) Xz.push_back(RMat::Zero(B.n, B.n));
    finish(RVec::Zero(0), Xz);
    rep.status = ok ? Status::optimal : Status::infeasible;
    rep.message = ok ? "no free variables" : "constant LMI is not PSD";
    return rep;
  }

  Blocks X, S, C;
  for (const auto& B : sf.blocks) {
    X.push_back(RMat::Identity(B.n, B.n));
    S.push_back(RMat::Identity(B.n, B.n));
    C.push_back(B.C);
  }
  RVec y = RVec::Zero(m);
  double tau = 1.0, kappa = 1.0;
  const RVec& b = sf.b;
  // Residuals are measured in the caller's units, undoing the equilibration.
  auto primal_norm = [&](const RVec& r) { return (r.cwiseQuotient(sc.s) * sc.b_scale).norm(); };
  std::vector<double> c_norm(nb);
  auto block_norm = [&](const RMat& r, std::size_t j) {
    const RVec Di = sc.D[j].cwiseInverse();
    return sc.c_scale * (Di.asDiagonal() * r * Di.asDiagonal()).norm();
  };
  for (std::size_t j = 0; j < nb; ++j) c_norm[j] = block_norm(sf.blocks[j].C, j);
  // Worst block, each relative to its own constant term.
  auto dual_rel = [&](const Blocks& r) {
    double worst = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) worst = std::max(worst, block_norm(r[j], j) / (1.0 + c_norm[j]));
    return worst;
  };
  const double nb_ = primal_norm(b);

  std::vector<NT> nt(nb);
  Blocks Xbest = X;
  RVec ybest = y;
  double best_merit = kInf;
  Kkt best_kkt;

  rep.status = Status::max_iterations;
  int it = 0;
  for (; it <= opts.max_iter; ++it) {
    // Residuals.
    const RVec AX = apply_A(sf, X);
    const Blocks Aty = apply_At(sf, y);
    const RVec rp = b * tau - AX;
    Blocks rd(nb);
    for (std::size_t j = 0; j < nb; ++j) rd[j] = C[j] * tau - Aty[j] - S[j];
    const double cx = dot(C, X);
    const double by = b.dot(y);
    const double rg = by - cx - kappa;
    const double mu = (dot(X, S) + tau * kappa) / (N + 1);

    Kkt k;
    k.primal = primal_norm(rp) / tau / (1.0 + nb_);
    k.dual = dual_rel(rd) / tau;
    k.gap = std::abs(cx - by) / tau / (1.0 + std::abs(cx / tau) + std::abs(by / tau));
    const double merit = std::max({k.primal / opts.tol_feas, k.dual / opts.tol_feas, k.gap / opts.tol_gap});
    if (merit < best_merit) {
      best_merit = merit;
      best_kkt = k;
      ybest = y / tau;
      for (std::size_t j = 0; j < nb; ++j) Xbest[j] = X[j] / tau;
    }
    if (opts.verbose) {
      std::fprintf(stderr, "%3d  pobj % .6e  dobj % .6e  pres %.1e  dres %.1e  gap %.1e  tau %.1e  kap %.1e  mu %.1e\n",
                   it, cx / tau, by / tau, k.primal, k.dual, k.gap, tau, kappa, mu);
    }
    if (k.primal <= opts.tol_feas && k.dual <= opts.tol_feas && k.gap <= opts.tol_gap) {
      rep.status = Status::optimal;
      break;
    }
    if (tau <= kappa) {
      if (cx < 0.0 && AX.norm() / (-cx) <= opts.tol_infeas) {
        rep.status = Status::infeasible;
        rep.message = "dual certificate: A(X) = 0, <C,X> < 0";
        break;
      }
      if (by > 0.0) {
        Blocks r(nb);
        for (std::size_t j = 0; j < nb; ++j) r[j] = Aty[j] + S[j];
        if (fro(r) / by <= opts.tol_infeas) {
          rep.status = Status::unbounded;
          rep.message = "primal ray: A*y <= 0, b'y > 0";
          break;
        }
      }
    }
    if (it == opts.max_iter) break;

    // Scaling and Schur complement.
    bool okscale = true;
    for (std::size_t j = 0; j < nb && okscale; ++j) okscale = nt_scaling(X[j], S[j], nt[j]);
    if (!okscale) {
      rep.status = Status::numerical_failure;
      rep.message = "iterate left the cone";
      break;
    }
    RMat Msc = RMat::Zero(m, m);
    for (std::size_t j = 0; j < nb; ++j) add_schur(sf.blocks[j], nt[j].W, Msc);
    Blocks WCW(nb), WrdW(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      WCW[j] = sym(nt[j].W * C[j] * nt[j].W);
      WrdW[j] = sym(nt[j].W * rd[j] * nt[j].W);
    }
    const RMat Msc0 = Msc;
    const double dmax = Msc.diagonal().cwiseAbs().maxCoeff();
    Eigen::LLT<RMat> llt(Msc);
    if (llt.info() != Eigen::Success) {
      Msc.diagonal().array() += 1e-13 * std::max(dmax, 1.0);
      llt.compute(Msc);
      if (llt.info() != Eigen::Success) {
        rep.status = Status::numerical_failure;
        rep.message = "Schur complement not positive definite";
        break;
      }
    }
    // One step of iterative refinement; the Schur complement is ill-conditioned near the optimum.
    auto schur_solve = [&](const RVec& rhs) {
      RVec x = llt.solve(rhs);
      x += llt.solve(rhs - Msc0 * x);
      return x;
    };
    const RVec a = apply_A(sf, WCW);
    const RVec v = schur_solve(a + b);
    const double cwc = dot(C, WCW);
    const double denom = (b - a).dot(v) + cwc + kappa / tau;

    auto direction = [&](const Blocks& Rc, double rtk, double eta) {
      Direction d;
      Blocks T(nb);
      for (std::size_t j = 0; j < nb; ++j) T[j] = Rc[j] - eta * WrdW[j];
      const RVec u = schur_solve(eta * rp - apply_A(sf, T));
      d.dtau = (-eta * rg + dot(C, T) + rtk / tau - (b - a).dot(u)) / denom;
      d.dy = u + d.dtau * v;
      const Blocks Atdy = apply_At(sf, d.dy);
      d.dS.resize(nb);
      d.dX.resize(nb);
      for (std::size_t j = 0; j < nb; ++j) {
        d.dS[j] = sym(eta * rd[j] + C[j] * d.dtau - Atdy[j]);
        d.dX[j] = sym(Rc[j] - nt[j].W * d.dS[j] * nt[j].W);
      }
      d.dkappa = (rtk - kappa * d.dtau) / tau;
      return d;
    };
    auto step_to_boundary = [&](const Direction& d) {
      double amax = kInf;
      for (std::size_t j = 0; j < nb; ++j) {
        amax = std::min(amax, max_step(nt[j].Lx, d.dX[j]));
        amax = std::min(amax, max_step(nt[j].Ls, d.dS[j]));
      }
      if (d.dtau < 0.0) amax = std::min(amax, -tau / d.dtau);
      if (d.dkappa < 0.0) amax = std::min(amax, -kappa / d.dkappa);
      return amax;
    };

    // Predictor.
    Blocks Rc(nb);
    for (std::size_t j = 0; j < nb; ++j) Rc[j] = -X[j];
    const Direction aff = direction(Rc, -tau * kappa, 1.0);
    const double a_aff = std::min(1.0, step_to_boundary(aff));
    double mu_aff = tau * kappa;
    {
      double s = 0.0;
      for (std::size_t j = 0; j < nb; ++j) s += (X[j] + a_aff * aff.dX[j]).cwiseProduct(S[j] + a_aff * aff.dS[j]).sum();
      mu_aff = (s + (tau + a_aff * aff.dtau) * (kappa + a_aff * aff.dkappa)) / (N + 1);
    }
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t j = 0; j < nb; ++j) {
      const NT& s = nt[j];
      const RMat dXt = s.Gi * aff.dX[j] * s.Gi.transpose();
      const RMat dSt = s.G.transpose() * aff.dS[j] * s.G;
      RMat R = -sym(dXt * dSt);
      R.diagonal() += RVec::Constant(R.rows(), sigma * mu) - s.d.cwiseAbs2();
      RMat Z(R.rows(), R.cols());
      for (Eigen::Index p = 0; p < R.rows(); ++p) {
        for (Eigen::Index q = 0; q < R.cols(); ++q) Z(p, q) = 2.0 * R(p, q) / (s.d(p) + s.d(q));
      }
      Rc[j] = sym(s.G * Z * s.G.transpose());
    }
    const double rtk = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;
    const Direction dir = direction(Rc, rtk, 1.0 - sigma);
    const double amax = step_to_boundary(dir);
    const double alpha = std::min(1.0, 0.98 * amax);
    if (!(alpha > 1e-12) || !std::isfinite(dir.dtau)) {
      rep.status = Status::numerical_failure;
      rep.message = "step length collapsed";
      break;
    }
    y += alpha * dir.dy;
    for (std::size_t j = 0; j < nb; ++j) {
      X[j] = sym(X[j] + alpha * dir.dX[j]);
      S[j] = sym(S[j] + alpha * dir.dS[j]);
    }
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
  }
  rep.iterations = it;

  if (rep.status == Status::infeasible || rep.status == Status::unbounded) {
    rep.kkt = best_kkt;
    Blocks Xs(nb);
    for (std::size_t j = 0; j < nb; ++j) Xs[j] = X[j] / std::max(tau, 1e-300);
    finish(y / std::max(tau, 1e-300), Xs);
    return rep;
  }
  if (rep.status == Status::optimal) {
    Blocks Xs(nb);
    for (std::size_t j = 0; j < nb; ++j) Xs[j] = X[j] / tau;
    finish(y / tau, Xs);
    rep.kkt = best_kkt;
    // The accepted iterate is the one that passed the test.
    const RVec AX = apply_A(sf, Xs);
    rep.kkt.primal = primal_norm(AX - b) / (1.0 + nb_);
    const Blocks Aty = apply_At(sf, y / tau);
    Blocks rd(nb);
    for (std::size_t j = 0; j < nb; ++j) rd[j] = C[j] - Aty[j] - S[j] / tau;
    rep.kkt.dual = dual_rel(rd);
    const double cx = dot(C, Xs), by = b.dot(y / tau);
    rep.kkt.gap = std::abs(cx - by) / (1.0 + std::abs(cx) + std::abs(by));
    return rep;
  }
  finish(ybest, Xbest);
  rep.kkt = best_kkt;
  if (rep.message.empty()) rep.message = "iteration limit reached";
  return rep;
}

namespace {

std::mutex g_stats_mu;
SolveStats g_stats;

}  // namespace

SolveReport solve(const ConeProblem& prob, const SolveOptions& opts) {
  SolveReport rep = solve_impl(prob, opts);
  const std::lock_guard<std::mutex> lock(g_stats_mu);
  ++g_stats.solves;
  if (rep.optimal()) {
    ++g_stats.optimal;
    g_stats.max_primal = std::max(g_stats.max_primal, rep.kkt.primal);
    g_stats.max_dual = std::max(g_stats.max_dual, rep.kkt.dual);
    g_stats.max_gap = std::max(g_stats.max_gap, rep.kkt.gap);
  }
  return rep;
}

SolveStats solve_stats() {
  const std::lock_guard<std::mutex> lock(g_stats_mu);
  return g_stats;
}

void reset_solve_stats() {
  const std::lock_guard<std::mutex> lock(g_stats_mu);
  g_stats = SolveStats{};
}

}  // namespace isacee::sdp
