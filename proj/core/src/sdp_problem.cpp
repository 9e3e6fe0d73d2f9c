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
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "isacee/sdp.hpp"

namespace isacee::sdp {

int ConeProblem::add_var() { return nvars_++; }

int ConeProblem::add_vars(int count) {
  const int first = nvars_;
  nvars_ += count;
  return first;
}

HermVar ConeProblem::add_herm(int n) {
  HermVar X;
  X.n = n;
  X.re_idx.assign(static_cast<std::size_t>(n) * n, -1);
  X.im_idx.assign(static_cast<std::size_t>(n) * n, -1);
  for (int r = 0; r < n; ++r) {
    X.re_idx[static_cast<std::size_t>(r) * n + r] = add_var();
    for (int c = r + 1; c < n; ++c) {
      X.re_idx[static_cast<std::size_t>(r) * n + c] = add_var();
      X.im_idx[static_cast<std::size_t>(r) * n + c] = add_var();
    }
  }
  return X;
}

HermVar ConeProblem::add_herm_psd(int n) {
  HermVar X = add_herm(n);
  add_lmi(X.block());
  return X;
}

CVecVar ConeProblem::add_cvec(int n) {
  CVecVar x;
  x.n = n;
  x.re0 = add_vars(n);
  x.im0 = add_vars(n);
  return x;
}

void ConeProblem::add_lmi(const SymBlock& F) {
  LmiData d;
  d.n = F.size();
  for (int r = 0; r < d.n; ++r) {
    for (int c = r; c < d.n; ++c) {
      LinExpr e = F(r, c);
      e.compress();
      if (e.constant() != 0.0) d.entries.push_back({-1, r, c, e.constant()});
      for (const auto& t : e.terms()) {
        if (t.var < 0 || t.var >= nvars_) throw std::out_of_range("LMI references an unknown variable");
        d.entries.push_back({t.var, r, c, t.coef});
      }
    }
  }
  lmis_.push_back(std::move(d));
}

void ConeProblem::add_lmi(const HermBlock& H) { add_lmi(H.embed()); }

void ConeProblem::add_ineq(LinExpr e) {
  e.compress();
  ineqs_.push_back(std::move(e));
}

void ConeProblem::add_eq(LinExpr e) {
  e.compress();
  eqs_.push_back(std::move(e));
}

void ConeProblem::maximize(LinExpr obj) {
  obj.compress();
  obj_ = std::move(obj);
}

double ConeProblem::max_violation(const RVec& y) const {
  double v = 0.0;
  for (const auto& g : ineqs_) v = std::max(v, -g.eval(y));
  for (const auto& e : eqs_) v = std::max(v, std::abs(e.eval(y)));
  for (const auto& L : lmis_) {
    RMat F = RMat::Zero(L.n, L.n);
    for (const auto& t : L.entries) {
      const double val = t.var < 0 ? t.v : t.v * y(t.var);
      F(t.r, t.c) += val;
      if (t.r != t.c) F(t.c, t.r) += val;
    }
    Eigen::SelfAdjointEigenSolver<RMat> es(F, Eigen::EigenvaluesOnly);
    v = std::max(v, -es.eigenvalues()(0));
  }
  return v;
}

void ConeProblem::dump(std::ostream& os) const {
  auto put_expr = [&os](const LinExpr& e) {
    os << e.constant() << ' ' << e.terms().size();
    for (const auto& t : e.terms()) os << ' ' << t.var << ' ' << t.coef;
    os << '\n';
  };
  const auto prec = os.precision(17);
  os << "isacee-sdp 1\n";
  os << "vars " << nvars_ << '\n';
  os << "maximize ";
  put_expr(obj_);
  for (const auto& e : eqs_) {
    os << "eq ";
    put_expr(e);
  }
  for (const auto& g : ineqs_) {
    os << "ineq ";
    put_expr(g);
  }
  for (const auto& L : lmis_) {
    os << "lmi " << L.n << ' ' << L.entries.size() << '\n';
    for (const auto& t : L.entries) os << t.var << ' ' << t.r << ' ' << t.c << ' ' << t.v << '\n';
  }
  os << "end\n";
  os.precision(prec);
}

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::max_iterations: return "max-iterations";
    case Status::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

}  // namespace isacee::sdp
