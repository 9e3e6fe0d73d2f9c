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

#include <iosfwd>
#include <string>
#include <vector>

#include "isacee/types.hpp"

/// Linear objectives over real symmetric LMIs, with a complex Hermitian layer on top.
///
/// A ConeProblem is written in "dual" form over free real scalars y:
///
///     maximize   c0 + sum_i c_i y_i
///     subject to F_j(y) = F_j0 + sum_i y_i F_ji  PSD      (LMI blocks)
///                g(y) >= 0,  e(y) = 0                     (affine scalars)
///
/// PSD matrix variables are expressed as LMIs over their entries.
namespace isacee::sdp {

struct Term {
  int var;
  double coef;
};

/// Affine scalar expression c + sum coef * y[var].
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double c) : constant_(c) {}  // NOLINT(google-explicit-constructor)

  static LinExpr variable(int var, double coef = 1.0);

  double constant() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }

  LinExpr& add_term(int var, double coef);
  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double s);

  /// Merge duplicate variables and drop zero coefficients.
  void compress();
  double eval(const RVec& y) const;

 private:
  double constant_ = 0.0;
  std::vector<Term> terms_;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a);
LinExpr operator*(LinExpr a, double s);
LinExpr operator*(double s, LinExpr a);

/// Complex affine expression re + j im.
struct CLinExpr {
  LinExpr re;
  LinExpr im;

  CLinExpr() = default;
  CLinExpr(LinExpr r, LinExpr i = LinExpr()) : re(std::move(r)), im(std::move(i)) {}  // NOLINT
  CLinExpr(cplx c) : re(c.real()), im(c.imag()) {}                                   // NOLINT

  CLinExpr& operator+=(const CLinExpr& o);
  CLinExpr& operator-=(const CLinExpr& o);
  CLinExpr conj() const { return {re, -im}; }
  cplx eval(const RVec& y) const { return {re.eval(y), im.eval(y)}; }
};

CLinExpr operator+(CLinExpr a, const CLinExpr& b);
CLinExpr operator-(CLinExpr a, const CLinExpr& b);
CLinExpr operator*(cplx s, const CLinExpr& a);

/// Symmetric n x n matrix of affine expressions (upper triangle stored).
class SymBlock {
 public:
  explicit SymBlock(int n);
  int size() const { return n_; }
  LinExpr& operator()(int r, int c);
  const LinExpr& operator()(int r, int c) const;
  RMat eval(const RVec& y) const;

 private:
  int n_;
  std::vector<LinExpr> e_;
};

/// Hermitian n x n matrix of complex affine expressions (upper triangle stored).
class HermBlock {
 public:
  explicit HermBlock(int n);
  int size() const { return n_; }
  /// Entry (r, c); for r > c the stored (c, r) entry is conjugated on read.
  CLinExpr get(int r, int c) const;
  /// Sets (r, c) and implicitly (c, r) = conj. Diagonal imaginary parts must vanish.
  void set(int r, int c, const CLinExpr& v);
  void add(int r, int c, const CLinExpr& v);
  /// Real symmetric embedding [[Re, -Im], [Im, Re]].
  SymBlock embed() const;
  CMat eval(const RVec& y) const;

 private:
  int n_;
  std::vector<CLinExpr> e_;
};

/// Real symmetric 2n x 2n embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian matrix.
/// Throws std::invalid_argument if H is not Hermitian within 1e-10 (relative).
RMat embed_hermitian(const CMat& H);

/// Hermitian matrix variable: n real diagonal entries plus n(n-1) real off-diagonal parts.
struct HermVar {
  int n = 0;
  std::vector<int> re_idx;  // n*n, variable of Re X(r,c) for r <= c
  std::vector<int> im_idx;  // n*n, variable of Im X(r,c) for r < c, else -1

  CLinExpr operator()(int r, int c) const;
  HermBlock block() const;
  CMat value(const RVec& y) const;
};

/// Complex vector variable (2n real scalars).
struct CVecVar {
  int n = 0;
  int re0 = 0;
  int im0 = 0;

  CLinExpr operator()(int i) const;
  CVec value(const RVec& y) const;
};

/// tr(Q X) for Hermitian Q, a real affine expression.
LinExpr trace_prod(const CMat& Q, const HermVar& X);
/// u^H X v.
CLinExpr quad_form(const CVec& u, const HermVar& X, const CVec& v);
/// u^H x.
CLinExpr inner(const CVec& u, const CVecVar& x);
LinExpr trace(const HermVar& X);

struct Triplet {
  int var;  // -1 for the constant matrix
  int r;
  int c;
  double v;
};

struct LmiData {
  int n = 0;
  std::vector<Triplet> entries;  // upper triangle, r <= c
};

class ConeProblem {
 public:
  int add_var();
  /// Returns the first of `count` consecutive new variables.
  int add_vars(int count);
  HermVar add_herm(int n);
  /// Hermitian variable constrained PSD.
  HermVar add_herm_psd(int n);
  CVecVar add_cvec(int n);

  void add_lmi(const SymBlock& F);
  void add_lmi(const HermBlock& H);
  /// e(y) >= 0.
  void add_ineq(LinExpr e);
  /// e(y) == 0.
  void add_eq(LinExpr e);
  void maximize(LinExpr obj);

  int num_vars() const { return nvars_; }
  const std::vector<LmiData>& lmis() const { return lmis_; }
  const std::vector<LinExpr>& ineqs() const { return ineqs_; }
  const std::vector<LinExpr>& eqs() const { return eqs_; }
  const LinExpr& objective() const { return obj_; }

  /// Largest violation over all constraints at y (LMIs: -min eigenvalue).
  double max_violation(const RVec& y) const;

  /// Plain-text dump, see docs/sdp_format.md.
  void dump(std::ostream& os) const;

 private:
  int nvars_ = 0;
  std::vector<LmiData> lmis_;
  std::vector<LinExpr> ineqs_;
  std::vector<LinExpr> eqs_;
  LinExpr obj_;
};

enum class Status { optimal, infeasible, unbounded, max_iterations, numerical_failure };

const char* to_string(Status s);

struct SolveOptions {
  double tol_gap = 1e-8;
  double tol_feas = 1e-7;
  double tol_infeas = 1e-8;
  int max_iter = 100;
  bool verbose = false;
};

struct Kkt {
  double primal = 0.0;  // relative residual of the equality side
  double dual = 0.0;    // relative residual of the LMI side
  double gap = 0.0;     // relative duality gap
};

struct SolveReport {
  Status status = Status::numerical_failure;
  double objective = 0.0;       // value of the maximization at y
  double dual_objective = 0.0;  // bound from the dual multipliers
  RVec y;                       // decision variables
  std::vector<RMat> Z;          // multipliers of the LMI blocks, then one 1x1 per inequality
  int iterations = 0;
  Kkt kkt;
  std::string message;

  bool optimal() const { return status == Status::optimal; }
};

/// Primal-dual path following on the homogeneous self-dual embedding, Nesterov-Todd
/// scaling, Mehrotra predictor-corrector. Deterministic and single threaded.
SolveReport solve(const ConeProblem& prob, const SolveOptions& opts = {});

/// Process-wide tally of solve() calls; KKT maxima cover optimal reports only.
struct SolveStats {
  long solves = 0;
  long optimal = 0;
  double max_primal = 0.0;
  double max_dual = 0.0;
  double max_gap = 0.0;
};

SolveStats solve_stats();
void reset_solve_stats();

}  // namespace isacee::sdp
