// Copyright 2026 The hcvx Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Homogeneous self-dual interior-point method over R_+^l x SOC_1 x ... x
// SOC_k with Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
//
// Embedding, with slack s = h - G z in the cone:
//   0     =  E'y + G'u + c tau
//   0     = -E z + f tau
//   s     = -G z + h tau
//   kappa = -c'z - f'y - h'u
// Every Newton step reduces to two solves with the dense saddle-point matrix
//   [ 0  E'  G'  ]
//   [ E  0   0   ]
//   [ G  0  -W^2 ]
// which is factored once per iteration.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hcvx/cone.hpp"
#include "hcvx/error.hpp"

namespace hcvx {

ConeProgram::ConeProgram(int num_vars)
    : num_vars_(num_vars),
      c_(Vector::Zero(num_vars)),
      G_(0, num_vars),
      h_(0),
      E_(0, num_vars),
      f_(0) {
  if (num_vars < 1) throw Error(ErrorCode::kInvalidProgram, "need at least one variable");
}

void ConeProgram::set_objective(const Vector& c, double offset) {
  if (c.size() != num_vars_) throw Error(ErrorCode::kInvalidProgram, "objective has wrong length");
  c_ = c;
  offset_ = offset;
}

namespace {

void append_row(Matrix& M, Vector& rhs, const Vector& row, double value) {
  const Eigen::Index r = M.rows();
  M.conservativeResize(r + 1, Eigen::NoChange);
  M.row(r) = row.transpose();
  rhs.conservativeResize(r + 1);
  rhs(r) = value;
}

}  // namespace

int ConeProgram::add_leq(const Vector& row, double rhs) {
  if (row.size() != num_vars_) throw Error(ErrorCode::kInvalidProgram, "row has wrong length");
  append_row(G_, h_, row, rhs);
  return num_ineq() - 1;
}

int ConeProgram::add_eq(const Vector& row, double rhs) {
  if (row.size() != num_vars_) throw Error(ErrorCode::kInvalidProgram, "row has wrong length");
  append_row(E_, f_, row, rhs);
  return num_eq() - 1;
}

int ConeProgram::add_soc(const Matrix& A, const Vector& b, const Vector& c, double d) {
  if (A.cols() != num_vars_ || A.rows() != b.size() || c.size() != num_vars_) {
    throw Error(ErrorCode::kInvalidProgram, "SOC block dimensions inconsistent");
  }
  socs_.push_back(SocBlock{A, b, c, d});
  return num_soc() - 1;
}

int add_quadratic_epigraph(ConeProgram& prog, const Matrix& R, int x_start, int t_index) {
  const int N = prog.num_vars();
  const int n = static_cast<int>(R.cols());
  if (x_start < 0 || x_start + n > N || t_index < 0 || t_index >= N) {
    throw Error(ErrorCode::kInvalidProgram, "epigraph variable index out of range");
  }
  const int r = static_cast<int>(R.rows());
  Matrix A = Matrix::Zero(r + 1, N);
  A.block(0, x_start, r, n) = R;
  A(r, t_index) = 0.5;
  Vector b = Vector::Zero(r + 1);
  b(r) = -0.5;
  Vector c = Vector::Zero(N);
  c(t_index) = 0.5;
  return prog.add_soc(A, b, c, 0.5);
}

void ConeProgram::validate() const {
  if (num_vars_ < 1) throw Error(ErrorCode::kInvalidProgram, "need at least one variable");
  if (c_.size() != num_vars_ || G_.cols() != num_vars_ || E_.cols() != num_vars_ ||
      G_.rows() != h_.size() || E_.rows() != f_.size()) {
    throw Error(ErrorCode::kInvalidProgram, "dimension mismatch");
  }
  if (!c_.allFinite() || !std::isfinite(offset_) || !G_.allFinite() || !h_.allFinite() ||
      !E_.allFinite() || !f_.allFinite()) {
    throw Error(ErrorCode::kInvalidProgram, "non-finite program data");
  }
  for (const auto& k : socs_) {
    if (k.A.cols() != num_vars_ || k.A.rows() != k.b.size() || k.c.size() != num_vars_) {
      throw Error(ErrorCode::kInvalidProgram, "SOC block dimensions inconsistent");
    }
    if (!k.A.allFinite() || !k.b.allFinite() || !k.c.allFinite() || !std::isfinite(k.d)) {
      throw Error(ErrorCode::kInvalidProgram, "non-finite SOC block data");
    }
  }
}

std::string_view solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kUnbounded: return "Unbounded";
    case SolveStatus::kMaxIter: return "MaxIter";
  }
  return "Unknown";
}

namespace {

// Cone layout of the stacked slack: `lin` nonnegative entries followed by
// one block per SOC, block k occupying [start[k], start[k] + dim[k]).
struct Cones {
  int lin = 0;
  std::vector<int> start;
  std::vector<int> dim;
  int total = 0;

  int degree() const { return lin + static_cast<int>(dim.size()); }
};

// Nesterov-Todd scaling for the current (s, u).
struct Scaling {
  Vector lin_w;                 // W = diag(lin_w) on the linear part
  std::vector<Vector> wbar;     // normalized scaling point per SOC
  std::vector<double> eta;
  Vector lambda;                // W u = W^{-1} s
};

double soc_residual(const Vector& v, int start, int dim) {
  const double head = v(start);
  const double tail = v.segment(start + 1, dim - 1).squaredNorm();
  return head * head - tail;
}

// min over cones of the "smallest eigenvalue" of v.
double min_eig(const Cones& K, const Vector& v) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < K.lin; ++i) m = std::min(m, v(i));
  for (std::size_t k = 0; k < K.dim.size(); ++k) {
    const int st = K.start[k];
    m = std::min(m, v(st) - v.segment(st + 1, K.dim[k] - 1).norm());
  }
  return m;
}

Vector identity_element(const Cones& K) {
  Vector e = Vector::Zero(K.total);
  e.head(K.lin).setOnes();
  for (int st : K.start) e(st) = 1.0;
  return e;
}

Vector jordan_product(const Cones& K, const Vector& a, const Vector& b) {
  Vector r(K.total);
  r.head(K.lin) = a.head(K.lin).cwiseProduct(b.head(K.lin));
  for (std::size_t k = 0; k < K.dim.size(); ++k) {
    const int st = K.start[k];
    const int m = K.dim[k] - 1;
    r(st) = a.segment(st, K.dim[k]).dot(b.segment(st, K.dim[k]));
    r.segment(st + 1, m) = a(st) * b.segment(st + 1, m) + b(st) * a.segment(st + 1, m);
  }
  return r;
}

// Solves lambda o x = v.
Vector jordan_divide(const Cones& K, const Vector& lambda, const Vector& v) {
  Vector x(K.total);
  x.head(K.lin) = v.head(K.lin).cwiseQuotient(lambda.head(K.lin));
  for (std::size_t k = 0; k < K.dim.size(); ++k) {
    const int st = K.start[k];
    const int m = K.dim[k] - 1;
    const double l0 = lambda(st);
    const auto l1 = lambda.segment(st + 1, m);
    const double det = l0 * l0 - l1.squaredNorm();
    const double x0 = (l0 * v(st) - l1.dot(v.segment(st + 1, m))) / det;
    x(st) = x0;
    x.segment(st + 1, m) = (v.segment(st + 1, m) - x0 * l1) / l0;
  }
  return x;
}

Scaling nt_scaling(const Cones& K, const Vector& s, const Vector& u) {
  Scaling sc;
  sc.lin_w = (s.head(K.lin).cwiseQuotient(u.head(K.lin))).cwiseSqrt();
  sc.lambda.resize(K.total);
  sc.lambda.head(K.lin) = s.head(K.lin).cwiseProduct(u.head(K.lin)).cwiseSqrt();
  for (std::size_t k = 0; k < K.dim.size(); ++k) {
    const int st = K.start[k];
    const int d = K.dim[k];
    const double sres = std::max(soc_residual(s, st, d), std::numeric_limits<double>::min());
    const double ures = std::max(soc_residual(u, st, d), std::numeric_limits<double>::min());
    const Vector sb = s.segment(st, d) / std::sqrt(sres);
    Vector ub = u.segment(st, d) / std::sqrt(ures);
    const double gamma = std::sqrt(std::max(0.5 * (1.0 + sb.dot(ub)), 0.0));
    ub.tail(d - 1) *= -1.0;  // J ub
    const Vector wb = (sb + ub) / (2.0 * gamma);
    sc.wbar.push_back(wb);
    sc.eta.push_back(std::pow(sres / ures, 0.25));
  }
  // lambda = W u on the SOC part.
  for (std::size_t k = 0; k < K.dim.size(); ++k) {
    const int st = K.start[k];
    const int d = K.dim[k];
    const Vector& wb = sc.wbar[k];
    const auto w1 = wb.tail(d - 1);
    const auto v = u.segment(st, d);
    const double w1v1 = w1.dot(v.tail(d - 1));
    sc.lambda(st) = sc.eta[k] * (wb(0) * v(0) + w1v1);
    sc.lambda.segment(st + 1, d - 1) =
        sc.eta[k] * (v(0) * w1 + v.tail(d - 1) + (w1v1 / (1.0 + wb(0))) * w1);
  }
  return sc;
}

// W v.
Vector apply_w(const Cones& K, const Scaling& sc, const Vector& v) {
  Vector r(K.total);
  r.head(K.lin) = sc.lin_w.cwiseProduct(v.head(K.lin));
  for (std::size_t k = 0; k < K.dim.size(); ++k) {
    const int st = K.start[k];
    const int d = K.dim[k];
    const Vector& wb = sc.wbar[k];
    const auto w1 = wb.tail(d - 1);
    const double w1v1 = w1.dot(v.segment(st + 1, d - 1));
    r(st) = sc.eta[k] * (wb(0) * v(st) + w1v1);
    r.segment(st + 1, d - 1) =
        sc.eta[k] * (v(st) * w1 + v.segment(st + 1, d - 1) + (w1v1 / (1.0 + wb(0))) * w1);
  }
  return r;
}

// Dense W^2 block for SOC k.
Matrix soc_w_squared(const Scaling& sc, int k, int d) {
  const Vector& wb = sc.wbar[k];
  Matrix W(d, d);
  W(0, 0) = wb(0);
  W.block(0, 1, 1, d - 1) = wb.tail(d - 1).transpose();
  W.block(1, 0, d - 1, 1) = wb.tail(d - 1);
  W.block(1, 1, d - 1, d - 1) = Matrix::Identity(d - 1, d - 1) +
                                wb.tail(d - 1) * wb.tail(d - 1).transpose() / (1.0 + wb(0));
  return sc.eta[k] * sc.eta[k] * (W * W);
}

// Largest step in [0, cap] keeping v + a dv in the cone.
double max_step(const Cones& K, const Vector& v, const Vector& dv, double cap) {
  double a = cap;
  for (int i = 0; i < K.lin; ++i) {
    if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
  }
  for (std::size_t k = 0; k < K.dim.size(); ++k) {
    const int st = K.start[k];
    const int m = K.dim[k] - 1;
    // q(a) = (v0 + a d0)^2 - ||v1 + a d1||^2 = qa a^2 + 2 qb a + qc, qc > 0.
    const double qa = dv(st) * dv(st) - dv.segment(st + 1, m).squaredNorm();
    const double qb = v(st) * dv(st) - v.segment(st + 1, m).dot(dv.segment(st + 1, m));
    const double qc = soc_residual(v, st, K.dim[k]);
    double root = std::numeric_limits<double>::infinity();
    const double disc = qb * qb - qa * qc;
    if (std::abs(qa) <= 1e-300) {
      if (qb < 0.0) root = -qc / (2.0 * qb);
    } else if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Stable pair of roots of qa a^2 + 2 qb a + qc.
      const double q = -(qb + std::copysign(sq, qb));
      const double r1 = q / qa;
      const double r2 = q != 0.0 ? qc / q : std::numeric_limits<double>::infinity();
      for (double r : {r1, r2}) {
        if (r > 0.0) root = std::min(root, r);
      }
    }
    // The head must also stay nonnegative.
    if (dv(st) < 0.0) root = std::min(root, -v(st) / dv(st));
    a = std::min(a, root);
  }
  return std::max(a, 0.0);
}

struct Residuals {
  Vector rx, ry, rz;
  double rt = 0.0;
};

struct Iterate {
  Vector x, y, u, s;
  double tau = 1.0;
  double kappa = 1.0;
};

struct Quality {
  double pres = 0.0;
  double dres = 0.0;
  double gap = 0.0;
  double pcost = 0.0;
  double dcost = 0.0;
  double merit = std::numeric_limits<double>::infinity();
};

class Solver {
 public:
  Solver(const ConeProgram& prog, const SolverOptions& opts);
  SolverResult run();

 private:
  void stack();
  void initialize();
  Residuals residuals(const Iterate& it) const;
  Quality quality(const Iterate& it) const;
  void factor(const Scaling& sc);
  // Solves the (unregularized) saddle-point system with refinement.
  Vector kkt_solve(const Vector& rhs) const;
  Vector kkt_apply(const Vector& v) const;
  SolverResult finish(const Iterate& it, SolveStatus status, int iters) const;

  const ConeProgram& prog_;
  SolverOptions opts_;
  int n_ = 0, p_ = 0, m_ = 0;
  Cones K_;
  Matrix G_;
  Vector h_;
  Vector c_, f_;
  Matrix E_;
  double norm_c_ = 0.0, norm_f_ = 0.0, norm_h_ = 0.0;
  Matrix kkt_;       // current unregularized matrix
  Eigen::PartialPivLU<Matrix> lu_;
  Iterate it_;
};

Solver::Solver(const ConeProgram& prog, const SolverOptions& opts)
    : prog_(prog), opts_(opts) {
  prog_.validate();
  stack();
}

void Solver::stack() {
  n_ = prog_.num_vars();
  p_ = prog_.num_eq();
  K_.lin = prog_.num_ineq();
  int rows = K_.lin;
  for (const auto& blk : prog_.socs()) {
    K_.start.push_back(rows);
    K_.dim.push_back(blk.dim());
    rows += blk.dim();
  }
  K_.total = m_ = rows;
  G_.resize(m_, n_);
  h_.resize(m_);
  G_.topRows(K_.lin) = prog_.G();
  h_.head(K_.lin) = prog_.h();
  for (std::size_t k = 0; k < prog_.socs().size(); ++k) {
    const auto& blk = prog_.socs()[k];
    const int st = K_.start[k];
    G_.row(st) = -blk.c.transpose();
    h_(st) = blk.d;
    G_.middleRows(st + 1, blk.A.rows()) = -blk.A;
    h_.segment(st + 1, blk.b.size()) = blk.b;
  }
  c_ = prog_.objective();
  E_ = prog_.E();
  f_ = prog_.f();
  norm_c_ = c_.norm();
  norm_f_ = f_.norm();
  norm_h_ = h_.norm();

  const int dim = n_ + p_ + m_;
  kkt_ = Matrix::Zero(dim, dim);
  kkt_.block(0, n_, n_, p_) = E_.transpose();
  kkt_.block(0, n_ + p_, n_, m_) = G_.transpose();
  kkt_.block(n_, 0, p_, n_) = E_;
  kkt_.block(n_ + p_, 0, m_, n_) = G_;
}

void Solver::factor(const Scaling& sc) {
  const int off = n_ + p_;
  kkt_.block(off, off, m_, m_).setZero();
  for (int i = 0; i < K_.lin; ++i) kkt_(off + i, off + i) = -sc.lin_w(i) * sc.lin_w(i);
  for (std::size_t k = 0; k < K_.dim.size(); ++k) {
    const int st = K_.start[k];
    const int d = K_.dim[k];
    kkt_.block(off + st, off + st, d, d) = -soc_w_squared(sc, static_cast<int>(k), d);
  }
  Matrix reg = kkt_;
  const double delta = opts_.regularization;
  for (int i = 0; i < n_; ++i) reg(i, i) += delta;
  for (int i = n_; i < n_ + p_ + m_; ++i) reg(i, i) -= delta;
  lu_.compute(reg);
}

Vector Solver::kkt_apply(const Vector& v) const { return kkt_ * v; }

Vector Solver::kkt_solve(const Vector& rhs) const {
  Vector sol = lu_.solve(rhs);
  for (int r = 0; r < opts_.refinement_steps; ++r) {
    const Vector err = rhs - kkt_apply(sol);
    if (!(err.lpNorm<Eigen::Infinity>() > 1e-15 * (1.0 + rhs.lpNorm<Eigen::Infinity>()))) break;
    sol += lu_.solve(err);
  }
  return sol;
}

void Solver::initialize() {
  // Identity scaling for the two least-squares style start solves.
  Scaling unit;
  unit.lin_w = Vector::Ones(K_.lin);
  for (std::size_t k = 0; k < K_.dim.size(); ++k) {
    Vector wb = Vector::Zero(K_.dim[k]);
    wb(0) = 1.0;
    unit.wbar.push_back(wb);
    unit.eta.push_back(1.0);
  }
  factor(unit);
  const Vector e = identity_element(K_);
  const int dim = n_ + p_ + m_;

  Vector rhs = Vector::Zero(dim);
  rhs.segment(n_, p_) = f_;
  rhs.tail(m_) = h_;
  Vector sol = kkt_solve(rhs);
  it_.x = sol.head(n_);
  it_.s = -sol.tail(m_);
  if (m_ > 0) {
    const double shift = -min_eig(K_, it_.s);
    if (shift >= 0.0) it_.s += (1.0 + shift) * e;
  }

  rhs.setZero();
  rhs.head(n_) = -c_;
  sol = kkt_solve(rhs);
  it_.y = sol.segment(n_, p_);
  it_.u = sol.tail(m_);
  if (m_ > 0) {
    const double shift = -min_eig(K_, it_.u);
    if (shift >= 0.0) it_.u += (1.0 + shift) * e;
  }
  it_.tau = 1.0;
  it_.kappa = 1.0;
}

Residuals Solver::residuals(const Iterate& it) const {
  Residuals r;
  r.rx = E_.transpose() * it.y + G_.transpose() * it.u + c_ * it.tau;
  r.ry = -E_ * it.x + f_ * it.tau;
  r.rz = -G_ * it.x + h_ * it.tau - it.s;
  r.rt = -c_.dot(it.x) - f_.dot(it.y) - h_.dot(it.u) - it.kappa;
  return r;
}

Quality Solver::quality(const Iterate& it) const {
  Quality q;
  const double t = it.tau;
  const Vector x = it.x / t;
  const Vector s = it.s / t;
  const Vector y = it.y / t;
  const Vector u = it.u / t;
  const double eq_res = p_ > 0 ? (E_ * x - f_).norm() / (1.0 + norm_f_) : 0.0;
  const double in_res = m_ > 0 ? (G_ * x + s - h_).norm() / (1.0 + norm_h_) : 0.0;
  q.pres = std::max(eq_res, in_res);
  q.dres = (E_.transpose() * y + G_.transpose() * u + c_).norm() / (1.0 + norm_c_);
  q.pcost = c_.dot(x);
  q.dcost = -f_.dot(y) - h_.dot(u);
  q.gap = std::max(0.0, s.dot(u));
  const double rel_gap = q.gap / (1.0 + std::abs(q.pcost));
  q.merit = std::max({q.pres, q.dres, rel_gap});
  return q;
}

SolverResult Solver::finish(const Iterate& it, SolveStatus status, int iters) const {
  SolverResult res;
  res.status = status;
  res.iterations = iters;
  const Quality q = quality(it);
  res.primal_residual = q.pres;
  res.dual_residual = q.dres;
  res.gap = q.gap;
  if (status == SolveStatus::kUnbounded) {
    res.z = it.x / std::max(1.0, it.x.norm());
    res.certificate = it.x / it.x.norm();
    res.objective = -std::numeric_limits<double>::infinity();
    return res;
  }
  if (status == SolveStatus::kInfeasible) {
    Vector cert(p_ + m_);
    cert << it.y, it.u;
    const double scale = -(h_.dot(it.u) + f_.dot(it.y));
    res.certificate = cert / scale;
    res.z = it.x / it.tau;
    res.objective = std::numeric_limits<double>::infinity();
    return res;
  }
  res.z = it.x / it.tau;
  res.objective = c_.dot(res.z) + prog_.offset();
  res.eq_duals = it.y / it.tau;
  const Vector u = it.u / it.tau;
  res.ineq_duals = u.head(K_.lin);
  for (std::size_t k = 0; k < K_.dim.size(); ++k) {
    res.soc_duals.push_back(u.segment(K_.start[k], K_.dim[k]));
  }
  return res;
}

SolverResult Solver::run() {
  initialize();
  const Vector e = identity_element(K_);
  const double degree = K_.degree() + 1.0;
  Iterate best = it_;
  double best_merit = std::numeric_limits<double>::infinity();
  int iter = 0;

  for (; iter <= opts_.max_iter; ++iter) {
    const Residuals r = residuals(it_);
    const Quality q = quality(it_);
    if (q.merit < best_merit) {
      best_merit = q.merit;
      best = it_;
    }
    if (q.pres <= opts_.feas_tol && q.dres <= opts_.feas_tol &&
        q.gap <= opts_.gap_tol * (1.0 + std::abs(q.pcost))) {
      return finish(it_, SolveStatus::kOptimal, iter);
    }
    // Certificates of infeasibility / unboundedness from the embedding.
    const double dual_obj = -(h_.dot(it_.u) + f_.dot(it_.y));
    if (dual_obj > 0.0) {
      const double res_d = (E_.transpose() * it_.y + G_.transpose() * it_.u).norm();
      if (res_d <= opts_.feas_tol * dual_obj) {
        return finish(it_, SolveStatus::kInfeasible, iter);
      }
    }
    const double primal_obj = -c_.dot(it_.x);
    if (primal_obj > 0.0) {
      const double res_e = p_ > 0 ? (E_ * it_.x).norm() : 0.0;
      const double res_g = m_ > 0 ? (G_ * it_.x + it_.s).norm() : 0.0;
      if (std::max(res_e, res_g) <= opts_.feas_tol * primal_obj) {
        return finish(it_, SolveStatus::kUnbounded, iter);
      }
    }
    if (q.pres <= opts_.feas_tol && q.pcost < -opts_.unbounded_threshold) {
      return finish(it_, SolveStatus::kUnbounded, iter);
    }
    if (iter == opts_.max_iter) break;

    const Scaling sc = nt_scaling(K_, it_.s, it_.u);
    factor(sc);
    const int dim = n_ + p_ + m_;
    Vector rhs1(dim);
    rhs1 << -c_, f_, h_;
    const Vector u1 = kkt_solve(rhs1);
    const double cu1 = c_.dot(u1.head(n_)) + f_.dot(u1.segment(n_, p_)) + h_.dot(u1.tail(m_));
    const double tau = it_.tau;
    const double kappa = it_.kappa;
    const double mu = (it_.s.dot(it_.u) + tau * kappa) / degree;

    struct Step {
      Vector dx, dy, du, ds;
      double dtau = 0.0, dkappa = 0.0;
    };
    auto direction = [&](double eta, const Vector& d_s, double d_kappa) {
      const Vector w_ld = apply_w(K_, sc, jordan_divide(K_, sc.lambda, d_s));
      Vector rhs2(dim);
      rhs2 << -eta * r.rx, eta * r.ry, eta * r.rz - w_ld;
      const Vector u2 = kkt_solve(rhs2);
      const double cu2 =
          c_.dot(u2.head(n_)) + f_.dot(u2.segment(n_, p_)) + h_.dot(u2.tail(m_));
      Step st;
      st.dtau = (-eta * r.rt + d_kappa / tau + cu2) / (kappa / tau - cu1);
      const Vector delta = u2 + st.dtau * u1;
      st.dx = delta.head(n_);
      st.dy = delta.segment(n_, p_);
      st.du = delta.tail(m_);
      // W^{-1} ds + W du = lambda \ d_s.
      st.ds = w_ld - apply_w(K_, sc, apply_w(K_, sc, st.du));
      st.dkappa = (d_kappa - kappa * st.dtau) / tau;
      return st;
    };
    auto step_length = [&](const Step& st, double cap) {
      double a = std::min(max_step(K_, it_.s, st.ds, cap), max_step(K_, it_.u, st.du, cap));
      if (st.dtau < 0.0) a = std::min(a, -tau / st.dtau);
      if (st.dkappa < 0.0) a = std::min(a, -kappa / st.dkappa);
      return a;
    };

    // Predictor.
    const Vector lam_sq = jordan_product(K_, sc.lambda, sc.lambda);
    const Step aff = direction(1.0, -lam_sq, -tau * kappa);
    const double alpha_aff = step_length(aff, 1.0);
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    // Corrector with the second-order term.
    const Vector w_du = apply_w(K_, sc, aff.du);
    const Vector winv_ds = -sc.lambda - w_du;
    const Vector d_s = -lam_sq - jordan_product(K_, winv_ds, w_du) + sigma * mu * e;
    const double d_kappa = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
    const Step cmb = direction(1.0 - sigma, d_s, d_kappa);
    const double alpha = std::min(1.0, 0.99 * step_length(cmb, 1e300));

    if (!(alpha > 1e-12) || !cmb.dx.allFinite() || !std::isfinite(cmb.dtau)) break;
    it_.x += alpha * cmb.dx;
    it_.y += alpha * cmb.dy;
    it_.u += alpha * cmb.du;
    it_.s += alpha * cmb.ds;
    it_.tau += alpha * cmb.dtau;
    it_.kappa += alpha * cmb.dkappa;
  }
  return finish(best, SolveStatus::kMaxIter, std::min(iter, opts_.max_iter));
}

}  // namespace

SolverResult solve(const ConeProgram& prog, const SolverOptions& opts) {
  Solver solver(prog, opts);
  return solver.run();
}

}  // namespace hcvx
