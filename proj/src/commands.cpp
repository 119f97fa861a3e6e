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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <variant>

#include "hcvx/chebyshev.hpp"
#include "hcvx/duality.hpp"
#include "hcvx/error.hpp"
#include "hcvx/oracle.hpp"
#include "hcvx/recover.hpp"
#include "hcvx/reformulate.hpp"

namespace hcvx {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string vec_text(const Vector& v) {
  std::string s = "[";
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k > 0) s += ", ";
    s += num(v(k));
  }
  return s + "]";
}

Json vec_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

// Numbers that may be infinite are written as strings, matching bound files.
Json ext_json(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

SolverOptions solver_options(const RunOptions& o) {
  SolverOptions s;
  s.gap_tol = o.gap;
  s.max_iter = o.max_iter;
  return s;
}

Json tolerances(const RunOptions& o) {
  Json t = Json::object();
  t["tol_rank"] = o.tol_rank;
  t["tol_feas"] = o.tol_feas;
  t["gap"] = o.gap;
  t["max_iter"] = o.max_iter;
  t["grid_h"] = o.grid_h;
  t["seed"] = o.seed;
  t["force_kind"] = o.force_kind;
  if (o.oracle_feas_tol) t["oracle_feas_tol"] = *o.oracle_feas_tol;
  return t;
}

Report start(const char* command, std::string_view kind, const RunOptions& o) {
  Report r;
  r.doc = Json::object();
  r.doc["command"] = command;
  r.doc["kind"] = kind;
  r.doc["tolerances"] = tolerances(o);
  return r;
}

void finish(Report& r) { r.doc["exit_code"] = r.exit_code; }

Json certificate_json(const CertificateReport& c) {
  Json j = Json::object();
  j["condition"] = c.condition;
  j["holds"] = c.holds;
  j["value"] = c.value;
  j["limit"] = c.limit;
  if (!c.blocks.empty()) {
    j["blocks"] = c.blocks;
    j["dims"] = c.dims;
  }
  j["reason"] = c.reason;
  return j;
}

Json trace_json(const TightenTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json e = Json::object();
    e["action"] = s.action;
    e["index"] = s.index;
    e["step"] = s.step;
    e["gap_after"] = s.gap_after;
    e["direction"] = vec_json(s.direction);
    steps.push_back(e);
  }
  Json j = Json::object();
  j["initial_gap"] = t.initial_gap;
  j["final_gap"] = t.final_gap;
  j["active_history"] = t.active_history;
  j["steps"] = steps;
  return j;
}

Json recovery_json(const Recovery& rec) {
  Json j = Json::object();
  j["x"] = vec_json(rec.x);
  j["objective"] = rec.objective;
  j["worst_violation"] = rec.worst_violation;
  j["trace"] = trace_json(rec.trace);
  return j;
}

// The relaxation family chosen for one solve, with what recovery needs.
struct Plan {
  std::string family;
  Relaxation relax;
  bool uq_pd = false;  // tighten_uq and the closed-form dual apply
  std::optional<QcqpInstance> lifted_source;  // for tighten_qcqp
};

Plan plan_uq(const UqInstance& u, const RunOptions& o) {
  Plan p;
  const std::string& force = o.force_kind;
  if (force == "cr" || force == "cr2") {
    QcqpInstance q = uq_as_qcqp(u, o.tol_rank);
    p.family = force;
    p.relax = force == "cr" ? build_cr(q, o.tol_rank) : build_cr2(q, o.tol_rank);
    p.lifted_source = std::move(q);
    return p;
  }
  if (is_psd(u.Q)) {
    p.family = "socp";
    p.relax = build_socp_uq(u, o.tol_rank);
    p.uq_pd = is_pd(u.Q);
    if (!p.uq_pd) p.lifted_source = uq_as_qcqp(u, o.tol_rank);
    return p;
  }
  if (force == "socp") {
    throw Error(ErrorCode::kWrongShape, "socp relaxation needs PSD Q; instance is indefinite");
  }
  p.family = "socp-split";
  p.relax = build_socp_indefinite(u, o.tol_rank);
  p.lifted_source = split_indefinite(u, o.tol_rank).instance;
  return p;
}

Plan plan_qcqp(const QcqpInstance& q, const RunOptions& o) {
  Plan p;
  std::string family = o.force_kind;
  if (family == "auto") family = q.one_sided() ? "cr" : "cr2";
  if (family != "cr" && family != "cr2") {
    throw Error(ErrorCode::kInvalidInput, "qcqp instances take force-kind cr or cr2");
  }
  p.family = family;
  p.relax = family == "cr" ? build_cr(q, o.tol_rank) : build_cr2(q, o.tol_rank);
  p.lifted_source = q;
  return p;
}

template <class Src>
void solve_and_recover(Report& r, const Src& src, const UqInstance* uq, Plan plan,
                       const RunOptions& o) {
  const SolverResult res = solve(plan.relax.program, solver_options(o));
  const std::string status(solve_status_name(res.status));
  Json rel = Json::object();
  rel["family"] = plan.family;
  rel["status"] = status;
  rel["iterations"] = res.iterations;
  rel["primal_residual"] = res.primal_residual;
  rel["dual_residual"] = res.dual_residual;
  rel["certificate"] = certificate_json(plan.relax.certificate);
  const CertificateReport& cert = plan.relax.certificate;
  r.verdict = cert.condition + (cert.holds ? ": holds" : ": fails");

  if (res.status != SolveStatus::kOptimal) {
    rel["value"] = nullptr;
    r.doc["relaxation"] = rel;
    r.doc["exact"] = false;
    r.lines.push_back("relaxation " + plan.family + ": status " + status);
    r.lines.push_back("certificate " + r.verdict + " (" + cert.reason + ")");
    if (res.status == SolveStatus::kUnbounded) {
      r.lines.push_back("relaxation unbounded below in min form: exactness theorem not applicable");
    }
    if (res.status == SolveStatus::kMaxIter) r.exit_code = kExitSolver;
    r.lines.push_back("exact: no claim");
    return;
  }
  const double value = plan.relax.meta.source_objective(res.objective);
  r.value = value;
  rel["value"] = value;
  r.doc["relaxation"] = rel;
  r.lines.push_back("relaxation " + plan.family + ": status Optimal, value " + num(value));
  r.lines.push_back("certificate " + r.verdict + " (" + cert.reason + ")");

  if (uq != nullptr && plan.uq_pd) {
    const DualityReport d = certify_strong_duality(*uq, plan.relax, res);
    Json dj = Json::object();
    dj["dual"] = ext_json(d.dual.as_double());
    dj["objective"] = d.objective;
    dj["gap"] = ext_json(d.gap);
    dj["holds"] = d.holds;
    r.doc["duality"] = dj;
    r.lines.push_back("strong duality: d(lambda) = " + num(d.dual.as_double()) + ", gap " +
                      num(d.gap) + (d.holds ? ", holds" : ", FAILS"));
    if (!d.holds) r.exit_code = kExitCertificate;
  }

  if (!cert.holds) {
    r.doc["exact"] = false;
    r.doc["recovery"] = nullptr;
    r.lines.push_back("exact: no claim");
    return;
  }
  TightenOptions topts;
  topts.tol_rank = o.tol_rank;
  try {
    const Recovery rec = plan.uq_pd ? tighten_uq(*uq, plan.relax, res, topts)
                                    : tighten_qcqp(*plan.lifted_source, plan.relax, res, topts);
    // Feasibility is re-checked on the instance the user supplied.
    const FeasibilityReport fr = check_feasibility(src, rec.x, o.tol_feas);
    Json rj = recovery_json(rec);
    rj["feasible"] = fr.feasible;
    rj["worst_violation"] = fr.worst_violation;
    r.doc["recovery"] = rj;
    r.doc["exact"] = fr.feasible;
    r.lines.push_back(std::string("exact: ") + (fr.feasible ? "yes" : "no (recovered point infeasible)"));
    r.lines.push_back("recovered x: " + vec_text(rec.x));
    r.lines.push_back("objective at x: " + num(rec.objective));
    r.lines.push_back("worst violation: " + num(fr.worst_violation));
    if (!fr.feasible) r.exit_code = kExitCertificate;
  } catch (const Error& e) {
    r.doc["exact"] = false;
    Json rj = Json::object();
    rj["error"] = std::string(error_code_name(e.code()));
    rj["message"] = e.what();
    r.doc["recovery"] = rj;
    r.lines.push_back(std::string("recovery failed: ") + e.what());
    r.exit_code = kExitCertificate;
  }
}

UqInstance require_uq(const Instance& inst, const char* command) {
  if (const auto* u = std::get_if<UqInstance>(&inst)) return *u;
  throw Error(ErrorCode::kInvalidInput, std::string(command) + " needs a uq instance, got " +
                                            std::string(instance_kind(inst)));
}

BallIntersection require_balls(const Instance& inst, const char* command) {
  if (const auto* b = std::get_if<BallIntersection>(&inst)) return *b;
  throw Error(ErrorCode::kInvalidInput, std::string(command) + " needs a balls instance, got " +
                                            std::string(instance_kind(inst)));
}

}  // namespace

std::string Report::text() const {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  const Json& t = doc["tolerances"];
  s += "tolerances: tol_rank " + num(t["tol_rank"].get<double>()) + ", tol_feas " +
       num(t["tol_feas"].get<double>()) + ", gap " + num(t["gap"].get<double>()) +
       ", max_iter " + std::to_string(t["max_iter"].get<int>()) + ", grid_h " +
       num(t["grid_h"].get<double>()) + ", seed " + std::to_string(t["seed"].get<std::uint64_t>()) +
       "\n";
  return s;
}

std::string Report::json() const { return doc.dump(2) + "\n"; }

Report run_solve(const Instance& inst, const RunOptions& o) {
  if (std::holds_alternative<BallIntersection>(inst)) return run_cheby(inst, o);
  Report r = start("solve", instance_kind(inst), o);
  if (const auto* q = std::get_if<QcqpInstance>(&inst)) {
    r.doc["n"] = q->n;
    r.doc["p"] = q->p();
    r.lines.push_back("kind: qcqp (n = " + std::to_string(q->n) + ", p = " +
                      std::to_string(q->p()) + ", blocks = " + std::to_string(q->m()) + ")");
    solve_and_recover(r, *q, nullptr, plan_qcqp(*q, o), o);
  } else {
    UqInstance u;
    if (const auto* ilp = std::get_if<IlpInstance>(&inst)) {
      u = ilp_to_uq(*ilp);
      r.lines.push_back("kind: ilp reduced to uq (n = " + std::to_string(u.n) + ", p = " +
                        std::to_string(u.p()) + ")");
    } else {
      u = std::get<UqInstance>(inst);
      r.lines.push_back("kind: uq (n = " + std::to_string(u.n) + ", p = " + std::to_string(u.p()) +
                        ")");
    }
    r.doc["n"] = u.n;
    r.doc["p"] = u.p();
    solve_and_recover(r, u, &u, plan_uq(u, o), o);
  }
  finish(r);
  return r;
}

Report run_approx(const Instance& inst, const RunOptions& o) {
  const UqInstance u = require_uq(inst, "approx");
  Report r = start("approx", "uq", o);
  const Approximation a = approx_uq(u, solver_options(o));
  const ApproxTrace& t = a.trace;
  const ApproxCertificate& c = a.certificate;
  r.value = c.lower;
  r.ratio = c.guaranteed_ratio;
  r.verdict = c.ratio_holds ? "ratio: holds" : "ratio: fails";
  r.doc["n"] = u.n;
  r.doc["p"] = u.p();
  r.doc["gamma"] = t.gamma;
  r.doc["tau_bar"] = t.tau_bar;
  r.doc["guaranteed_ratio"] = c.guaranteed_ratio;
  r.doc["lower"] = c.lower;
  r.doc["upper"] = c.upper;
  r.doc["attained_ratio"] = c.upper > 0.0 ? Json(c.lower / c.upper) : Json(nullptr);
  r.doc["ratio_holds"] = c.ratio_holds;
  r.doc["x"] = vec_json(a.x);
  r.doc["worst_violation"] = a.worst_violation;
  Json tj = Json::object();
  tj["shortcut"] = t.shortcut;
  tj["degenerate_root"] = t.degenerate_root;
  tj["x_star"] = vec_json(t.x_star);
  tj["t_star"] = t.t_star;
  tj["alpha"] = t.alpha;
  tj["t1"] = t.t1;
  tj["t2"] = t.t2;
  tj["rho1"] = ext_json(t.rho1);
  tj["rho2"] = ext_json(t.rho2);
  tj["j_bar"] = t.j_bar;
  tj["x_bar"] = vec_json(t.x_bar);
  tj["identity_residual"] = t.identity_residual;
  tj["energy_residual"] = t.energy_residual;
  tj["selection_ok"] = t.selection_ok;
  tj["identity_ok"] = t.identity_ok;
  r.doc["trace"] = tj;

  r.lines.push_back("kind: uq (n = " + std::to_string(u.n) + ", p = " + std::to_string(u.p()) + ")");
  r.lines.push_back("gamma: " + num(t.gamma));
  r.lines.push_back("tau_bar: " + num(t.tau_bar));
  r.lines.push_back("guaranteed ratio: ((1 - gamma) / (sqrt 2 + gamma))^2 = " +
                    num(c.guaranteed_ratio));
  r.lines.push_back("relaxation value (upper): " + num(c.upper));
  r.lines.push_back("attained value (lower): " + num(c.lower));
  if (c.upper > 0.0) r.lines.push_back("attained ratio lower / upper: " + num(c.lower / c.upper));
  r.lines.push_back("chain: lower >= ratio * upper " +
                    std::string(c.ratio_holds ? "holds" : "FAILS"));
  r.lines.push_back("x: " + vec_text(a.x));
  r.lines.push_back("worst violation: " + num(a.worst_violation));
  if (t.shortcut) r.lines.push_back("relaxation already tight: x is the relaxation point");
  if (!t.shortcut) {
    r.lines.push_back("selected piece j = " + std::to_string(t.j_bar) + ", selection " +
                      (t.selection_ok ? "ok" : "FAILED") + ", split identity " +
                      (t.identity_ok ? "ok" : "FAILED"));
  }
  if (!c.ratio_holds || !t.selection_ok || !t.identity_ok ||
      a.worst_violation > o.tol_feas) {
    r.exit_code = kExitCertificate;
  }
  finish(r);
  return r;
}

Report run_cheby(const Instance& inst, const RunOptions& o) {
  const BallIntersection b = require_balls(inst, "cheby");
  Report r = start("cheby", "balls", o);
  const ChebyshevResult c = chebyshev_certified(b, solver_options(o));
  const double attained = c.v_dcc > 0.0 ? c.lower / c.v_dcc : 1.0;
  r.value = c.v_dcc;
  r.ratio = attained;
  r.verdict = c.chain_holds ? "chain: holds" : "chain: fails";
  r.doc["n"] = b.n;
  r.doc["p"] = b.p();
  r.doc["z_bar"] = vec_json(c.z_bar);
  r.doc["lambda"] = vec_json(c.lambda);
  r.doc["v_dcc"] = c.v_dcc;
  r.doc["gamma"] = c.gamma;
  r.doc["gamma_upper"] = c.gamma_upper;
  r.doc["interior_point"] = vec_json(c.interior_point);
  r.doc["lower"] = c.lower;
  r.doc["upper"] = c.upper;
  r.doc["witness"] = vec_json(c.witness);
  r.doc["guaranteed_ratio"] = c.guaranteed_ratio;
  r.doc["attained_ratio"] = attained;
  r.doc["translation_residual"] = c.translation_residual;
  r.doc["chain_holds"] = c.chain_holds;

  r.lines.push_back("kind: balls (n = " + std::to_string(b.n) + ", p = " + std::to_string(b.p()) +
                    ")");
  r.lines.push_back("center z: " + vec_text(c.z_bar));
  r.lines.push_back("weights: " + vec_text(c.lambda));
  r.lines.push_back("v_dcc: " + num(c.v_dcc));
  r.lines.push_back("gamma: " + num(c.gamma) + " (bound " + num(c.gamma_upper) + ")");
  r.lines.push_back("max over Omega of |x - z|^2 in [" + num(c.lower) + ", " + num(c.upper) + "]");
  r.lines.push_back("guaranteed ratio: " + num(c.guaranteed_ratio));
  r.lines.push_back("attained ratio lower / v_dcc: " + num(attained));
  r.lines.push_back("translation residual upper - v_dcc: " + num(c.translation_residual));
  r.lines.push_back(std::string("chain ratio * v_dcc <= lower <= upper <= v_dcc: ") +
                    (c.chain_holds ? "holds" : "FAILS"));
  if (!c.chain_holds) r.exit_code = kExitCertificate;
  finish(r);
  return r;
}

Report run_oracle(const Instance& inst, const RunOptions& o) {
  Report r = start("oracle", instance_kind(inst), o);
  if (const auto* b = std::get_if<BallIntersection>(&inst)) {
    const MinMaxResult m = grid_minmax_cc(*b, o.grid_h);
    r.value = m.value;
    r.doc["value"] = m.value;
    r.doc["z"] = vec_json(m.z);
    r.doc["h"] = m.h;
    r.doc["error_bound"] = m.error_bound;
    r.lines.push_back("grid min-max value: " + num(m.value) + " (error <= " +
                      num(m.error_bound) + ")");
    r.lines.push_back("grid center z: " + vec_text(m.z));
  } else if (const auto* ilp = std::get_if<IlpInstance>(&inst)) {
    const IlpEnumeration e = enumerate_ilp(*ilp);
    r.doc["feasible"] = e.feasible;
    r.doc["value"] = ext_json(e.value);
    r.doc["x"] = vec_json(e.x);
    r.doc["feasible_count"] = e.feasible_count;
    if (e.feasible) r.value = e.value;
    r.lines.push_back(e.feasible ? "enumerated optimum: " + num(e.value) + " at " + vec_text(e.x)
                                 : std::string("no feasible binary point"));
    r.lines.push_back("feasible points: " + std::to_string(e.feasible_count));
  } else if (const auto* u = std::get_if<UqInstance>(&inst)) {
    GridOptions g;
    g.h = o.grid_h;
    g.feas_tol = o.oracle_feas_tol;
    const GridResult gr = grid_max_uq(*u, g);
    r.value = gr.value;
    r.doc["value"] = gr.value;
    r.doc["argmax"] = vec_json(gr.argmax);
    r.doc["h"] = gr.h;
    r.doc["box"] = {{"lo", vec_json(gr.box.lo)}, {"hi", vec_json(gr.box.hi)}};
    r.doc["lipschitz"] = gr.lipschitz;
    r.doc["error_bound"] = gr.error_bound;
    r.doc["max_feas_tol"] = gr.max_feas_tol;
    r.doc["total_points"] = gr.total_points;
    r.doc["evaluated"] = gr.evaluated;
    r.lines.push_back("grid max: " + num(gr.value) + " at " + vec_text(gr.argmax));
    r.lines.push_back("h " + num(gr.h) + ", Lipschitz bound " + num(gr.lipschitz) +
                      ", error <= " + num(gr.error_bound) + ", row slack <= " +
                      num(gr.max_feas_tol));
    r.lines.push_back("points evaluated: " + std::to_string(gr.evaluated) + " of " +
                      num(gr.total_points));
    const SampleResult s = sample_max_uq(*u, gr.argmax, o.samples, o.seed,
                                         (gr.box.hi - gr.box.lo).maxCoeff() / 4.0);
    Json sj = Json::object();
    sj["count"] = o.samples;
    sj["accepted"] = s.accepted;
    sj["value"] = ext_json(s.value);
    r.doc["sample"] = sj;
    r.lines.push_back("sampled lower bound: " + num(s.value) + " (" + std::to_string(s.accepted) +
                      " of " + std::to_string(o.samples) + " accepted)");
  } else {
    throw Error(ErrorCode::kInvalidInput, "oracle does not handle qcqp instances");
  }
  finish(r);
  return r;
}

Instance run_reduce_ilp(const Instance& inst) {
  const auto* ilp = std::get_if<IlpInstance>(&inst);
  if (ilp == nullptr) {
    throw Error(ErrorCode::kInvalidInput,
                "reduce-ilp needs an ilp instance, got " + std::string(instance_kind(inst)));
  }
  return ilp_to_uq(*ilp);
}

}  // namespace hcvx
