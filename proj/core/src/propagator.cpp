#include "qlocal/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Eigenvalues>

namespace qlocal {

namespace {

constexpr double kStateTol = 1e-9;

struct Segment {
  double u_lo = 0, u_hi = 0;
  long base_steps = 1;
};

struct PassOutput {
  Matrix y;
  std::vector<Matrix> snaps;
  long rhs_evals = 0;
};

// One fixed-step pass over precomputed segments; pass k uses base_steps * mult
// steps per segment so successive passes halve the step exactly. k1/k4
// evaluation times are nudged a hair into the step's interior so
// piecewise-constant coefficients are read from the correct side of a
// discontinuity.
PassOutput rk4_pass(const MatrixRhs& rhs, const Matrix& y0,
                    const std::vector<Segment>& segments,
                    const std::vector<double>& snaps, long mult) {
  PassOutput out;
  out.y = y0;
  Matrix k1, k2, k3, k4, ytmp;
  size_t snap_idx = 0;
  auto take_snaps = [&](double u) {
    while (snap_idx < snaps.size() && snaps[snap_idx] <= u + 1e-12 * (1 + u)) {
      out.snaps.push_back(out.y);
      ++snap_idx;
    }
  };
  take_snaps(0.0);
  for (const Segment& seg : segments) {
    const long nsteps = seg.base_steps * mult;
    const double hs = (seg.u_hi - seg.u_lo) / nsteps;
    const double nudge = 1e-9 * hs;
    for (long i = 0; i < nsteps; ++i) {
      const double u = seg.u_lo + i * hs;
      rhs(u + nudge, out.y, k1);
      ytmp = out.y + (0.5 * hs) * k1;
      rhs(u + 0.5 * hs, ytmp, k2);
      ytmp = out.y + (0.5 * hs) * k2;
      rhs(u + 0.5 * hs, ytmp, k3);
      ytmp = out.y + hs * k3;
      rhs(u + hs - nudge, ytmp, k4);
      out.y += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      out.rhs_evals += 4;
    }
    take_snaps(seg.u_hi);
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

void SolverStats::absorb(const SolverStats& other) {
  step_used = std::max(step_used, other.step_used);
  if (std::isnan(other.err_estimate) || std::isnan(err_estimate))
    err_estimate = std::numeric_limits<double>::quiet_NaN();
  else
    err_estimate = std::max(err_estimate, other.err_estimate);
  passes += other.passes;
  rhs_evals += other.rhs_evals;
}

Matrix integrate_fixed_rk4(const MatrixRhs& rhs, const Matrix& y0, double span,
                           const std::vector<double>& cuts,
                           const std::vector<double>& snaps,
                           std::vector<Matrix>* snaps_out, double h0,
                           const SolverConfig& solver, SolverStats* stats) {
  if (span < 0) throw precondition_error("integrate_fixed_rk4: negative span");
  SolverStats local;
  if (span == 0) {
    if (snaps_out) snaps_out->assign(snaps.size(), y0);
    if (stats) *stats = local;
    return y0;
  }
  std::set<double> pts{0.0, span};
  for (double c : cuts)
    if (c > 0 && c < span) pts.insert(c);
  for (double s : snaps) {
    if (s < -1e-12 || s > span * (1 + 1e-12))
      throw input_error("integrate_fixed_rk4: snapshot outside [0, span]");
    if (s > 0 && s < span) pts.insert(s);
  }
  const std::vector<double> points(pts.begin(), pts.end());
  const double h = std::min(h0, span);
  std::vector<Segment> segments;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    const double len = points[i + 1] - points[i];
    if (len <= 0) continue;
    Segment seg;
    seg.u_lo = points[i];
    seg.u_hi = points[i + 1];
    seg.base_steps =
        std::max<long>(1, static_cast<long>(std::ceil(len / h - 1e-9)));
    segments.push_back(seg);
  }

  long mult = 1;
  PassOutput fine = rk4_pass(rhs, y0, segments, snaps, mult);
  local.passes = 1;
  local.rhs_evals = fine.rhs_evals;
  local.step_used = h;
  local.err_estimate = std::numeric_limits<double>::quiet_NaN();
  if (solver.halving) {
    for (int k = 0; k < solver.max_halvings; ++k) {
      mult *= 2;
      PassOutput finer = rk4_pass(rhs, y0, segments, snaps, mult);
      ++local.passes;
      local.rhs_evals += finer.rhs_evals;
      double est = max_abs_diff(finer.y, fine.y) / 15.0;
      for (size_t i = 0; i < snaps.size(); ++i)
        est = std::max(est, max_abs_diff(finer.snaps[i], fine.snaps[i]) / 15.0);
      fine = std::move(finer);
      local.step_used = h / mult;
      local.err_estimate = est;
      if (est <= solver.tol) break;
    }
  }
  if (snaps_out) *snaps_out = std::move(fine.snaps);
  if (stats) *stats = local;
  return std::move(fine.y);
}

namespace {

double base_step(const CompiledLiouvillian& compiled, double t0, double t1,
                 const SolverConfig& solver) {
  if (solver.step_override > 0) return solver.step_override;
  const double strength =
      compiled.step_norm_bound(t0, t1) * compiled.included_max_neighbors();
  return std::min(solver.max_step,
                  solver.step_scale / std::max(strength, 1e-12));
}

void check_scale(const LiouvillianSpec& spec, const Region& window,
                 const SolverConfig& solver) {
  const long limit = 1L << solver.max_exact_sites;
  const long d = spec.dims.total_dim(window);
  if (d > limit)
    throw precondition_error(
        "window dimension " + std::to_string(d) + " exceeds the exact-scale "
        "limit 2^" + std::to_string(solver.max_exact_sites) +
        "; raise max_exact_sites to override");
}

}  // namespace

Op evolve_observable(const LiouvillianSpec& spec, const Region& v, const Op& o,
                     double s, double t, const SolverConfig& solver,
                     SolverStats* stats) {
  if (t < s) throw precondition_error("evolve_observable: need s <= t");
  check_scale(spec, o.region, solver);
  if (stats) *stats = SolverStats{};
  if (t == s) return o;
  CompiledLiouvillian compiled(spec, v, o.region);
  const double span = t - s;
  std::vector<double> cuts;
  for (double b : compiled.breakpoints(s, t)) cuts.push_back(t - b);
  std::sort(cuts.begin(), cuts.end());
  const MatrixRhs rhs = [&](double u, const Matrix& y, Matrix& out) {
    compiled.apply(t - u, y, out);
  };
  Matrix y = integrate_fixed_rk4(rhs, o.mat, span, cuts, {}, nullptr,
                                 base_step(compiled, s, t, solver), solver, stats);
  return Op{o.region, o.dims, std::move(y)};
}

std::vector<Op> evolve_observable_sweep(const LiouvillianSpec& spec,
                                        const Region& v, const Op& o, double r,
                                        const std::vector<double>& t_values,
                                        const SolverConfig& solver,
                                        SolverStats* stats) {
  if (stats) *stats = SolverStats{};
  if (t_values.empty()) return {};
  for (size_t i = 0; i < t_values.size(); ++i) {
    if (t_values[i] < r)
      throw precondition_error("evolve_observable_sweep: time before start");
    if (i > 0 && t_values[i] < t_values[i - 1])
      throw input_error("evolve_observable_sweep: times must ascend");
  }
  check_scale(spec, o.region, solver);
  CompiledLiouvillian compiled(spec, v, o.region);

  if (!compiled.time_independent()) {
    std::vector<Op> out;
    out.reserve(t_values.size());
    for (double t : t_values) {
      SolverStats one;
      out.push_back(evolve_observable(spec, v, o, r, t, solver, &one));
      if (stats) stats->absorb(one);
    }
    return out;
  }

  // Time-independent: tau(r, t) = exp((t-r) L), one forward integration with
  // snapshots at every requested offset.
  const double span = t_values.back() - r;
  std::vector<double> snaps;
  snaps.reserve(t_values.size());
  for (double t : t_values) snaps.push_back(t - r);
  const MatrixRhs rhs = [&](double, const Matrix& y, Matrix& out) {
    compiled.apply(r, y, out);
  };
  std::vector<Matrix> snap_mats;
  integrate_fixed_rk4(rhs, o.mat, span, {}, snaps, &snap_mats,
                      base_step(compiled, r, t_values.back(), solver), solver,
                      stats);
  std::vector<Op> out;
  out.reserve(snap_mats.size());
  for (auto& m : snap_mats) out.push_back(Op{o.region, o.dims, std::move(m)});
  return out;
}

Op propagate_state(const LiouvillianSpec& spec, const Region& v, const Op& rho,
                   double s, double t, const SolverConfig& solver,
                   SolverStats* stats) {
  if (t < s) throw precondition_error("propagate_state: need s <= t");
  check_scale(spec, rho.region, solver);
  const Matrix& m = rho.mat;
  const double herm_dev = (m - Matrix(m.adjoint())).cwiseAbs().maxCoeff();
  if (herm_dev > kStateTol)
    throw input_error("propagate_state: rho is not Hermitian");
  if (std::abs(m.trace() - cxd(1, 0)) > kStateTol)
    throw input_error("propagate_state: rho does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + Matrix(m.adjoint())),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kStateTol)
    throw input_error("propagate_state: rho is not positive semidefinite");

  if (stats) *stats = SolverStats{};
  if (t == s) return rho;
  CompiledLiouvillian compiled(spec, v, rho.region);
  const std::vector<double> sigma_cuts = compiled.breakpoints(s, t);
  std::vector<double> cuts;
  for (double b : sigma_cuts) cuts.push_back(b - s);
  const MatrixRhs rhs = [&](double u, const Matrix& y, Matrix& out) {
    compiled.apply_adjoint(s + u, y, out);
  };
  Matrix y = integrate_fixed_rk4(rhs, rho.mat, t - s, cuts, {}, nullptr,
                                 base_step(compiled, s, t, solver), solver, stats);
  return Op{rho.region, rho.dims, std::move(y)};
}

PairingResult pairing_check(const LiouvillianSpec& spec, const Op& rho,
                            const Op& o, double s, double t,
                            const SolverConfig& solver) {
  Region window = region_union(rho.region, o.region);
  for (const auto& term : spec.terms)
    window = region_union(window, term.support);
  const Op rho_w = embed(rho, window, spec.dims);
  const Op o_w = embed(o, window, spec.dims);
  const Region v = spec.geometry.all_sites();

  const Op o_back = evolve_observable(spec, v, o_w, s, t, solver);
  const Op rho_fwd = propagate_state(spec, v, rho_w, s, t, solver);
  PairingResult res;
  res.heisenberg = (rho_w.mat * o_back.mat).trace();
  res.schrodinger = (rho_fwd.mat * o_w.mat).trace();
  res.gap = std::abs(res.heisenberg - res.schrodinger);
  return res;
}

SuperOp materialize_propagator(const LiouvillianSpec& spec, const Region& v,
                               const Region& window, double s, double t,
                               const SolverConfig& solver, SolverStats* stats) {
  if (t < s) throw precondition_error("materialize_propagator: need s <= t");
  const long d = spec.dims.total_dim(window);
  if (d * d > kMaxSuperOpDim)
    throw precondition_error("materialize_propagator: window too large");

  std::vector<std::pair<Matrix, TimeProfile>> parts;
  std::set<double> sigma_cuts;
  for (const auto& term : spec.terms) {
    if (!v.contains(term.support)) continue;
    if (!window.contains(term.support))
      throw input_error("materialize_propagator: window must contain " +
                        to_string(term.support));
    parts.emplace_back(term_superop_base(term, spec.dims, window).mat,
                       term.profile);
    for (double b : term.profile.breakpoints_in(s, t)) sigma_cuts.insert(b);
  }
  if (stats) *stats = SolverStats{};
  const Matrix id = Matrix::Identity(d * d, d * d);
  // Zero span or an empty truncated generator both give the identity channel.
  if (t == s || parts.empty()) return make_superop(window, spec.dims, id);

  bool ti = true;
  for (const auto& p : parts) ti = ti && p.second.is_constant();
  Matrix s_const;
  if (ti) {
    s_const = Matrix::Zero(d * d, d * d);
    for (const auto& p : parts) s_const += p.second.value(s) * p.first;
  }
  Matrix s_work;
  const MatrixRhs rhs = [&](double u, const Matrix& y, Matrix& out) {
    if (ti) {
      out.noalias() = s_const * y;
      return;
    }
    const double sigma = t - u;
    s_work = Matrix::Zero(d * d, d * d);
    for (const auto& p : parts) s_work += p.second.value(sigma) * p.first;
    out.noalias() = s_work * y;
  };
  std::vector<double> cuts;
  for (double b : sigma_cuts) cuts.push_back(t - b);
  std::sort(cuts.begin(), cuts.end());

  double strength = 0;
  for (const auto& p : parts)
    strength = std::max(strength, inf_norm(p.first) * p.second.sup_abs(s, t));
  double h0 = solver.step_override > 0
                  ? solver.step_override
                  : std::min(solver.max_step,
                             solver.step_scale / std::max(strength, 1e-12));
  Matrix y = integrate_fixed_rk4(rhs, id, t - s, cuts, {}, nullptr, h0, solver,
                                 stats);
  return make_superop(window, spec.dims, std::move(y));
}

}  // namespace qlocal
