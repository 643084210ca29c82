#pragma once

#include <functional>
#include <vector>

#include "qlocal/liouvillian.hpp"

namespace qlocal {

struct SolverConfig {
  // Base step: step_scale / (local strength bound * max neighbors), capped.
  double step_scale = 0.05;
  double max_step = 0.01;
  double step_override = 0;  // > 0 forces this base step
  double tol = 1e-9;         // target for the step-halving error estimate
  bool halving = true;
  int max_halvings = 8;
  int max_exact_sites = 10;  // refuse windows larger than 2^this dimensions
};

struct SolverStats {
  double step_used = 0;      // finest step of the accepted pass
  double err_estimate = 0;   // max-abs Richardson estimate (NaN if unavailable)
  int passes = 0;
  long rhs_evals = 0;

  void absorb(const SolverStats& other);  // keep the worst of both
};

using MatrixRhs = std::function<void(double, const Matrix&, Matrix&)>;

// Fixed-step 4th-order Runge-Kutta for dy/du = rhs(u, y), u from 0 to span,
// with steps aligned to `cuts` (ascending, interior). Runs repeated passes at
// halved steps until the pass-to-pass difference divided by 15 drops below
// solver.tol; returns the finest pass. Snapshots at the requested u values
// (ascending, within [0, span]) are taken from the finest pass.
Matrix integrate_fixed_rk4(const MatrixRhs& rhs, const Matrix& y0, double span,
                           const std::vector<double>& cuts,
                           const std::vector<double>& snaps,
                           std::vector<Matrix>* snaps_out, double h0,
                           const SolverConfig& solver, SolverStats* stats);

// Heisenberg evolution o(s) = tau_V(s, t)[o] for the truncated generator with
// supports inside v. o's region must contain every such support; needs s <= t.
Op evolve_observable(const LiouvillianSpec& spec, const Region& v, const Op& o,
                     double s, double t, const SolverConfig& solver = {},
                     SolverStats* stats = nullptr);

// tau_V(r, t_k)[o] for several final times t_k (ascending, all >= r) sharing
// one integration when the model is time-independent.
std::vector<Op> evolve_observable_sweep(const LiouvillianSpec& spec,
                                        const Region& v, const Op& o, double r,
                                        const std::vector<double>& t_values,
                                        const SolverConfig& solver = {},
                                        SolverStats* stats = nullptr);

// Schrodinger evolution of a density matrix from s to t. rho must be a state:
// Hermitian, unit trace, positive semidefinite (tolerance 1e-9).
Op propagate_state(const LiouvillianSpec& spec, const Region& v, const Op& rho,
                   double s, double t, const SolverConfig& solver = {},
                   SolverStats* stats = nullptr);

struct PairingResult {
  cxd heisenberg = 0;   // Tr[rho * tau(s,t) o]
  cxd schrodinger = 0;  // Tr[tau^dag(s,t) rho * o]
  double gap = 0;
};

// Duality of the two pictures on the full model.
PairingResult pairing_check(const LiouvillianSpec& spec, const Op& rho,
                            const Op& o, double s, double t,
                            const SolverConfig& solver = {});

// Dense Heisenberg propagator superoperator tau_V(s, t) on `window`
// (operator-space dimension guarded by kMaxSuperOpDim).
SuperOp materialize_propagator(const LiouvillianSpec& spec, const Region& v,
                               const Region& window, double s, double t,
                               const SolverConfig& solver = {},
                               SolverStats* stats = nullptr);

}  // namespace qlocal
